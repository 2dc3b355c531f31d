"""
Entry point for running grouplen as a module.

Usage: python -m grouplen <analyze|verify|construct> ...
"""

import sys

from .src.core.errors import GroupLenError
from .src.main import main
from .src.utils.logger import setup_logger

logger = setup_logger("grouplen")

if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("Interrupted.", file=sys.stderr)
        sys.exit(130)
    except GroupLenError as e:
        print(f"error: {e}", file=sys.stderr)
        sys.exit(2)
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        sys.exit(1)
