import logging
from dotenv import load_dotenv

load_dotenv()

"""
Default configuration for grouplen.
These are the baseline values that can be overridden by GROUPLEN_* environment
variables, local/config_override.yml and a JSON config passed to `verify`.
"""

class DefaultConfig:
    # Logging
    LOG_LEVEL = logging.INFO

    # Resource caps (every capped operation fails loudly, naming the cap)
    ELEMENT_CAP = 200_000          # element enumeration / element tables
    SUBGROUP_CAP = 400             # subgroup lattice enumeration
    CLASS_CAP = 24                 # normal-subgroup enumeration by class closures
    DEGREE_CAP = 10_000            # coset actions and affine groups
    CHOP_CAP = 512                 # MeatAxe input dimension
    REGULAR_MODULE_CAP = 400

    # Randomised routines are seeded; same seed -> same output
    SEED = 0
    MEATAXE_RETRIES = 64
    GAMMA_MAX_STEPS = 64

    # Counterexample chain
    CHAIN_DIRECT_CHECK_ORDER = 5000   # above this, chain facts are certified from BSGS data
    CHAIN_PRIME_BOUND = 100

    # Harness defaults
    DEFAULT_PRIMES = [2, 3, 5, 7]
    DEFAULT_SIGMA = "*"
    VERIFY_WORKERS = 1
    RECORD_TIMING = False
    CHAIN_WITNESS_MAX_N = 2
    PCLOSED_HEIGHT_BOUND = 3
