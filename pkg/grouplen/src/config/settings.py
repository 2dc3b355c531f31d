import json
import yaml
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from .default_settings import DefaultConfig

ENV_PREFIX = "GROUPLEN_"


class SettingsManager:
    """
    Manages application configuration with support for:
    - Default settings (from default_settings.py)
    - Environment overrides (GROUPLEN_<KEY>, .env honoured via python-dotenv)
    - User overrides (from local/config_override.yml)
    - Runtime overrides (JSON config handed to `verify`)
    """

    def __init__(self, override_file: Optional[Path] = None):
        self.logger = logging.getLogger(__name__)
        self.config: Dict[str, Any] = {}
        self.runtime_overrides: Dict[str, Any] = {}

        self.local_dir = Path(__file__).parent.parent.parent / "local"
        self.override_file = override_file or self.local_dir / "config_override.yml"

        self._load_configuration()

    def _load_configuration(self):
        """Load the layered configuration."""
        self.config.clear()
        # Layer 1: Load defaults from DefaultConfig
        self._load_defaults()

        # Layer 2: Environment variables
        self._load_environment()

        # Layer 3: Load and merge user overrides
        self._load_overrides()

    def _load_defaults(self):
        """Load default configuration from DefaultConfig class."""
        for key in dir(DefaultConfig):
            if not key.startswith('_'):
                self.config[key] = getattr(DefaultConfig, key)

    def _load_environment(self):
        """Apply GROUPLEN_<KEY> variables, coerced to the type of the default."""
        for key, default in list(self.config.items()):
            raw = os.getenv(f"{ENV_PREFIX}{key}")
            if raw is None:
                continue
            try:
                self.config[key] = _coerce(raw, default)
                self.logger.debug(f"Environment override: {key}")
            except ValueError as e:
                self.logger.error(f"Ignoring {ENV_PREFIX}{key}={raw!r}: {e}")

    def _load_overrides(self):
        """Load user overrides from config_override.yml if it exists."""
        if self.override_file.exists():
            try:
                with open(self.override_file, 'r', encoding='utf-8') as f:
                    overrides = yaml.safe_load(f)
                    if overrides:
                        self.config.update({str(k).upper(): v for k, v in overrides.items()})
                        self.logger.debug(f"Loaded overrides: {list(overrides.keys())}")
            except Exception as e:
                self.logger.error(f"Failed to load config_override.yml: {e}")

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value."""
        return self.config.get(key, default)

    def set(self, key: str, value: Any, persist: bool = False) -> bool:
        """
        Set a configuration value.

        Returns:
            bool: True if successful, False otherwise
        """
        try:
            self.config[key] = value
            if persist:
                self._save_override(key, value)
            return True
        except Exception as e:
            self.logger.error(f"Failed to set {key}: {e}")
            return False

    def apply_overrides(self, overrides: Mapping[str, Any]) -> Dict[str, Any]:
        """
        Apply runtime overrides given with lower- or upper-case key names.

        Unknown keys raise KeyError so typos in a JSON config do not pass silently.

        Returns:
            dict: the normalised overrides that were applied
        """
        applied: Dict[str, Any] = {}
        for key, value in overrides.items():
            name = str(key).upper()
            if name not in self.config:
                raise KeyError(f"Unknown configuration key '{key}'")
            self.config[name] = value
            applied[name] = value
        self.runtime_overrides.update(applied)
        return applied

    def load_json(self, path: Path) -> Dict[str, Any]:
        """Read a JSON config file and apply it as runtime overrides."""
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: top-level JSON value must be an object")
        return self.apply_overrides(data)

    def reset(self):
        """Drop runtime overrides and reload every layer."""
        self.runtime_overrides.clear()
        self._load_configuration()

    def snapshot(self) -> Dict[str, Any]:
        """Plain copy of the current configuration (picklable, for worker processes)."""
        return dict(self.config)

    def _save_override(self, key: str, value: Any):
        """Save a configuration override to config_override.yml."""
        overrides = {}

        if self.override_file.exists():
            try:
                with open(self.override_file, 'r', encoding='utf-8') as f:
                    existing_overrides = yaml.safe_load(f)
                    if existing_overrides:
                        overrides = existing_overrides
            except Exception as e:
                self.logger.error(f"Failed to load existing overrides: {e}")

        overrides[key] = value

        try:
            self.override_file.parent.mkdir(parents=True, exist_ok=True)
            with open(self.override_file, 'w', encoding='utf-8') as f:
                yaml.dump(overrides, f, indent=2, allow_unicode=True)
            self.logger.debug(f"Saved override: {key} = {value}")
        except Exception as e:
            self.logger.error(f"Failed to save override: {e}")

    def __getattr__(self, name: str) -> Any:
        """Allow attribute-style access to configuration values."""
        config = self.__dict__.get('config', {})
        if name in config:
            return config[name]
        raise AttributeError(f"Configuration key '{name}' not found")

    def log_config(self, logger):
        """Logs the current configuration."""
        logger.info("--- Configuration ---")
        for key, value in sorted(self.config.items()):
            marker = " (runtime)" if key in self.runtime_overrides else ""
            logger.info(f"  {key}: {value}{marker}")
        logger.info("---------------------")


def _coerce(raw: str, default: Any) -> Any:
    """Parse an environment string into the type of the default value."""
    if isinstance(default, bool):
        lowered = raw.strip().lower()
        if lowered in ('1', 'true', 'yes', 'on'):
            return True
        if lowered in ('0', 'false', 'no', 'off'):
            return False
        raise ValueError("expected a boolean")
    if isinstance(default, int):
        text = raw.strip()
        if not text.lstrip('-').isdigit():
            # Level names such as DEBUG or WARNING
            level = logging.getLevelName(text.upper())
            if isinstance(level, int):
                return level
        return int(text)
    if isinstance(default, list):
        return [int(part) for part in raw.split(',') if part.strip()]
    return raw


# Create a global instance
Config = SettingsManager()
