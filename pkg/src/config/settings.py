"""
Runtime settings for the bound calculator

Sources, highest precedence first: explicit overrides (CLI flags),
an optional flat KEY=VALUE config file, the process environment
(including the project .env), built-in defaults.
"""
import os
from pathlib import Path
from typing import Dict, Optional, Union

from dotenv import dotenv_values, load_dotenv

# Load .env from project root
project_root = Path(__file__).parent.parent.parent
env_path = project_root / ".env"
load_dotenv(dotenv_path=env_path)

ENV_PREFIX = "BGRD_"

DEFAULTS: Dict[str, str] = {
    "WORKERS": "1",
    "LOG_LEVEL": "INFO",
    "L_GRID_POINTS": "400",
    "U_GRID_POINTS": "200",
    "U_MAX": "8.0",
    "REFINE_ITERS": "60",
    "TOL": "1e-5",
    "SEED": "0",
}


def _normalize_key(key: str) -> str:
    key = key.strip().upper().replace("-", "_")
    if key.startswith(ENV_PREFIX):
        key = key[len(ENV_PREFIX):]
    return key


class Settings:
    def __init__(
        self,
        config_path: Optional[Union[str, Path]] = None,
        overrides: Optional[Dict[str, object]] = None
    ):
        """
        Resolve settings from all sources

        Args:
            config_path: Optional flat KEY=VALUE file (keys with or without BGRD_ prefix)
            overrides: Values from CLI flags; None entries are ignored

        Raises:
            ValueError: If config_path is given but does not exist
        """
        self.config_path = Path(config_path) if config_path else None
        self.file_values: Dict[str, str] = {}

        if self.config_path is not None:
            if not self.config_path.exists():
                raise ValueError(f"config file not found: {self.config_path}")
            raw = dotenv_values(self.config_path)
            self.file_values = {
                _normalize_key(k): v for k, v in raw.items() if v is not None
            }

        self.overrides: Dict[str, str] = {
            _normalize_key(k): str(v)
            for k, v in (overrides or {}).items()
            if v is not None
        }

    def get(self, key: str) -> Optional[str]:
        key = _normalize_key(key)
        if key in self.overrides:
            return self.overrides[key]
        if key in self.file_values:
            return self.file_values[key]
        env_value = os.getenv(ENV_PREFIX + key)
        if env_value is not None and env_value != "":
            return env_value
        return DEFAULTS.get(key)

    def get_int(self, key: str) -> int:
        value = self.get(key)
        try:
            return int(value)
        except (TypeError, ValueError):
            raise ValueError(f"setting {key} must be an integer, got {value!r}")

    def get_float(self, key: str) -> float:
        value = self.get(key)
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ValueError(f"setting {key} must be a number, got {value!r}")

    @property
    def workers(self) -> int:
        return max(1, self.get_int("WORKERS"))

    @property
    def log_level(self) -> str:
        return (self.get("LOG_LEVEL") or "INFO").upper()

    @property
    def seed(self) -> int:
        return self.get_int("SEED")

    def minimax_overrides(self) -> Dict[str, object]:
        """Keyword arguments for MinimaxConfig built from these settings"""
        return {
            "L_grid_points": self.get_int("L_GRID_POINTS"),
            "U_grid_points": self.get_int("U_GRID_POINTS"),
            "U_max": self.get_float("U_MAX"),
            "refine_iters": self.get_int("REFINE_ITERS"),
            "tol": self.get_float("TOL"),
        }
