"""Provides the defaults from configuration files"""

import os
from typing import Any
from pathlib import Path

from diot import Diot
from simpleconf import Config

from .defaults import DUALPROBE_DIR

DEFAULT_CONFIG_FILE = DUALPROBE_DIR / "core" / "config.toml"
USER_CONFIG_FILE = Path("~").expanduser() / ".dualprobe.toml"
PROJ_CONFIG_FILE = Path(".") / ".dualprobe.toml"
SEED_ENV = "DUALPROBE_SEED"


class ConfigItems(Diot):
    """Provides the defaults from configuration files and defaults the
    non-existing values to None."""

    def __getattr__(self, name: str) -> Any:
        try:
            return super().__getattr__(name)
        except (KeyError, AttributeError):
            return None

    def __getitem__(self, name: str) -> Any:
        try:
            return super().__getitem__(name)
        except (KeyError, AttributeError):
            return None


def _env_profile() -> dict:
    """Build the profile from environment variables"""
    seed = os.environ.get(SEED_ENV)
    if seed is None or not seed.strip():
        return {}
    return {"measure": {"seed": int(seed)}}


config_profiles = [
    DEFAULT_CONFIG_FILE,
    USER_CONFIG_FILE,
    PROJ_CONFIG_FILE,
    _env_profile(),
]

config = ConfigItems(Config.load(*config_profiles, ignore_nonexist=True))
