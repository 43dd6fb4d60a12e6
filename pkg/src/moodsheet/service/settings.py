"""Service configuration from a JSON file with environment overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

__all__ = ["ServiceSettings", "load_settings", "settings_from_mapping"]

_ENV_PREFIX = "MOODSHEET_"
_KNOWN_KEYS = {"vocab", "model_dir", "profile_dir", "host", "port"}


@dataclass(frozen=True)
class ServiceSettings:
    vocab_path: Path
    model_dir: Path
    profile_dir: Path
    host: str = "127.0.0.1"
    port: int = 8000


def settings_from_mapping(
    raw: Mapping[str, object],
    base: Path,
    env: Mapping[str, str] = os.environ,
) -> ServiceSettings:
    """Build settings from already-parsed config values.

    Relative paths resolve against ``base``; MOODSHEET_* variables win
    over config values, which win over defaults.
    """
    unknown = set(raw) - _KNOWN_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    def path_of(key: str, env_name: str, default: str) -> Path:
        if _ENV_PREFIX + env_name in env:
            return Path(env[_ENV_PREFIX + env_name])
        if key in raw:
            return base / str(raw[key])
        return base / default

    settings = ServiceSettings(
        vocab_path=path_of("vocab", "VOCAB", "vocab.json"),
        model_dir=path_of("model_dir", "MODEL_DIR", "models"),
        profile_dir=path_of("profile_dir", "PROFILE_DIR", "profiles"),
        host=str(env.get(_ENV_PREFIX + "HOST", raw.get("host", "127.0.0.1"))),
        port=int(env.get(_ENV_PREFIX + "PORT", raw.get("port", 8000))),
    )
    if not 0 < settings.port < 65536:
        raise ValueError(f"port {settings.port} out of range")
    return settings


def load_settings(
    config_path: str | Path | None = None,
    env: Mapping[str, str] = os.environ,
) -> ServiceSettings:
    """Read settings from JSON, then let MOODSHEET_* variables override."""
    raw: dict = {}
    if config_path is not None:
        raw = json.loads(Path(config_path).read_text())
    base = Path(config_path).parent if config_path is not None else Path(".")
    return settings_from_mapping(raw, base, env)
