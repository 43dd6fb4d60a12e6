"""HTTP service: app factory, registries, settings, and wire schemas."""

from moodsheet.service.app import create_app
from moodsheet.service.registry import ServiceState, load_state
from moodsheet.service.schemas import SCHEMA_VERSION
from moodsheet.service.settings import ServiceSettings, load_settings

__all__ = [
    "SCHEMA_VERSION",
    "ServiceSettings",
    "ServiceState",
    "create_app",
    "load_settings",
    "load_state",
]
