"""Read-only model and profile registries loaded once at startup."""

from __future__ import annotations

from dataclasses import dataclass, field

from torch import nn

from moodsheet.models import load_checkpoint
from moodsheet.profile import ConditionProfile, load_profile
from moodsheet.service.settings import ServiceSettings
from moodsheet.tokenizer import Vocabulary

__all__ = ["ServiceState", "load_state"]


@dataclass
class ServiceState:
    """Everything a request handler may read; nothing here is mutated."""

    vocab: Vocabulary
    models: dict[str, nn.Module] = field(default_factory=dict)
    profiles: dict[str, ConditionProfile] = field(default_factory=dict)


def load_state(settings: ServiceSettings) -> ServiceState:
    vocab = Vocabulary.load(settings.vocab_path)
    models = {
        path.stem: load_checkpoint(path, vocab)
        for path in sorted(settings.model_dir.glob("*.pt"))
    }
    profiles = {
        path.stem: load_profile(path)
        for path in sorted(settings.profile_dir.glob("*.json"))
    }
    return ServiceState(vocab=vocab, models=models, profiles=profiles)
