"""Versioned model checkpoints tied to a vocabulary hash."""

from __future__ import annotations

from pathlib import Path

import torch
from torch import nn

from moodsheet.models.config import ModelConfig
from moodsheet.models.factory import build_model
from moodsheet.tokenizer import Vocabulary

FORMAT = "moodsheet-checkpoint"
VERSION = 1

__all__ = ["CheckpointError", "save_checkpoint", "load_checkpoint"]


class CheckpointError(ValueError):
    pass


def save_checkpoint(path: str | Path, model: nn.Module, vocab: Vocabulary) -> None:
    payload = {
        "format": FORMAT,
        "version": VERSION,
        "config": model.config.to_dict(),
        "vocab_hash": vocab.content_hash(),
        "state_dict": model.state_dict(),
    }
    torch.save(payload, Path(path))


def load_checkpoint(path: str | Path, vocab: Vocabulary) -> nn.Module:
    try:
        payload = torch.load(Path(path), map_location="cpu", weights_only=True)
    except Exception as exc:
        raise CheckpointError(f"unreadable checkpoint: {exc}") from exc
    if payload.get("format") != FORMAT:
        raise CheckpointError("not a model checkpoint")
    if payload.get("version") != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {payload.get('version')!r}")
    if payload["vocab_hash"] != vocab.content_hash():
        raise CheckpointError("checkpoint was trained with a different vocabulary")
    model = build_model(ModelConfig.from_dict(payload["config"]), vocab)
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model
