"""Model construction and bookkeeping shared by CLI, service, and tests."""

from __future__ import annotations

from torch import nn

from moodsheet.models.config import ModelConfig
from moodsheet.models.lstm import LstmSeq2Seq
from moodsheet.models.transformer import TransformerSeq2Seq
from moodsheet.tokenizer import Vocabulary


def build_model(config: ModelConfig, vocab: Vocabulary) -> nn.Module:
    if config.architecture == "lstm":
        return LstmSeq2Seq(config, vocab.encoder_size(), vocab.decoder_size())
    return TransformerSeq2Seq(config, vocab.encoder_size(), vocab.decoder_size())


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
