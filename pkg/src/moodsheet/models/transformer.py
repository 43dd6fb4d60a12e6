"""Vanilla encoder-decoder transformer with sinusoidal positions."""

from __future__ import annotations

import math

import torch
from torch import Tensor, nn

from moodsheet.models.config import ModelConfig


def sinusoidal_positions(max_len: int, width: int) -> Tensor:
    position = torch.arange(max_len, dtype=torch.float32).unsqueeze(1)
    div = torch.exp(torch.arange(0, width, 2, dtype=torch.float32) * (-math.log(10000.0) / width))
    table = torch.zeros(max_len, width)
    table[:, 0::2] = torch.sin(position * div)
    table[:, 1::2] = torch.cos(position * div)
    return table


class TransformerSeq2Seq(nn.Module):
    def __init__(self, config: ModelConfig, encoder_vocab: int, decoder_vocab: int):
        super().__init__()
        if config.architecture != "transformer":
            raise ValueError("config is not a transformer config")
        self.config = config
        width = config.embedding
        self.src_embed = nn.Embedding(encoder_vocab, width, padding_idx=0)
        self.tgt_embed = nn.Embedding(decoder_vocab, width, padding_idx=0)
        self.register_buffer("positions", sinusoidal_positions(config.max_len, width))
        self.dropout = nn.Dropout(config.dropout)
        encoder_layer = nn.TransformerEncoderLayer(
            d_model=width,
            nhead=config.heads,
            dim_feedforward=config.feedforward,
            dropout=config.dropout,
            batch_first=True,
        )
        decoder_layer = nn.TransformerDecoderLayer(
            d_model=width,
            nhead=config.heads,
            dim_feedforward=config.feedforward,
            dropout=config.dropout,
            batch_first=True,
        )
        self.encoder = nn.TransformerEncoder(
            encoder_layer, config.enc_layers, enable_nested_tensor=False
        )
        self.decoder = nn.TransformerDecoder(decoder_layer, config.dec_layers)
        self.out = nn.Linear(width, decoder_vocab)
        self.scale = math.sqrt(width)

    def _embed(self, table: nn.Embedding, ids: Tensor) -> Tensor:
        length = ids.size(1)
        if length > self.config.max_len:
            raise ValueError(
                f"sequence length {length} exceeds positional table ({self.config.max_len})"
            )
        return self.dropout(table(ids) * self.scale + self.positions[:length])

    def encode(self, src: Tensor, src_lengths: Tensor) -> dict:
        padding = src.eq(0)
        memory = self.encoder(self._embed(self.src_embed, src), src_key_padding_mask=padding)
        return {"memory": memory, "padding": padding}

    def decode_logits(self, state: dict, tgt_in: Tensor) -> Tensor:
        causal = torch.triu(
            torch.ones(tgt_in.size(1), tgt_in.size(1), dtype=torch.bool, device=tgt_in.device),
            diagonal=1,
        )
        output = self.decoder(
            self._embed(self.tgt_embed, tgt_in),
            state["memory"],
            tgt_mask=causal,
            tgt_key_padding_mask=tgt_in.eq(0),
            memory_key_padding_mask=state["padding"],
        )
        return self.out(output)

    def forward(self, src: Tensor, src_lengths: Tensor, tgt_in: Tensor) -> Tensor:
        return self.decode_logits(self.encode(src, src_lengths), tgt_in)

    # -- incremental decoding (prefix recompute; fine at desk scale) ---

    def init_decode(self, src: Tensor, src_lengths: Tensor):
        state = self.encode(src, src_lengths)
        state["prefix"] = []
        return state

    def step(self, state, prev_token: Tensor) -> tuple[Tensor, dict]:
        state["prefix"].append(prev_token)
        tgt_in = torch.stack(state["prefix"], dim=1)
        logits = self.decode_logits(state, tgt_in)
        return logits[:, -1], state
