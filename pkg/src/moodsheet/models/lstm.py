"""Bidirectional LSTM encoder feeding an LSTM decoder through a state bridge.

No attention: the encoder's final layer state, directions concatenated,
is projected once and used to initialize every decoder layer.
"""

from __future__ import annotations

import torch
from torch import Tensor, nn

from moodsheet.models.config import ModelConfig


class LstmSeq2Seq(nn.Module):
    def __init__(self, config: ModelConfig, encoder_vocab: int, decoder_vocab: int):
        super().__init__()
        if config.architecture != "lstm":
            raise ValueError("config is not an lstm config")
        self.config = config
        inner_dropout = config.dropout if config.enc_layers > 1 else 0.0
        self.src_embed = nn.Embedding(encoder_vocab, config.embedding, padding_idx=0)
        self.encoder = nn.LSTM(
            config.embedding,
            config.enc_hidden,
            num_layers=config.enc_layers,
            batch_first=True,
            bidirectional=True,
            dropout=inner_dropout,
        )
        self.bridge_h = nn.Linear(2 * config.enc_hidden, config.dec_hidden)
        self.bridge_c = nn.Linear(2 * config.enc_hidden, config.dec_hidden)
        self.tgt_embed = nn.Embedding(decoder_vocab, config.embedding, padding_idx=0)
        self.decoder = nn.LSTM(
            config.embedding,
            config.dec_hidden,
            num_layers=config.dec_layers,
            batch_first=True,
            dropout=config.dropout if config.dec_layers > 1 else 0.0,
        )
        self.dropout = nn.Dropout(config.dropout)
        self.out = nn.Linear(config.dec_hidden, decoder_vocab)
        self._init_weights()

    def _init_weights(self) -> None:
        for name, param in self.named_parameters():
            if param.dim() >= 2:
                nn.init.xavier_uniform_(param)
            elif "bias" in name:
                nn.init.zeros_(param)
        with torch.no_grad():
            self.src_embed.weight[0].zero_()
            self.tgt_embed.weight[0].zero_()

    def encode(self, src: Tensor, src_lengths: Tensor) -> tuple[Tensor, Tensor]:
        """Initial decoder (h, c) from the packed encoder pass."""
        embedded = self.dropout(self.src_embed(src))
        packed = nn.utils.rnn.pack_padded_sequence(
            embedded, src_lengths.cpu(), batch_first=True, enforce_sorted=False
        )
        _, (h, c) = self.encoder(packed)
        # h: [layers * 2, B, H] -> last layer's two directions side by side
        layers = self.config.enc_layers
        h = h.view(layers, 2, -1, self.config.enc_hidden)[-1]
        c = c.view(layers, 2, -1, self.config.enc_hidden)[-1]
        h = torch.cat([h[0], h[1]], dim=-1)
        c = torch.cat([c[0], c[1]], dim=-1)
        h0 = torch.tanh(self.bridge_h(h)).unsqueeze(0).repeat(self.config.dec_layers, 1, 1)
        c0 = torch.tanh(self.bridge_c(c)).unsqueeze(0).repeat(self.config.dec_layers, 1, 1)
        return h0.contiguous(), c0.contiguous()

    def decode_logits(self, state: tuple[Tensor, Tensor], tgt_in: Tensor) -> Tensor:
        embedded = self.dropout(self.tgt_embed(tgt_in))
        outputs, _ = self.decoder(embedded, state)
        return self.out(self.dropout(outputs))

    def forward(self, src: Tensor, src_lengths: Tensor, tgt_in: Tensor) -> Tensor:
        return self.decode_logits(self.encode(src, src_lengths), tgt_in)

    # -- incremental decoding -----------------------------------------

    def init_decode(self, src: Tensor, src_lengths: Tensor):
        return self.encode(src, src_lengths)

    def step(self, state, prev_token: Tensor) -> tuple[Tensor, tuple[Tensor, Tensor]]:
        """One decoder step; prev_token shaped [B]."""
        embedded = self.tgt_embed(prev_token.unsqueeze(1))
        output, next_state = self.decoder(embedded, state)
        return self.out(output[:, 0]), next_state
