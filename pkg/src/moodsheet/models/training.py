"""Teacher-forced training: Adam, cross-entropy, gradient clipping."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import torch
from torch import Tensor, nn

from moodsheet.models.config import TrainConfig
from moodsheet.score import LeadSheet
from moodsheet.tokenizer import Vocabulary, conditions_of, encode_conditions, encode_leadsheet

__all__ = ["TrainResult", "TrainingDivergedError", "make_pairs", "train_model", "pad_batch", "sequence_loss"]


class TrainingDivergedError(RuntimeError):
    def __init__(self, epoch: int, batch: int, loss: float):
        super().__init__(f"non-finite loss {loss!r} at epoch {epoch}, batch {batch}")
        self.epoch = epoch
        self.batch = batch


@dataclass
class TrainResult:
    loss_history: list[float]
    final_loss: float
    epochs_run: int


Pair = tuple[tuple[int, ...], tuple[int, ...]]


def make_pairs(sheets: list[LeadSheet], vocab: Vocabulary) -> list[Pair]:
    """(encoder ids, decoder ids) for each sheet."""
    pairs = []
    for ls in sheets:
        enc = encode_conditions(conditions_of(ls), vocab)
        dec = encode_leadsheet(ls, vocab)
        pairs.append((enc.ids, dec.ids))
    return pairs


def pad_batch(rows: list[tuple[int, ...]], pad_id: int = 0) -> tuple[Tensor, Tensor]:
    """Right-pad to the longest row; returns (ids, lengths)."""
    lengths = torch.tensor([len(r) for r in rows], dtype=torch.long)
    width = int(lengths.max())
    ids = torch.full((len(rows), width), pad_id, dtype=torch.long)
    for i, row in enumerate(rows):
        ids[i, : len(row)] = torch.tensor(row, dtype=torch.long)
    return ids, lengths


def sequence_loss(logits: Tensor, targets: Tensor) -> Tensor:
    """Mean token cross-entropy ignoring padding."""
    criterion = nn.CrossEntropyLoss(ignore_index=0)
    return criterion(logits.reshape(-1, logits.size(-1)), targets.reshape(-1))


def train_model(model: nn.Module, pairs: list[Pair], tc: TrainConfig) -> TrainResult:
    """Minimize next-token cross-entropy with the gold prefix as input.

    Deterministic for a fixed seed: parameter init happens before this
    call, but batch order, dropout, and optimizer state are all driven
    by the seed set here.  Aborts on the first non-finite loss.
    """
    if not pairs:
        raise ValueError("training corpus is empty")
    max_len = model.config.max_len
    for enc, dec in pairs:
        if len(enc) > max_len or len(dec) > max_len:
            raise ValueError(f"sequence longer than the configured {max_len} tokens")

    torch.manual_seed(tc.seed)
    optimizer = torch.optim.Adam(model.parameters(), lr=tc.learning_rate)
    order = list(range(len(pairs)))
    shuffler = random.Random(tc.seed)
    history: list[float] = []

    model.train()
    for epoch in range(tc.epochs):
        shuffler.shuffle(order)
        epoch_loss = 0.0
        epoch_tokens = 0
        for batch_no, base in enumerate(range(0, len(order), tc.batch_size)):
            chunk = [pairs[i] for i in order[base : base + tc.batch_size]]
            src, src_lengths = pad_batch([enc for enc, _ in chunk])
            dec, _ = pad_batch([d for _, d in chunk])
            tgt_in, tgt_out = dec[:, :-1], dec[:, 1:]

            optimizer.zero_grad()
            logits = model(src, src_lengths, tgt_in)
            loss = sequence_loss(logits, tgt_out)
            if not math.isfinite(loss.item()):
                raise TrainingDivergedError(epoch, batch_no, loss.item())
            loss.backward()
            nn.utils.clip_grad_norm_(model.parameters(), tc.clip_norm)
            optimizer.step()

            tokens = int(tgt_out.ne(0).sum())
            epoch_loss += loss.item() * tokens
            epoch_tokens += tokens
        mean_loss = epoch_loss / epoch_tokens
        history.append(mean_loss)
        if tc.stop_loss is not None and mean_loss < tc.stop_loss:
            break
    model.eval()
    return TrainResult(history, history[-1], len(history))
