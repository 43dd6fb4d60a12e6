"""Grammar-constrained temperature sampling.

The decoder grammar is START (BAR (CHORD MELODY DURATION)+)+ END.  The
mask walks that grammar and additionally tracks tick capacity: duration
tokens that would strand the bar on an unfillable remainder are masked,
so a sampled stream always decodes into a valid lead sheet with the
requested bar count.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
from torch import Tensor

from moodsheet.models.config import SamplerConfig
from moodsheet.score import KeyMode, LeadSheet
from moodsheet.tokenizer import (
    ConditionTrack,
    TokenSequence,
    Vocabulary,
    decode_tokens,
    encode_conditions,
)
from moodsheet.theory import FILLABLE_TICKS

__all__ = [
    "GenerationResult",
    "GrammarMask",
    "IncompleteGenerationError",
    "generate",
    "softmax_with_temperature",
]


def softmax_with_temperature(logits: Tensor, temperature: float) -> Tensor:
    """Softmax of logits / temperature; argmax is temperature-invariant."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    return torch.softmax(logits / temperature, dim=-1)


class IncompleteGenerationError(RuntimeError):
    """Hit the length ceiling before the final bar closed."""

    def __init__(self, tokens: list[int], max_len: int):
        super().__init__(f"generation exceeded {max_len} tokens before END")
        self.tokens = tokens


class GrammarMask:
    """Stateful token filter for one generation run."""

    def __init__(self, vocab: Vocabulary, ct: ConditionTrack):
        self.vocab = vocab
        self.ct = ct
        size = vocab.decoder_size()
        self._chords = torch.zeros(size, dtype=torch.bool)
        self._chords[vocab.chord_ids()] = True
        self._melodies = torch.zeros(size, dtype=torch.bool)
        self._melodies[vocab.melody_ids()] = True
        self._bar_only = torch.zeros(size, dtype=torch.bool)
        self._bar_only[vocab.bar_id] = True
        self._end_only = torch.zeros(size, dtype=torch.bool)
        self._end_only[vocab.end_id] = True
        self._duration_ticks = {i: vocab.duration_ticks(i) for i in vocab.duration_ids()}
        self._duration_masks: dict[int, Tensor] = {}
        self.expect = "bar"
        self.bar_index = -1
        self.filled = 0
        self.done = False

    def _durations_for(self, remaining: int) -> Tensor:
        mask = self._duration_masks.get(remaining)
        if mask is None:
            mask = torch.zeros(self.vocab.decoder_size(), dtype=torch.bool)
            for token_id, ticks in self._duration_ticks.items():
                if ticks <= remaining and remaining - ticks in FILLABLE_TICKS:
                    mask[token_id] = True
            self._duration_masks[remaining] = mask
        return mask

    def allowed(self) -> Tensor:
        if self.done:
            raise RuntimeError("stream already closed")
        if self.expect == "bar":
            return self._bar_only
        if self.expect == "melody":
            return self._melodies
        capacity = self.ct[self.bar_index].time_signature.capacity
        if self.expect == "duration":
            mask = self._durations_for(capacity - self.filled)
            if not bool(mask.any()):
                raise RuntimeError("duration mask emptied; capacity tracking broke")
            return mask
        # expect == "chord": either a new event fits, or the bar is full
        # and the only move is the next bar fence (or END after the last).
        if self.filled < capacity:
            return self._chords
        if self.bar_index + 1 < len(self.ct):
            return self._bar_only
        return self._end_only

    def advance(self, token_id: int) -> None:
        kind = self.vocab.decoder_kind(token_id)
        if kind == "bar":
            self.bar_index += 1
            self.filled = 0
            self.expect = "chord"
        elif kind == "chord":
            self.expect = "melody"
        elif kind == "melody":
            self.expect = "duration"
        elif kind == "duration":
            self.filled += self._duration_ticks[token_id]
            self.expect = "chord"
        elif kind == "end":
            self.done = True
        else:
            raise RuntimeError(f"sampled a {kind} token; mask should forbid it")


@dataclass
class GenerationResult:
    sheet: LeadSheet
    tokens: TokenSequence
    temperature: float | None  # None for greedy


def generate(
    model,
    ct: ConditionTrack,
    sc: SamplerConfig,
    vocab: Vocabulary,
    *,
    key: KeyMode = KeyMode.C_MAJOR,
    title: str = "",
    source: str = "generated",
) -> GenerationResult:
    """Sample one lead sheet for the given conditions."""
    gen = torch.Generator().manual_seed(sc.seed)
    if sc.greedy:
        temperature = None
    elif sc.temperature is not None:
        temperature = sc.temperature
    else:
        lo, hi = sc.temperature_range
        temperature = lo + (hi - lo) * torch.rand((), generator=gen).item()

    max_len = sc.max_len if sc.max_len is not None else model.config.max_len
    enc = encode_conditions(ct, vocab)
    src = torch.tensor([enc.ids], dtype=torch.long)
    src_lengths = torch.tensor([len(enc.ids)], dtype=torch.long)

    mask = GrammarMask(vocab, ct)
    tokens = [vocab.start_id]
    model.eval()
    with torch.no_grad():
        state = model.init_decode(src, src_lengths)
        prev = torch.tensor([vocab.start_id], dtype=torch.long)
        while not mask.done:
            if len(tokens) >= max_len:
                raise IncompleteGenerationError(tokens, max_len)
            logits, state = model.step(state, prev)
            scores = logits[0].double().masked_fill(~mask.allowed(), float("-inf"))
            if temperature is None:
                choice = int(scores.argmax())
            else:
                probs = softmax_with_temperature(scores, temperature)
                choice = int(torch.multinomial(probs, 1, generator=gen))
            tokens.append(choice)
            mask.advance(choice)
            prev = torch.tensor([choice], dtype=torch.long)

    seq = TokenSequence(tuple(tokens), "decoder")
    sheet = decode_tokens(seq, ct, vocab, key=key, title=title, source=source)
    return GenerationResult(sheet, seq, temperature)
