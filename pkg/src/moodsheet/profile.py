"""Empirical condition statistics and seeded template sampling.

A profile captures, from a normalized corpus, how often each meter,
valence descriptor, note density, phrase length, and piece length
occurs.  Templates are then drawn from those distributions so that
randomly filled condition grids look like the corpus they came from.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Mapping, TypeVar

from moodsheet.affect import ValenceDescriptor
from moodsheet.score import MAX_BARS, LeadSheet, TimeSignature
from moodsheet.theory import Grouping, grouping_labels
from moodsheet.tokenizer import BarCondition, ConditionTrack, Density, conditions_of

PROFILE_FORMAT = "moodsheet-profile"
PROFILE_VERSION = 1

__all__ = [
    "ConditionProfile",
    "profile_from_corpus",
    "sample_template",
    "save_profile",
    "load_profile",
]

T = TypeVar("T")


def _checked(counts: Mapping[T, int], what: str) -> dict[T, int]:
    if not counts:
        raise ValueError(f"profile has no {what} counts")
    if any(c <= 0 for c in counts.values()):
        raise ValueError(f"{what} counts must be positive")
    return dict(counts)


@dataclass(frozen=True)
class ConditionProfile:
    """Occurrence counts for every condition dimension of a corpus."""

    name: str
    time_signatures: dict[TimeSignature, int]  # one count per piece
    valence: dict[ValenceDescriptor, int]  # one count per bar
    density: dict[Density, int]  # one count per bar
    phrase_lengths: dict[int, int]  # one count per phrase
    bar_counts: dict[int, int]  # one count per piece

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "time_signatures", _checked(self.time_signatures, "time signature")
        )
        object.__setattr__(self, "valence", _checked(self.valence, "valence"))
        object.__setattr__(self, "density", _checked(self.density, "density"))
        object.__setattr__(
            self, "phrase_lengths", _checked(self.phrase_lengths, "phrase length")
        )
        object.__setattr__(self, "bar_counts", _checked(self.bar_counts, "bar count"))

    @property
    def piece_count(self) -> int:
        return sum(self.time_signatures.values())


def _phrase_lengths(track: ConditionTrack) -> list[int]:
    lengths: list[int] = []
    current = 0
    for condition in track:
        if condition.grouping is Grouping.PHRASE_START_1 and current:
            lengths.append(current)
            current = 0
        current += 1
    if current:
        lengths.append(current)
    return lengths


def profile_from_corpus(sheets: Iterable[LeadSheet], name: str = "corpus") -> ConditionProfile:
    time_signatures: Counter[TimeSignature] = Counter()
    valence: Counter[ValenceDescriptor] = Counter()
    density: Counter[Density] = Counter()
    phrase_lengths: Counter[int] = Counter()
    bar_counts: Counter[int] = Counter()
    for sheet in sheets:
        track = conditions_of(sheet)
        time_signatures[track[0].time_signature] += 1
        bar_counts[len(track)] += 1
        for condition in track:
            valence[condition.valence] += 1
            density[condition.density] += 1
        phrase_lengths.update(_phrase_lengths(track))
    return ConditionProfile(
        name, time_signatures, valence, density, phrase_lengths, bar_counts
    )


def _draw(rng: random.Random, counts: dict[T, int], order: Callable[[T], object]) -> T:
    items = sorted(counts.items(), key=lambda kv: order(kv[0]))
    return rng.choices([k for k, _ in items], weights=[c for _, c in items], k=1)[0]


def _sampled_phrases(
    rng: random.Random, profile: ConditionProfile, bars: int
) -> list[int]:
    lengths: list[int] = []
    remaining = bars
    while remaining > 0:
        length = min(_draw(rng, profile.phrase_lengths, int), remaining)
        lengths.append(length)
        remaining -= length
    return lengths


def sample_template(
    profile: ConditionProfile, bars: int, seed: int | None = None
) -> ConditionTrack:
    """Draw a per-bar condition grid shaped like the profiled corpus."""
    if not 1 <= bars <= MAX_BARS:
        raise ValueError(f"bars must be in 1..{MAX_BARS}, got {bars}")
    rng = random.Random(seed)
    ts = _draw(rng, profile.time_signatures, lambda t: (t.numerator, t.denominator))
    labels = grouping_labels(_sampled_phrases(rng, profile, bars))
    conditions = tuple(
        BarCondition(
            ts,
            labels[i],
            _draw(rng, profile.valence, lambda v: v.value),
            _draw(rng, profile.density, lambda d: d.value),
        )
        for i in range(bars)
    )
    return ConditionTrack(conditions)


def _profile_to_dict(profile: ConditionProfile) -> dict:
    return {
        "format": PROFILE_FORMAT,
        "version": PROFILE_VERSION,
        "name": profile.name,
        "time_signatures": {
            ts.label: count for ts, count in sorted(profile.time_signatures.items())
        },
        "valence": {v.value: c for v, c in sorted(profile.valence.items(), key=lambda kv: kv[0].value)},
        "density": {d.value: c for d, c in sorted(profile.density.items(), key=lambda kv: kv[0].value)},
        "phrase_lengths": {str(k): c for k, c in sorted(profile.phrase_lengths.items())},
        "bar_counts": {str(k): c for k, c in sorted(profile.bar_counts.items())},
    }


def _profile_from_dict(raw: dict) -> ConditionProfile:
    if raw.get("format") != PROFILE_FORMAT:
        raise ValueError("not a condition profile file")
    if raw.get("version") != PROFILE_VERSION:
        raise ValueError(f"unsupported profile version {raw.get('version')!r}")
    time_signatures = {
        TimeSignature.parse(label): count
        for label, count in raw["time_signatures"].items()
    }
    return ConditionProfile(
        raw["name"],
        time_signatures,
        {ValenceDescriptor(v): c for v, c in raw["valence"].items()},
        {Density(d): c for d, c in raw["density"].items()},
        {int(k): c for k, c in raw["phrase_lengths"].items()},
        {int(k): c for k, c in raw["bar_counts"].items()},
    )


def save_profile(profile: ConditionProfile, path: str | Path) -> None:
    Path(path).write_text(json.dumps(_profile_to_dict(profile), indent=1) + "\n")


def load_profile(path: str | Path) -> ConditionProfile:
    return _profile_from_dict(json.loads(Path(path).read_text()))
