"""Deterministic synthetic corpora and the bundled demo data they seed.

The bundled 50-piece corpus ships with the package so evaluation and
template sampling work out of the box; it regenerates bit-for-bit from
:func:`synthetic_corpus` with the pinned seed.  :func:`efficacy_corpus`
builds pieces whose valence descriptor deterministically selects the
chord-quality pool per bar, giving a model an unambiguous
mood-to-harmony signal to learn.
"""

from __future__ import annotations

import functools
import json
import random
from importlib import resources
from pathlib import Path

from moodsheet.affect import ValenceDescriptor, bar_valence, discretize
from moodsheet.score import (
    Bar,
    ChordSymbol,
    Event,
    KeyMode,
    LeadSheet,
    TimeSignature,
    corpus_from_dict,
)
from moodsheet.theory import (
    MELODY_MAX,
    MELODY_MIN,
    PERMITTED_DURATIONS,
    PERMITTED_TIME_SIGNATURES,
    ChordQuality,
    grouping_labels,
    phrase_lengths_for,
)

__all__ = [
    "BUNDLED_SEED",
    "BUNDLED_SIZE",
    "HIGH_POOL",
    "LOW_POOL",
    "bundled_corpus",
    "bundled_report_text",
    "efficacy_corpus",
    "synthetic_corpus",
]

BUNDLED_SEED = 0xB0B
BUNDLED_SIZE = 50

HIGH_POOL = (ChordQuality.MAJOR, ChordQuality.MAJOR_SEVENTH)
LOW_POOL = (ChordQuality.MINOR, ChordQuality.DIMINISHED)

_DURATIONS = sorted(PERMITTED_DURATIONS)


@functools.lru_cache(maxsize=None)
def _fillable(capacity: int, slots: int) -> bool:
    """Can ``slots`` permitted durations sum exactly to ``capacity``?"""
    if slots == 0:
        return capacity == 0
    return any(
        d <= capacity and _fillable(capacity - d, slots - 1) for d in _DURATIONS
    )


def _counted_durations(rng: random.Random, capacity: int, count: int) -> list[int]:
    """Exactly ``count`` permitted durations summing to ``capacity``."""
    if not _fillable(capacity, count):
        raise ValueError(f"cannot fill {capacity} ticks with {count} events")
    out: list[int] = []
    remaining, slots = capacity, count
    while slots:
        choices = [d for d in _DURATIONS if d <= remaining and _fillable(remaining - d, slots - 1)]
        d = rng.choice(choices)
        out.append(d)
        remaining -= d
        slots -= 1
    return out


def _melody_walk(rng: random.Random, steps: int, start: int | None = None) -> list[int]:
    """Stepwise-biased random walk clamped to the melody range."""
    pitch = start if start is not None else rng.randint(60, 76)
    out = []
    for _ in range(steps):
        pitch = min(MELODY_MAX, max(MELODY_MIN, pitch + rng.choice((-4, -2, -1, 0, 1, 2, 4))))
        out.append(pitch)
    return out


def _bar_event_count(rng: random.Random, capacity: int) -> int:
    """Mixed low/medium/high densities, weighted toward medium."""
    bucket = rng.choices(("low", "medium", "high"), weights=(2, 5, 3))[0]
    lo, hi = {"low": (1, 2), "medium": (3, 5), "high": (6, 8)}[bucket]
    counts = [c for c in range(lo, hi + 1) if _fillable(capacity, c)]
    return rng.choice(counts) if counts else 4


def synthetic_corpus(size: int = BUNDLED_SIZE, *, seed: int = BUNDLED_SEED) -> list[LeadSheet]:
    """Small, varied, fully normalized pieces for demos and evaluation."""
    rng = random.Random(seed)
    sheets = []
    for index in range(size):
        ts = TimeSignature(*rng.choice(sorted(PERMITTED_TIME_SIGNATURES)))
        bar_count = rng.randint(4, 8)
        labels = grouping_labels(phrase_lengths_for(bar_count))
        key = rng.choice([KeyMode.C_MAJOR, KeyMode.A_MINOR])
        bars = []
        for label in labels:
            durations = _counted_durations(
                rng, ts.capacity, _bar_event_count(rng, ts.capacity)
            )
            pitches = _melody_walk(rng, len(durations))
            events = []
            for ticks, pitch in zip(durations, pitches):
                chord = None
                if rng.random() >= 0.06:
                    chord = ChordSymbol(rng.randrange(12), rng.choice(list(ChordQuality)))
                melody = pitch if rng.random() >= 0.08 else None
                events.append(Event(chord, melody, ticks))
            bars.append(Bar(tuple(events), ts, label))
        sheets.append(
            LeadSheet(tuple(bars), key, title=f"synthetic-{index:02d}", source="synthetic")
        )
    return sheets


def _pool_bar(
    rng: random.Random,
    ts: TimeSignature,
    label,
    target: ValenceDescriptor,
    pool: tuple[ChordQuality, ...],
) -> Bar:
    """A bar whose chords come from ``pool`` and whose valence hits ``target``."""
    while True:
        durations = _counted_durations(rng, ts.capacity, rng.randint(3, 5))
        pitches = _melody_walk(rng, len(durations))
        events = tuple(
            Event(ChordSymbol(rng.randrange(12), rng.choice(pool)), pitch, ticks)
            for ticks, pitch in zip(durations, pitches)
        )
        bar = Bar(events, ts, label)
        value = bar_valence(bar)
        if value is not None and discretize(value) is target:
            return bar


def efficacy_corpus(size: int, *, seed: int = 0, bar_count: int = 8) -> list[LeadSheet]:
    """Pieces whose per-bar valence descriptor picks the chord pool.

    Bars alternate between phrase-long stretches of high valence (major
    and major-seventh chords only) and low valence (minor and diminished
    only), so requesting one descriptor at generation time has a single
    correct harmonic answer.
    """
    rng = random.Random(seed)
    ts = TimeSignature(4, 4)
    sheets = []
    for index in range(size):
        lengths = phrase_lengths_for(bar_count)
        labels = grouping_labels(lengths)
        moods: list[ValenceDescriptor] = []
        flip = rng.random() < 0.5
        for phrase, length in enumerate(lengths):
            high = (phrase % 2 == 0) ^ flip
            moods.extend(
                [ValenceDescriptor.HIGH if high else ValenceDescriptor.LOW] * length
            )
        bars = tuple(
            _pool_bar(
                rng,
                ts,
                label,
                mood,
                HIGH_POOL if mood is ValenceDescriptor.HIGH else LOW_POOL,
            )
            for label, mood in zip(labels, moods)
        )
        sheets.append(
            LeadSheet(
                bars,
                KeyMode.C_MAJOR,
                title=f"efficacy-{index:03d}",
                source="synthetic",
            )
        )
    return sheets


def _data_path(name: str) -> Path:
    return Path(str(resources.files("moodsheet") / "data" / name))


def bundled_corpus() -> list[LeadSheet]:
    """The 50-piece corpus shipped in the package data directory."""
    return corpus_from_dict(json.loads(_data_path("synthetic_corpus.json").read_text()))


def bundled_report_text() -> str:
    """Stored golden metric report for the bundled corpus (JSON text)."""
    return _data_path("synthetic_corpus_report.json").read_text()
