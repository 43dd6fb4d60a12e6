"""Shared fixtures: deterministic random lead sheets for property tests."""

import random

import pytest

from moodsheet.score import Bar, ChordSymbol, Event, KeyMode, LeadSheet, TimeSignature
from moodsheet.theory import (
    FILLABLE_TICKS,
    MELODY_MAX,
    MELODY_MIN,
    PERMITTED_DURATIONS,
    PERMITTED_TIME_SIGNATURES,
    ChordQuality,
    grouping_labels,
    phrase_lengths_for,
)

_DURATIONS = sorted(PERMITTED_DURATIONS)


def random_durations(rng: random.Random, capacity: int) -> list[int]:
    """Random permitted durations that sum exactly to capacity."""
    out: list[int] = []
    remaining = capacity
    while remaining:
        choices = [d for d in _DURATIONS if d == remaining or remaining - d in FILLABLE_TICKS]
        d = rng.choice(choices)
        out.append(d)
        remaining -= d
    return out


def random_event(rng: random.Random, ticks: int, rest_prob: float = 0.12) -> Event:
    chord = None
    if rng.random() >= rest_prob:
        chord = ChordSymbol(rng.randrange(12), rng.choice(list(ChordQuality)))
    melody = None
    if rng.random() >= rest_prob:
        melody = rng.randint(MELODY_MIN, MELODY_MAX)
    return Event(chord, melody, ticks)


def random_leadsheet(rng: random.Random, bar_count: int | None = None) -> LeadSheet:
    """A valid normalized lead sheet with random content."""
    if bar_count is None:
        bar_count = rng.randint(4, 32)
    ts = TimeSignature(*rng.choice(sorted(PERMITTED_TIME_SIGNATURES)))
    labels = grouping_labels(phrase_lengths_for(bar_count))
    bars = []
    for i in range(bar_count):
        events = tuple(random_event(rng, d) for d in random_durations(rng, ts.capacity))
        bars.append(Bar(events, ts, labels[i]))
    key = rng.choice([KeyMode.C_MAJOR, KeyMode.A_MINOR])
    return LeadSheet(tuple(bars), key, title=f"random-{rng.randrange(10**6)}", source="synthetic")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
