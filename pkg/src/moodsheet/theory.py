"""Shared music-theory constants: pitch classes, chord qualities, durations, meters.

Everything downstream (score model, tokenizer, metrics) speaks in these
terms.  The tick grid is 24 per quarter note, the smallest grid divisible
by both 2 and 3, so eighth- and quarter-note triplets are exact integers.
"""

from __future__ import annotations

import enum
from fractions import Fraction

TICKS_PER_QUARTER = 24

PITCH_CLASS_NAMES = ["C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"]
NAME_TO_PITCH_CLASS = {name: pc for pc, name in enumerate(PITCH_CLASS_NAMES)}

# Melody register after normalization: G3..C6.
MELODY_MIN = 55
MELODY_MAX = 84


class ChordQuality(enum.Enum):
    MAJOR = "maj"
    MINOR = "min"
    DOMINANT_SEVENTH = "dom7"
    MAJOR_SEVENTH = "maj7"
    MINOR_SEVENTH = "min7"
    DOMINANT_NINTH = "dom9"
    MINOR_NINTH = "min9"
    DIMINISHED = "dim"


# Chord tones as semitone offsets from the root (ninths folded to one octave).
CHORD_TEMPLATES: dict[ChordQuality, tuple[int, ...]] = {
    ChordQuality.MAJOR: (0, 4, 7),
    ChordQuality.MINOR: (0, 3, 7),
    ChordQuality.DOMINANT_SEVENTH: (0, 4, 7, 10),
    ChordQuality.MAJOR_SEVENTH: (0, 4, 7, 11),
    ChordQuality.MINOR_SEVENTH: (0, 3, 7, 10),
    ChordQuality.DOMINANT_NINTH: (0, 4, 7, 10, 2),
    ChordQuality.MINOR_NINTH: (0, 3, 7, 10, 2),
    ChordQuality.DIMINISHED: (0, 3, 6),
}

# Note durations kept in the corpus, in ticks.  Covers whole down to
# sixteenth plus quarter- and eighth-note triplets (16 and 8 ticks).
DURATION_TICKS: dict[str, int] = {
    "whole": 96,
    "dotted-half": 72,
    "half": 48,
    "dotted-quarter": 36,
    "quarter": 24,
    "dotted-eighth": 18,
    "quarter-triplet": 16,
    "eighth": 12,
    "eighth-triplet": 8,
    "sixteenth": 6,
}
PERMITTED_DURATIONS: frozenset[int] = frozenset(DURATION_TICKS.values())

# The five meters kept after filtering.
PERMITTED_TIME_SIGNATURES: tuple[tuple[int, int], ...] = (
    (4, 4),
    (3, 4),
    (2, 2),
    (2, 4),
    (6, 8),
)


def bar_capacity(numerator: int, denominator: int) -> int:
    """Length of a full bar in ticks for the given meter."""
    ticks = Fraction(numerator * TICKS_PER_QUARTER * 4, denominator)
    if ticks.denominator != 1:
        raise ValueError(f"meter {numerator}/{denominator} has no integer tick capacity")
    return int(ticks)


def _fillable_tick_counts(limit: int) -> frozenset[int]:
    """All tick totals reachable by summing permitted durations, up to limit."""
    reachable = {0}
    for total in range(1, limit + 1):
        if any(total - d in reachable for d in PERMITTED_DURATIONS if d <= total):
            reachable.add(total)
    return frozenset(reachable)


# Largest bar is 4/4 or 2/2 (96 ticks).  Used by rest padding and by the
# generation-time duration mask to avoid dead ends (e.g. 10 ticks left).
FILLABLE_TICKS: frozenset[int] = _fillable_tick_counts(max(bar_capacity(n, d) for n, d in PERMITTED_TIME_SIGNATURES))


def fill_with_rests(gap: int) -> list[int]:
    """Split a tick gap into permitted durations, longest first.

    Raises ValueError when the gap cannot be expressed with permitted
    durations (e.g. 10 ticks).
    """
    if gap < 0:
        raise ValueError("gap must be non-negative")
    if gap not in FILLABLE_TICKS:
        raise ValueError(f"{gap} ticks cannot be filled with permitted durations")
    out: list[int] = []
    remaining = gap
    for d in sorted(PERMITTED_DURATIONS, reverse=True):
        while remaining >= d and remaining - d in FILLABLE_TICKS:
            out.append(d)
            remaining -= d
    assert remaining == 0
    return out


class Grouping(enum.Enum):
    """Five phrase-position labels: bar 1/2 of a phrase, last 2, and the rest."""

    PHRASE_START_1 = "first1"
    PHRASE_START_2 = "first2"
    PHRASE_MID = "mid"
    PHRASE_END_2 = "last2"
    PHRASE_END_1 = "last1"


def grouping_labels(phrase_lengths: list[int]) -> list[Grouping]:
    """Assign phrase-position labels to the bars of consecutive phrases.

    Within a phrase the first bar is first1, the second first2, the final
    two last2/last1, anything in between mid.  For phrases of 2-3 bars the
    end labels win the overlap, so every phrase still closes with last1.
    """
    labels: list[Grouping] = []
    for length in phrase_lengths:
        if length < 1:
            raise ValueError("phrase length must be >= 1")
        for i in range(length):
            if i == 0:
                labels.append(Grouping.PHRASE_START_1)
            elif i == length - 1:
                labels.append(Grouping.PHRASE_END_1)
            elif i == length - 2:
                labels.append(Grouping.PHRASE_END_2)
            elif i == 1:
                labels.append(Grouping.PHRASE_START_2)
            else:
                labels.append(Grouping.PHRASE_MID)
    return labels


def phrase_lengths_for(bar_count: int, phrase_length: int = 8) -> list[int]:
    """Split a bar span into fixed-size phrases; the last phrase takes the remainder."""
    if bar_count < 1:
        raise ValueError("bar_count must be >= 1")
    lengths = [phrase_length] * (bar_count // phrase_length)
    if bar_count % phrase_length:
        lengths.append(bar_count % phrase_length)
    return lengths
