"""Dataclasses for normalized lead sheets plus their invariant checks."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

from moodsheet.theory import (
    MELODY_MAX,
    MELODY_MIN,
    PERMITTED_DURATIONS,
    PERMITTED_TIME_SIGNATURES,
    PITCH_CLASS_NAMES,
    ChordQuality,
    Grouping,
    bar_capacity,
)

MIN_BARS = 4
MAX_BARS = 32


class InvariantError(ValueError):
    """A lead sheet violates one of the normalized-form invariants."""


class UnsupportedQualityError(ValueError):
    """A chord label names a quality outside the permitted eight."""


class KeyMode(enum.Enum):
    C_MAJOR = "major"
    A_MINOR = "minor"


class TimeSignature(NamedTuple):
    numerator: int
    denominator: int

    @property
    def capacity(self) -> int:
        return bar_capacity(self.numerator, self.denominator)

    @property
    def label(self) -> str:
        return f"{self.numerator}/{self.denominator}"

    @classmethod
    def parse(cls, label: str) -> "TimeSignature":
        num, _, den = label.partition("/")
        try:
            return cls(int(num), int(den))
        except ValueError:
            raise ValueError(f"bad time signature {label!r}") from None


@dataclass(frozen=True)
class ChordSymbol:
    """Root pitch class plus one of the eight permitted qualities."""

    root: int
    quality: ChordQuality

    def __post_init__(self) -> None:
        if not 0 <= self.root <= 11:
            raise ValueError(f"chord root {self.root} outside 0..11")

    @property
    def label(self) -> str:
        return f"{PITCH_CLASS_NAMES[self.root]}:{self.quality.value}"

    @classmethod
    def parse(cls, label: str) -> "ChordSymbol":
        name, sep, quality = label.partition(":")
        if not sep:
            raise ValueError(f"bad chord label {label!r}")
        if name not in PITCH_CLASS_NAMES:
            raise ValueError(f"bad chord root {name!r}")
        try:
            return cls(PITCH_CLASS_NAMES.index(name), ChordQuality(quality))
        except ValueError:
            raise UnsupportedQualityError(
                f"unsupported chord quality {quality!r}"
            ) from None

    def transposed(self, semitones: int) -> "ChordSymbol":
        return ChordSymbol((self.root + semitones) % 12, self.quality)


@dataclass(frozen=True)
class Event:
    """One lead sheet event: active chord, melody pitch, duration.

    ``chord`` and ``melody`` are None for rests; ``ticks`` is always set.
    """

    chord: ChordSymbol | None
    melody: int | None
    ticks: int


@dataclass
class Bar:
    events: list[Event]
    time_signature: TimeSignature
    grouping: Grouping = Grouping.PHRASE_MID

    def __post_init__(self) -> None:
        self.events = list(self.events)

    @property
    def capacity(self) -> int:
        return self.time_signature.capacity

    def total_ticks(self) -> int:
        return sum(e.ticks for e in self.events)


@dataclass
class LeadSheet:
    bars: list[Bar]
    key: KeyMode = KeyMode.C_MAJOR
    title: str = ""
    source: str = ""

    def __post_init__(self) -> None:
        self.bars = list(self.bars)

    def __len__(self) -> int:
        return len(self.bars)

    def events(self):
        for bar in self.bars:
            yield from bar.events

    def copy(self) -> "LeadSheet":
        return LeadSheet(
            bars=[Bar(list(b.events), b.time_signature, b.grouping) for b in self.bars],
            key=self.key,
            title=self.title,
            source=self.source,
        )


@dataclass(frozen=True)
class Rejection:
    """Why a candidate instance was dropped during filtering."""

    reason: str  # one of REJECTION_REASONS
    detail: str = ""


REJECTION_REASONS = (
    "chord quality",
    "time signature",
    "duration",
    "melody range",
    "bar capacity",
    "length",
)


def validate_leadsheet(ls: LeadSheet) -> None:
    """Raise InvariantError unless the sheet is in fully normalized form."""
    if not MIN_BARS <= len(ls.bars) <= MAX_BARS:
        raise InvariantError(f"{len(ls.bars)} bars outside {MIN_BARS}..{MAX_BARS}")
    for i, bar in enumerate(ls.bars):
        if not bar.events:
            raise InvariantError(f"bar {i} has no events")
        if tuple(bar.time_signature) not in PERMITTED_TIME_SIGNATURES:
            raise InvariantError(f"bar {i} meter {bar.time_signature.label} not permitted")
        if bar.total_ticks() != bar.capacity:
            raise InvariantError(
                f"bar {i} holds {bar.total_ticks()} ticks, capacity {bar.capacity}"
            )
        for event in bar.events:
            if event.ticks not in PERMITTED_DURATIONS:
                raise InvariantError(f"bar {i}: duration {event.ticks} not permitted")
            if event.melody is not None and not MELODY_MIN <= event.melody <= MELODY_MAX:
                raise InvariantError(f"bar {i}: melody pitch {event.melody} outside G3..C6")


def with_grouping(ls: LeadSheet, labels: list[Grouping]) -> LeadSheet:
    """Copy of the sheet with per-bar grouping labels replaced."""
    if len(labels) != len(ls.bars):
        raise ValueError("one grouping label per bar required")
    out = ls.copy()
    for bar, label in zip(out.bars, labels):
        bar.grouping = label
    return out


__all__ = [
    "Bar",
    "ChordSymbol",
    "Event",
    "InvariantError",
    "UnsupportedQualityError",
    "KeyMode",
    "LeadSheet",
    "MAX_BARS",
    "MIN_BARS",
    "REJECTION_REASONS",
    "Rejection",
    "TimeSignature",
    "validate_leadsheet",
    "with_grouping",
]
