"""Per-bar pitch-class and rest statistics."""

from __future__ import annotations

from moodsheet.score import Bar, LeadSheet
from moodsheet.theory import CHORD_TEMPLATES

TRACKS = ("melody", "chords")


def _check_track(track: str) -> None:
    if track not in TRACKS:
        raise ValueError(f"track must be one of {TRACKS}, got {track!r}")


def _bar_pitch_classes(bar: Bar, track: str) -> set[int]:
    classes: set[int] = set()
    for event in bar.events:
        if track == "melody":
            if event.melody is not None:
                classes.add(event.melody % 12)
        else:
            if event.chord is not None:
                for offset in CHORD_TEMPLATES[event.chord.quality]:
                    classes.add((event.chord.root + offset) % 12)
    return classes


def used_pitch_classes(ls: LeadSheet, track: str) -> list[int]:
    """Distinct pitch classes per bar; rests contribute nothing."""
    _check_track(track)
    return [len(_bar_pitch_classes(bar, track)) for bar in ls.bars]


def rest_ratio(ls: LeadSheet, track: str) -> list[float]:
    """Fraction of a bar's events whose slot is a rest, per bar."""
    _check_track(track)
    ratios = []
    for bar in ls.bars:
        if track == "melody":
            rests = sum(1 for event in bar.events if event.melody is None)
        else:
            rests = sum(1 for event in bar.events if event.chord is None)
        ratios.append(rests / len(bar.events))
    return ratios
