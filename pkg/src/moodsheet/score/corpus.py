"""JSON corpus format shared by every downstream module.

One object per lead sheet: key, bars[{time_signature, grouping,
events[{chord, melody, ticks}]}].  Chords serialize as "C:maj7" style
labels, rests as "rest"; the round trip through dicts is bit-exact.
"""

from __future__ import annotations

import hashlib
import json
import random
from pathlib import Path

from moodsheet.score.model import (
    Bar,
    ChordSymbol,
    Event,
    KeyMode,
    LeadSheet,
    TimeSignature,
)
from moodsheet.theory import Grouping

CORPUS_FORMAT = "moodsheet-corpus"
CORPUS_VERSION = 1


def event_to_dict(event: Event) -> dict:
    return {
        "chord": event.chord.label if event.chord is not None else "rest",
        "melody": event.melody if event.melody is not None else "rest",
        "ticks": event.ticks,
    }


def event_from_dict(raw: dict) -> Event:
    chord = None if raw["chord"] == "rest" else ChordSymbol.parse(raw["chord"])
    melody = None if raw["melody"] == "rest" else int(raw["melody"])
    return Event(chord=chord, melody=melody, ticks=int(raw["ticks"]))


def leadsheet_to_dict(ls: LeadSheet) -> dict:
    return {
        "key": ls.key.value,
        "title": ls.title,
        "source": ls.source,
        "bars": [
            {
                "time_signature": bar.time_signature.label,
                "grouping": bar.grouping.value,
                "events": [event_to_dict(e) for e in bar.events],
            }
            for bar in ls.bars
        ],
    }


def leadsheet_from_dict(raw: dict) -> LeadSheet:
    bars = [
        Bar(
            events=[event_from_dict(e) for e in rb["events"]],
            time_signature=TimeSignature.parse(rb["time_signature"]),
            grouping=Grouping(rb["grouping"]),
        )
        for rb in raw["bars"]
    ]
    return LeadSheet(
        bars=bars,
        key=KeyMode(raw["key"]),
        title=raw.get("title", ""),
        source=raw.get("source", ""),
    )


def corpus_to_dict(sheets: list[LeadSheet]) -> dict:
    return {
        "format": CORPUS_FORMAT,
        "version": CORPUS_VERSION,
        "sheets": [leadsheet_to_dict(ls) for ls in sheets],
    }


def corpus_from_dict(raw: dict) -> list[LeadSheet]:
    if raw.get("format") != CORPUS_FORMAT:
        raise ValueError(f"not a {CORPUS_FORMAT} document")
    if raw.get("version") != CORPUS_VERSION:
        raise ValueError(f"unsupported corpus version {raw.get('version')}")
    return [leadsheet_from_dict(s) for s in raw["sheets"]]


def save_corpus(sheets: list[LeadSheet], path: str | Path) -> None:
    Path(path).write_text(json.dumps(corpus_to_dict(sheets), indent=1) + "\n")


def load_corpus(path: str | Path) -> list[LeadSheet]:
    return corpus_from_dict(json.loads(Path(path).read_text()))


def corpus_hash(sheets: list[LeadSheet]) -> str:
    canonical = json.dumps(corpus_to_dict(sheets), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def split_dataset(
    corpus: list[LeadSheet], seed: int
) -> tuple[list[LeadSheet], list[LeadSheet], list[LeadSheet]]:
    """Disjoint 8:1:1 split: floor(0.8n) / floor(0.1n) / remainder, seeded shuffle."""
    n = len(corpus)
    if n < 10:
        raise ValueError(f"corpus of {n} sheets is too small to split 8:1:1")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    n_train = n * 8 // 10
    n_val = n // 10
    train = [corpus[i] for i in order[:n_train]]
    val = [corpus[i] for i in order[n_train : n_train + n_val]]
    test = [corpus[i] for i in order[n_train + n_val :]]
    return train, val, test
