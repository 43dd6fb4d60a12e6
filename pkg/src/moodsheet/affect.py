"""Chord-quality valence: mood-tag calculus, bar/piece aggregation, discretization.

Each of the eight permitted chord qualities carries a valence constant in
[-1, 1], the median of the circumplex valences of its expert mood tags.
The constants live in ``data/chord_valence.json`` together with the tag
lists and a (partial) emotion-word lexicon, so new chord types can be
added without touching code.
"""

from __future__ import annotations

import enum
import functools
import json
import statistics
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from moodsheet.score.model import Bar, LeadSheet
from moodsheet.theory import ChordQuality


@dataclass(frozen=True)
class EmotionTag:
    name: str
    valence: float
    arousal: float  # kept for completeness, never used

    def __post_init__(self) -> None:
        if not -1 <= self.valence <= 1 or not -1 <= self.arousal <= 1:
            raise ValueError(f"tag {self.name!r} coordinates outside [-1, 1]")


class ValenceDescriptor(enum.Enum):
    LOW = "low"
    MODERATE_LOW = "moderate_low"
    NEUTRAL = "neutral"
    MODERATE_HIGH = "moderate_high"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return _DESCRIPTOR_ORDER.index(self)

    def __lt__(self, other: "ValenceDescriptor") -> bool:
        return self.rank < other.rank

    def __le__(self, other: "ValenceDescriptor") -> bool:
        return self.rank <= other.rank


_DESCRIPTOR_ORDER = [
    ValenceDescriptor.LOW,
    ValenceDescriptor.MODERATE_LOW,
    ValenceDescriptor.NEUTRAL,
    ValenceDescriptor.MODERATE_HIGH,
    ValenceDescriptor.HIGH,
]


@dataclass(frozen=True)
class QualityEntry:
    tags: tuple[str, ...]
    cleaned_tags: tuple[str, ...]
    valence: float


class ChordValenceTable:
    """Quality -> (tag list, valence) map plus the emotion-word lexicon."""

    def __init__(
        self,
        qualities: dict[ChordQuality, QualityEntry],
        lexicon: dict[str, EmotionTag],
    ):
        missing = set(ChordQuality) - set(qualities)
        if missing:
            raise ValueError(f"valence table misses qualities: {sorted(q.value for q in missing)}")
        self.qualities = qualities
        self.lexicon = lexicon

    def valence_of(self, quality: ChordQuality) -> float:
        try:
            return self.qualities[quality].valence
        except KeyError:
            raise KeyError(f"no valence for chord quality {quality!r}") from None

    def tag_median(self, quality: ChordQuality) -> float:
        """Recompute a quality's valence from its cleaned tags via the lexicon.

        Demonstrates how the stored constants were produced; raises
        LookupError when cleaned tags are missing or unresolvable.
        """
        entry = self.qualities[quality]
        if not entry.cleaned_tags:
            raise LookupError(f"no cleaned tag list for {quality.value}")
        values = []
        for name in entry.cleaned_tags:
            if name not in self.lexicon:
                raise LookupError(f"tag {name!r} not in lexicon")
            values.append(self.lexicon[name].valence)
        return median_valence(values)

    @classmethod
    def from_dict(cls, raw: dict) -> "ChordValenceTable":
        qualities = {
            ChordQuality(key): QualityEntry(
                tags=tuple(entry.get("tags", ())),
                cleaned_tags=tuple(entry.get("cleaned_tags", ())),
                valence=float(entry["valence"]),
            )
            for key, entry in raw["qualities"].items()
        }
        lexicon = {
            name: EmotionTag(name, float(coords["valence"]), float(coords["arousal"]))
            for name, coords in raw.get("lexicon", {}).items()
        }
        return cls(qualities, lexicon)


def load_valence_table(path: str | Path | None = None) -> ChordValenceTable:
    """Load the chord valence table, from the bundled data file by default."""
    if path is None:
        raw = json.loads(resources.files("moodsheet.data").joinpath("chord_valence.json").read_text())
    else:
        raw = json.loads(Path(path).read_text())
    return ChordValenceTable.from_dict(raw)


@functools.lru_cache(maxsize=1)
def default_table() -> ChordValenceTable:
    return load_valence_table()


def valence_of_quality(quality: ChordQuality) -> float:
    if not isinstance(quality, ChordQuality):
        raise KeyError(f"unknown chord quality {quality!r}")
    return default_table().valence_of(quality)


def median_valence(values: Sequence[float]) -> float:
    """Median; mean of the two central values for even counts."""
    if not values:
        raise ValueError("median of empty valence list")
    return statistics.median(values)


def bar_valence(bar: Bar) -> float | None:
    """Median chord valence of a bar, one sample per non-rest chord event.

    Sustained harmony therefore weighs more than passing chords.  Returns
    None when every chord slot is a rest.
    """
    samples = [valence_of_quality(e.chord.quality) for e in bar.events if e.chord is not None]
    if not samples:
        return None
    return median_valence(samples)


def discretize(value: float) -> ValenceDescriptor:
    """Map a valence in [-1, 1] onto five equal-width bins of 0.4.

    Bins are left-closed/right-open except the top one, which closes at 1.
    """
    if not -1 <= value <= 1:
        raise ValueError(f"valence {value} outside [-1, 1]")
    if value < -0.6:
        return ValenceDescriptor.LOW
    if value < -0.2:
        return ValenceDescriptor.MODERATE_LOW
    if value < 0.2:
        return ValenceDescriptor.NEUTRAL
    if value < 0.6:
        return ValenceDescriptor.MODERATE_HIGH
    return ValenceDescriptor.HIGH


def bar_descriptors(ls: LeadSheet) -> list[ValenceDescriptor]:
    """Per-bar descriptors; all-rest bars inherit the previous bar's (first bar: Neutral)."""
    out: list[ValenceDescriptor] = []
    previous = ValenceDescriptor.NEUTRAL
    for bar in ls.bars:
        value = bar_valence(bar)
        if value is not None:
            previous = discretize(value)
        out.append(previous)
    return out


def piece_valence(ls: LeadSheet) -> tuple[float, ValenceDescriptor]:
    """Mean of the defined bar valences plus its descriptor."""
    values = [v for v in (bar_valence(bar) for bar in ls.bars) if v is not None]
    if not values:
        raise ValueError("piece has no non-rest harmony")
    mean = sum(values) / len(values)
    return mean, discretize(mean)


def annotate_corpus(sheets: Iterable[LeadSheet]) -> list[dict]:
    """Per-sheet valence summaries, as plain dicts for JSON output."""
    out = []
    for ls in sheets:
        values = [bar_valence(bar) for bar in ls.bars]
        descriptors = bar_descriptors(ls)
        mean, descriptor = piece_valence(ls)
        out.append(
            {
                "bars": [
                    {"valence": v, "descriptor": d.value}
                    for v, d in zip(values, descriptors)
                ],
                "piece": {"valence": mean, "descriptor": descriptor.value},
            }
        )
    return out
