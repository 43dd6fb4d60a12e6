"""Translational pattern discovery and greedy compression.

Points are (onset tick, pitch) pairs.  A maximal translatable pattern
(MTP) for a difference vector v is every point that lands on another
point when shifted by v; its translational equivalence class (TEC)
pairs the pattern with all vectors that map it into the set, the zero
vector included.  Compression greedily selects the TEC with the best
coverage-per-symbol ratio, removes what it covers, and repeats, which
yields a lossless encoding of the whole set.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from moodsheet.score import LeadSheet
from moodsheet.theory import CHORD_TEMPLATES

Point = tuple[int, int]
Vector = tuple[int, int]

CHORD_TONE_BASE = 48  # chord tones are folded to the octave below middle C

__all__ = [
    "PointSet",
    "TEC",
    "siatec",
    "brute_force_mtps",
    "cosiatec",
    "decompress",
]


@dataclass(frozen=True)
class PointSet:
    points: frozenset[Point]

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", frozenset(self.points))

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def from_leadsheet(cls, ls: LeadSheet) -> "PointSet":
        """Melody notes at true pitch plus chord tones folded to one octave."""
        points: set[Point] = set()
        onset = 0
        for bar in ls.bars:
            for event in bar.events:
                if event.melody is not None:
                    points.add((onset, event.melody))
                if event.chord is not None:
                    for offset in CHORD_TEMPLATES[event.chord.quality]:
                        points.add((onset, CHORD_TONE_BASE + (event.chord.root + offset) % 12))
                onset += event.ticks
        return cls(frozenset(points))


@dataclass(frozen=True)
class TEC:
    """A pattern and every translation (zero included) placing it in the set."""

    pattern: frozenset[Point]
    translators: frozenset[Vector]

    @cached_property
    def coverage_set(self) -> frozenset[Point]:
        return frozenset(
            (p[0] + v[0], p[1] + v[1]) for p in self.pattern for v in self.translators
        )

    @property
    def coverage(self) -> int:
        return len(self.coverage_set)

    @property
    def size(self) -> int:
        # the zero translator restates the pattern, hence the -1
        return len(self.pattern) + len(self.translators) - 1

    @property
    def compression_ratio(self) -> float:
        return self.coverage / self.size


def _positive(v: Vector) -> bool:
    return v > (0, 0)


def maximal_translatable_patterns(points: frozenset[Point]) -> dict[Vector, frozenset[Point]]:
    """MTP(v) for every lexicographically positive difference vector."""
    ordered = sorted(points)
    table: dict[Vector, set[Point]] = defaultdict(set)
    for i, p in enumerate(ordered):
        for q in ordered[i + 1 :]:
            table[(q[0] - p[0], q[1] - p[1])].add(p)
    return {v: frozenset(s) for v, s in table.items()}


def brute_force_mtps(points: frozenset[Point]) -> dict[Vector, frozenset[Point]]:
    """Definition-level oracle: check every vector against every point."""
    vectors = {
        (q[0] - p[0], q[1] - p[1])
        for p in points
        for q in points
        if p != q and _positive((q[0] - p[0], q[1] - p[1]))
    }
    return {
        v: frozenset(p for p in points if (p[0] + v[0], p[1] + v[1]) in points)
        for v in vectors
    }


def translators_of(pattern: frozenset[Point], points: frozenset[Point]) -> frozenset[Vector]:
    """All vectors (zero included) mapping the whole pattern into the set.

    Definition-level anchor scan, kept independent of the column
    intersection used by ``siatec`` so the two can cross-check.
    """
    anchor = min(pattern)
    found = []
    for target in points:
        v = (target[0] - anchor[0], target[1] - anchor[1])
        if all((p[0] + v[0], p[1] + v[1]) in points for p in pattern):
            found.append(v)
    return frozenset(found)


def siatec(ps: PointSet) -> list[TEC]:
    """Every MTP paired with its full translator set, deduplicated."""
    points = ps.points
    # column[p] = all vectors leading from p to some point; a pattern's
    # translators are the intersection of its points' columns
    columns = {
        p: frozenset((q[0] - p[0], q[1] - p[1]) for q in points) for p in points
    }
    tecs = []
    seen: set[frozenset[Point]] = set()
    for pattern in maximal_translatable_patterns(points).values():
        if pattern in seen:
            continue
        seen.add(pattern)
        translators = frozenset.intersection(*(columns[p] for p in pattern))
        tecs.append(TEC(pattern, translators))
    return tecs


def _compactness(tec: TEC, points: frozenset[Point]) -> float:
    xs = [p[0] for p in tec.pattern]
    ys = [p[1] for p in tec.pattern]
    in_box = sum(
        1 for p in points if min(xs) <= p[0] <= max(xs) and min(ys) <= p[1] <= max(ys)
    )
    return len(tec.pattern) / in_box


def _selection_key(tec: TEC, points: frozenset[Point]):
    return (
        tec.compression_ratio,
        tec.coverage,
        _compactness(tec, points),
        # deterministic final tie-break so reports are byte-stable
        tuple(sorted(tec.pattern)),
        tuple(sorted(tec.translators)),
    )


@dataclass(frozen=True)
class CompressionResult:
    encoding: tuple[TEC, ...]
    point_count: int

    @property
    def encoded_size(self) -> int:
        return sum(tec.size for tec in self.encoding)

    @property
    def compression_ratio(self) -> float:
        return self.point_count / self.encoded_size

    @property
    def pattern_sizes(self) -> list[int]:
        return [len(tec.pattern) for tec in self.encoding]

    @property
    def longest_pattern(self) -> int:
        return max(self.pattern_sizes)

    @property
    def shortest_pattern(self) -> int:
        return min(self.pattern_sizes)


def cosiatec(ps: PointSet) -> CompressionResult:
    """Greedy best-TEC-first compression of the point set."""
    if not ps.points:
        raise ValueError("point set is empty")
    remaining = set(ps.points)
    encoding: list[TEC] = []
    while remaining:
        frozen = frozenset(remaining)
        tecs = siatec(PointSet(frozen))
        if not tecs:
            # single points or no translational structure at all
            encoding.append(TEC(frozen, frozenset({(0, 0)})))
            break
        best = max(tecs, key=lambda t: _selection_key(t, frozen))
        if best.compression_ratio <= 1.0:
            encoding.append(TEC(frozen, frozenset({(0, 0)})))
            break
        encoding.append(best)
        remaining -= best.coverage_set
    return CompressionResult(tuple(encoding), len(ps.points))


def decompress(result: CompressionResult) -> PointSet:
    points: set[Point] = set()
    for tec in result.encoding:
        points |= tec.coverage_set
    return PointSet(frozenset(points))
