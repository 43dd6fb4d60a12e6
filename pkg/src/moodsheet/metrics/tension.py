"""Helix-of-fifths tension measures over per-bar note clouds.

Pitches sit on a helix at P(k) = (sin(k pi/2), cos(k pi/2), k h) with
h = sqrt(2/15), where k counts steps along the line of fifths.  Each
bar forms a cloud of sounding notes; its diameter captures dissonance,
movement between consecutive duration-weighted cloud centers captures
tonal drift, and the distance from each center to the key's center
captures strain against the tonal anchor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from moodsheet.score import Bar, KeyMode, LeadSheet
from moodsheet.theory import CHORD_TEMPLATES

HEIGHT = math.sqrt(2 / 15)

# Sharp-preferring line-of-fifths index per pitch class (C=0 ... F=-1).
FIFTH_INDEX = {0: 0, 7: 1, 2: 2, 9: 3, 4: 4, 11: 5, 6: 6, 1: 7, 8: 8, 3: 9, 10: 10, 5: -1}

# Root, fifth, third weights for a triad's center of effect.
TRIAD_WEIGHTS = (0.536, 0.274, 0.190)

__all__ = [
    "HEIGHT",
    "FIFTH_INDEX",
    "KEY_CENTERS",
    "TensionProfile",
    "fifth_index",
    "spiral_position",
    "cloud_diameter",
    "cloud_center",
    "tension_profile",
]


def fifth_index(pitch_class: int) -> int:
    return FIFTH_INDEX[pitch_class % 12]


def spiral_position(k: int | float) -> np.ndarray:
    return np.array([math.sin(k * math.pi / 2), math.cos(k * math.pi / 2), k * HEIGHT])


def _triad_center(root_pc: int, third_offset: int) -> np.ndarray:
    w_root, w_fifth, w_third = TRIAD_WEIGHTS
    return (
        w_root * spiral_position(fifth_index(root_pc))
        + w_fifth * spiral_position(fifth_index(root_pc + 7))
        + w_third * spiral_position(fifth_index(root_pc + third_offset))
    )


KEY_CENTERS = {
    KeyMode.C_MAJOR: _triad_center(0, 4),
    KeyMode.A_MINOR: _triad_center(9, 3),
}


def _bar_cloud(bar: Bar) -> tuple[list[int], list[int]]:
    """(k indices, tick weights) for every sounding note in the bar."""
    ks: list[int] = []
    weights: list[int] = []
    for event in bar.events:
        if event.melody is not None:
            ks.append(fifth_index(event.melody % 12))
            weights.append(event.ticks)
        if event.chord is not None:
            for offset in CHORD_TEMPLATES[event.chord.quality]:
                ks.append(fifth_index(event.chord.root + offset))
                weights.append(event.ticks)
    return ks, weights


def cloud_diameter(ks: list[int]) -> float:
    """Largest pairwise distance among the cloud's helix positions."""
    unique = sorted(set(ks))
    if len(unique) < 2:
        return 0.0
    positions = [spiral_position(k) for k in unique]
    return max(
        float(np.linalg.norm(a - b)) for i, a in enumerate(positions) for b in positions[i + 1 :]
    )


def cloud_center(ks: list[int], weights: list[int]) -> np.ndarray:
    total = sum(weights)
    if total <= 0:
        raise ValueError("cloud has no weight")
    center = np.zeros(3)
    for k, w in zip(ks, weights):
        center += w * spiral_position(k)
    return center / total


@dataclass(frozen=True)
class TensionProfile:
    diameters: tuple[float, ...]
    movements: tuple[float, ...]
    strains: tuple[float, ...]
    windows: int
    skipped: int

    def __post_init__(self) -> None:
        for name in ("diameters", "movements", "strains"):
            if any(v < -1e-12 for v in getattr(self, name)):
                raise ValueError(f"negative {name}")


def _note_spans(ls: LeadSheet) -> list[tuple[int, int, int]]:
    """(start tick, end tick, k index) for every sounding note in the piece."""
    spans: list[tuple[int, int, int]] = []
    tick = 0
    for bar in ls.bars:
        offset = tick
        for event in bar.events:
            end = offset + event.ticks
            if event.melody is not None:
                spans.append((offset, end, fifth_index(event.melody % 12)))
            if event.chord is not None:
                for chord_offset in CHORD_TEMPLATES[event.chord.quality]:
                    spans.append((offset, end, fifth_index(event.chord.root + chord_offset)))
            offset = end
        tick += bar.time_signature.capacity
    return spans


def _window_clouds(ls: LeadSheet, window: int) -> list[tuple[list[int], list[int]]]:
    spans = _note_spans(ls)
    total = sum(bar.time_signature.capacity for bar in ls.bars)
    clouds = []
    for start in range(0, total, window):
        stop = start + window
        ks: list[int] = []
        weights: list[int] = []
        for span_start, span_end, k in spans:
            overlap = min(span_end, stop) - max(span_start, start)
            if overlap > 0:
                ks.append(k)
                weights.append(overlap)
        clouds.append((ks, weights))
    return clouds


def tension_profile(ls: LeadSheet, window: int | None = None) -> TensionProfile:
    """Tension triple per window; by default each bar is one window.

    ``window`` is a width in ticks; windows tile the piece with stride
    equal to the width.  Windows with no sounding notes are skipped.
    """
    if window is None:
        clouds = [_bar_cloud(bar) for bar in ls.bars]
    elif window <= 0:
        raise ValueError("window must be a positive tick count")
    else:
        clouds = _window_clouds(ls, window)
    key_center = KEY_CENTERS[ls.key]
    diameters: list[float] = []
    movements: list[float] = []
    strains: list[float] = []
    previous_center: np.ndarray | None = None
    skipped = 0
    for ks, weights in clouds:
        if not ks:
            skipped += 1
            continue
        center = cloud_center(ks, weights)
        diameters.append(cloud_diameter(ks))
        strains.append(float(np.linalg.norm(center - key_center)))
        if previous_center is not None:
            movements.append(float(np.linalg.norm(center - previous_center)))
        previous_center = center
    return TensionProfile(
        tuple(diameters), tuple(movements), tuple(strains), len(diameters), skipped
    )
