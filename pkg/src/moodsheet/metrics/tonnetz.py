"""Harmonic-network centroid distance between the melody and chord tracks.

Each bar's 12-bin duration-weighted chroma is projected onto three
circles (fifths, minor thirds, major thirds) with radii 1, 1, 0.5; the
per-bar value is the Euclidean distance between the two tracks' 6-D
centroids and the piece value is the mean over usable bars.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from moodsheet.score import Bar, LeadSheet
from moodsheet.theory import CHORD_TEMPLATES

log = logging.getLogger(__name__)

_RADII = (1.0, 1.0, 0.5)
_ANGLES = (7 * math.pi / 6, 3 * math.pi / 2, 2 * math.pi / 3)


def _projection_matrix() -> np.ndarray:
    rows = []
    for pc in range(12):
        row = []
        for radius, angle in zip(_RADII, _ANGLES):
            row.append(radius * math.sin(pc * angle))
            row.append(radius * math.cos(pc * angle))
        rows.append(row)
    return np.array(rows)  # [12, 6]


_PROJECTION = _projection_matrix()


def melody_chroma(bar: Bar) -> np.ndarray:
    """Duration-weighted 12-bin chroma of the bar's melody."""
    chroma = np.zeros(12)
    for event in bar.events:
        if event.melody is not None:
            chroma[event.melody % 12] += event.ticks
    return chroma


def chord_chroma(bar: Bar) -> np.ndarray:
    """Duration-weighted chroma of the bar's chord tones."""
    chroma = np.zeros(12)
    for event in bar.events:
        if event.chord is not None:
            for offset in CHORD_TEMPLATES[event.chord.quality]:
                chroma[(event.chord.root + offset) % 12] += event.ticks
    return chroma


def tonnetz_centroid(chroma: np.ndarray) -> np.ndarray:
    """6-D centroid of an L1-normalized chroma; zero chroma is an error."""
    total = chroma.sum()
    if total <= 0:
        raise ValueError("cannot project an empty chroma")
    return (chroma / total) @ _PROJECTION


def tonal_distance(ls: LeadSheet) -> float:
    """Mean per-bar centroid distance between melody and chords."""
    distances = []
    for i, bar in enumerate(ls.bars):
        melody = melody_chroma(bar)
        chords = chord_chroma(bar)
        if melody.sum() == 0 or chords.sum() == 0:
            log.debug("bar %d of %r skipped: empty track", i + 1, ls.title)
            continue
        diff = tonnetz_centroid(melody) - tonnetz_centroid(chords)
        distances.append(float(np.linalg.norm(diff)))
    if not distances:
        raise ValueError("no bar has both melody and chords")
    return sum(distances) / len(distances)
