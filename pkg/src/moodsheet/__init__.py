"""Mood-conditioned lead sheet toolkit.

Subpackages cover the full path from raw MusicXML to generated lead
sheets: score ingestion and normalization, chord valence lookup,
token codecs, sequence models, objective metrics, an HTTP service,
and a command line front end.
"""

__version__ = "0.1.0"

from moodsheet.theory import TICKS_PER_QUARTER, ChordQuality, Grouping
from moodsheet.score import Bar, ChordSymbol, Event, KeyMode, LeadSheet, TimeSignature

__all__ = [
    "__version__",
    "TICKS_PER_QUARTER",
    "ChordQuality",
    "Grouping",
    "Bar",
    "ChordSymbol",
    "Event",
    "KeyMode",
    "LeadSheet",
    "TimeSignature",
]
