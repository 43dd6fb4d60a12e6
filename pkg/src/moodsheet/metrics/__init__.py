"""Objective evaluation battery for lead sheet corpora."""

from moodsheet.metrics.basic import rest_ratio, used_pitch_classes
from moodsheet.metrics.tonnetz import (
    chord_chroma,
    melody_chroma,
    tonal_distance,
    tonnetz_centroid,
)
from moodsheet.metrics.patterns import (
    TEC,
    PointSet,
    brute_force_mtps,
    cosiatec,
    decompress,
    siatec,
)
from moodsheet.metrics.tension import (
    KEY_CENTERS,
    TensionProfile,
    cloud_diameter,
    fifth_index,
    spiral_position,
    tension_profile,
)
from moodsheet.metrics.report import (
    METRIC_NAMES,
    CorpusComparison,
    MetricReport,
    MetricValue,
    compute_report,
    corpus_report,
)

__all__ = [
    "CorpusComparison",
    "KEY_CENTERS",
    "METRIC_NAMES",
    "MetricReport",
    "MetricValue",
    "PointSet",
    "TEC",
    "TensionProfile",
    "brute_force_mtps",
    "chord_chroma",
    "cloud_diameter",
    "compute_report",
    "corpus_report",
    "cosiatec",
    "decompress",
    "fifth_index",
    "melody_chroma",
    "rest_ratio",
    "siatec",
    "spiral_position",
    "tension_profile",
    "tonal_distance",
    "tonnetz_centroid",
    "used_pitch_classes",
]
