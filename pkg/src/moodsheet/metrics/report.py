"""Corpus-level metric aggregation and side-by-side rendering."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from moodsheet.metrics.basic import rest_ratio, used_pitch_classes
from moodsheet.metrics.patterns import PointSet, cosiatec
from moodsheet.metrics.tension import tension_profile
from moodsheet.metrics.tonnetz import tonal_distance
from moodsheet.score import LeadSheet

REPORT_FORMAT = "moodsheet-report"
REPORT_VERSION = 1

# Row order mirrors the published metric tables.
METRIC_NAMES = (
    "Used Pitch Classes / Melody",
    "Used Pitch Classes / Chords",
    "Rest Events (%) / Melody",
    "Rest Events (%) / Chords",
    "Tonal Distance",
    "Compression Ratio",
    "Long Patterns (avg)",
    "Short Patterns (avg)",
    "Cloud Movement",
    "Cloud Diameter",
    "Distance to the Key",
)

__all__ = ["MetricValue", "MetricReport", "CorpusComparison", "compute_report", "corpus_report"]


@dataclass(frozen=True)
class MetricValue:
    mean: float
    std: float | None  # None for metrics reported as a bare mean
    count: int

    def __post_init__(self) -> None:
        if self.std is not None and self.std < 0:
            raise ValueError("std must be non-negative")

    def to_dict(self) -> dict:
        return {"mean": self.mean, "std": self.std, "count": self.count}


def _summarize(values: list[float], *, with_std: bool = True) -> MetricValue:
    if not values:
        return MetricValue(float("nan"), 0.0 if with_std else None, 0)
    mean = sum(values) / len(values)
    if not with_std:
        return MetricValue(mean, None, len(values))
    variance = sum((v - mean) ** 2 for v in values) / len(values)
    return MetricValue(mean, math.sqrt(variance), len(values))


@dataclass(frozen=True)
class MetricReport:
    values: dict[str, MetricValue]

    def to_dict(self) -> dict:
        return {name: self.values[name].to_dict() for name in METRIC_NAMES}


def compute_report(sheets: list[LeadSheet]) -> MetricReport:
    """Pool bar-level stats across the corpus; other metrics per piece."""
    if not sheets:
        raise ValueError("corpus is empty")
    pooled: dict[str, list[float]] = {name: [] for name in METRIC_NAMES}
    for ls in sheets:
        pooled["Used Pitch Classes / Melody"] += [float(v) for v in used_pitch_classes(ls, "melody")]
        pooled["Used Pitch Classes / Chords"] += [float(v) for v in used_pitch_classes(ls, "chords")]
        pooled["Rest Events (%) / Melody"] += rest_ratio(ls, "melody")
        pooled["Rest Events (%) / Chords"] += rest_ratio(ls, "chords")
        try:
            pooled["Tonal Distance"].append(tonal_distance(ls))
        except ValueError:
            pass
        compression = cosiatec(PointSet.from_leadsheet(ls))
        pooled["Compression Ratio"].append(compression.compression_ratio)
        pooled["Long Patterns (avg)"].append(float(compression.longest_pattern))
        pooled["Short Patterns (avg)"].append(float(compression.shortest_pattern))
        profile = tension_profile(ls)
        if profile.movements:
            pooled["Cloud Movement"].append(sum(profile.movements) / len(profile.movements))
        if profile.diameters:
            pooled["Cloud Diameter"].append(sum(profile.diameters) / len(profile.diameters))
        if profile.strains:
            pooled["Distance to the Key"].append(sum(profile.strains) / len(profile.strains))
    return MetricReport(
        {
            name: _summarize(pooled[name], with_std=name != "Tonal Distance")
            for name in METRIC_NAMES
        }
    )


@dataclass(frozen=True)
class CorpusComparison:
    columns: tuple[str, ...]
    reports: tuple[MetricReport, ...]

    def to_dict(self) -> dict:
        return {
            "format": REPORT_FORMAT,
            "version": REPORT_VERSION,
            "columns": list(self.columns),
            "metrics": {
                name: {
                    column: report.values[name].to_dict()
                    for column, report in zip(self.columns, self.reports)
                }
                for name in METRIC_NAMES
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=False) + "\n"

    def to_text(self) -> str:
        width = max(len(name) for name in METRIC_NAMES)
        cells = {
            column: {
                name: _format_value(report.values[name]) for name in METRIC_NAMES
            }
            for column, report in zip(self.columns, self.reports)
        }
        col_widths = {
            column: max(len(column), max(len(v) for v in cells[column].values()))
            for column in self.columns
        }
        lines = [
            "  ".join(
                ["Metric".ljust(width)] + [c.rjust(col_widths[c]) for c in self.columns]
            )
        ]
        lines.append("-" * len(lines[0]))
        for name in METRIC_NAMES:
            row = [name.ljust(width)]
            for column in self.columns:
                row.append(cells[column][name].rjust(col_widths[column]))
            lines.append("  ".join(row))
        return "\n".join(lines) + "\n"


def _format_value(value: MetricValue) -> str:
    if value.count == 0:
        return "n/a"
    if value.std is None:
        return f"{value.mean:.4f}"
    return f"{value.mean:.4f} ± {value.std:.4f}"


def corpus_report(
    reference: list[LeadSheet],
    generated: list[LeadSheet] | None = None,
    *,
    columns: tuple[str, ...] = ("reference", "generated"),
) -> CorpusComparison:
    """One report per corpus, aligned for side-by-side comparison."""
    corpora = [reference] if generated is None else [reference, generated]
    names = columns[: len(corpora)]
    if len(names) != len(corpora):
        raise ValueError("one column name needed per corpus")
    return CorpusComparison(
        tuple(names), tuple(compute_report(c) for c in corpora)
    )
