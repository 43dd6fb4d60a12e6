"""Wire schemas for the HTTP service.

Conditions travel as plain strings (meter label, phrase-position label,
valence descriptor, density) and lead sheets as the shared corpus JSON
shape; every response carries the schema version.
"""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from moodsheet.affect import ValenceDescriptor
from moodsheet.score import MAX_BARS, TimeSignature
from moodsheet.theory import PERMITTED_TIME_SIGNATURES, Grouping
from moodsheet.tokenizer import BarCondition, ConditionTrack, Density

SCHEMA_VERSION = 1

_TS_LABELS = tuple(TimeSignature(*ts).label for ts in PERMITTED_TIME_SIGNATURES)


class ApiModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ConditionCell(ApiModel):
    """One bar's requested conditions, all as wire strings."""

    time_signature: str = Field(examples=["4/4"])
    grouping: str = Field(examples=["first1"])
    valence: str = Field(examples=["high"])
    density: str = Field(examples=["medium"])

    def to_domain(self) -> BarCondition:
        if self.time_signature not in _TS_LABELS:
            raise ValueError(
                f"time signature {self.time_signature!r} not one of {_TS_LABELS}"
            )
        return BarCondition(
            TimeSignature.parse(self.time_signature),
            Grouping(self.grouping),
            ValenceDescriptor(self.valence),
            Density(self.density),
        )

    @classmethod
    def from_domain(cls, condition: BarCondition) -> "ConditionCell":
        return cls(
            time_signature=condition.time_signature.label,
            grouping=condition.grouping.value,
            valence=condition.valence.value,
            density=condition.density.value,
        )


def condition_track_from_cells(cells: list[ConditionCell]) -> ConditionTrack:
    conditions = [cell.to_domain() for cell in cells]
    if len({c.time_signature for c in conditions}) > 1:
        raise ValueError("all bars of a piece must share one time signature")
    return ConditionTrack(tuple(conditions))


class GenerateRequest(ApiModel):
    model: str
    conditions: list[ConditionCell] = Field(min_length=1, max_length=MAX_BARS)
    key: str = "major"
    seed: int = 0
    temperature: float | None = Field(default=None, gt=0)
    greedy: bool = False


class RealizedBar(ApiModel):
    requested: ConditionCell
    realized_valence: str
    realized_density: str
    valence_matches: bool
    density_matches: bool


class GenerateResponse(ApiModel):
    schema_version: int = SCHEMA_VERSION
    model: str
    seed: int
    temperature: float | None
    lead_sheet: dict
    tokens: list[int]
    musicxml: str
    bars: list[RealizedBar]
    piece_valence: float
    piece_descriptor: str


class TemplateRequest(ApiModel):
    bars: int = Field(ge=1, le=MAX_BARS)
    profile: str = "default"
    seed: int | None = None


class TemplateResponse(ApiModel):
    schema_version: int = SCHEMA_VERSION
    profile: str
    conditions: list[ConditionCell]


class ValenceRequest(ApiModel):
    lead_sheet: dict


class ValenceResponse(ApiModel):
    schema_version: int = SCHEMA_VERSION
    bars: list[str]
    piece_valence: float
    piece_descriptor: str


class MetricsRequest(ApiModel):
    sheets: list[dict] = Field(min_length=1)
    reference: list[dict] | None = None


class MetricsResponse(ApiModel):
    schema_version: int = SCHEMA_VERSION
    report: dict


class ModelInfo(ApiModel):
    name: str
    architecture: str
    parameters: int


class ModelsResponse(ApiModel):
    schema_version: int = SCHEMA_VERSION
    models: list[ModelInfo]
    profiles: list[str]


class VocabResponse(ApiModel):
    schema_version: int = SCHEMA_VERSION
    encoder_size: int
    decoder_size: int
    content_hash: str
    encoder_tokens: list[str]
    decoder_tokens: list[str]
