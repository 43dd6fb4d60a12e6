"""Lead sheet domain model, MusicXML ingestion, and corpus normalization."""

from moodsheet.score.model import (
    MAX_BARS,
    MIN_BARS,
    Bar,
    ChordSymbol,
    Event,
    InvariantError,
    KeyMode,
    LeadSheet,
    Rejection,
    TimeSignature,
    UnsupportedQualityError,
    validate_leadsheet,
    with_grouping,
)
from moodsheet.score.musicxml import (
    MusicXMLError,
    UnusableSourceError,
    parse_musicxml,
    write_musicxml,
)
from moodsheet.score.normalize import (
    filter_instance,
    normalize_source,
    transpose_to_c,
    unfold_and_split,
)
from moodsheet.score.corpus import (
    corpus_from_dict,
    corpus_hash,
    corpus_to_dict,
    leadsheet_from_dict,
    leadsheet_to_dict,
    load_corpus,
    save_corpus,
    split_dataset,
)

__all__ = [
    "MAX_BARS",
    "MIN_BARS",
    "Bar",
    "ChordSymbol",
    "Event",
    "InvariantError",
    "KeyMode",
    "LeadSheet",
    "MusicXMLError",
    "Rejection",
    "TimeSignature",
    "UnsupportedQualityError",
    "UnusableSourceError",
    "corpus_from_dict",
    "corpus_hash",
    "corpus_to_dict",
    "filter_instance",
    "leadsheet_from_dict",
    "leadsheet_to_dict",
    "load_corpus",
    "normalize_source",
    "parse_musicxml",
    "save_corpus",
    "split_dataset",
    "transpose_to_c",
    "unfold_and_split",
    "validate_leadsheet",
    "with_grouping",
    "write_musicxml",
]
