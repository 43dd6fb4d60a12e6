"""Token codecs: per-bar conditions in, lead sheet event streams out.

The encoder side describes each bar with four symbols (meter, phrase
position, valence descriptor, note density).  The decoder side spells
the music itself as repeating chord/melody/duration triples inside bar
fences.  Both sides share the sentinel tokens PAD/START/END/BAR; the
decoder keeps one flat dictionary covering chords, pitches, and
durations.
"""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

from moodsheet.affect import ValenceDescriptor, bar_descriptors
from moodsheet.score import Bar, ChordSymbol, Event, KeyMode, LeadSheet, TimeSignature
from moodsheet.theory import (
    DURATION_TICKS,
    MELODY_MAX,
    MELODY_MIN,
    PERMITTED_TIME_SIGNATURES,
    ChordQuality,
    Grouping,
)

__all__ = [
    "PAD",
    "START",
    "END",
    "BAR",
    "Density",
    "BarCondition",
    "ConditionTrack",
    "TokenSequence",
    "GrammarError",
    "TokenError",
    "Vocabulary",
    "density_bucket",
    "conditions_of",
    "encode_conditions",
    "decode_conditions",
    "encode_leadsheet",
    "decode_tokens",
]

PAD = "<pad>"
START = "<start>"
END = "<end>"
BAR = "<bar>"
_SENTINELS = (PAD, START, END, BAR)


class Density(enum.Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


def density_bucket(event_count: int) -> Density:
    """0-2 low, 3-5 medium, 6+ high."""
    if event_count < 0:
        raise ValueError("event count must be non-negative")
    if event_count <= 2:
        return Density.LOW
    if event_count <= 5:
        return Density.MEDIUM
    return Density.HIGH


class BarCondition(NamedTuple):
    time_signature: TimeSignature
    grouping: Grouping
    valence: ValenceDescriptor
    density: Density


@dataclass(frozen=True)
class ConditionTrack:
    """One BarCondition per bar, in order."""

    bars: tuple[BarCondition, ...]

    def __post_init__(self) -> None:
        if not self.bars:
            raise ValueError("condition track must cover at least one bar")
        object.__setattr__(self, "bars", tuple(self.bars))

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self) -> Iterator[BarCondition]:
        return iter(self.bars)

    def __getitem__(self, i: int) -> BarCondition:
        return self.bars[i]


class TokenSequence(NamedTuple):
    ids: tuple[int, ...]
    role: str  # "encoder" or "decoder"


class TokenError(ValueError):
    """A symbol outside the vocabulary."""


class GrammarError(ValueError):
    """A decoder stream that breaks the event grammar."""

    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (token index {index})")
        self.index = index


def conditions_of(ls: LeadSheet) -> ConditionTrack:
    """Read the per-bar condition 4-tuple off a normalized lead sheet."""
    descriptors = bar_descriptors(ls)
    bars = tuple(
        BarCondition(bar.time_signature, bar.grouping, descriptors[i], density_bucket(len(bar.events)))
        for i, bar in enumerate(ls.bars)
    )
    return ConditionTrack(bars)


def _sorted_meters() -> list[TimeSignature]:
    return [TimeSignature(*ts) for ts in sorted(PERMITTED_TIME_SIGNATURES)]


def _encoder_tokens() -> list[str]:
    tokens = list(_SENTINELS)
    tokens += [f"ts:{ts.label}" for ts in _sorted_meters()]
    tokens += [f"grouping:{g.value}" for g in Grouping]
    tokens += [f"valence:{v.value}" for v in ValenceDescriptor]
    tokens += [f"density:{d.value}" for d in Density]
    return tokens


def _chord_token(chord: ChordSymbol | None) -> str:
    return "chord:rest" if chord is None else f"chord:{chord.label}"


def _melody_token(melody: int | None) -> str:
    return "melody:rest" if melody is None else f"melody:{melody}"


def _duration_token(ticks: int) -> str:
    return f"dur:{ticks}"


def _decoder_tokens() -> list[str]:
    tokens = list(_SENTINELS)
    tokens += [
        _chord_token(ChordSymbol(root, quality))
        for root in range(12)
        for quality in ChordQuality
    ]
    tokens.append("chord:rest")
    tokens += [_melody_token(p) for p in range(MELODY_MIN, MELODY_MAX + 1)]
    tokens.append("melody:rest")
    tokens += [_duration_token(t) for t in sorted(DURATION_TICKS.values())]
    return tokens


class Vocabulary:
    """Dense, order-stable token tables for both sides of the model."""

    FORMAT = "moodsheet-vocab"
    VERSION = 1

    def __init__(self, encoder: list[str], decoder: list[str]):
        if len(set(encoder)) != len(encoder) or len(set(decoder)) != len(decoder):
            raise ValueError("duplicate tokens in vocabulary")
        for side in (encoder, decoder):
            if side[:4] != list(_SENTINELS):
                raise ValueError("vocabulary must start with <pad>, <start>, <end>, <bar>")
        self.encoder_tokens = list(encoder)
        self.decoder_tokens = list(decoder)
        self._enc_ids = {t: i for i, t in enumerate(encoder)}
        self._dec_ids = {t: i for i, t in enumerate(decoder)}

    # -- construction ------------------------------------------------

    @classmethod
    def full(cls) -> "Vocabulary":
        """Every token the representation can ever need."""
        return cls(_encoder_tokens(), _decoder_tokens())

    @classmethod
    def from_corpus(cls, sheets: Iterable[LeadSheet]) -> "Vocabulary":
        """Restrict decoder chords/pitches/durations to those observed."""
        chords: set[str] = set()
        melodies: set[str] = set()
        durations: set[str] = set()
        for ls in sheets:
            for event in ls.events():
                chords.add(_chord_token(event.chord))
                melodies.add(_melody_token(event.melody))
                durations.add(_duration_token(event.ticks))
        decoder = list(_SENTINELS)
        decoder += [t for t in _decoder_tokens()[4:] if t in chords | melodies | durations]
        return cls(_encoder_tokens(), decoder)

    # -- lookups -----------------------------------------------------

    def encoder_id(self, token: str) -> int:
        try:
            return self._enc_ids[token]
        except KeyError:
            raise TokenError(f"unknown encoder token {token!r}") from None

    def decoder_id(self, token: str) -> int:
        try:
            return self._dec_ids[token]
        except KeyError:
            raise TokenError(f"unknown decoder token {token!r}") from None

    @property
    def pad_id(self) -> int:
        return 0

    @property
    def start_id(self) -> int:
        return 1

    @property
    def end_id(self) -> int:
        return 2

    @property
    def bar_id(self) -> int:
        return 3

    def encoder_size(self) -> int:
        return len(self.encoder_tokens)

    def decoder_size(self) -> int:
        return len(self.decoder_tokens)

    def decoder_kind(self, token_id: int) -> str:
        """One of pad/start/end/bar/chord/melody/duration."""
        token = self.decoder_tokens[token_id]
        if token == PAD:
            return "pad"
        if token == START:
            return "start"
        if token == END:
            return "end"
        if token == BAR:
            return "bar"
        return {"chord": "chord", "melody": "melody", "dur": "duration"}[token.split(":", 1)[0]]

    def chord_ids(self) -> list[int]:
        return [i for i, t in enumerate(self.decoder_tokens) if t.startswith("chord:")]

    def melody_ids(self) -> list[int]:
        return [i for i, t in enumerate(self.decoder_tokens) if t.startswith("melody:")]

    def duration_ids(self) -> list[int]:
        return [i for i, t in enumerate(self.decoder_tokens) if t.startswith("dur:")]

    def duration_ticks(self, token_id: int) -> int:
        token = self.decoder_tokens[token_id]
        if not token.startswith("dur:"):
            raise TokenError(f"{token!r} is not a duration token")
        return int(token.split(":", 1)[1])

    # -- serialization -----------------------------------------------

    def content_hash(self) -> str:
        payload = json.dumps(
            [self.encoder_tokens, self.decoder_tokens], separators=(",", ":")
        ).encode()
        return hashlib.sha256(payload).hexdigest()

    def to_dict(self) -> dict:
        return {
            "format": self.FORMAT,
            "version": self.VERSION,
            "encoder": self.encoder_tokens,
            "decoder": self.decoder_tokens,
            "hash": self.content_hash(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "Vocabulary":
        if raw.get("format") != cls.FORMAT:
            raise ValueError(f"not a vocabulary file: format={raw.get('format')!r}")
        if raw.get("version") != cls.VERSION:
            raise ValueError(f"unsupported vocabulary version {raw.get('version')!r}")
        vocab = cls(raw["encoder"], raw["decoder"])
        stored = raw.get("hash")
        if stored is not None and stored != vocab.content_hash():
            raise ValueError("vocabulary hash mismatch; file is corrupt or edited")
        return vocab

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Vocabulary):
            return NotImplemented
        return (
            self.encoder_tokens == other.encoder_tokens
            and self.decoder_tokens == other.decoder_tokens
        )


def encode_conditions(ct: ConditionTrack, vocab: Vocabulary) -> TokenSequence:
    """[START, (BAR, meter, grouping, valence, density) x n, END]."""
    ids = [vocab.start_id]
    for cond in ct:
        ids.append(vocab.bar_id)
        ids.append(vocab.encoder_id(f"ts:{cond.time_signature.label}"))
        ids.append(vocab.encoder_id(f"grouping:{cond.grouping.value}"))
        ids.append(vocab.encoder_id(f"valence:{cond.valence.value}"))
        ids.append(vocab.encoder_id(f"density:{cond.density.value}"))
    ids.append(vocab.end_id)
    return TokenSequence(tuple(ids), "encoder")


def decode_conditions(seq: TokenSequence, vocab: Vocabulary) -> ConditionTrack:
    ids = list(seq.ids)
    if len(ids) < 7 or (len(ids) - 2) % 5 != 0:
        raise GrammarError("condition sequence length must be 5n+2", len(ids))
    if ids[0] != vocab.start_id:
        raise GrammarError("expected START", 0)
    if ids[-1] != vocab.end_id:
        raise GrammarError("expected END", len(ids) - 1)
    bars = []
    for base in range(1, len(ids) - 1, 5):
        if ids[base] != vocab.bar_id:
            raise GrammarError("expected BAR", base)
        ts_tok, g_tok, v_tok, d_tok = (vocab.encoder_tokens[i] for i in ids[base + 1 : base + 5])
        try:
            bars.append(
                BarCondition(
                    TimeSignature.parse(ts_tok.removeprefix("ts:")),
                    Grouping(g_tok.removeprefix("grouping:")),
                    ValenceDescriptor(v_tok.removeprefix("valence:")),
                    Density(d_tok.removeprefix("density:")),
                )
            )
        except ValueError as exc:
            raise GrammarError(f"bad condition slot: {exc}", base + 1) from None
    return ConditionTrack(tuple(bars))


def encode_leadsheet(ls: LeadSheet, vocab: Vocabulary) -> TokenSequence:
    """[START, (BAR, (chord, melody, duration) x events) x bars, END]."""
    ids = [vocab.start_id]
    for bar in ls.bars:
        ids.append(vocab.bar_id)
        for event in bar.events:
            ids.append(vocab.decoder_id(_chord_token(event.chord)))
            ids.append(vocab.decoder_id(_melody_token(event.melody)))
            ids.append(vocab.decoder_id(_duration_token(event.ticks)))
    ids.append(vocab.end_id)
    return TokenSequence(tuple(ids), "decoder")


def _parse_chord(token: str) -> ChordSymbol | None:
    body = token.removeprefix("chord:")
    return None if body == "rest" else ChordSymbol.parse(body)


def _parse_melody(token: str) -> int | None:
    body = token.removeprefix("melody:")
    return None if body == "rest" else int(body)


def decode_tokens(
    seq: TokenSequence,
    ct: ConditionTrack,
    vocab: Vocabulary,
    *,
    key: KeyMode = KeyMode.C_MAJOR,
    title: str = "",
    source: str = "",
) -> LeadSheet:
    """Rebuild a lead sheet from a decoder stream.

    Meter and grouping come from the condition track; the stream carries
    only the musical surface.  Raises GrammarError with the offending
    token index on any structural violation, including a bar whose
    durations overflow its meter's capacity.
    """
    ids = seq.ids
    if not ids:
        raise GrammarError("empty sequence", 0)
    if ids[0] != vocab.start_id:
        raise GrammarError("expected START", 0)

    bars: list[Bar] = []
    events: list[Event] = []
    pending: dict = {}
    filled = 0
    expect = "bar"  # bar -> chord -> melody -> duration -> (chord|bar|end)
    bar_index = -1

    def close_bar(index: int) -> None:
        nonlocal events, filled
        capacity = ct[bar_index].time_signature.capacity
        if filled != capacity:
            raise GrammarError(
                f"bar {bar_index + 1} holds {filled} of {capacity} ticks", index
            )
        bars.append(Bar(events, ct[bar_index].time_signature, ct[bar_index].grouping))
        events = []
        filled = 0

    i = 1
    while i < len(ids):
        kind = vocab.decoder_kind(ids[i])
        token = vocab.decoder_tokens[ids[i]]
        if kind in ("pad", "start"):
            raise GrammarError(f"unexpected {token}", i)
        if kind == "end":
            if expect == "bar":
                raise GrammarError("END before any bar", i)
            if expect in ("melody", "duration"):
                raise GrammarError("END inside an event", i)
            if not events:
                raise GrammarError("END in an empty bar", i)
            close_bar(i)
            if bar_index + 1 != len(ct):
                raise GrammarError(
                    f"stream has {bar_index + 1} bars, conditions demand {len(ct)}", i
                )
            if i != len(ids) - 1:
                raise GrammarError("tokens after END", i + 1)
            return LeadSheet(bars, key, title=title, source=source)
        if kind == "bar":
            if expect == "bar":
                pass  # first bar
            elif expect == "chord" and events:
                close_bar(i)
            else:
                raise GrammarError("BAR inside an event", i)
            bar_index += 1
            if bar_index >= len(ct):
                raise GrammarError(f"more bars than the {len(ct)} conditioned", i)
            expect = "chord"
            i += 1
            continue
        if kind == "chord":
            if expect != "chord":
                raise GrammarError(f"chord token while expecting {expect}", i)
            pending = {"chord": _parse_chord(token)}
            expect = "melody"
        elif kind == "melody":
            if expect != "melody":
                raise GrammarError(f"melody token while expecting {expect}", i)
            pending["melody"] = _parse_melody(token)
            expect = "duration"
        elif kind == "duration":
            if expect != "duration":
                raise GrammarError(f"duration token while expecting {expect}", i)
            ticks = vocab.duration_ticks(ids[i])
            capacity = ct[bar_index].time_signature.capacity
            if filled + ticks > capacity:
                raise GrammarError(
                    f"bar {bar_index + 1} overflows its {capacity}-tick capacity", i
                )
            events.append(Event(pending["chord"], pending["melody"], ticks))
            filled += ticks
            pending = {}
            expect = "chord"
        i += 1
    raise GrammarError("stream ended without END", len(ids) - 1)
