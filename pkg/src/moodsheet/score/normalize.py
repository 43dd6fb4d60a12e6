"""Normalization pipeline: raw MusicXML scores to training-ready lead sheets.

Steps, in order: transpose every key segment to C major / A minor, unfold
repeat barlines, split key regions into independent instances, reduce
polyphony to the top voice, merge within-bar ties (cross-bar ties become
fresh onsets), pad pickup and underfull bars with rests, then filter each
candidate against the permitted chord/meter/duration/range sets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction

from moodsheet.score.model import (
    Bar,
    ChordSymbol,
    Event,
    InvariantError,
    KeyMode,
    LeadSheet,
    MAX_BARS,
    MIN_BARS,
    Rejection,
    TimeSignature,
    validate_leadsheet,
)
from moodsheet.score.musicxml import RawMeasure, RawNote, RawScore
from moodsheet.theory import (
    FILLABLE_TICKS,
    MELODY_MAX,
    MELODY_MIN,
    PERMITTED_DURATIONS,
    PERMITTED_TIME_SIGNATURES,
    TICKS_PER_QUARTER,
    ChordQuality,
    Grouping,
    bar_capacity,
    fill_with_rests,
    grouping_labels,
    phrase_lengths_for,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CandidateEvent:
    """Pre-filter event; ticks stay fractional so bad durations survive to filtering."""

    chord_root: int | None
    chord_kind: str | None  # MusicXML kind; None when no harmony is active
    chord_quality: ChordQuality | None  # None for rests and unsupported kinds
    melody: int | None
    ticks: Fraction


@dataclass
class CandidateBar:
    events: list[CandidateEvent]
    time_signature: tuple[int, int]
    phrase_start: bool = False


@dataclass
class CandidateSheet:
    bars: list[CandidateBar]
    key: KeyMode
    title: str = ""
    source: str = ""


@dataclass
class KeySegment:
    start: int  # measure index, inclusive
    end: int  # exclusive
    fifths: int
    mode: str  # "major" or "minor", resolved


MAJOR_TONIC_BY_FIFTHS = {f: (7 * f) % 12 for f in range(-7, 8)}


def detect_key_segments(raw: RawScore) -> list[KeySegment]:
    """Split the score at key-signature changes and resolve each segment's mode.

    When the document omits the mode, major vs relative minor is decided by
    which candidate tonic is the more frequent chord root in the segment
    (ties go to major).
    """
    boundaries: list[tuple[int, int, str | None]] = []
    fifths, mode = 0, None
    for i, measure in enumerate(raw.measures):
        if measure.key_fifths is not None:
            changed = measure.key_fifths != fifths or (
                measure.key_mode is not None and measure.key_mode != mode
            )
            if i == 0 or changed:
                fifths, mode = measure.key_fifths, measure.key_mode
                boundaries.append((i, fifths, mode))
    if not boundaries or boundaries[0][0] != 0:
        boundaries.insert(0, (0, 0, None))

    segments = []
    for j, (start, fifths, mode) in enumerate(boundaries):
        end = boundaries[j + 1][0] if j + 1 < len(boundaries) else len(raw.measures)
        if mode not in ("major", "minor"):
            mode = _infer_mode(raw.measures[start:end], fifths)
        segments.append(KeySegment(start=start, end=end, fifths=fifths, mode=mode))
    return segments


def _infer_mode(measures: list[RawMeasure], fifths: int) -> str:
    major_tonic = MAJOR_TONIC_BY_FIFTHS[fifths]
    minor_tonic = (major_tonic + 9) % 12
    major_hits = minor_hits = 0
    for measure in measures:
        for harmony in measure.harmonies:
            if harmony.root == major_tonic:
                major_hits += 1
            elif harmony.root == minor_tonic:
                minor_hits += 1
    return "minor" if minor_hits > major_hits else "major"


class TranspositionRangeError(ValueError):
    """Shifting a segment pushed a melody pitch outside MIDI 0-127."""


def transpose_to_c(raw: RawScore) -> RawScore:
    """Shift every key segment down so its tonic lands on C (major) or A (minor).

    Intervals and durations are untouched.  Segments are marked on their
    first measure with the normalized key so instance splitting can find
    region boundaries afterwards.
    """
    segments = detect_key_segments(raw)
    measures: list[RawMeasure] = []
    for segment in segments:
        tonic = MAJOR_TONIC_BY_FIFTHS[segment.fifths]
        if segment.mode == "minor":
            tonic = (tonic + 9) % 12
            shift = -((tonic - 9) % 12)
        else:
            shift = -(tonic % 12)
        for i in range(segment.start, segment.end):
            src = raw.measures[i]
            notes = []
            for note in src.notes:
                midi = note.midi
                if midi is not None:
                    midi += shift
                    if not 0 <= midi <= 127:
                        raise TranspositionRangeError(
                            f"measure {i}: pitch {note.midi} shifted to {midi}"
                        )
                notes.append(replace(note, midi=midi))
            harmonies = [
                replace(h, root=(h.root + shift) % 12 if h.root is not None else None)
                for h in src.harmonies
            ]
            measures.append(
                replace(
                    src,
                    notes=notes,
                    harmonies=harmonies,
                    key_fifths=0 if i == segment.start else None,
                    key_mode=segment.mode if i == segment.start else None,
                )
            )
    return RawScore(measures=measures, title=raw.title, source=raw.source)


def unfold_repeats(measures: list[RawMeasure]) -> list[RawMeasure]:
    """Duplicate each repeated span in place; repeat barlines are consumed."""
    out: list[RawMeasure] = []
    span_start = 0  # index into `out` where the active repeat span began
    for measure in measures:
        if measure.repeat_forward:
            span_start = len(out)
        out.append(measure)
        if measure.repeat_backward:
            span = [
                replace(m, repeat_forward=False, repeat_backward=False, key_fifths=None, key_mode=None)
                for m in out[span_start:]
            ]
            out[-1] = replace(out[-1], repeat_backward=False)
            out.extend(span)
            span_start = len(out)
    return [replace(m, repeat_forward=False) for m in out]


def _split_key_regions(measures: list[RawMeasure]) -> list[tuple[list[RawMeasure], str]]:
    regions: list[tuple[list[RawMeasure], str]] = []
    current: list[RawMeasure] = []
    mode = "major"
    for measure in measures:
        if measure.key_mode is not None and current:
            regions.append((current, mode))
            current = []
        if measure.key_mode is not None:
            mode = measure.key_mode
        current.append(measure)
    if current:
        regions.append((current, mode))
    return regions


def _top_voice(measures: list[RawMeasure]) -> int:
    """Voice kept as the melody: highest mean pitch, ties to the lowest number."""
    sums: dict[int, list[int]] = {}
    for measure in measures:
        for note in measure.notes:
            if note.midi is not None:
                sums.setdefault(note.voice, []).append(note.midi)
    if not sums:
        return 1
    return max(sums, key=lambda v: (sum(sums[v]) / len(sums[v]), -v))


def _collapse_chords(notes: list[RawNote]) -> list[RawNote]:
    """Reduce simultaneous note clusters to their highest pitch."""
    out: list[RawNote] = []
    for note in notes:
        if note.chord_with_previous and out:
            top = out[-1]
            if note.midi is not None and (top.midi is None or note.midi > top.midi):
                out[-1] = replace(note, onset=top.onset, duration=top.duration, chord_with_previous=False)
        else:
            out.append(note)
    return out


def _merge_ties(notes: list[RawNote]) -> list[RawNote]:
    """Merge tie chains within one measure; a dangling tie-stop starts fresh."""
    out: list[RawNote] = []
    for note in notes:
        previous = out[-1] if out else None
        if (
            note.tie_stop
            and previous is not None
            and previous.tie_start
            and previous.midi == note.midi
            and previous.onset + previous.duration == note.onset
        ):
            out[-1] = replace(
                previous,
                duration=previous.duration + note.duration,
                tie_start=note.tie_start,
            )
        else:
            out.append(note)
    return out


@dataclass
class _HarmonyState:
    root: int | None = None
    kind: str | None = None
    quality: ChordQuality | None = None
    seen: bool = False

    def update(self, root, kind, quality) -> None:
        self.seen = True
        if kind == "none":
            self.root, self.kind, self.quality = None, None, None
        else:
            self.root, self.kind, self.quality = root, kind, quality


def _build_candidate(
    measures: list[RawMeasure],
    mode: str,
    title: str,
    source: str,
    initial_ts: tuple[int, int] = (4, 4),
) -> CandidateSheet:
    voice = _top_voice(measures)
    time_signature = initial_ts
    harmony = _HarmonyState()
    bars: list[CandidateBar] = []
    phrase_next = False

    for measure in measures:
        if measure.time_signature is not None:
            time_signature = measure.time_signature
        try:
            capacity = Fraction(bar_capacity(*time_signature))
        except ValueError:
            capacity = Fraction(time_signature[0] * TICKS_PER_QUARTER * 4, time_signature[1])
        notes = [n for n in measure.notes if n.chord_with_previous or n.voice == voice]
        notes = _merge_ties(_collapse_chords(sorted(notes, key=lambda n: n.onset)))

        events: list[CandidateEvent] = []
        markers = sorted(measure.harmonies, key=lambda h: h.offset)
        marker_idx = 0
        cursor = Fraction(0)

        def advance_harmony(up_to: Fraction) -> None:
            nonlocal marker_idx
            while marker_idx < len(markers) and markers[marker_idx].offset <= up_to:
                m = markers[marker_idx]
                harmony.update(m.root, m.kind, m.quality)
                marker_idx += 1

        def emit(melody: int | None, quarters: Fraction) -> None:
            events.append(
                CandidateEvent(
                    chord_root=harmony.root,
                    chord_kind=harmony.kind,
                    chord_quality=harmony.quality,
                    melody=melody,
                    ticks=quarters * TICKS_PER_QUARTER,
                )
            )

        for note in notes:
            if note.onset > cursor:
                gap = note.onset - cursor
                advance_harmony(cursor)
                for ticks in _rest_ticks(gap * TICKS_PER_QUARTER):
                    events.append(
                        CandidateEvent(harmony.root, harmony.kind, harmony.quality, None, ticks)
                    )
                cursor = note.onset
            elif note.onset < cursor:
                continue  # overlapping lower line; top voice already covers it
            advance_harmony(note.onset)
            emit(note.midi, note.duration)
            cursor += note.duration
        advance_harmony(capacity / TICKS_PER_QUARTER)

        total = sum(e.ticks for e in events)
        if total < capacity:
            pad = _rest_ticks(capacity - total)
            rests = [
                CandidateEvent(harmony.root, harmony.kind, harmony.quality, None, t) for t in pad
            ]
            if not bars and events:
                events = rests + events  # pickup bar: pad in front
            else:
                events = events + rests
        bars.append(
            CandidateBar(
                events=events,
                time_signature=time_signature,
                phrase_start=phrase_next or measure.rehearsal_mark,
            )
        )
        phrase_next = measure.section_break

    key = KeyMode.A_MINOR if mode == "minor" else KeyMode.C_MAJOR
    return CandidateSheet(bars=bars[:MAX_BARS], key=key, title=title, source=source)


def _rest_ticks(gap: Fraction) -> list[Fraction]:
    """Rest durations covering a gap; unfillable gaps pass through for the filter."""
    if gap <= 0:
        return []
    if gap.denominator == 1 and int(gap) in FILLABLE_TICKS:
        return [Fraction(t) for t in fill_with_rests(int(gap))]
    return [gap]


def unfold_and_split(raw: RawScore) -> list[CandidateSheet]:
    """Unfold repeats, then emit one candidate instance per key region.

    Instances shorter than four bars after splitting are discarded (logged).
    """
    kept, discarded = _split_candidates(raw)
    for candidate in discarded:
        log.info(
            "discarding %s: only %d bars after splitting",
            candidate.source or candidate.title or "instance",
            len(candidate.bars),
        )
    return kept


def _split_candidates(raw: RawScore) -> tuple[list[CandidateSheet], list[CandidateSheet]]:
    measures = unfold_repeats(raw.measures)
    kept: list[CandidateSheet] = []
    short: list[CandidateSheet] = []
    ts = (4, 4)  # meter state carries across key splits; harmony starts fresh
    for region, mode in _split_key_regions(measures):
        candidate = _build_candidate(region, mode, raw.title, raw.source, initial_ts=ts)
        (kept if len(candidate.bars) >= MIN_BARS else short).append(candidate)
        for measure in region:
            if measure.time_signature is not None:
                ts = measure.time_signature
    return kept, short


def _recheck_leadsheet(sheet: LeadSheet) -> Rejection | None:
    """Re-run the admission rules on an already-typed lead sheet."""
    if not MIN_BARS <= len(sheet.bars) <= MAX_BARS:
        return Rejection("length", f"{len(sheet.bars)} bars")
    for bar in sheet.bars:
        if bar.time_signature not in PERMITTED_TIME_SIGNATURES:
            return Rejection("time signature", bar.time_signature.label)
        for event in bar.events:
            if event.ticks not in PERMITTED_DURATIONS:
                return Rejection("duration", f"{event.ticks} ticks")
            if event.melody is not None and not MELODY_MIN <= event.melody <= MELODY_MAX:
                return Rejection("melody range", f"pitch {event.melody}")
        total = bar.total_ticks()
        if total != bar.capacity:
            return Rejection("bar capacity", f"{total} of {bar.capacity} ticks")
    try:
        validate_leadsheet(sheet)
    except InvariantError as exc:
        return Rejection("length", str(exc))
    return None


def filter_instance(instance: CandidateSheet | LeadSheet) -> LeadSheet | Rejection:
    """Accept a candidate iff every restriction holds; rejections carry a reason.

    Accepted sheets come back fully validated, with phrase grouping labels
    assigned (source section marks when present, fixed 8-bar phrases
    otherwise).  Already-accepted LeadSheets pass through unchanged.
    """
    if isinstance(instance, LeadSheet):
        rejection = _recheck_leadsheet(instance)
        return instance if rejection is None else rejection

    if not MIN_BARS <= len(instance.bars) <= MAX_BARS:
        return Rejection("length", f"{len(instance.bars)} bars")
    for bar in instance.bars:
        if bar.time_signature not in PERMITTED_TIME_SIGNATURES:
            return Rejection("time signature", "%d/%d" % bar.time_signature)
        for event in bar.events:
            if event.chord_kind is not None and event.chord_quality is None:
                return Rejection("chord quality", event.chord_kind)
            if event.ticks.denominator != 1 or int(event.ticks) not in PERMITTED_DURATIONS:
                return Rejection("duration", f"{event.ticks} ticks")
            if event.melody is not None and not MELODY_MIN <= event.melody <= MELODY_MAX:
                return Rejection("melody range", f"pitch {event.melody}")
        total = sum(e.ticks for e in bar.events)
        if total != bar_capacity(*bar.time_signature):
            return Rejection("bar capacity", f"{total} ticks")

    phrase_starts = [i for i, bar in enumerate(instance.bars) if i > 0 and bar.phrase_start]
    if phrase_starts:
        edges = [0] + phrase_starts + [len(instance.bars)]
        lengths = [b - a for a, b in zip(edges, edges[1:])]
    else:
        lengths = phrase_lengths_for(len(instance.bars))

    bars = [
        Bar(
            events=[
                Event(
                    chord=(
                        ChordSymbol(e.chord_root, e.chord_quality)
                        if e.chord_quality is not None and e.chord_root is not None
                        else None
                    ),
                    melody=e.melody,
                    ticks=int(e.ticks),
                )
                for e in cb.events
            ],
            time_signature=TimeSignature(*cb.time_signature),
            grouping=label,
        )
        for cb, label in zip(instance.bars, grouping_labels(lengths))
    ]
    ls = LeadSheet(bars=bars, key=instance.key, title=instance.title, source=instance.source)
    validate_leadsheet(ls)
    return ls


def normalize_source(
    document: str, source: str = ""
) -> tuple[list[LeadSheet], list[Rejection]]:
    """Full pipeline for one MusicXML document: parse, transpose, split, filter."""
    from moodsheet.score.musicxml import parse_musicxml

    raw = parse_musicxml(document)
    raw.source = source
    transposed = transpose_to_c(raw)
    kept, short = _split_candidates(transposed)
    accepted: list[LeadSheet] = []
    rejections: list[Rejection] = [Rejection("length", f"{len(c.bars)} bars") for c in short]
    for candidate in kept:
        result = filter_instance(candidate)
        if isinstance(result, Rejection):
            rejections.append(result)
        else:
            accepted.append(result)
    return accepted, rejections
