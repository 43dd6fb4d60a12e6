"""Partwise MusicXML ingestion and export for lead sheets.

The parser keeps only what the normalization pipeline needs: key and time
signatures, repeat barlines, section marks, chord symbols (harmony
elements) and notes with ties and voices, all in document order.  Chord
kinds outside the eight permitted qualities are kept but flagged, so the
filter stage can reject them with a reason instead of crashing here.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from fractions import Fraction

from moodsheet.score.model import ChordSymbol, KeyMode, LeadSheet, TimeSignature
from moodsheet.theory import (
    DURATION_TICKS,
    PITCH_CLASS_NAMES,
    TICKS_PER_QUARTER,
    ChordQuality,
)


class MusicXMLError(ValueError):
    """Malformed document (XML syntax or missing required structure)."""


class UnusableSourceError(MusicXMLError):
    """Document parsed but lacks chord symbols or melody notes."""


STEP_SEMITONES = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}

# MusicXML harmony kinds that map onto the permitted chord qualities.
KIND_TO_QUALITY = {
    "major": ChordQuality.MAJOR,
    "minor": ChordQuality.MINOR,
    "dominant": ChordQuality.DOMINANT_SEVENTH,
    "dominant-seventh": ChordQuality.DOMINANT_SEVENTH,
    "major-seventh": ChordQuality.MAJOR_SEVENTH,
    "minor-seventh": ChordQuality.MINOR_SEVENTH,
    "dominant-ninth": ChordQuality.DOMINANT_NINTH,
    "minor-ninth": ChordQuality.MINOR_NINTH,
    "diminished": ChordQuality.DIMINISHED,
}


@dataclass
class RawNote:
    onset: Fraction  # position within the measure, in quarter notes
    duration: Fraction  # in quarter notes
    midi: int | None  # None for rests
    voice: int
    chord_with_previous: bool
    tie_start: bool = False
    tie_stop: bool = False


@dataclass
class RawHarmony:
    offset: Fraction  # position within the measure, in quarter notes
    root: int | None  # pitch class; None for "no chord"
    kind: str
    quality: ChordQuality | None  # None when the kind is not permitted
    label: str = ""


@dataclass
class RawMeasure:
    number: str = ""
    key_fifths: int | None = None  # set when the key changes here
    key_mode: str | None = None
    time_signature: tuple[int, int] | None = None  # set when the meter changes here
    repeat_forward: bool = False
    repeat_backward: bool = False
    section_break: bool = False  # double barline (right): phrase ends after this bar
    rehearsal_mark: bool = False  # rehearsal letter: phrase starts at this bar
    notes: list[RawNote] = field(default_factory=list)
    harmonies: list[RawHarmony] = field(default_factory=list)


@dataclass
class RawScore:
    measures: list[RawMeasure]
    title: str = ""
    source: str = ""


def _text(element: ET.Element | None, default: str = "") -> str:
    if element is None or element.text is None:
        return default
    return element.text.strip()


def _parse_pitch(note: ET.Element) -> int | None:
    pitch = note.find("pitch")
    if pitch is None:
        return None  # rest or unpitched
    step = _text(pitch.find("step"))
    if step not in STEP_SEMITONES:
        raise MusicXMLError(f"bad pitch step {step!r}")
    alter = int(round(float(_text(pitch.find("alter"), "0") or "0")))
    octave = int(_text(pitch.find("octave")))
    return (octave + 1) * 12 + STEP_SEMITONES[step] + alter


def _parse_harmony(harmony: ET.Element, offset: Fraction) -> RawHarmony:
    root = harmony.find("root")
    kind = _text(harmony.find("kind"), "major") or "major"
    if kind == "none" or root is None:
        return RawHarmony(offset=offset, root=None, kind="none", quality=None, label="N.C.")
    step = _text(root.find("root-step"))
    if step not in STEP_SEMITONES:
        raise MusicXMLError(f"bad harmony root {step!r}")
    alter = int(round(float(_text(root.find("root-alter"), "0") or "0")))
    pc = (STEP_SEMITONES[step] + alter) % 12
    quality = KIND_TO_QUALITY.get(kind)
    if harmony.find("degree") is not None:
        # Altered/added degrees (b9, add9, ...) leave the permitted set.
        quality = None
        kind = f"{kind}+degree"
    label = f"{PITCH_CLASS_NAMES[pc]} {kind}"
    return RawHarmony(offset=offset, root=pc, kind=kind, quality=quality, label=label)


def _parse_measure(measure: ET.Element, divisions: int) -> tuple[RawMeasure, int]:
    out = RawMeasure(number=measure.get("number", ""))
    cursor = Fraction(0)
    previous_duration = Fraction(0)
    for child in measure:
        if child.tag == "attributes":
            div = child.find("divisions")
            if div is not None:
                divisions = int(_text(div))
                if divisions <= 0:
                    raise MusicXMLError(f"bad divisions {divisions}")
            key = child.find("key")
            if key is not None:
                out.key_fifths = int(_text(key.find("fifths"), "0"))
                mode = _text(key.find("mode"))
                out.key_mode = mode or None
            time = child.find("time")
            if time is not None:
                out.time_signature = (
                    int(_text(time.find("beats"))),
                    int(_text(time.find("beat-type"))),
                )
        elif child.tag == "harmony":
            offset_el = child.find("offset")
            offset = cursor
            if offset_el is not None:
                offset = cursor + Fraction(int(float(_text(offset_el, "0"))), divisions)
            out.harmonies.append(_parse_harmony(child, offset))
        elif child.tag == "note":
            if child.find("grace") is not None:
                continue
            duration = Fraction(int(_text(child.find("duration"), "0")), divisions)
            is_chord = child.find("chord") is not None
            onset = cursor - previous_duration if is_chord else cursor
            ties = [t.get("type") for t in child.findall("tie")]
            out.notes.append(
                RawNote(
                    onset=onset,
                    duration=duration,
                    midi=_parse_pitch(child),
                    voice=int(_text(child.find("voice"), "1") or "1"),
                    chord_with_previous=is_chord,
                    tie_start="start" in ties,
                    tie_stop="stop" in ties,
                )
            )
            if not is_chord:
                cursor += duration
                previous_duration = duration
        elif child.tag == "backup":
            cursor -= Fraction(int(_text(child.find("duration"), "0")), divisions)
            previous_duration = Fraction(0)
        elif child.tag == "forward":
            cursor += Fraction(int(_text(child.find("duration"), "0")), divisions)
            previous_duration = Fraction(0)
        elif child.tag == "barline":
            repeat = child.find("repeat")
            if repeat is not None:
                direction = repeat.get("direction")
                if direction == "forward":
                    out.repeat_forward = True
                elif direction == "backward":
                    out.repeat_backward = True
            if _text(child.find("bar-style")) == "light-light":
                out.section_break = True
        elif child.tag == "direction":
            if child.find(".//rehearsal") is not None:
                out.rehearsal_mark = True
    return out, divisions


def parse_musicxml(document: str) -> RawScore:
    """Parse a partwise MusicXML document into a raw score.

    Raises MusicXMLError with line information on syntax errors and
    UnusableSourceError when no part carries both chord symbols and
    melody notes.
    """
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        line, column = exc.position
        raise MusicXMLError(f"malformed XML at line {line}, column {column}: {exc.msg}") from exc
    if root.tag != "score-partwise":
        raise MusicXMLError(f"expected score-partwise document, got <{root.tag}>")

    title = _text(root.find("work/work-title")) or _text(root.find("movement-title"))

    best: RawScore | None = None
    saw_notes = False
    saw_harmony = False
    for part in root.findall("part"):
        measures: list[RawMeasure] = []
        divisions = TICKS_PER_QUARTER
        for measure in part.findall("measure"):
            parsed, divisions = _parse_measure(measure, divisions)
            measures.append(parsed)
        has_notes = any(n.midi is not None for m in measures for n in m.notes)
        has_harmony = any(m.harmonies for m in measures)
        saw_notes = saw_notes or has_notes
        saw_harmony = saw_harmony or has_harmony
        if has_notes and has_harmony and best is None:
            best = RawScore(measures=measures, title=title)
    if best is None:
        if not saw_harmony:
            raise UnusableSourceError("unusable source: no chord symbols in any part")
        raise UnusableSourceError("unusable source: no melody notes in any part")
    return best


# --- export ---------------------------------------------------------------

_TICKS_TO_TYPE = {
    96: ("whole", 0, None),
    72: ("half", 1, None),
    48: ("half", 0, None),
    36: ("quarter", 1, None),
    24: ("quarter", 0, None),
    18: ("eighth", 1, None),
    16: ("quarter", 0, (3, 2)),
    12: ("eighth", 0, None),
    8: ("eighth", 0, (3, 2)),
    6: ("16th", 0, None),
}

_QUALITY_TO_KIND = {
    ChordQuality.MAJOR: "major",
    ChordQuality.MINOR: "minor",
    ChordQuality.DOMINANT_SEVENTH: "dominant",
    ChordQuality.MAJOR_SEVENTH: "major-seventh",
    ChordQuality.MINOR_SEVENTH: "minor-seventh",
    ChordQuality.DOMINANT_NINTH: "dominant-ninth",
    ChordQuality.MINOR_NINTH: "minor-ninth",
    ChordQuality.DIMINISHED: "diminished",
}

# Spell roots with sharps; MusicXML wants step + alter.
_PC_TO_STEP_ALTER = {
    0: ("C", 0), 1: ("C", 1), 2: ("D", 0), 3: ("D", 1), 4: ("E", 0), 5: ("F", 0),
    6: ("F", 1), 7: ("G", 0), 8: ("G", 1), 9: ("A", 0), 10: ("A", 1), 11: ("B", 0),
}


def _note_element(event_midi: int | None, ticks: int) -> ET.Element:
    note = ET.Element("note")
    if event_midi is None:
        ET.SubElement(note, "rest")
    else:
        pitch = ET.SubElement(note, "pitch")
        pc = event_midi % 12
        step, alter = _PC_TO_STEP_ALTER[pc]
        ET.SubElement(pitch, "step").text = step
        if alter:
            ET.SubElement(pitch, "alter").text = str(alter)
        ET.SubElement(pitch, "octave").text = str(event_midi // 12 - 1)
    ET.SubElement(note, "duration").text = str(ticks)
    ET.SubElement(note, "voice").text = "1"
    type_name, dots, time_mod = _TICKS_TO_TYPE[ticks]
    ET.SubElement(note, "type").text = type_name
    for _ in range(dots):
        ET.SubElement(note, "dot")
    if time_mod is not None:
        tm = ET.SubElement(note, "time-modification")
        ET.SubElement(tm, "actual-notes").text = str(time_mod[0])
        ET.SubElement(tm, "normal-notes").text = str(time_mod[1])
    return note


def _harmony_element(chord: ChordSymbol | None) -> ET.Element:
    harmony = ET.Element("harmony")
    root = ET.SubElement(harmony, "root")
    if chord is None:
        ET.SubElement(root, "root-step").text = "C"
        ET.SubElement(harmony, "kind").text = "none"
        return harmony
    step, alter = _PC_TO_STEP_ALTER[chord.root]
    ET.SubElement(root, "root-step").text = step
    if alter:
        ET.SubElement(root, "root-alter").text = str(alter)
    ET.SubElement(harmony, "kind").text = _QUALITY_TO_KIND[chord.quality]
    return harmony


def write_musicxml(ls: LeadSheet, title: str | None = None) -> str:
    """Render a normalized lead sheet as a single-part MusicXML document."""
    root = ET.Element("score-partwise", version="3.1")
    work = ET.SubElement(root, "work")
    ET.SubElement(work, "work-title").text = title or ls.title or "Lead Sheet"
    part_list = ET.SubElement(root, "part-list")
    score_part = ET.SubElement(part_list, "score-part", id="P1")
    ET.SubElement(score_part, "part-name").text = "Lead"
    part = ET.SubElement(root, "part", id="P1")

    previous_ts: TimeSignature | None = None
    active_chord: ChordSymbol | None = None
    chord_written = False
    for i, bar in enumerate(ls.bars):
        measure = ET.SubElement(part, "measure", number=str(i + 1))
        attributes = ET.Element("attributes")
        if i == 0:
            ET.SubElement(attributes, "divisions").text = str(TICKS_PER_QUARTER)
            key = ET.SubElement(attributes, "key")
            ET.SubElement(key, "fifths").text = "0"
            ET.SubElement(key, "mode").text = ls.key.value
        if bar.time_signature != previous_ts:
            time = ET.SubElement(attributes, "time")
            ET.SubElement(time, "beats").text = str(bar.time_signature.numerator)
            ET.SubElement(time, "beat-type").text = str(bar.time_signature.denominator)
            previous_ts = bar.time_signature
        if len(attributes):
            measure.append(attributes)
        for event in bar.events:
            if event.chord != active_chord or not chord_written:
                measure.append(_harmony_element(event.chord))
                active_chord = event.chord
                chord_written = True
            measure.append(_note_element(event.melody, event.ticks))
    ET.indent(root)
    header = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<!DOCTYPE score-partwise PUBLIC "-//Recordare//DTD MusicXML 3.1 Partwise//EN" '
        '"http://www.musicxml.org/dtds/partwise.dtd">\n'
    )
    return header + ET.tostring(root, encoding="unicode") + "\n"


DURATION_NAMES = {v: k for k, v in DURATION_TICKS.items()}
