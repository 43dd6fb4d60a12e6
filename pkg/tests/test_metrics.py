"""Oracle-first tests for the objective evaluation battery."""

import json
import math
import random

import numpy as np
import pytest

from moodsheet.metrics import (
    KEY_CENTERS,
    PointSet,
    TEC,
    TensionProfile,
    brute_force_mtps,
    chord_chroma,
    cloud_diameter,
    compute_report,
    corpus_report,
    cosiatec,
    decompress,
    fifth_index,
    melody_chroma,
    rest_ratio,
    siatec,
    spiral_position,
    tension_profile,
    tonal_distance,
    tonnetz_centroid,
    used_pitch_classes,
)
from moodsheet.metrics.patterns import maximal_translatable_patterns, translators_of
from moodsheet.metrics.report import METRIC_NAMES
from moodsheet.metrics.tension import HEIGHT, cloud_center
from moodsheet.score import Bar, ChordSymbol, Event, KeyMode, LeadSheet, TimeSignature
from moodsheet.theory import ChordQuality, Grouping

from tests.conftest import random_leadsheet

TS44 = TimeSignature(4, 4)
TS34 = TimeSignature(3, 4)

C_MAJ = ChordSymbol(0, ChordQuality.MAJOR)
C_MAJ7 = ChordSymbol(0, ChordQuality.MAJOR_SEVENTH)
A_MIN = ChordSymbol(9, ChordQuality.MINOR)
FSHARP_MAJ = ChordSymbol(6, ChordQuality.MAJOR)


def _sheet(bars, key=KeyMode.C_MAJOR):
    return LeadSheet(list(bars), key, title="test", source="test")


def _bar(events, ts=TS44):
    return Bar(list(events), ts, Grouping.PHRASE_MID)


# ---------------------------------------------------------------- basics


def test_melody_pitch_classes_counts_distinct_classes():
    # C4 E4 G4 C5: four notes, three distinct classes
    bar = _bar([Event(C_MAJ, p, 24) for p in (60, 64, 67, 72)])
    assert used_pitch_classes(_sheet([bar]), "melody") == [3]


def test_chord_pitch_classes_major_seventh_has_four():
    bar = _bar([Event(C_MAJ7, None, 96)])
    assert used_pitch_classes(_sheet([bar]), "chords") == [4]


def test_all_rest_bar_has_zero_pitch_classes():
    bar = _bar([Event(None, None, 96)])
    sheet = _sheet([bar])
    assert used_pitch_classes(sheet, "melody") == [0]
    assert used_pitch_classes(sheet, "chords") == [0]


def test_pitch_class_counts_stay_in_range(rng):
    for _ in range(20):
        sheet = random_leadsheet(rng)
        for track in ("melody", "chords"):
            assert all(0 <= c <= 12 for c in used_pitch_classes(sheet, track))


def test_rest_ratio_one_rest_in_four_events():
    bar = _bar(
        [
            Event(C_MAJ, 60, 24),
            Event(C_MAJ, None, 24),
            Event(C_MAJ, 64, 24),
            Event(C_MAJ, 67, 24),
        ]
    )
    assert rest_ratio(_sheet([bar]), "melody") == [0.25]
    assert rest_ratio(_sheet([bar]), "chords") == [0.0]


def test_rest_ratio_all_chord_slots_resting():
    bar = _bar([Event(None, 60, 48), Event(None, 62, 48)])
    assert rest_ratio(_sheet([bar]), "chords") == [1.0]


def test_unknown_track_rejected():
    bar = _bar([Event(C_MAJ, 60, 96)])
    with pytest.raises(ValueError):
        used_pitch_classes(_sheet([bar]), "bass")
    with pytest.raises(ValueError):
        rest_ratio(_sheet([bar]), "drums")


# ---------------------------------------------------------------- tonnetz


def test_equal_chroma_gives_zero_distance():
    # melody arpeggiates the triad with equal durations -> same chroma shape
    bar = _bar([Event(C_MAJ, p, 24) for p in (60, 64, 67)], ts=TS34)
    assert tonal_distance(_sheet([bar])) == pytest.approx(0.0, abs=1e-12)


def test_centroid_distance_is_symmetric():
    bar = _bar([Event(C_MAJ, 62, 48), Event(A_MIN, 71, 48)])
    melody = tonnetz_centroid(melody_chroma(bar))
    chords = tonnetz_centroid(chord_chroma(bar))
    assert np.linalg.norm(melody - chords) == pytest.approx(
        np.linalg.norm(chords - melody)
    )


def test_opposing_triad_is_strictly_farther():
    matched = _bar([Event(C_MAJ, p, 24) for p in (60, 64, 67, 72)])
    opposed = _bar([Event(FSHARP_MAJ, p, 24) for p in (60, 64, 67, 72)])
    near = tonal_distance(_sheet([matched]))
    far = tonal_distance(_sheet([opposed]))
    assert 0 <= near < far


def test_duration_weighting_moves_the_centroid():
    mostly_root = _bar([Event(C_MAJ, 60, 72), Event(C_MAJ, 71, 24)])
    mostly_leading = _bar([Event(C_MAJ, 60, 24), Event(C_MAJ, 71, 72)])
    assert tonal_distance(_sheet([mostly_root])) < tonal_distance(
        _sheet([mostly_leading])
    )


def test_bar_with_empty_track_is_skipped():
    usable = _bar([Event(C_MAJ, 60, 96)])
    silent_melody = _bar([Event(C_MAJ, None, 96)])
    alone = tonal_distance(_sheet([usable]))
    with_skip = tonal_distance(_sheet([usable, silent_melody]))
    assert with_skip == pytest.approx(alone)


def test_no_usable_bar_raises():
    with pytest.raises(ValueError):
        tonal_distance(_sheet([_bar([Event(C_MAJ, None, 96)])]))


def test_empty_chroma_cannot_be_projected():
    with pytest.raises(ValueError):
        tonnetz_centroid(np.zeros(12))


def test_every_pitch_class_projects_to_radius_three_halves():
    # rows live on circles of radii 1, 1, 0.5 -> norm sqrt(1+1+0.25)
    for pc in range(12):
        chroma = np.zeros(12)
        chroma[pc] = 1.0
        assert np.linalg.norm(tonnetz_centroid(chroma)) == pytest.approx(1.5)


# ---------------------------------------------------------------- patterns


def _random_points(rng: random.Random, size: int) -> frozenset:
    grid = [(t, p) for t in range(0, 240, 24) for p in range(55, 72)]
    return frozenset(rng.sample(grid, size))


def test_difference_table_matches_definition(rng):
    for _ in range(30):
        points = _random_points(rng, rng.randint(4, 12))
        assert maximal_translatable_patterns(points) == brute_force_mtps(points)


def test_siatec_matches_brute_force_enumeration(rng):
    for _ in range(30):
        points = _random_points(rng, rng.randint(4, 12))
        expected = {}
        for pattern in brute_force_mtps(points).values():
            expected[pattern] = translators_of(pattern, points)
        actual = {tec.pattern: tec.translators for tec in siatec(PointSet(points))}
        assert actual == expected


def test_compression_is_lossless_on_random_sets(rng):
    for _ in range(50):
        points = _random_points(rng, rng.randint(1, 30))
        ps = PointSet(points)
        result = cosiatec(ps)
        assert decompress(result).points == points
        assert result.encoded_size <= len(points)
        assert result.compression_ratio >= 1.0


def test_unrepeated_points_do_not_compress():
    # every pairwise difference vector is unique -> nothing translates
    ps = PointSet(frozenset({(0, 0), (1, 5), (3, 1), (7, 11)}))
    result = cosiatec(ps)
    assert result.compression_ratio <= 1.0
    assert decompress(result).points == ps.points


def test_five_note_motif_repeated_four_times_compresses_to_2_5():
    motif = [(0, 60), (24, 62), (48, 64), (72, 65), (84, 67)]
    points = frozenset(
        (onset + shift, pitch) for onset, pitch in motif for shift in (0, 96, 192, 288)
    )
    assert len(points) == 20
    result = cosiatec(PointSet(points))
    assert result.compression_ratio == pytest.approx(2.5)
    assert len(result.encoding) == 1
    assert result.encoding[0].size == 8
    assert decompress(result).points == points
    # exhaustive check: no translational class does better than 20/8
    best = max(tec.compression_ratio for tec in siatec(PointSet(points)))
    assert best == pytest.approx(2.5)


def test_tec_size_counts_zero_translator_once():
    tec = TEC(
        frozenset({(0, 60), (24, 62), (48, 64), (72, 65), (84, 67)}),
        frozenset({(0, 0), (96, 0), (192, 0), (288, 0)}),
    )
    assert tec.size == 8
    assert tec.coverage == 20


def test_point_set_from_leadsheet_merges_tracks():
    bar = _bar([Event(C_MAJ, 72, 48), Event(None, 60, 48)])
    ps = PointSet.from_leadsheet(_sheet([bar]))
    # chord tones fold to the fixed octave: C->48, E->52, G->55
    assert ps.points == frozenset({(0, 72), (0, 48), (0, 52), (0, 55), (48, 60)})


def test_point_set_deduplicates_melody_on_chord_tone():
    bar = _bar([Event(C_MAJ, 55, 96)])
    ps = PointSet.from_leadsheet(_sheet([bar]))
    assert ps.points == frozenset({(0, 48), (0, 52), (0, 55)})


def test_single_point_set_round_trips():
    ps = PointSet(frozenset({(0, 60)}))
    result = cosiatec(ps)
    assert decompress(result).points == ps.points
    assert result.compression_ratio == 1.0


def test_empty_point_set_rejected():
    with pytest.raises(ValueError):
        cosiatec(PointSet(frozenset()))


def test_compression_is_deterministic(rng):
    points = _random_points(rng, 24)
    first = cosiatec(PointSet(points))
    second = cosiatec(PointSet(points))
    assert first.encoding == second.encoding


# ---------------------------------------------------------------- tension


def test_single_pitch_cloud_has_zero_diameter():
    assert cloud_diameter([4, 4, 4]) == 0.0


def test_perfect_fifth_diameter_closed_form():
    expected = math.sqrt(2 + 2 / 15)
    assert cloud_diameter([fifth_index(0), fifth_index(7)]) == pytest.approx(
        expected, abs=1e-9
    )


def test_diameter_invariant_under_fifths_translation(rng):
    for _ in range(20):
        ks = [rng.randint(-3, 12) for _ in range(rng.randint(2, 8))]
        shifted = [k + 5 for k in ks]
        assert cloud_diameter(ks) == pytest.approx(cloud_diameter(shifted), abs=1e-9)


def test_repeated_bars_have_zero_movement():
    bar = _bar([Event(C_MAJ, 60, 48), Event(C_MAJ, 67, 48)])
    profile = tension_profile(_sheet([bar, bar, bar]))
    assert profile.movements == pytest.approx((0.0, 0.0), abs=1e-12)
    assert profile.strains[0] == pytest.approx(profile.strains[2])


def test_key_center_positions_hand_computed():
    h = HEIGHT
    np.testing.assert_allclose(
        KEY_CENTERS[KeyMode.C_MAJOR], [0.274, 0.726, 1.034 * h], atol=1e-12
    )
    np.testing.assert_allclose(
        KEY_CENTERS[KeyMode.A_MINOR], [-0.536, 0.464, 2.704 * h], atol=1e-12
    )


def test_minor_key_strain_uses_minor_center():
    bar = _bar([Event(A_MIN, None, 96)])
    minor = tension_profile(_sheet([bar], key=KeyMode.A_MINOR))
    major = tension_profile(_sheet([bar], key=KeyMode.C_MAJOR))
    assert minor.strains[0] < major.strains[0]


def test_default_window_equals_bar_width_window():
    sheet = _sheet(
        [
            _bar([Event(C_MAJ, 60, 48), Event(A_MIN, 69, 48)]),
            _bar([Event(FSHARP_MAJ, 66, 96)]),
        ]
    )
    per_bar = tension_profile(sheet)
    ticked = tension_profile(sheet, 96)
    assert per_bar.diameters == pytest.approx(ticked.diameters, abs=1e-12)
    assert per_bar.movements == pytest.approx(ticked.movements, abs=1e-12)
    assert per_bar.strains == pytest.approx(ticked.strains, abs=1e-12)


def test_wide_window_merges_bars():
    sheet = _sheet(
        [
            _bar([Event(C_MAJ, 60, 96)]),
            _bar([Event(A_MIN, 69, 96)]),
        ]
    )
    merged = tension_profile(sheet, 192)
    assert merged.windows == 1
    assert merged.movements == ()


def test_window_must_be_positive():
    sheet = _sheet([_bar([Event(C_MAJ, 60, 96)])])
    with pytest.raises(ValueError):
        tension_profile(sheet, 0)


def test_silent_windows_are_skipped():
    sounding = _bar([Event(C_MAJ, 60, 96)])
    silent = _bar([Event(None, None, 96)])
    profile = tension_profile(_sheet([sounding, silent, sounding]))
    assert profile.windows == 2
    assert profile.skipped == 1
    assert profile.movements == pytest.approx((0.0,), abs=1e-12)


def test_tension_values_are_nonnegative(rng):
    for _ in range(15):
        profile = tension_profile(random_leadsheet(rng))
        assert all(v >= 0 for v in profile.diameters)
        assert all(v >= 0 for v in profile.movements)
        assert all(v >= 0 for v in profile.strains)


def test_negative_tension_values_rejected():
    with pytest.raises(ValueError):
        TensionProfile((-0.5,), (), (0.1,), 1, 0)


def test_cloud_center_weights_by_duration():
    heavy_root = cloud_center([0, 1], [90, 6])
    light_root = cloud_center([0, 1], [6, 90])
    root = spiral_position(0)
    assert np.linalg.norm(heavy_root - root) < np.linalg.norm(light_root - root)


# ---------------------------------------------------------------- report


def test_report_rows_follow_published_names():
    assert METRIC_NAMES == (
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


def test_corpus_against_itself_is_identical(rng):
    corpus = [random_leadsheet(rng, 4) for _ in range(4)]
    comparison = corpus_report(corpus, corpus)
    assert comparison.reports[0] == comparison.reports[1]


def test_single_sheet_per_piece_std_is_zero(rng):
    report = compute_report([random_leadsheet(rng, 4)])
    for name in ("Compression Ratio", "Cloud Diameter", "Distance to the Key"):
        assert report.values[name].std == 0.0


def test_tonal_distance_reported_without_std(rng):
    report = compute_report([random_leadsheet(rng, 4) for _ in range(3)])
    assert report.values["Tonal Distance"].std is None
    comparison = corpus_report([random_leadsheet(rng, 4)])
    row = next(
        line
        for line in comparison.to_text().splitlines()
        if line.startswith("Tonal Distance")
    )
    assert "±" not in row


def test_report_json_is_byte_stable(rng):
    corpus = [random_leadsheet(rng, 4) for _ in range(3)]
    first = corpus_report(corpus, corpus[:2]).to_json()
    second = corpus_report(list(corpus), corpus[:2]).to_json()
    assert first == second
    parsed = json.loads(first)
    assert parsed["columns"] == ["reference", "generated"]
    assert set(parsed["metrics"]) == set(METRIC_NAMES)


def test_report_text_renders_every_metric(rng):
    text = corpus_report([random_leadsheet(rng, 4)], [random_leadsheet(rng, 4)]).to_text()
    for name in METRIC_NAMES:
        assert name in text


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        compute_report([])
