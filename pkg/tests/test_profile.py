"""Tests for condition statistics capture and template sampling."""

from collections import Counter

import pytest

from moodsheet.affect import ValenceDescriptor
from moodsheet.profile import (
    ConditionProfile,
    load_profile,
    profile_from_corpus,
    sample_template,
    save_profile,
)
from moodsheet.score import TimeSignature
from moodsheet.theory import Grouping
from moodsheet.tokenizer import Density, conditions_of

from tests.conftest import random_leadsheet

TS44 = TimeSignature(4, 4)
TS34 = TimeSignature(3, 4)


def _uniform_profile(ts_counts) -> ConditionProfile:
    return ConditionProfile(
        name="fixture",
        time_signatures=dict(ts_counts),
        valence={v: 1 for v in ValenceDescriptor},
        density={d: 1 for d in Density},
        phrase_lengths={8: 3, 4: 1},
        bar_counts={8: 2, 16: 2},
    )


def test_profile_counts_from_corpus(rng):
    sheets = [random_leadsheet(rng) for _ in range(6)]
    profile = profile_from_corpus(sheets, name="random")
    assert profile.piece_count == 6
    assert sum(profile.bar_counts.values()) == 6
    bars = sum(len(s.bars) for s in sheets)
    assert sum(profile.valence.values()) == bars
    assert sum(profile.density.values()) == bars
    # phrase lengths partition each piece's bars
    assert sum(k * c for k, c in profile.phrase_lengths.items()) == bars


def test_profile_matches_hand_counted_conditions(rng):
    sheet = random_leadsheet(rng, 12)
    profile = profile_from_corpus([sheet])
    track = conditions_of(sheet)
    assert profile.valence == Counter(c.valence for c in track)
    assert profile.density == Counter(c.density for c in track)
    assert profile.time_signatures == {track[0].time_signature: 1}
    assert profile.bar_counts == {12: 1}


def test_empty_corpus_rejected():
    with pytest.raises(ValueError):
        profile_from_corpus([])


def test_template_is_deterministic_per_seed():
    profile = _uniform_profile({TS44: 3, TS34: 2})
    a = sample_template(profile, 16, seed=99)
    b = sample_template(profile, 16, seed=99)
    c = sample_template(profile, 16, seed=100)
    assert a == b
    assert a != c


def test_template_has_requested_bar_count():
    profile = _uniform_profile({TS44: 1})
    for bars in (1, 2, 7, 8, 32):
        assert len(sample_template(profile, bars, seed=0)) == bars


def test_template_bar_bounds():
    profile = _uniform_profile({TS44: 1})
    with pytest.raises(ValueError):
        sample_template(profile, 0)
    with pytest.raises(ValueError):
        sample_template(profile, 33)


def test_template_grouping_starts_phrases():
    profile = _uniform_profile({TS44: 1})
    for seed in range(25):
        track = sample_template(profile, 16, seed=seed)
        assert track[0].grouping is Grouping.PHRASE_START_1
        # one meter for the whole piece
        assert len({c.time_signature for c in track}) == 1


def test_meter_frequency_follows_profile():
    # 60% of pieces in 4/4 -> sampled 4/4 share within two points
    profile = _uniform_profile({TS44: 6, TS34: 4})
    hits = sum(
        sample_template(profile, 1, seed=s)[0].time_signature == TS44
        for s in range(10_000)
    )
    assert abs(hits / 10_000 - 0.6) < 0.02


def test_bar_valence_frequency_follows_profile():
    profile = ConditionProfile(
        name="skewed",
        time_signatures={TS44: 1},
        valence={ValenceDescriptor.HIGH: 3, ValenceDescriptor.LOW: 1},
        density={Density.MEDIUM: 1},
        phrase_lengths={8: 1},
        bar_counts={8: 1},
    )
    track = sample_template(profile, 32, seed=5)
    counts = Counter(c.valence for c in track)
    assert set(counts) <= {ValenceDescriptor.HIGH, ValenceDescriptor.LOW}
    total = Counter(
        c.valence
        for s in range(500)
        for c in sample_template(profile, 8, seed=s)
    )
    share = total[ValenceDescriptor.HIGH] / total.total()
    assert abs(share - 0.75) < 0.03


def test_profile_round_trips_through_json(tmp_path, rng):
    profile = profile_from_corpus([random_leadsheet(rng) for _ in range(5)], name="rt")
    path = tmp_path / "profile.json"
    save_profile(profile, path)
    assert load_profile(path) == profile


def test_loading_rejects_foreign_files(tmp_path):
    path = tmp_path / "bogus.json"
    path.write_text('{"format": "something-else", "version": 1}')
    with pytest.raises(ValueError):
        load_profile(path)


def test_template_phrases_reflect_profile_lengths():
    profile = ConditionProfile(
        name="fours",
        time_signatures={TS44: 1},
        valence={ValenceDescriptor.NEUTRAL: 1},
        density={Density.MEDIUM: 1},
        phrase_lengths={4: 1},
        bar_counts={16: 1},
    )
    track = sample_template(profile, 16, seed=1)
    starts = [i for i, c in enumerate(track) if c.grouping is Grouping.PHRASE_START_1]
    assert starts == [0, 4, 8, 12]
    ends = [i for i, c in enumerate(track) if c.grouping is Grouping.PHRASE_END_1]
    assert ends == [3, 7, 11, 15]


def test_sampled_template_round_trips_conditions(rng):
    # a profile built from one sheet's own conditions can reproduce its shape
    sheet = random_leadsheet(rng, 8)
    profile = profile_from_corpus([sheet])
    track = sample_template(profile, 8, seed=3)
    assert len(track) == 8
    assert track[0].time_signature == sheet.bars[0].time_signature
