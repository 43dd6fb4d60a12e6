"""Command line tests: artifacts, exit codes, config plumbing, determinism."""

import json
import random

import pytest

from moodsheet.cli import main
from moodsheet.metrics import METRIC_NAMES
from moodsheet.models import load_checkpoint
from moodsheet.score import (
    leadsheet_from_dict,
    load_corpus,
    parse_musicxml,
    validate_leadsheet,
    write_musicxml,
)
from moodsheet.score.normalize import normalize_source
from moodsheet.tokenizer import Vocabulary

from conftest import random_leadsheet


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A preprocessed 50-piece workspace plus a small trained checkpoint."""
    ws = tmp_path_factory.mktemp("cli")
    raw = ws / "raw"
    raw.mkdir()
    rng = random.Random(0x51)
    for i in range(50):
        sheet = random_leadsheet(rng, rng.randint(4, 8))
        (raw / f"piece{i:02d}.musicxml").write_text(write_musicxml(sheet))
    assert main(["preprocess", "--in", str(raw), "--out", str(ws / "corpus.json"), "--seed", "3"]) == 0
    assert (
        main(
            [
                "train",
                "--corpus", str(ws / "corpus.train.json"),
                "--out", str(ws / "model.pt"),
                "--epochs", "3",
                "--batch-size", "8",
                "--seed", "1",
            ]
        )
        == 0
    )
    return ws


# ------------------------------------------------------------- preprocess


def test_preprocess_splits_fifty_files_40_5_5(workspace):
    sizes = [
        len(load_corpus(workspace / f"corpus.{name}.json"))
        for name in ("train", "valid", "test")
    ]
    assert sizes == [40, 5, 5]


def test_preprocess_writes_profile_and_manifest(workspace):
    profile = json.loads((workspace / "corpus.profile.json").read_text())
    assert profile["format"] == "moodsheet-profile"
    manifest = json.loads((workspace / "corpus.manifest.json").read_text())
    assert manifest["command"] == "preprocess"
    assert manifest["seeds"] == {"split": 3}
    assert set(manifest["corpus_hashes"]) == {"corpus", "train", "valid", "test"}


def test_preprocess_rerun_reproduces_corpus_hash(workspace, tmp_path):
    assert (
        main(
            ["preprocess", "--in", str(workspace / "raw"), "--out", str(tmp_path / "again.json"), "--seed", "3"]
        )
        == 0
    )
    first = json.loads((workspace / "corpus.manifest.json").read_text())
    again = json.loads((tmp_path / "again.manifest.json").read_text())
    assert first["corpus_hashes"] == again["corpus_hashes"]


def test_preprocess_counts_five_four_under_time_signature(workspace, tmp_path):
    raw = tmp_path / "raw"
    raw.mkdir()
    rng = random.Random(9)
    document = write_musicxml(random_leadsheet(rng, 8))
    (raw / "odd.musicxml").write_text(
        document.replace("<beats>4</beats>", "<beats>5</beats>")
    )
    for i in range(10):
        sheet = random_leadsheet(rng, 4)
        (raw / f"ok{i}.musicxml").write_text(write_musicxml(sheet))
    assert main(["preprocess", "--in", str(raw), "--out", str(tmp_path / "c.json")]) == 0
    log = json.loads((tmp_path / "c.rejections.json").read_text())
    assert log["counts"]["time signature"] == 1


def test_preprocess_empty_dir_is_data_error(tmp_path):
    empty = tmp_path / "none"
    empty.mkdir()
    assert main(["preprocess", "--in", str(empty), "--out", str(tmp_path / "c.json")]) == 2
    assert main(["preprocess", "--in", str(tmp_path / "ghost"), "--out", str(tmp_path / "c.json")]) == 2


def test_preprocess_all_rejected_is_data_error(tmp_path):
    raw = tmp_path / "raw"
    raw.mkdir()
    (raw / "junk.musicxml").write_text("<not-music/>")
    assert main(["preprocess", "--in", str(raw), "--out", str(tmp_path / "c.json")]) == 2


# ------------------------------------------------------------------ train


def test_train_loss_log_trends_down(workspace):
    log = json.loads((workspace / "model.losses.json").read_text())
    assert log["epochs_run"] == 3
    assert len(log["loss_history"]) == 3
    assert log["loss_history"][-1] < log["loss_history"][0]
    assert log["final_loss"] == log["loss_history"][-1]


def test_train_checkpoint_round_trips(workspace):
    model = load_checkpoint(workspace / "model.pt", Vocabulary.full())
    assert type(model).__name__ == "LstmSeq2Seq"
    manifest = json.loads((workspace / "model.manifest.json").read_text())
    assert manifest["command"] == "train"
    assert "corpus" in manifest["corpus_hashes"]


def test_train_missing_corpus_is_data_error(tmp_path):
    assert (
        main(["train", "--corpus", str(tmp_path / "nope.json"), "--out", str(tmp_path / "m.pt")])
        == 2
    )


# --------------------------------------------------------------- generate


def test_generate_writes_valid_musicxml_and_json(workspace, tmp_path):
    code = main(
        [
            "generate",
            "--model", str(workspace / "model.pt"),
            "--out", str(tmp_path / "song"),
            "--bars", "8",
            "--valence", "High",
            "--timesig", "4/4",
            "--density", "medium",
            "--seed", "5",
        ]
    )
    assert code == 0
    document = json.loads((tmp_path / "song.json").read_text())
    assert document["format"] == "moodsheet-generation"
    assert len(document["bars"]) == 8
    assert all(bar["requested"]["valence"] == "high" for bar in document["bars"])
    sheet = leadsheet_from_dict(document["lead_sheet"])
    validate_leadsheet(sheet)
    reparsed = parse_musicxml((tmp_path / "song.musicxml").read_text())
    assert len(reparsed.measures) == 8


def test_output_parent_directories_are_created(workspace, tmp_path):
    nested = tmp_path / "runs" / "today" / "song"
    code = main(
        ["generate", "--model", str(workspace / "model.pt"), "--bars", "4", "--out", str(nested)]
    )
    assert code == 0
    assert nested.with_suffix(".musicxml").exists()
    assert nested.with_suffix(".json").exists()
    assert nested.with_suffix(".manifest.json").exists()


def test_generate_deterministic_per_seed(workspace, tmp_path):
    args = [
        "generate",
        "--model", str(workspace / "model.pt"),
        "--bars", "6",
        "--seed", "11",
    ]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    read = lambda n: json.loads((tmp_path / f"{n}.json").read_text())["lead_sheet"]
    assert read("a") == read("b")
    main(["generate", "--model", str(workspace / "model.pt"), "--bars", "6", "--seed", "12", "--out", str(tmp_path / "c")])
    assert read("c") != read("a")


def test_generate_from_template_profile(workspace, tmp_path):
    code = main(
        [
            "generate",
            "--model", str(workspace / "model.pt"),
            "--template", str(workspace / "corpus.profile.json"),
            "--bars", "4",
            "--out", str(tmp_path / "t"),
            "--seed", "2",
        ]
    )
    assert code == 0
    document = json.loads((tmp_path / "t.json").read_text())
    assert len(document["bars"]) == 4
    assert document["bars"][0]["requested"]["grouping"] == "first1"


def test_generate_missing_checkpoint_is_data_error(tmp_path):
    assert (
        main(["generate", "--model", str(tmp_path / "nope.pt"), "--out", str(tmp_path / "x")])
        == 2
    )


def test_generate_usage_errors(tmp_path):
    assert main(["generate", "--bars", "4"]) == 1  # --model missing
    assert main(["generate", "--model", "m", "--bars", "40"]) == 1
    assert main(["generate", "--model", "m", "--valence", "ecstatic"]) == 1


# --------------------------------------------------------------- evaluate


def test_evaluate_tabulates_both_corpora(workspace, tmp_path):
    code = main(
        [
            "evaluate",
            "--corpus", str(workspace / "corpus.test.json"),
            "--corpus", str(workspace / "corpus.valid.json"),
            "--out", str(tmp_path / "report"),
        ]
    )
    assert code == 0
    text = (tmp_path / "report.txt").read_text()
    for name in METRIC_NAMES:
        assert name in text
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["columns"] == ["corpus-test", "corpus-valid"]


def test_evaluate_single_corpus(workspace, tmp_path):
    code = main(
        ["evaluate", "--corpus", str(workspace / "corpus.test.json"), "--out", str(tmp_path / "solo")]
    )
    assert code == 0
    report = json.loads((tmp_path / "solo.json").read_text())
    assert report["columns"] == ["corpus-test"]


def test_evaluate_three_corpora_is_usage_error(workspace, tmp_path):
    path = str(workspace / "corpus.test.json")
    assert main(["evaluate", "--corpus", path, "--corpus", path, "--corpus", path]) == 1


# ---------------------------------------------------------------- valence


def test_valence_annotates_generation_output(workspace, tmp_path, capsys):
    main(
        [
            "generate",
            "--model", str(workspace / "model.pt"),
            "--bars", "4",
            "--out", str(tmp_path / "g"),
            "--seed", "0",
        ]
    )
    capsys.readouterr()
    assert main(["valence", "--sheet", str(tmp_path / "g.json")]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert printed["format"] == "moodsheet-valence"
    assert len(printed["bars"]) == 4
    assert printed["manifest"]["command"] == "valence"

    assert main(["valence", "--sheet", str(tmp_path / "g.json"), "--out", str(tmp_path / "v.json")]) == 0
    saved = json.loads((tmp_path / "v.json").read_text())
    assert saved["bars"] == printed["bars"]
    assert saved["piece_valence"] == printed["piece_valence"]


def test_valence_rejects_malformed_sheet(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"key": "major"}')
    assert main(["valence", "--sheet", str(bad)]) == 2
    bad.write_text("{oops")
    assert main(["valence", "--sheet", str(bad)]) == 2


# ------------------------------------------------------------------ serve


def test_serve_resolves_settings_and_runs(workspace, tmp_path, monkeypatch):
    Vocabulary.full().save(tmp_path / "vocab.json")
    (tmp_path / "models").mkdir()
    (tmp_path / "profiles").mkdir()
    (tmp_path / "models" / "m.pt").write_bytes((workspace / "model.pt").read_bytes())

    captured = {}

    def fake_run(app, host, port):
        captured.update(app=app, host=host, port=port)

    monkeypatch.setattr("uvicorn.run", fake_run)
    config = tmp_path / "ws.json"
    config.write_text(
        json.dumps({"serve": {"vocab": "vocab.json", "model_dir": "models", "profile_dir": "profiles", "port": 9100}})
    )
    monkeypatch.setenv("MOODSHEET_PORT", "9200")
    assert main(["serve", "--config", str(config), "--port", "9300"]) == 0
    assert captured["port"] == 9300  # flag beats environment beats config

    captured.clear()
    assert main(["serve", "--config", str(config)]) == 0
    assert captured["port"] == 9200  # environment beats config

    monkeypatch.delenv("MOODSHEET_PORT")
    captured.clear()
    assert main(["serve", "--config", str(config)]) == 0
    assert captured["port"] == 9100
    assert captured["host"] == "127.0.0.1"


def test_serve_missing_vocab_is_data_error(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(["serve"]) == 2


# ------------------------------------------------------------ exit codes


def test_no_arguments_prints_help_as_usage_error(capsys):
    assert main([]) == 1
    combined = "".join(capsys.readouterr())
    assert "Usage:" in combined
    assert "generate" in combined


def test_help_flag_exits_zero(capsys):
    assert main(["--help"]) == 0
    assert "Usage:" in capsys.readouterr().out


def test_unknown_command_is_usage_error():
    assert main(["transmogrify"]) == 1


def test_unknown_config_keys_are_usage_errors(tmp_path):
    config = tmp_path / "c.json"
    config.write_text('{"prepro": {}}')
    assert main(["preprocess", "--config", str(config), "--in", "x", "--out", "y"]) == 1
    config.write_text('{"preprocess": {"inn": "raw"}}')
    assert main(["preprocess", "--config", str(config)]) == 1


def test_internal_errors_exit_three(workspace, tmp_path, monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("wires crossed")

    monkeypatch.setattr("moodsheet.cli.train_model", boom)
    code = main(
        ["train", "--corpus", str(workspace / "corpus.train.json"), "--out", str(tmp_path / "m.pt"), "--epochs", "1"]
    )
    assert code == 3


def test_config_seed_applies_to_every_command(workspace, tmp_path):
    config = tmp_path / "c.json"
    config.write_text('{"seed": 77}')
    main(
        [
            "generate",
            "--config", str(config),
            "--model", str(workspace / "model.pt"),
            "--bars", "4",
            "--out", str(tmp_path / "s"),
        ]
    )
    manifest = json.loads((tmp_path / "s.manifest.json").read_text())
    assert manifest["seeds"] == {"sampler": 77}
    assert json.loads((tmp_path / "s.json").read_text())["seed"] == 77
