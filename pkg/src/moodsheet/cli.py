"""Command line front end: preprocess, train, generate, evaluate, valence, serve.

Every subcommand accepts ``--seed`` and ``--config``.  The config file is
a JSON object whose top level may hold a global ``"seed"`` plus one
section per subcommand; a section supplies defaults for that command's
options (keys use underscores, e.g. ``model_dir``).  Explicit flags beat
config values, and relative paths inside the config resolve against the
config file's directory, so a config acts as a workspace root:

    {
      "seed": 7,
      "train": {"corpus": "corpus.json", "preset": "desk"},
      "serve": {"vocab": "vocab.json", "model_dir": "models", "port": 8000}
    }

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
Each artifact-producing run also writes a manifest recording what ran,
with which inputs, seeds, and hashes, so a rerun can be checked for
reproducibility.
"""

from __future__ import annotations

import json
import os
import time
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path

import click

from moodsheet.affect import ValenceDescriptor, bar_descriptors, piece_valence
from moodsheet.models import (
    CheckpointError,
    TrainConfig,
    TrainingDivergedError,
    build_model,
    desk_config,
    load_checkpoint,
    make_pairs,
    paper_config,
    save_checkpoint,
    train_model,
)
from moodsheet.profile import load_profile, profile_from_corpus, sample_template, save_profile
from moodsheet.score import (
    MAX_BARS,
    LeadSheet,
    MusicXMLError,
    UnsupportedQualityError,
    corpus_hash,
    leadsheet_from_dict,
    load_corpus,
    save_corpus,
    split_dataset,
)
from moodsheet.score.normalize import (
    Rejection,
    TranspositionRangeError,
    grouping_labels,
    normalize_source,
)
from moodsheet.metrics import corpus_report
from moodsheet.service.app import run_generation
from moodsheet.service.registry import ServiceState, load_state
from moodsheet.service.schemas import ConditionCell, GenerateRequest
from moodsheet.service.settings import settings_from_mapping
from moodsheet.tokenizer import Density, Vocabulary

__all__ = ["RunManifest", "cli", "main"]

MANIFEST_FORMAT = "moodsheet-manifest"
MANIFEST_VERSION = 1

_TIMESIG_CHOICES = ("4/4", "3/4", "2/2", "2/4", "6/8")


class DataError(click.ClickException):
    """Input files or their contents are unusable."""

    exit_code = 2


@dataclass(frozen=True)
class RunManifest:
    """Record of one batch run: enough to reproduce or audit it."""

    command: str
    config: dict
    seeds: dict
    inputs: dict
    outputs: dict
    corpus_hashes: dict
    timings: dict

    def to_dict(self) -> dict:
        return {
            "format": MANIFEST_FORMAT,
            "version": MANIFEST_VERSION,
            "command": self.command,
            "config": self.config,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "corpus_hashes": self.corpus_hashes,
            "timings": self.timings,
        }


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _write_json(path: Path, payload: dict) -> None:
    _write_text(path, json.dumps(payload, indent=1) + "\n")


def _config_snapshot(ctx: click.Context) -> dict:
    snapshot = {}
    for name, value in ctx.params.items():
        if isinstance(value, Path):
            snapshot[name] = str(value)
        elif isinstance(value, tuple):
            snapshot[name] = [str(v) for v in value]
        else:
            snapshot[name] = value
    return snapshot


def _artifact_base(path: Path) -> Path:
    """Strip a recognized artifact suffix so siblings share one stem."""
    if path.suffix in {".json", ".txt", ".xml", ".musicxml", ".pt"}:
        return path.with_suffix("")
    return path


def _sibling(base: Path, suffix: str) -> Path:
    return base.with_name(base.name + suffix)


def _apply_config(ctx: click.Context, param: click.Parameter, value: str | None):
    """Install config-file values as option defaults for this command."""
    if value is None:
        return None
    path = Path(value)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config {value!r}: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError("config must be a JSON object")
    unknown = set(data) - set(cli.commands) - {"seed"}
    if unknown:
        raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
    section = data.get(ctx.info_name or "", {})
    if not isinstance(section, dict):
        raise click.UsageError(f"config section {ctx.info_name!r} must be an object")
    by_flag = {}
    for p in ctx.command.params:
        longs = [o for o in p.opts if o.startswith("--")]
        if longs:
            by_flag[longs[0][2:].replace("-", "_")] = p
    unknown = (set(section) - set(by_flag)) | ({"config"} & set(section))
    if unknown:
        raise click.UsageError(
            f"unknown {ctx.info_name} config keys: {sorted(unknown)}"
        )
    base = path.parent
    defaults = {}
    for flag, val in section.items():
        param = by_flag[flag]
        if isinstance(param.type, click.Path):
            if param.multiple and isinstance(val, list):
                val = [str(base / v) for v in val]
            elif isinstance(val, str):
                val = str(base / val)
        defaults[param.name] = val
    if "seed" in data and "seed" not in section and "seed" in by_flag:
        defaults["seed"] = data["seed"]
    ctx.default_map = {**(ctx.default_map or {}), **defaults}
    return path


def _common_options(fn):
    fn = click.option(
        "--seed", type=int, default=0, show_default=True, help="Random seed."
    )(fn)
    fn = click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False),
        callback=_apply_config,
        is_eager=True,
        expose_value=True,
        default=None,
        help="JSON file of option defaults (see module help).",
    )(fn)
    return fn


def _read_corpus(path: Path) -> list[LeadSheet]:
    try:
        sheets = load_corpus(path)
    except FileNotFoundError:
        raise DataError(f"corpus file not found: {path}")
    except (ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        raise DataError(f"unreadable corpus {path}: {exc}")
    if not sheets:
        raise DataError(f"corpus {path} holds no pieces")
    return sheets


@click.group()
@click.version_option(package_name="moodsheet")
def cli() -> None:
    """Mood-conditioned lead sheet toolkit."""


# ------------------------------------------------------------- preprocess


@cli.command()
@click.option(
    "--in",
    "in_dir",
    type=click.Path(file_okay=False, path_type=Path),
    required=True,
    help="Directory of MusicXML files (searched recursively).",
)
@click.option(
    "--out",
    "out_path",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Normalized corpus JSON destination.",
)
@_common_options
@click.pass_context
def preprocess(ctx, in_dir: Path, out_path: Path, seed: int, config) -> None:
    """Normalize MusicXML into a corpus, splits, rejection log, profile."""
    started = time.perf_counter()
    if not in_dir.is_dir():
        raise DataError(f"input directory not found: {in_dir}")
    files = sorted(
        p for p in in_dir.rglob("*") if p.suffix.lower() in {".xml", ".musicxml"}
    )
    if not files:
        raise DataError(f"no MusicXML files under {in_dir}")

    accepted: list[LeadSheet] = []
    rejections: list[Rejection] = []
    for file in files:
        try:
            document = file.read_text()
            sheets, rejected = normalize_source(document, source=file.name)
        except (OSError, UnicodeDecodeError, MusicXMLError, TranspositionRangeError) as exc:
            rejections.append(Rejection("source", f"{file.name}: {exc}"))
            continue
        accepted.extend(sheets)
        rejections.extend(rejected)
    normalized_at = time.perf_counter()

    if not accepted:
        raise DataError(f"no pieces survived normalization ({len(rejections)} rejections)")
    try:
        train, valid, test = split_dataset(accepted, seed)
    except ValueError as exc:
        raise DataError(str(exc))

    base = _artifact_base(out_path)
    split_paths = {
        "train": _sibling(base, ".train.json"),
        "valid": _sibling(base, ".valid.json"),
        "test": _sibling(base, ".test.json"),
    }
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        save_corpus(accepted, out_path)
        for name, sheets in (("train", train), ("valid", valid), ("test", test)):
            save_corpus(sheets, split_paths[name])
        profile_path = _sibling(base, ".profile.json")
        save_profile(profile_from_corpus(accepted, name=base.name), profile_path)
        counts = Counter(r.reason for r in rejections)
        rejections_path = _sibling(base, ".rejections.json")
        _write_json(
            rejections_path,
            {
                "format": "moodsheet-rejections",
                "version": 1,
                "total": len(rejections),
                "counts": {reason: counts[reason] for reason in sorted(counts)},
                "rejections": [
                    {"reason": r.reason, "detail": r.detail} for r in rejections
                ],
            },
        )
    except OSError as exc:
        raise DataError(f"cannot write outputs: {exc}")

    manifest = RunManifest(
        command="preprocess",
        config=_config_snapshot(ctx),
        seeds={"split": seed},
        inputs={"directory": str(in_dir), "files": len(files)},
        outputs={
            "corpus": str(out_path),
            **{k: str(v) for k, v in split_paths.items()},
            "profile": str(profile_path),
            "rejections": str(rejections_path),
        },
        corpus_hashes={
            "corpus": corpus_hash(accepted),
            "train": corpus_hash(train),
            "valid": corpus_hash(valid),
            "test": corpus_hash(test),
        },
        timings={
            "normalize_s": normalized_at - started,
            "total_s": time.perf_counter() - started,
        },
    )
    _write_json(_sibling(base, ".manifest.json"), manifest.to_dict())
    click.echo(
        f"accepted {len(accepted)} pieces from {len(files)} files, "
        f"rejected {len(rejections)} -> {out_path}"
    )


# ------------------------------------------------------------------ train


@cli.command()
@click.option(
    "--corpus",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Training corpus JSON.",
)
@click.option(
    "--out",
    "out_path",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Checkpoint destination (.pt).",
)
@click.option(
    "--preset",
    type=click.Choice(["desk", "paper"]),
    default="desk",
    show_default=True,
    help="Model size preset.",
)
@click.option(
    "--arch",
    type=click.Choice(["lstm", "transformer"]),
    default="lstm",
    show_default=True,
    help="Sequence model architecture.",
)
@click.option("--epochs", type=click.IntRange(min=1), default=30, show_default=True)
@click.option("--learning-rate", type=float, default=1e-3, show_default=True)
@click.option("--batch-size", type=click.IntRange(min=1), default=32, show_default=True)
@click.option(
    "--stop-loss",
    type=float,
    default=None,
    help="Stop early once mean epoch loss falls below this value.",
)
@_common_options
@click.pass_context
def train(
    ctx,
    corpus: Path,
    out_path: Path,
    preset: str,
    arch: str,
    epochs: int,
    learning_rate: float,
    batch_size: int,
    stop_loss: float | None,
    seed: int,
    config,
) -> None:
    """Train a model on a corpus; writes a checkpoint and a loss log."""
    started = time.perf_counter()
    sheets = _read_corpus(corpus)
    vocab = Vocabulary.full()
    pairs = make_pairs(sheets, vocab)
    if not pairs:
        raise DataError(f"corpus {corpus} produced no training pairs")
    model_config = desk_config(arch) if preset == "desk" else paper_config(arch)
    model = build_model(model_config, vocab)
    train_config = TrainConfig(
        epochs=epochs,
        learning_rate=learning_rate,
        batch_size=batch_size,
        seed=seed,
        stop_loss=stop_loss,
    )
    try:
        result = train_model(model, pairs, train_config)
    except TrainingDivergedError as exc:
        raise DataError(f"training diverged: {exc}")

    base = _artifact_base(out_path)
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        save_checkpoint(out_path, model, vocab)
        losses_path = _sibling(base, ".losses.json")
        _write_json(
            losses_path,
            {
                "format": "moodsheet-losses",
                "version": 1,
                "architecture": arch,
                "preset": preset,
                "epochs_run": result.epochs_run,
                "final_loss": result.final_loss,
                "loss_history": result.loss_history,
            },
        )
    except OSError as exc:
        raise DataError(f"cannot write outputs: {exc}")

    manifest = RunManifest(
        command="train",
        config=_config_snapshot(ctx),
        seeds={"training": seed},
        inputs={"corpus": str(corpus), "pieces": len(sheets), "pairs": len(pairs)},
        outputs={"checkpoint": str(out_path), "losses": str(losses_path)},
        corpus_hashes={"corpus": corpus_hash(sheets)},
        timings={"total_s": time.perf_counter() - started},
    )
    _write_json(_sibling(base, ".manifest.json"), manifest.to_dict())
    click.echo(
        f"trained {arch} ({preset}) for {result.epochs_run} epochs, "
        f"final loss {result.final_loss:.4f} -> {out_path}"
    )


# --------------------------------------------------------------- generate


def _uniform_cells(
    bars: int, timesig: str, valence: str, density: str, phrase: int
) -> list[ConditionCell]:
    lengths = [phrase] * (bars // phrase)
    if bars % phrase:
        lengths.append(bars % phrase)
    return [
        ConditionCell(
            time_signature=timesig,
            grouping=label.value,
            valence=valence,
            density=density,
        )
        for label in grouping_labels(lengths)
    ]


def _post_json(server: str, route: str, payload: dict) -> dict:
    import httpx

    url = server.rstrip("/") + route
    try:
        response = httpx.post(url, json=payload, timeout=120.0)
    except httpx.HTTPError as exc:
        raise DataError(f"cannot reach server at {url}: {exc}")
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except json.JSONDecodeError:
            detail = response.text
        raise DataError(f"server returned {response.status_code}: {detail}")
    return response.json()


@cli.command()
@click.option(
    "--model",
    "model_ref",
    default=None,
    help="Checkpoint path, or served model name when --server is given.",
)
@click.option("--server", default=None, help="Base URL of a running service.")
@click.option(
    "--out",
    "out_base",
    type=click.Path(dir_okay=False, path_type=Path),
    default=Path("generated"),
    show_default=True,
    help="Output base name (writes <out>.musicxml and <out>.json).",
)
@click.option("--bars", type=click.IntRange(1, MAX_BARS), default=8, show_default=True)
@click.option(
    "--valence",
    type=click.Choice([v.value for v in ValenceDescriptor], case_sensitive=False),
    default="neutral",
    show_default=True,
    help="Requested per-bar valence level.",
)
@click.option(
    "--timesig",
    type=click.Choice(_TIMESIG_CHOICES),
    default="4/4",
    show_default=True,
)
@click.option(
    "--density",
    type=click.Choice([d.value for d in Density], case_sensitive=False),
    default="medium",
    show_default=True,
    help="Requested per-bar note density.",
)
@click.option(
    "--phrase",
    type=click.IntRange(min=1),
    default=4,
    show_default=True,
    help="Phrase length in bars for grouping labels.",
)
@click.option(
    "--key",
    type=click.Choice(["major", "minor"]),
    default="major",
    show_default=True,
)
@click.option("--temperature", type=click.FloatRange(min=0, min_open=True), default=None)
@click.option("--greedy", is_flag=True, help="Pick the most likely token every step.")
@click.option(
    "--template",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Condition-statistics profile JSON; samples per-bar conditions "
    "from it instead of the uniform flags.",
)
@_common_options
@click.pass_context
def generate(
    ctx,
    model_ref: str | None,
    server: str | None,
    out_base: Path,
    bars: int,
    valence: str,
    timesig: str,
    density: str,
    phrase: int,
    key: str,
    temperature: float | None,
    greedy: bool,
    template: Path | None,
    seed: int,
    config,
) -> None:
    """Generate a lead sheet as MusicXML plus a JSON companion."""
    started = time.perf_counter()
    if model_ref is None:
        raise click.UsageError("--model is required")
    if template is not None:
        try:
            profile = load_profile(template)
        except (OSError, ValueError, KeyError) as exc:
            raise DataError(f"unreadable profile {template}: {exc}")
        track = sample_template(profile, bars, seed=seed)
        cells = [ConditionCell.from_domain(c) for c in track]
    else:
        cells = _uniform_cells(bars, timesig, valence.lower(), density.lower(), phrase)

    if server is not None:
        request = GenerateRequest(
            model=model_ref,
            conditions=cells,
            key=key,
            seed=seed,
            temperature=temperature,
            greedy=greedy,
        )
        document = _post_json(server, "/generate", request.model_dump())
    else:
        checkpoint = Path(model_ref)
        if not checkpoint.is_file():
            raise DataError(f"checkpoint not found: {checkpoint}")
        vocab = Vocabulary.full()
        try:
            model = load_checkpoint(checkpoint, vocab)
        except CheckpointError as exc:
            raise DataError(f"unreadable checkpoint {checkpoint}: {exc}")
        state = ServiceState(vocab=vocab, models={checkpoint.stem: model})
        request = GenerateRequest(
            model=checkpoint.stem,
            conditions=cells,
            key=key,
            seed=seed,
            temperature=temperature,
            greedy=greedy,
        )
        document = run_generation(state, request).model_dump()

    base = _artifact_base(out_base)
    xml_path = _sibling(base, ".musicxml")
    json_path = _sibling(base, ".json")
    try:
        _write_text(xml_path, document["musicxml"])
        _write_json(
            json_path,
            {
                "format": "moodsheet-generation",
                "version": 1,
                **{k: v for k, v in document.items() if k != "musicxml"},
            },
        )
    except OSError as exc:
        raise DataError(f"cannot write outputs: {exc}")

    sheet = leadsheet_from_dict(document["lead_sheet"])
    matches = sum(1 for b in document["bars"] if b["valence_matches"])
    manifest = RunManifest(
        command="generate",
        config=_config_snapshot(ctx),
        seeds={"sampler": seed},
        inputs={"model": model_ref, "server": server, "template": str(template) if template else None},
        outputs={"musicxml": str(xml_path), "json": str(json_path)},
        corpus_hashes={"generated": corpus_hash([sheet])},
        timings={"total_s": time.perf_counter() - started},
    )
    _write_json(_sibling(base, ".manifest.json"), manifest.to_dict())
    click.echo(
        f"generated {len(document['bars'])} bars "
        f"(valence match {matches}/{len(document['bars'])}, "
        f"piece {document['piece_descriptor']}) -> {xml_path}"
    )


# --------------------------------------------------------------- evaluate


@cli.command()
@click.option(
    "--corpus",
    "corpora",
    type=click.Path(dir_okay=False, path_type=Path),
    multiple=True,
    required=True,
    help="Corpus JSON; give once for a single column, twice to compare "
    "(reference first, generated second).",
)
@click.option(
    "--out",
    "out_base",
    type=click.Path(dir_okay=False, path_type=Path),
    default=Path("report"),
    show_default=True,
    help="Report base name (writes <out>.txt and <out>.json).",
)
@_common_options
@click.pass_context
def evaluate(ctx, corpora: tuple[Path, ...], out_base: Path, seed: int, config) -> None:
    """Score corpora on the objective metric battery and tabulate."""
    started = time.perf_counter()
    if len(corpora) > 2:
        raise click.UsageError("at most two --corpus files (reference, generated)")
    loaded = [_read_corpus(path) for path in corpora]
    columns = [path.stem.replace(".", "-") or "corpus" for path in corpora]
    if len(columns) == 2 and columns[0] == columns[1]:
        columns[1] += "-2"
    try:
        comparison = corpus_report(
            loaded[0],
            loaded[1] if len(loaded) == 2 else None,
            columns=tuple(columns),
        )
    except ValueError as exc:
        raise DataError(f"cannot evaluate: {exc}")

    text = comparison.to_text()
    base = _artifact_base(out_base)
    text_path = _sibling(base, ".txt")
    json_path = _sibling(base, ".json")
    try:
        _write_text(text_path, text + "\n")
        _write_text(json_path, comparison.to_json())
    except OSError as exc:
        raise DataError(f"cannot write outputs: {exc}")

    manifest = RunManifest(
        command="evaluate",
        config=_config_snapshot(ctx),
        seeds={"seed": seed},
        inputs={str(path): f"{len(sheets)} pieces" for path, sheets in zip(corpora, loaded)},
        outputs={"text": str(text_path), "json": str(json_path)},
        corpus_hashes={
            name: corpus_hash(sheets) for name, sheets in zip(columns, loaded)
        },
        timings={"total_s": time.perf_counter() - started},
    )
    _write_json(_sibling(base, ".manifest.json"), manifest.to_dict())
    click.echo(text)


# ---------------------------------------------------------------- valence


@cli.command()
@click.option(
    "--sheet",
    "sheet_path",
    type=click.Path(dir_okay=False, path_type=Path),
    required=True,
    help="Lead sheet JSON (bare, or a generation document with a "
    "lead_sheet field).",
)
@click.option(
    "--out",
    "out_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Annotation destination; omitted means stdout.",
)
@click.option("--server", default=None, help="Base URL of a running service.")
@_common_options
@click.pass_context
def valence(
    ctx,
    sheet_path: Path,
    out_path: Path | None,
    server: str | None,
    seed: int,
    config,
) -> None:
    """Annotate a lead sheet with per-bar and whole-piece valence."""
    started = time.perf_counter()
    try:
        raw = json.loads(sheet_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"unreadable sheet {sheet_path}: {exc}")
    if isinstance(raw, dict) and "lead_sheet" in raw:
        raw = raw["lead_sheet"]
    if not isinstance(raw, dict) or "bars" not in raw:
        raise DataError(f"{sheet_path} does not look like a lead sheet")

    if server is not None:
        body = _post_json(server, "/valence", {"lead_sheet": raw})
        bars, mean, descriptor = body["bars"], body["piece_valence"], body["piece_descriptor"]
    else:
        try:
            sheet = leadsheet_from_dict(raw)
        except UnsupportedQualityError as exc:
            raise DataError(str(exc))
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed lead sheet: {exc}")
        try:
            mean, piece_descriptor = piece_valence(sheet)
        except ValueError as exc:
            raise DataError(str(exc))
        bars = [d.value for d in bar_descriptors(sheet)]
        descriptor = piece_descriptor.value

    manifest = RunManifest(
        command="valence",
        config=_config_snapshot(ctx),
        seeds={"seed": seed},
        inputs={"sheet": str(sheet_path), "server": server},
        outputs={"annotation": str(out_path) if out_path else "stdout"},
        corpus_hashes={},
        timings={"total_s": time.perf_counter() - started},
    )
    annotation = {
        "format": "moodsheet-valence",
        "version": 1,
        "sheet": str(sheet_path),
        "bars": bars,
        "piece_valence": mean,
        "piece_descriptor": descriptor,
    }
    if out_path is None:
        click.echo(json.dumps({**annotation, "manifest": manifest.to_dict()}, indent=1))
    else:
        base = _artifact_base(out_path)
        try:
            _write_json(out_path, annotation)
        except OSError as exc:
            raise DataError(f"cannot write {out_path}: {exc}")
        _write_json(_sibling(base, ".manifest.json"), manifest.to_dict())
        click.echo(f"piece {descriptor} ({mean:+.3f}) -> {out_path}")


# ------------------------------------------------------------------ serve


@cli.command()
@click.option(
    "--vocab",
    type=click.Path(dir_okay=False),
    default=None,
    help="Token vocabulary JSON.  [default: vocab.json]",
)
@click.option(
    "--model-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory of .pt checkpoints.  [default: models]",
)
@click.option(
    "--profile-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory of condition-profile JSON files.  [default: profiles]",
)
@click.option("--host", default=None, help="Bind address.  [default: 127.0.0.1]")
@click.option("--port", type=click.IntRange(1, 65535), default=None, help="Bind port.  [default: 8000]")
@_common_options
@click.pass_context
def serve(
    ctx,
    vocab: str | None,
    model_dir: str | None,
    profile_dir: str | None,
    host: str | None,
    port: int | None,
    seed: int,
    config,
) -> None:
    """Run the HTTP service over the models and profiles on disk.

    Generation seeds arrive per request; --seed is accepted for
    interface symmetry only.  MOODSHEET_* environment variables
    override config-file values; explicit flags override both.
    """
    import uvicorn

    from moodsheet.service.app import create_app

    given = {
        "vocab": vocab,
        "model_dir": model_dir,
        "profile_dir": profile_dir,
        "host": host,
        "port": port,
    }
    try:
        settings = settings_from_mapping(
            {k: v for k, v in given.items() if v is not None}, Path("."), os.environ
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    forced = {}
    fields = {
        "vocab": ("vocab_path", Path),
        "model_dir": ("model_dir", Path),
        "profile_dir": ("profile_dir", Path),
        "host": ("host", str),
        "port": ("port", int),
    }
    for name, (field, convert) in fields.items():
        if ctx.get_parameter_source(name) is click.core.ParameterSource.COMMANDLINE:
            forced[field] = convert(given[name])
    settings = replace(settings, **forced)

    try:
        state = load_state(settings)
    except FileNotFoundError as exc:
        raise DataError(f"cannot load service state: {exc}")
    except (CheckpointError, ValueError, KeyError) as exc:
        raise DataError(f"cannot load service state: {exc}")
    click.echo(
        f"serving {len(state.models)} models, {len(state.profiles)} profiles "
        f"on {settings.host}:{settings.port}"
    )
    uvicorn.run(create_app(state), host=settings.host, port=settings.port)


# ------------------------------------------------------------------- main


def main(argv: list[str] | None = None) -> int:
    """Console entry point mapping failures to documented exit codes."""
    try:
        cli.main(args=argv, prog_name="moodsheet", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except DataError as exc:
        exc.show()
        return 2
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        return 3
    return 0
