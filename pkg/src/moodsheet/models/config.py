"""Model, training, and sampling configuration with the two stock presets."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

ARCHITECTURES = ("lstm", "transformer")


@dataclass(frozen=True)
class ModelConfig:
    """Shape of either architecture.

    For the transformer, `embedding` doubles as the model width and
    `enc_hidden`/`dec_hidden` are ignored.
    """

    architecture: str
    embedding: int
    enc_hidden: int
    dec_hidden: int
    enc_layers: int
    dec_layers: int
    heads: int = 2
    feedforward: int = 256
    dropout: float = 0.0
    max_len: int = 512

    def __post_init__(self) -> None:
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        for name in ("embedding", "enc_hidden", "dec_hidden", "enc_layers", "dec_layers", "heads", "feedforward", "max_len"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.dropout < 1:
            raise ValueError("dropout must be in [0, 1)")
        if self.architecture == "transformer" and self.embedding % self.heads:
            raise ValueError("transformer width must divide evenly across heads")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "ModelConfig":
        return cls(**raw)


def desk_config(architecture: str) -> ModelConfig:
    """Small CPU-friendly preset used by the test battery."""
    if architecture == "lstm":
        return ModelConfig(
            architecture="lstm",
            embedding=64,
            enc_hidden=128,
            dec_hidden=128,
            enc_layers=2,
            dec_layers=2,
            feedforward=256,
            dropout=0.0,
        )
    if architecture == "transformer":
        return ModelConfig(
            architecture="transformer",
            embedding=128,
            enc_hidden=128,
            dec_hidden=128,
            enc_layers=2,
            dec_layers=2,
            heads=2,
            feedforward=256,
            dropout=0.0,
        )
    raise ValueError(f"unknown architecture {architecture!r}")


def paper_config(architecture: str) -> ModelConfig:
    """Full-scale preset; far beyond what the desk tests train."""
    if architecture == "lstm":
        return ModelConfig(
            architecture="lstm",
            embedding=512,
            enc_hidden=512,
            dec_hidden=1024,
            enc_layers=3,
            dec_layers=3,
            dropout=0.3,
        )
    if architecture == "transformer":
        return ModelConfig(
            architecture="transformer",
            embedding=512,
            enc_hidden=512,
            dec_hidden=512,
            enc_layers=4,
            dec_layers=4,
            heads=8,
            feedforward=1536,
            dropout=0.2,
        )
    raise ValueError(f"unknown architecture {architecture!r}")


@dataclass(frozen=True)
class TrainConfig:
    """Adam + categorical cross-entropy with teacher forcing."""

    epochs: int
    learning_rate: float = 0.001
    batch_size: int = 32
    seed: int = 0
    clip_norm: float = 5.0
    stop_loss: float | None = None  # early exit once epoch loss drops below

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch size must be at least 1")
        if self.epochs < 1:
            raise ValueError("epochs must be at least 1")
        if self.clip_norm <= 0:
            raise ValueError("clip norm must be positive")


@dataclass(frozen=True)
class SamplerConfig:
    """Temperature sampling; a fixed value or a per-piece uniform draw."""

    temperature: float | None = None
    temperature_range: tuple[float, float] = (0.8, 1.2)
    seed: int = 0
    greedy: bool = False
    max_len: int | None = None  # defaults to the model's max_len

    def __post_init__(self) -> None:
        if self.temperature is not None and self.temperature <= 0:
            raise ValueError("temperature must be positive")
        lo, hi = self.temperature_range
        if lo <= 0 or hi < lo:
            raise ValueError("temperature range must be positive and ordered")
