"""Sequence models: condition tokens in, lead sheet tokens out."""

from moodsheet.models.config import (
    ModelConfig,
    SamplerConfig,
    TrainConfig,
    desk_config,
    paper_config,
)
from moodsheet.models.lstm import LstmSeq2Seq
from moodsheet.models.transformer import TransformerSeq2Seq
from moodsheet.models.factory import build_model, parameter_count
from moodsheet.models.training import (
    TrainingDivergedError,
    TrainResult,
    make_pairs,
    train_model,
)
from moodsheet.models.sampling import (
    GenerationResult,
    GrammarMask,
    IncompleteGenerationError,
    generate,
    softmax_with_temperature,
)
from moodsheet.models.gradcheck import (
    check_attention_gradients,
    check_lstm_cell_gradients,
    max_relative_error,
    unused_embedding_grad_norm,
)
from moodsheet.models.checkpoint import CheckpointError, load_checkpoint, save_checkpoint

__all__ = [
    "CheckpointError",
    "GenerationResult",
    "GrammarMask",
    "IncompleteGenerationError",
    "LstmSeq2Seq",
    "ModelConfig",
    "SamplerConfig",
    "TrainConfig",
    "TrainResult",
    "TrainingDivergedError",
    "TransformerSeq2Seq",
    "build_model",
    "check_attention_gradients",
    "check_lstm_cell_gradients",
    "desk_config",
    "generate",
    "load_checkpoint",
    "make_pairs",
    "max_relative_error",
    "paper_config",
    "parameter_count",
    "save_checkpoint",
    "softmax_with_temperature",
    "train_model",
    "unused_embedding_grad_norm",
]
