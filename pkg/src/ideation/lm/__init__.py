"""Language-model backends, fine-tuning and sampling."""

from .backends import (
    CharMLPBackend,
    CharTokenizer,
    ModelBackend,
    ScriptedBackend,
    load_checkpoint,
)
from .config import FineTuneConfig, GenerationConfig
from .generation import GeneratedText, generate_text, prompt_for
from .sampling import counter_rng, sample_token, top_k_filter
from .training import (
    Checkpoint,
    LossTrace,
    finetune,
    has_checkpoint,
    latest_checkpoint,
    validate_trace_spacing,
)

__all__ = [
    "CharMLPBackend",
    "CharTokenizer",
    "Checkpoint",
    "FineTuneConfig",
    "GeneratedText",
    "GenerationConfig",
    "LossTrace",
    "ModelBackend",
    "ScriptedBackend",
    "counter_rng",
    "finetune",
    "generate_text",
    "has_checkpoint",
    "latest_checkpoint",
    "load_checkpoint",
    "prompt_for",
    "sample_token",
    "top_k_filter",
    "validate_trace_spacing",
]
