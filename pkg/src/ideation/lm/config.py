"""Fine-tuning and decoding configuration."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class FineTuneConfig:
    """Training protocol: 20,000 single-example steps, losses logged every 100.

    checkpoint_every = 0 writes only the final checkpoint.
    """

    steps: int = 20000
    batch_size: int = 1
    learning_rate: float = 0.1
    log_every: int = 100
    checkpoint_every: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.log_every < 1:
            raise ValueError("log_every must be >= 1")
        if self.checkpoint_every < 0:
            raise ValueError("checkpoint_every must be >= 0")


@dataclass(frozen=True)
class GenerationConfig:
    """Decoding parameters. Defaults follow the temperature 0.9 / top-k 50 protocol."""

    temperature: float = 0.9
    top_k: int = 50
    max_new_tokens: int = 80
    n_samples: int = 500
    seed: int = 0

    def __post_init__(self) -> None:
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.max_new_tokens < 1:
            raise ValueError("max_new_tokens must be >= 1")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
