"""Fine-tuning loop, loss logging and checkpoint layout.

Checkpoints live under ``<checkpoint_dir>/<step>/`` with a ``latest``
marker file beside them naming the most recent step.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path

from ..dataset import parse_example
from ..errors import BackendError, DataError
from .backends import ModelBackend
from .config import FineTuneConfig

LATEST_MARKER = "latest"


@dataclass(frozen=True)
class Checkpoint:
    path: Path
    step: int


@dataclass(frozen=True)
class LossTrace:
    """Mean training loss at every log_every-th step."""

    points: tuple[tuple[int, float], ...]

    def save_csv(self, path: str | Path) -> None:
        lines = ["step,loss"]
        lines += [f"{step},{loss!r}" for step, loss in self.points]
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load_csv(cls, path: str | Path) -> "LossTrace":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or lines[0] != "step,loss":
            raise DataError(f"{path}: missing 'step,loss' header")
        points = []
        for lineno, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            step_text, _, loss_text = line.partition(",")
            try:
                points.append((int(step_text), float(loss_text)))
            except ValueError:
                raise DataError(f"{path}: line {lineno}: bad loss point") from None
        return cls(points=tuple(points))


def _load_examples(dataset_path: str | Path) -> list[str]:
    lines = [
        line
        for line in Path(dataset_path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if not lines:
        raise DataError(f"{dataset_path}: empty dataset")
    for lineno, line in enumerate(lines, start=1):
        try:
            parse_example(line)
        except DataError as exc:
            raise DataError(f"{dataset_path}: line {lineno}: {exc}") from exc
    return lines


def finetune(
    backend: ModelBackend,
    dataset_path: str | Path,
    config: FineTuneConfig,
    checkpoint_dir: str | Path,
) -> tuple[Checkpoint, LossTrace]:
    """Run exactly config.steps training steps, cycling the shuffled dataset.

    Mean loss over each log_every window is recorded; checkpoints are
    written every checkpoint_every steps (when > 0) and at completion.
    """
    examples = _load_examples(dataset_path)
    random.Random(config.seed).shuffle(examples)
    checkpoint_dir = Path(checkpoint_dir)

    points: list[tuple[int, float]] = []
    window: list[float] = []
    cursor = 0
    for step in range(1, config.steps + 1):
        batch: list[str] = []
        for _ in range(config.batch_size):
            batch.append(examples[cursor % len(examples)])
            cursor += 1
        loss = backend.train_step(batch, config.learning_rate)
        if not math.isfinite(loss):
            raise BackendError(f"non-finite loss at step {step}")
        window.append(loss)
        if step % config.log_every == 0:
            points.append((step, sum(window) / len(window)))
            window = []
        if config.checkpoint_every > 0 and step % config.checkpoint_every == 0:
            _save_step(backend, checkpoint_dir, step)
    final = _save_step(backend, checkpoint_dir, config.steps)
    return final, LossTrace(points=tuple(points))


def _save_step(backend: ModelBackend, checkpoint_dir: Path, step: int) -> Checkpoint:
    step_dir = checkpoint_dir / str(step)
    backend.save_checkpoint(step_dir)
    (checkpoint_dir / LATEST_MARKER).write_text(f"{step}\n", encoding="utf-8")
    return Checkpoint(path=step_dir, step=step)


def latest_checkpoint(checkpoint_dir: str | Path) -> Checkpoint:
    """Resolve the ``latest`` marker in a domain's checkpoint directory."""
    checkpoint_dir = Path(checkpoint_dir)
    marker = checkpoint_dir / LATEST_MARKER
    if not marker.exists():
        raise DataError(f"{checkpoint_dir}: no '{LATEST_MARKER}' marker; not fine-tuned")
    step_text = marker.read_text(encoding="utf-8").strip()
    try:
        step = int(step_text)
    except ValueError:
        raise DataError(f"{marker}: bad step {step_text!r}") from None
    step_dir = checkpoint_dir / step_text
    if not step_dir.is_dir():
        raise DataError(f"{checkpoint_dir}: marked step {step} missing")
    return Checkpoint(path=step_dir, step=step)


def has_checkpoint(checkpoint_dir: str | Path) -> bool:
    try:
        latest_checkpoint(checkpoint_dir)
        return True
    except DataError:
        return False


def validate_trace_spacing(trace: LossTrace, log_every: int) -> None:
    """Steps must be exact successive multiples of log_every."""
    expected = [(i + 1) * log_every for i in range(len(trace.points))]
    actual = [step for step, _ in trace.points]
    if actual != expected:
        raise DataError(f"loss trace spacing violates log_every={log_every}: {actual[:5]}...")


__all__ = [
    "Checkpoint",
    "LossTrace",
    "finetune",
    "latest_checkpoint",
    "has_checkpoint",
    "validate_trace_spacing",
    "LATEST_MARKER",
]
