from __future__ import annotations

from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from ideation.dataset import KeywordTitlePair, serialize_dataset
from ideation.errors import BackendError, DataError
from ideation.lm.backends import CharMLPBackend, CharTokenizer, load_checkpoint
from ideation.lm.config import FineTuneConfig, GenerationConfig
from ideation.lm.training import (
    LossTrace,
    finetune,
    has_checkpoint,
    latest_checkpoint,
    validate_trace_spacing,
)


class FlatBackend(CharMLPBackend):
    """Trainable-interface stub with constant loss, for trace-shape tests."""

    def __init__(self, loss=1.0):
        super().__init__(context_window=2, embed_dim=2, hidden_dim=2, seed=0)
        self.loss = loss
        self.seen = Counter()

    def train_step(self, examples, learning_rate):
        for example in examples:
            self.seen[example] += 1
        return self.loss

    def save_checkpoint(self, directory):
        Path(directory).mkdir(parents=True, exist_ok=True)
        (Path(directory) / "meta.json").write_text("{}", encoding="utf-8")


def _write_dataset(tmp_path, n=10):
    pairs = [
        KeywordTitlePair(keyword=f"kw{i}", title=f"Title kw{i} number {i}") for i in range(n)
    ]
    path = tmp_path / "data.txt"
    serialize_dataset(pairs, path, shuffle_seed=3)
    return path


def test_loss_trace_has_a_point_per_log_window(tmp_path):
    path = _write_dataset(tmp_path)
    backend = FlatBackend()
    config = FineTuneConfig(steps=20000, log_every=100, seed=1)
    _, trace = finetune(backend, path, config, tmp_path / "ckpt")
    assert len(trace.points) == 200
    assert [step for step, _ in trace.points] == [100 * i for i in range(1, 201)]
    validate_trace_spacing(trace, 100)


def test_finetune_cycles_dataset(tmp_path):
    path = _write_dataset(tmp_path, n=10)
    backend = FlatBackend()
    config = FineTuneConfig(steps=100, batch_size=1, log_every=10, seed=1)
    finetune(backend, path, config, tmp_path / "ckpt")
    assert sum(backend.seen.values()) == 100
    assert set(backend.seen.values()) == {10}


def test_finetune_rejects_empty_dataset(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("", encoding="utf-8")
    with pytest.raises(DataError, match="empty dataset"):
        finetune(FlatBackend(), path, FineTuneConfig(steps=1), tmp_path / "ckpt")


def test_finetune_rejects_unparseable_dataset(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("not a serialized example\n", encoding="utf-8")
    with pytest.raises(DataError, match="line 1"):
        finetune(FlatBackend(), path, FineTuneConfig(steps=1), tmp_path / "ckpt")


def test_finetune_aborts_on_non_finite_loss(tmp_path):
    path = _write_dataset(tmp_path)
    backend = FlatBackend(loss=float("nan"))
    with pytest.raises(BackendError, match="step 1"):
        finetune(backend, path, FineTuneConfig(steps=5), tmp_path / "ckpt")


def test_checkpoint_every_writes_intermediate_steps(tmp_path):
    path = _write_dataset(tmp_path)
    backend = FlatBackend()
    config = FineTuneConfig(steps=10, checkpoint_every=5, log_every=5)
    checkpoint, _ = finetune(backend, path, config, tmp_path / "ckpt")
    assert (tmp_path / "ckpt" / "5").is_dir()
    assert (tmp_path / "ckpt" / "10").is_dir()
    assert checkpoint.step == 10
    marker = latest_checkpoint(tmp_path / "ckpt")
    assert marker.step == 10


def test_latest_checkpoint_missing_marker(tmp_path):
    assert not has_checkpoint(tmp_path / "nowhere")
    with pytest.raises(DataError, match="not fine-tuned"):
        latest_checkpoint(tmp_path / "nowhere")


def test_loss_trace_csv_roundtrip(tmp_path):
    trace = LossTrace(points=((100, 1.25), (200, 0.5)))
    path = tmp_path / "loss.csv"
    trace.save_csv(path)
    assert LossTrace.load_csv(path) == trace


def test_char_backend_checkpoint_roundtrip(tmp_path):
    backend = CharMLPBackend(context_window=4, embed_dim=6, hidden_dim=8, seed=3)
    backend.train_step(["<|s|>gun => Toy gun set<|e|>"], learning_rate=0.1)
    backend.save_checkpoint(tmp_path / "ck")
    restored = load_checkpoint(tmp_path / "ck")
    context = backend.encode("<|s|>gun => ")
    assert np.array_equal(
        backend.next_token_logits(context), restored.next_token_logits(context)
    )


def test_load_checkpoint_rejects_unknown_kind(tmp_path):
    (tmp_path / "meta.json").write_text('{"kind": "martian"}', encoding="utf-8")
    with pytest.raises(DataError, match="unknown backend kind"):
        load_checkpoint(tmp_path)


def test_tokenizer_roundtrips_specials():
    tok = CharTokenizer()
    text = "<|s|>air gun => Rolling toy<|e|>"
    ids = tok.encode(text)
    assert tok.decode(ids) == text
    assert ids.count(tok.start_id) == 1
    assert ids.count(tok.end_id) == 1


def test_tokenizer_unknown_chars_become_unk():
    tok = CharTokenizer()
    ids = tok.encode("aéb")
    assert ids[1] == CharTokenizer.UNK
    assert tok.decode(ids) == "ab"


def test_config_validation():
    with pytest.raises(ValueError):
        FineTuneConfig(steps=0)
    with pytest.raises(ValueError):
        FineTuneConfig(log_every=0)
    with pytest.raises(ValueError):
        FineTuneConfig(batch_size=0)
    with pytest.raises(ValueError):
        GenerationConfig(temperature=0.0)
    with pytest.raises(ValueError):
        GenerationConfig(top_k=0)
    with pytest.raises(ValueError):
        GenerationConfig(n_samples=0)
