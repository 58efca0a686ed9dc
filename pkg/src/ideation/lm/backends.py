"""Causal language-model backends.

The package trains and samples through the ModelBackend interface so the
heavy pretrained models stay optional: a from-scratch character-level MLP
covers the whole test suite at desk scale, and a scripted backend drives
the deterministic generation tests. Pretrained transformer backends plug
in through the same interface.
"""

from __future__ import annotations

import json
import logging
import string
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Sequence

import numpy as np

from ..errors import BackendError, DataError

logger = logging.getLogger(__name__)

START_TOKEN = "<|s|>"
END_TOKEN = "<|e|>"

_CHARSET = string.ascii_letters + string.digits + string.punctuation + " "


class CharTokenizer:
    """Fixed character vocabulary plus the start/end markers as single tokens."""

    PAD = 0
    UNK = 1

    def __init__(self) -> None:
        self._specials = [START_TOKEN, END_TOKEN]
        self._tokens = ["<pad>", "<unk>", *self._specials, *list(_CHARSET)]
        self._ids = {tok: i for i, tok in enumerate(self._tokens)}

    @property
    def vocab_size(self) -> int:
        return len(self._tokens)

    @property
    def start_id(self) -> int:
        return self._ids[START_TOKEN]

    @property
    def end_id(self) -> int:
        return self._ids[END_TOKEN]

    def encode(self, text: str) -> list[int]:
        ids: list[int] = []
        i = 0
        while i < len(text):
            for special in self._specials:
                if text.startswith(special, i):
                    ids.append(self._ids[special])
                    i += len(special)
                    break
            else:
                ids.append(self._ids.get(text[i], self.UNK))
                i += 1
        return ids

    def decode(self, ids: Sequence[int]) -> str:
        parts = []
        for i in ids:
            if i in (self.PAD, self.UNK):
                continue
            parts.append(self._tokens[i])
        return "".join(parts)


class ModelBackend(ABC):
    """What fine-tuning and generation need from a causal LM."""

    @property
    @abstractmethod
    def vocab_size(self) -> int: ...

    @abstractmethod
    def encode(self, text: str) -> list[int]: ...

    @abstractmethod
    def decode(self, ids: Sequence[int]) -> str: ...

    @abstractmethod
    def next_token_logits(self, context: Sequence[int]) -> np.ndarray:
        """Logits over the vocabulary; deterministic given weights and context."""

    @abstractmethod
    def train_step(self, examples: Sequence[str], learning_rate: float) -> float:
        """One optimization step on a batch of serialized examples; returns mean loss."""

    @abstractmethod
    def save_checkpoint(self, directory: str | Path) -> None: ...


class CharMLPBackend(ModelBackend):
    """Two-layer character-level MLP language model (pure numpy).

    Predicts the next token from a fixed window of preceding tokens:
    embeddings are concatenated, passed through one tanh hidden layer, then
    projected to vocabulary logits. Trained with Adagrad. Small enough to
    fine-tune in seconds on a CPU, which is all the desk-scale protocol
    needs.
    """

    KIND = "char-mlp"
    # Guard against pathological lines; ordinary examples are far shorter.
    MAX_EXAMPLE_TOKENS = 512

    def __init__(
        self,
        context_window: int = 16,
        embed_dim: int = 24,
        hidden_dim: int = 96,
        seed: int = 0,
    ):
        if context_window < 1 or embed_dim < 1 or hidden_dim < 1:
            raise ValueError("context_window, embed_dim and hidden_dim must be >= 1")
        self.tokenizer = CharTokenizer()
        self.context_window = context_window
        self.embed_dim = embed_dim
        self.hidden_dim = hidden_dim
        self.seed = seed
        self._truncation_warned = False
        rng = np.random.default_rng(seed)
        v = self.tokenizer.vocab_size
        self.params = {
            "embed": rng.standard_normal((v, embed_dim)) * 0.1,
            "w1": rng.standard_normal((context_window * embed_dim, hidden_dim)) * 0.1,
            "b1": np.zeros(hidden_dim),
            "w2": rng.standard_normal((hidden_dim, v)) * 0.1,
            "b2": np.zeros(v),
        }
        self._grad_accum = {k: np.zeros_like(p) for k, p in self.params.items()}

    @property
    def vocab_size(self) -> int:
        return self.tokenizer.vocab_size

    def encode(self, text: str) -> list[int]:
        return self.tokenizer.encode(text)

    def decode(self, ids: Sequence[int]) -> str:
        return self.tokenizer.decode(ids)

    def _windows(self, tokens: Sequence[int]) -> np.ndarray:
        """Left-padded context windows, one per predicted position."""
        padded = [self.tokenizer.PAD] * self.context_window + list(tokens)
        return np.array(
            [padded[t : t + self.context_window] for t in range(len(tokens))],
            dtype=np.int64,
        )

    def _forward(self, windows: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = self.params["embed"][windows].reshape(windows.shape[0], -1)
        h = np.tanh(x @ self.params["w1"] + self.params["b1"])
        logits = h @ self.params["w2"] + self.params["b2"]
        return x, h, logits

    def next_token_logits(self, context: Sequence[int]) -> np.ndarray:
        window = list(context)[-self.context_window :]
        window = [self.tokenizer.PAD] * (self.context_window - len(window)) + window
        _, _, logits = self._forward(np.array([window], dtype=np.int64))
        return logits[0]

    def train_step(self, examples: Sequence[str], learning_rate: float) -> float:
        if not examples:
            raise ValueError("empty batch")
        windows_list = []
        targets_list = []
        for text in examples:
            tokens = self.encode(text)
            if len(tokens) > self.MAX_EXAMPLE_TOKENS:
                if not self._truncation_warned:
                    logger.warning(
                        "example longer than %d tokens truncated (further truncations silent)",
                        self.MAX_EXAMPLE_TOKENS,
                    )
                    self._truncation_warned = True
                tokens = tokens[: self.MAX_EXAMPLE_TOKENS]
            if not tokens:
                continue
            windows_list.append(self._windows(tokens))
            targets_list.append(np.array(tokens, dtype=np.int64))
        if not windows_list:
            raise ValueError("batch contained no trainable tokens")
        windows = np.concatenate(windows_list)
        targets = np.concatenate(targets_list)

        x, h, logits = self._forward(windows)
        shifted = logits - logits.max(axis=1, keepdims=True)
        exp = np.exp(shifted)
        probs = exp / exp.sum(axis=1, keepdims=True)
        n = targets.shape[0]
        loss = float(-np.log(probs[np.arange(n), targets] + 1e-12).mean())

        dlogits = probs
        dlogits[np.arange(n), targets] -= 1.0
        dlogits /= n
        grads = {
            "w2": h.T @ dlogits,
            "b2": dlogits.sum(axis=0),
        }
        dh = dlogits @ self.params["w2"].T
        dpre = dh * (1.0 - h * h)
        grads["w1"] = x.T @ dpre
        grads["b1"] = dpre.sum(axis=0)
        dx = (dpre @ self.params["w1"].T).reshape(
            windows.shape[0], self.context_window, self.embed_dim
        )
        dembed = np.zeros_like(self.params["embed"])
        np.add.at(dembed, windows, dx)
        grads["embed"] = dembed

        for name, grad in grads.items():
            accum = self._grad_accum[name]
            accum += grad * grad
            self.params[name] -= learning_rate * grad / (np.sqrt(accum) + 1e-8)
        return loss

    def save_checkpoint(self, directory: str | Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        np.savez(directory / "weights.npz", **self.params)
        meta = {
            "kind": self.KIND,
            "context_window": self.context_window,
            "embed_dim": self.embed_dim,
            "hidden_dim": self.hidden_dim,
            "seed": self.seed,
        }
        (directory / "meta.json").write_text(json.dumps(meta, indent=2), encoding="utf-8")

    @classmethod
    def from_checkpoint(cls, directory: str | Path) -> "CharMLPBackend":
        directory = Path(directory)
        meta = json.loads((directory / "meta.json").read_text(encoding="utf-8"))
        backend = cls(
            context_window=int(meta["context_window"]),
            embed_dim=int(meta["embed_dim"]),
            hidden_dim=int(meta["hidden_dim"]),
            seed=int(meta["seed"]),
        )
        with np.load(directory / "weights.npz") as data:
            for name in backend.params:
                loaded = data[name]
                if loaded.shape != backend.params[name].shape:
                    raise DataError(f"{directory}: checkpoint weight {name} has wrong shape")
                backend.params[name] = loaded
        return backend


class ScriptedBackend(ModelBackend):
    """Test double that deterministically replays a fixed script.

    The next token is chosen by matching the longest suffix of the context
    against a prefix of the script, so repeated generations from the same
    prompt replay the script from its start. Not trainable.
    """

    def __init__(self, script: str):
        if not script:
            raise ValueError("script must be non-empty")
        self.tokenizer = CharTokenizer()
        self.script_tokens = self.tokenizer.encode(script)

    @property
    def vocab_size(self) -> int:
        return self.tokenizer.vocab_size

    def encode(self, text: str) -> list[int]:
        return self.tokenizer.encode(text)

    def decode(self, ids: Sequence[int]) -> str:
        return self.tokenizer.decode(ids)

    def next_token_logits(self, context: Sequence[int]) -> np.ndarray:
        context = list(context)
        script = self.script_tokens
        target = script[0]
        for length in range(min(len(context), len(script)), 0, -1):
            if context[-length:] == script[:length]:
                target = script[length % len(script)]
                break
        logits = np.full(self.vocab_size, -np.inf)
        logits[target] = 0.0
        return logits

    def train_step(self, examples: Sequence[str], learning_rate: float) -> float:
        raise BackendError("scripted backend is not trainable")

    def save_checkpoint(self, directory: str | Path) -> None:
        raise BackendError("scripted backend has no checkpoint state")


def load_checkpoint(directory: str | Path) -> ModelBackend:
    """Reconstruct a backend from a checkpoint directory (dispatch on meta kind)."""
    directory = Path(directory)
    meta_file = directory / "meta.json"
    if not meta_file.exists():
        raise DataError(f"{directory}: not a checkpoint (missing meta.json)")
    meta = json.loads(meta_file.read_text(encoding="utf-8"))
    kind = meta.get("kind")
    if kind == CharMLPBackend.KIND:
        return CharMLPBackend.from_checkpoint(directory)
    raise DataError(f"{directory}: unknown backend kind {kind!r}")
