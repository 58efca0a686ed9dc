"""Top-k / temperature token sampling.

Order of operations is pinned: top-k filtering first, then temperature
scaling of the survivors. Randomness comes from a counter-based source so
any (seed, sample_index, step) draw is reproducible independent of the
order samples are generated in.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def counter_rng(seed: int, sample_index: int, step: int) -> np.random.Generator:
    """Philox generator keyed by (seed, sample_index, step)."""
    key = np.array([seed & _MASK64, (seed >> 64) & _MASK64], dtype=np.uint64)
    counter = np.array([step & _MASK64, sample_index & _MASK64, 0, 0], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(counter=counter, key=key))


def top_k_filter(logits: np.ndarray, k: int) -> np.ndarray:
    """Set everything outside the k largest entries to -inf.

    Ties at the boundary keep the lower index; k >= len(logits) is the
    identity. The surviving entries are returned unchanged.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    logits = np.asarray(logits, dtype=np.float64)
    if k >= logits.shape[0]:
        return logits.copy()
    # Stable argsort on the negated values: equal logits keep index order,
    # so the lower index wins at the boundary.
    order = np.argsort(-logits, kind="stable")
    out = np.full_like(logits, -np.inf)
    keep = order[:k]
    out[keep] = logits[keep]
    return out


def sample_token(
    logits: np.ndarray,
    temperature: float,
    top_k: int,
    rng: np.random.Generator,
) -> int:
    """Draw one token index from softmax(top_k_filter(logits) / temperature)."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    filtered = top_k_filter(logits, top_k)
    finite = np.isfinite(filtered)
    if not finite.any():
        raise ValueError("all logits are -inf; nothing to sample")
    scaled = filtered / temperature
    scaled -= scaled[finite].max()
    weights = np.exp(scaled, where=finite, out=np.zeros_like(scaled))
    probs = weights / weights.sum()
    cumulative = np.cumsum(probs)
    index = int(np.searchsorted(cumulative, rng.random(), side="right"))
    if index >= probs.shape[0] or probs[index] == 0.0:
        # float fallthrough past the last positive-probability entry
        index = int(np.flatnonzero(probs > 0)[-1])
    return index
