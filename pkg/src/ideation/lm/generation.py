"""Keyword-conditioned text generation.

The context is seeded with ``<|s|>KEYWORD => `` and tokens are sampled
until the end marker appears or max_new_tokens is hit, in which case the
result is flagged truncated.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..dataset import END, SEPARATOR, START
from .backends import ModelBackend
from .config import GenerationConfig
from .sampling import counter_rng, sample_token


@dataclass(frozen=True)
class GeneratedText:
    text: str
    truncated: bool


def prompt_for(keyword: str) -> str:
    return f"{START}{keyword}{SEPARATOR}"


def generate_text(
    backend: ModelBackend,
    keyword: str,
    config: GenerationConfig,
    sample_index: int = 0,
) -> GeneratedText:
    """Sample one idea for the keyword from the backend's current weights.

    Every token draw is keyed by (config.seed, sample_index, step), so a
    given sample reproduces regardless of how many others ran before it.
    """
    context = backend.encode(prompt_for(keyword))
    new_tokens: list[int] = []
    for step in range(config.max_new_tokens):
        logits = backend.next_token_logits(context)
        rng = counter_rng(config.seed, sample_index, step)
        token = sample_token(logits, config.temperature, config.top_k, rng)
        new_tokens.append(token)
        context.append(token)
        decoded = backend.decode(new_tokens)
        if END in decoded:
            return GeneratedText(text=decoded[: decoded.index(END)].strip(), truncated=False)
    return GeneratedText(text=backend.decode(new_tokens).strip(), truncated=True)
