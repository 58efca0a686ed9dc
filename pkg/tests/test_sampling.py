from __future__ import annotations

import math

import numpy as np
import pytest

from ideation.lm.sampling import counter_rng, sample_token, top_k_filter


def test_top_k_filter_definition():
    out = top_k_filter(np.array([2.0, 1.0, 0.5]), k=2)
    assert out[0] == 2.0 and out[1] == 1.0
    assert np.isneginf(out[2])


def test_top_k_filter_k1_keeps_only_argmax():
    out = top_k_filter(np.array([0.1, 3.0, 2.9]), k=1)
    assert out[1] == 3.0
    assert np.isneginf(out[0]) and np.isneginf(out[2])


def test_top_k_filter_k_at_least_length_is_identity():
    logits = np.array([0.3, -1.0, 2.0])
    assert np.array_equal(top_k_filter(logits, k=3), logits)
    assert np.array_equal(top_k_filter(logits, k=50), logits)


def test_top_k_filter_tie_at_boundary_keeps_lower_index():
    out = top_k_filter(np.array([1.0, 2.0, 1.0]), k=2)
    assert out[0] == 1.0 and out[1] == 2.0
    assert np.isneginf(out[2])


def test_top_k_filter_idempotent_and_preserves_argmax():
    rng = np.random.default_rng(0)
    for _ in range(50):
        logits = rng.standard_normal(rng.integers(2, 30))
        k = int(rng.integers(1, logits.size + 1))
        once = top_k_filter(logits, k)
        assert np.array_equal(top_k_filter(once, k), once)
        assert np.argmax(once) == np.argmax(logits)


def test_top_k_filter_rejects_bad_k():
    with pytest.raises(ValueError):
        top_k_filter(np.array([1.0]), k=0)


def test_sample_token_top_k_1_is_argmax():
    rng = np.random.default_rng(1)
    for _ in range(200):
        logits = rng.standard_normal(20)
        draw = sample_token(logits, temperature=0.9, top_k=1, rng=rng)
        assert draw == int(np.argmax(logits))


def test_sample_token_rejects_all_neg_inf():
    with pytest.raises(ValueError):
        sample_token(np.array([-np.inf, -np.inf]), 1.0, 2, np.random.default_rng(0))


def test_sample_token_frequencies_match_softmax():
    logits = np.array([math.log(2.0), math.log(1.0), -np.inf])
    rng = np.random.default_rng(7)
    draws = np.array([sample_token(logits, 1.0, 3, rng) for _ in range(10000)])
    freq0 = float(np.mean(draws == 0))
    assert abs(freq0 - 2.0 / 3.0) <= 0.02
    assert not np.any(draws == 2)


def test_sample_token_two_token_closed_form():
    # softmax([1/0.9, 0]) gives p(token 0) = 1 / (1 + e^(-1/0.9)) ~= 0.7523
    expected = 1.0 / (1.0 + math.exp(-1.0 / 0.9))
    rng = np.random.default_rng(11)
    draws = np.array(
        [sample_token(np.array([1.0, 0.0]), 0.9, 2, rng) for _ in range(10000)]
    )
    assert abs(float(np.mean(draws == 0)) - expected) <= 0.02


def test_sampled_indices_stay_in_top_k_set():
    rng = np.random.default_rng(23)
    logits = rng.standard_normal(40)
    k = 5
    allowed = set(np.flatnonzero(np.isfinite(top_k_filter(logits, k))))
    for _ in range(1000):
        assert sample_token(logits, 0.9, k, rng) in allowed


def test_lower_temperature_concentrates_on_larger_logit():
    logits = np.array([1.0, 0.0])
    freqs = []
    for temperature in (2.0, 1.0, 0.5):
        rng = np.random.default_rng(31)
        draws = [sample_token(logits, temperature, 2, rng) for _ in range(5000)]
        freqs.append(np.mean(np.array(draws) == 0))
        analytic = 1.0 / (1.0 + math.exp(-1.0 / temperature))
        assert abs(freqs[-1] - analytic) <= 0.02
    assert freqs[0] < freqs[1] < freqs[2]


def test_counter_rng_is_reproducible_and_order_free():
    a = counter_rng(99, sample_index=4, step=17).random()
    b = counter_rng(99, sample_index=4, step=17).random()
    assert a == b
    others = {
        counter_rng(99, sample_index=5, step=17).random(),
        counter_rng(99, sample_index=4, step=18).random(),
        counter_rng(100, sample_index=4, step=17).random(),
    }
    assert a not in others
