"""Deterministic stream: bit-exactness, batching invariance, moments."""

import math

import numpy as np
import pytest

from haar_digits.errors import DomainError
from haar_digits.rng import RngStream


def _reference_words(seed, stream_id, count):
    """Independent pure-int reimplementation of the word stream."""
    mask = (1 << 64) - 1
    gamma = 0x9E3779B97F4A7C15

    def fmix(z):
        z &= mask
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return z ^ (z >> 31)

    key = fmix((fmix(seed) + gamma * stream_id) & mask)
    return [fmix((key + i * gamma) & mask) for i in range(1, count + 1)]


def test_word_stream_matches_pure_int_reference():
    for seed, stream_id in [(42, 0), (0, 0), (42, 5), (2**63 + 17, 123)]:
        got = RngStream(seed, stream_id).raw(8).tolist()
        assert got == _reference_words(seed, stream_id, 8)


def test_frozen_first_words_seed_42():
    # pinned values: any change to the generator breaks reproducibility
    got = [hex(w) for w in RngStream(42).raw(4).tolist()]
    assert got == [
        "0x9d591bb7266b13f3",
        "0x733a550e28bd9590",
        "0x34d61dbd015a27d8",
        "0x665d833b14472f2b",
    ]


def test_uniform_from_words():
    words = _reference_words(7, 0, 5)
    expected = [(w >> 11) * 2.0**-53 for w in words]
    got = RngStream(7).random(5)
    assert got.tolist() == expected
    assert all(0.0 <= u < 1.0 for u in expected)


def test_determinism_and_counter():
    a = RngStream(9, 3)
    b = RngStream(9, 3)
    assert np.array_equal(a.random(100), b.random(100))
    assert a.counter == b.counter == 100


def test_skip_equals_drop():
    a = RngStream(11)
    a.skip(10)
    b = RngStream(11)
    b.random(10)
    assert np.array_equal(a.raw(5), b.raw(5))
    with pytest.raises(DomainError):
        a.skip(-1)


def test_substreams_are_distinct_and_deterministic():
    root = RngStream(42)
    s1 = root.substream(1)
    s2 = root.substream(2)
    s1b = RngStream(42).substream(1)
    assert np.array_equal(s1.raw(4), s1b.raw(4))
    assert not np.array_equal(RngStream(42).substream(1).raw(4), s2.raw(4))
    # child of child differs from both
    nested = root.substream(1).substream(1)
    assert not np.array_equal(nested.raw(4), RngStream(42).substream(1).raw(4))
    # substreams do not disturb the parent counter
    assert root.counter == 0


def test_normal_batching_invariance():
    whole = RngStream(5).normal(101)
    parts_stream = RngStream(5)
    parts = np.concatenate(
        [parts_stream.normal(7), parts_stream.normal(1), parts_stream.normal(93)]
    )
    assert np.array_equal(whole, parts)
    singles_stream = RngStream(5)
    singles = np.array([singles_stream.normal() for _ in range(101)])
    assert np.array_equal(whole, singles)


def test_normal_moments_and_shape():
    x = RngStream(12).normal((1000, 1000))
    assert x.shape == (1000, 1000)
    n = x.size
    assert abs(x.mean()) < 4.0 / math.sqrt(n)
    assert abs(x.var() - 1.0) < 4.0 * math.sqrt(2.0 / n)
    assert abs((x**3).mean()) < 4.0 * math.sqrt(15.0 / n)


def test_uniform_bounds_and_validation():
    u = RngStream(1).uniform(-2.0, 3.0, 10_000)
    assert u.min() >= -2.0 and u.max() < 3.0
    with pytest.raises(DomainError):
        RngStream(1).uniform(1.0, 1.0)
    with pytest.raises(DomainError):
        RngStream(1).uniform(0.0, float("inf"))


def test_index_below():
    rng = RngStream(3)
    draws = [rng.index_below(7) for _ in range(2000)]
    assert min(draws) == 0 and max(draws) == 6
    counts = np.bincount(draws, minlength=7)
    # loose uniformity: each cell within 5 sigma of 2000/7
    expected = 2000 / 7
    assert np.all(np.abs(counts - expected) < 5 * math.sqrt(expected))
    with pytest.raises(DomainError):
        rng.index_below(0)


def test_gamma_moments():
    rng = RngStream(8)
    for shape in (0.5, 1.0, 2.5, 7.0):
        x = rng.gamma(shape, 400_000)
        n = x.size
        se_mean = math.sqrt(shape / n)
        assert abs(x.mean() - shape) < 5 * se_mean, shape
        assert abs(x.var() - shape) < 6 * math.sqrt(shape) / math.sqrt(n) * 3
        assert x.min() > 0.0


def test_gamma_validation():
    with pytest.raises(DomainError):
        RngStream(1).gamma(0.0, 10)
    with pytest.raises(DomainError):
        RngStream(1).gamma(-2.0, 10)


def test_chi_square_moments_and_dof():
    rng = RngStream(21)
    for dof in (1, 4, 99):
        x = rng.chi_square(dof, 300_000)
        n = x.size
        assert abs(x.mean() - dof) < 5 * math.sqrt(2.0 * dof / n)
        assert abs(x.var() - 2.0 * dof) < 0.05 * 2.0 * dof + 1e-2
    with pytest.raises(DomainError):
        rng.chi_square(0, 10)


def test_uniform_sample_is_uniform_ks():
    u = np.sort(RngStream(42).random(100_000))
    n = u.size
    grid = np.arange(n)
    d = max(np.max(u - grid / n), np.max((grid + 1) / n - u))
    # 4-sigma-ish Kolmogorov bound
    assert d < 2.0 / math.sqrt(n)


def test_raw_dtype_and_size_validation():
    w = RngStream(0).raw(3)
    assert w.dtype == np.uint64
    with pytest.raises(DomainError):
        RngStream(0).raw(-1)
    with pytest.raises(DomainError):
        RngStream(0).random(-2)
    assert RngStream(0).random(0).shape == (0,)
