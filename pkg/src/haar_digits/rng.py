"""Seeded, splittable, counter-based random stream.

The generator is SplitMix64 run in counter mode so that every draw is a
pure function of (seed, stream_id, counter) and streams can be split and
replayed bit-exactly on any platform. All arithmetic is modulo 2^64.

    GAMMA = 0x9E3779B97F4A7C15
    mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
              z ^= z >> 27; z *= 0x94D049BB133111EB
              z ^= z >> 31; return z
    key(seed, stream_id) = mix64(mix64(seed) + GAMMA * stream_id)
    word_i = mix64(key + i * GAMMA)            for i = 1, 2, 3, ...

A uniform double in [0, 1) is (word >> 11) * 2^-53. Gaussian variates come
from the Marsaglia polar rejection method consuming uniforms strictly in
pair order with a one-deep carry buffer, so the Gaussian sequence is also a
pure function of the word stream (independent of how requests are batched).
Gamma variates use Marsaglia-Tsang; their draw pattern is deterministic for
a fixed (shape, size) call sequence.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = ["RngStream", "GAMMA", "mix64"]

_MASK = 0xFFFFFFFFFFFFFFFF
GAMMA = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_SUBSTREAM_SALT = 0x632BE59BD9B4E019
_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53

_U64_GAMMA = np.uint64(GAMMA)
_U64_MIX_A = np.uint64(_MIX_A)
_U64_MIX_B = np.uint64(_MIX_B)
_SH30 = np.uint64(30)
_SH27 = np.uint64(27)
_SH31 = np.uint64(31)
_SH11 = np.uint64(11)


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int (mod 2^64)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK
    return z ^ (z >> 31)


def _mix64_vec(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> _SH30)
    z = z * _U64_MIX_A
    z = z ^ (z >> _SH27)
    z = z * _U64_MIX_B
    return z ^ (z >> _SH31)


def _parse_size(size):
    if size is None:
        return None, 1
    if np.ndim(size) == 0:
        n = int(size)
        if n < 0:
            raise DomainError(f"size must be >= 0, got {size}")
        return (n,), n
    shape = tuple(int(d) for d in size)
    if any(d < 0 for d in shape):
        raise DomainError(f"size must be >= 0, got {size}")
    return shape, int(np.prod(shape, dtype=np.int64)) if shape else 1


class RngStream:
    """Deterministic stream addressed by (seed, stream_id, counter)."""

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & _MASK
        self.stream_id = int(stream_id) & _MASK
        self._key = np.uint64(mix64((mix64(self.seed) + GAMMA * self.stream_id) & _MASK))
        self.counter = 0
        self._pending_normal: float | None = None

    def __repr__(self):  # pragma: no cover - debugging aid
        return (
            f"RngStream(seed={self.seed}, stream_id={self.stream_id}, "
            f"counter={self.counter})"
        )

    def substream(self, k: int) -> "RngStream":
        """Independent child stream; deterministic in (stream_id, k)."""
        child = mix64(self.stream_id ^ mix64((int(k) + _SUBSTREAM_SALT) & _MASK))
        return RngStream(self.seed, child)

    def skip(self, n_words: int) -> None:
        """Advance the word counter without generating output."""
        if n_words < 0:
            raise DomainError("skip: n_words must be >= 0")
        self.counter += int(n_words)

    # --- raw words and uniforms -------------------------------------------

    def raw(self, n: int) -> np.ndarray:
        """Next n 64-bit words as a uint64 array."""
        n = int(n)
        if n < 0:
            raise DomainError("raw: n must be >= 0")
        idx = np.arange(self.counter + 1, self.counter + n + 1, dtype=np.uint64)
        self.counter += n
        return _mix64_vec(self._key + idx * _U64_GAMMA)

    def random(self, size=None):
        """Uniform doubles in [0, 1): (word >> 11) * 2^-53."""
        shape, n = _parse_size(size)
        vals = (self.raw(n) >> _SH11).astype(np.float64) * _INV_2_53
        if shape is None:
            return float(vals[0])
        return vals.reshape(shape)

    def uniform(self, low: float = 0.0, high: float = 1.0, size=None):
        """Uniform doubles in [low, high)."""
        if not (math.isfinite(low) and math.isfinite(high) and low < high):
            raise DomainError(f"uniform: need finite low < high, got [{low}, {high})")
        return low + (high - low) * self.random(size)

    def index_below(self, bound: int) -> int:
        """One integer in {0, ..., bound-1} (floor of a scaled uniform)."""
        if bound < 1:
            raise DomainError("index_below: bound must be >= 1")
        j = int(self.random() * bound)
        return min(j, bound - 1)

    # --- Gaussian and gamma variates --------------------------------------

    def normal(self, size=None):
        """Standard normal variates via Marsaglia polar rejection.

        Uniforms are consumed strictly in pair order and an odd accepted
        variate is carried to the next request, so the output sequence
        depends only on (seed, stream_id) and the running counter, never on
        how calls are batched.
        """
        shape, n = _parse_size(size)
        out = np.empty(n, dtype=np.float64)
        pos = 0
        if self._pending_normal is not None and n > 0:
            out[0] = self._pending_normal
            self._pending_normal = None
            pos = 1
        while pos < n:
            npairs = (n - pos + 1) // 2
            flat = self.random(2 * npairs)
            u = 2.0 * flat[0::2] - 1.0
            v = 2.0 * flat[1::2] - 1.0
            s = u * u + v * v
            ok = (s > 0.0) & (s < 1.0)
            if not ok.any():
                continue
            f = np.sqrt(-2.0 * np.log(s[ok]) / s[ok])
            pair = np.empty(2 * int(ok.sum()), dtype=np.float64)
            pair[0::2] = u[ok] * f
            pair[1::2] = v[ok] * f
            take = min(pair.size, n - pos)
            out[pos : pos + take] = pair[:take]
            pos += take
            if take < pair.size:  # at most one leftover by construction
                self._pending_normal = float(pair[take])
        if shape is None:
            return float(out[0])
        return out.reshape(shape)

    def gamma(self, shape_param: float, size=None):
        """Gamma(shape, scale=1) variates via Marsaglia-Tsang rejection.

        For shape < 1 the standard boost gamma(a) = gamma(a+1) * U^(1/a) is
        applied. Each rejection round draws exactly `remaining` normals then
        `remaining` uniforms, so the draw pattern is deterministic for a
        fixed call sequence.
        """
        alpha = float(shape_param)
        if not (math.isfinite(alpha) and alpha > 0.0):
            raise DomainError(f"gamma: shape must be > 0, got {shape_param}")
        shape, n = _parse_size(size)
        if alpha < 1.0:
            base = self._gamma_ge1(alpha + 1.0, n)
            u = np.asarray(self.random(n), dtype=np.float64).reshape(n)
            out = base * np.power(u, 1.0 / alpha)
        else:
            out = self._gamma_ge1(alpha, n)
        if shape is None:
            return float(out[0])
        return out.reshape(shape)

    def _gamma_ge1(self, alpha: float, n: int) -> np.ndarray:
        d = alpha - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        out = np.empty(n, dtype=np.float64)
        pos = 0
        while pos < n:
            rem = n - pos
            x = np.asarray(self.normal(rem), dtype=np.float64).reshape(rem)
            u = np.asarray(self.random(rem), dtype=np.float64).reshape(rem)
            t = 1.0 + c * x
            v = t * t * t
            with np.errstate(divide="ignore", invalid="ignore"):
                ok = (v > 0.0) & (
                    np.log(u) < 0.5 * x * x + d - d * v + d * np.log(v)
                )
            acc = v[ok]
            take = acc.size
            out[pos : pos + take] = d * acc
            pos += take
        return out

    def chi_square(self, dof: int, size=None):
        """Chi-square variates with `dof` degrees of freedom (2*Gamma(dof/2))."""
        if dof < 1:
            raise DomainError(f"chi_square: dof must be >= 1, got {dof}")
        return 2.0 * self.gamma(dof / 2.0, size)
