"""Significand laws for coordinates of uniform points on the sphere S^n.

For a uniform point on the unit n-sphere in R^(n+1) the first coordinate
has density c_n (1-x^2)^(n/2-1) on [-1, 1] with c_n =
Gamma(n/2+1/2) / (sqrt(pi) Gamma(n/2)). Summing the density over the decade
bands [B^-i, s B^-i] gives the exact significand CDF; replacing the band
integrals with error-function differences gives the large-n asymptotic
form; extending that sum over all integer scales gives the limiting family

    F_n(x) = sum_{i in Z} [erf(sqrt(n/2) x / B^i) - erf(sqrt(n/2) / B^i)],

which is periodic in the sense F_n = F_{n B^2}, so the large-n behaviour
cycles through B^2 - 1 distinct limit laws instead of converging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .laws import DigitLaw
from .significand import check_base
from .specfun import (
    QuadratureSpec,
    erf,
    gamma_half_ratio,
    integrate,
    integrate_arcsine_weight,
    log_gamma,
)

__all__ = [
    "sphere_band_prob",
    "sphere_sig_cdf_exact",
    "sphere_sig_cdf_erf",
    "sphere_limit_cdf",
    "sphere_joint_band_prob",
    "sphere_joint_sig_approx",
    "SphereExact",
    "SphereErf",
    "SphereLimit",
]

_SQRT_PI = math.sqrt(math.pi)
_MAX_SCALES = 600  # hard stop for scale sums; geometric decay exits far earlier
_DEFAULT_SPEC = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11, max_depth=48)


def _check_n(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"sphere dimension n must be a positive integer, got {n!r}")
    return int(n)


def _band_coeff(n: int) -> float:
    """c_n = Gamma(n/2+1/2) / (sqrt(pi) Gamma(n/2))."""
    return gamma_half_ratio(n) / _SQRT_PI


def sphere_band_prob(n: int, a: float, b: float, spec: QuadratureSpec | None = None) -> float:
    """P(first coordinate of a uniform S^n point lies in (a, b)).

    The density integral is evaluated under x = sin(theta), turning the
    integrand into |cos(theta)|^(n-1), which is smooth for every n >= 1
    (including the endpoint-singular n = 1 case).
    """
    n = _check_n(n)
    a = float(a)
    b = float(b)
    if not (-1.0 <= a <= b <= 1.0):
        raise DomainError(f"sphere_band_prob: need -1 <= a <= b <= 1, got ({a}, {b})")
    if a == b:
        return 0.0
    spec = spec or _DEFAULT_SPEC
    expo = 0.5 * (n - 1)

    def g(x):
        return np.power(np.clip(1.0 - x * x, 0.0, None), expo)

    return _band_coeff(n) * integrate_arcsine_weight(g, a, b, spec)


def sphere_sig_cdf_exact(
    n: int,
    base: int,
    s,
    tail_tol: float = 1e-12,
    spec: QuadratureSpec | None = None,
) -> float:
    """Exact significand CDF of the first S^n coordinate at s in [1, B].

    P(S_B(x_1) <= s) = 2 c_n sum_{i>=1} integral_{B^-i}^{s B^-i}
    (1-x^2)^(n/2-1) dx; the scale sum is truncated once a term falls below
    tail_tol times the accumulated value (the terms decay geometrically
    like B^-i).
    """
    n = _check_n(n)
    base = check_base(base)
    s = float(s)
    if not (1.0 <= s <= base):
        raise DomainError(f"significand must lie in [1, {base}], got {s}")
    if s == 1.0:
        return 0.0
    spec = spec or _DEFAULT_SPEC
    total = 0.0
    for i in range(1, _MAX_SCALES):
        scale = float(base) ** -i
        term = 2.0 * sphere_band_prob(n, scale, s * scale, spec)
        total += term
        if i >= 2 and term <= tail_tol * max(total, 1e-300):
            break
    return min(total, 1.0)


def _erf_band_sum(n: int, base: int, a: float, b: float, tail_tol: float) -> float:
    """sum_{i>=1} [erf(sqrt(n/2) b / B^i) - erf(sqrt(n/2) a / B^i)].

    Scales where both arguments exceed the erf saturation point contribute
    exactly 0 and are skipped; the sum stops once terms are below tail_tol
    relative and the arguments have dropped past the O(1) region.
    """
    r = math.sqrt(0.5 * n)
    total = 0.0
    i = 1
    while r * a / float(base) ** i >= 6.0 and i < _MAX_SCALES:
        i += 1  # both erf values saturate to 1; term is exactly 0
    for j in range(i, i + _MAX_SCALES):
        scale = float(base) ** -j
        term = erf(r * b * scale) - erf(r * a * scale)
        total += term
        if r * b * scale < 1.0 and term <= tail_tol * max(total, 1e-300):
            break
    return total


def sphere_sig_cdf_erf(n: int, base: int, s, tail_tol: float = 1e-12) -> float:
    """Large-n error-function approximation to the significand CDF.

    Replaces each band integral with erf(sqrt(n/2) s/B^i) - erf(sqrt(n/2)/B^i);
    the approximation tightens like O(1/n) as the dimension grows.
    """
    n = _check_n(n)
    if n < 2:
        raise DomainError("sphere_sig_cdf_erf: asymptotic form requires n >= 2")
    base = check_base(base)
    s = float(s)
    if not (1.0 <= s <= base):
        raise DomainError(f"significand must lie in [1, {base}], got {s}")
    return _erf_band_sum(n, base, 1.0, s, tail_tol)


def sphere_limit_cdf(n: int, base: int, x, tail_tol: float = 1e-12) -> float:
    """Two-sided limit family F_n(x) on [1, B]; satisfies F_n = F_{n B^2}.

    F_n(1) = 0 and F_n(B) = 1 hold exactly (the two-sided sum telescopes at
    x = B). The sum is anchored near the scale where sqrt(n/2)/B^i is O(1)
    and extended both ways until terms vanish (saturation below, geometric
    decay above).
    """
    n = _check_n(n)
    base = check_base(base)
    x = float(x)
    if not (1.0 <= x <= base):
        raise DomainError(f"significand must lie in [1, {base}], got {x}")
    if x == 1.0:
        return 0.0
    r = math.sqrt(0.5 * n)
    i0 = round(math.log(r) / math.log(base)) if r > 0 else 0
    total = 0.0
    # upward (shrinking arguments): geometric tail
    for i in range(i0, i0 + _MAX_SCALES):
        scale = float(base) ** -i
        term = erf(r * x * scale) - erf(r * scale)
        total += term
        if r * x * scale < 1.0 and term <= tail_tol * max(total, 1e-300):
            break
    # downward (growing arguments): saturates to exactly 0 once both >= 6
    for i in range(i0 - 1, i0 - _MAX_SCALES, -1):
        scale = float(base) ** -i
        if r * scale >= 6.0:
            break
        total += erf(r * x * scale) - erf(r * scale)
    return min(max(total, 0.0), 1.0)


def _check_joint_bounds(bounds):
    pairs = [(float(a), float(b)) for a, b in bounds]
    if not pairs:
        raise DomainError("joint bounds must be nonempty")
    for a, b in pairs:
        if not (0.0 <= a < b):
            raise DomainError(f"joint bounds need 0 <= a < b per coordinate, got ({a}, {b})")
    if sum(b * b for _, b in pairs) >= 1.0:
        raise DomainError("joint integration region must lie strictly inside the unit ball")
    return pairs


def sphere_joint_band_prob(n: int, bounds, spec: QuadratureSpec | None = None) -> float:
    """P(|x_j| in (a_j, b_j) for j = 1..k) for the first k coordinates of S^n.

    Equals (2/sqrt(pi))^k * Gamma(n/2+1/2)/Gamma((n-k+1)/2) times the
    integral of (1 - |x|^2)^((n-k-1)/2) over the box, doubled per coordinate
    by the |.| symmetry. Supports k <= 2 by nested adaptive quadrature and
    k = 3 by Halton quasi-random cubature (tolerance ~1e-4); larger k is
    unsupported.
    """
    n = _check_n(n)
    pairs = _check_joint_bounds(bounds)
    k = len(pairs)
    if k > n:
        raise DomainError(f"need k <= n, got k={k} coordinates on S^{n}")
    if k > 3:
        raise NotImplementedError("joint band probabilities support k <= 3")
    spec = spec or _DEFAULT_SPEC
    coeff = (2.0 / _SQRT_PI) ** k * math.exp(
        log_gamma(0.5 * (n + 1)) - log_gamma(0.5 * (n - k + 1))
    )
    expo = 0.5 * (n - k - 1)

    if k == 1:
        (a, b) = pairs[0]
        return 2.0 * sphere_band_prob(n, a, b, spec)
    if k == 2:
        (a1, b1), (a2, b2) = pairs

        def inner(x_val: float) -> float:
            r2 = 1.0 - x_val * x_val

            def f(y):
                return np.power(np.clip(r2 - y * y, 0.0, None), expo)

            return integrate(f, a2, b2, spec)

        def outer(xs):
            xs = np.atleast_1d(np.asarray(xs, dtype=float))
            return np.array([inner(xv) for xv in xs])

        return coeff * integrate(outer, a1, b1, spec)
    # k == 3: Halton-sequence cubature over the box
    npts = 1 << 17
    pts = _halton(npts, (2, 3, 5))
    lo = np.array([p[0] for p in pairs])
    hi = np.array([p[1] for p in pairs])
    x = lo + (hi - lo) * pts
    vals = np.power(np.clip(1.0 - np.sum(x * x, axis=1), 0.0, None), expo)
    vol = float(np.prod(hi - lo))
    return coeff * vol * float(vals.mean())


def _halton(npts: int, bases) -> np.ndarray:
    """First npts points of the Halton sequence in the given prime bases."""
    out = np.empty((npts, len(bases)))
    idx = np.arange(1, npts + 1, dtype=np.int64)
    for dim, p in enumerate(bases):
        result = np.zeros(npts)
        f = 1.0
        i = idx.copy()
        while i.max() > 0:
            f /= p
            result += f * (i % p)
            i //= p
        out[:, dim] = result
    return out


def sphere_joint_sig_approx(n: int, base: int, bounds, tail_tol: float = 1e-12) -> float:
    """Asymptotic joint significand probability: product of erf band sums.

    P(S_B(x_j) in [a_j, b_j) for all j) ~ prod_j sum_{i>=1}
    [erf(sqrt(n/2) b_j/B^i) - erf(sqrt(n/2) a_j/B^i)]; the coordinates
    decouple in the large-n limit.
    """
    n = _check_n(n)
    if n < 2:
        raise DomainError("sphere_joint_sig_approx: asymptotic form requires n >= 2")
    base = check_base(base)
    out = 1.0
    for a, b in bounds:
        a = float(a)
        b = float(b)
        if not (1.0 <= a < b <= base):
            raise DomainError(
                f"joint significand bounds need 1 <= a < b <= {base}, got ({a}, {b})"
            )
        out *= _erf_band_sum(n, base, a, b, tail_tol)
    return out


# --- DigitLaw wrappers ------------------------------------------------------


@lru_cache(maxsize=32)
def _exact_cdf_interpolant(n: int, base: int, tail_tol: float):
    """Dense cubic-Hermite interpolant of the exact CDF (speed path).

    Grid values come from the quadrature route and slopes from the
    closed-form density, so interpolation error is ~(h/2)^4 |F''''|/384,
    far below every tolerance used against this law. Only built for n >= 2
    (the n = 1 density is unbounded at s = B).
    """
    grid = np.linspace(1.0, float(base), 2049)
    law = SphereExact(base=base, n=n, tail_tol=tail_tol)
    values = np.array([law._cdf_scalar(s) for s in grid])
    slopes = law.density(grid)
    return grid, values, slopes


def _hermite_eval(grid, values, slopes, t):
    idx = np.clip(np.searchsorted(grid, t, side="right") - 1, 0, len(grid) - 2)
    h = grid[idx + 1] - grid[idx]
    u = (t - grid[idx]) / h
    u2 = u * u
    u3 = u2 * u
    h00 = 2 * u3 - 3 * u2 + 1
    h10 = u3 - 2 * u2 + u
    h01 = -2 * u3 + 3 * u2
    h11 = u3 - u2
    return (
        values[idx] * h00
        + h * slopes[idx] * h10
        + values[idx + 1] * h01
        + h * slopes[idx + 1] * h11
    )


class _SphereLawBase(DigitLaw):
    """Array dispatch shared by the sphere-law variants."""

    def _cdf_scalar(self, s: float) -> float:
        raise NotImplementedError

    def cdf(self, s):
        arr, scalar = self._check_sig(s)
        if scalar:
            return self._cdf_scalar(float(arr))
        return np.array([self._cdf_scalar(v) for v in arr.ravel()]).reshape(arr.shape)


@dataclass(frozen=True)
class SphereExact(_SphereLawBase):
    """Exact first-coordinate significand law on S^n (quadrature route)."""

    base: int = 10
    n: int = 2
    tail_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "base", check_base(self.base))
        object.__setattr__(self, "n", _check_n(self.n))
        if not (0.0 < self.tail_tol < 1e-3):
            raise DomainError(f"tail_tol must be in (0, 1e-3), got {self.tail_tol}")

    def _cdf_scalar(self, s: float) -> float:
        return sphere_sig_cdf_exact(self.n, self.base, s, self.tail_tol)

    def cdf(self, s):
        arr, scalar = self._check_sig(s)
        if scalar:
            return self._cdf_scalar(float(arr))
        if arr.size > 256 and self.n >= 2:
            grid, values, slopes = _exact_cdf_interpolant(self.n, self.base, self.tail_tol)
            return np.clip(_hermite_eval(grid, values, slopes, arr), 0.0, 1.0)
        return np.array([self._cdf_scalar(v) for v in arr.ravel()]).reshape(arr.shape)

    def density(self, s):
        arr, scalar = self._check_sig(s)
        c2 = 2.0 * _band_coeff(self.n)
        expo = 0.5 * self.n - 1.0
        out = np.zeros_like(arr, dtype=float)
        for i in range(1, _MAX_SCALES):
            scale = float(self.base) ** -i
            x = arr * scale
            with np.errstate(divide="ignore"):
                out = out + c2 * scale * np.power(np.clip(1.0 - x * x, 0.0, None), expo)
            # for i >= 2 the weight (1-x^2)^expo is bounded by ~1.01, so the
            # remaining tail is under c2 * scale * B/(B-1)
            if i >= 2 and 2.0 * c2 * scale <= self.tail_tol:
                break
        return self._ret(out, scalar)


@dataclass(frozen=True)
class SphereErf(_SphereLawBase):
    """Error-function asymptotic form of the S^n significand law (n >= 2)."""

    base: int = 10
    n: int = 2
    tail_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "base", check_base(self.base))
        object.__setattr__(self, "n", _check_n(self.n))
        if self.n < 2:
            raise DomainError("SphereErf requires n >= 2")
        if not (0.0 < self.tail_tol < 1e-3):
            raise DomainError(f"tail_tol must be in (0, 1e-3), got {self.tail_tol}")

    def _cdf_scalar(self, s: float) -> float:
        return sphere_sig_cdf_erf(self.n, self.base, s, self.tail_tol)

    def density(self, s):
        arr, scalar = self._check_sig(s)
        r = math.sqrt(0.5 * self.n)
        out = np.zeros_like(arr, dtype=float)
        for i in range(1, _MAX_SCALES):
            scale = float(self.base) ** -i
            z = r * arr * scale
            out = out + (2.0 / _SQRT_PI) * r * scale * np.exp(-z * z)
            if r * float(self.base) * scale < 1.0 and (2.0 / _SQRT_PI) * r * scale <= self.tail_tol:
                break
        return self._ret(out, scalar)


@dataclass(frozen=True)
class SphereLimit(_SphereLawBase):
    """Periodic limit family F_n; identical for n and n B^2."""

    base: int = 10
    n: int = 1
    tail_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "base", check_base(self.base))
        object.__setattr__(self, "n", _check_n(self.n))
        if not (0.0 < self.tail_tol < 1e-3):
            raise DomainError(f"tail_tol must be in (0, 1e-3), got {self.tail_tol}")

    def _cdf_scalar(self, s: float) -> float:
        return sphere_limit_cdf(self.n, self.base, s, self.tail_tol)

    def density(self, s):
        arr, scalar = self._check_sig(s)
        r = math.sqrt(0.5 * self.n)
        i0 = round(math.log(r) / math.log(self.base)) if r > 0 else 0
        out = np.zeros_like(arr, dtype=float)
        # upward scales: coefficients decay geometrically
        for i in range(i0, i0 + _MAX_SCALES):
            scale = float(self.base) ** -i
            z = r * arr * scale
            out = out + (2.0 / _SQRT_PI) * r * scale * np.exp(-z * z)
            if (2.0 / _SQRT_PI) * r * scale * float(self.base) <= self.tail_tol:
                break
        # downward scales: the Gaussian factor kills terms once r*scale >= 8
        for i in range(i0 - 1, i0 - _MAX_SCALES, -1):
            scale = float(self.base) ** -i
            if r * scale >= 8.0:
                break
            z = r * arr * scale
            out = out + (2.0 / _SQRT_PI) * r * scale * np.exp(-z * z)
        return self._ret(out, scalar)
