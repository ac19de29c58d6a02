"""Self-contained special functions and adaptive quadrature.

Everything here is implemented directly (series, continued fractions,
Stirling expansion, Gauss-Legendre panels) rather than delegated to libm or
scipy, so results are identical across platforms and the test suite can
cross-check against independent oracles.

Accuracy contracts:

* ``erf``: relative error <= 1e-12 for |x| <= 6; saturates to +-1 beyond.
* ``log_gamma``: relative error <= 1e-12 on [0.5, 1e6].
* ``gamma_half_ratio(n)`` = Gamma(n/2 + 1/2)/Gamma(n/2), stable (no
  overflow) up to n = 1e8.
* ``integrate``: |result - true| <= max(abs_tol, rel_tol*|result|) for
  integrands smooth on the panel scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "erf",
    "erfc",
    "normal_cdf",
    "log_gamma",
    "gamma_half_ratio",
    "integrate",
    "integrate_arcsine_weight",
]

_SQRT_PI = math.sqrt(math.pi)
_TWO_OVER_SQRT_PI = 2.0 / _SQRT_PI
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# erf saturation threshold: erfc(6) ~ 2.15e-17 < 2^-53.
_ERF_SATURATE = 6.0
_ERF_SERIES_CUT = 2.0


def erf(x: float) -> float:
    """Error function (2/sqrt(pi)) * integral_0^x exp(-t^2) dt.

    Maclaurin series for |x| <= 2, Laplace continued fraction for the
    complement on 2 < |x| < 6, exact +-1 beyond (the true value differs
    from +-1 by less than one ulp there).
    """
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"erf: argument must be finite, got {x!r}")
    ax = abs(x)
    if ax >= _ERF_SATURATE:
        return math.copysign(1.0, x)
    if ax <= _ERF_SERIES_CUT:
        val = _erf_series(ax)
    else:
        val = 1.0 - _erfc_cf(ax)
    return math.copysign(val, x)


def erfc(x: float) -> float:
    """Complementary error function 1 - erf(x), accurate in the tail.

    For x >= 2 the continued fraction is used directly so the tiny tail is
    not lost to cancellation; for large x the value underflows gracefully
    to 0.
    """
    x = float(x)
    if math.isnan(x):
        raise DomainError("erfc: argument is NaN")
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x <= _ERF_SERIES_CUT:
        return 1.0 - _erf_series(x)
    if x * x > 745.0:  # exp(-x^2) underflows
        return 0.0
    return _erfc_cf(x)


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * erfc(-float(z) / math.sqrt(2.0))


def _erf_series(x: float) -> float:
    # erf(x) = (2/sqrt(pi)) sum_{n>=0} (-1)^n x^(2n+1) / (n! (2n+1))
    if x == 0.0:
        return 0.0
    x2 = x * x
    term = x
    total = x
    n = 0
    while True:
        n += 1
        term *= -x2 / n
        inc = term / (2 * n + 1)
        total += inc
        if abs(inc) <= 1e-18 * abs(total):
            break
        if n > 200:  # unreachable for |x| <= 2
            raise ConvergenceError("erf series failed to converge", total)
    return _TWO_OVER_SQRT_PI * total


def _erfc_cf(x: float) -> float:
    # Laplace continued fraction, modified Lentz evaluation:
    # erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    tiny = 1e-300
    f = x if x != 0.0 else tiny
    c = f
    d = 0.0
    for i in range(1, 300):
        a = 0.5 * i
        d = x + a * d
        if d == 0.0:
            d = tiny
        c = x + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-16:
            return math.exp(-x * x) / (_SQRT_PI * f)
    raise ConvergenceError("erfc continued fraction failed to converge", f)


# Stirling series coefficients B_{2j} / (2j (2j-1)).
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN_X = 10.0


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0.

    Stirling's series with Bernoulli terms through B_16 for x >= 10; smaller
    arguments are shifted up with log_gamma(x) = log_gamma(x+m) - log(x...(x+m-1)).
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"log_gamma: argument must be finite and > 0, got {x}")
    shift = 0.0
    while x < _STIRLING_MIN_X:
        shift += math.log(x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv
    for coeff in _STIRLING:
        series += coeff * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + _LN_SQRT_2PI + series - shift


def gamma_half_ratio(n: int) -> float:
    """Gamma(n/2 + 1/2) / Gamma(n/2) for integer n >= 1.

    Computed in log space, so there is no overflow even for n ~ 1e8; the
    value grows like sqrt(n/2).
    """
    if int(n) != n or n < 1:
        raise DomainError(f"gamma_half_ratio: n must be a positive integer, got {n}")
    n = int(n)
    return math.exp(log_gamma((n + 1) / 2.0) - log_gamma(n / 2.0))


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance and budget knobs for the adaptive integrator."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_depth: int = 48

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and math.isfinite(self.abs_tol)):
            raise DomainError("QuadratureSpec: abs_tol must be positive and finite")
        if not (self.rel_tol >= 0.0 and math.isfinite(self.rel_tol)):
            raise DomainError("QuadratureSpec: rel_tol must be >= 0 and finite")
        if self.max_depth < 1:
            raise DomainError("QuadratureSpec: max_depth must be >= 1")


# Fixed symmetric panel rule: 10-node Gauss-Legendre on [-1, 1].
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def _panel(f, a: float, b: float) -> float:
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid + half * _GL_NODES
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    if not np.all(np.isfinite(fx)):
        raise DomainError(f"integrate: integrand not finite on [{a}, {b}]")
    return half * float(np.dot(_GL_WEIGHTS, fx))


def integrate(f, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """Adaptive bisection quadrature with a fixed 10-node Gauss-Legendre panel.

    ``f`` must accept a numpy array of abscissae and return values of the
    same shape (scalar-constant returns are broadcast). A panel is accepted
    when the two-half refinement moves the estimate by less than its share
    of the tolerance; otherwise it is bisected, up to ``spec.max_depth``
    levels.

    Raises ConvergenceError (carrying the best running estimate) if the
    depth budget is exhausted.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integrate: bounds must be finite")
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0

    whole = _panel(f, a, b)
    scale = max(abs(whole), 1.0)
    # (lo, hi, coarse estimate, depth); stack-based so a failure can still
    # report the best global estimate.
    stack = [(a, b, whole, 0)]
    accepted = 0.0
    while stack:
        lo, hi, coarse, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid)
        right = _panel(f, mid, hi)
        refined = left + right
        tol_here = max(spec.abs_tol, spec.rel_tol * scale) * (hi - lo) / (b - a)
        if abs(refined - coarse) <= tol_here:
            accepted += refined
            continue
        if depth + 1 >= spec.max_depth:
            best = accepted + refined + sum(item[2] for item in stack)
            raise ConvergenceError(
                f"integrate: max_depth={spec.max_depth} exceeded on [{lo}, {hi}]",
                best_estimate=sign * best,
            )
        stack.append((lo, mid, left, depth + 1))
        stack.append((mid, hi, right, depth + 1))
    return sign * accepted


def integrate_arcsine_weight(
    g, a: float, b: float, spec: QuadratureSpec = QuadratureSpec()
) -> float:
    """Integral of g(x) / sqrt(1 - x^2) over [a, b] within [-1, 1].

    Uses the substitution x = sin(theta), which removes the inverse
    square-root endpoint singularity exactly:

        integral_a^b g(x) (1-x^2)^(-1/2) dx = integral_asin(a)^asin(b) g(sin t) dt

    ``g`` must be numpy-vectorized like the ``integrate`` integrand.
    """
    a = float(a)
    b = float(b)
    if not (-1.0 <= a <= 1.0 and -1.0 <= b <= 1.0):
        raise DomainError("integrate_arcsine_weight: bounds must lie in [-1, 1]")
    return integrate(lambda t: g(np.sin(t)), math.asin(a), math.asin(b), spec)
