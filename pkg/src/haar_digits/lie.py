"""Haar-modulus identities on triangular groups and cone volumes for SL_2.

Two families of checks live here:

* Adjoint determinants. For b = u d (u unit upper-triangular, d diagonal)
  the adjoint action of b^(-1) preserves the strictly upper algebra and,
  after projecting back, acts triangularly on the strictly lower algebra.
  Both determinants depend only on d, and their product is exactly 1 --
  the cancellation that makes the windowed triangular significand laws
  consistent between left and right Haar measure. Each routine builds the
  action matrix explicitly in a basis, takes its determinant numerically,
  and cross-checks the closed form; the two routes are kept separate on
  purpose.

* Cone volumes. The region of 2x2 matrices with determinant in (0, 1]
  whose normalized part g / sqrt(det g) lies in the window
  {a in [1, x], |b| <= eps, |c| <= eps} of SL_2 has Lebesgue volume
  exactly 2 eps^2 ln x. Volume ~ ln x is what makes the induced
  significand law of the window edge exactly Benford. A rejection Monte
  Carlo companion estimates the same volume from the membership test
  alone, without using the formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, DomainError
from .rng import RngStream
from .significand import check_base

__all__ = [
    "ConeProblem",
    "MCVolume",
    "adjoint_det_on_u",
    "adjoint_det_on_l",
    "adjoint_product",
    "hyperbolic_cone_area",
    "hyperbolic_cone_area_mc",
    "sl2_cone_membership",
    "sl2_cone_volume",
    "sl2_cone_volume_mc",
    "sl2_cone_induced_cdf",
]

_REL_TOL = 1e-10
_TRI_TOL = 1e-12


@dataclass(frozen=True)
class ConeProblem:
    """SL_2 window cone: a in [1, x], off-diagonal coordinates in [-eps, eps]."""

    x: float
    eps: float = 0.1

    def __post_init__(self):
        if not (math.isfinite(self.x) and self.x >= 1.0):
            raise DomainError(f"ConeProblem: x must be >= 1, got {self.x}")
        if not (0.0 < self.eps <= 1.0):
            raise DomainError(f"ConeProblem: eps must be in (0, 1], got {self.eps}")


@dataclass(frozen=True)
class MCVolume:
    """Rejection Monte Carlo volume estimate with a binomial error bar."""

    estimate: float
    stderr: float
    accepted: int
    trials: int
    box_volume: float


def _check_pair(d, u):
    d = np.asarray(d, dtype=float)
    if d.ndim != 1 or d.size < 2:
        raise DomainError(f"need a vector of >= 2 diagonal entries, got shape {d.shape}")
    if not np.all(np.isfinite(d)) or np.any(d == 0.0):
        raise DomainError("diagonal entries must be finite and nonzero")
    n = d.size
    if u is None:
        u = np.eye(n)
    else:
        u = np.asarray(u, dtype=float)
        if u.shape != (n, n):
            raise DomainError(f"u must be {n}x{n}, got {u.shape}")
        if not np.all(np.isfinite(u)):
            raise DomainError("u must have finite entries")
        if np.tril(u, k=-1).any():
            raise DomainError("u must be upper triangular")
        if not np.all(np.diagonal(u) == 1.0):
            raise DomainError("u must have unit diagonal")
    return d, u, n


def _basis_by_distance(n: int, lower: bool):
    """Strictly triangular basis positions ordered by distance from the diagonal."""
    pairs = []
    for delta in range(1, n):
        for start in range(n - delta):
            if lower:
                pairs.append((start + delta, start))
            else:
                pairs.append((start, start + delta))
    return pairs


def _conjugation_columns(d, u, pairs):
    """Coordinates of b^(-1) E_ij b at the basis positions, plus the residue
    left outside the spanned triangle (for invariance/triangularity checks)."""
    n = d.size
    b = u * d[None, :]  # u @ diag(d)
    dim = len(pairs)
    action = np.empty((dim, dim))
    residue = 0.0
    scale = 0.0
    mask = np.zeros((n, n), dtype=bool)
    for i, j in pairs:
        mask[i, j] = True
    for col, (i, j) in enumerate(pairs):
        E = np.zeros((n, n))
        E[i, j] = 1.0
        M = np.linalg.solve(b, E @ b)
        action[:, col] = [M[i2, j2] for i2, j2 in pairs]
        residue = max(residue, float(np.abs(np.where(mask, 0.0, M)).max()))
        scale = max(scale, float(np.abs(M).max()))
    return action, residue, scale


def adjoint_det_on_u(d, u=None) -> float:
    """det of Ad(b^(-1)) on the strictly upper algebra, b = u diag(d).

    The algebra is genuinely invariant (the conjugated basis elements stay
    strictly upper; any leakage raises ConsistencyError). The numeric
    determinant is cross-checked against the closed form
    prod_{i<j} d_j / d_i, which does not involve u at all.
    """
    d, u, n = _check_pair(d, u)
    pairs = _basis_by_distance(n, lower=False)
    action, residue, scale = _conjugation_columns(d, u, pairs)
    if residue > _TRI_TOL * max(scale, 1.0):
        raise ConsistencyError(
            f"conjugation left the strictly upper algebra (residue {residue:.3e})"
        )
    numeric = float(np.linalg.det(action))
    closed = 1.0
    for i in range(n):
        for j in range(i + 1, n):
            closed *= d[j] / d[i]
    if abs(numeric - closed) > _REL_TOL * max(abs(closed), 1e-300):
        raise ConsistencyError(
            f"adjoint determinant on upper algebra: matrix route {numeric!r} "
            f"vs closed form {closed!r}"
        )
    return numeric


def adjoint_det_on_l(d, u=None) -> float:
    """det of the projected Ad(b^(-1)) on the strictly lower algebra.

    Conjugation does not preserve the lower algebra, but in the basis
    ordered by distance from the diagonal the projected action is exactly
    triangular (checked), so the determinant is the product of the
    diagonal coefficients: prod_{i>j} d_j / d_i -- again independent of u.
    Together with adjoint_det_on_u the product over both triangles is
    exactly 1: every ratio d_j/d_i meets its reciprocal.
    """
    d, u, n = _check_pair(d, u)
    pairs = _basis_by_distance(n, lower=True)
    action, _, scale = _conjugation_columns(d, u, pairs)
    below = np.tril(action, k=-1)
    if np.abs(below).max() > _TRI_TOL * max(scale, 1.0):
        raise ConsistencyError(
            "projected adjoint action is not triangular in the "
            f"distance-ordered basis (max below-diagonal {np.abs(below).max():.3e})"
        )
    numeric = float(np.linalg.det(action))
    closed = 1.0
    for i in range(n):
        for j in range(i):
            closed *= d[j] / d[i]
    if abs(numeric - closed) > _REL_TOL * max(abs(closed), 1e-300):
        raise ConsistencyError(
            f"adjoint determinant on lower algebra: matrix route {numeric!r} "
            f"vs closed form {closed!r}"
        )
    return numeric


def adjoint_product(d, u=None) -> float:
    """Product of the two adjoint determinants; identically 1."""
    return adjoint_det_on_u(d, u) * adjoint_det_on_l(d, u)


# --- planar warm-up: hyperbolic sector --------------------------------------


def hyperbolic_cone_area(a: float, b: float) -> float:
    """Area of {u, v > 0 : uv <= 1, a^2 <= u/v <= b^2}, which is ln(b/a).

    In coordinates s = uv, r = u/v the region is the rectangle
    (0,1] x [a^2, b^2] with density 1/(2r): the s-direction contributes a
    constant and the log comes entirely from the scale variable r, the
    one-dimensional shadow of the cone mechanism."""
    if not (math.isfinite(a) and math.isfinite(b) and 0.0 < a < b):
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")
    return math.log(b / a)


def hyperbolic_cone_area_mc(
    a: float, b: float, rng: RngStream, trials: int, batch_size: int = 1_000_000
) -> MCVolume:
    """Rejection estimate of hyperbolic_cone_area from the bounding box
    (0, b] x (0, 1/a]; uses only the membership inequalities."""
    if not (math.isfinite(a) and math.isfinite(b) and 0.0 < a < b):
        raise DomainError(f"need 0 < a < b, got a={a}, b={b}")
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    box = b * (1.0 / a)
    accepted = 0
    done = 0
    while done < trials:
        c = min(batch_size, trials - done)
        u = b * np.asarray(rng.random(c))
        v = (1.0 / a) * np.asarray(rng.random(c))
        ok = (u * v <= 1.0) & (a * a * v <= u) & (u <= b * b * v)
        accepted += int(ok.sum())
        done += c
    p = accepted / trials
    return MCVolume(
        estimate=box * p,
        stderr=box * math.sqrt(max(p * (1.0 - p), 0.0) / trials),
        accepted=accepted,
        trials=trials,
        box_volume=box,
    )


# --- the SL_2 cone -----------------------------------------------------------


def sl2_cone_membership(mats, problem: ConeProblem):
    """Boolean mask: which 2x2 matrices lie in the cone over the window.

    g = [[w, p], [q, z]] belongs iff det g = w z - p q is in (0, 1] and
    g / sqrt(det g) has w-part in [1, x] and |p|, |q| <= eps."""
    g = np.asarray(mats, dtype=float)
    if g.shape[-2:] != (2, 2):
        raise DomainError(f"expected (..., 2, 2) matrices, got shape {g.shape}")
    w = g[..., 0, 0]
    p = g[..., 0, 1]
    q = g[..., 1, 0]
    z = g[..., 1, 1]
    det = w * z - p * q
    inside = (det > 0.0) & (det <= 1.0)
    t = np.sqrt(np.where(inside, det, 1.0))
    inside &= (w >= t) & (w <= problem.x * t)
    inside &= np.abs(p) <= problem.eps * t
    inside &= np.abs(q) <= problem.eps * t
    return inside


def sl2_cone_volume(problem: ConeProblem) -> float:
    """Lebesgue volume (in R^4) of the cone: exactly 2 eps^2 ln x.

    Integrating out the determinant slice t and the normalized
    off-diagonal coordinates leaves the invariant measure da/a of the
    window edge, so the volume grows logarithmically in x -- the cone
    analogue of log-uniformity."""
    return 2.0 * problem.eps * problem.eps * math.log(problem.x)


def sl2_cone_volume_mc(
    problem: ConeProblem, rng: RngStream, trials: int, batch_size: int = 1_000_000
) -> MCVolume:
    """Rejection estimate of the cone volume from its bounding box.

    The cone fits in (0, x] x [-eps, eps]^2 x (0, 1 + eps^2] for the
    (w, p, q, z) coordinates; each batch consumes 4 * batch uniforms
    (w, p, q, z in that order). Membership is decided by
    sl2_cone_membership alone -- the analytic formula is never consulted.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    x, eps = problem.x, problem.eps
    zmax = 1.0 + eps * eps
    box = x * (2.0 * eps) ** 2 * zmax
    accepted = 0
    done = 0
    g = np.empty((0, 2, 2))
    while done < trials:
        c = min(batch_size, trials - done)
        if g.shape[0] != c:
            g = np.empty((c, 2, 2))
        g[:, 0, 0] = x * np.asarray(rng.random(c))
        g[:, 0, 1] = rng.uniform(-eps, eps, c)
        g[:, 1, 0] = rng.uniform(-eps, eps, c)
        g[:, 1, 1] = zmax * np.asarray(rng.random(c))
        accepted += int(sl2_cone_membership(g, problem).sum())
        done += c
    p = accepted / trials
    return MCVolume(
        estimate=box * p,
        stderr=box * math.sqrt(max(p * (1.0 - p), 0.0) / trials),
        accepted=accepted,
        trials=trials,
        box_volume=box,
    )


def sl2_cone_induced_cdf(s, eps: float, base: int = 10):
    """Significand CDF induced by the cone family: volume up to window edge
    s over volume up to window edge B. Evaluates the volume function at
    both edges rather than simplifying, so it is an identity check that
    the result equals log_B(s) -- the Benford CDF -- and not a restatement.
    """
    base = check_base(base)
    if not (0.0 < eps <= 1.0):
        raise DomainError(f"eps must be in (0, 1], got {eps}")
    arr = np.asarray(s, dtype=float)
    if np.any(arr < 1.0) or np.any(arr > base):
        raise DomainError(f"significand must lie in [1, {base}]")
    denom = sl2_cone_volume(ConeProblem(float(base), eps))
    vols = np.array(
        [sl2_cone_volume(ConeProblem(float(v), eps)) for v in np.atleast_1d(arr)]
    )
    out = vols / denom
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)
