"""Special functions against independently computed reference values.

Reference constants were produced with mpmath at 30 decimal digits (and
exact factorials where available) and are frozen here so the suite does
not depend on mpmath at runtime.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from haar_digits.errors import ConvergenceError, DomainError
from haar_digits.specfun import (
    QuadratureSpec,
    erf,
    erfc,
    gamma_half_ratio,
    integrate,
    integrate_arcsine_weight,
    log_gamma,
    normal_cdf,
)

ERF_REFERENCE = {
    0.0: 0.0,
    0.5: 0.5204998778130465,
    1.0: 0.8427007929497149,
    2.0: 0.9953222650189527,
    2.5: 0.999593047982555,
    3.0: 0.9999779095030014,
    3.7: 0.9999998328489421,
    4.0: 0.9999999845827421,
    5.5: 0.9999999999999926,
}


@pytest.mark.parametrize("x,expected", sorted(ERF_REFERENCE.items()))
def test_erf_reference_values(x, expected):
    if expected == 0.0:
        assert erf(x) == 0.0
    else:
        assert erf(x) == pytest.approx(expected, rel=1e-12)


def test_erf_saturates_beyond_six():
    assert erf(6.5) == 1.0
    assert erf(-7.0) == -1.0
    assert erf(100.0) == 1.0


@given(st.floats(min_value=-6.0, max_value=6.0, allow_nan=False))
def test_erf_odd_symmetry(x):
    assert erf(-x) == -erf(x)


@given(st.floats(min_value=-3.0, max_value=2.9), st.floats(min_value=0.001, max_value=0.1))
def test_erf_strictly_increasing(x, h):
    # strict on the well-conditioned core; merely monotone near saturation
    assert erf(x + h) > erf(x)


@given(st.floats(min_value=-6.0, max_value=5.9), st.floats(min_value=0.001, max_value=0.1))
def test_erf_monotone_everywhere(x, h):
    assert erf(x + h) >= erf(x)


def test_erf_rejects_non_finite():
    for bad in (float("nan"), float("inf"), -float("inf")):
        with pytest.raises(DomainError):
            erf(bad)


def test_erfc_complement():
    for x in (0.0, 0.3, 1.0, 2.5, 4.0):
        assert erfc(x) == pytest.approx(1.0 - ERF_REFERENCE.get(x, erf(x)), rel=1e-11, abs=1e-15)
    assert erfc(-1.0) == pytest.approx(1.0 + ERF_REFERENCE[1.0], rel=1e-12)


def test_normal_cdf_reference_values():
    assert normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
    assert normal_cdf(1.96) == pytest.approx(0.97500210485177957, rel=1e-12)
    assert normal_cdf(-0.5) == pytest.approx(0.3085375387259869, rel=1e-12)


LOG_GAMMA_REFERENCE = [
    (1.0, 0.0),
    (2.0, 0.0),
    (0.5, math.log(math.pi) / 2.0),
    (10.0, math.log(362880.0)),  # ln(9!), exact integer factorial
    (3.7, 1.4280723266653879),
    (25.0, 54.784729398112319),
    (1234.5, 7550.5509010778949),
    (1e6, 12815504.569147611660),
]


@pytest.mark.parametrize("x,expected", LOG_GAMMA_REFERENCE)
def test_log_gamma_reference_values(x, expected):
    if expected == 0.0:
        assert abs(log_gamma(x)) < 1e-14
    else:
        assert log_gamma(x) == pytest.approx(expected, rel=1e-12)


def test_log_gamma_rejects_nonpositive():
    for bad in (0.0, -1.0, -0.5, float("nan")):
        with pytest.raises(DomainError):
            log_gamma(bad)


def test_gamma_half_ratio_small_n_closed_forms():
    # Gamma(1)/Gamma(1/2), Gamma(3/2)/Gamma(1), Gamma(2)/Gamma(3/2)
    assert gamma_half_ratio(1) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-13)
    assert gamma_half_ratio(2) == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-13)
    assert gamma_half_ratio(3) == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-13)


def test_gamma_half_ratio_large_n_no_overflow():
    # mpmath references; direct Gamma would overflow long before n = 1e8
    assert gamma_half_ratio(10**6) == pytest.approx(707.1066044098743, rel=1e-9)
    assert gamma_half_ratio(10**8) == pytest.approx(7071.067794187806, rel=1e-7)


def test_gamma_half_ratio_sqrt_asymptotics():
    prev = None
    for n in (10, 100, 10_000, 1_000_000):
        rel = abs(gamma_half_ratio(n) / math.sqrt(n / 2.0) - 1.0)
        if prev is not None:
            assert rel < prev
        prev = rel
    assert prev < 1e-6


def test_gamma_half_ratio_rejects_bad_n():
    for bad in (0, -1, 2.5):
        with pytest.raises(DomainError):
            gamma_half_ratio(bad)


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0)
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=-1e-9)
    with pytest.raises(DomainError):
        QuadratureSpec(max_depth=0)


def test_integrate_gaussian_reference():
    # int_0^1 exp(-x^2) dx, mpmath at 30 digits
    val = integrate(lambda x: np.exp(-x * x), 0.0, 1.0)
    assert val == pytest.approx(0.7468241328124270254, rel=1e-12)


def test_integrate_exact_on_polynomials_and_sine():
    assert integrate(lambda x: 3 * x * x, 0.0, 2.0) == pytest.approx(8.0, rel=1e-13)
    assert integrate(np.sin, 0.0, math.pi) == pytest.approx(2.0, rel=1e-12)
    assert integrate(lambda x: np.ones_like(x), -1.5, 2.5) == pytest.approx(4.0, rel=1e-14)


def test_integrate_reversed_and_empty_interval():
    assert integrate(lambda x: x, 1.0, 1.0) == 0.0
    assert integrate(lambda x: x, 1.0, 0.0) == pytest.approx(-0.5, rel=1e-12)


def test_integrate_convergence_error_carries_best_estimate():
    spec = QuadratureSpec(abs_tol=1e-15, rel_tol=1e-15, max_depth=2)
    with pytest.raises(ConvergenceError) as err:
        integrate(lambda x: np.abs(x - 0.123456) ** 0.1, 0.0, 1.0, spec)
    assert isinstance(err.value.best_estimate, float)
    assert 0.5 < err.value.best_estimate < 1.0


def test_arcsine_weight_closed_forms():
    # weight 1/sqrt(1-x^2): total mass pi; second moment pi/2
    assert integrate_arcsine_weight(lambda x: np.ones_like(x), -1.0, 1.0) == pytest.approx(
        math.pi, rel=1e-12
    )
    assert integrate_arcsine_weight(lambda x: x * x, -1.0, 1.0) == pytest.approx(
        math.pi / 2.0, rel=1e-12
    )
    # against the plain quadrature away from the endpoints
    plain = integrate(lambda x: np.cos(x) / np.sqrt(1 - x * x), -0.5, 0.5)
    weighted = integrate_arcsine_weight(np.cos, -0.5, 0.5)
    assert weighted == pytest.approx(plain, rel=1e-11)


def test_arcsine_weight_endpoint_integrable_singularity():
    # int_0^1 (1-x^2)^(-1/2) dx = pi/2 exactly, despite the endpoint blowup
    assert integrate_arcsine_weight(lambda x: np.ones_like(x), 0.0, 1.0) == pytest.approx(
        math.pi / 2.0, rel=1e-12
    )
