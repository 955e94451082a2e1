import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import dawson_quad, erf_quad, erfi_quad
from pdm_spectra.specfun import (
    ERFI_ARG_MAX,
    SpecialFunctionDomainError,
    SpecialFunctionRangeError,
    dawson,
    erf,
    erfi,
)

# frozen from mpmath (40 digits) before implementation
ERF_1 = 0.8427007929497148693
ERFI_1 = 1.6504257587975428760
DAWSON_1 = 0.5380795069127684191
DAWSON_MAX_X = 0.9241388730045917670


def test_zeros():
    assert erf(0.0).value == 0.0
    assert erfi(0.0).value == 0.0
    assert dawson(0.0).value == 0.0


def test_frozen_reference_values():
    assert erf(1.0).value == pytest.approx(ERF_1, abs=1e-14)
    assert erfi(1.0).value == pytest.approx(ERFI_1, abs=5e-15)
    assert dawson(1.0).value == pytest.approx(DAWSON_1, abs=1e-14)


def test_erf_odd_pair_sums_to_zero():
    assert erf(0.7).value + erf(-0.7).value == 0.0


def test_erfi_odd():
    assert erfi(-1.3).value == -erfi(1.3).value


@given(st.floats(min_value=-8.0, max_value=8.0, allow_nan=False))
def test_odd_symmetry_exact(x):
    assert erf(-x).value == -erf(x).value
    assert erfi(-x).value == -erfi(x).value
    assert dawson(-x).value == -dawson(x).value


def test_erf_bounded_and_monotone():
    xs = np.linspace(-6.0, 6.0, 41)
    vals = [erf(float(x)).value for x in xs]
    assert all(abs(v) < 1.0 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_erfi_monotone_nonnegative():
    xs = np.linspace(0.0, 8.0, 33)
    vals = [erfi(float(x)).value for x in xs]
    assert all(v >= 0.0 for v in vals)
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_dawson_identity_against_erfi():
    x = 2.0
    lhs = dawson(x).value
    rhs = math.sqrt(math.pi) / 2.0 * math.exp(-x * x) * erfi(x).value
    assert lhs == pytest.approx(rhs, rel=1e-14)


def test_dawson_maximum_location():
    # F'(x) = 1 - 2 x F(x) vanishes at the maximum
    x = DAWSON_MAX_X
    assert 1.0 - 2.0 * x * dawson(x).value == pytest.approx(0.0, abs=1e-12)
    assert dawson(x).value == pytest.approx(0.5410442855, abs=1e-9)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.0, 5.0])
def test_dawson_derivative_identity(x):
    h = 1e-6
    deriv = (dawson(x + h).value - dawson(x - h).value) / (2.0 * h)
    assert deriv == pytest.approx(1.0 - 2.0 * x * dawson(x).value, abs=1e-8)


@pytest.mark.parametrize("fn,oracle,name", [
    (erf, erf_quad, "erf"),
    (erfi, erfi_quad, "erfi"),
    (dawson, dawson_quad, "dawson"),
])
def test_quadrature_cross_validation(fn, oracle, name):
    # mixed tolerance: erfi grows like exp(x^2)/x, so 1e-12 is absolute only
    # while the value is O(1) and relative beyond
    for x in np.linspace(-6.0, 6.0, 50):
        got = fn(float(x)).value
        want = oracle(float(x))
        assert abs(got - want) <= 1e-12 * max(1.0, abs(want)), (name, x, got, want)


def test_error_estimates_honest():
    for x in np.linspace(-6.0, 6.0, 25):
        for fn, oracle in ((erf, erf_quad), (dawson, dawson_quad)):
            r = fn(float(x))
            assert abs(r.value - oracle(float(x))) <= max(r.est_abs_error, 1e-14)
        r = erfi(float(x))
        want = erfi_quad(float(x))
        assert abs(r.value - want) <= max(r.est_abs_error, 1e-13 * max(1.0, abs(want)))


def test_erf_switch_point_continuity():
    # series/continued-fraction handoff at |x| = 3.5
    below, above = erf(3.5 - 1e-12).value, erf(3.5 + 1e-12).value
    assert abs(above - below) < 1e-13


def test_erfi_switch_point_continuity():
    below, above = erfi(6.0 - 1e-9).value, erfi(6.0 + 1e-9).value
    assert abs(above - below) / above < 1e-11


def test_dawson_large_arguments():
    for x in (10.0, 50.0, 1e3, 1e8, 1e200):
        v = dawson(x).value
        assert v == pytest.approx(1.0 / (2.0 * x), rel=1e-4)


def test_erfi_overflow_guard():
    with pytest.raises(SpecialFunctionRangeError, match="26"):
        erfi(26.5)
    # just inside the guard still finite
    assert math.isfinite(erfi(26.0).value)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_rejected(bad):
    for fn in (erf, erfi, dawson):
        with pytest.raises(SpecialFunctionDomainError):
            fn(bad)
