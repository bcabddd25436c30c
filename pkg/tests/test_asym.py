import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meritds import asym
from meritds.errors import BadT, OutOfRange


def reference_reciprocal(nu, R, T, terms=60):
    """Truncated doubly infinite series, written out with max(0, .) weights."""
    val = 1 - 2 * (1 + nu) * T / 3
    for m in range(1, terms):
        val += 4 * max(0.0, 1 - m / T) ** 2
    for m in range(-terms, terms):
        val += nu * max(0.0, 1 - abs(1 + (2 * R - m) / T)) ** 2
    return val


def bisect(f, lo, hi, tol=1e-15):
    flo = f(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return (lo + hi) / 2


def test_known_maxima():
    assert asym.phi_max(1).phi_max == pytest.approx(6.342061, abs=1e-6)
    assert asym.phi_max(0).phi_max == pytest.approx(3.342065, abs=1e-6)
    assert asym.phi_max(1 / 9).phi_max == pytest.approx(3.518994, abs=1e-6)


@pytest.mark.parametrize(
    "nu,coeffs",
    [
        (0, (7, -33, 33, -3)),
        (1, (29, -249, 417, -27)),
        (Fraction(1, 9), (349061, -1737153, 1835865, -159651)),
    ],
)
def test_largest_root_of_reduced_cubic(nu, coeffs):
    a, b, c, d = coeffs
    f = lambda x: ((a * x + b) * x + c) * x + d
    root = bisect(f, 3.0, 10.0)
    assert asym.phi_max(float(nu)).phi_max == pytest.approx(root, abs=1e-9)


def test_general_cubic_specialisations_exact():
    c1 = [Fraction(x) for x in asym.max_cubic(Fraction(1))]
    c0 = [Fraction(x) for x in asym.max_cubic(Fraction(0))]
    assert c1 == [58, -498, 834, -54] == [2 * x for x in (29, -249, 417, -27)]
    assert c0 == [112, -528, 528, -48] == [16 * x for x in (7, -33, 33, -3)]
    c9 = [Fraction(x) for x in asym.max_cubic(Fraction(1, 9))]
    ratio = c9[0] / 349061
    assert c9 == [ratio * x for x in (349061, -1737153, 1835865, -159651)]


def test_t1_values():
    assert asym.phi_T1(1, 0.25) == pytest.approx(6, abs=1e-12)
    assert asym.phi_T1(0, 0.1) == pytest.approx(3, abs=1e-12)
    assert asym.phi_T1(1 / 9, 0.25) == pytest.approx(54 / 17, abs=1e-12)
    assert asym.phi(1 / 9, 0.25, 1) == pytest.approx(54 / 17, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(-3, 3), st.floats(0.05, 6))
def test_series_matches_reference(nu, R, T):
    assert asym.phi_reciprocal(nu, R, T) == pytest.approx(reference_reciprocal(nu, R, T), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.floats(-2, 2), st.floats(0.05, 4))
def test_half_periodicity(nu, R, T):
    a = asym.phi_reciprocal(nu, R, T)
    b = asym.phi_reciprocal(nu, R + 0.5, T)
    assert abs(a - b) < 1e-12


def test_t1_closed_form_grid():
    for nu in np.linspace(0, 1, 25):
        for R in np.linspace(-1, 1, 40):
            assert asym.phi(nu, R, 1.0) == pytest.approx(asym.phi_T1(nu, R), abs=1e-12)


@pytest.mark.parametrize("nu", [0.0, 1 / 9, 0.5, 1.0])
def test_global_max_over_grid(nu):
    res = asym.phi_max(nu)
    best = max(asym.phi(nu, R, T) for R in np.linspace(0, 0.5, 100, endpoint=False) for T in np.linspace(0.04, 4, 100))
    assert res.phi_max >= best - 1e-9
    assert asym.phi(nu, res.R_opt, res.T_opt) == pytest.approx(res.phi_max, abs=1e-9)


def test_argmax_cubic_middle_root():
    for nu in [0.0, 0.3, 1.0]:
        roots = np.sort(np.roots(asym.argmax_cubic(nu)).real)
        assert asym.phi_max(nu).T_opt == pytest.approx(roots[1], abs=1e-10)


def test_optimum_values():
    r0 = asym.phi_max(0)
    assert r0.T_opt == pytest.approx(1.11574939666, abs=1e-10)
    r1 = asym.phi_max(1)
    assert r1.T_opt == pytest.approx(1.05782790685, abs=1e-10)
    assert r1.R_opt == pytest.approx((0.75 - r1.T_opt / 2) % 0.5)


def test_errors():
    with pytest.raises(OutOfRange):
        asym.phi_max(1.5)
    with pytest.raises(BadT):
        asym.phi(0.5, 0, 0)


def test_reciprocal_positive_on_domain():
    for nu in np.linspace(0, 1, 11):
        for R in np.linspace(0, 0.5, 11):
            for T in np.linspace(0.01, 8, 60):
                assert asym.phi_reciprocal(nu, R, T) > 0


def test_nonpositive_reciprocal_flagged(monkeypatch):
    monkeypatch.setattr(asym, "phi_reciprocal", lambda nu, R, T: -0.5)
    with pytest.warns(asym.NonPositiveReciprocal):
        assert math.isinf(asym.phi(0.5, 0.1, 1.0))


def test_real_roots_known_cubic():
    roots = asym.real_roots((1.0, -6.0, 11.0, -6.0))
    assert roots == pytest.approx([1.0, 2.0, 3.0], abs=1e-12)
