import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffrakt.analytic import (
    GafConditioningError,
    GafDomainError,
    ProcessSpec,
    diffraction_pair,
    gaf_g,
    gaf_h,
    gaf_I,
    gaf_kpoint,
    gaf_phi,
    gaf_tail_cutoff,
)


def phi_oracle(u):
    # the closed form cancels to third order, so small u needs extra digits
    digits = 40 + (int(-3 * math.log10(u)) if 0 < u < 1 else 0)
    with mpmath.workdps(digits):
        u = mpmath.mpf(u)
        if u == 0:
            return 1.0
        e = mpmath.exp
        num = e(-u) * (-2 + 4 * u - u**2) + e(-2 * u) * (4 - 4 * u - u**2) - 2 * e(-3 * u)
        return float(num / (1 - e(-u)) ** 3)


def h_oracle(s):
    with mpmath.workdps(80):
        x = mpmath.pi * mpmath.mpf(s) ** 2
        return float(1 + mpmath.nsum(lambda k: (-1) ** (k + 1) * x**k * mpmath.zeta(k + 1) / mpmath.factorial(k - 2),
                                     [2, mpmath.inf]))


@pytest.mark.parametrize("u", [0.0, 1e-8, 1e-4, 0.01, 0.3, 0.4999, 0.5, 0.5001, 1.0, 3.0, 10.0, 40.0])
def test_phi_against_high_precision(u):
    assert gaf_phi(u) == pytest.approx(phi_oracle(u), abs=1e-14)


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=0.0, max_value=60.0))
def test_phi_property(u):
    assert gaf_phi(u) == pytest.approx(phi_oracle(u), abs=1e-13)


def test_phi_small_u_expansion():
    # phi(u) = 1 - u/2 + O(u^3)
    u = 1e-3
    assert (gaf_phi(u) - 1.0) / u == pytest.approx(-0.5, abs=1e-5)
    with pytest.raises(ValueError):
        gaf_phi(-1.0)


def test_g_is_phi_of_area():
    r = np.array([0.0, 0.4, 1.0])
    np.testing.assert_array_equal(gaf_g(r), gaf_phi(np.pi * r**2))


@pytest.mark.parametrize("s", [0.0, 0.3, 0.8, 1.0, 1.2, 1.59, 1.6, 2.0, 2.5, 3.0])
def test_h_against_high_precision_series(s):
    assert gaf_h(s) == pytest.approx(h_oracle(s), abs=1e-10)


def test_h_domain():
    with pytest.raises(GafDomainError):
        gaf_h(51.0)
    with pytest.raises(ValueError):
        gaf_h(-0.1)
    assert abs(gaf_h(10.0)) < 1e-6


def test_diffraction_overshoot_near_one():
    s = np.linspace(0.0, 3.0, 301)
    dens = 1.0 - gaf_h(s)
    assert dens.max() > 1.0
    assert 0.8 <= s[np.argmax(dens)] <= 1.3
    assert dens[0] == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0, 4.5])
def test_moment_closed_form(alpha):
    with mpmath.workdps(30):
        a = mpmath.mpf(alpha)
        ref = float(a * (1 - a) * mpmath.gamma(a + 1) * mpmath.zeta(a + 1))
        num = float(mpmath.quad(lambda u: u**a * mpmath.mpf(phi_oracle(u)), [0, 1, 5, 20, 80]))
    assert gaf_I(alpha) == pytest.approx(ref, rel=1e-13, abs=1e-13)
    assert num == pytest.approx(ref, rel=1e-10, abs=1e-10)


def test_moment_near_zero():
    # alpha (1 - alpha) Gamma(1 + alpha) zeta(1 + alpha) -> 1
    assert gaf_I(0.0) == 1.0
    assert gaf_I(1e-10) == pytest.approx(1.0, abs=1e-9)
    assert gaf_I(1e-6) == pytest.approx(float(mpmath.mpf("1e-6") * (1 - mpmath.mpf("1e-6"))
                                              * mpmath.gamma(1 + mpmath.mpf("1e-6")) * mpmath.zeta(1 + mpmath.mpf("1e-6"))),
                                        abs=1e-12)
    with pytest.raises(ValueError):
        gaf_I(-1.0)


def test_tail_cutoff():
    u = gaf_tail_cutoff(1.0, 1e-12)
    assert 4.0 * math.exp(-u / 2) * u**2 < 1e-12


def test_one_point_function_is_one():
    for z in (0.0, 1.0 + 2.0j, -3.0j):
        assert gaf_kpoint([z]) == pytest.approx(1.0, abs=1e-12)
    assert gaf_kpoint([]) == 1.0


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0, 1.5, 2.5])
def test_two_point_function(r):
    assert gaf_kpoint([0.0, r]) == pytest.approx(1.0 - gaf_g(r), abs=1e-8)
    assert gaf_kpoint([3.0 + 1.0j, 3.0 + 1.0j + r * cmath.exp(0.7j)]) == pytest.approx(1.0 - gaf_g(r), abs=1e-8)


def test_three_point_invariance_and_clustering():
    pts = np.array([0.0, 0.7, 0.3 + 0.6j])
    base = gaf_kpoint(pts)
    rotated = gaf_kpoint(pts * cmath.exp(1.1j) + (2.0 - 1.0j))
    assert rotated == pytest.approx(base, abs=1e-8)
    far = gaf_kpoint([0.0, 0.7, 12.0])
    assert far == pytest.approx(gaf_kpoint([0.0, 0.7]), abs=1e-8)


def test_kpoint_rejects_coincident_points():
    with pytest.raises(GafConditioningError):
        gaf_kpoint([0.0, 1e-9])
    with pytest.raises(ValueError):
        gaf_kpoint(np.arange(7.0))


def test_gaf_pair():
    gamma, gamma_hat = diffraction_pair(ProcessSpec("gaf"))
    assert gamma.ac_density(0.5) == pytest.approx(1.0 - gaf_g(0.5))
    assert gamma_hat.ac_density(1.0) == pytest.approx(1.0 - gaf_h(1.0))
