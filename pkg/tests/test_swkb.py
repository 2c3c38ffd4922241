import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wkbsum.errors import DomainError
from wkbsum.series import ProblemParams, summed_quantization
from wkbsum.swkb import (
    SusyContext,
    cbc_condition,
    cbc_integral,
    cbc_turning_points,
    ground_state,
    partner_potentials,
    susy_potential,
    swkb_spectrum,
    zero_mode_residual,
)


def test_context():
    ctx = SusyContext(3)
    assert (ctx.amplitude, ctx.ground_eigen) == (3.5, 12)
    with pytest.raises(DomainError):
        SusyContext(0)


def test_susy_potential_examples():
    ctx = SusyContext(1)
    assert abs(susy_potential(ctx, math.pi / 2)) < 1e-15
    assert susy_potential(ctx, math.pi / 4) == pytest.approx(-1.5, rel=1e-15)
    with pytest.raises(DomainError):
        susy_potential(ctx, 0.0)
    with pytest.raises(DomainError):
        partner_potentials(ctx, math.pi)


@given(st.integers(1, 6), st.floats(0.01, math.pi / 2))
def test_susy_potential_antisymmetric(m, th):
    ctx = SusyContext(m)
    assert susy_potential(ctx, math.pi - th) == pytest.approx(-susy_potential(ctx, th), rel=1e-9, abs=1e-12)


def test_partner_potentials_at_half_pi():
    vm, vp = partner_potentials(SusyContext(1), math.pi / 2)
    assert vm == pytest.approx(-1.5, abs=1e-14)
    assert vp == pytest.approx(1.5, abs=1e-14)


@given(st.integers(1, 6), st.floats(0.05, 3.09))
def test_partner_difference(m, th):
    ctx = SusyContext(m)
    vm, vp = partner_potentials(ctx, th)
    assert vp - vm == pytest.approx(2 * (m + 0.5) / math.sin(th) ** 2, rel=1e-12)


@pytest.mark.parametrize("m", range(1, 7))
def test_zero_mode(m):
    res = zero_mode_residual(SusyContext(m), np.array([0.5, 1.0, 2.0]))
    scale = ground_state(SusyContext(m), np.array([0.5, 1.0, 2.0]))
    assert np.all(np.abs(res) < 1e-8 * np.maximum(1.0, scale))


def test_turning_points_examples():
    a, b = cbc_turning_points(SusyContext(1), 4.0)
    assert a == pytest.approx(math.atan(0.75), abs=1e-15)
    assert a == pytest.approx(0.6435011, abs=1e-7)
    assert b == pytest.approx(2.4980915, abs=1e-7)
    assert b - math.pi / 2 == pytest.approx(math.pi / 2 - a, abs=1e-15)
    lo, hi = cbc_turning_points(SusyContext(1), 1e-14)
    assert abs(lo - math.pi / 2) < 1e-6 and abs(hi - math.pi / 2) < 1e-6
    assert cbc_turning_points(SusyContext(1), 0.0) == (math.pi / 2, math.pi / 2)
    with pytest.raises(DomainError):
        cbc_turning_points(SusyContext(1), -1.0)


@pytest.mark.parametrize("m, e_minus, n", [(1, 4.0, 1), (1, 10.0, 2), (2, 6.0, 1)])
def test_cbc_integral_examples(m, e_minus, n):
    assert cbc_integral(SusyContext(m), e_minus) == pytest.approx(n * math.pi, abs=1e-9)
    assert cbc_condition(SusyContext(m), e_minus) == pytest.approx(n, abs=1e-12)


def test_cbc_integral_domain():
    with pytest.raises(DomainError):
        cbc_integral(SusyContext(1), 0.0)


@pytest.mark.parametrize("m, n, e_minus, lam2", [(1, 0, 0.0, 2), (1, 1, 4.0, 6), (3, 2, None, 30)])
def test_spectrum_examples(m, n, e_minus, lam2):
    lv = swkb_spectrum(SusyContext(m), n)
    if e_minus is not None:
        assert lv.e_minus == e_minus
    assert lv.lambda2 == lam2


@given(st.integers(1, 6), st.integers(0, 6))
def test_spectrum_invariants(m, n):
    lv = swkb_spectrum(SusyContext(m), n)
    assert lv.lambda2 == lv.lambda2_exact
    assert (lv.e_minus == 0) == (n == 0)
    assert lv.turning_a + lv.turning_b == pytest.approx(math.pi, abs=1e-15)
    assert lv.lambda2 == pytest.approx(summed_quantization(ProblemParams(m, n)).lambda2_N, rel=1e-12)
    assert abs(cbc_condition(SusyContext(m), lv.e_minus) - n) < 1e-12


def test_spectrum_rejects_bad_n():
    with pytest.raises(DomainError):
        swkb_spectrum(SusyContext(1), -1)
