import math

import numpy as np
import pytest
from scipy import integrate

from wkbsum.algebra import SIGMA0, PhaseExpr, phase_derivatives
from wkbsum.contour import (
    BranchTracker,
    ContourPath,
    closed_form,
    contour_integral,
    integral_report,
    turning_points,
)
from wkbsum.errors import DomainError, NonRealResult
from wkbsum.series import action_term

E0, U0 = 2.25, 0.75


def test_turning_points_examples():
    tp = turning_points(E0, U0)
    assert tp.x_plus == pytest.approx(math.acos(1 / math.sqrt(3)), abs=1e-15)
    assert tp.x_plus == pytest.approx(0.9553166, abs=1e-7)
    assert tp.x_minus == -tp.x_plus
    assert turning_points(12.25, 0.75).x_plus == pytest.approx(math.acos(math.sqrt(0.75 / 12.25)), abs=1e-15)
    assert turning_points(0.75 + 1e-12, 0.75).x_plus < 1e-5


def test_turning_points_domain():
    with pytest.raises(DomainError):
        turning_points(0.75, 0.75)
    with pytest.raises(DomainError):
        turning_points(1.0, -0.25)


def test_path_validation():
    tp = turning_points(E0, U0)
    path = ContourPath.around(tp)
    assert path.encloses(tp)
    with pytest.raises(ValueError):
        ContourPath(1.0, 1.0, samples=255)
    with pytest.raises(ValueError):
        ContourPath(1.6, 1.0)
    with pytest.raises(DomainError):
        contour_integral(SIGMA0, E0, U0, ContourPath(0.5, 1.0))


def test_branch_tracker_is_continuous_and_closes():
    tp = turning_points(E0, U0)
    z, _ = ContourPath.around(tp).nodes(1024)
    tr = BranchTracker(E0, U0)
    w = tr.track(z)
    assert tr.continuous
    assert np.allclose(w * w, E0 - U0 / np.cos(z) ** 2, rtol=1e-12)
    assert w[0].real == 0 and w[0].imag > 0


def test_sigma0_matches_closed_form():
    assert contour_integral(SIGMA0, E0, U0) == pytest.approx(2 * math.pi * (1.5 - math.sqrt(0.75)), abs=1e-10)
    assert contour_integral(SIGMA0, E0, U0) == pytest.approx(3.98337987, abs=1e-8)


@pytest.mark.parametrize("E, U", [(2.25, 0.75), (12.25, 0.75), (6.25, 3.75), (20.25, 8.75)])
def test_sigma0_against_real_axis_quadrature(E, U):
    # independent route: twice the real integral of w across the cut
    tp = turning_points(E, U)
    val, _ = integrate.quad(lambda x: math.sqrt(max(E - U / math.cos(x) ** 2, 0.0)), tp.x_minus, tp.x_plus,
                            epsabs=1e-13, epsrel=1e-13, limit=200)
    assert contour_integral(SIGMA0, E, U) == pytest.approx(2 * val, abs=1e-8)


@pytest.mark.parametrize("E, U", [(2.25, 0.75), (6.25, 3.75), (30.25, 15.75)])
def test_sigma1_is_minus_pi(E, U):
    assert contour_integral(phase_derivatives(1)[1], E, U, order=1) == pytest.approx(-math.pi, abs=1e-8)


def test_single_term_input():
    term = phase_derivatives(1)[1].terms[0]
    assert contour_integral(term, E0, U0, order=1) == pytest.approx(-math.pi, abs=1e-8)


@pytest.mark.parametrize("n", [3, 5])
def test_odd_orders_vanish(n):
    assert abs(contour_integral(phase_derivatives(n)[n], E0, U0, order=n)) < 1e-8


def test_second_order_example():
    rep = integral_report(2, E0, U0)
    assert rep.closed_form == pytest.approx(2 * math.pi * action_term(1, 0.75), rel=1e-15)
    assert rep.numeric == pytest.approx(-0.90689968, abs=1e-6)
    assert abs(rep.numeric - rep.closed_form) < 1e-6
    assert abs(rep.higher_l) < 1e-8
    assert [l for l, _ in rep.per_term] == [0, 1, 2]


def test_missing_phase_factor_gives_non_real():
    # without (-i)**n the order-1 integral is purely imaginary
    with pytest.raises(NonRealResult):
        contour_integral(phase_derivatives(1)[1], E0, U0, order=0)


def test_path_independence():
    tp = turning_points(6.25, 3.75)
    base = ContourPath.around(tp)
    tall = ContourPath(base.a, 2 * base.b)
    for n in range(0, 7):
        expr = phase_derivatives(n)[n]
        a = contour_integral(expr, 6.25, 3.75, base, order=n)
        b = contour_integral(expr, 6.25, 3.75, tall, order=n)
        assert abs(a - b) < 1e-8


def test_sample_doubling_certificate():
    res = contour_integral(phase_derivatives(4)[4], E0, U0, order=4, full=True)
    assert res.gate_error < 1e-8
    assert res.samples_used >= 512
    assert abs(res.imag) < 1e-8


def test_closed_form_table():
    assert closed_form(1, 1.0, 0.5) == -math.pi
    assert closed_form(7, 1.0, 0.5) == 0.0
    assert closed_form(4, 6.25, 3.75) == 2 * math.pi * action_term(2, 3.75)


def test_report_rejects_order_above_table():
    with pytest.raises(ValueError):
        integral_report(13, E0, U0)


def test_expression_independent_of_lifting():
    # the raw and canonical forms integrate to the same number
    from wkbsum.algebra import canonical_table
    raw = contour_integral(phase_derivatives(4)[4], 6.25, 3.75, order=4)
    can = contour_integral(canonical_table(4)[4].to_expr(), 6.25, 3.75, order=4)
    assert abs(raw - can) < 1e-9
    assert isinstance(canonical_table(4)[4].to_expr(), PhaseExpr)
