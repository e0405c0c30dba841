import math
from fractions import Fraction

import numpy as np
import pytest

from hardcore_tree import ConvexityViolation, ModelParams, UnsupportedCase, alpha_poly, find_lambda_cr, solve_all, sweep, verify_convexity_loop_k3
from hardcore_tree.bifurcation import ALPHA_COEFFS


@pytest.mark.parametrize(
    "g, k, lam_cr, x_star",
    [("loop", 3, 32 / 27, 2 ** (-1 / 3)), ("rod", 3, 4 / 27, 2 ** (-1 / 3)), ("loop", 2, 9 / 4, 1.0), ("rod", 2, 1.0, 1.0)],
)
def test_critical(g, k, lam_cr, x_star):
    cp = find_lambda_cr(g, k)
    assert abs(cp.lambda_cr - lam_cr) <= 1e-12
    assert abs(cp.x_star - x_star) <= 1e-9
    assert cp.residual_norm <= 1e-9
    assert cp.branch_point.t ** k == pytest.approx(cp.lambda_cr, rel=1e-15)


def test_critical_field_k3():
    for g in ("loop", "rod"):
        cp = find_lambda_cr(g, 3)
        assert cp.z_star.z1 == pytest.approx(0.5, abs=1e-9)
        assert cp.z_star.z2 == pytest.approx(0.5, abs=1e-9)


def test_critical_unsupported():
    with pytest.raises(UnsupportedCase):
        find_lambda_cr("key", 3)


@pytest.mark.parametrize("g, k", [("loop", 3), ("rod", 3), ("loop", 2), ("rod", 2)])
def test_count_changes_at_critical(g, k):
    lam = find_lambda_cr(g, k).lambda_cr
    assert solve_all(g, ModelParams(k, lam * (1 - 1e-6))).count == 1
    assert solve_all(g, ModelParams(k, lam * (1 + 1e-6))).count == 3


def test_alpha_exact():
    assert alpha_poly(1) == 496
    assert alpha_poly(Fraction(1, 2)) == sum(Fraction(c) * Fraction(1, 2) ** (26 - i) for i, c in enumerate(ALPHA_COEFFS))
    assert len(ALPHA_COEFFS) == 27


def test_convexity_default_grid():
    rep = verify_convexity_loop_k3()
    assert rep.ok
    assert rep.grid_size == 2000
    assert rep.violations == []
    assert rep.alpha_at_1 == 496
    assert rep.second_difference_at_min > 0
    assert all(0 < r < 1 for r in rep.alpha_positive_roots)


def test_convexity_rejects_bad_grid():
    with pytest.raises(ValueError):
        verify_convexity_loop_k3([1.0, -1.0])


def test_convexity_violation_raised(monkeypatch):
    from hardcore_tree import bifurcation

    monkeypatch.setattr(bifurcation, "_second_differences", lambda x, rel_step=1e-5: -np.ones_like(x))
    with pytest.raises(ConvexityViolation):
        verify_convexity_loop_k3([0.5, 1.0])
    rep = verify_convexity_loop_k3([0.5, 1.0], raise_on_violation=False)
    assert rep.violations == [0.5, 1.0] and not rep.ok


def test_sweep_loop():
    pts = sweep("loop", 3, [0.5, 1.0, 2.0, 5.0])
    assert [p.count for p in pts] == [1, 1, 3, 3]
    for p in pts:
        assert p.z1_sym is not None
        if p.count == 3:
            assert p.z1_low < p.z1_sym < p.z1_high
        else:
            assert p.z1_low is None and p.z1_high is None


def test_sweep_key_has_no_symmetric_branch():
    pts = sweep("key", 2, [0.5, 2.0])
    assert all(p.count == 1 and p.z1_sym is None and p.z1_low == p.z1_high for p in pts)


def test_sweep_records_failures(monkeypatch):
    from hardcore_tree import bifurcation
    from hardcore_tree.errors import ConvergenceFailure

    real = bifurcation.solve_all

    def flaky(g, p):
        if p.lam == 2.0:
            raise ConvergenceFailure("boom")
        return real(g, p)

    monkeypatch.setattr(bifurcation, "solve_all", flaky)
    pts = sweep("loop", 3, [1.0, 2.0, 3.0])
    assert [p.failed for p in pts] == [False, True, False]
    assert "boom" in pts[1].error


def test_sweep_validates_grid():
    with pytest.raises(ValueError):
        sweep("loop", 3, [2.0, 1.0])
    with pytest.raises(ValueError):
        sweep("loop", 3, [0.0, 1.0])
