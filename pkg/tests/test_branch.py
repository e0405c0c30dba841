import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hardcore_tree import FertileGraph, ModelParams, UnsupportedCase, asymmetric_constraint_y, branch_map, recursion_map
from hardcore_tree.branch import (
    branch_roots,
    loop_k3_branch_polynomial,
    loop_k3_octic,
    phi_loop_k2,
    phi_loop_k3,
    phi_loop_k3_excess,
    phi_loop_k3_textbook_form,
    phi_rod_k2,
    phi_rod_k3,
    real_roots,
)

xs = st.floats(min_value=1e-2, max_value=1e2)


@given(xs)
def test_constraint_identity(x):
    y = asymmetric_constraint_y(x)
    assert x * y * (x + y) == pytest.approx(1.0, rel=1e-13)


def test_constraint_large_x_no_cancellation():
    x = 1e5
    y = asymmetric_constraint_y(x)
    assert x * y * (x + y) == pytest.approx(1.0, rel=1e-14)
    with pytest.raises(ValueError):
        asymmetric_constraint_y(0.0)


@given(st.floats(min_value=1e-2, max_value=10.0))
def test_phi_forms_agree(x):
    assert phi_loop_k3(x) == pytest.approx(phi_loop_k3_textbook_form(x), rel=1e-12)
    assert phi_loop_k3_excess(x) > 0


@given(xs)
def test_phi_is_positive_root_of_quadratic(x):
    t = phi_loop_k3(x)
    q = x * (x**3 + 1) ** 2 * t * t - x * x * (x**6 - 1) * t - (2 * x**6 + 2 * x**3 + 1)
    scale = x * (x**3 + 1) ** 2 * t * t + x * x * abs(x**6 - 1) * t + (2 * x**6 + 2 * x**3 + 1)
    assert abs(q) <= 1e-12 * scale


@pytest.mark.parametrize("g, k", [("loop", 3), ("rod", 3), ("loop", 2), ("rod", 2)])
@pytest.mark.parametrize("x", [0.3, 0.7, 1.6, 4.0])
def test_branch_points_are_fixed_points(g, k, x):
    bm = branch_map(g, k)
    lam = bm.phi(x) ** k
    z = np.array(bm.field(x))
    f = np.asarray(recursion_map(g, ModelParams(k, lam), z))
    np.testing.assert_allclose(f, z, rtol=1e-12)


def test_diagonal_crossings():
    for g, k, xd in [("loop", 3, 2 ** (-1 / 3)), ("rod", 3, 2 ** (-1 / 3)), ("loop", 2, 1.0), ("rod", 2, 1.0)]:
        bm = branch_map(g, k)
        assert bm.x_diag == pytest.approx(xd)
        assert bm.y(xd) == pytest.approx(xd, rel=1e-14)


def test_k2_minima():
    assert phi_loop_k2(1.0) ** 2 == pytest.approx(9 / 4, rel=1e-15)
    assert phi_rod_k2(1.0) ** 2 == pytest.approx(1.0, rel=1e-15)


def test_unsupported():
    with pytest.raises(UnsupportedCase):
        branch_map("key", 3)
    with pytest.raises(UnsupportedCase):
        branch_map("loop", 4)


def test_octic_coefficients():
    t = 1.7
    x = 0.83
    expected = t * x**8 - t * t * x**7 + 2 * x**6 - 2 * t * t * x**4 + 2 * x**3 - t * x**2 - t * t * x + 1
    assert np.polyval(loop_k3_octic(t), x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("t", [0.6, 1.0, 1.1, 1.3, 2.0, 3.5])
def test_real_roots_vs_numpy(t):
    p = loop_k3_octic(t)
    ours = real_roots(p, 0.0, 50.0)
    ref = sorted(r.real for r in np.roots(p) if abs(r.imag) < 1e-9 and 0 <= r.real <= 50)
    assert len(ours) == len(ref)
    np.testing.assert_allclose(ours, ref, rtol=1e-9)


def test_real_roots_double_root():
    # (x-1)^2 (x-3)
    assert real_roots(np.poly([1, 1, 3]), -5, 5) == pytest.approx([1.0, 3.0], abs=1e-7)
    assert real_roots(np.array([1.0, 0.0, 1.0]), -5, 5) == []


@pytest.mark.parametrize("lam", [1.3, 2.0, 5.0, 50.0])
def test_polynomial_roots_on_branch(lam):
    roots = loop_k3_branch_polynomial(lam)
    assert len(roots) == 2
    t = lam ** (1 / 3)
    for x in roots:
        assert phi_loop_k3(x) == pytest.approx(t, rel=1e-10)
    # the two roots are swap partners
    a, b = roots
    assert asymmetric_constraint_y(a) == pytest.approx(b, rel=1e-8)


def test_polynomial_below_and_at_critical():
    assert loop_k3_branch_polynomial(1.0) == []
    at = loop_k3_branch_polynomial(32 / 27)
    assert len(at) == 1 and at[0] == pytest.approx(2 ** (-1 / 3), abs=1e-6)


def test_rod_scan_roots():
    bm = branch_map("rod", 3)
    for lam in [0.2, 1.0, 10.0]:
        roots = branch_roots(bm, lam)
        assert len(roots) == 2
        for x in roots:
            assert phi_rod_k3(x) ** 3 == pytest.approx(lam, rel=1e-10)
    assert branch_roots(bm, 0.05) == []
