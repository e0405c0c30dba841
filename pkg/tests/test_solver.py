import numpy as np
import pytest

from hardcore_tree import (
    Branch,
    FertileGraph,
    ModelParams,
    UnsupportedCase,
    branch_map,
    check_bounds,
    loop_k3_branch_polynomial,
    multistart_newton,
    recursion_map,
    solve_all,
    solve_symmetric,
)
from hardcore_tree.solver import closed_form_candidates, seed_box


def max_residual(g, p, z):
    return float(np.max(np.abs(np.asarray(z) - np.asarray(recursion_map(g, p, z)))))


@pytest.mark.parametrize("lam", [0.01, 0.5, 1.0, 3.0, 40.0])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
@pytest.mark.parametrize("g", ["loop", "rod"])
def test_symmetric(g, k, lam):
    p = ModelParams(k, lam)
    s = solve_symmetric(g, p)
    assert s.z.z1 == s.z.z2
    assert max_residual(g, p, s.z) <= 1e-10 * max(1.0, s.z.z1)


def test_symmetric_rejects_key():
    with pytest.raises(UnsupportedCase):
        solve_symmetric("key", ModelParams(2, 1.0))


def test_rod_symmetric_large_lambda():
    # the root sits between lam and 1
    s = solve_symmetric("rod", ModelParams(3, 10.0))
    assert 1.0 < s.z.z1 < 10.0


@pytest.mark.parametrize(
    "g, k, lam, count",
    [
        ("loop", 3, 2.0, 3),
        ("loop", 3, 1.0, 1),
        ("rod", 3, 1.0, 3),
        ("rod", 3, 0.05, 1),
        ("loop", 2, 2.0, 1),
        ("loop", 2, 3.0, 3),
        ("rod", 2, 0.5, 1),
        ("rod", 2, 2.0, 3),
        ("key", 2, 1.0, 1),
        ("whistle", 3, 5.0, 1),
    ],
)
def test_counts_and_invariants(g, k, lam, count):
    p = ModelParams(k, lam)
    sset = solve_all(g, p)
    assert sset.count == count
    for s in sset:
        assert s.residual_norm <= 1e-10
        assert max_residual(g, p, s.z) <= 1e-10
        assert s.z.z1 > 0 and s.z.z2 > 0
        assert check_bounds(g, p, s, margin=1e-12)
    if FertileGraph.parse(g).swap_symmetric:
        zs = {(round(s.z.z1, 9), round(s.z.z2, 9)) for s in sset}
        assert zs == {(b, a) for a, b in zs}
        assert sum(s.branch is Branch.SYMMETRIC for s in sset) == 1
    assert list(sset.z1_values()) == sorted(s.z.z1 for s in sset)


@pytest.mark.parametrize("lam", [1.3, 2.0, 5.0])
def test_closed_form_matches_newton_loop(lam):
    p = ModelParams(3, lam)
    newton = [np.asarray(z) for z in multistart_newton("loop", p) if abs(z[0] - z[1]) > 1e-6]
    closed = [np.asarray(z) for z in closed_form_candidates("loop", p)]
    assert len(newton) == 2 and closed
    for z in closed:
        assert min(np.max(np.abs(z - w)) for w in newton) <= 1e-8
    for w in newton:
        assert min(np.max(np.abs(z - w)) for z in closed) <= 1e-8


@pytest.mark.parametrize("lam", [0.2, 1.0, 10.0])
def test_closed_form_matches_newton_rod(lam):
    p = ModelParams(3, lam)
    newton = [np.asarray(z) for z in multistart_newton("rod", p) if abs(z[0] - z[1]) > 1e-6]
    closed = [np.asarray(z) for z in closed_form_candidates("rod", p)]
    assert len(newton) == 2 and closed
    for z in closed:
        assert min(np.max(np.abs(z - w)) / max(1.0, np.max(np.abs(w))) for w in newton) <= 1e-8
    for w in newton:
        assert min(np.max(np.abs(z - w)) / max(1.0, np.max(np.abs(w))) for z in closed) <= 1e-8


@pytest.mark.parametrize("g, lam", [("loop", 3.0), ("rod", 2.0)])
def test_k2_asymmetric_on_curve(g, lam):
    # k = 2: the asymmetric pair lies on z1 z2 = 1 with phi(x)^2 = lam
    bm = branch_map(g, 2)
    for s in solve_all(g, ModelParams(2, lam)):
        if s.branch is Branch.ASYMMETRIC:
            assert s.z.z1 * s.z.z2 == pytest.approx(1.0, rel=1e-9)
            assert bm.phi(s.z.z1**0.5) ** 2 == pytest.approx(lam, rel=1e-9)


def test_critical_point_note():
    sset = solve_all("loop", ModelParams(3, 32 / 27))
    assert sset.count == 1
    assert sset.solutions[0].z.z1 == pytest.approx(0.5, abs=1e-9)
    assert sset.solutions[0].multiplicity_note == "near-tangent"


def test_empirical_flag():
    assert solve_all("loop", ModelParams(4, 2.0)).empirical
    assert not solve_all("loop", ModelParams(3, 2.0)).empirical
    assert not solve_all("key", ModelParams(4, 2.0)).empirical


def test_seed_box_contains_solutions():
    for g, k, lam in [("loop", 3, 5.0), ("rod", 3, 10.0), ("rod", 2, 2.0)]:
        p = ModelParams(k, lam)
        lo, hi = seed_box(g, p)
        for s in solve_all(g, p):
            assert lo <= s.z.z1 <= hi and lo <= s.z.z2 <= hi


def test_check_bounds_detects_outside():
    from hardcore_tree import Field, Solution

    p = ModelParams(3, 2.0)
    bad = Solution(Field(3.0, 0.5), Branch.ASYMMETRIC, 0.0)
    assert not check_bounds("loop", p, bad)


def test_deterministic():
    a = solve_all("key", ModelParams(3, 7.0))
    b = solve_all("key", ModelParams(3, 7.0))
    assert a.solutions == b.solutions


def test_loop_k3_polynomial_roots_in_solution_set():
    lam = 2.0
    sset = solve_all("loop", ModelParams(3, lam))
    z1s = sset.z1_values()
    for x in loop_k3_branch_polynomial(lam):
        assert min(abs(x**3 - v) for v in z1s) <= 1e-9
