import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blotto.lp import (
    EQ,
    GE,
    INFEASIBLE,
    LE,
    OPTIMAL,
    UNBOUNDED,
    LPBuilder,
    LPError,
    LPStallError,
    dense_lp,
    format_lp,
    solve_lp,
)

BEALE_C = [0.75, -150.0, 0.02, -6.0]
BEALE_A = [[0.25, -60.0, -0.04, 9.0], [0.5, -90.0, -0.02, 3.0], [0.0, 0.0, 1.0, 0.0]]
BEALE_B = [0.0, 0.0, 1.0]


def vertex_enumeration(c, A, b):
    """Best objective over all basic feasible solutions of max c.x, A x <= b, x >= 0."""
    A = np.asarray(A, float)
    m, n = A.shape
    full = np.hstack([A, np.eye(m)])
    best = -np.inf
    for cols in itertools.combinations(range(n + m), m):
        B = full[:, cols]
        if abs(np.linalg.det(B)) < 1e-12:
            continue
        xb = np.linalg.solve(B, b)
        if np.all(xb >= -1e-12):
            x = np.zeros(n + m)
            x[list(cols)] = xb
            best = max(best, float(np.dot(c, x[:n])))
    return best


def test_single_variable():
    sol = solve_lp(dense_lp([1.0], A_ub=[[1.0]], b_ub=[3.0]))
    assert sol.status == OPTIMAL
    assert sol.x[0] == pytest.approx(3.0)
    assert sol.objective == pytest.approx(3.0)


def test_infeasible():
    sol = solve_lp(dense_lp([1.0, 1.0], A_ub=[[1.0, 1.0]], b_ub=[1.0], lower=1.0))
    assert sol.status == INFEASIBLE
    assert sol.x is None


def test_unbounded():
    sol = solve_lp(dense_lp([1.0, 1.0], A_ub=[[1.0, -1.0]], b_ub=[1.0]))
    assert sol.status == UNBOUNDED


def test_beale_cycles_without_protection():
    lp = dense_lp(BEALE_C, A_ub=BEALE_A, b_ub=BEALE_B)
    with pytest.raises(LPStallError):
        solve_lp(lp, pivot_rule="dantzig", max_iter=500)


@pytest.mark.parametrize("options", [
    {},
    {"pivot_rule": "bland"},
    {"pivot_rule": "dantzig", "anti_cycling": True},
])
def test_beale_terminates_at_enumerated_optimum(options):
    lp = dense_lp(BEALE_C, A_ub=BEALE_A, b_ub=BEALE_B)
    sol = solve_lp(lp, max_iter=500, **options)
    assert sol.status == OPTIMAL
    assert sol.objective == pytest.approx(vertex_enumeration(BEALE_C, BEALE_A, BEALE_B), abs=1e-12)
    assert sol.objective == pytest.approx(0.05)


def test_equalities_free_variables_and_bounds():
    b = LPBuilder()
    x = b.add_vars(2, lower=-np.inf)
    y = b.add_vars(1, lower=-1.0, upper=2.0, obj=1.0)
    b.add_row([x, x + 1], [1.0, 1.0], EQ, 1.0)
    b.add_row([x, y], [1.0, -1.0], GE, -0.5)
    b.add_row([x + 1], [1.0], LE, 5.0)
    lp = b.build()
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(2.0)
    assert np.max(lp.residuals(sol.x)) <= 1e-7
    assert lp.bound_violation(sol.x) <= 1e-9


def test_builder_rejects_bad_rows():
    b = LPBuilder()
    b.add_vars(2)
    with pytest.raises(LPError):
        b.add_row([0, 0], [1.0, 1.0], LE, 1.0)
    with pytest.raises(LPError):
        b.add_row([0], [1.0], "<", 1.0)
    b.add_row([5], [1.0], LE, 1.0)
    with pytest.raises(LPError):
        b.build()


def test_initial_basis_validation():
    lp = dense_lp([1.0], A_ub=[[1.0]], b_ub=[3.0])
    with pytest.raises(ValueError):
        solve_lp(lp, initial_basis={0: 7})
    with pytest.raises(ValueError):
        solve_lp(lp, pivot_rule="steepest")


def test_external_solver_agrees():
    lp = dense_lp(BEALE_C, A_ub=BEALE_A, b_ub=BEALE_B)
    ext = solve_lp(lp, solver="external")
    assert ext.status == OPTIMAL
    assert ext.objective == pytest.approx(0.05)
    assert solve_lp(dense_lp([1.0, 1.0], A_ub=[[1.0, 1.0]], b_ub=[1.0], lower=1.0),
                    solver="external").status == INFEASIBLE
    with pytest.raises(ValueError):
        solve_lp(lp, solver="cplex")


def test_deterministic():
    rng = np.random.default_rng(0)
    A = rng.uniform(-1, 1, size=(8, 6))
    lp = dense_lp(rng.uniform(0, 1, 6), A_ub=A, b_ub=rng.uniform(1, 2, 8), upper=3.0)
    s1, s2 = solve_lp(lp), solve_lp(lp)
    assert s1.x.tobytes() == s2.x.tobytes()
    assert s1.objective == lp.objective_value(s1.x)


def test_lp_file_output():
    text = format_lp(dense_lp([1.0, -2.0], A_ub=[[1.0, 1.0]], b_ub=[4.0], upper=[np.inf, 3.0]))
    assert text.startswith("\\ blotto\nMaximize")
    assert "<= 4" in text and "0 <= x1 <= 3" in text and text.endswith("End\n")


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(0, 2**31))
def test_random_lps_match_highs(m, n, seed):
    rng = np.random.default_rng(seed)
    A = rng.integers(-3, 4, size=(m, n)).astype(float)
    b = rng.integers(0, 5, size=m).astype(float)
    c = rng.integers(-3, 4, size=n).astype(float)
    lp = dense_lp(c, A_ub=A, b_ub=b, upper=4.0)
    ours, ref = solve_lp(lp), solve_lp(lp, solver="external")
    assert ours.status == ref.status == OPTIMAL
    assert ours.objective == pytest.approx(ref.objective, abs=1e-7)
    assert np.max(lp.residuals(ours.x)) <= 1e-7
