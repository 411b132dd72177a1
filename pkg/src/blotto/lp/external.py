"""Adapter that satisfies the ``solve_lp`` contract with SciPy's HiGHS backend."""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from .model import EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, LPSolution, LPStallError, StandardLP


def highs(lp: StandardLP) -> LPSolution:
    senses = np.asarray(lp.senses)
    A = lp.A.tocsr()
    le, ge, eq = senses == LE, senses == GE, senses == EQ
    ub_rows = np.flatnonzero(le | ge)
    flip = np.where(ge[ub_rows], -1.0, 1.0)
    A_ub = A[ub_rows].multiply(flip[:, None]).tocsr() if ub_rows.size else None
    b_ub = lp.rhs[ub_rows] * flip if ub_rows.size else None
    eq_rows = np.flatnonzero(eq)
    A_eq = A[eq_rows] if eq_rows.size else None
    b_eq = lp.rhs[eq_rows] if eq_rows.size else None
    bounds = np.column_stack([
        np.where(np.isfinite(lp.lower), lp.lower, np.nan),
        np.where(np.isfinite(lp.upper), lp.upper, np.nan),
    ])
    bounds = [(None if np.isnan(lo) else lo, None if np.isnan(up) else up) for lo, up in bounds]
    res = linprog(-lp.c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    iters = int(getattr(res, "nit", 0) or 0)
    if res.status == 0:
        x = np.asarray(res.x, dtype=float)
        return LPSolution(OPTIMAL, x=x, objective=lp.objective_value(x), iterations=iters, solver="highs")
    if res.status == 2:
        return LPSolution(INFEASIBLE, iterations=iters, solver="highs")
    if res.status == 3:
        return LPSolution(UNBOUNDED, iterations=iters, solver="highs")
    raise LPStallError(f"HiGHS failed: {res.message}")
