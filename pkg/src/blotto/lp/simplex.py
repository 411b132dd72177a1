"""Two-phase bounded-variable revised simplex.

Every row ``i`` gets a logical column ``s_i`` so that ``A x + s = rhs``; the
logical's bounds encode the row sense (``<=``: ``s >= 0``, ``>=``: ``s <= 0``,
``==``: ``s = 0``). Free structural columns are crashed into the starting basis
(a lower-triangular choice, so the start is always nonsingular). Rows whose
basic logical is then out of bounds receive an artificial column, and phase I
drives the artificials to zero.

The basis is held as a sparse LU factorisation (SuperLU) of a reference basis
plus a product-form eta file, refactorised every ``refactor_every`` pivots.
Reduced costs are updated from the pivot row and recomputed at every
refactorisation.

``pivot_rule="auto"`` prices with devex reference weights (a scaled Dantzig
rule) and a Harris ratio test. With ``anti_cycling`` on (the default for
"auto") the solver hashes every basis it visits while the objective stands
still; if one comes back it switches to Bland's rule, which cannot cycle, and
goes back once the objective improves. Long degenerate runs that never repeat
are left to devex, which gets through them far faster than Bland. ``"dantzig"``
is the textbook rule, unguarded unless asked (kept for demonstrating cycling),
and ``"bland"`` uses Bland's rule throughout.
"""

from __future__ import annotations

import logging

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .model import EQ, GE, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, LPSolution, LPStallError, StandardLP

log = logging.getLogger(__name__)

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
OPT_TOL = 1e-8

_DROP_TOL = 1e-12
_SUSPECT_PIVOT = 1e-6
_DEVEX_RESET = 1e8

_BASIC, _LOWER, _UPPER, _FREE, _FIXED = 0, 1, 2, 3, 4

PIVOT_RULES = ("auto", "dantzig", "bland")


class _Basis:
    """LU of a reference basis matrix plus eta updates."""

    def __init__(self, M: sp.csc_matrix, heads: np.ndarray):
        self.M = M
        self.heads = heads
        self.refactor()

    def refactor(self):
        B = self.M[:, self.heads].tocsc()
        try:
            self.lu = spla.splu(B, permc_spec="COLAMD")
        except RuntimeError as exc:
            raise LPStallError(f"basis became singular: {exc}") from None
        self.etas: list[tuple[int, np.ndarray, np.ndarray, float]] = []

    def ftran(self, a: np.ndarray) -> np.ndarray:
        v = self.lu.solve(a)
        for r, idx, val, piv in self.etas:
            vr = v[r] / piv
            if vr != 0.0:
                v[idx] -= val * vr
            v[r] = vr
        return v

    def btran(self, c: np.ndarray) -> np.ndarray:
        w = c.copy()
        for r, idx, val, piv in reversed(self.etas):
            if idx.size:
                w[r] = (w[r] - val @ w[idx]) / piv
            else:
                w[r] = w[r] / piv
        return self.lu.solve(w, trans="T")

    def replace(self, r: int, alpha: np.ndarray, q: int):
        idx = np.flatnonzero(alpha)
        idx = idx[idx != r]
        self.etas.append((r, idx, alpha[idx].copy(), alpha[r]))
        self.heads[r] = q


def _crash(A: sp.csc_matrix, free_cols: np.ndarray, senses: np.ndarray) -> dict:
    """Pick a pivot row for as many free columns as possible, keeping the basis triangular.

    A column may take a row only if no previously chosen column touches that
    row. Equality rows are preferred (their logicals are useless in a basis),
    then the largest coefficient.
    """
    m = A.shape[0]
    touched = np.zeros(m, dtype=bool)
    prio = np.where(senses == EQ, 0, 1)
    chosen = {}
    for j in free_cols[::-1]:
        rows = A.indices[A.indptr[j]:A.indptr[j + 1]]
        vals = A.data[A.indptr[j]:A.indptr[j + 1]]
        ok = ~touched[rows]
        if ok.any():
            cand, cv = rows[ok], np.abs(vals[ok])
            best = np.lexsort((-cv, prio[cand]))[0]
            chosen[int(cand[best])] = int(j)
        touched[rows] = True
    return chosen


class SimplexSolver:
    """One-shot solver for a single :class:`StandardLP`."""

    def __init__(
        self,
        lp: StandardLP,
        pivot_tol: float = PIVOT_TOL,
        feas_tol: float = FEAS_TOL,
        opt_tol: float = OPT_TOL,
        refactor_every: int = 100,
        max_iter: int | None = None,
        pivot_rule: str = "auto",
        crash: bool = True,
        initial_basis: dict | None = None,
        anti_cycling: bool | None = None,
    ):
        if pivot_rule not in PIVOT_RULES:
            raise ValueError(f"unknown pivot rule {pivot_rule!r}")
        self.lp = lp
        self.pivot_tol = pivot_tol
        self.feas_tol = feas_tol
        self.opt_tol = opt_tol
        self.refactor_every = refactor_every
        self.pivot_rule = pivot_rule
        self.crash = crash
        self.initial_basis = initial_basis
        self.anti_cycling = pivot_rule == "auto" if anti_cycling is None else anti_cycling
        m, n = lp.A.shape
        self.max_iter = max_iter if max_iter is not None else 50 * (m + n)
        self.iterations = 0

    # -- setup ------------------------------------------------------------------

    def _setup(self):
        lp = self.lp
        m, n = lp.A.shape
        senses = np.asarray(lp.senses)
        A = lp.A.tocsc()
        s_lo = np.where(senses == GE, -np.inf, 0.0)
        s_up = np.where(senses == LE, np.inf, 0.0)
        lo = np.concatenate([lp.lower, s_lo])
        up = np.concatenate([lp.upper, s_up])

        x = np.zeros(n + m)
        x[:n] = np.where(np.isfinite(lo[:n]), lo[:n], np.where(np.isfinite(up[:n]), up[:n], 0.0))
        # logicals start at their finite bound nearest zero
        x[n:] = np.where(senses == GE, up[n:], lo[n:])
        heads = np.arange(n, n + m)
        M0 = sp.hstack([A, sp.identity(m, format="csc")], format="csc")
        if self.initial_basis:
            for r, j in self.initial_basis.items():
                if not (0 <= r < m and 0 <= j < n):
                    raise ValueError(f"initial basis entry {r}->{j} out of range")
                heads[r] = j
            if np.unique(heads).size != m:
                raise ValueError("initial basis repeats a column")
        elif self.crash:
            free = np.flatnonzero(~np.isfinite(lp.lower) & ~np.isfinite(lp.upper))
            for r, j in _crash(A, free, senses).items():
                heads[r] = j  # the logical of row r leaves at its bound nearest zero
        while True:
            basis = _Basis(M0, heads)
            xn = x.copy()
            xn[heads] = 0.0
            xb = basis.ftran(lp.rhs - M0 @ xn)
            # crashed bounded columns must come out inside their bounds; otherwise undo them
            out = (heads < n) & ((xb < lo[np.minimum(heads, n + m - 1)] - self.feas_tol)
                                 | (xb > up[np.minimum(heads, n + m - 1)] + self.feas_tol))
            if not out.any():
                break
            heads[out] = n + np.flatnonzero(out)
        xb[heads < n] = np.clip(xb[heads < n], lo[heads[heads < n]], up[heads[heads < n]])

        is_logical = heads >= n
        # basic logicals out of range get an artificial partner
        val = np.where(is_logical, xb, 0.0)
        rows = heads - n
        clipped = np.where(is_logical, np.clip(val, lo[np.where(is_logical, heads, 0)],
                                               up[np.where(is_logical, heads, 0)]), 0.0)
        art_pos = np.flatnonzero(is_logical & (np.abs(val - clipped) > 0.0))
        art_rows = rows[art_pos]
        art_sign = np.sign(val[art_pos] - clipped[art_pos])
        na = art_pos.size

        blocks = [A, sp.identity(m, format="csc")]
        if na:
            blocks.append(sp.csc_matrix((art_sign, (art_rows, np.arange(na))), shape=(m, na)))
        self.M = sp.hstack(blocks, format="csc")
        self.MT = self.M.T.tocsr()
        self.n, self.m, self.na = n, m, na

        lo = np.concatenate([lo, np.zeros(na)])
        up = np.concatenate([up, np.full(na, np.inf)])
        x = np.concatenate([x, np.zeros(na)])
        status = np.full(n + m + na, _LOWER, dtype=np.int8)
        finite_lo, finite_up = np.isfinite(lo), np.isfinite(up)
        status[~finite_lo & finite_up] = _UPPER
        status[~finite_lo & ~finite_up] = _FREE
        status[finite_lo & finite_up & (lo == up)] = _FIXED
        # nonbasic logicals sit at the bound they were moved to
        x[n + art_rows] = clipped[art_pos]
        for i, c in zip(art_rows, clipped[art_pos]):
            if lo[n + i] != up[n + i]:
                status[n + i] = _UPPER if c == up[n + i] else _LOWER
        heads = heads.copy()
        heads[art_pos] = n + m + np.arange(na)
        status[heads] = _BASIC

        self.lo, self.up, self.x, self.status = lo, up, x, status
        self.rhs = lp.rhs.astype(float)
        self.basis = _Basis(self.M, heads)
        self._recompute_basics()

    # -- core loop --------------------------------------------------------------

    def _recompute_basics(self):
        heads = self.basis.heads
        xn = self.x.copy()
        xn[heads] = 0.0
        self.x[heads] = self.basis.ftran(self.rhs - self.M @ xn)

    def _reduced_costs(self, cost: np.ndarray):
        heads = self.basis.heads
        y = self.basis.btran(cost[heads])
        self.d = cost - self.MT @ y
        self.d[heads] = 0.0

    def _price(self, bland: bool):
        d, st = self.d, self.status
        up_ok = ((st == _LOWER) | (st == _FREE)) & (d < -self.opt_tol)
        down_ok = ((st == _UPPER) | (st == _FREE)) & (d > self.opt_tol)
        eligible = (up_ok | down_ok) & ~self._blocked & ~self._rejected
        cand = np.flatnonzero(eligible)
        if cand.size == 0:
            return None, 0.0, 0
        if bland:
            q = int(cand[0])
        elif self.pivot_rule == "dantzig":
            q = int(cand[np.argmax(np.abs(d[cand]))])
        else:
            q = int(cand[np.argmax(d[cand] ** 2 / self.weights[cand])])
        return q, float(d[q]), (1 if up_ok[q] else -1)

    def _ratio(self, alpha: np.ndarray, direction: int, q: int, bland: bool):
        """Return ``(step, leaving_position)``; position ``-1`` means a bound flip."""
        heads = self.basis.heads
        xb, lb, ub = self.x[heads], self.lo[heads], self.up[heads]
        move = -direction * alpha  # rate of change of each basic variable
        dec = (move < -self.pivot_tol) & np.isfinite(lb)
        inc = (move > self.pivot_tol) & np.isfinite(ub)
        ratios = np.full(alpha.size, np.inf)
        ratios[dec] = (xb[dec] - lb[dec]) / -move[dec]
        ratios[inc] = (ub[inc] - xb[inc]) / move[inc]
        np.maximum(ratios, 0.0, out=ratios)

        flip = self.up[q] - self.lo[q]
        cand = np.flatnonzero(dec | inc)
        if cand.size == 0:
            return flip, -1
        if bland or self.pivot_rule == "dantzig":
            best = ratios[cand].min()
            if flip <= best:
                return flip, -1
            ties = cand[ratios[cand] <= best]
            # Bland: smallest variable index; textbook Dantzig: first row
            r = int(ties[np.argmin(heads[ties])]) if bland else int(ties[0])
            return float(ratios[r]), r
        # Harris: relax bounds slightly, then take the largest pivot inside the relaxed step
        relaxed = np.full(alpha.size, np.inf)
        relaxed[dec] = (xb[dec] - lb[dec] + self.feas_tol) / -move[dec]
        relaxed[inc] = (ub[inc] - xb[inc] + self.feas_tol) / move[inc]
        limit = max(relaxed[cand].min(), 0.0)
        if flip <= limit:
            return flip, -1
        inside = cand[ratios[cand] <= limit]
        r = int(inside[np.argmax(np.abs(alpha[inside]))])
        return float(ratios[r]), r

    def _refresh(self, cost):
        self.basis.refactor()
        self._recompute_basics()
        self._reduced_costs(cost)
        self._rejected[:] = False

    def _column(self, q: int) -> np.ndarray:
        col = np.zeros(self.m)
        lo_ptr, hi_ptr = self.M.indptr[q], self.M.indptr[q + 1]
        col[self.M.indices[lo_ptr:hi_ptr]] = self.M.data[lo_ptr:hi_ptr]
        alpha = self.basis.ftran(col)
        alpha[np.abs(alpha) < _DROP_TOL] = 0.0
        return alpha

    def _run(self, cost: np.ndarray, phase: int) -> str:
        basis = self.basis
        m = self.m
        bland = self.pivot_rule == "bland"
        self.weights = np.ones(cost.size)
        self._rejected = np.zeros(cost.size, dtype=bool)
        self._refresh(cost)
        obj = float(cost @ self.x)
        best_obj = obj
        # basis fingerprint: XOR of fixed random keys of the basic columns
        keys = np.random.default_rng(0).integers(1, 2**63, size=cost.size, dtype=np.uint64)
        fingerprint = np.bitwise_xor.reduce(keys[basis.heads])
        seen = {fingerprint}
        since_refactor = 0
        while True:
            if self.iterations >= self.max_iter:
                raise LPStallError(
                    f"no convergence after {self.iterations} iterations (phase {phase}); "
                    "cycling or numerical stall"
                )
            if since_refactor >= self.refactor_every:
                self._refresh(cost)
                since_refactor = 0

            q, dq, direction = self._price(bland)
            if q is None:
                if since_refactor:
                    # confirm optimality with fresh reduced costs
                    self._refresh(cost)
                    since_refactor = 0
                    continue
                if self._rejected.any():
                    log.warning("stopping with %d columns rejected for tiny pivots", self._rejected.sum())
                return OPTIMAL
            alpha = self._column(q)
            step, r = self._ratio(alpha, direction, q, bland)
            if r >= 0 and abs(alpha[r]) < _SUSPECT_PIVOT:
                if since_refactor:
                    # small pivot from an aged factorisation: refresh and price again
                    self._refresh(cost)
                    since_refactor = 0
                else:
                    self._rejected[q] = True
                continue
            if not np.isfinite(step):
                return UNBOUNDED

            heads = basis.heads
            self.x[heads] -= direction * step * alpha
            self.x[q] += direction * step
            self.iterations += 1

            if r < 0:
                self.status[q] = _UPPER if direction > 0 else _LOWER
                self.x[q] = self.up[q] if direction > 0 else self.lo[q]
            else:
                leaving = heads[r]
                hit_lower = -direction * alpha[r] < 0
                self.x[leaving] = self.lo[leaving] if hit_lower else self.up[leaving]
                if self.lo[leaving] == self.up[leaving]:
                    self.status[leaving] = _FIXED
                else:
                    self.status[leaving] = _LOWER if hit_lower else _UPPER
                # pivot row for the reduced-cost and weight updates
                e_r = np.zeros(m)
                e_r[r] = 1.0
                row = self.MT @ basis.btran(e_r)
                arq = alpha[r]
                self.d -= (dq / arq) * row
                if self.pivot_rule == "auto":
                    wq = self.weights[q]
                    np.maximum(self.weights, (row / arq) ** 2 * wq, out=self.weights)
                    self.weights[leaving] = max(wq / arq ** 2, 1.0)
                    if self.weights[leaving] > _DEVEX_RESET:
                        self.weights[:] = 1.0
                self.status[q] = _BASIC
                fingerprint ^= keys[leaving] ^ keys[q]
                basis.replace(r, alpha, q)
                self.d[basis.heads] = 0.0
                since_refactor += 1

            # anti-cycling: Bland once a basis repeats without objective progress
            if self.anti_cycling and self.pivot_rule != "bland":
                obj = float(cost @ self.x)
                if obj < best_obj - 1e-12 * max(1.0, abs(best_obj)):
                    best_obj = obj
                    seen = {fingerprint}
                    if bland:
                        log.debug("objective moved; back to devex at iteration %d", self.iterations)
                    bland = False
                elif fingerprint in seen:
                    if not bland:
                        log.debug("basis repeated; switching to Bland at iteration %d", self.iterations)
                    bland = True
                else:
                    seen.add(fingerprint)

    def solve(self) -> LPSolution:
        lp = self.lp
        self._setup()
        n, m, na = self.n, self.m, self.na
        self._blocked = np.zeros(n + m + na, dtype=bool)
        phase1_iters = 0
        if na:
            cost1 = np.zeros(n + m + na)
            cost1[n + m:] = 1.0
            status = self._run(cost1, phase=1)
            self.basis.refactor()
            self._recompute_basics()
            phase1_iters = self.iterations
            infeas = float(self.x[n + m:].sum())
            if status != OPTIMAL or infeas > self.feas_tol * max(1.0, np.abs(lp.rhs).max(initial=0.0)):
                return LPSolution(INFEASIBLE, iterations=self.iterations, phase1_iterations=phase1_iters)
            # freeze artificials at zero; basic ones may still leave
            self.up[n + m:] = 0.0
            self.x[n + m:] = np.where(self.status[n + m:] == _BASIC, self.x[n + m:], 0.0)
            self.status[n + m:][self.status[n + m:] != _BASIC] = _FIXED
            self._blocked[n + m:] = True

        cost2 = np.concatenate([-lp.c, np.zeros(m + na)])  # maximise c.x == minimise -c.x
        status = self._run(cost2, phase=2)
        if status == UNBOUNDED:
            return LPSolution(UNBOUNDED, iterations=self.iterations, phase1_iterations=phase1_iters)
        self.basis.refactor()
        self._recompute_basics()
        # snap structurals that drifted within tolerance of a bound
        x = np.minimum(np.maximum(self.x[:n], lp.lower), lp.upper)
        return LPSolution(
            OPTIMAL,
            x=x,
            objective=lp.objective_value(x),
            iterations=self.iterations,
            phase1_iterations=phase1_iters,
        )


def simplex(lp: StandardLP, **options) -> LPSolution:
    return SimplexSolver(lp, **options).solve()
