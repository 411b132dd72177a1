"""Sparse linear programs in a small, explicit standard form."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

LE, EQ, GE = "<=", "==", ">="
SENSES = (LE, EQ, GE)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(ValueError):
    """Malformed linear program."""


class LPStallError(RuntimeError):
    """The simplex made no progress within its iteration budget (numerical trouble, not infeasibility)."""


@dataclass(frozen=True, eq=False)
class StandardLP:
    """``max c.x`` subject to ``A x (<=|==|>=) rhs`` and ``lower <= x <= upper``.

    ``A`` is stored as CSR. Infinite bounds are ``-inf`` / ``+inf``.
    """

    c: np.ndarray
    A: sp.csr_matrix
    senses: tuple[str, ...]
    rhs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    var_names: tuple[str, ...] = ()
    row_names: tuple[str, ...] = ()

    def __post_init__(self):
        m, n = self.A.shape
        if self.c.shape != (n,) or self.lower.shape != (n,) or self.upper.shape != (n,):
            raise LPError("objective/bounds length must equal the number of columns")
        if self.rhs.shape != (m,) or len(self.senses) != m:
            raise LPError("rhs/senses length must equal the number of rows")
        if any(s not in SENSES for s in self.senses):
            raise LPError(f"unknown constraint sense in {set(self.senses)}")
        for name, arr in (("objective", self.c), ("coefficients", self.A.data), ("rhs", self.rhs)):
            if not np.all(np.isfinite(arr)):
                raise LPError(f"non-finite {name}")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise LPError("NaN bound")
        if np.any(self.lower == np.inf) or np.any(self.upper == -np.inf) or np.any(self.lower > self.upper):
            raise LPError("inconsistent variable bounds")
        if self.var_names and len(self.var_names) != n:
            raise LPError("var_names has the wrong length")
        if self.row_names and len(self.row_names) != m:
            raise LPError("row_names has the wrong length")

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]

    @property
    def nnz(self) -> int:
        return self.A.nnz

    def objective_value(self, x) -> float:
        return float(self.c @ np.asarray(x, dtype=float))

    def residuals(self, x) -> np.ndarray:
        """Amount by which each row is violated (0 when satisfied)."""
        ax = self.A @ np.asarray(x, dtype=float)
        senses = np.asarray(self.senses)
        viol = np.zeros(self.num_rows)
        le, ge, eq = senses == LE, senses == GE, senses == EQ
        viol[le] = np.maximum(ax[le] - self.rhs[le], 0.0)
        viol[ge] = np.maximum(self.rhs[ge] - ax[ge], 0.0)
        viol[eq] = np.abs(ax[eq] - self.rhs[eq])
        return viol

    def bound_violation(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.size == 0:
            return 0.0
        return float(max(np.max(self.lower - x, initial=0.0), np.max(x - self.upper, initial=0.0)))


@dataclass
class LPSolution:
    status: str
    x: np.ndarray | None = None
    objective: float = float("nan")
    iterations: int = 0
    phase1_iterations: int = 0
    solver: str = "embedded"

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class LPBuilder:
    """Incremental construction of a :class:`StandardLP`.

    Columns are added in blocks; rows take ``{column: coefficient}`` mappings or
    parallel index/value sequences.
    """

    def __init__(self):
        self._c: list[float] = []
        self._lower: list[float] = []
        self._upper: list[float] = []
        self._var_names: list[str] = []
        self._rows: list[int] = []
        self._cols: list[int] = []
        self._vals: list[float] = []
        self._senses: list[str] = []
        self._rhs: list[float] = []
        self._row_names: list[str] = []

    @property
    def num_cols(self) -> int:
        return len(self._c)

    @property
    def num_rows(self) -> int:
        return len(self._rhs)

    def add_vars(self, count: int, lower=0.0, upper=np.inf, obj=0.0, names: Sequence[str] | None = None) -> int:
        """Append ``count`` columns and return the index of the first one."""
        start = len(self._c)
        self._c.extend([float(obj)] * count)
        self._lower.extend([float(lower)] * count)
        self._upper.extend([float(upper)] * count)
        if names is None:
            names = [f"x{start + j}" for j in range(count)]
        if len(names) != count:
            raise LPError("names must match count")
        self._var_names.extend(names)
        return start

    def add_row(self, cols: Sequence[int], vals: Sequence[float], sense: str, rhs: float, name: str = "") -> int:
        if sense not in SENSES:
            raise LPError(f"unknown sense {sense!r}")
        if len(cols) != len(vals):
            raise LPError("cols and vals differ in length")
        if len(set(cols)) != len(cols):
            raise LPError(f"duplicate column in row {name or self.num_rows}")
        row = len(self._rhs)
        self._rows.extend([row] * len(cols))
        self._cols.extend(int(c) for c in cols)
        self._vals.extend(float(v) for v in vals)
        self._senses.append(sense)
        self._rhs.append(float(rhs))
        self._row_names.append(name or f"r{row}")
        return row

    def build(self) -> StandardLP:
        n, m = len(self._c), len(self._rhs)
        cols = np.asarray(self._cols, dtype=np.int64)
        if cols.size and (cols.min() < 0 or cols.max() >= n):
            raise LPError("row references a column out of range")
        A = sp.csr_matrix(
            (np.asarray(self._vals, dtype=float), (np.asarray(self._rows, dtype=np.int64), cols)),
            shape=(m, n),
        )
        A.sort_indices()
        return StandardLP(
            c=np.asarray(self._c, dtype=float),
            A=A,
            senses=tuple(self._senses),
            rhs=np.asarray(self._rhs, dtype=float),
            lower=np.asarray(self._lower, dtype=float),
            upper=np.asarray(self._upper, dtype=float),
            var_names=tuple(self._var_names),
            row_names=tuple(self._row_names),
        )


def dense_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, lower=0.0, upper=np.inf) -> StandardLP:
    """Convenience constructor from dense arrays (``max c.x``)."""
    c = np.asarray(c, dtype=float)
    b = LPBuilder()
    b.add_vars(len(c))
    b._c = list(c)
    if np.ndim(lower) == 0:
        lower = np.full(len(c), float(lower))
    if np.ndim(upper) == 0:
        upper = np.full(len(c), float(upper))
    b._lower, b._upper = list(map(float, lower)), list(map(float, upper))
    for mat, rhs, sense in ((A_ub, b_ub, LE), (A_eq, b_eq, EQ)):
        if mat is None:
            continue
        for row, r in zip(np.atleast_2d(mat), rhs):
            nz = np.flatnonzero(row)
            b.add_row(nz.tolist(), row[nz].tolist(), sense, r)
    return b.build()
