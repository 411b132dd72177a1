"""Write a :class:`StandardLP` in the CPLEX LP text format for external cross-checks."""

from __future__ import annotations

import re

import numpy as np

from .model import EQ, GE, LE, StandardLP

_SENSE = {LE: "<=", EQ: "=", GE: ">="}
_BAD = re.compile(r"[^A-Za-z0-9_.]")


def _name(raw: str, fallback: str) -> str:
    name = _BAD.sub("_", raw) if raw else fallback
    if not name or name[0].isdigit() or name[0] in ".eE":
        name = "_" + name
    return name


def _terms(cols, vals, names, width=8) -> list[str]:
    out = []
    for j, (c, v) in enumerate(zip(cols, vals)):
        sign = "-" if v < 0 else "+"
        if j == 0 and sign == "+":
            sign = ""
        out.append(f"{sign} {abs(v):.17g} {names[c]}".strip())
    lines = []
    for start in range(0, len(out), width):
        lines.append(" ".join(out[start:start + width]))
    return lines or ["0 " + names[0]] if names else ["0"]


def format_lp(lp: StandardLP, title: str = "blotto") -> str:
    vnames = [_name(v, f"x{j}") for j, v in enumerate(lp.var_names or [""] * lp.num_cols)]
    rnames = [_name(r, f"r{i}") for i, r in enumerate(lp.row_names or [""] * lp.num_rows)]
    out = [f"\\ {title}", "Maximize"]
    nz = np.flatnonzero(lp.c)
    obj = _terms(nz, lp.c[nz], vnames) if nz.size else [f"0 {vnames[0]}"]
    out.append(" obj: " + obj[0])
    out.extend("   " + line for line in obj[1:])
    out.append("Subject To")
    A = lp.A.tocsr()
    for i in range(lp.num_rows):
        s, e = A.indptr[i], A.indptr[i + 1]
        body = _terms(A.indices[s:e], A.data[s:e], vnames) if e > s else [f"0 {vnames[0]}"]
        out.append(f" {rnames[i]}: " + body[0])
        out.extend("   " + line for line in body[1:])
        out[-1] += f" {_SENSE[lp.senses[i]]} {lp.rhs[i]:.17g}"
    out.append("Bounds")
    for j in range(lp.num_cols):
        lo, up = lp.lower[j], lp.upper[j]
        if lo == 0.0 and up == np.inf:
            continue
        if lo == -np.inf and up == np.inf:
            out.append(f" {vnames[j]} free")
        elif lo == up:
            out.append(f" {vnames[j]} = {lo:.17g}")
        else:
            lo_s = "-inf" if lo == -np.inf else f"{lo:.17g}"
            up_s = "+inf" if up == np.inf else f"{up:.17g}"
            out.append(f" {lo_s} <= {vnames[j]} <= {up_s}")
    out.append("End")
    return "\n".join(out) + "\n"


def write_lp(lp: StandardLP, path, title: str = "blotto"):
    with open(path, "w") as fh:
        fh.write(format_lp(lp, title))
