"""Dense-tableau primal simplex for ``min c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

Bland's rule for both the entering and leaving variable, so it cannot cycle.
Meant for small models (a few hundred rows); no phase one is needed
because the slack basis is feasible whenever ``b >= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPUnsolvedError


@dataclass
class SimplexResult:
    x: np.ndarray
    objective: float
    duals: np.ndarray
    iterations: int
    status: str


def simplex_bland(c, A, b, max_iter: int = 200_000, tol: float = 1e-10) -> SimplexResult:
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, nv = A.shape
    if (b < -tol).any():
        raise ValueError("simplex_bland needs b >= 0 (slack basis must be feasible)")

    # rows 0..m-1 constraints, row m objective; last column is the rhs
    tab = np.zeros((m + 1, nv + m + 1))
    tab[:m, :nv] = A
    tab[:m, nv : nv + m] = np.eye(m)
    tab[:m, -1] = b
    tab[m, :nv] = c
    basis = np.arange(nv, nv + m)

    it = 0
    while True:
        reduced = tab[m, :-1]
        candidates = np.flatnonzero(reduced < -tol)
        if candidates.size == 0:
            break
        if it >= max_iter:
            raise LPUnsolvedError(f"simplex hit the iteration limit ({max_iter})", status="iteration_limit")
        col = candidates[0]
        column = tab[:m, col]
        pos = column > tol
        if not pos.any():
            raise LPUnsolvedError("LP is unbounded", status="unbounded")
        ratios = np.full(m, np.inf)
        ratios[pos] = tab[:m, -1][pos] / column[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        row = ties[np.argmin(basis[ties])]

        tab[row] /= tab[row, col]
        others = tab[:, col].copy()
        others[row] = 0.0
        tab -= np.outer(others, tab[row])
        basis[row] = col
        it += 1

    x = np.zeros(nv + m)
    x[basis] = tab[:m, -1]
    # slack reduced costs y >= 0 give the dual bound -b.y <= c.x
    duals = tab[m, nv : nv + m].copy()
    return SimplexResult(x=x[:nv], objective=float(c @ x[:nv]), duals=duals, iterations=it, status="optimal")
