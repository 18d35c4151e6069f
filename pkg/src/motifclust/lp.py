"""LP relaxation of mixed edge/triangle correlation clustering.

Variables ``x_i_j`` (pair split) and ``x_i_j_k`` (triple split) live in
[0, 1]. Every row is written as ``row . x <= rhs`` and tagged with its
family: ``a`` (triple split whenever one of its pairs is), ``b`` (triple
split at most half the pair splits, and at most 1), ``c`` (triangle
inequality on pair splits), ``ub`` (pair upper bound, only used by the
dense simplex which has no native bounds).
"""
from __future__ import annotations

import logging
import os
import tempfile
from dataclasses import dataclass, field
from math import comb
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import LPUnsolvedError
from .instance import WeightedInstance, triple_arrays
from .simplex import simplex_bland

log = logging.getLogger(__name__)

FEAS_TOL = 1e-7
OBJ_TOL = 1e-6
SIMPLEX_MAX_N = 8


@dataclass(frozen=True, eq=False)
class LPModel:
    n: int
    names: list[str] = field(repr=False)
    cost: np.ndarray = field(repr=False)
    const: float
    A: sp.csr_matrix = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    family: np.ndarray = field(repr=False)
    pair_index: np.ndarray = field(repr=False)

    @property
    def num_pairs(self) -> int:
        return comb(self.n, 2)

    @property
    def num_triples(self) -> int:
        return comb(self.n, 3)

    @property
    def num_vars(self) -> int:
        return len(self.names)

    def family_counts(self) -> dict[str, int]:
        keys, counts = np.unique(self.family, return_counts=True)
        return {str(k): int(c) for k, c in zip(keys, counts)}

    def objective(self, x: np.ndarray) -> float:
        return float(self.const + self.cost @ x)

    def max_violation(self, x: np.ndarray) -> float:
        """Largest violation of any row or of the [0, 1] box."""
        x = np.asarray(x, dtype=float)
        worst = max(0.0, float(-x.min()), float(x.max() - 1.0)) if x.size else 0.0
        if self.A.shape[0]:
            worst = max(worst, float((self.A @ x - self.rhs).max()))
        return worst


@dataclass(frozen=True, eq=False)
class LPSolution:
    n: int
    x: np.ndarray = field(repr=False)
    objective: float
    x_pair: np.ndarray = field(repr=False)
    status: str = "optimal"
    backend: str = ""

    @property
    def x_triple(self) -> np.ndarray:
        return self.x[comb(self.n, 2):]


def build_lp(inst: WeightedInstance) -> LPModel:
    n = inst.n
    iu, ju = np.triu_indices(n, 1)
    n_pairs = iu.size
    pair_index = np.full((n, n), -1, dtype=np.intp)
    pair_index[iu, ju] = pair_index[ju, iu] = np.arange(n_pairs)
    ti, tj, tk = triple_arrays(n)
    n_trip = ti.size
    tvar = n_pairs + np.arange(n_trip)

    names = [f"x_{i}_{j}" for i, j in zip(iu.tolist(), ju.tolist())]
    names += [f"x_{i}_{j}_{k}" for i, j, k in zip(ti.tolist(), tj.tolist(), tk.tolist())]

    # w x + (1 - w)(1 - x) = (1 - w) + (2w - 1) x
    wp = inst.w_pair[iu, ju]
    wt = inst.w_triple[ti, tj, tk]
    cost = np.concatenate([inst.lambda1 * (2 * wp - 1), inst.lambda2 * (2 * wt - 1)])
    const = float(inst.lambda1 * (1 - wp).sum() + inst.lambda2 * (1 - wt).sum())

    e_ij, e_ik, e_jk = pair_index[ti, tj], pair_index[ti, tk], pair_index[tj, tk]
    rows, cols, vals, rhs, fam = [], [], [], [], []
    nrow = 0

    def add(block_cols, block_vals, b, tag):
        # block_cols/vals: lists of equal-length arrays, one entry per row
        nonlocal nrow
        k = block_cols[0].size
        r = nrow + np.arange(k)
        for cc, vv in zip(block_cols, block_vals):
            rows.append(r)
            cols.append(cc)
            vals.append(np.broadcast_to(vv, (k,)).astype(float))
        rhs.append(np.full(k, b, dtype=float))
        fam.append(np.full(k, tag))
        nrow += k

    if n_trip:
        for e in (e_ij, e_ik, e_jk):
            add([e, tvar], [1.0, -1.0], 0.0, "a")
        add([tvar, e_ij, e_ik, e_jk], [1.0, -0.5, -0.5, -0.5], 0.0, "b")
        add([tvar], [1.0], 1.0, "b")
        add([e_jk, e_ij, e_ik], [1.0, -1.0, -1.0], 0.0, "c")
        add([e_ik, e_ij, e_jk], [1.0, -1.0, -1.0], 0.0, "c")
        add([e_ij, e_ik, e_jk], [1.0, -1.0, -1.0], 0.0, "c")

    nv = n_pairs + n_trip
    if rows:
        A = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(nrow, nv)
        )
        rhs_arr, fam_arr = np.concatenate(rhs), np.concatenate(fam)
    else:
        A = sp.csr_matrix((0, nv))
        rhs_arr, fam_arr = np.zeros(0), np.zeros(0, dtype="<U2")
    return LPModel(n, names, cost, const, A, rhs_arr, fam_arr, pair_index)


def _solution(model: LPModel, x: np.ndarray, backend: str) -> LPSolution:
    x = np.asarray(x, dtype=float)
    viol = model.max_violation(x)
    if viol > FEAS_TOL:
        raise LPUnsolvedError(f"{backend} returned a point violating the LP by {viol:.3g}", status="infeasible")
    x = np.clip(x, 0.0, 1.0)
    xp = np.zeros((model.n, model.n))
    iu, ju = np.triu_indices(model.n, 1)
    xp[iu, ju] = xp[ju, iu] = x[: iu.size]
    return LPSolution(model.n, x, model.objective(x), xp, "optimal", backend)


def _solve_simplex(model: LPModel, max_iter: int) -> LPSolution:
    n_pairs = model.num_pairs
    # pair upper bounds become rows; triple upper bounds are already family b
    ub = sp.csr_matrix((np.ones(n_pairs), (np.arange(n_pairs), np.arange(n_pairs))), shape=(n_pairs, model.num_vars))
    A = sp.vstack([model.A, ub]).toarray()
    b = np.concatenate([model.rhs, np.ones(n_pairs)])
    res = simplex_bland(model.cost, A, b, max_iter=max_iter)
    gap = float(model.cost @ res.x + b @ res.duals)
    if gap > OBJ_TOL:
        raise LPUnsolvedError(f"simplex stopped with duality gap {gap:.3g}", status="gap")
    log.debug("simplex: %d iterations, gap %.2e", res.iterations, gap)
    return _solution(model, res.x, "simplex")


def _highs():
    try:
        import highspy
    except ImportError as exc:  # pragma: no cover - depends on environment
        raise LPUnsolvedError("highspy is not installed; install it or use method='simplex'", status="no_solver") from exc
    h = highspy.Highs()
    h.setOptionValue("output_flag", False)
    return highspy, h


def _solve_highs(model: LPModel) -> LPSolution:
    highspy, h = _highs()
    A = model.A.tocsc()
    lp = highspy.HighsLp()
    lp.num_col_ = model.num_vars
    lp.num_row_ = A.shape[0]
    lp.col_cost_ = model.cost
    lp.col_lower_ = np.zeros(model.num_vars)
    lp.col_upper_ = np.ones(model.num_vars)
    lp.row_lower_ = np.full(A.shape[0], -highspy.kHighsInf)
    lp.row_upper_ = model.rhs
    lp.offset_ = model.const
    lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    lp.a_matrix_.start_ = A.indptr
    lp.a_matrix_.index_ = A.indices
    lp.a_matrix_.value_ = A.data
    h.passModel(lp)
    h.run()
    status = h.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        raise LPUnsolvedError(f"HiGHS finished with status {h.modelStatusToString(status)}", status="unsolved")
    return _solution(model, np.array(h.getSolution().col_value), "highs")


def solve_external(model: LPModel, workdir: str | Path | None = None) -> LPSolution:
    """Round-trip through files: write MPS, solve it with HiGHS, re-import ``name value`` lines."""
    highspy, h = _highs()
    with tempfile.TemporaryDirectory(dir=workdir) as tmp:
        mps = os.path.join(tmp, "model.mps")
        Path(mps).write_text(export_lp(model, "mps"))
        if h.readModel(mps) != highspy.HighsStatus.kOk:
            raise LPUnsolvedError("HiGHS could not read the exported model", status="io")
        h.run()
        status = h.getModelStatus()
        if status != highspy.HighsModelStatus.kOptimal:
            raise LPUnsolvedError(f"HiGHS finished with status {h.modelStatusToString(status)}", status="unsolved")
        names = h.getLp().col_names_
        values = h.getSolution().col_value
        text = "".join(f"{nm} {val!r}\n" for nm, val in zip(names, values))
    sol = import_solution(model, text)
    return LPSolution(sol.n, sol.x, sol.objective, sol.x_pair, sol.status, "external")


def solve_lp(model: LPModel, method: str = "auto", max_iter: int = 200_000) -> LPSolution:
    """Solve the relaxation.

    ``method`` is ``simplex`` (in-process dense tableau), ``highs``
    (in-process HiGHS), ``external`` (MPS file round-trip) or ``auto``
    (simplex up to n = SIMPLEX_MAX_N, HiGHS beyond).
    """
    if method == "auto":
        method = "simplex" if model.n <= SIMPLEX_MAX_N else "highs"
    if method == "simplex":
        return _solve_simplex(model, max_iter)
    if method == "highs":
        return _solve_highs(model)
    if method == "external":
        return solve_external(model)
    raise ValueError(f"unknown LP method {method!r}")


def _fmt(v: float) -> str:
    return repr(float(v))


def _rows(model: LPModel):
    A = model.A.tocsr()
    for r in range(A.shape[0]):
        lo, hi = A.indptr[r], A.indptr[r + 1]
        yield r, A.indices[lo:hi], A.data[lo:hi]


def export_lp(model: LPModel, fmt: str = "lp") -> str:
    """Serialize as CPLEX-LP (``fmt='lp'``) or free MPS (``fmt='mps'``)."""
    if fmt == "lp":
        return _export_cplex_lp(model)
    if fmt == "mps":
        return _export_mps(model)
    raise ValueError(f"unknown export format {fmt!r}")


def _export_cplex_lp(model: LPModel) -> str:
    out = [f"\\ mixed edge/triangle correlation clustering relaxation, n={model.n}\n", "Minimize\n obj:"]
    terms = [f" {'+' if c >= 0 else '-'} {_fmt(abs(c))} {nm}" for nm, c in zip(model.names, model.cost)]
    out.append("".join(terms) if terms else " 0")
    out.append(f" + {_fmt(model.const)}\n" if model.const >= 0 else f" - {_fmt(-model.const)}\n")
    out.append("Subject To\n")
    for r, idx, val in _rows(model):
        lhs = "".join(f" {'+' if v >= 0 else '-'} {_fmt(abs(v))} {model.names[i]}" for i, v in zip(idx, val))
        out.append(f" {model.family[r]}{r}:{lhs} <= {_fmt(model.rhs[r])}\n")
    out.append("Bounds\n")
    out.extend(f" 0 <= {nm} <= 1\n" for nm in model.names)
    out.append("End\n")
    return "".join(out)


def _export_mps(model: LPModel) -> str:
    out = [f"NAME mmcc_n{model.n}\n", "ROWS\n", " N obj\n"]
    row_names = [f"{model.family[r]}{r}" for r in range(model.A.shape[0])]
    out.extend(f" L {rn}\n" for rn in row_names)
    out.append("COLUMNS\n")
    A = model.A.tocsc()
    for j, nm in enumerate(model.names):
        if model.cost[j] != 0:
            out.append(f" {nm} obj {_fmt(model.cost[j])}\n")
        lo, hi = A.indptr[j], A.indptr[j + 1]
        for r, v in zip(A.indices[lo:hi], A.data[lo:hi]):
            out.append(f" {nm} {row_names[r]} {_fmt(v)}\n")
        if model.cost[j] == 0 and lo == hi:
            # keep the column declared even when it appears nowhere
            out.append(f" {nm} obj 0\n")
    out.append("RHS\n")
    # objective rhs holds the negated constant offset
    out.append(f" rhs obj {_fmt(-model.const)}\n")
    out.extend(f" rhs {rn} {_fmt(b)}\n" for rn, b in zip(row_names, model.rhs) if b != 0)
    out.append("BOUNDS\n")
    out.extend(f" UP bnd {nm} 1\n" for nm in model.names)
    out.append("ENDATA\n")
    return "".join(out)


def import_solution(model: LPModel, text: str) -> LPSolution:
    """Read ``name value`` lines (``#`` comments allowed) and feasibility-check them."""
    where = {nm: i for i, nm in enumerate(model.names)}
    x = np.full(model.num_vars, np.nan)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in where:
            raise LPUnsolvedError(f"solution line {lineno} not understood: {line!r}", status="io")
        try:
            x[where[parts[0]]] = float(parts[1])
        except ValueError:
            raise LPUnsolvedError(f"solution line {lineno} has a bad value: {parts[1]!r}", status="io") from None
    missing = np.flatnonzero(np.isnan(x))
    if missing.size:
        raise LPUnsolvedError(f"solution is missing {missing.size} variables, e.g. {model.names[missing[0]]}", status="io")
    return _solution(model, x, "imported")


def integral_point(model: LPModel, labels) -> np.ndarray:
    """0/1 split indicators of a partition, in model variable order."""
    lab = np.asarray(labels)
    iu, ju = np.triu_indices(model.n, 1)
    ti, tj, tk = triple_arrays(model.n)
    xp = (lab[iu] != lab[ju]).astype(float)
    xt = ~((lab[ti] == lab[tj]) & (lab[tj] == lab[tk]))
    return np.concatenate([xp, xt.astype(float)])
