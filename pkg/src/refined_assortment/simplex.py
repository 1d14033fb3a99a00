"""Dense two-phase tableau simplex.

Pivoting follows Dantzig's most-negative reduced cost until the number of
degenerate pivots exceeds ``5 * (rows + cols)``; from then on Bland's
smallest-index rule is used, which cannot cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TOL = 1e-9
MAX_ITER = 50_000

_SENSES = {"<=": "<=", "=": "=", "==": "=", ">=": ">="}


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``max`` (or ``min``) ``c @ x`` subject to ``A x (senses) b`` and ``lb <= x <= ub``."""

    c: np.ndarray
    A: np.ndarray
    senses: tuple[str, ...]
    b: np.ndarray
    lb: np.ndarray | None = None
    ub: np.ndarray | None = None
    maximize: bool = True

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        A = np.asarray(self.A, dtype=float).reshape(-1, c.shape[0])
        b = np.asarray(self.b, dtype=float)
        senses = tuple(_SENSES[s] for s in self.senses)
        lb = np.zeros_like(c) if self.lb is None else np.asarray(self.lb, dtype=float)
        ub = np.full_like(c, np.inf) if self.ub is None else np.asarray(self.ub, dtype=float)
        if A.shape[0] != b.shape[0] or len(senses) != b.shape[0]:
            raise ValueError("constraint matrix, senses and right-hand side disagree in length")
        if lb.shape != c.shape or ub.shape != c.shape:
            raise ValueError("bounds must have one entry per variable")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
            raise ValueError("LP data must be finite")
        if np.any(lb > ub):
            raise ValueError("lower bound exceeds upper bound")
        for name, value in (("c", c), ("A", A), ("b", b), ("senses", senses), ("lb", lb), ("ub", ub)):
            object.__setattr__(self, name, value)

    @property
    def n_vars(self):
        return self.c.shape[0]


@dataclass
class LPResult:
    status: str
    objective: float | None = None
    x: np.ndarray | None = None
    iterations: int = 0
    bland: bool = False
    info: dict = field(default_factory=dict)


class _Pivoting:
    def __init__(self, limit, max_iter):
        self.degenerate = 0
        self.limit = limit
        self.bland = False
        self.iterations = 0
        self.max_iter = max_iter


def _pivot(T, r, j):
    T[r] /= T[r, j]
    col = T[:, j].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])


def _run(T, basis, cost, allowed, state, tol):
    """Minimize ``cost`` over the tableau; returns a status string."""
    allowed = np.asarray(allowed)
    while True:
        reduced = cost[allowed] - cost[basis] @ T[:, allowed]
        entering = np.flatnonzero(reduced < -tol)
        if entering.size == 0:
            return "optimal"
        if state.bland:
            j = int(allowed[entering[0]])
        else:
            j = int(allowed[entering[np.argmin(reduced[entering])]])
        column = T[:, j]
        rows = np.flatnonzero(column > tol)
        if rows.size == 0:
            return "unbounded"
        ratios = T[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + tol]
        r = int(tied[np.argmin(np.asarray(basis)[tied])])
        if best <= tol:
            state.degenerate += 1
            if state.degenerate > state.limit:
                state.bland = True
        _pivot(T, r, j)
        basis[r] = j
        state.iterations += 1
        if state.iterations >= state.max_iter:
            return "iteration_limit"


def _standard_form(lp):
    """Rewrite as ``min c'z, A z (senses) b, z >= 0`` with ``x = shift + M z``."""
    k = lp.n_vars
    cols, shift = [], np.zeros(k)
    extra_rows = []
    for j in range(k):
        lo, hi = lp.lb[j], lp.ub[j]
        if np.isfinite(lo):
            shift[j] = lo
            cols.append((j, 1.0))
            if np.isfinite(hi):
                extra_rows.append((len(cols) - 1, hi - lo))
        elif np.isfinite(hi):
            shift[j] = hi
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    M = np.zeros((k, len(cols)))
    for col, (j, sign) in enumerate(cols):
        M[j, col] = sign
    A = lp.A @ M
    b = lp.b - lp.A @ shift
    senses = list(lp.senses)
    if extra_rows:
        U = np.zeros((len(extra_rows), len(cols)))
        for row, (col, width) in enumerate(extra_rows):
            U[row, col] = 1.0
        A = np.vstack((A, U))
        b = np.concatenate((b, [w for _, w in extra_rows]))
        senses += ["<="] * len(extra_rows)
    sign = -1.0 if lp.maximize else 1.0
    c = sign * (lp.c @ M)
    return c, A, senses, b, M, shift


def solve_lp(lp: LinearProgram, tol=TOL, max_iter=MAX_ITER) -> LPResult:
    """Solve ``lp``; status is ``optimal``, ``infeasible``, ``unbounded`` or ``iteration_limit``."""
    c, A, senses, b, M, shift = _standard_form(lp)
    rows, nz = A.shape
    flip = b < 0
    A[flip] *= -1
    b = np.where(flip, -b, b)
    senses = [{"<=": ">=", ">=": "<=", "=": "="}[s] if f else s for s, f in zip(senses, flip)]

    n_slack = sum(s != "=" for s in senses)
    n_art = sum(s != "<=" for s in senses)
    ncol = nz + n_slack + n_art
    T = np.zeros((rows, ncol + 1))
    T[:, :nz] = A
    T[:, -1] = b
    basis = [0] * rows
    s_col, a_col = nz, nz + n_slack
    for i, s in enumerate(senses):
        if s == "<=":
            T[i, s_col] = 1.0
            basis[i] = s_col
            s_col += 1
        else:
            if s == ">=":
                T[i, s_col] = -1.0
                s_col += 1
            T[i, a_col] = 1.0
            basis[i] = a_col
            a_col += 1
    art = np.arange(nz + n_slack, ncol)
    state = _Pivoting(5 * (rows + ncol), max_iter)

    if n_art:
        phase1 = np.zeros(ncol)
        phase1[art] = 1.0
        status = _run(T, basis, phase1, np.arange(ncol), state, tol)
        if status == "iteration_limit":
            return LPResult(status, iterations=state.iterations, bland=state.bland)
        infeasibility = float(phase1[basis] @ T[:, -1])
        if infeasibility > tol * max(1.0, float(np.abs(b).max(initial=0.0))):
            return LPResult("infeasible", iterations=state.iterations, bland=state.bland,
                            info={"phase1_objective": infeasibility})
        keep = np.ones(rows, dtype=bool)
        for i in range(rows):
            if basis[i] >= nz + n_slack:
                candidates = np.flatnonzero(np.abs(T[i, :nz + n_slack]) > tol)
                if candidates.size:
                    _pivot(T, i, int(candidates[0]))
                    basis[i] = int(candidates[0])
                else:
                    keep[i] = False
        T = np.delete(T[keep], art, axis=1)
        basis = [bj for bj, kp in zip(basis, keep) if kp]
        ncol = nz + n_slack

    cost = np.zeros(ncol)
    cost[:nz] = c
    status = _run(T, basis, cost, np.arange(ncol), state, tol)
    if status != "optimal":
        return LPResult(status, iterations=state.iterations, bland=state.bland)
    z = np.zeros(ncol)
    z[basis] = T[:, -1]
    x = shift + M @ z[:nz]
    return LPResult("optimal", float(lp.c @ x), x, state.iterations, state.bland)
