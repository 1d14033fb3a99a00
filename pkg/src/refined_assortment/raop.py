"""Refined revenue-ordered heuristics and exact small-scale RAOP solvers.

All heuristics work on products ranked by decreasing revenue (ties by
index).  Each one-variable subproblem is solved by :func:`line_maximize`,
which respects the refinement domain of the free product: finite menus are
scanned exhaustively, interval coordinates get a uniform grid followed by a
golden-section polish around the best grid cell.  The LC-MNL revenue along
a line is a sum of linear-fractional terms and may have several local
maxima, which is why the grid comes first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .choice_core import Instance, RefinementDomain, SolveResult, Timer
from .exceptions import InvalidInstance, SizeLimit
from .validation import check_refinement

GRID_POINTS = 256
LINE_TOL = 1e-9
GREEDY_MIN_GAIN = 1e-12
GRID_ORACLE_MAX_N = 3
GRID_ORACLE_MAX_AXIS = 201
SACP_LIMIT = 10**7

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class LineProblem:
    """Maximize ``objective(t)`` over one coordinate.

    ``objective`` is vectorized: it maps an array of ``t`` values to an array
    of objective values.  ``candidates`` restricts ``t`` to a finite menu;
    ``None`` means the whole interval ``[0, 1]``.
    """

    objective: Callable[[np.ndarray], np.ndarray]
    candidates: tuple[float, ...] | None = None
    base: np.ndarray | None = None
    index: int | None = None

    @classmethod
    def from_instance(cls, instance: Instance, base, index):
        base = check_refinement(base, instance.n).copy()
        if not 0 <= index < instance.n:
            raise InvalidInstance(f"free coordinate {index} out of range")

        def objective(t):
            t = np.atleast_1d(np.asarray(t, dtype=float))
            X = np.repeat(base[None, :], t.shape[0], axis=0)
            X[:, index] = t
            return instance.revenue_batch(X)

        spec = instance.domain[index]
        return cls(objective, spec.values if spec.is_finite else None, base, index)

    def value(self, t):
        return float(self.objective(np.array([t]))[0])


def line_maximize(problem: LineProblem, grid_points=GRID_POINTS, tol=LINE_TOL):
    """Return ``(t_best, value)``; the endpoints 0 and 1 are always candidates."""
    if grid_points < 3:
        raise ValueError("grid_points must be at least 3")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if problem.candidates is not None:
        ts = np.asarray(problem.candidates, dtype=float)
        values = problem.objective(ts)
        k = int(np.argmax(values))
        return float(ts[k]), float(values[k])

    ts = np.linspace(0.0, 1.0, grid_points)
    values = problem.objective(ts)
    k = int(np.argmax(values))
    best_t, best_v = float(ts[k]), float(values[k])

    a, b = float(ts[max(k - 1, 0)]), float(ts[min(k + 1, grid_points - 1)])
    c, d = b - _INV_PHI * (b - a), a + _INV_PHI * (b - a)
    fc, fd = problem.value(c), problem.value(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = problem.value(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = problem.value(d)
    for t, v in ((c, fc), (d, fd)):
        if v > best_v:
            best_t, best_v = t, v
    return best_t, best_v


def _optimize_coordinate(instance, x, index, grid_points, tol):
    """Line-optimize ``x[index]``; return the candidate vector and its revenue."""
    t, _ = line_maximize(LineProblem.from_instance(instance, x, index), grid_points, tol)
    y = x.copy()
    y[index] = t
    return y, instance.revenue(y)


def _prefix(instance, order, p):
    x = np.zeros(instance.n)
    x[order[:p]] = 1.0
    return x


def _empty_result(instance, solver, elapsed):
    return SolveResult.evaluate(instance, np.zeros(instance.n), solver, elapsed)


def ro1(instance: Instance, grid_points=GRID_POINTS, tol=LINE_TOL):
    """Best revenue-ordered prefix with the next product partially offered."""
    with Timer() as t:
        order = instance.revenue_order()
        best_x, best_v, best_p = np.zeros(instance.n), -np.inf, 0
        for p, i in enumerate(order):
            x, v = _optimize_coordinate(instance, _prefix(instance, order, p), i, grid_points, tol)
            if v > best_v:
                best_x, best_v, best_p = x, v, p
    if instance.n == 0:
        return _empty_result(instance, "ro1", t.elapsed)
    return SolveResult.evaluate(instance, best_x, "ro1", t.elapsed, start=int(order[best_p]))


def ro2(instance: Instance, grid_points=GRID_POINTS, tol=LINE_TOL):
    """For every prefix, sweep the remaining products in revenue order.

    Each coordinate is optimized with all earlier ones frozen; a new level
    is kept only if it does not lower revenue, so every candidate dominates
    the corresponding RO1 candidate.
    """
    with Timer() as t:
        order = instance.revenue_order()
        best_x, best_v, best_p = np.zeros(instance.n), -np.inf, 0
        for p in range(instance.n):
            x, v = _optimize_coordinate(instance, _prefix(instance, order, p), order[p], grid_points, tol)
            for k in order[p + 1:]:
                y, w = _optimize_coordinate(instance, x, k, grid_points, tol)
                if w >= v:
                    x, v = y, w
            if v > best_v:
                best_x, best_v, best_p = x, v, p
    if instance.n == 0:
        return _empty_result(instance, "ro2", t.elapsed)
    return SolveResult.evaluate(instance, best_x, "ro2", t.elapsed, start=int(order[best_p]))


def ro3(instance: Instance, grid_points=GRID_POINTS, tol=LINE_TOL, min_gain=GREEDY_MIN_GAIN):
    """Greedy variant: from each prefix, repeatedly commit the single partial
    product whose one-variable optimum raises revenue the most."""
    with Timer() as t:
        order = instance.revenue_order()
        best_x, best_v, best_p = np.zeros(instance.n), -np.inf, 0
        for p in range(instance.n):
            x = _prefix(instance, order, p)
            v = instance.revenue(x)
            untouched = list(order[p:])
            while untouched:
                gains = []
                for k in untouched:
                    y, w = _optimize_coordinate(instance, x, k, grid_points, tol)
                    gains.append((w - v, y, w, k))
                gain, y, w, k = max(gains, key=lambda g: g[0])
                if gain <= min_gain:
                    break
                x, v = y, w
                untouched.remove(k)
            if v > best_v:
                best_x, best_v, best_p = x, v, p
    if instance.n == 0:
        return _empty_result(instance, "ro3", t.elapsed)
    return SolveResult.evaluate(instance, best_x, "ro3", t.elapsed, start=int(order[best_p]))


def grid_oracle_raop(instance: Instance, per_axis=101, grid_points=GRID_POINTS, tol=LINE_TOL, max_sweeps=100):
    """Exhaustive grid over the refinement box, then coordinate ascent.

    Finite-menu coordinates use their menu instead of the uniform grid.  The
    result is a feasible point, hence a lower bound on the RAOP optimum.
    """
    n = instance.n
    if n > GRID_ORACLE_MAX_N or per_axis > GRID_ORACLE_MAX_AXIS:
        raise SizeLimit(
            f"grid oracle limited to n <= {GRID_ORACLE_MAX_N} and per_axis <= {GRID_ORACLE_MAX_AXIS}"
        )
    if per_axis < 2:
        raise ValueError("per_axis must be at least 2")
    with Timer() as t:
        axes = [
            np.asarray(spec.values) if spec.is_finite else np.linspace(0.0, 1.0, per_axis)
            for spec in instance.domain
        ]
        if n == 0:
            return _empty_result(instance, "grid", 0.0)
        mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
        values = instance.revenue_batch(mesh)
        x = mesh[int(np.argmax(values))].copy()
        v = instance.revenue(x)
        for _ in range(max_sweeps):
            improved = False
            for i in range(n):
                y, w = _optimize_coordinate(instance, x, i, grid_points, tol)
                if w > v:
                    improved = improved or w > v + 1e-15
                    x, v = y, w
            if not improved:
                break
    return SolveResult.evaluate(instance, x, "grid", t.elapsed)


@dataclass(frozen=True)
class SACPSchedule:
    """Per-product menus of refinement levels for the sequential commitment problem.

    ``menus[i]`` is sorted ascending and contains 0 (never offered) and 1
    (offered from the first period).  ``periods[i]`` maps every nonzero level
    to the first period in which the product would be offered.
    """

    menus: tuple[tuple[float, ...], ...]
    periods: tuple[dict, ...]

    @classmethod
    def from_utilities(cls, u):
        """Build menus from mean utilities ``u[i, s]`` that decrease over periods ``s``.

        Offering product ``i`` first in period ``s`` leaves forward-looking
        customers with utility ``u[i, s]``, i.e. refinement ``exp(u[i, s] - u[i, 0])``.
        """
        u = np.atleast_2d(np.asarray(u, dtype=float))
        if np.any(np.diff(u, axis=1) > 0):
            raise InvalidInstance("period utilities must be non-increasing over time")
        menus, periods = [], []
        for row in u:
            levels = np.exp(row - row[0])
            period = {}
            for s, level in enumerate(levels, start=1):
                period.setdefault(float(level), s)
            menus.append(tuple(sorted({0.0, *period})))
            periods.append(period)
        return cls(tuple(menus), tuple(periods))

    @classmethod
    def from_domain(cls, domain: RefinementDomain):
        if not domain.is_finite:
            raise InvalidInstance("SACP needs a finite menu for every product")
        menus, periods = [], []
        for spec in domain:
            levels = sorted((v for v in spec.values if v > 0), reverse=True)
            menus.append(tuple(spec.values))
            periods.append({float(v): s for s, v in enumerate(levels, start=1)})
        return cls(tuple(menus), tuple(periods))

    def size(self):
        return math.prod(len(m) for m in self.menus)

    def period_of(self, x):
        return [None if t == 0 else self.periods[i].get(float(t)) for i, t in enumerate(x)]


def solve_sacp(instance: Instance, schedule: SACPSchedule | None = None, limit=SACP_LIMIT):
    """Exact RAOP over a finite product of menus, by enumeration."""
    if schedule is None:
        schedule = SACPSchedule.from_domain(instance.domain)
    if len(schedule.menus) != instance.n:
        raise InvalidInstance("schedule must have one menu per product")
    total = schedule.size()
    if total > limit:
        raise SizeLimit(f"SACP enumeration of {total} points exceeds the limit {limit}")
    with Timer() as t:
        menus = [np.asarray(m, dtype=float) for m in schedule.menus]
        shape = tuple(len(m) for m in menus)
        best_v, best_x = -np.inf, np.zeros(instance.n)
        for start in range(0, total, 1 << 16):
            flat = np.arange(start, min(start + (1 << 16), total))
            idx = np.unravel_index(flat, shape) if instance.n else ()
            X = np.column_stack([m[k] for m, k in zip(menus, idx)]) if instance.n else np.zeros((1, 0))
            values = instance.revenue_batch(X)
            k = int(np.argmax(values))
            if values[k] > best_v:
                best_v, best_x = float(values[k]), X[k].copy()
    return SolveResult.evaluate(instance, best_x, "sacp", t.elapsed, periods=schedule.period_of(best_x))
