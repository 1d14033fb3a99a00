"""Scikit-learn style wrappers around the solvers.

Each estimator is configured through constructor keywords and solves one
instance per ``fit`` call::

    est = RO2(grid_points=512).fit(instance)
    est.x_, est.revenue_

``score`` returns the expected revenue of the fitted refinement on another
instance with the same products (e.g. perturbed prices), and
``predict_proba`` its choice probabilities.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .choice_core import Instance, SolveResult
from .exceptions import UnknownSolver
from .raop import GRID_POINTS, LINE_TOL, SACP_LIMIT, grid_oracle_raop, ro1, ro2, ro3, solve_sacp
from .taop import ENUM_CAP, enumerate_taop, revenue_ordered
from .validation import check_is_fitted


class AssortmentSolver(BaseEstimator):
    """Base class: subclasses implement ``_solve(instance) -> SolveResult``."""

    name = "base"

    def fit(self, instance: Instance, y=None):
        if not isinstance(instance, Instance):
            raise TypeError(f"fit expects an Instance, got {type(instance).__name__}")
        result = self._solve(instance)
        self.result_ = result
        self.x_ = result.x
        self.revenue_ = result.revenue
        self.n_products_ = instance.n
        return self

    def _solve(self, instance):
        raise NotImplementedError

    def _check_instance(self, instance):
        check_is_fitted(self, "result_")
        if instance.n != self.n_products_:
            raise ValueError(f"fitted on {self.n_products_} products, got {instance.n}")

    def predict_proba(self, instance: Instance):
        self._check_instance(instance)
        return instance.predict_proba(self.x_[None, :])[0]

    def score(self, instance: Instance, y=None):
        self._check_instance(instance)
        return instance.revenue(self.x_)


class RevenueOrdered(AssortmentSolver):
    name = "ro"

    def _solve(self, instance):
        return revenue_ordered(instance)


class _LineSearchSolver(AssortmentSolver):
    def __init__(self, grid_points=GRID_POINTS, line_tol=LINE_TOL):
        self.grid_points = grid_points
        self.line_tol = line_tol


class RO1(_LineSearchSolver):
    name = "ro1"

    def _solve(self, instance):
        return ro1(instance, self.grid_points, self.line_tol)


class RO2(_LineSearchSolver):
    name = "ro2"

    def _solve(self, instance):
        return ro2(instance, self.grid_points, self.line_tol)


class RO3(_LineSearchSolver):
    name = "ro3"

    def _solve(self, instance):
        return ro3(instance, self.grid_points, self.line_tol)


class TAOPEnumerator(AssortmentSolver):
    name = "enum"

    def __init__(self, enum_cap=ENUM_CAP, n_jobs=1):
        self.enum_cap = enum_cap
        self.n_jobs = n_jobs

    def _solve(self, instance):
        return enumerate_taop(instance, enum_cap=self.enum_cap, n_jobs=self.n_jobs)


class GridOracle(_LineSearchSolver):
    name = "grid"

    def __init__(self, per_axis=101, grid_points=GRID_POINTS, line_tol=LINE_TOL):
        super().__init__(grid_points, line_tol)
        self.per_axis = per_axis

    def _solve(self, instance):
        return grid_oracle_raop(instance, self.per_axis, self.grid_points, self.line_tol)


class SACPSolver(AssortmentSolver):
    name = "sacp"

    def __init__(self, schedule=None, limit=SACP_LIMIT):
        self.schedule = schedule
        self.limit = limit

    def _solve(self, instance):
        return solve_sacp(instance, self.schedule, self.limit)


SOLVERS = {cls.name: cls for cls in (RevenueOrdered, RO1, RO2, RO3, TAOPEnumerator, GridOracle, SACPSolver)}


def make_solver(name, **params):
    """Instantiate a registered solver, ignoring parameters it does not take."""
    try:
        cls = SOLVERS[name]
    except KeyError:
        raise UnknownSolver(f"unknown solver {name!r}; choose from {sorted(SOLVERS)}") from None
    accepted = cls._get_param_names()
    return cls(**{k: v for k, v in params.items() if k in accepted})


def solve(instance: Instance, name, **params) -> SolveResult:
    return make_solver(name, **params).fit(instance).result_


def dominance_chain(results, tol=LINE_TOL):
    """Check ``ro <= ro1 <= ro2`` and ``ro1 <= ro3`` among the solvers present.

    Returns a dict mapping each checked pair ``"a<=b"`` to a bool.
    """
    revenue = {name: res.revenue for name, res in results.items() if isinstance(res, SolveResult)}
    pairs = [("ro", "ro1"), ("ro1", "ro2"), ("ro1", "ro3"), ("ro", "ro2"), ("ro", "ro3"), ("ro", "enum")]
    out = {}
    for a, b in pairs:
        if a in revenue and b in revenue:
            out[f"{a}<={b}"] = bool(revenue[a] <= revenue[b] + tol * max(1.0, abs(revenue[b])))
    return out


def best_feasible(results):
    values = [res.revenue for res in results.values() if isinstance(res, SolveResult)]
    return max(values) if values else np.nan
