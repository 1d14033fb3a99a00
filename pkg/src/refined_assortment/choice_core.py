"""Shared domain types and model-agnostic revenue evaluation.

A refinement vector ``x`` lives in ``[0, 1]^n``; refining product ``i`` by
``x_i`` shifts its mean utility by ``ln(x_i)``.  ``x_i = 0`` removes the
product altogether and ``x_i = 1`` leaves it untouched.

Choice models plugged into an :class:`Instance` implement a small protocol:

``n_products``
    number of products.
``kind``
    short identifier used in serialized instances.
``predict_proba(X)``
    for a batch of refinement vectors (rows of ``X``) return an array of
    shape ``(N, n + 1)``; column 0 is the no-purchase probability.

They may also provide ``expected_revenue_batch(r, X)`` when revenue can be
computed more cheaply than through full probability vectors.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .exceptions import InvalidInstance, InvalidRefinement
from .validation import check_refinement, check_refinement_batch, check_revenues

#: Refined utility of an excluded product (``x_i = 0``).  ``exp(EXCLUDED)``
#: is exactly zero, so excluded products never receive probability mass.
EXCLUDED = -np.inf


@dataclass(frozen=True)
class DomainSpec:
    """Admissible refinement levels of a single product.

    ``kind`` is ``"binary"``, ``"interval"`` or ``"finite"``; only finite
    specs carry ``values``.
    """

    kind: str
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind == "binary":
            object.__setattr__(self, "values", (0.0, 1.0))
        elif self.kind == "interval":
            object.__setattr__(self, "values", ())
        elif self.kind == "finite":
            vals = tuple(sorted({float(v) for v in self.values}))
            if any(v < 0.0 or v > 1.0 for v in vals):
                raise InvalidInstance("finite domain values must lie in [0, 1]")
            if 0.0 not in vals or 1.0 not in vals:
                raise InvalidInstance("finite domains must contain both 0 and 1")
            if vals == (0.0, 1.0):
                object.__setattr__(self, "kind", "binary")
            object.__setattr__(self, "values", vals)
        else:
            raise InvalidInstance(f"unknown domain kind {self.kind!r}")

    @property
    def is_finite(self):
        return self.kind != "interval"

    def contains(self, t, tol=1e-12):
        if not self.is_finite:
            return -tol <= t <= 1 + tol
        return any(abs(t - v) <= tol for v in self.values)

    def nearest(self, t):
        if not self.is_finite:
            return float(min(max(t, 0.0), 1.0))
        vals = np.asarray(self.values)
        dist = np.abs(vals - t)
        # ties resolve to the larger admissible value
        best = np.flatnonzero(dist == dist.min())[-1]
        return float(vals[best])

    def to_json(self):
        if self.kind == "finite":
            return list(self.values)
        return self.kind


def Binary():
    return DomainSpec("binary")


def FullInterval():
    return DomainSpec("interval")


def FiniteSet(values):
    return DomainSpec("finite", tuple(values))


@dataclass(frozen=True)
class RefinementDomain:
    per_product: tuple[DomainSpec, ...]

    @classmethod
    def binary(cls, n):
        return cls(tuple(Binary() for _ in range(n)))

    @classmethod
    def interval(cls, n):
        return cls(tuple(FullInterval() for _ in range(n)))

    @classmethod
    def from_json(cls, items):
        specs = []
        for item in items:
            if isinstance(item, str):
                specs.append(DomainSpec(item))
            else:
                specs.append(FiniteSet(item))
        return cls(tuple(specs))

    def to_json(self):
        return [spec.to_json() for spec in self.per_product]

    def __len__(self):
        return len(self.per_product)

    def __getitem__(self, i):
        return self.per_product[i]

    def __iter__(self):
        return iter(self.per_product)

    @property
    def is_finite(self):
        return all(spec.is_finite for spec in self.per_product)

    @property
    def is_binary(self):
        return all(spec.kind == "binary" for spec in self.per_product)

    def contains(self, x, tol=1e-12):
        x = np.asarray(x, dtype=float)
        return len(x) == len(self) and all(
            spec.contains(float(t), tol) for spec, t in zip(self.per_product, x)
        )

    def cardinality(self):
        """Number of points of a finite domain (``inf`` if any factor is an interval)."""
        if not self.is_finite:
            return float("inf")
        return int(np.prod([len(spec.values) for spec in self.per_product], dtype=object))


@dataclass(frozen=True, eq=False)
class Instance:
    """Revenues, a choice model and a refinement domain.

    ``r`` is kept in the caller's product order; solvers that need products
    ranked by revenue use :meth:`revenue_order`.
    """

    r: np.ndarray
    model: Any
    domain: RefinementDomain = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = getattr(self.model, "n_products", None)
        if n is None:
            raise InvalidInstance("model does not expose n_products")
        r = check_revenues(self.r, n)
        r.setflags(write=False)
        object.__setattr__(self, "r", r)
        domain = self.domain
        if domain is None:
            domain = RefinementDomain.interval(n)
        elif not isinstance(domain, RefinementDomain):
            domain = RefinementDomain.from_json(domain)
        if len(domain) != n:
            raise InvalidInstance(f"domain has {len(domain)} entries, model has {n} products")
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def n(self):
        return self.r.shape[0]

    def revenue_order(self):
        """Product indices by decreasing revenue, ties by index."""
        return np.lexsort((np.arange(self.n), -self.r))

    def predict_proba(self, X):
        X = check_refinement_batch(X, self.n)
        return self.model.predict_proba(X)

    def revenue_batch(self, X):
        X = check_refinement_batch(X, self.n)
        batch = getattr(self.model, "expected_revenue_batch", None)
        if batch is not None:
            return batch(self.r, X)
        return self.model.predict_proba(X)[:, 1:] @ self.r

    def revenue(self, x):
        return float(self.revenue_batch(check_refinement(x, self.n)[None, :])[0])

    def with_domain(self, domain):
        return Instance(self.r, self.model, domain, self.metadata)


@dataclass(frozen=True, eq=False)
class SolveResult:
    """Outcome of a solver run.

    ``probabilities`` has length ``n + 1``: index 0 is the no-purchase
    probability, index ``i + 1`` the purchase probability of product ``i``.
    """

    x: np.ndarray
    revenue: float
    probabilities: np.ndarray
    solver: str
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @classmethod
    def evaluate(cls, instance, x, solver, elapsed=0.0, **extra):
        x = check_refinement(x, instance.n)
        probs = instance.predict_proba(x[None, :])[0]
        return cls(
            x=x,
            revenue=instance.revenue(x),
            probabilities=probs,
            solver=solver,
            elapsed=elapsed,
            extra=extra,
        )

    @property
    def no_purchase(self):
        return float(self.probabilities[0])

    @property
    def offered(self):
        return np.flatnonzero(self.x > 0)

    def to_dict(self):
        return {
            "solver": self.solver,
            "x": [float(t) for t in self.x],
            "revenue": float(self.revenue),
            "probabilities": [float(p) for p in self.probabilities[1:]],
            "no_purchase": self.no_purchase,
            "elapsed": float(self.elapsed),
            "extra": _jsonable(self.extra),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


class Timer:
    """Context manager recording wall time in ``elapsed``."""

    def __enter__(self):
        self._start = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._start
        return False


def refine_utilities(u, x):
    """Shift mean utilities by ``ln(x)``; ``x_i = 0`` maps to :data:`EXCLUDED`."""
    u = np.asarray(u, dtype=float)
    x = np.asarray(x, dtype=float)
    if u.shape != x.shape or u.ndim != 1:
        raise InvalidInstance(f"utility and refinement shapes differ: {u.shape} vs {x.shape}")
    x = check_refinement(x)
    with np.errstate(divide="ignore"):
        return u + np.log(x)


def log_refinement(X):
    """Elementwise ``ln(X)`` with zeros mapped to :data:`EXCLUDED`, without warnings."""
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(X, dtype=float))


def expected_revenue(instance, x):
    """``sum_i r_i p_i(x)`` under the instance's choice model."""
    x = np.asarray(x, dtype=float)
    if x.shape != (instance.n,):
        raise InvalidRefinement(f"x has shape {x.shape}, expected ({instance.n},)")
    return instance.revenue(x)


def project_to_domain(x, domain: RefinementDomain | Sequence[DomainSpec]):
    """Map each coordinate to its nearest admissible value (ties go up)."""
    x = np.asarray(x, dtype=float)
    if len(x) != len(domain):
        raise InvalidRefinement(f"x has length {len(x)}, domain has {len(domain)} entries")
    return np.array([spec.nearest(float(t)) for spec, t in zip(domain, x)])
