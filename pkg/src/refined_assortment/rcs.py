"""Random consideration set model and the best/worst-order revenue recursions.

Preference orders are stored as permutations ``pref`` of product indices:
``pref[k]`` is the product at preference position ``k`` and *later
positions are more preferred*.  A customer considers each offered product
independently with its attention probability and buys the most preferred
product it considered.
"""

from __future__ import annotations

import numpy as np

from .choice_core import SolveResult, Timer
from .exceptions import InvalidInstance, SizeLimit
from .validation import check_binary, check_refinement_batch, check_revenues

ENUM_CAP = 25


class RCSModel:
    kind = "rcs"

    def __init__(self, lam, pref=None):
        lam = np.asarray(lam, dtype=float)
        if lam.ndim != 1:
            raise InvalidInstance("attention probabilities must be a vector")
        if np.any(lam <= 0) or np.any(lam > 1) or not np.all(np.isfinite(lam)):
            raise InvalidInstance("attention probabilities must lie in (0, 1]")
        n = lam.shape[0]
        pref = np.arange(n) if pref is None else np.asarray(pref, dtype=int)
        if pref.shape != (n,) or not np.array_equal(np.sort(pref), np.arange(n)):
            raise InvalidInstance("pref must be a permutation of the product indices")
        self.lam = lam
        self.pref = pref
        self.lam.setflags(write=False)
        self.pref.setflags(write=False)

    @property
    def n_products(self):
        return self.lam.shape[0]

    def reversed(self):
        return RCSModel(self.lam, self.pref[::-1].copy())

    def predict_proba(self, X):
        X = check_binary(check_refinement_batch(X, self.n_products), name="RCS assortment")
        out = np.zeros((X.shape[0], self.n_products + 1))
        unconsidered = np.ones(X.shape[0])
        for i in self.pref[::-1]:
            attention = self.lam[i] * X[:, i]
            out[:, i + 1] = attention * unconsidered
            unconsidered = unconsidered * (1.0 - attention)
        out[:, 0] = unconsidered
        return out

    def to_params(self):
        return {
            "lambda": self.lam.tolist(),
            "pref": self.pref.tolist(),
            "convention": "later index in pref = more preferred",
        }

    @classmethod
    def from_params(cls, params):
        return cls(params["lambda"], params.get("pref"))

    def __repr__(self):
        return f"RCSModel(n={self.n_products})"


def rcs_choice_probabilities(model: RCSModel, S):
    """``[q_0, q_1, ..., q_n]`` when the product subset ``S`` is offered."""
    x = np.zeros(model.n_products)
    x[list(S)] = 1.0
    return model.predict_proba(x[None, :])[0]


def best_order_revenue(lam, r, *, clamp=False):
    """Return ``(H_n, trace)`` with ``trace = [H_0, ..., H_n]``.

    Products are indexed by non-decreasing revenue and preferred in that
    order.  ``clamp=True`` applies the same positive-part as the worst-order
    recursion; for non-decreasing revenues the two versions agree.
    """
    lam, r = _check_sorted_pair(lam, r)
    trace = [0.0]
    for k in range(len(lam)):
        step = r[k] - trace[-1]
        if clamp:
            step = max(step, 0.0)
        trace.append(trace[-1] + lam[k] * step)
    return trace[-1], np.array(trace)


def worst_order_revenue(lam, r):
    """``G_n``: products added from the highest index down, each only if it helps."""
    lam, r = _check_sorted_pair(lam, r)
    g = 0.0
    for i in range(len(lam) - 1, -1, -1):
        g += lam[i] * max(r[i] - g, 0.0)
    return g


def f_sequences(lam):
    """Auxiliary sequences of the factor-two argument.

    Returns ``(f, f_hat)`` where ``f[k - 1] = f(k)`` for ``k = 1..n`` and
    ``f_hat[k - 1] = f_hat(k)`` for ``k = 1..max(1, n - 1)`` (``f_hat(k)``
    needs ``lambda_{k+1}``).
    """
    lam = np.asarray(lam, dtype=float)
    n = lam.shape[0]
    f = np.zeros(n)
    for k in range(1, n):
        f[k] = (1.0 - lam[k]) * (lam[k - 1] + f[k - 1])
    f_hat = np.zeros(max(1, n - 1))
    for k in range(1, n - 1):
        f_hat[k] = (1.0 - lam[k + 1]) * (lam[k] + f_hat[k - 1])
    return f, f_hat


def rcs_optimal_assortment(model: RCSModel, r, *, enum_cap=ENUM_CAP):
    """Best subset under the model's fixed preference order, by enumeration."""
    n = model.n_products
    r = check_revenues(r, n)
    if n > enum_cap:
        raise SizeLimit(f"subset enumeration limited to n <= {enum_cap}, got n = {n}")
    from .choice_core import Instance
    from .taop import enumerate_taop

    with Timer() as t:
        res = enumerate_taop(Instance(r, model), enum_cap=enum_cap)
    return SolveResult(res.x, res.revenue, res.probabilities, "rcs-enum", t.elapsed, res.extra)


def _check_sorted_pair(lam, r):
    lam = np.asarray(lam, dtype=float)
    r = np.asarray(r, dtype=float)
    if lam.shape != r.shape or lam.ndim != 1:
        raise InvalidInstance("lambda and r must be vectors of equal length")
    if np.any(np.diff(r) < 0):
        raise InvalidInstance("revenues must be sorted in non-decreasing order")
    return lam, r
