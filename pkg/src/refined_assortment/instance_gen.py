"""Synthetic LC-MNL instances and exact reconstructions of the worked examples.

Random instances follow the permutation scheme: for each segment a random
permutation of ``{0 (outside option), 1..n}`` is drawn and the item at
position ``k`` gets attraction ``epsilon**k``.  Prices are sampled from one
of several distributions, then affinely rescaled so the cheapest product
costs 1 and the most expensive ``1 / alpha``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats

from .choice_core import Binary, FiniteSet, FullInterval, Instance, RefinementDomain, log_refinement
from .exceptions import InvalidInstance
from .lcmnl import LCMNLModel
from .rcs import RCSModel

PRICE_DISTS = ("uniform", "normal", "multimodal", "exponential", "skewnormal")
ALIGNMENTS = ("random", "aligned", "anti")
ALPHA_TARGETS = (0.01, 0.1, 0.2)

# parameters for distributions only named, not specified, in the source
MULTIMODAL_COMPONENTS = ((30.0, 5.0), (70.0, 5.0))
SKEWNORMAL_SHAPE = 100.0


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    m: int
    epsilon: float = 0.5
    price_dist: str = "uniform"
    alpha_target: float = 0.1
    alignment: str = "random"
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidInstance("n and m must be positive")
        if not 0 < self.epsilon <= 1:
            raise InvalidInstance("epsilon must lie in (0, 1]")
        if not 0 < self.alpha_target < 1:
            raise InvalidInstance("alpha_target must lie in (0, 1)")
        if self.price_dist not in PRICE_DISTS:
            raise InvalidInstance(f"price_dist must be one of {PRICE_DISTS}")
        if self.alignment not in ALIGNMENTS:
            raise InvalidInstance(f"alignment must be one of {ALIGNMENTS}")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def sample_prices(dist, size, rng):
    if dist == "uniform":
        return rng.uniform(1.0, 10.0, size)
    if dist == "normal":
        return rng.normal(50.0, 10.0, size)
    if dist == "multimodal":
        (mu1, s1), (mu2, s2) = MULTIMODAL_COMPONENTS
        pick = rng.random(size) < 0.5
        return np.where(pick, rng.normal(mu1, s1, size), rng.normal(mu2, s2, size))
    if dist == "exponential":
        return rng.exponential(1.0, size)
    if dist == "skewnormal":
        return stats.skewnorm.rvs(SKEWNORMAL_SHAPE, size=size, random_state=rng)
    raise InvalidInstance(f"unknown price distribution {dist!r}")


def rescale_prices(prices, alpha):
    """Affine map sending ``min -> 1`` and ``max -> 1 / alpha``."""
    prices = np.asarray(prices, dtype=float)
    if prices.size == 1:
        return np.ones(1)
    lo, hi = prices.min(), prices.max()
    if hi == lo:
        raise InvalidInstance("cannot rescale constant prices")
    out = 1.0 + (prices - lo) * (1.0 / alpha - 1.0) / (hi - lo)
    # pin the extremes so that max/min equals 1/alpha to the last bit
    out[np.argmin(prices)] = 1.0
    out[np.argmax(prices)] = 1.0 / alpha
    return out


def gen_lcmnl(config: GeneratorConfig) -> Instance:
    rng = np.random.default_rng(config.seed)
    n, m, eps = config.n, config.m, config.epsilon
    v0 = np.empty(m)
    v = np.empty((m, n))
    for j in range(m):
        position = np.empty(n + 1, dtype=int)
        position[rng.permutation(n + 1)] = np.arange(n + 1)
        attraction = eps ** position.astype(float)
        v0[j], v[j] = attraction[0], attraction[1:]
    theta = np.full(m, 1.0 / m)
    theta[-1] = 1.0 - theta[:-1].sum()

    prices = rescale_prices(sample_prices(config.price_dist, n, rng), config.alpha_target)
    if config.alignment != "random":
        total = theta @ v
        by_attraction = np.argsort(total, kind="stable")
        ascending = np.sort(prices)
        if config.alignment == "anti":
            ascending = ascending[::-1]
        prices = np.empty(n)
        prices[by_attraction] = ascending

    metadata = {"generator": "lcmnl", "config": config.to_dict(), "seed": int(config.seed)}
    return Instance(prices, LCMNLModel(v0, v, theta), RefinementDomain.interval(n), metadata)


def derive_seed(master, *key):
    """64-bit seed for a sub-stream, e.g. ``derive_seed(master, cell, rep)``."""
    seq = np.random.SeedSequence([int(master), *[int(k) for k in key]])
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class TightConstructionParams:
    k: int
    n: int
    m: int
    gamma: float = 1e-3
    eps: float = 0.05
    eps1: float = 1e-3
    log_gamma: float | None = None

    def __post_init__(self):
        if not 1 <= self.k <= min(self.m, self.n):
            raise InvalidInstance("need 1 <= k <= min(m, n)")
        if not (0 < self.eps < 1 and 0 < self.eps1 < 1):
            raise InvalidInstance("eps and eps1 must lie in (0, 1)")
        if self.log_gamma is None and not 0 < self.gamma < 1:
            raise InvalidInstance("gamma must lie in (0, 1)")
        if self.log_gamma is not None and not self.log_gamma < 0:
            raise InvalidInstance("log_gamma must be negative")

    @property
    def ln_gamma(self):
        return self.log_gamma if self.log_gamma is not None else math.log(self.gamma)


def prop1_instance(params: TightConstructionParams):
    """LC-MNL instance on which refinement earns close to ``k`` times the
    traditional optimum, plus the refinement that achieves it.

    Segment ``j`` (1-based) values product ``i`` at ``(j + i eps1) ln(gamma)``
    when ``j >= i`` and at ``(i (1 + eps1) + M) ln(gamma)`` otherwise, with
    ``M = 1 / gamma``; the outside option sits at ``3 n ln(gamma)``.
    Revenues are ``eps^-(i-1)`` and weights ``eps^(j-1) - eps^j`` for
    ``j < k``, ``eps^(k-1)`` for segment ``k``, zero beyond.

    The refinement lowers product ``i``'s segment-independent utility to
    ``n ln(gamma)`` (never above its original value) and excludes products
    beyond ``k``.  It is returned as ``(x, log_x)``; ``log_x`` keeps full
    precision when ``x`` underflows.
    """
    k, n, m, eps, eps1 = params.k, params.n, params.m, params.eps, params.eps1
    lg = params.ln_gamma
    big = math.exp(-lg) if -lg < 700 else math.inf
    if not math.isfinite(big * lg) or not math.isfinite(3 * n * lg):
        raise InvalidInstance("gamma too small: log attractions overflow even in log space")

    log_v = np.empty((m, n))
    for j in range(1, m + 1):
        for i in range(1, n + 1):
            beta = (j - i) * lg if j >= i else big * lg
            log_v[j - 1, i - 1] = i * (1 + eps1) * lg + beta
    log_v0 = np.full(m, 3 * n * lg)
    r = np.array([eps ** -(i - 1) for i in range(1, n + 1)])
    theta = np.zeros(m)
    for j in range(1, k):
        theta[j - 1] = eps ** (j - 1) - eps**j
    theta[k - 1] = eps ** (k - 1)

    log_x = np.full(n, -np.inf)
    for i in range(1, k + 1):
        log_x[i - 1] = min(0.0, (n - i * (1 + eps1)) * lg)
    x = np.exp(log_x)

    model = LCMNLModel(log_v0, log_v, theta, scale="log")
    metadata = {"generator": "prop1", "params": asdict(params)}
    return Instance(r, model, RefinementDomain.interval(n), metadata), x, log_x


def prop2_instance(eps):
    """Two-product RCS where reversing the preference order nearly doubles revenue.

    Returns ``(original, reversed)`` instances: product 0 has attention
    ``eps`` and revenue ``1 / eps``, product 1 attention 1 and revenue 1;
    the original order prefers product 1.
    """
    if not 0 < eps < 1:
        raise InvalidInstance("eps must lie in (0, 1)")
    r = np.array([1.0 / eps, 1.0])
    model = RCSModel([eps, 1.0], [0, 1])
    meta = {"generator": "prop2", "eps": eps}
    domain = RefinementDomain.binary(2)
    return (
        Instance(r, model, domain, {**meta, "order": "original"}),
        Instance(r, model.reversed(), domain, {**meta, "order": "reversed"}),
    )


class MaxUtilityModel:
    """Deterministic maximum-utility customers, one utility vector per type.

    The outside option has utility 0.  Ties go to the outside option, then to
    the lowest product index.
    """

    kind = "max-utility"

    def __init__(self, utilities, theta):
        self.utilities = np.atleast_2d(np.asarray(utilities, dtype=float))
        self.theta = np.asarray(theta, dtype=float)

    @property
    def n_products(self):
        return self.utilities.shape[1]

    def refined_utilities(self, X):
        return self.utilities[None, :, :] + log_refinement(X)[:, None, :]

    def predict_proba(self, X):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        U = self.refined_utilities(X)
        full = np.concatenate((np.zeros(U.shape[:2] + (1,)), U), axis=2)
        choice = np.argmax(full, axis=2)
        out = np.zeros((X.shape[0], self.n_products + 1))
        for j, w in enumerate(self.theta):
            np.add.at(out, (np.arange(X.shape[0]), choice[:, j]), w)
        return out

    def to_params(self):
        return {"utilities": self.utilities.tolist(), "theta": self.theta.tolist()}

    @classmethod
    def from_params(cls, params):
        return cls(params["utilities"], params["theta"])

    def consumer_surplus(self, x):
        U = self.refined_utilities(np.asarray(x, dtype=float)[None, :])[0]
        return float(self.theta @ np.maximum(U.max(axis=1), 0.0))


def example2_instance():
    """Three products, two equally weighted MNL segments; product 2 may be refined."""
    model = LCMNLModel([1.0, 1.0], [[0.01, 100.0, 0.1], [100.0, 1000.0, 0.1]], [0.5, 0.5])
    domain = RefinementDomain((Binary(), FullInterval(), Binary()))
    return Instance([100.0, 65.0, 58.0], model, domain, {"generator": "example2"})


def example1_instance():
    """Two products, two deterministic customer types.

    The first type is read as valuing the products at (1.5, 1.6): with that
    reading the traditional optimum, the refined optimum and both consumer
    surplus figures all come out as described.
    """
    model = MaxUtilityModel([[1.5, 1.6], [-1.0, 1.6]], [0.3, 0.7])
    domain = RefinementDomain((Binary(), FiniteSet([0.0, 0.8, 1.0])))
    return Instance([3.5, 1.0], model, domain, {"generator": "example1"})


def verify_example1():
    """Traditional and refined optima of the deterministic two-type example."""
    from .raop import solve_sacp
    from .taop import enumerate_taop

    inst = example1_instance()
    taop = enumerate_taop(inst)
    raop = solve_sacp(inst)
    return {
        "taop_x": taop.x,
        "taop_revenue": taop.revenue,
        "taop_surplus": inst.model.consumer_surplus(taop.x),
        "raop_x": raop.x,
        "raop_revenue": raop.revenue,
        "raop_surplus": inst.model.consumer_surplus(raop.x),
    }


def example_instances():
    return {"example1": example1_instance(), "example2": example2_instance()}
