"""Upper bounds on refined assortment revenue.

``omega``/``eta`` are the worst-case ratios between the personalized refined
optimum and the best revenue-ordered assortment.  ``praop_upper`` computes
the personalized optimum exactly for LC-MNL, and ``lp_upper`` solves a
linearization of the fractional program over ``x in [0, 1]^n``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .choice_core import Instance
from .exceptions import InvalidInstance, InvalidRatio, RAOPError
from .lcmnl import LCMNLModel
from .simplex import LinearProgram, solve_lp
from .taop import revenue_ordered

EXTRACTION_TOL = 1e-7
LP_VARIANTS = ("corrected", "printed")


class UndefinedBound(RAOPError, ValueError):
    pass


def omega(n, alpha):
    """``n - (n - 1) alpha^(1/(n-1))``; equals 1 when ``n == 1``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not alpha > 0:
        raise InvalidRatio(f"alpha must be positive, got {alpha!r}")
    if alpha > 1:
        raise InvalidRatio(f"alpha is a ratio of smallest to largest revenue, got {alpha!r}")
    if n == 1:
        return 1.0
    # (n-1)(1 - alpha^(1/(n-1))) written with expm1 so that huge n stays accurate
    return 1.0 - (n - 1) * math.expm1(math.log(alpha) / (n - 1))


def eta(q1, qn):
    """``1 + ln(qn / q1)``."""
    if not q1 > 0:
        raise UndefinedBound("eta is undefined when the top product never sells")
    if q1 > qn * (1 + 1e-12) or qn > 1 + 1e-12:
        raise ValueError("need 0 < q1 <= qn <= 1")
    return 1.0 + math.log(qn / q1)


def revenue_ratio(r):
    """``(count, alpha)`` over products with positive revenue.

    Zero-revenue products never add revenue, so they are left out of the
    ratio; ``count`` is the number of products the guarantee ranges over.
    """
    r = np.asarray(r, dtype=float)
    positive = r[r > 0]
    if positive.size == 0:
        return 0, None
    return positive.size, float(positive.min() / positive.max())


def _require_lcmnl(instance):
    if not isinstance(instance.model, LCMNLModel):
        raise InvalidInstance("this bound is only available for LC-MNL instances")
    return instance.model


def praop_segments(instance: Instance):
    """Per-segment optimal (revenue-ordered) assortments of an LC-MNL instance."""
    model = _require_lcmnl(instance)
    return [revenue_ordered(Instance(instance.r, model.segment_model(j))) for j in range(model.n_segments)]


def praop_upper(instance: Instance):
    """Personalized refined optimum ``sum_j theta_j R_j``.

    For MNL segments refined and binary optima coincide, so each ``R_j`` is
    the best revenue-ordered assortment of segment ``j``.
    """
    model = _require_lcmnl(instance)
    return float(sum(w * res.revenue for w, res in zip(model.theta, praop_segments(instance))))


def eta_lcmnl(instance: Instance):
    """``eta`` evaluated at the per-segment optimal assortments.

    ``q1`` is the probability that the top-revenue product sells and ``qn``
    the probability that anything sells, both averaged over segments.
    """
    model = _require_lcmnl(instance)
    top = int(instance.revenue_order()[0])
    segs = praop_segments(instance)
    q1 = float(sum(w * res.probabilities[top + 1] for w, res in zip(model.theta, segs)))
    qn = float(sum(w * (1.0 - res.no_purchase) for w, res in zip(model.theta, segs)))
    return eta(q1, min(qn, 1.0)), q1, qn


@dataclass
class LPBound:
    status: str
    bound: float | None
    exact_extraction: bool = False
    extracted_revenue: float | None = None
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    z: np.ndarray | None = None
    max_gap: float | None = None
    diagnostic: str = ""


def build_lp(instance: Instance, variant="corrected"):
    """Linear program over ``(x, y, z)`` with ``z[j, i]`` standing for ``x_i y_j``.

    Variables are laid out as ``x`` (n), ``y`` (m), then ``z`` segment-major.
    ``"printed"`` keeps the literal constraints ``z >= x`` and
    ``z <= x + y - 1`` (the one-product bound collapses to 0 under them), ``"corrected"``
    the McCormick envelope of ``z = x y`` over ``x in [0, 1]`` and
    ``y_j in [1 / (v0_j + sum_i v_ij), 1 / v0_j]``.
    """
    if variant not in LP_VARIANTS:
        raise ValueError(f"unknown LP variant {variant!r}")
    model = _require_lcmnl(instance)
    if model.uses_logspace:
        raise InvalidInstance("the LP bound needs attractions representable on the linear scale")
    v0, v = model.v0, model.v
    n, m = instance.n, model.n_segments
    nv = n + m + n * m

    def zi(j, i):
        return n + m + j * n + i

    c = np.zeros(nv)
    for j in range(m):
        for i in range(n):
            c[zi(j, i)] = model.theta[j] * instance.r[i] * v[j, i]

    rows, senses, rhs = [], [], []

    def add(coefs, sense, value):
        row = np.zeros(nv)
        for idx, coef in coefs:
            row[idx] += coef
        rows.append(row)
        senses.append(sense)
        rhs.append(value)

    for j in range(m):
        add([(n + j, v0[j])] + [(zi(j, i), v[j, i]) for i in range(n)], "=", 1.0)

    lb = np.zeros(nv)
    ub = np.full(nv, np.inf)
    ub[:n] = 1.0
    if variant == "printed":
        for j in range(m):
            for i in range(n):
                z, x, y = zi(j, i), i, n + j
                add([(z, 1.0), (x, -1.0)], ">=", 0.0)
                add([(z, 1.0), (x, -1.0 / v0[j])], "<=", 0.0)
                add([(z, 1.0), (x, -1.0), (y, -1.0)], "<=", -1.0)
                add([(z, 1.0), (x, -1.0 / v0[j]), (y, -1.0)], ">=", -1.0 / v0[j])
    else:
        y_lo = 1.0 / (v0 + v.sum(axis=1))
        y_hi = 1.0 / v0
        lb[n:n + m] = y_lo
        ub[n:n + m] = y_hi
        for j in range(m):
            lo, hi = y_lo[j], y_hi[j]
            for i in range(n):
                z, x, y = zi(j, i), i, n + j
                add([(z, 1.0), (x, -lo)], ">=", 0.0)
                add([(z, 1.0), (y, -1.0), (x, -hi)], ">=", -hi)
                add([(z, 1.0), (y, -1.0), (x, -lo)], "<=", -lo)
                add([(z, 1.0), (x, -hi)], "<=", 0.0)
    A = np.array(rows) if rows else np.zeros((0, nv))
    return LinearProgram(c, A, tuple(senses), np.array(rhs), lb, ub, maximize=True)


def lp_upper(instance: Instance, variant="corrected"):
    """Solve the LP relaxation; report the bound and whether ``z = x y`` held."""
    model = _require_lcmnl(instance)
    lp = build_lp(instance, variant)
    res = solve_lp(lp)
    if res.status != "optimal":
        return LPBound(res.status, None, diagnostic=f"LP {variant} variant ended with status {res.status}")
    n, m = instance.n, model.n_segments
    x = np.clip(res.x[:n], 0.0, 1.0)
    y = res.x[n:n + m]
    z = res.x[n + m:].reshape(m, n)
    gap = float(np.max(np.abs(z - y[:, None] * x[None, :]), initial=0.0))
    exact = gap <= EXTRACTION_TOL
    return LPBound(
        "optimal",
        res.objective,
        exact_extraction=exact,
        extracted_revenue=instance.revenue(x) if exact else None,
        x=x,
        y=y,
        z=z,
        max_gap=gap,
    )


@dataclass
class BoundReport:
    ro_revenue: float
    alpha: float | None
    omega_n: float | None
    omega_bound: float | None
    omega_k: float | None
    eta: float | None
    eta_bound: float | None
    praop: float | None
    lp: float | None
    lp_variant: str | None
    exact_extraction: bool
    lp_extracted_revenue: float | None
    diagnostics: list = field(default_factory=list)

    def present_bounds(self):
        names = ("omega_bound", "eta_bound", "praop", "lp")
        return {k: getattr(self, k) for k in names if getattr(self, k) is not None}

    def to_dict(self):
        return asdict(self)


def bound_report(instance: Instance, lp_variant="corrected", include_lp=True):
    ro = revenue_ordered(instance).revenue
    diagnostics = []
    count, alpha = revenue_ratio(instance.r)
    omega_n = omega_bound = omega_k = None
    if alpha is None:
        diagnostics.append("no product has positive revenue; omega undefined")
    else:
        omega_n = omega(count, alpha)
        omega_bound = omega_n * ro
        distinct = np.unique(instance.r[instance.r > 0]).size
        omega_k = omega(distinct, alpha)

    eta_value = eta_bound = praop = lp = extracted = None
    exact = False
    if isinstance(instance.model, LCMNLModel):
        praop = praop_upper(instance)
        try:
            eta_value = eta_lcmnl(instance)[0]
            eta_bound = eta_value * ro
        except UndefinedBound as exc:
            diagnostics.append(str(exc))
        if include_lp and not instance.model.uses_logspace:
            res = lp_upper(instance, lp_variant)
            if res.bound is None:
                diagnostics.append(res.diagnostic)
            lp, exact, extracted = res.bound, res.exact_extraction, res.extracted_revenue
    else:
        diagnostics.append("p-RAOP and LP bounds are only offered for LC-MNL instances")

    return BoundReport(
        ro_revenue=ro,
        alpha=alpha,
        omega_n=omega_n,
        omega_bound=omega_bound,
        omega_k=omega_k,
        eta=eta_value,
        eta_bound=eta_bound,
        praop=praop,
        lp=lp,
        lp_variant=lp_variant if lp is not None or include_lp else None,
        exact_extraction=exact,
        lp_extracted_revenue=extracted,
        diagnostics=diagnostics,
    )
