"""Multinomial logit and latent-class MNL evaluation.

Attractions ``v = exp(u)`` are the canonical parameterization.  Models whose
log attractions exceed :data:`LOG_SWITCH` in magnitude are evaluated with a
log-sum-exp path so that constructions with extreme utilities stay exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .choice_core import log_refinement
from .exceptions import InvalidInstance
from .validation import check_binary, check_refinement, check_refinement_batch, check_revenues, check_weights

LOG_SWITCH = 500.0
_CHUNK = 1 << 15


@dataclass(frozen=True, eq=False)
class MNLSegment:
    v0: float
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v, dtype=float)
        if v.ndim != 1:
            raise InvalidInstance("segment attractions must be a vector")
        if not self.v0 > 0 or np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise InvalidInstance("MNL attractions must be positive and finite")
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "v0", float(self.v0))

    @property
    def n_products(self):
        return self.v.shape[0]

    def as_model(self):
        return LCMNLModel([self.v0], self.v[None, :], [1.0])


def mnl_probabilities(seg: MNLSegment, x):
    """Choice probabilities ``[p_0, p_1, ..., p_n]`` of a single MNL segment."""
    x = check_refinement(x, seg.n_products)
    w = seg.v * x
    den = seg.v0 + w.sum()
    return np.concatenate(([seg.v0 / den], w / den))


class LCMNLModel:
    """Finite mixture of MNL segments.

    Parameters
    ----------
    v0 : array of shape (m,)
        Outside-option attraction of each segment (log attraction when
        ``scale="log"``).
    v : array of shape (m, n)
        Product attractions per segment (or their logs).
    theta : array of shape (m,)
        Segment weights, summing to one.
    scale : {"linear", "log"}
    """

    kind = "lcmnl"

    def __init__(self, v0, v, theta, scale="linear"):
        v0 = np.atleast_1d(np.asarray(v0, dtype=float))
        v = np.atleast_2d(np.asarray(v, dtype=float))
        if v0.ndim != 1 or v.ndim != 2 or v.shape[0] != v0.shape[0]:
            raise InvalidInstance(f"inconsistent LC-MNL shapes: v0 {v0.shape}, v {v.shape}")
        self.theta = check_weights(theta, v.shape[0])
        if scale == "linear":
            if np.any(v0 <= 0) or np.any(v <= 0) or not (np.all(np.isfinite(v)) and np.all(np.isfinite(v0))):
                raise InvalidInstance("attractions must be positive and finite")
            self.log_v0 = np.log(v0)
            self.log_v = np.log(v)
            self._v0, self._v = v0, v
        elif scale == "log":
            if np.any(np.isnan(v)) or not np.all(np.isfinite(v0)) or np.any(v == np.inf):
                raise InvalidInstance("log attractions must be finite (or -inf for an unreachable product)")
            self.log_v0, self.log_v = v0, v
            self._v0 = self._v = None
        else:
            raise InvalidInstance(f"unknown scale {scale!r}")
        self.scale = scale
        finite = self.log_v[np.isfinite(self.log_v)]
        self.uses_logspace = self._v is None and (
            not np.all(np.isfinite(self.log_v))
            or bool(np.any(np.abs(self.log_v0) > LOG_SWITCH))
            or bool(np.any(np.abs(finite) > LOG_SWITCH))
        )
        for arr in (self.theta, self.log_v0, self.log_v):
            arr.setflags(write=False)

    @property
    def n_products(self):
        return self.log_v.shape[1]

    @property
    def n_segments(self):
        return self.log_v.shape[0]

    @property
    def v0(self):
        return self._linear()[0]

    @property
    def v(self):
        return self._linear()[1]

    def _linear(self):
        if self._v is None:
            if self.uses_logspace:
                raise InvalidInstance("attractions are not representable on the linear scale")
            self._v0, self._v = np.exp(self.log_v0), np.exp(self.log_v)
        return self._v0, self._v

    def segment(self, j):
        v0, v = self._linear()
        return MNLSegment(v0[j], v[j])

    @property
    def segments(self):
        return [self.segment(j) for j in range(self.n_segments)]

    def segment_model(self, j):
        """Single-segment model for segment ``j``, valid on either scale."""
        if self._v is not None:
            return LCMNLModel(self._v0[j:j + 1], self._v[j:j + 1], [1.0])
        return LCMNLModel(self.log_v0[j:j + 1], self.log_v[j:j + 1], [1.0], scale="log")

    def segment_proba(self, X):
        """Per-segment probabilities, shape ``(N, m, n + 1)``."""
        X = check_refinement_batch(X, self.n_products)
        if self.uses_logspace:
            return self._log_segment_proba(X)
        v0, v = self._linear()
        W = X[:, None, :] * v[None, :, :]
        den = v0[None, :] + W.sum(axis=2)
        outside = np.broadcast_to(v0[None, :, None], (X.shape[0], self.n_segments, 1))
        return np.concatenate((outside, W), axis=2) / den[:, :, None]

    def _log_segment_proba(self, X):
        A = self.log_v[None, :, :] + log_refinement(X)[:, None, :]
        a0 = np.broadcast_to(self.log_v0[None, :, None], (X.shape[0], self.n_segments, 1))
        full = np.concatenate((a0, A), axis=2)
        return np.exp(full - logsumexp(full, axis=2, keepdims=True))

    def predict_proba(self, X):
        X = check_refinement_batch(X, self.n_products)
        out = np.empty((X.shape[0], self.n_products + 1))
        for start in range(0, X.shape[0], _CHUNK):
            block = X[start:start + _CHUNK]
            out[start:start + _CHUNK] = np.einsum("j,kji->ki", self.theta, self.segment_proba(block))
        return out

    def expected_revenue_batch(self, r, X):
        r = check_revenues(r, self.n_products)
        X = check_refinement_batch(X, self.n_products)
        if self.uses_logspace:
            return _logspace_revenue_batch(self, r, X)
        v0, v = self._linear()
        den = v0[None, :] + X @ v.T
        num = X @ (v * r[None, :]).T
        return (num / den) @ self.theta

    def to_params(self):
        if self.scale == "linear":
            v0, v = self._v0, self._v
        else:
            v0, v = self.log_v0, self.log_v
        return {
            "v0": v0.tolist(),
            "v": v.tolist(),
            "theta": self.theta.tolist(),
            "scale": self.scale,
        }

    @classmethod
    def from_params(cls, params):
        return cls(params["v0"], params["v"], params["theta"], params.get("scale", "linear"))

    def __repr__(self):
        return f"LCMNLModel(m={self.n_segments}, n={self.n_products}, scale={self.scale!r})"


def _logspace_revenue_batch(model, r, X, log_x=None):
    out = np.empty(X.shape[0] if log_x is None else log_x.shape[0])
    for start in range(0, out.shape[0], _CHUNK):
        if log_x is None:
            block = log_refinement(X[start:start + _CHUNK])
        else:
            block = log_x[start:start + _CHUNK]
        A = model.log_v[None, :, :] + block[:, None, :]
        a0 = np.broadcast_to(model.log_v0[None, :, None], (block.shape[0], model.n_segments, 1))
        lse = logsumexp(np.concatenate((a0, A), axis=2), axis=2)
        per_segment = np.exp(A - lse[:, :, None]) @ r
        out[start:start + _CHUNK] = per_segment @ model.theta
    return out


def lcmnl_revenue(model: LCMNLModel, r, x):
    """Expected revenue ``sum_j theta_j sum_i r_i p^j_i(x)``."""
    x = check_refinement(x, model.n_products)
    return float(model.expected_revenue_batch(r, x[None, :])[0])


def lcmnl_revenue_logspace(model: LCMNLModel, r, x=None, *, log_x=None):
    """Same value as :func:`lcmnl_revenue`, always computed with log-sum-exp.

    ``log_x`` may be passed instead of ``x`` when refinement levels are too
    small to store directly; ``-inf`` entries exclude products.
    """
    r = check_revenues(r, model.n_products)
    if log_x is None:
        x = check_refinement(x, model.n_products)
        return float(_logspace_revenue_batch(model, r, x[None, :])[0])
    log_x = np.asarray(log_x, dtype=float)
    if log_x.shape != (model.n_products,) or np.any(log_x > 1e-12) or np.any(np.isnan(log_x)):
        raise InvalidInstance("log_x must be a vector of nonpositive log refinements")
    return float(_logspace_revenue_batch(model, r, None, log_x=np.minimum(log_x, 0.0)[None, :])[0])


def mnl_revenue(seg: MNLSegment, r, x):
    p = mnl_probabilities(seg, x)
    return float(p[1:] @ check_revenues(r, seg.n_products))


def mnl_revenue_gradient_v(seg: MNLSegment, r, x):
    """``p_i(v, x) (r_i - R(v, x))`` for offered products, zero otherwise.

    This is the sensitivity of revenue to the mean utility ``u_i = ln v_i``
    of each offered product; divide by ``v_i`` for the derivative with
    respect to the attraction itself.  Its sign is what matters for the
    monotone-utility argument.
    """
    x = check_binary(check_refinement(x, seg.n_products))
    p = mnl_probabilities(seg, x)
    revenue = float(p[1:] @ check_revenues(r, seg.n_products))
    return np.where(x > 0, p[1:] * (np.asarray(r, dtype=float) - revenue), 0.0)
