"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInstance, InvalidRefinement, NotFittedError

_BOUND_TOL = 1e-12


def check_refinement(x, n=None, *, name="x"):
    """Return ``x`` as a 1-d float array inside ``[0, 1]^n``.

    Values within 1e-12 of the box are clipped onto it; anything further
    out raises :class:`InvalidRefinement`.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise InvalidRefinement(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise InvalidRefinement(f"{name} has length {arr.shape[0]}, expected {n}")
    return _check_box(arr, name)


def check_refinement_batch(X, n=None, *, name="X"):
    """Two-dimensional variant of :func:`check_refinement` (one row per vector)."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise InvalidRefinement(f"{name} must be two-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[1] != n:
        raise InvalidRefinement(f"{name} has {arr.shape[1]} columns, expected {n}")
    return _check_box(arr, name)


def _check_box(arr, name):
    if not np.all(np.isfinite(arr)):
        raise InvalidRefinement(f"{name} contains non-finite values")
    if arr.size and (arr.min() < -_BOUND_TOL or arr.max() > 1 + _BOUND_TOL):
        raise InvalidRefinement(f"{name} must lie in [0, 1]")
    return np.clip(arr, 0.0, 1.0)


def check_binary(x, *, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all((arr == 0.0) | (arr == 1.0)):
        raise InvalidRefinement(f"{name} must be binary")
    return arr


def check_revenues(r, n=None):
    arr = np.asarray(r, dtype=float)
    if arr.ndim != 1:
        raise InvalidInstance("revenues must be a one-dimensional vector")
    if n is not None and arr.shape[0] != n:
        raise InvalidInstance(f"expected {n} revenues, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise InvalidInstance("revenues must be finite and nonnegative")
    return arr


def check_weights(theta, m=None, *, tol=1e-12):
    arr = np.asarray(theta, dtype=float)
    if arr.ndim != 1 or (m is not None and arr.shape[0] != m):
        raise InvalidInstance("segment weights must be a vector with one entry per segment")
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidInstance("segment weights must be nonnegative")
    if abs(arr.sum() - 1.0) > tol:
        raise InvalidInstance(f"segment weights sum to {arr.sum()!r}, expected 1")
    return arr


def check_is_fitted(estimator, attribute="result_"):
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"This {type(estimator).__name__} instance is not fitted yet; call fit(instance) first."
        )
