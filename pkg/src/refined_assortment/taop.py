"""Traditional (binary) assortment optimization."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .choice_core import Instance, SolveResult, Timer
from .exceptions import SizeLimit
from .lcmnl import MNLSegment

ENUM_CAP = 25
_CHUNK_BITS = 15


def subset_block(n, start, stop):
    """Binary matrix whose rows are the bitmasks ``start..stop-1`` (bit i = product i)."""
    masks = np.arange(start, stop, dtype=np.int64)
    return ((masks[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1).astype(float)


def mask_of(x):
    return int(sum(1 << i for i, t in enumerate(np.asarray(x)) if t > 0))


def _best_in_range(instance, start, stop):
    values = instance.revenue_batch(subset_block(instance.n, start, stop))
    k = int(np.argmax(values))
    return float(values[k]), start + k


def enumerate_taop(instance: Instance, *, enum_cap=ENUM_CAP, n_jobs=1):
    """Exact TAOP optimum over all ``2^n`` subsets.

    Among equally good subsets the smallest bitmask wins.  With ``n_jobs > 1``
    blocks of subsets are scored on a thread pool; the merge applies the same
    tie-break, so the answer does not depend on scheduling.
    """
    n = instance.n
    if n > enum_cap:
        raise SizeLimit(f"enumeration limited to n <= {enum_cap}, got n = {n}")
    with Timer() as t:
        total = 1 << n
        size = 1 << min(n, _CHUNK_BITS)
        ranges = [(s, min(s + size, total)) for s in range(0, total, size)]
        if n_jobs > 1 and len(ranges) > 1:
            with ThreadPoolExecutor(n_jobs) as pool:
                parts = list(pool.map(lambda rg: _best_in_range(instance, *rg), ranges))
        else:
            parts = [_best_in_range(instance, *rg) for rg in ranges]
        best_value, best_mask = parts[0]
        for value, mask in parts[1:]:
            if value > best_value:
                best_value, best_mask = value, mask
        x = subset_block(n, best_mask, best_mask + 1)[0]
    return SolveResult.evaluate(instance, x, "enum", t.elapsed, mask=best_mask)


def revenue_ordered_candidates(instance: Instance):
    """Rows ``e^0 (empty), e^1, ..., e^n`` in the instance's product indexing."""
    order = instance.revenue_order()
    X = np.zeros((instance.n + 1, instance.n))
    for k in range(1, instance.n + 1):
        X[k:, order[k - 1]] = 1.0
    return X


def revenue_ordered(instance: Instance):
    """Best nested assortment of top-revenue products (empty set included)."""
    with Timer() as t:
        X = revenue_ordered_candidates(instance)
        values = instance.revenue_batch(X)
        k = int(np.argmax(values))
    return SolveResult.evaluate(instance, X[k], "ro", t.elapsed, size=k)


def mnl_segment_optimum(seg: MNLSegment, r):
    """Optimal assortment of one MNL segment; revenue-ordered sets suffice."""
    res = revenue_ordered(Instance(r, seg.as_model()))
    return SolveResult(res.x, res.revenue, res.probabilities, "mnl-segment", res.elapsed, res.extra)
