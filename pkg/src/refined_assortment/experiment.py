"""Experiment grid: generate LC-MNL instances, run solvers, summarize uplift over RO.

Uplift of a solver on one instance is ``100 * (R_solver - R_ro) / R_ro``.
Every (cell, replication) pair draws its own seed from the master seed, so
the output does not depend on the number of workers.  Timing is kept out of
the CSV files to make them byte-reproducible.
"""

from __future__ import annotations

import csv
import io
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .estimators import make_solver
from .exceptions import SizeLimit
from .instance_gen import GeneratorConfig, derive_seed, gen_lcmnl
from .raop import GRID_POINTS, LINE_TOL

TAOP_MAX_N = 50
CELL_COLUMNS = (
    "n", "m", "epsilon", "alpha", "dist", "alignment", "solver",
    "mean_uplift", "max_uplift", "outperforms_taop", "taop_agreement",
)


@dataclass
class ExperimentConfig:
    ns: tuple = (5, 10, 15, 50, 100)
    ms: tuple = (2, 5, 10, 50, 100)
    epsilons: tuple = (0.01, 0.5)
    alphas: tuple = (0.01, 0.1, 0.2)
    price_dists: tuple = ("uniform",)
    alignments: tuple = ("random",)
    replications: int = 50
    seed: int = 0
    solvers: tuple = ("ro", "ro1", "ro2", "ro3", "enum")
    enum_cap: int = 25
    grid_points: int = GRID_POINTS
    line_tol: float = LINE_TOL
    n_jobs: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if "ro" not in self.solvers:
            self.solvers = ("ro", *self.solvers)

    def cells(self):
        return list(itertools.product(self.ns, self.ms, self.epsilons, self.alphas,
                                      self.price_dists, self.alignments))

    def to_dict(self):
        return asdict(self)


@dataclass
class CellSummary:
    n: int
    m: int
    epsilon: float
    alpha: float
    dist: str
    alignment: str
    uplifts: dict = field(default_factory=dict)
    agreement: dict = field(default_factory=dict)

    def mean(self, solver):
        return float(np.mean(self.uplifts[solver]))

    def max(self, solver):
        return float(np.max(self.uplifts[solver]))

    @property
    def has_taop(self):
        return "enum" in self.uplifts

    def outperforms_taop(self, solver):
        if not self.has_taop or solver in ("enum", "ro"):
            return None
        return self.mean(solver) > self.mean("enum")


def _run_one(task):
    cell, rep, config = task
    n, m, eps, alpha, dist, alignment = cell
    seed = derive_seed(config.seed, config.cells().index(cell), rep)
    gen = GeneratorConfig(n, m, eps, dist, alpha, alignment, seed)
    instance = gen_lcmnl(gen)
    params = {"grid_points": config.grid_points, "line_tol": config.line_tol, "enum_cap": config.enum_cap}
    revenue, xs = {}, {}
    for name in config.solvers:
        if name == "enum" and n >= TAOP_MAX_N:
            continue
        try:
            res = make_solver(name, **params).fit(instance).result_
        except SizeLimit:
            continue
        revenue[name], xs[name] = res.revenue, res.x
    return cell, rep, revenue, xs


def _agrees(x, taop_x):
    """True when ``x`` offers every product of the TAOP optimum at full level."""
    chosen = taop_x > 0.5
    return bool(np.all(x[chosen] >= 1.0 - 1e-12))


def run_experiment(config: ExperimentConfig):
    tasks = [(cell, rep, config) for cell in config.cells() for rep in range(config.replications)]
    if config.n_jobs > 1:
        with ProcessPoolExecutor(config.n_jobs) as pool:
            outcomes = list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (8 * config.n_jobs))))
    else:
        outcomes = [_run_one(t) for t in tasks]

    summaries = {cell: CellSummary(*cell) for cell in config.cells()}
    for cell, _, revenue, xs in outcomes:
        summary = summaries[cell]
        base = revenue["ro"]
        for name, value in revenue.items():
            uplift = 0.0 if name == "ro" else (100.0 * (value - base) / base if base > 0 else 0.0)
            summary.uplifts.setdefault(name, []).append(uplift)
            if "enum" in xs:
                summary.agreement.setdefault(name, []).append(_agrees(xs[name], xs["enum"]))
    return [summaries[cell] for cell in config.cells()]


def _fmt(value):
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def cell_rows(summaries, solvers):
    for s in summaries:
        for name in solvers:
            if name not in s.uplifts:
                continue
            agreement = float(np.mean(s.agreement[name])) if name in s.agreement else None
            yield [s.n, s.m, s.epsilon, s.alpha, s.dist, s.alignment, name,
                   s.mean(name), s.max(name), s.outperforms_taop(name), agreement]


def aggregate_rows(summaries, solvers):
    """Mean uplift per (n, m), averaged over every other factor; ``-`` for missing TAOP."""
    keys = sorted({(s.n, s.m) for s in summaries})
    for n, m in keys:
        group = [s for s in summaries if (s.n, s.m) == (n, m)]
        row = [n, m]
        for name in solvers:
            values = [s.mean(name) for s in group if name in s.uplifts]
            row.append(float(np.mean(values)) if values and not (name == "enum" and n >= TAOP_MAX_N) else None)
        yield row


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_reports(summaries, config: ExperimentConfig, out_dir):
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    solvers = list(config.solvers)
    cells = out_dir / "cells.csv"
    cells.write_text(_csv_text(CELL_COLUMNS, cell_rows(summaries, solvers)), encoding="utf-8")
    header = ["n", "m", *("taop" if s == "enum" else s for s in solvers)]
    table = out_dir / "aggregate.csv"
    table.write_text(_csv_text(header, aggregate_rows(summaries, solvers)), encoding="utf-8")
    return cells, table
