"""Command-line interface: ``raop {generate,solve,bounds,experiment,verify-paper}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bounds import LP_VARIANTS, bound_report
from .estimators import SOLVERS, best_feasible, dominance_chain, make_solver
from .exceptions import InvalidInstance, SizeLimit
from .experiment import ExperimentConfig, run_experiment, write_reports
from .instance_gen import ALIGNMENTS, PRICE_DISTS, GeneratorConfig, derive_seed, example_instances, gen_lcmnl
from .io import dumps, jsonable, load_instance, save_instance
from .raop import GRID_POINTS, LINE_TOL
from .taop import ENUM_CAP


def _csv_list(cast):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        return [cast(t) for t in items]

    return parse


def _add_solver_flags(p):
    p.add_argument("--grid-points", type=int, default=GRID_POINTS, help="line-search grid size")
    p.add_argument("--line-tol", type=float, default=LINE_TOL, help="golden-section tolerance")
    p.add_argument("--enum-cap", type=int, default=ENUM_CAP, help="largest n solved by enumeration")


def build_parser():
    parser = argparse.ArgumentParser(prog="raop", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write random LC-MNL instances (or the worked examples)")
    g.add_argument("--n", type=int, default=5)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--epsilon", type=float, default=0.5)
    g.add_argument("--dist", choices=PRICE_DISTS, default="uniform")
    g.add_argument("--alpha", type=float, default=0.1)
    g.add_argument("--alignment", choices=ALIGNMENTS, default="random")
    g.add_argument("--reps", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--examples", action="store_true", help="write example1.json and example2.json instead")
    g.add_argument("--out-dir", type=Path, default=Path("instances"))

    s = sub.add_parser("solve", help="run solvers on an instance file")
    s.add_argument("instance", type=Path)
    s.add_argument("--solvers", type=_csv_list(str), default=["ro", "ro1", "ro2", "ro3", "enum"])
    s.add_argument("--out-dir", type=Path, default=None)
    s.add_argument("--seed", type=int, default=0, help="accepted for uniformity; solvers are deterministic")
    _add_solver_flags(s)

    b = sub.add_parser("bounds", help="upper bounds for an instance file")
    b.add_argument("instance", type=Path)
    b.add_argument("--lp-variant", choices=LP_VARIANTS, default="corrected")
    b.add_argument("--no-lp", action="store_true")
    b.add_argument("--out-dir", type=Path, default=None)

    e = sub.add_parser("experiment", help="run the uplift-vs-RO experiment grid")
    e.add_argument("--config", type=Path, default=None, help="JSON file with ExperimentConfig fields")
    e.add_argument("--ns", type=_csv_list(int), default=None)
    e.add_argument("--ms", type=_csv_list(int), default=None)
    e.add_argument("--epsilons", type=_csv_list(float), default=None)
    e.add_argument("--alphas", type=_csv_list(float), default=None)
    e.add_argument("--dists", type=_csv_list(str), default=None)
    e.add_argument("--alignments", type=_csv_list(str), default=None)
    e.add_argument("--reps", type=int, default=None)
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--solvers", type=_csv_list(str), default=None)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out-dir", type=Path, default=Path("results"))
    _add_solver_flags(e)

    sub.add_parser("verify-paper", help="reproduce the reference figures and report pass/fail")
    return parser


def cmd_generate(args):
    out = args.out_dir
    if args.examples:
        paths = [save_instance(inst, out / f"{name}.json") for name, inst in example_instances().items()]
    else:
        paths = []
        for rep in range(args.reps):
            seed = derive_seed(args.seed, rep)
            cfg = GeneratorConfig(args.n, args.m, args.epsilon, args.dist, args.alpha, args.alignment, seed)
            name = f"lcmnl_n{args.n}_m{args.m}_eps{args.epsilon:g}_rep{rep:03d}.json"
            paths.append(save_instance(gen_lcmnl(cfg), out / name))
    for p in paths:
        print(p)
    return 0


def solve_records(instance, solvers, **params):
    """Run each solver; a size-limit error is recorded and the rest still run."""
    if not solvers:
        raise ValueError("at least one solver is required")
    for name in solvers:
        make_solver(name)  # fail fast on unknown names
    results, records = {}, []
    for name in solvers:
        try:
            res = make_solver(name, **params).fit(instance).result_
        except SizeLimit as exc:
            records.append({"solver": name, "status": "size_limit", "error": str(exc)})
            continue
        results[name] = res
        records.append({"status": "ok", **res.to_dict()})
    return records, dominance_chain(results), best_feasible(results)


def cmd_solve(args):
    instance = load_instance(args.instance)
    records, chain, _ = solve_records(
        instance, args.solvers, grid_points=args.grid_points, line_tol=args.line_tol, enum_cap=args.enum_cap
    )
    doc = {"instance": str(args.instance), "results": records, "dominance_chain": chain,
           "dominance_ok": all(chain.values())}
    _emit(doc, args.out_dir, args.instance.stem + ".solve.json")
    return 0


def cmd_bounds(args):
    instance = load_instance(args.instance)
    report = bound_report(instance, args.lp_variant, include_lp=not args.no_lp)
    _emit({"instance": str(args.instance), **report.to_dict()}, args.out_dir, args.instance.stem + ".bounds.json")
    return 0


def _emit(doc, out_dir, filename):
    text = dumps(jsonable(doc))
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / filename).write_text(text, encoding="utf-8")
    sys.stdout.write(text)


def cmd_experiment(args):
    fields = json.loads(args.config.read_text(encoding="utf-8")) if args.config else {}
    overrides = {
        "ns": args.ns, "ms": args.ms, "epsilons": args.epsilons, "alphas": args.alphas,
        "price_dists": args.dists, "alignments": args.alignments, "replications": args.reps,
        "seed": args.seed, "solvers": args.solvers,
    }
    fields.update({k: v for k, v in overrides.items() if v is not None})
    fields = {k: tuple(v) if isinstance(v, list) else v for k, v in fields.items()}
    unknown = [s for s in fields.get("solvers", ()) if s not in SOLVERS]
    if unknown:
        raise ValueError(f"unknown solvers {unknown}")
    config = ExperimentConfig(**fields, enum_cap=args.enum_cap, grid_points=args.grid_points,
                              line_tol=args.line_tol, n_jobs=args.jobs)
    summaries = run_experiment(config)
    for path in write_reports(summaries, config, args.out_dir):
        print(path)
    return 0


def cmd_verify(args):
    from .verify import report

    return report()


COMMANDS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "bounds": cmd_bounds,
    "experiment": cmd_experiment,
    "verify-paper": cmd_verify,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (InvalidInstance, ValueError, KeyError, OSError) as exc:
        print(f"raop {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
