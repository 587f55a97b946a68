"""Command line interface.

Every subcommand echoes its full configuration (including the master seed)
into the output's metadata, writes files atomically, and is deterministic:
the same invocation always produces byte-identical payloads, regardless of
``--jobs``. Stdout carries JSON results only; logs and errors go to stderr
as single-line JSON objects.

Exit codes: 0 success, 1 unexpected internal error, 2 usage error,
3 unreadable or malformed input, 4 generation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .graph import (
    DirectedGraph,
    GenerationError,
    ParseError,
    DEGREE_CORRELATION_VARIANT,
    degree_preserving_rewire,
    generate_erdos_renyi,
    generate_scale_free,
    load_edge_list,
    load_pajek,
    network_stats,
)
from .matching import driver_set, sample_matching
from .metrics import EstimatorConfig, contribution_table, estimate
from .cactus import sample_cactus
from .ranking import (
    CONTROL_SCHEME_KINDS,
    GeneratorSpec,
    RankingScheme,
    default_grid,
    ensemble_experiment,
    measured_driver_fraction,
    scheme_curve,
)
from .seeds import child_seed, child_seeds
from .subspace import controllable_dim

ENV_SEED = "NETCTRL_SEED"
ENV_JOBS = "NETCTRL_JOBS"

# fixed seed-derivation tags, one per stochastic stage
_TAG_GENERATE = 1
_TAG_SAMPLE = 2
_TAG_ESTIMATE = 3
_TAG_DIM = 4
_TAG_CURVE = 5
_TAG_REWIRE = 6

_SCHEME_NAMES = {
    "contribution": "contribution-desc",
    "capacity": "capacity-desc",
    "range": "range-desc",
    "indegree": "indegree-asc",
    "outdegree": "outdegree-asc",
    "random": "random",
}

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_GENERATION = 4


class _CliError(Exception):
    def __init__(self, code: int, kind: str, message: str):
        super().__init__(message)
        self.code = code
        self.kind = kind


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        _emit_error("usage", message)
        raise SystemExit(EXIT_USAGE)


def _env_int(name: str, fallback: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError as exc:
        raise _CliError(EXIT_USAGE, "usage", f"{name} must be an integer, got {raw!r}") from exc


def _write_text(path: str | None, text: str) -> None:
    """Write to stdout, or atomically (temp file + rename) to ``path``."""
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    parent = target.parent if str(target.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=str(parent), prefix=target.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, str(target))
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def _csv_text(meta: dict, header: list[str], rows) -> str:
    lines = [f"# {k}={_fmt_cell(v)}" for k, v in sorted(meta.items())]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt_cell(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _json_text(meta: dict, payload: dict) -> str:
    return json.dumps({"meta": meta, **payload}, sort_keys=True, indent=2) + "\n"


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _CliError(EXIT_INPUT, "input-error", f"cannot read {path}: {exc}") from exc


def _source_args(parser: argparse.ArgumentParser, generator_only: bool = False) -> None:
    group = parser.add_argument_group("input")
    if not generator_only:
        group.add_argument("--input", metavar="FILE", help="edge-list file ('u v' lines)")
        group.add_argument("--pajek", metavar="FILE", help="Pajek .net file (directed arcs)")
        group.add_argument(
            "--index-base", type=int, choices=(0, 1), default=0,
            help="node id base of --input files (default 0)",
        )
    group.add_argument(
        "--er", nargs=2, type=int, metavar=("N", "L"),
        help="generate an Erdos-Renyi graph with N nodes and exactly L edges",
    )
    group.add_argument(
        "--sf", nargs=2, type=int, metavar=("N", "L"),
        help="generate a static-model scale-free graph with N nodes and L edges",
    )
    group.add_argument(
        "--gamma", type=float, default=2.5,
        help="degree exponent for --sf (default 2.5)",
    )


def _common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--seed", type=int, default=_env_int(ENV_SEED, 0),
        help=f"master seed (default ${ENV_SEED} or 0)",
    )
    parser.add_argument(
        "--jobs", type=int, default=_env_int(ENV_JOBS, 1),
        help=f"worker cap for parallel stages; output is identical for any value "
             f"(default ${ENV_JOBS} or 1)",
    )
    parser.add_argument("--config", metavar="FILE", help="key=value defaults file")
    parser.add_argument("--out", metavar="FILE", help="output path (default: JSON to stdout)")


def _estimator_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("estimator")
    group.add_argument("--delta", type=int, default=100,
                       help="flat iterations required to stop (default 100)")
    group.add_argument("--epsilon", type=float, default=0.0,
                       help="flatness tolerance on the convergence functional (default 0)")
    group.add_argument("--t-min", type=int, default=100, help="minimum iterations (default 100)")
    group.add_argument("--t-max", type=int, default=None,
                       help="iteration cap (default 100*N)")
    group.add_argument("--walk-factor", type=float, default=2.0,
                       help="exchange-walk length as a multiple of L (default 2)")
    group.add_argument("--functional", choices=("r-sum", "c-sum"), default="r-sum",
                       help="convergence functional (default r-sum)")


def _estimator_config(args, master_seed: int) -> EstimatorConfig:
    return EstimatorConfig(
        delta_window=args.delta,
        epsilon=args.epsilon,
        t_min=args.t_min,
        t_max=args.t_max,
        master_seed=master_seed,
        walk_length_factor=args.walk_factor,
        functional=args.functional,
    )


def _resolve_source(args, parser, generator_only: bool = False):
    """Build the working graph; returns (graph, source descriptor string)."""
    picks = []
    if getattr(args, "input", None) is not None:
        picks.append("input")
    if getattr(args, "pajek", None) is not None:
        picks.append("pajek")
    if args.er is not None:
        picks.append("er")
    if args.sf is not None:
        picks.append("sf")
    if len(picks) != 1:
        allowed = "--er/--sf" if generator_only else "--input/--pajek/--er/--sf"
        parser.error(f"exactly one of {allowed} is required (got {len(picks)})")
    kind = picks[0]
    if kind == "input":
        g = load_edge_list(_read_file(args.input), index_base=args.index_base)
        return g, f"edge-list:{args.input}"
    if kind == "pajek":
        g = load_pajek(_read_file(args.pajek))
        return g, f"pajek:{args.pajek}"
    gen_seed = child_seed(args.seed, _TAG_GENERATE)
    if kind == "er":
        n, l = args.er
        return generate_erdos_renyi(n, l, gen_seed), f"er:{n},{l}"
    n, l = args.sf
    return generate_scale_free(n, l, gen_seed, gamma=args.gamma), f"sf:{n},{l},gamma={args.gamma}"


def _base_meta(args, subcommand: str, source: str, **extra) -> dict:
    # --jobs only schedules work and never changes results, so it is left out
    # of the echoed configuration to keep outputs byte-identical across values
    meta = {
        "subcommand": subcommand,
        "source": source,
        "seed": args.seed,
        "version": __version__,
    }
    if hasattr(args, "index_base"):
        meta["index_base"] = args.index_base
    meta.update(extra)
    return meta


def _estimator_meta(args) -> dict:
    return {
        "delta": args.delta,
        "epsilon": args.epsilon,
        "t_min": args.t_min,
        "t_max": "auto" if args.t_max is None else args.t_max,
        "walk_factor": args.walk_factor,
        "functional": args.functional,
    }


# ---------------------------------------------------------------- handlers


def _cmd_generate(args, parser) -> int:
    g, source = _resolve_source(args, parser, generator_only=True)
    if args.out is None:
        parser.error("generate writes an edge-list file; --out is required")
    meta = _base_meta(args, "generate", source, gamma=args.gamma)
    lines = [f"# {k}={_fmt_cell(v)}" for k, v in sorted(meta.items())]
    text = "\n".join(lines) + "\n" + g.to_edge_list_text()
    _write_text(args.out, text)
    return EXIT_OK


def _cmd_randomize(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    if args.out is None:
        parser.error("randomize writes an edge-list file; --out is required")
    rewired = degree_preserving_rewire(g, args.swap_factor, child_seed(args.seed, _TAG_REWIRE))
    meta = _base_meta(args, "randomize", source, swap_factor=args.swap_factor)
    lines = [f"# {k}={_fmt_cell(v)}" for k, v in sorted(meta.items())]
    text = "\n".join(lines) + "\n" + rewired.to_edge_list_text()
    _write_text(args.out, text)
    return EXIT_OK


def _cmd_stats(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    s = network_stats(g)
    meta = _base_meta(
        args, "stats", source,
        r_defined=s.r_defined, c_defined=s.c_defined,
        degree_correlation=DEGREE_CORRELATION_VARIANT,
    )
    if args.out is not None:
        _write_text(args.out, _csv_text(meta, ["n", "l", "k", "r", "c"],
                                        [(s.n, s.l, s.k, s.r, s.c)]))
    else:
        _write_text(None, _json_text(meta, {
            "n": s.n, "l": s.l, "k": s.k,
            "r": s.r if math.isfinite(s.r) else None,
            "c": s.c if math.isfinite(s.c) else None,
            "r_defined": s.r_defined, "c_defined": s.c_defined,
        }))
    return EXIT_OK


def _cmd_drivers(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    match_seed, tie_seed = child_seeds(2, args.seed, _TAG_SAMPLE)
    m = sample_matching(g, match_seed)
    d = driver_set(g, m, tie_seed)
    info = {"matching_size": m.size, "n_d": d.n_d_fraction}
    meta = _base_meta(args, "drivers", source)
    meta["info"] = json.dumps(info, sort_keys=True)
    if args.out is not None:
        _write_text(args.out, _csv_text(meta, ["node_id"], [(v,) for v in d.drivers]))
    else:
        _write_text(None, _json_text(meta, {**info, "drivers": list(d.drivers)}))
    return EXIT_OK


def _cmd_cactus(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    match_seed, tie_seed, attach_seed = child_seeds(3, args.seed, _TAG_SAMPLE)
    m = sample_matching(g, match_seed)
    d = driver_set(g, m, tie_seed)
    sample = sample_cactus(g, m, d, attach_seed)
    meta = _base_meta(args, "cactus", source)
    payload = {
        "matching_size": m.size,
        "drivers": list(d.drivers),
        "n_d": d.n_d_fraction,
        "stems": {str(k): list(v) for k, v in sorted(sample.stems.items())},
        "cycles": [list(c) for c in sample.cycles],
        "cycle_owner": list(sample.cycle_owner),
        "witnesses": [list(w) if w is not None else None for w in sample.witnesses],
        "never_eligible": list(sample.never_eligible),
        "territories": {str(k): list(v) for k, v in sorted(sample.territories().items())},
        "territory_sizes": {str(k): v for k, v in sorted(sample.territory_sizes.items())},
        "max_sizes": {str(k): v for k, v in sorted(sample.max_sizes.items())},
    }
    _write_text(args.out, _json_text(meta, payload))
    return EXIT_OK


def _cmd_estimate(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    cfg = _estimator_config(args, child_seed(args.seed, _TAG_ESTIMATE))
    result = estimate(g, cfg, jobs=args.jobs)
    rows = contribution_table(result)
    meta = _base_meta(args, "estimate", source, **_estimator_meta(args))
    trace = [[p.t, p.q, p.delta] for p in result.trace]
    if args.out is not None:
        _write_text(
            args.out,
            _csv_text(meta, ["node", "k", "r", "c", "mean_territory"], rows),
        )
        sidecar = _json_text(meta, {
            "converged": result.converged,
            "samples": result.samples,
            "trace": trace,
        })
        _write_text(args.out + ".json", sidecar)
    else:
        _write_text(None, _json_text(meta, {
            "converged": result.converged,
            "samples": result.samples,
            "table": [list(r) for r in rows],
            "trace": trace,
        }))
    return EXIT_OK


def _parse_drivers(raw: str, parser) -> list[int]:
    try:
        values = [int(tok) for tok in raw.split(",") if tok.strip() != ""]
    except ValueError:
        parser.error(f"--drivers expects comma-separated integers, got {raw!r}")
    if not values:
        parser.error("--drivers must name at least one node")
    return values


def _cmd_dim(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    drivers = _parse_drivers(args.drivers, parser)
    res = controllable_dim(g, drivers, trials=args.trials,
                           seed=child_seed(args.seed, _TAG_DIM))
    meta = _base_meta(args, "dim", source, drivers=args.drivers, trials=args.trials)
    _write_text(args.out, _json_text(meta, {
        "n_b_abs": res.n_b_abs,
        "n_b": res.n_b,
        "reachable_count": res.reachable_count,
        "trials_used": res.trials_used,
        "method": res.method,
    }))
    return EXIT_OK


def _scheme_from_name(name: str, parser, seed: int) -> RankingScheme:
    if name not in _SCHEME_NAMES:
        parser.error(f"unknown scheme {name!r}; choose from {sorted(_SCHEME_NAMES)}")
    return RankingScheme(_SCHEME_NAMES[name], seed=seed)


def _cmd_rank(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    scheme = _scheme_from_name(args.scheme, parser, child_seed(args.seed, _TAG_CURVE))
    est = None
    if scheme.kind in CONTROL_SCHEME_KINDS:
        cfg = _estimator_config(args, child_seed(args.seed, _TAG_ESTIMATE))
        est = estimate(g, cfg, jobs=args.jobs)
    from .ranking import rank_nodes  # local import keeps module load cheap

    order = rank_nodes(g, scheme, est)
    if scheme.kind in CONTROL_SCHEME_KINDS:
        score_vec = {
            "contribution-desc": est.contribution,
            "capacity-desc": est.capacity,
            "range-desc": est.control_range,
        }[scheme.kind]
        scores = [float(score_vec[v]) for v in order]
    elif scheme.kind == "indegree-asc":
        deg = g.in_degrees()
        scores = [deg[v] for v in order]
    elif scheme.kind == "outdegree-asc":
        deg = g.out_degrees()
        scores = [deg[v] for v in order]
    else:
        scores = [None] * len(order)
    meta = _base_meta(args, "rank", source, scheme=args.scheme, **_estimator_meta(args))
    rows = [(i + 1, v, s) for i, (v, s) in enumerate(zip(order, scores))]
    if args.out is not None:
        _write_text(args.out, _csv_text(meta, ["rank", "node", "score"], rows))
    else:
        _write_text(None, _json_text(meta, {"order": order, "scores": scores}))
    return EXIT_OK


def _cmd_curve(args, parser) -> int:
    g, source = _resolve_source(args, parser)
    names = [s.strip() for s in args.schemes.split(",") if s.strip()]
    if not names:
        parser.error("--schemes must name at least one scheme")
    schemes = []
    for i, name in enumerate(names):
        schemes.append((name, _scheme_from_name(name, parser, child_seed(args.seed, _TAG_CURVE, i))))
    est = None
    if any(s.kind in CONTROL_SCHEME_KINDS for _, s in schemes):
        cfg = _estimator_config(args, child_seed(args.seed, _TAG_ESTIMATE))
        est = estimate(g, cfg, jobs=args.jobs)
    n_d = measured_driver_fraction(g)
    grid = default_grid(n_d, args.grid_points)
    rows = []
    curves = {}
    for i, (name, scheme) in enumerate(schemes):
        curve = scheme_curve(
            g, scheme, grid, estimates=est, trials=args.trials,
            seed=child_seed(args.seed, _TAG_DIM, i), jobs=args.jobs,
        )
        curves[name] = curve
        for j, (x, y) in enumerate(curve.points):
            err = curve.stderr[j] if curve.stderr is not None else None
            rows.append((name, x, y, err))
    meta = _base_meta(
        args, "curve", source, schemes=",".join(names),
        grid_points=args.grid_points, trials=args.trials, n_d=n_d,
        **_estimator_meta(args),
    )
    if args.out is not None:
        _write_text(args.out, _csv_text(meta, ["scheme", "n_c", "n_b", "stderr"], rows))
    else:
        payload = {
            "n_d": n_d,
            "curves": {
                name: {
                    "points": [[x, y] for x, y in c.points],
                    "auc": c.auc,
                    "stderr": list(c.stderr) if c.stderr is not None else None,
                }
                for name, c in curves.items()
            },
        }
        _write_text(None, _json_text(meta, payload))
    return EXIT_OK


def _cmd_ensemble(args, parser) -> int:
    if args.er is not None and args.sf is not None:
        parser.error("choose one generator for the ensemble")
    if args.er is not None:
        spec = GeneratorSpec("er", args.er[0], args.er[1])
        source = f"er:{spec.n},{spec.l}"
    elif args.sf is not None:
        spec = GeneratorSpec("sf", args.sf[0], args.sf[1], gamma=args.gamma)
        source = f"sf:{spec.n},{spec.l},gamma={spec.gamma}"
    else:
        parser.error("ensemble generates its networks; --er or --sf is required")
    cfg = _estimator_config(args, 0)  # per-run master seeds are derived inside
    result = ensemble_experiment(
        spec,
        runs=args.runs,
        grid_points=args.grid_points,
        master_seed=args.seed,
        config=cfg,
        trials=args.trials,
        use_wilcoxon=args.wilcoxon,
        jobs=args.jobs,
    )
    meta = _base_meta(
        args, "ensemble", source, runs=args.runs,
        grid_points=args.grid_points, trials=args.trials,
        test=result.test_name, **_estimator_meta(args),
    )
    rows = list(zip(result.run_ids, result.rs0, result.rs1))
    summary = result.summary()
    if args.out is not None:
        _write_text(args.out, _csv_text(meta, ["run", "rs0", "rs1"], rows))
        _write_text(args.out + ".json", _json_text(meta, {"summary": summary}))
        _write_text(None, _json_text(meta, {"summary": summary}))
    else:
        _write_text(None, _json_text(meta, {
            "runs": [[r, a, b] for r, a, b in rows],
            "summary": summary,
        }))
    return EXIT_OK


# ---------------------------------------------------------------- wiring


def build_parser() -> _Parser:
    parser = _Parser(
        prog="netctrl",
        description="Structural controllability toolkit for directed networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    def add(name: str, help_text: str, *, generator_only=False, estimator=False,
            source=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if source:
            _source_args(p, generator_only=generator_only)
        _common_args(p)
        if estimator:
            _estimator_args(p)
        return p

    add("generate", "generate a random graph and write it as an edge list",
        generator_only=True)

    p = add("randomize", "degree-preserving rewiring of an input graph")
    p.add_argument("--swap-factor", type=float, default=10.0,
                   help="attempted swaps as a multiple of L (default 10)")

    add("stats", "summary statistics (n, l, k, r, c)")

    add("drivers", "one sampled minimum driver set")

    add("cactus", "one sampled stem/cycle decomposition with attachments")

    add("estimate", "Monte-Carlo control capacity / range / contribution",
        estimator=True)

    p = add("dim", "controllable-subspace dimension for a fixed driver set")
    p.add_argument("--drivers", required=False, default=None,
                   help="comma-separated driver node ids, e.g. 0,2")
    p.add_argument("--trials", type=int, default=3,
                   help="independent random weightings (default 3)")

    p = add("rank", "order all nodes under a ranking scheme", estimator=True)
    p.add_argument("--scheme", default="contribution",
                   help="contribution|capacity|range|indegree|outdegree|random")

    p = add("curve", "controllable fraction n_b versus driver fraction n_c",
            estimator=True)
    p.add_argument("--schemes", default=",".join(sorted(_SCHEME_NAMES)),
                   help="comma-separated scheme names (default: all)")
    p.add_argument("--grid-points", type=int, default=20,
                   help="grid points in (0, n_d] (default 20)")
    p.add_argument("--trials", type=int, default=3,
                   help="random weightings per dimension measurement (default 3)")

    p = add("ensemble", "rs0/rs1 ranking comparison over generated networks",
            generator_only=True, estimator=True)
    p.add_argument("--runs", type=int, default=100, help="networks to generate (default 100)")
    p.add_argument("--grid-points", type=int, default=20,
                   help="grid points in (0, n_d] (default 20)")
    p.add_argument("--trials", type=int, default=3,
                   help="random weightings per dimension measurement (default 3)")
    p.add_argument("--wilcoxon", action="store_true",
                   help="use a one-sided Wilcoxon signed-rank test instead of the sign test")
    return parser


_HANDLERS = {
    "generate": _cmd_generate,
    "randomize": _cmd_randomize,
    "stats": _cmd_stats,
    "drivers": _cmd_drivers,
    "cactus": _cmd_cactus,
    "estimate": _cmd_estimate,
    "dim": _cmd_dim,
    "rank": _cmd_rank,
    "curve": _cmd_curve,
    "ensemble": _cmd_ensemble,
}


def _load_config_file(path: str) -> dict:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(_read_file(path).splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise _CliError(EXIT_USAGE, "usage",
                            f"{path} line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _find_subparser(parser: _Parser, sub_name: str):
    for action in parser._actions:  # noqa: SLF001 - argparse offers no public hook
        if isinstance(action, argparse._SubParsersAction):
            return action.choices.get(sub_name)
    return None


def _coerce_config_values(subparser, sub_name: str, raw: dict) -> dict:
    known = {}
    for action in subparser._actions:  # noqa: SLF001
        if action.dest and action.dest != argparse.SUPPRESS:
            known[action.dest] = action
    out = {}
    for key, value in raw.items():
        if key not in known:
            raise _CliError(EXIT_USAGE, "usage",
                            f"config key {key!r} unknown for subcommand {sub_name!r}")
        action = known[key]
        if action.type is not None:
            try:
                out[key] = action.type(value)
            except (TypeError, ValueError) as exc:
                raise _CliError(EXIT_USAGE, "usage",
                                f"config key {key!r}: bad value {value!r}") from exc
        elif isinstance(action.const, bool) or isinstance(action.default, bool):
            out[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            out[key] = value
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        probe, _ = parser.parse_known_args(argv)
        if getattr(probe, "config", None):
            raw = _load_config_file(probe.config)
            subparser = _find_subparser(parser, probe.subcommand)
            if subparser is not None:
                # defaults land on the subparser: flags still override them,
                # and they in turn override built-in and environment defaults
                subparser.set_defaults(
                    **_coerce_config_values(subparser, probe.subcommand, raw)
                )
        args = parser.parse_args(argv)
        if args.subcommand is None:
            parser.error("a subcommand is required")
        if args.subcommand == "dim" and args.drivers is None:
            parser.error("dim requires --drivers")
        if args.jobs < 1:
            parser.error("--jobs must be >= 1")
        return _HANDLERS[args.subcommand](args, parser)
    except _CliError as exc:
        _emit_error(exc.kind, str(exc))
        return exc.code
    except ParseError as exc:
        _emit_error("parse-error", str(exc))
        return EXIT_INPUT
    except GenerationError as exc:
        _emit_error("generation-failure", str(exc))
        return EXIT_GENERATION
    except ValueError as exc:
        _emit_error("invalid-argument", str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # argparse exits (usage errors, --help, --version)
        return exc.code if isinstance(exc.code, int) else 0
    except Exception as exc:  # pragma: no cover - safety net
        _emit_error("internal-error", f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
