"""``tempograph`` command line.

Exit codes: 0 success, 1 usage error (bad flag, unknown metric), 2 data
error (unreadable file, malformed line, metric undefined on the input).

Every subcommand accepts ``--config FILE`` with ``key = value`` lines whose
keys are long flag names (``max-rounds = 3``); flags given on the command
line win over the file.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace

from .bench import bench_metrics
from .errors import DataError, MetricError
from .estimation import EstimationConfig
from .graph import (
    TemporalEdgeList,
    build_snapshot,
    largest_component_ratio_series,
    read_edge_dump,
    write_edge_dump,
)
from .metrics.registry import REGISTRY, Strategy, evaluate
from .synthgen import StreamParams, generate_follow_stream, generate_random_digraph, write_stream
from .timeinfer import (
    CreationIndex,
    followback_order_histogram,
    infer_edge_times,
    read_creation_index,
    read_follower_lists,
)
from .timeline import EraSpec, run_evolution, series_to_json, write_series_csv

BUDGET_ENV = "TEMPOGRAPH_BUDGET_SECONDS"
DEFAULT_BUDGET = 7200.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _comma_ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _add_estimation_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("estimation")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--max-rounds", type=int, default=None, help="deterministic cap on batches/levels")
    g.add_argument("--budget-seconds", type=float, default=None,
                   help=f"wall-clock budget per evaluation (default {DEFAULT_BUDGET:g}, env {BUDGET_ENV})")
    g.add_argument("--sample-size", type=int, default=1000)
    g.add_argument("--ci-level", type=float, default=0.95)
    g.add_argument("--ci-ratio", type=float, default=0.5)
    g.add_argument("--n-subgraphs", type=int, default=1000)
    g.add_argument("--subgraph-start", type=int, default=100)
    g.add_argument("--growth-factor", type=float, default=1.5)
    g.add_argument("--cutoff-start", type=int, default=2)
    g.add_argument("--cutoff-max", type=int, default=None)
    g.add_argument("--workers", type=int, default=os.cpu_count() or 1)


def _estimation_config(args) -> EstimationConfig:
    budget = args.budget_seconds
    if budget is None and os.environ.get(BUDGET_ENV):
        try:
            budget = float(os.environ[BUDGET_ENV])
        except ValueError:
            raise UsageError(f"{BUDGET_ENV} must be a number") from None
    if budget is None and args.max_rounds is None:
        budget = DEFAULT_BUDGET
    try:
        return EstimationConfig(
            sample_size=args.sample_size,
            ci_level=args.ci_level,
            ci_ratio_threshold=args.ci_ratio,
            budget_seconds=budget,
            max_rounds=args.max_rounds,
            n_subgraphs=args.n_subgraphs,
            subgraph_start=args.subgraph_start,
            growth_factor=args.growth_factor,
            cutoff_start=args.cutoff_start,
            cutoff_max=args.cutoff_max,
            rng_seed=args.seed,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _metric_names(text: str) -> list[str]:
    names = [t.strip() for t in text.split(",") if t.strip()]
    unknown = [n for n in names if n not in REGISTRY]
    if unknown:
        raise UsageError(f"unknown metric(s) {', '.join(unknown)}; known: {', '.join(sorted(REGISTRY))}")
    return names


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _load_edges(args) -> TemporalEdgeList:
    if getattr(args, "edges", None):
        return read_edge_dump(args.edges)
    if getattr(args, "lists", None):
        idx = read_creation_index(args.index, epoch=args.epoch) if args.index else CreationIndex(epoch=args.epoch)
        return infer_edge_times(read_follower_lists(args.lists, newest_first=args.newest_first), idx)
    raise UsageError("give --edges or --lists")


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--edges", help="edge dump (src<TAB>dst<TAB>est_time)")
    p.add_argument("--lists", help="follower list file (target:U1,U2,...)")
    p.add_argument("--index", help="creation index file (id<TAB>timestamp); identity if omitted")
    p.add_argument("--newest-first", action="store_true", help="follower lists are newest first")
    p.add_argument("--epoch", action="store_true", help="timestamps are Unix seconds (enables calendar eras)")


# -- subcommands ------------------------------------------------------------


def cmd_infer_times(args) -> int:
    idx = read_creation_index(args.index, epoch=args.epoch) if args.index else CreationIndex(epoch=args.epoch)
    edges = infer_edge_times(read_follower_lists(args.lists, newest_first=args.newest_first), idx)
    out, close = _open_out(args.output)
    try:
        write_edge_dump(edges, out)
    finally:
        if close:
            out.close()
    return 0


def cmd_followbacks(args) -> int:
    hist = followback_order_histogram(_load_edges(args))
    out, close = _open_out(args.output)
    try:
        out.write("order\tcount\n")
        for k, c in hist.items():
            out.write(f"{k}\t{c}\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_components(args) -> int:
    edges = _load_edges(args)
    m = edges.edge_count
    if args.every:
        checkpoints = list(range(args.every, m + 1, args.every))
    else:
        steps = max(1, args.checkpoints)
        checkpoints = sorted({max(1, round(m * (i + 1) / steps)) for i in range(steps)}) if m else []
    out, close = _open_out(args.output)
    try:
        out.write("edges\tratio\n")
        for c, ratio in largest_component_ratio_series(edges, checkpoints):
            out.write(f"{c}\t{ratio!r}\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_snapshot(args) -> int:
    edges = _load_edges(args)
    t = args.time if args.time is not None else (int(edges.est_time[-1]) if edges.edge_count else 0)
    count = edges.count_until(t)
    snap = build_snapshot(edges, t)
    sub = TemporalEdgeList(edges.src[:count], edges.dst[:count], edges.est_time[:count], edges.seq[:count])
    out, close = _open_out(args.output)
    try:
        write_edge_dump(sub, out)
    finally:
        if close:
            out.close()
    print(f"t={t} |V|={snap.v_count} |E|={snap.e_count}", file=sys.stderr)
    return 0


def cmd_metric(args) -> int:
    names = _metric_names(args.name)
    if len(names) != 1:
        raise UsageError("--name takes exactly one metric")
    name = names[0]
    try:
        strategy = Strategy.parse(args.strategy) if args.strategy else Strategy.NONE
    except ValueError:
        raise UsageError(f"unknown strategy {args.strategy!r}") from None
    cfg = _estimation_config(args)
    edges = _load_edges(args)
    snap = build_snapshot(edges, args.time) if args.time is not None else edges.prefix(edges.edge_count)
    try:
        reports = evaluate(snap, name, cfg, strategy)
    except ValueError as exc:
        if isinstance(exc, MetricError):
            raise
        raise UsageError(str(exc)) from None
    if strategy is Strategy.NONE:
        print(repr(reports[0].mean))
    else:
        for r in reports:
            print(json.dumps(r.to_dict(metric=name)))
    return 0


def _strategy_overrides(items: list[str]) -> dict[str, Strategy]:
    out = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"--strategy expects metric=strategy, got {item!r}")
        name, value = item.split("=", 1)
        _metric_names(name)
        try:
            out[name.strip()] = Strategy.parse(value)
        except ValueError:
            raise UsageError(f"unknown strategy {value!r}") from None
    return out


def cmd_evolve(args) -> int:
    names = _metric_names(args.metrics)
    overrides = _strategy_overrides(args.strategy or [])
    cfg = _estimation_config(args)
    edges = _load_edges(args)
    try:
        spec = EraSpec(args.granularity, args.k, args.start, args.end)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    calendar = CreationIndex(epoch=True) if args.epoch else None
    requests = [(n, overrides.get(n)) for n in names]
    try:
        series = run_evolution(edges, requests, spec, replace(cfg, workers=1), calendar, workers=cfg.workers)
    except ValueError as exc:
        if isinstance(exc, (DataError, MetricError)):
            raise
        raise UsageError(str(exc)) from None
    out, close = _open_out(args.output)
    try:
        if args.format == "json":
            out.write(series_to_json(series) + "\n")
        else:
            write_series_csv(series, out)
    finally:
        if close:
            out.close()
    return 0


def cmd_generate(args) -> int:
    if args.kind == "digraph":
        snap = generate_random_digraph(args.nodes, args.p_edge, args.seed)
        src, dst = snap.edges()
        edges = TemporalEdgeList.from_arrays(src, dst, [0] * len(src))
        out, close = _open_out(args.output)
        try:
            write_edge_dump(edges, out)
        finally:
            if close:
                out.close()
        return 0
    if not args.output or args.output == "-":
        raise UsageError("generate stream needs -o DIRECTORY")
    try:
        params = StreamParams(
            n_users=args.users,
            arrivals=args.arrivals,
            follows_per_tick=args.follows_per_tick,
            attach_exponent=args.attach_exponent,
            p_followback=args.p_followback,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    paths = write_stream(generate_follow_stream(params), args.output)
    for key, path in paths.items():
        print(f"{key}\t{path}", file=sys.stderr)
    return 0


def cmd_bench(args) -> int:
    names = _metric_names(args.metrics)
    edges = _load_edges(args)
    m = edges.edge_count
    if args.sizes:
        counts = [c for c in _comma_ints(args.sizes) if 0 < c <= m]
    else:
        counts = sorted({max(1, round(m * (i + 1) / args.steps)) for i in range(args.steps)}) if m else []
    snaps = [edges.prefix(c) for c in counts]
    rows = bench_metrics(snaps, names, timeout=args.timeout)
    out, close = _open_out(args.output)
    try:
        out.write("metric\tv_count\te_count\tseconds\n")
        for r in rows:
            secs = "timeout" if r.timed_out else f"{r.seconds:.6f}"
            out.write(f"{r.metric}\t{r.v_count}\t{r.e_count}\t{secs}\n")
    finally:
        if close:
            out.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tempograph", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file mirroring long flags")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("infer-times", help="follower lists -> time-ordered edge dump")
    p.add_argument("--lists", required=True)
    p.add_argument("--index")
    p.add_argument("--epoch", action="store_true")
    p.add_argument("--newest-first", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_infer_times)

    p = sub.add_parser("followbacks", help="followback order histogram")
    _add_input_flags(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_followbacks)

    p = sub.add_parser("components", help="largest weak component share as edges arrive")
    _add_input_flags(p)
    p.add_argument("--checkpoints", type=int, default=100, help="number of evenly spaced checkpoints")
    p.add_argument("--every", type=int, default=None, help="checkpoint every N edges instead")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("snapshot", help="edges with est_time <= --time")
    _add_input_flags(p)
    p.add_argument("--time", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_snapshot)

    p = sub.add_parser("metric", help="evaluate one metric at one time point")
    _add_input_flags(p)
    p.add_argument("--name", required=True)
    p.add_argument("--time", type=int, default=None)
    p.add_argument("--strategy", default=None, help="none | rnd_nodes | subgraph | cutoff (default none)")
    _add_estimation_flags(p)
    p.set_defaults(func=cmd_metric)

    p = sub.add_parser("evolve", help="metric series over cumulative eras")
    _add_input_flags(p)
    p.add_argument("--metrics", default="density,degree_distribution")
    p.add_argument("--strategy", action="append", help="metric=strategy override (repeatable)")
    p.add_argument("--granularity", choices=("edges", "day", "month"), default="edges")
    p.add_argument("--k", type=int, default=1000, help="edges per era for --granularity edges")
    p.add_argument("--start", default=None)
    p.add_argument("--end", default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("-o", "--output")
    _add_estimation_flags(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("generate", help="synthetic follow stream or random digraph")
    p.add_argument("--kind", choices=("stream", "digraph"), default="stream")
    p.add_argument("--users", type=int, default=10000)
    p.add_argument("--arrivals", type=float, default=1.0)
    p.add_argument("--follows-per-tick", type=float, default=5.0)
    p.add_argument("--attach-exponent", type=float, default=1.0)
    p.add_argument("--p-followback", type=float, default=0.0)
    p.add_argument("--nodes", type=int, default=64)
    p.add_argument("--p-edge", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="exact evaluation time per metric on a growing graph")
    _add_input_flags(p)
    p.add_argument("--metrics", default=",".join(REGISTRY))
    p.add_argument("--sizes", help="comma-separated edge counts")
    p.add_argument("--steps", type=int, default=5)
    p.add_argument("--timeout", type=float, default=None, help="seconds per cell")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def _read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError("expected key = value", lineno, path)
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = _read_config(known.config)
    command = next((a for a in argv if not a.startswith("-") and a in _subparsers(parser)), None)
    if command is None:
        return
    subparser = _subparsers(parser)[command]
    dests = {a.dest: a for a in subparser._actions}
    unknown = [k for k in values if k not in dests]
    if unknown:
        raise UsageError(f"unknown config key(s) for {command}: {', '.join(unknown)}")
    defaults = {}
    for key, value in values.items():
        action = dests[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        elif isinstance(action, argparse._AppendAction):
            defaults[key] = [v.strip() for v in value.split(",") if v.strip()]
        else:
            defaults[key] = value
    subparser.set_defaults(**defaults)


def _subparsers(parser: argparse.ArgumentParser) -> dict[str, argparse.ArgumentParser]:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices
    return {}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except UsageError as exc:
        print(f"tempograph: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, DataError) as exc:
        print(f"tempograph: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tempograph: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, MetricError, OSError) as exc:
        print(f"tempograph: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
