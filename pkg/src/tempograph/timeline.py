"""Era splitting and per-era metric evaluation of a growing graph.

Eras are cumulative: era ``i`` holds every edge up to its boundary, so each
snapshot contains the previous one.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import MetricError
from .estimation import EstimateReport, EstimationConfig, derive_seed
from .graph import TemporalEdgeList
from .metrics.registry import Strategy, evaluate, get_metric
from .timeinfer import CreationIndex

logger = logging.getLogger(__name__)

GRANULARITIES = ("month", "day", "edges")
CSV_HEADER = ["metric", "era", "v_count", "e_count", "mean", "ci_low", "ci_high", "n_samples", "converged", "param"]


@dataclass(frozen=True)
class EraSpec:
    """How to cut the timeline.

    ``granularity`` is ``"month"``, ``"day"`` or ``"edges"`` (every ``k``
    edges). ``start``/``end`` are dates (``datetime.date`` or ISO strings)
    for calendar granularities and edge counts for ``"edges"``; edges
    after ``end`` are dropped.
    """

    granularity: str = "edges"
    k: int = 1
    start: object = None
    end: object = None

    def __post_init__(self):
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"granularity must be one of {GRANULARITIES}")
        if self.granularity == "edges" and self.k < 1:
            raise ValueError("k must be >= 1")

    @property
    def calendar(self) -> bool:
        return self.granularity != "edges"


@dataclass(frozen=True)
class Era:
    label: str | int
    stop: int  # number of edges in the cumulative snapshot


def _as_date(value) -> dt.date:
    if isinstance(value, dt.datetime):
        return value.date()
    if isinstance(value, dt.date):
        return value
    return dt.date.fromisoformat(str(value))


def _epoch(d: dt.date) -> int:
    return int(dt.datetime(d.year, d.month, d.day, tzinfo=dt.timezone.utc).timestamp())


def _from_epoch(t: int) -> dt.date:
    return dt.datetime.fromtimestamp(int(t), tz=dt.timezone.utc).date()


def _next_period(d: dt.date, granularity: str) -> dt.date:
    if granularity == "day":
        return d + dt.timedelta(days=1)
    return dt.date(d.year + (d.month == 12), d.month % 12 + 1, 1)


def split_eras(edges: TemporalEdgeList, spec: EraSpec, calendar: CreationIndex | None = None) -> list[Era]:
    """Cumulative era boundaries over the globally ordered edge list."""
    m = edges.edge_count
    if not spec.calendar:
        start = 0 if spec.start is None else int(spec.start)
        end = m if spec.end is None else min(int(spec.end), m)
        if not 0 <= start < end:
            raise ValueError(f"empty edge range [{start}, {end}]")
        stops = list(range(start + spec.k, end + 1, spec.k))
        if not stops or stops[-1] != end:
            stops.append(end)
        return [Era(stop, stop) for stop in stops]

    if calendar is None or not calendar.epoch:
        raise ValueError(f"per-{spec.granularity} eras need a creation index with epoch timestamps")
    if m == 0 and (spec.start is None or spec.end is None):
        raise ValueError("no edges to derive a calendar range from")
    first = _as_date(spec.start) if spec.start is not None else _from_epoch(edges.est_time[0])
    last = _as_date(spec.end) if spec.end is not None else _from_epoch(edges.est_time[-1])
    if last < first:
        raise ValueError(f"empty date range [{first}, {last}]")
    if spec.granularity == "month":
        first = first.replace(day=1)
    # edges stamped after the last day of the range are excluded
    limit = int(np.searchsorted(edges.est_time, _epoch(last + dt.timedelta(days=1)), side="left"))

    eras = []
    period = first
    while period <= last:
        nxt = _next_period(period, spec.granularity)
        stop = min(int(np.searchsorted(edges.est_time, _epoch(nxt), side="left")), limit)
        label = period.strftime("%Y-%m") if spec.granularity == "month" else period.isoformat()
        eras.append(Era(label, stop))
        period = nxt
    return eras


@dataclass
class SeriesEntry:
    era: str | int
    v_count: int
    e_count: int
    report: EstimateReport | None = None
    error: str | None = None

    @property
    def param(self) -> int | None:
        return None if self.report is None else self.report.param


@dataclass
class EvolutionSeries:
    metric: str
    entries: list[SeriesEntry] = field(default_factory=list)


def _normalize(metrics: Iterable) -> list[tuple[str, Strategy | None]]:
    out = []
    for item in metrics:
        if isinstance(item, str):
            name, strategy = item, None
        else:
            name, strategy = item
            strategy = None if strategy is None else Strategy.parse(strategy)
        get_metric(name)
        out.append((name, strategy))
    return out


def run_evolution(
    edges: TemporalEdgeList,
    metrics: Sequence,
    spec: EraSpec,
    cfg: EstimationConfig,
    calendar: CreationIndex | None = None,
    workers: int = 1,
) -> list[EvolutionSeries]:
    """Evaluate each metric on the cumulative snapshot of every era.

    ``metrics`` holds names or ``(name, strategy)`` pairs. A sampled metric
    can yield several entries per era (one per subgraph size or cutoff).
    Errors are recorded per entry and never abort the run. Every (metric,
    era) pair gets its own seed derived from ``cfg.rng_seed``, so results
    do not depend on which other metrics are requested or on ``workers``.
    """
    requests = _normalize(metrics)
    eras = split_eras(edges, spec, calendar)
    series = {name: EvolutionSeries(name) for name, _ in requests}

    def run_one(snap, era_index: int, name: str, strategy) -> list[EstimateReport] | str:
        local = replace(cfg, rng_seed=derive_seed(cfg.rng_seed, name, era_index))
        try:
            return evaluate(snap, name, local, strategy)
        except (MetricError, ValueError) as exc:
            logger.info("era %s metric %s: %s", eras[era_index].label, name, exc)
            return str(exc) or type(exc).__name__

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for i, era in enumerate(eras):
            snap = edges.prefix(era.stop)
            jobs = [(name, strategy) for name, strategy in requests]
            if pool is None:
                results = [run_one(snap, i, name, st) for name, st in jobs]
            else:
                results = list(pool.map(lambda job: run_one(snap, i, *job), jobs))
            for (name, _), result in zip(jobs, results):
                target = series[name].entries
                if isinstance(result, str):
                    target.append(SeriesEntry(era.label, snap.v_count, snap.e_count, error=result))
                else:
                    target.extend(SeriesEntry(era.label, snap.v_count, snap.e_count, r) for r in result)
    finally:
        if pool is not None:
            pool.shutdown()
    return [series[name] for name, _ in requests]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    return repr(float(x)) if isinstance(x, float) else str(x)


def write_series_csv(series: Sequence[EvolutionSeries], dest: IO[str]) -> None:
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in series:
        for e in s.entries:
            r = e.report
            if r is None:
                writer.writerow([s.metric, e.era, e.v_count, e.e_count, "", "", "", "", "", ""])
                continue
            writer.writerow(
                [s.metric, e.era, e.v_count, e.e_count, _fmt(r.mean), _fmt(r.ci_low), _fmt(r.ci_high),
                 r.n_samples, _fmt(r.converged), _fmt(r.param)]
            )


def series_to_json(series: Sequence[EvolutionSeries]) -> str:
    rows = []
    for s in series:
        for e in s.entries:
            row = {"metric": s.metric, "era": e.era, "v_count": e.v_count, "e_count": e.e_count}
            if e.report is not None:
                row.update(e.report.to_dict())
            if e.error is not None:
                row["error"] = e.error
            rows.append(row)
    return json.dumps(rows, indent=1, allow_nan=True)


def series_to_csv(series: Sequence[EvolutionSeries]) -> str:
    buf = io.StringIO()
    write_series_csv(series, buf)
    return buf.getvalue()
