"""Budgeted sampling estimators for expensive graph metrics.

Three strategies share one confidence-interval stopping rule:

* random nodes: evaluate a per-node metric on batches of uniformly drawn
  nodes, accumulating batches until the CI is narrow enough;
* random subgraphs: evaluate a whole-graph metric on many induced
  subgraphs of a fixed size, growing the size geometrically;
* cutoff: evaluate a path-length-limited per-node metric at cutoffs
  2, 3, 4, ... (each level estimated with random nodes).

A run stops early when the wall-clock budget is spent (checked between
batches only) or after ``max_rounds`` batches/levels. Tests should use
``max_rounds`` with ``budget_seconds=None`` so results are reproducible.
"""

from __future__ import annotations

import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, replace
from statistics import NormalDist
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import MetricError
from .graph import Snapshot

PerNodeMetric = Callable[[Snapshot, list[int]], "Mapping[int, float | None] | Sequence[float | None]"]
CutoffMetric = Callable[[Snapshot, list[int], int], "Mapping[int, float | None] | Sequence[float | None]"]
GraphMetric = Callable[[Snapshot], float]

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence"


@dataclass(frozen=True)
class EstimationConfig:
    sample_size: int = 1000
    ci_level: float = 0.95
    ci_ratio_threshold: float = 0.5
    budget_seconds: float | None = 7200.0
    max_rounds: int | None = None
    n_subgraphs: int = 1000
    subgraph_start: int = 100
    growth_factor: float = 1.5
    cutoff_start: int = 2
    cutoff_max: int | None = None
    rng_seed: int = 0
    workers: int = 1
    abs_width_floor: float = 1e-9

    def __post_init__(self):
        if self.sample_size < 2:
            raise ValueError("sample_size must be >= 2")
        if not 0 < self.ci_level < 1:
            raise ValueError("ci_level must lie in (0, 1)")
        if self.growth_factor <= 1:
            raise ValueError("growth_factor must be > 1")
        if self.budget_seconds is None and self.max_rounds is None:
            raise ValueError("set budget_seconds or max_rounds")
        if self.budget_seconds is not None and self.budget_seconds <= 0:
            raise ValueError("budget_seconds must be > 0")
        if self.max_rounds is not None and self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if self.n_subgraphs < 1 or self.subgraph_start < 1:
            raise ValueError("n_subgraphs and subgraph_start must be >= 1")
        if self.cutoff_start < 1:
            raise ValueError("cutoff_start must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class EstimateReport:
    mean: float
    ci_low: float
    ci_high: float
    n_samples: int
    rounds: int
    converged: bool
    budget_spent: float
    param: int | None = None
    skipped: int = 0

    @property
    def width(self) -> float:
        return self.ci_high - self.ci_low

    def to_dict(self, metric: str | None = None, time_point=None) -> dict:
        d = asdict(self)
        if metric is not None:
            d["metric"] = metric
        if time_point is not None:
            d["time"] = time_point
        return d

    @classmethod
    def exact(cls, value: float, n_samples: int = 0, spent: float = 0.0, param: int | None = None) -> "EstimateReport":
        return cls(value, value, value, n_samples, 0, True, spent, param)


def derive_seed(seed: int, *keys: str | int) -> int:
    """Expand a top-level seed into an independent child seed.

    String keys are hashed with CRC-32; the child is the first 63-bit word
    of ``SeedSequence([seed, *keys])``. Adding a metric or era therefore
    never shifts the stream of another one.
    """
    words = [int(seed)] + [zlib.crc32(k.encode()) if isinstance(k, str) else int(k) for k in keys]
    return int(np.random.SeedSequence(words).generate_state(2, np.uint64)[0] >> np.uint64(1))


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def confidence_interval(values: Sequence[float], level: float = 0.95) -> tuple[float, float]:
    """Normal-approximation CI of the mean: ``mean +- z * sd / sqrt(n)`` (sample sd)."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        raise ValueError("need at least 2 values for a confidence interval")
    if not np.all(np.isfinite(x)):
        raise ValueError("values must be finite")
    if not 0 < level < 1:
        raise ValueError("level must lie in (0, 1)")
    mean = math.fsum(x.tolist()) / x.size
    if np.all(x == x[0]):
        return (float(x[0]), float(x[0]))
    sd = math.sqrt(math.fsum(((x - mean) ** 2).tolist()) / (x.size - 1))
    half = NormalDist().inv_cdf(0.5 + level / 2) * sd / math.sqrt(x.size)
    return (mean - half, mean + half)


def subgraph_schedule(start: int, growth: float, n: int) -> list[int]:
    """Subgraph sizes ``start, round(start*growth), ...``; the first size >= n becomes n."""
    sizes = []
    k = start
    while k < n:
        sizes.append(k)
        nxt = math.floor(k * growth + 0.5)
        k = nxt if nxt > k else k + 1
    sizes.append(n)
    return sizes


class _Budget:
    def __init__(self, cfg: EstimationConfig):
        self.cfg = cfg
        self.start = time.perf_counter()

    @property
    def spent(self) -> float:
        return time.perf_counter() - self.start

    def exhausted(self, rounds: int) -> bool:
        if self.cfg.max_rounds is not None and rounds >= self.cfg.max_rounds:
            return True
        return self.cfg.budget_seconds is not None and self.spent >= self.cfg.budget_seconds


def _is_converged(mean: float, low: float, high: float, cfg: EstimationConfig) -> bool:
    width = high - low
    return width <= abs(mean) * cfg.ci_ratio_threshold or width <= cfg.abs_width_floor


def _summarize(values: list[float], cfg: EstimationConfig) -> tuple[float, float, float, bool]:
    if not values:
        return (math.nan, math.nan, math.nan, False)
    mean = math.fsum(values) / len(values)
    if len(values) == 1:
        return (mean, mean, mean, False)
    low, high = confidence_interval(values, cfg.ci_level)
    # keep the reported interval consistent with the fsum mean
    low, high = min(low, mean), max(high, mean)
    return (mean, low, high, _is_converged(mean, low, high, cfg))


def _values_in_order(result, ids: list[int]) -> list[float | None]:
    if isinstance(result, Mapping):
        return [result.get(i) for i in ids]
    out = list(result)
    if len(out) != len(ids):
        raise ValueError("metric returned a sequence of the wrong length")
    return out


def _evaluate_nodes(s: Snapshot, metric: PerNodeMetric, ids: list[int], workers: int) -> list[float | None]:
    def run(chunk: list[int]) -> list[float | None]:
        try:
            return _values_in_order(metric(s, chunk), chunk)
        except MetricError:
            # find the first offending node so the error names it
            for node in chunk:
                try:
                    metric(s, [node])
                except MetricError as exc:
                    raise MetricError(f"node {node}: {exc}") from exc
            raise

    if workers <= 1 or len(ids) < 2 * workers:
        return run(ids)
    size = math.ceil(len(ids) / workers)
    chunks = [ids[i:i + size] for i in range(0, len(ids), size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, chunks))
    return [v for part in parts for v in part]


def _defined(values: list[float | None]) -> tuple[list[float], int]:
    kept = [float(v) for v in values if v is not None and not (isinstance(v, float) and math.isnan(v))]
    return kept, len(values) - len(kept)


def estimate_random_nodes(
    s: Snapshot,
    metric: PerNodeMetric,
    cfg: EstimationConfig,
    rng: np.random.Generator | None = None,
    param: int | None = None,
    _budget: _Budget | None = None,
) -> EstimateReport:
    """Mean of a per-node metric from rounds of ``sample_size`` random nodes.

    ``metric(snapshot, node_ids)`` returns values keyed by node id (or in
    ``node_ids`` order); ``None``/NaN marks a node where the metric is
    undefined, which is counted in ``skipped``. When the sample would cover
    every node, the exact population mean is returned instead.
    """
    n = s.v_count
    if n == 0:
        raise MetricError("empty graph")
    budget = _budget or _Budget(cfg)
    rng = rng if rng is not None else make_rng(cfg.rng_seed)

    if cfg.sample_size >= n:
        values, skipped = _defined(_evaluate_nodes(s, metric, s.nodes.tolist(), cfg.workers))
        if not values:
            raise MetricError("metric undefined on every node")
        mean = math.fsum(values) / len(values)
        return EstimateReport(mean, mean, mean, n, 1, True, budget.spent, param, skipped)

    values: list[float] = []
    skipped = 0
    rounds = 0
    while True:
        pick = rng.choice(n, size=cfg.sample_size, replace=False)
        ids = s.nodes[np.sort(pick)].tolist()
        kept, miss = _defined(_evaluate_nodes(s, metric, ids, cfg.workers))
        values.extend(kept)
        skipped += miss
        rounds += 1
        mean, low, high, ok = _summarize(values, cfg)
        if ok or budget.exhausted(rounds):
            break
    if not values:
        raise MetricError("metric undefined on every sampled node")
    return EstimateReport(mean, low, high, rounds * cfg.sample_size, rounds, ok, budget.spent, param, skipped)


def estimate_subgraphs(
    s: Snapshot,
    metric: GraphMetric,
    cfg: EstimationConfig,
    rng: np.random.Generator | None = None,
) -> list[EstimateReport]:
    """Evaluate a whole-graph metric on random induced subgraphs of growing size.

    One batch of ``n_subgraphs`` subgraphs is drawn per size; each report
    carries its size in ``param`` and the CI stopping rule decides its
    ``converged`` flag. Once the size reaches ``|V|`` the full graph is
    evaluated once, exactly. A subgraph on which the metric is undefined is
    skipped and counted.
    """
    n = s.v_count
    if n == 0:
        raise MetricError("empty graph")
    budget = _Budget(cfg)
    rng = rng if rng is not None else make_rng(cfg.rng_seed)
    reports = []
    for level, k in enumerate(subgraph_schedule(cfg.subgraph_start, cfg.growth_factor, n), start=1):
        if k >= n:
            value = float(metric(s))
            reports.append(EstimateReport(value, value, value, 1, 1, True, budget.spent, n))
            break
        values: list[float] = []
        skipped = 0
        for _ in range(cfg.n_subgraphs):
            pick = np.sort(rng.choice(n, size=k, replace=False))
            try:
                values.append(float(metric(s.subgraph(s.nodes[pick]))))
            except MetricError:
                skipped += 1
        mean, low, high, ok = _summarize(values, cfg)
        reports.append(EstimateReport(mean, low, high, cfg.n_subgraphs, 1, ok, budget.spent, k, skipped))
        if budget.exhausted(level):
            break
    return reports


def estimate_cutoff(
    s: Snapshot,
    metric: CutoffMetric,
    cfg: EstimationConfig,
) -> list[EstimateReport]:
    """Estimate a per-node metric at cutoffs ``cutoff_start, cutoff_start + 1, ...``.

    Every level draws the same node sample (same seed), so when a level
    reproduces the previous one exactly no sampled node has a geodesic that
    long and deeper cutoffs cannot change anything: the escalation stops.
    It also stops at ``cutoff_max``, after ``max_rounds`` levels, or when
    the budget runs out.
    """
    budget = _Budget(cfg)
    reports: list[EstimateReport] = []
    cutoff = cfg.cutoff_start
    while True:
        report = estimate_random_nodes(
            s,
            lambda g, ids, c=cutoff: metric(g, ids, c),
            cfg,
            rng=make_rng(cfg.rng_seed),
            param=cutoff,
            _budget=budget,
        )
        saturated = bool(reports) and (
            (report.mean, report.ci_low, report.ci_high) == (reports[-1].mean, reports[-1].ci_low, reports[-1].ci_high)
        )
        reports.append(report)
        if saturated or (cfg.cutoff_max is not None and cutoff >= cfg.cutoff_max):
            break
        if budget.exhausted(len(reports)):
            break
        cutoff += 1
    return reports


def with_seed(cfg: EstimationConfig, seed: int) -> EstimationConfig:
    return replace(cfg, rng_seed=seed)
