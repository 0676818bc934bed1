"""The 24 named metrics, their default sampling strategy and scalar summaries.

Each metric reduces to one number per snapshot (the value that goes into an
evolution series). Per-node metrics summarize as the mean over nodes where
the metric is defined, except PageRank, whose mean is always ``1/|V|`` and
is summarized by its median instead.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from ..errors import MetricError
from ..estimation import (
    EstimateReport,
    EstimationConfig,
    estimate_cutoff,
    estimate_random_nodes,
    estimate_subgraphs,
)
from ..graph import Mode, Snapshot
from . import basic, paths, spectral, structure


class Strategy(str, Enum):
    NONE = "none"
    RANDOM_NODES = "rnd_nodes"
    SUBGRAPH = "subgraph"
    CUTOFF = "cutoff"

    @classmethod
    def parse(cls, value: "Strategy | str") -> "Strategy":
        if isinstance(value, Strategy):
            return value
        key = str(value).strip().lower().replace(" ", "_").replace("-", "_")
        aliases = {"rnd": "rnd_nodes", "random_nodes": "rnd_nodes", "exact": "none"}
        return cls(aliases.get(key, key))


PerNode = Callable[[Snapshot, "list[int] | None", "int | None"], "dict[int, float | None]"]


@dataclass(frozen=True)
class MetricSpec:
    name: str
    label: str
    strategy: Strategy
    exact: Callable[[Snapshot], float]
    per_node: PerNode | None = None
    cutoff: bool = False

    def supports(self, strategy: Strategy) -> bool:
        if strategy in (Strategy.NONE, Strategy.SUBGRAPH):
            return True
        if strategy is Strategy.RANDOM_NODES:
            return self.per_node is not None
        return self.cutoff


def _mean_defined(values) -> float:
    kept = [float(v) for v in values if v is not None]
    if not kept:
        raise MetricError("metric undefined on every node")
    return math.fsum(kept) / len(kept)


def _subset(full: Callable[[Snapshot], dict]) -> PerNode:
    """Per-node adapter for metrics that are computed for the whole graph at once."""

    def per_node(s: Snapshot, nodes, cutoff=None):
        values = full(s)
        ids = s.nodes.tolist() if nodes is None else nodes
        return {i: values.get(i) for i in ids}

    return per_node


def _nonempty(s: Snapshot) -> None:
    if s.v_count == 0:
        raise MetricError("empty graph")


def _degree_nodes(s, nodes, cutoff=None):
    deg = s.degree(Mode.ALL)
    ids = s.nodes.tolist() if nodes is None else nodes
    return {i: float(deg[s.index(i)]) for i in ids}


def _betweenness_mean(s: Snapshot) -> float:
    _nonempty(s)
    return math.fsum(paths.betweenness(s).values()) / s.v_count


def _closeness_mean(s: Snapshot) -> float:
    _nonempty(s)
    return _mean_defined(paths.closeness(s).values())


def _eccentricity_nodes(s, nodes, cutoff=None):
    return paths.eccentricity(s, Mode.ALL, nodes)


def _asp_nodes(s, nodes, cutoff=None):
    return paths.mean_distance(s, nodes, Mode.OUT)


def _pagerank_median(s: Snapshot) -> float:
    return statistics.median(spectral.pagerank(s).values())


def _hub(s: Snapshot) -> dict[int, float]:
    return spectral.hits_scores(s).hub


def _motifs(size: int) -> Callable[[Snapshot], float]:
    def count(s: Snapshot) -> float:
        return float(structure.motifs_randesu(s, size))

    return count


def _registry() -> dict[str, MetricSpec]:
    N, R, S, C = Strategy.NONE, Strategy.RANDOM_NODES, Strategy.SUBGRAPH, Strategy.CUTOFF
    specs = [
        MetricSpec("assortativity", "Assortativity", N, lambda s: basic.assortativity_degree(s, Mode.ALL)),
        MetricSpec(
            "betweenness", "Betweenness", C, _betweenness_mean,
            per_node=lambda s, nodes, cutoff=None: paths.source_dependency(s, nodes, cutoff),
            cutoff=True,
        ),
        MetricSpec("cliques", "Cliques", S, lambda s: float(structure.max_clique(s))),
        MetricSpec(
            "closeness", "Closeness", C, _closeness_mean,
            per_node=lambda s, nodes, cutoff=None: paths.closeness(s, cutoff, Mode.OUT, nodes),
            cutoff=True,
        ),
        MetricSpec(
            "cocitation", "Cocitation", R,
            lambda s: _mean_defined(structure.cocitation(s).values()),
            per_node=lambda s, nodes, cutoff=None: structure.cocitation(s, nodes),
        ),
        MetricSpec(
            "coreness", "Coreness", N,
            lambda s: _mean_defined(basic.coreness(s, Mode.ALL).values()),
            per_node=_subset(lambda s: basic.coreness(s, Mode.ALL)),
        ),
        MetricSpec(
            "degree_distribution", "Degree dstr", N,
            lambda s: basic.degree_stats(s, Mode.ALL).average,
            per_node=_degree_nodes,
        ),
        MetricSpec("density", "Density", N, basic.density),
        MetricSpec("diameter", "Diameter", S, lambda s: float(paths.diameter(s, Mode.OUT))),
        MetricSpec(
            "eccentricity", "Eccentricity", R,
            lambda s: _mean_defined(paths.eccentricity_radius(s, Mode.ALL).ecc.values()),
            per_node=_eccentricity_nodes,
        ),
        MetricSpec("edge_connectivity", "Edge connectivity", N, lambda s: float(structure.edge_connectivity(s))),
        MetricSpec(
            "eigenvector_centrality", "Eigenvector centrality", N,
            lambda s: _mean_defined(spectral.eigenvector_centrality(s).values()),
            per_node=_subset(spectral.eigenvector_centrality),
        ),
        MetricSpec(
            "all_shortest_paths", "All shortest paths", R,
            lambda s: _mean_defined(paths.mean_distance(s, None, Mode.OUT).values()),
            per_node=_asp_nodes,
        ),
        MetricSpec(
            "hub_score", "Hub score", N,
            lambda s: _mean_defined(_hub(s).values()),
            per_node=_subset(_hub),
        ),
        MetricSpec(
            "knn", "KNN", N,
            lambda s: _mean_defined(basic.knn_average_degree(s, Mode.ALL).values()),
            per_node=_subset(lambda s: basic.knn_average_degree(s, Mode.ALL)),
        ),
        MetricSpec("max_degree", "Max degree", N, lambda s: float(basic.degree_stats(s, Mode.ALL).max)),
        MetricSpec("motifs3", "Motifs rand-ESU 3", N, _motifs(3)),
        MetricSpec("motifs4", "Motifs rand-ESU 4", N, _motifs(4)),
        MetricSpec(
            "neighborhood_size", "Neighborhood size", N,
            lambda s: _mean_defined(basic.neighborhood_size(s, 1, Mode.ALL).values()),
            per_node=lambda s, nodes, cutoff=None: basic.neighborhood_size(s, 1, Mode.ALL, nodes),
        ),
        MetricSpec(
            "pagerank", "Pagerank", N, _pagerank_median,
            per_node=_subset(spectral.pagerank),
        ),
        MetricSpec(
            "silw", "SILW", R,
            lambda s: _mean_defined(structure.silw(s).values()),
            per_node=lambda s, nodes, cutoff=None: structure.silw(s, nodes),
        ),
        MetricSpec(
            "strength", "Strength", N,
            lambda s: _mean_defined(basic.strength(s, Mode.ALL).values()),
            per_node=_subset(lambda s: basic.strength(s, Mode.ALL)),
        ),
        MetricSpec(
            "transitivity_local", "Transitivity local", N,
            lambda s: basic.transitivity(s).local_average,
            per_node=_subset(basic.local_transitivity),
        ),
        MetricSpec("transitivity_global", "Transitivity global", N, lambda s: basic.transitivity(s).global_),
    ]
    return {m.name: m for m in specs}


REGISTRY: dict[str, MetricSpec] = _registry()


def get_metric(name: str) -> MetricSpec:
    try:
        return REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown metric {name!r}; known: {', '.join(sorted(REGISTRY))}") from None


def evaluate(
    s: Snapshot,
    name: str,
    cfg: EstimationConfig,
    strategy: Strategy | str | None = None,
) -> list[EstimateReport]:
    """Evaluate one registered metric on ``s`` with its (or the given) strategy.

    Exact evaluations come back as a single zero-width report with
    ``n_samples == 0``; sampled ones return the estimator's reports.
    """
    spec = get_metric(name)
    strategy = spec.strategy if strategy is None else Strategy.parse(strategy)
    if not spec.supports(strategy):
        raise ValueError(f"metric {name!r} does not support strategy {strategy.value!r}")
    _nonempty(s)
    if strategy is Strategy.NONE:
        return [EstimateReport.exact(float(spec.exact(s)))]
    if strategy is Strategy.RANDOM_NODES:
        return [estimate_random_nodes(s, lambda g, ids: spec.per_node(g, ids, None), cfg)]
    if strategy is Strategy.SUBGRAPH:
        return estimate_subgraphs(s, spec.exact, cfg)
    return estimate_cutoff(s, lambda g, ids, c: spec.per_node(g, ids, c), cfg)
