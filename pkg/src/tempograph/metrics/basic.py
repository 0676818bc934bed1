"""Degree-based and local-structure metrics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from ..errors import MetricError
from ..graph import Mode, Snapshot


def _per_node(s: Snapshot, values, idx: Iterable[int] | None = None) -> dict[int, float]:
    ids = s.nodes.tolist()
    if idx is None:
        return {ids[i]: v for i, v in enumerate(values)}
    return {ids[i]: v for i, v in zip(idx, values)}


@dataclass(frozen=True)
class DegreeStats:
    distribution: dict[int, int]
    average: float
    max: int


def degree_stats(s: Snapshot, mode: Mode | str = Mode.ALL) -> DegreeStats:
    if s.v_count == 0:
        raise MetricError("empty graph")
    deg = s.degree(mode)
    dist = Counter(deg.tolist())
    return DegreeStats(
        distribution=dict(sorted(dist.items())),
        average=float(deg.sum()) / s.v_count,
        max=int(deg.max()),
    )


def strength(
    s: Snapshot,
    mode: Mode | str = Mode.ALL,
    weights: Mapping[tuple[int, int], float] | None = None,
) -> dict[int, float]:
    """Sum of incident edge weights per node.

    Without weights this is the mode degree. With weights, ``ALL`` sums over
    both in- and out-edges, so a reciprocal pair contributes both weights.
    ``weights`` is keyed by ``(src, dst)``; on an undirected snapshot either
    orientation is accepted.
    """
    mode = Mode.parse(mode)
    if weights is None:
        return _per_node(s, s.degree(mode).astype(float).tolist())

    src, dst = s.edges()
    w = np.empty(len(src), dtype=float)
    for k, (u, v) in enumerate(zip(src.tolist(), dst.tolist())):
        val = weights.get((u, v))
        if val is None and not s.directed:
            val = weights.get((v, u))
        if val is None:
            raise MetricError(f"missing weight for edge ({u}, {v})")
        if not math.isfinite(val):
            raise MetricError(f"non-finite weight for edge ({u}, {v})")
        w[k] = val

    si, di = s.indices(src), s.indices(dst)
    n = s.v_count
    total = np.zeros(n)
    if not s.directed:
        total += np.bincount(si, weights=w, minlength=n) + np.bincount(di, weights=w, minlength=n)
        return _per_node(s, total.tolist())
    if mode in (Mode.OUT, Mode.ALL):
        total += np.bincount(si, weights=w, minlength=n)
    if mode in (Mode.IN, Mode.ALL):
        total += np.bincount(di, weights=w, minlength=n)
    return _per_node(s, total.tolist())


def neighborhood_size(
    s: Snapshot, order: int = 1, mode: Mode | str = Mode.ALL, nodes: Iterable[int] | None = None
) -> dict[int, int]:
    """Number of nodes within ``order`` hops, the node itself included."""
    if order < 0:
        raise ValueError("order must be >= 0")
    adj = s.adjacency(mode)
    idx = range(s.v_count) if nodes is None else s.indices(nodes).tolist()
    sizes = []
    for root in idx:
        seen = {root}
        frontier = [root]
        for _ in range(order):
            nxt = []
            for v in frontier:
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            if not nxt:
                break
            frontier = nxt
        sizes.append(len(seen))
    return _per_node(s, sizes, idx)


def density(s: Snapshot) -> float:
    n = s.v_count
    if n < 2:
        raise MetricError("density needs at least 2 nodes")
    pairs = n * (n - 1)
    if s.directed:
        return s.e_count / pairs
    return 2 * s.e_count / pairs


def assortativity_degree(s: Snapshot, mode: Mode | str = Mode.ALL) -> float:
    """Pearson correlation between the degrees at the two ends of each edge.

    ``ALL`` uses the undirected projection with every edge taken in both
    orientations; ``IN``/``OUT`` use directed edges and that degree at both ends.
    """
    mode = Mode.parse(mode)
    g = s.undirected if mode is Mode.ALL else s
    if len(g.out_targets) == 0:
        raise MetricError("assortativity needs at least one edge")
    deg = g.degree(mode).astype(float)
    src = np.repeat(np.arange(g.v_count), g.out_degree)
    x, y = deg[src], deg[g.out_targets]
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy = float(dx @ dx), float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise MetricError("undefined (regular graph)")
    return float(dx @ dy) / math.sqrt(sxx * syy)


def coreness(s: Snapshot, mode: Mode | str = Mode.ALL) -> dict[int, int]:
    """Shell index of every node (bucket-based minimum-degree peeling)."""
    mode = Mode.parse(mode)
    n = s.v_count
    if n == 0:
        return {}
    deg = s.degree(mode).tolist()
    # nodes whose mode-degree counts v, i.e. who lose a unit when v is peeled
    if mode is Mode.ALL:
        dependents = s.adjacency(Mode.ALL)
    elif mode is Mode.OUT:
        dependents = s.adjacency(Mode.IN)
    else:
        dependents = s.adjacency(Mode.OUT)

    md = max(deg)
    bin_start = [0] * (md + 1)
    for d in deg:
        bin_start[d] += 1
    start = 0
    for d in range(md + 1):
        bin_start[d], start = start, start + bin_start[d]
    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bin_start[deg[v]]
        vert[pos[v]] = v
        bin_start[deg[v]] += 1
    for d in range(md, 0, -1):
        bin_start[d] = bin_start[d - 1]
    bin_start[0] = 0

    for i in range(n):
        v = vert[i]
        for u in dependents[v]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bin_start[du] += 1
                deg[u] -= 1
    return _per_node(s, deg)


@dataclass(frozen=True)
class Transitivity:
    global_: float
    local_average: float
    local: dict[int, float]


def _triangle_links(s: Snapshot) -> tuple[list[int], list[int]]:
    """Per node: undirected degree and number of links among its neighbors."""
    nbrs = s.neighbor_sets(Mode.ALL)
    deg = [len(a) for a in nbrs]
    links = [0] * s.v_count
    for v, nv in enumerate(nbrs):
        total = 0
        for u in nv:
            total += len(nv & nbrs[u])
        links[v] = total // 2
    return deg, links


def local_transitivity(s: Snapshot) -> dict[int, float]:
    """Clustering coefficient of every node with undirected degree >= 2."""
    deg, links = _triangle_links(s)
    ids = s.nodes.tolist()
    return {ids[v]: links[v] / (d * (d - 1) / 2) for v, d in enumerate(deg) if d >= 2}


def transitivity(s: Snapshot) -> Transitivity:
    """Global and average local clustering on the undirected projection."""
    deg, links = _triangle_links(s)
    triples = sum(d * (d - 1) // 2 for d in deg)
    if triples == 0:
        raise MetricError("transitivity undefined: no connected triple")
    ids = s.nodes.tolist()
    local = {ids[v]: links[v] / (d * (d - 1) / 2) for v, d in enumerate(deg) if d >= 2}
    return Transitivity(
        global_=sum(links) / triples,
        local_average=math.fsum(local.values()) / len(local),
        local=local,
    )


def knn_average_degree(s: Snapshot, mode: Mode | str = Mode.ALL) -> dict[int, float]:
    """Mean mode-degree of each node's mode-neighbors; nodes without neighbors are left out."""
    adj = s.adjacency(mode)
    deg = s.degree(mode).tolist()
    ids = s.nodes.tolist()
    return {ids[v]: sum(deg[u] for u in a) / len(a) for v, a in enumerate(adj) if a}

