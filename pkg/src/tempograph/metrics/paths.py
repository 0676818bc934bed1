"""Shortest-path metrics built on unweighted BFS.

Unreachable pairs never count as infinite distances: they are skipped, and
:func:`avg_shortest_path` reports how many pairs were reachable.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from ..errors import MetricError
from ..graph import Mode, Snapshot


def _sources(s: Snapshot, nodes: Iterable[int] | None) -> list[int]:
    return list(range(s.v_count)) if nodes is None else s.indices(nodes).tolist()


def bfs_distances(adj: list[list[int]], root: int, cutoff: int | None = None) -> dict[int, int]:
    """Hop distance from ``root`` to every node reached within ``cutoff`` hops."""
    dist = {root: 0}
    q = deque([root])
    while q:
        v = q.popleft()
        dv = dist[v]
        if cutoff is not None and dv >= cutoff:
            continue
        for w in adj[v]:
            if w not in dist:
                dist[w] = dv + 1
                q.append(w)
    return dist


def _check_cutoff(cutoff: int | None) -> None:
    if cutoff is not None and cutoff < 1:
        raise ValueError("cutoff must be >= 1")


def _dependencies(adj: list[list[int]], root: int, cutoff: int | None) -> dict[int, float]:
    """Brandes pair dependencies of ``root`` on every node it reaches (root excluded)."""
    dist = {root: 0}
    sigma = {root: 1}
    preds: dict[int, list[int]] = {root: []}
    order = []
    q = deque([root])
    while q:
        v = q.popleft()
        order.append(v)
        dv = dist[v]
        if cutoff is not None and dv >= cutoff:
            continue
        sv = sigma[v]
        for w in adj[v]:
            dw = dist.get(w)
            if dw is None:
                dw = dist[w] = dv + 1
                sigma[w] = 0
                preds[w] = []
                q.append(w)
            if dw == dv + 1:
                sigma[w] += sv
                preds[w].append(v)
    delta = dict.fromkeys(order, 0.0)
    for w in reversed(order):
        coeff = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            delta[v] += sigma[v] * coeff
    del delta[root]
    return delta


def betweenness(s: Snapshot, cutoff: int | None = None, directed: bool = True) -> dict[int, float]:
    """Unnormalized betweenness (Brandes).

    With ``cutoff`` only geodesics of length ``<= cutoff`` contribute.
    Undirected betweenness counts each unordered pair once.
    """
    _check_cutoff(cutoff)
    adj = s.adjacency(Mode.OUT if directed else Mode.ALL)
    bc = [0.0] * s.v_count
    for root in range(s.v_count):
        for w, d in _dependencies(adj, root, cutoff).items():
            bc[w] += d
    if not directed:
        bc = [b * 0.5 for b in bc]
    return dict(zip(s.nodes.tolist(), bc))


def source_dependency(
    s: Snapshot, nodes: Iterable[int] | None = None, cutoff: int | None = None, directed: bool = True
) -> dict[int, float]:
    """Total dependency each source puts on all other nodes.

    Summing this over every source gives the summed betweenness, so its mean
    over nodes equals the mean betweenness and can be estimated from a
    sample of sources.
    """
    _check_cutoff(cutoff)
    adj = s.adjacency(Mode.OUT if directed else Mode.ALL)
    ids = s.nodes.tolist()
    scale = 1.0 if directed else 0.5
    out = {}
    for root in _sources(s, nodes):
        out[ids[root]] = math.fsum(_dependencies(adj, root, cutoff).values()) * scale
    return out


def closeness(
    s: Snapshot, cutoff: int | None = None, mode: Mode | str = Mode.OUT, nodes: Iterable[int] | None = None
) -> dict[int, float]:
    """Inverse of the summed distance to all nodes reached within ``cutoff``; 0 if none."""
    _check_cutoff(cutoff)
    adj = s.adjacency(mode)
    ids = s.nodes.tolist()
    out = {}
    for root in _sources(s, nodes):
        total = sum(bfs_distances(adj, root, cutoff).values())
        out[ids[root]] = 1.0 / total if total else 0.0
    return out


@dataclass(frozen=True)
class Eccentricity:
    ecc: dict[int, int]
    radius: int


def eccentricity_radius(
    s: Snapshot, mode: Mode | str = Mode.ALL, nodes: Iterable[int] | None = None
) -> Eccentricity:
    """Per-node eccentricity over reachable nodes (0 when nothing is reachable).

    The radius is the smallest eccentricity among evaluated nodes that reach
    at least one other node.
    """
    if s.e_count == 0:
        raise MetricError("eccentricity undefined on an edgeless graph")
    adj = s.adjacency(mode)
    ids = s.nodes.tolist()
    ecc = {}
    for root in _sources(s, nodes):
        ecc[ids[root]] = max(bfs_distances(adj, root).values())
    positive = [e for e in ecc.values() if e > 0]
    if not positive:
        raise MetricError("no evaluated node reaches another node")
    return Eccentricity(ecc=ecc, radius=min(positive))


def eccentricity(s: Snapshot, mode: Mode | str = Mode.ALL, nodes: Iterable[int] | None = None) -> dict[int, int]:
    adj = s.adjacency(mode)
    ids = s.nodes.tolist()
    return {ids[r]: max(bfs_distances(adj, r).values()) for r in _sources(s, nodes)}


def diameter(s: Snapshot, mode: Mode | str = Mode.OUT) -> int:
    """Longest finite geodesic."""
    if s.e_count == 0:
        raise MetricError("diameter undefined on an edgeless graph")
    adj = s.adjacency(mode)
    return max(max(bfs_distances(adj, r).values()) for r in range(s.v_count))


@dataclass(frozen=True)
class PathStats:
    mean: float
    reachable_fraction: float


def avg_shortest_path(
    s: Snapshot, sources: Iterable[int] | None = None, mode: Mode | str = Mode.OUT
) -> PathStats:
    """Mean geodesic length from ``sources`` to every distinct node they reach."""
    adj = s.adjacency(mode)
    roots = _sources(s, sources)
    total = 0
    finite = 0
    for root in roots:
        dist = bfs_distances(adj, root)
        total += sum(dist.values())
        finite += len(dist) - 1
    if finite == 0:
        raise MetricError("no finite distance between distinct nodes")
    return PathStats(mean=total / finite, reachable_fraction=finite / (len(roots) * (s.v_count - 1)))


def mean_distance(
    s: Snapshot, nodes: Iterable[int] | None = None, mode: Mode | str = Mode.OUT
) -> dict[int, float | None]:
    """Per source, the mean geodesic length to the nodes it reaches (None if it reaches none)."""
    adj = s.adjacency(mode)
    ids = s.nodes.tolist()
    out: dict[int, float | None] = {}
    for root in _sources(s, nodes):
        dist = bfs_distances(adj, root)
        out[ids[root]] = sum(dist.values()) / (len(dist) - 1) if len(dist) > 1 else None
    return out
