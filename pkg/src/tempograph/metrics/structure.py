"""Cliques, motif counts, neighbor-overlap similarities and edge connectivity."""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence

import numpy as np

from ..errors import MetricError
from ..graph import Mode, Snapshot


def max_clique(s: Snapshot) -> int:
    """Size of the largest clique of the undirected projection.

    Bron-Kerbosch with Tomita pivoting, pruned whenever the current clique
    plus all remaining candidates cannot beat the best size found.
    """
    if s.v_count == 0:
        return 0
    nbrs = s.neighbor_sets(Mode.ALL)
    best = 1

    def expand(size: int, cand: set[int], excl: set[int]) -> None:
        nonlocal best
        if not cand:
            if size > best:
                best = size
            return
        if size + len(cand) <= best:
            return
        pivot = max(cand | excl, key=lambda u: len(cand & nbrs[u]))
        for v in sorted(cand - nbrs[pivot]):
            expand(size + 1, cand & nbrs[v], excl & nbrs[v])
            cand.discard(v)
            excl.add(v)
            if size + len(cand) <= best:
                return

    # degeneracy-like order: high-degree vertices first widens the early bound
    order = sorted(range(s.v_count), key=lambda v: -len(nbrs[v]))
    cand = set(range(s.v_count))
    excl: set[int] = set()
    for v in order:
        if 1 + len(cand & nbrs[v]) > best:
            expand(1, cand & nbrs[v], excl & nbrs[v])
        cand.discard(v)
        excl.add(v)
    return best


def _targets(s: Snapshot, targets: Iterable[int] | None) -> list[int]:
    return list(range(s.v_count)) if targets is None else s.indices(targets).tolist()


def cocitation_pair(s: Snapshot, u: int, v: int) -> int:
    """Number of nodes with an edge to both ``u`` and ``v``."""
    inn = s.adjacency(Mode.IN)
    return len(set(inn[s.index(u)]) & set(inn[s.index(v)]))


def cocitation(s: Snapshot, targets: Iterable[int] | None = None) -> dict[int, float]:
    """Mean cocitation of each target with every other node.

    Each citer ``w`` of ``u`` cites ``outdeg(w) - 1`` other nodes, each of
    which gains one shared citation with ``u``.
    """
    n = s.v_count
    inn = s.adjacency(Mode.IN)
    outdeg = s.out_degree.tolist()
    ids = s.nodes.tolist()
    out = {}
    for u in _targets(s, targets):
        total = sum(outdeg[w] - 1 for w in inn[u])
        out[ids[u]] = total / (n - 1) if n > 1 else 0.0
    return out


_REVERSE = {Mode.ALL: Mode.ALL, Mode.OUT: Mode.IN, Mode.IN: Mode.OUT}


def silw_pair(s: Snapshot, u: int, v: int, mode: Mode | str = Mode.ALL) -> float:
    """Inverse-log-weighted similarity: sum of ``1/ln(total degree)`` over common neighbors."""
    adj = s.adjacency(mode)
    total = (s.in_degree + s.out_degree).tolist()
    common = set(adj[s.index(u)]) & set(adj[s.index(v)])
    return math.fsum(1.0 / math.log(total[w]) for w in sorted(common))


def silw(
    s: Snapshot, targets: Iterable[int] | None = None, mode: Mode | str = Mode.ALL
) -> dict[int, float]:
    """Mean inverse-log-weighted similarity of each target with every other node.

    A neighbor ``w`` of ``u`` is shared with every other node that also has
    ``w`` as a neighbor, i.e. with ``w``'s reverse-mode neighbors minus ``u``.
    """
    mode = Mode.parse(mode)
    n = s.v_count
    adj = s.adjacency(mode)
    rev_deg = [len(a) for a in s.adjacency(_REVERSE[mode])]
    total = (s.in_degree + s.out_degree).tolist()
    ids = s.nodes.tolist()
    out = {}
    for u in _targets(s, targets):
        acc = math.fsum((rev_deg[w] - 1) / math.log(total[w]) for w in adj[u] if rev_deg[w] > 1)
        out[ids[u]] = acc / (n - 1) if n > 1 else 0.0
    return out


def motifs_randesu(
    s: Snapshot,
    size: int,
    sample_probs: Sequence[float] | None = None,
    rng: np.random.Generator | int | None = None,
) -> float:
    """Number of connected induced subgraphs with ``size`` nodes (undirected projection).

    ESU enumeration visits each such subgraph exactly once. With
    ``sample_probs`` (one probability per tree level) each branch at level
    ``d`` is followed with probability ``sample_probs[d]`` and every reached
    leaf counts ``1 / prod(sample_probs)``, which keeps the estimate unbiased.
    """
    if size not in (3, 4):
        raise ValueError("motif size must be 3 or 4")
    if sample_probs is None:
        probs = [1.0] * size
    else:
        probs = [float(p) for p in sample_probs]
        if len(probs) != size:
            raise ValueError(f"need {size} level probabilities, got {len(probs)}")
        if any(not 0.0 < p <= 1.0 for p in probs):
            raise ValueError("level probabilities must lie in (0, 1]")
    exact = all(p == 1.0 for p in probs)
    if not exact and not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)

    nbrs = s.neighbor_sets(Mode.ALL)
    last = size - 1
    count = 0

    def keep(level: int) -> bool:
        return exact or probs[level] == 1.0 or rng.random() < probs[level]

    def leaves(n_ext: int) -> int:
        # the children of a (size-1)-node subgraph are leaves: one per extension vertex
        if exact or probs[last] == 1.0:
            return n_ext
        return int(rng.binomial(n_ext, probs[last]))

    def extend(depth: int, covered: set[int], ext: list[int], root: int) -> None:
        nonlocal count
        while ext:
            w = ext.pop()
            if not keep(depth):
                continue
            fresh = [u for u in nbrs[w] if u > root and u not in covered]
            if depth + 1 == last:
                count += leaves(len(ext) + len(fresh))
            else:
                extend(depth + 1, covered | nbrs[w], ext + sorted(fresh), root)

    for v in range(s.v_count):
        if not keep(0):
            continue
        ext = sorted(u for u in nbrs[v] if u > v)
        extend(1, nbrs[v] | {v}, ext, v)

    if exact:
        return count
    return count / math.prod(probs)


def _max_flow(
    residual_nbrs: list[list[int]], cap: dict[tuple[int, int], int], source: int, sink: int, limit: int
) -> int:
    """Unit-capacity max flow by BFS augmenting paths, stopping once ``limit`` is reached."""
    res = dict(cap)
    total = 0
    while total < limit:
        parent = {source: source}
        q = deque([source])
        while q and sink not in parent:
            v = q.popleft()
            for w in residual_nbrs[v]:
                if w not in parent and res.get((v, w), 0) > 0:
                    parent[w] = v
                    q.append(w)
        if sink not in parent:
            break
        w = sink
        while w != source:
            v = parent[w]
            res[(v, w)] -= 1
            res[(w, v)] = res.get((w, v), 0) + 1
            w = v
        total += 1
    return total


def _reaches_all(adj: list[list[int]], root: int) -> bool:
    seen = {root}
    q = deque([root])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                q.append(w)
    return len(seen) == len(adj)


def edge_connectivity(s: Snapshot, directed: bool = False) -> int:
    """Minimum number of edges whose removal disconnects the graph.

    Requires a connected graph (strongly connected when ``directed``). Fixes
    one source and takes the smallest max-flow to or from every other node;
    targets are tried in ascending degree order because 1 ends the search.
    """
    n = s.v_count
    if n <= 1:
        return 0
    if directed:
        out, inn = s.adjacency(Mode.OUT), s.adjacency(Mode.IN)
        if not (_reaches_all(out, 0) and _reaches_all(inn, 0)):
            raise MetricError("graph not connected; extract largest component first")
        cap = {(v, w): 1 for v in range(n) for w in out[v]}
        residual_nbrs = [sorted(set(out[v]) | set(inn[v])) for v in range(n)]
        bound = np.minimum(s.out_degree, s.in_degree)
    else:
        und = s.adjacency(Mode.ALL)
        if not _reaches_all(und, 0):
            raise MetricError("graph not connected; extract largest component first")
        cap = {(v, w): 1 for v in range(n) for w in und[v]}
        residual_nbrs = und
        bound = s.degree(Mode.ALL)

    best = int(bound.min())
    for t in sorted(range(1, n), key=lambda v: (int(bound[v]), v)):
        if best <= 1:
            break
        best = min(best, _max_flow(residual_nbrs, cap, 0, t, best))
        if directed and best > 1:
            best = min(best, _max_flow(residual_nbrs, cap, t, 0, best))
    return best
