"""Power-iteration centralities: PageRank, HITS hub/authority, eigenvector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError, MetricError
from ..graph import Snapshot

MAX_ITER = 10_000


def _edge_index(s: Snapshot) -> tuple[np.ndarray, np.ndarray]:
    src = np.repeat(np.arange(s.v_count), s.out_degree)
    return src, s.out_targets


def _as_dict(s: Snapshot, x: np.ndarray) -> dict[int, float]:
    return dict(zip(s.nodes.tolist(), x.tolist()))


def pagerank(
    s: Snapshot,
    damping: float = 0.85,
    tol: float = 1e-10,
    max_iter: int = MAX_ITER,
    scale: bool = False,
) -> dict[int, float]:
    """PageRank with uniform redistribution of dangling mass.

    Scores sum to 1; ``scale=True`` multiplies them by ``|V|`` so that the
    average score is 1.
    """
    if not 0 < damping < 1:
        raise ValueError("damping must lie in (0, 1)")
    n = s.v_count
    if n == 0:
        raise MetricError("empty graph")
    src, dst = _edge_index(s)
    outdeg = s.out_degree.astype(float)
    dangling = outdeg == 0
    inv_out = np.divide(1.0, outdeg, out=np.zeros(n), where=~dangling)
    x = np.full(n, 1.0 / n)
    residual = np.inf
    for _ in range(max_iter):
        flow = np.bincount(dst, weights=(x * inv_out)[src], minlength=n)
        new = damping * flow + (damping * x[dangling].sum() + (1.0 - damping)) / n
        new /= new.sum()
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            break
    else:
        raise ConvergenceError("pagerank did not converge", residual)
    if scale:
        x = x * n
    return _as_dict(s, x)


@dataclass(frozen=True)
class HitsScores:
    hub: dict[int, float]
    authority: dict[int, float]


def hits_scores(s: Snapshot, tol: float = 1e-10, max_iter: int = MAX_ITER) -> HitsScores:
    """Kleinberg hub and authority scores, each scaled so its maximum is 1."""
    if len(s.out_targets) == 0:
        raise MetricError("hub score needs at least one edge")
    n = s.v_count
    src, dst = _edge_index(s)
    hub = np.ones(n)
    auth = np.ones(n)
    residual = np.inf
    for _ in range(max_iter):
        new_auth = np.bincount(dst, weights=hub[src], minlength=n)
        new_auth /= new_auth.max()
        new_hub = np.bincount(src, weights=new_auth[dst], minlength=n)
        new_hub /= new_hub.max()
        residual = float(np.abs(new_hub - hub).sum() + np.abs(new_auth - auth).sum())
        hub, auth = new_hub, new_auth
        if residual < tol:
            break
    else:
        raise ConvergenceError("HITS did not converge", residual)
    return HitsScores(hub=_as_dict(s, hub), authority=_as_dict(s, auth))


def eigenvector_centrality(
    s: Snapshot, tol: float = 1e-10, directed: bool = False, max_iter: int = MAX_ITER
) -> dict[int, float]:
    """Principal eigenvector of the adjacency matrix, max-normalized to 1.

    Runs on the undirected projection unless ``directed`` is set, in which
    case a node collects the scores of its in-neighbors. Iterates with
    ``A + I`` so bipartite graphs (stars, paths) do not oscillate.
    """
    g = s if directed else s.undirected
    if len(g.out_targets) == 0:
        raise MetricError("eigenvector centrality needs at least one edge")
    n = g.v_count
    src, dst = _edge_index(g)
    x = np.ones(n)
    residual = np.inf
    for _ in range(max_iter):
        new = np.bincount(dst, weights=x[src], minlength=n) + x
        new /= new.max()
        residual = float(np.abs(new - x).sum())
        x = new
        if residual < tol:
            break
    else:
        raise ConvergenceError("eigenvector centrality did not converge", residual)
    return _as_dict(g, x)
