"""Directed graph snapshots, time-ordered edge storage and streaming connectivity.

Node ids are non-negative integers. Internally every :class:`Snapshot` maps
its ids to dense indices ``0..n-1`` (the position of the id in the sorted
``nodes`` array) and stores adjacency as CSR arrays: ``out_offsets[i]`` to
``out_offsets[i + 1]`` delimits the sorted out-neighbors of node ``i`` inside
``out_targets``, and likewise for in-neighbors.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import DataError

logger = logging.getLogger(__name__)


class Mode(str, Enum):
    """Direction handling for degree- and distance-based metrics."""

    IN = "in"
    OUT = "out"
    ALL = "all"

    @classmethod
    def parse(cls, value: "Mode | str") -> "Mode":
        if isinstance(value, Mode):
            return value
        return cls(str(value).lower())


@dataclass(frozen=True)
class TimedEdge:
    src: int
    dst: int
    est_time: int
    seq: int


@dataclass(eq=False)
class TemporalEdgeList:
    """Directed edges sorted by ``(est_time, seq)``.

    Construct through :meth:`from_records`, which validates, sorts,
    drops self-loops and keeps only the earliest copy of a repeated
    ``(src, dst)`` pair. ``seq`` is renumbered to ``0..m-1`` in the final
    order so that a dump/re-ingest round trip is lossless.
    """

    src: np.ndarray
    dst: np.ndarray
    est_time: np.ndarray
    seq: np.ndarray
    self_loops_rejected: int = 0
    duplicates_dropped: int = 0

    @classmethod
    def from_records(cls, records: Iterable[Sequence[int]]) -> "TemporalEdgeList":
        """Build from ``(src, dst, est_time)`` or ``(src, dst, est_time, seq)`` tuples.

        Without an explicit seq the record position is used.
        """
        rows = [tuple(r) for r in records]
        if not rows:
            return cls.from_arrays([], [], [])
        width = len(rows[0])
        if width not in (3, 4) or any(len(r) != width for r in rows):
            raise ValueError("records must all be (src, dst, est_time[, seq])")
        arr = np.asarray(rows, dtype=np.int64)
        seq = arr[:, 3] if width == 4 else None
        return cls.from_arrays(arr[:, 0], arr[:, 1], arr[:, 2], seq)

    @classmethod
    def from_arrays(cls, src, dst, est_time, seq=None) -> "TemporalEdgeList":
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        est_time = np.asarray(est_time, dtype=np.int64).ravel()
        if not (len(src) == len(dst) == len(est_time)):
            raise ValueError("src, dst and est_time must have equal length")
        if seq is None:
            seq = np.arange(len(src), dtype=np.int64)
        else:
            seq = np.asarray(seq, dtype=np.int64).ravel()
            if len(seq) != len(src):
                raise ValueError("seq must match the edge arrays in length")
            if len(np.unique(seq)) != len(seq):
                raise ValueError("seq values must be unique")
        if len(src) and (src.min() < 0 or dst.min() < 0):
            raise ValueError("node ids must be non-negative")
        if len(src) and est_time.min() < 0:
            raise ValueError("est_time must be non-negative")

        loops = src == dst
        n_loops = int(loops.sum())
        if n_loops:
            logger.warning("rejected %d self-loop edge(s)", n_loops)
            keep = ~loops
            src, dst, est_time, seq = src[keep], dst[keep], est_time[keep], seq[keep]

        order = np.lexsort((seq, est_time))
        src, dst, est_time = src[order], dst[order], est_time[order]

        # first occurrence of each pair in sorted order is the earliest
        if len(src):
            _, first = np.unique(np.stack([src, dst], axis=1), axis=0, return_index=True)
            first = np.sort(first)
        else:
            first = np.zeros(0, dtype=np.int64)
        n_dup = len(src) - len(first)
        src, dst, est_time = src[first], dst[first], est_time[first]

        return cls(
            src=src,
            dst=dst,
            est_time=est_time,
            seq=np.arange(len(src), dtype=np.int64),
            self_loops_rejected=n_loops,
            duplicates_dropped=n_dup,
        )

    @property
    def edge_count(self) -> int:
        return int(len(self.src))

    @cached_property
    def node_count(self) -> int:
        if not len(self.src):
            return 0
        return int(len(np.unique(np.concatenate([self.src, self.dst]))))

    def __len__(self) -> int:
        return self.edge_count

    def __iter__(self):
        for i in range(self.edge_count):
            yield TimedEdge(int(self.src[i]), int(self.dst[i]), int(self.est_time[i]), int(self.seq[i]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TemporalEdgeList):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f)) for f in ("src", "dst", "est_time", "seq")
        )

    def count_until(self, t: int) -> int:
        """Number of edges with ``est_time <= t``."""
        return int(np.searchsorted(self.est_time, t, side="right"))

    def prefix(self, count: int) -> "Snapshot":
        """Snapshot of the first ``count`` edges in global order."""
        return Snapshot.from_edges(self.src[:count], self.dst[:count])


def build_snapshot(edges: TemporalEdgeList, t: int) -> "Snapshot":
    """Snapshot containing exactly the edges with ``est_time <= t``."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return edges.prefix(edges.count_until(t))


def _csr(rows: np.ndarray, cols: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((cols, rows))
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=n), out=offsets[1:])
    return offsets, cols[order].astype(np.int64)


class Snapshot:
    """Immutable simple graph at one point in time.

    ``directed=False`` marks an undirected graph (symmetric adjacency, each
    edge counted once in ``e_count``), as produced by :func:`undirected_projection`.
    """

    def __init__(
        self,
        nodes: np.ndarray,
        out_offsets: np.ndarray,
        out_targets: np.ndarray,
        in_offsets: np.ndarray,
        in_targets: np.ndarray,
        directed: bool = True,
    ):
        self.nodes = nodes
        self.out_offsets = out_offsets
        self.out_targets = out_targets
        self.in_offsets = in_offsets
        self.in_targets = in_targets
        self.directed = directed
        for a in (nodes, out_offsets, out_targets, in_offsets, in_targets):
            a.setflags(write=False)

    @classmethod
    def from_edges(cls, src, dst, nodes=None, directed: bool = True) -> "Snapshot":
        """Build from parallel id arrays; ``nodes`` adds extra (possibly isolated) ids.

        Duplicate edges collapse; self-loops raise ``ValueError``.
        """
        src = np.asarray(src, dtype=np.int64).ravel()
        dst = np.asarray(dst, dtype=np.int64).ravel()
        if len(src) != len(dst):
            raise ValueError("src and dst must have equal length")
        parts = [src, dst]
        if nodes is not None:
            parts.append(np.asarray(list(nodes) if not isinstance(nodes, np.ndarray) else nodes, dtype=np.int64))
        ids = np.unique(np.concatenate(parts)) if any(len(p) for p in parts) else np.zeros(0, np.int64)
        n = len(ids)
        si = np.searchsorted(ids, src)
        di = np.searchsorted(ids, dst)
        if np.any(si == di):
            raise ValueError("self-loops are not allowed in a snapshot")
        if not directed:
            si, di = np.concatenate([si, di]), np.concatenate([di, si])
        if len(si):
            keys = np.unique(si * max(n, 1) + di)
            si, di = keys // n, keys % n
        out_off, out_tgt = _csr(si, di, n)
        in_off, in_tgt = _csr(di, si, n)
        return cls(ids, out_off, out_tgt, in_off, in_tgt, directed=directed)

    @classmethod
    def empty(cls) -> "Snapshot":
        return cls.from_edges([], [])

    # -- sizes ---------------------------------------------------------------

    @property
    def v_count(self) -> int:
        return int(len(self.nodes))

    @property
    def e_count(self) -> int:
        m = int(len(self.out_targets))
        return m if self.directed else m // 2

    def __len__(self) -> int:
        return self.v_count

    def __repr__(self) -> str:
        kind = "directed" if self.directed else "undirected"
        return f"Snapshot({kind}, |V|={self.v_count}, |E|={self.e_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Snapshot):
            return NotImplemented
        return self.directed == other.directed and all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("nodes", "out_offsets", "out_targets", "in_offsets", "in_targets")
        )

    __hash__ = None  # type: ignore[assignment]

    # -- lookups -------------------------------------------------------------

    def index(self, node_id: int) -> int:
        i = int(np.searchsorted(self.nodes, node_id))
        if i >= len(self.nodes) or self.nodes[i] != node_id:
            raise KeyError(node_id)
        return i

    def indices(self, node_ids: Iterable[int]) -> np.ndarray:
        ids = np.asarray(list(node_ids), dtype=np.int64)
        idx = np.searchsorted(self.nodes, ids)
        for pos, i in enumerate(idx.tolist()):
            if i >= len(self.nodes) or self.nodes[i] != ids[pos]:
                raise KeyError(int(ids[pos]))
        return idx

    @cached_property
    def out_degree(self) -> np.ndarray:
        return np.diff(self.out_offsets)

    @cached_property
    def in_degree(self) -> np.ndarray:
        return np.diff(self.in_offsets)

    def degree(self, mode: Mode | str = Mode.ALL) -> np.ndarray:
        """Per-node degree; ``ALL`` counts distinct neighbors ignoring direction."""
        mode = Mode.parse(mode)
        if mode is Mode.OUT:
            return self.out_degree
        if mode is Mode.IN:
            return self.in_degree
        return self.undirected.out_degree

    @cached_property
    def undirected(self) -> "Snapshot":
        if not self.directed:
            return self
        src = np.repeat(np.arange(self.v_count), self.out_degree)
        und = Snapshot.from_edges(self.nodes[src], self.nodes[self.out_targets], nodes=self.nodes, directed=False)
        return und

    @cached_property
    def _out_lists(self) -> list[list[int]]:
        off, tgt = self.out_offsets.tolist(), self.out_targets.tolist()
        return [tgt[off[i]:off[i + 1]] for i in range(self.v_count)]

    @cached_property
    def _in_lists(self) -> list[list[int]]:
        off, tgt = self.in_offsets.tolist(), self.in_targets.tolist()
        return [tgt[off[i]:off[i + 1]] for i in range(self.v_count)]

    def adjacency(self, mode: Mode | str = Mode.OUT) -> list[list[int]]:
        """Neighbor index lists (sorted) for every node under ``mode``."""
        mode = Mode.parse(mode)
        if mode is Mode.OUT:
            return self._out_lists
        if mode is Mode.IN:
            return self._in_lists
        return self.undirected._out_lists

    def neighbor_sets(self, mode: Mode | str = Mode.ALL) -> list[set[int]]:
        return [set(a) for a in self.adjacency(mode)]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge endpoint ids; undirected graphs report each edge once with ``u < v``."""
        src = np.repeat(np.arange(self.v_count), self.out_degree)
        dst = self.out_targets
        if not self.directed:
            keep = src < dst
            src, dst = src[keep], dst[keep]
        return self.nodes[src], self.nodes[dst]

    def subgraph(self, node_ids: Iterable[int]) -> "Snapshot":
        """Induced subgraph on ``node_ids`` (all must belong to the snapshot)."""
        keep_idx = np.unique(self.indices(node_ids))
        mask = np.zeros(self.v_count, dtype=bool)
        mask[keep_idx] = True
        src = np.repeat(np.arange(self.v_count), self.out_degree)
        sel = mask[src] & mask[self.out_targets]
        s, d = self.nodes[src[sel]], self.nodes[self.out_targets[sel]]
        if not self.directed:
            keep = s < d
            s, d = s[keep], d[keep]
        return Snapshot.from_edges(s, d, nodes=self.nodes[keep_idx], directed=self.directed)


def undirected_projection(s: Snapshot) -> Snapshot:
    """Drop edge directions; ``u -> v`` and ``v -> u`` collapse into one edge."""
    return s.undirected


# -- streaming connectivity -------------------------------------------------


class UnionFind:
    """Disjoint sets over arbitrary hashable ids with union by size."""

    def __init__(self):
        self.parent: dict[int, int] = {}
        self.size: dict[int, int] = {}
        self.largest = 0

    def __len__(self) -> int:
        return len(self.parent)

    def add(self, x: int) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1
            self.largest = max(self.largest, 1)

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        self.add(a)
        self.add(b)
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size.pop(rb)
        self.largest = max(self.largest, self.size[ra])
        return ra

    def component_sizes(self) -> list[int]:
        return sorted(self.size.values(), reverse=True)


def largest_component_ratio_series(
    edges: TemporalEdgeList, checkpoints: Sequence[int]
) -> list[tuple[int, float]]:
    """Share of seen nodes inside the largest weakly connected component.

    ``checkpoints`` are edge counts: checkpoint ``c`` reports the state after
    the first ``c`` edges. A checkpoint with no nodes seen reports 0.0.
    """
    checkpoints = [int(c) for c in checkpoints]
    if not checkpoints:
        return []
    if any(b < a for a, b in zip(checkpoints, checkpoints[1:])):
        raise ValueError("checkpoints must be ascending")
    if checkpoints[0] < 0 or checkpoints[-1] > edges.edge_count:
        raise ValueError(f"checkpoints must lie in [0, {edges.edge_count}]")

    uf = UnionFind()
    src, dst = edges.src.tolist(), edges.dst.tolist()
    out = []
    pos = 0
    for c in checkpoints:
        while pos < c:
            uf.union(src[pos], dst[pos])
            pos += 1
        ratio = uf.largest / len(uf) if len(uf) else 0.0
        out.append((c, ratio))
    return out


# -- edge dump --------------------------------------------------------------


def write_edge_dump(edges: TemporalEdgeList, dest: str | Path | IO[str]) -> None:
    """Write ``src<TAB>dst<TAB>est_time`` lines in global order."""
    lines = "".join(
        f"{s}\t{d}\t{t}\n" for s, d, t in zip(edges.src.tolist(), edges.dst.tolist(), edges.est_time.tolist())
    )
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(lines)
    else:
        dest.write(lines)


def read_edge_dump(source: str | Path | IO[str]) -> TemporalEdgeList:
    """Parse an edge dump. A missing third column means ``est_time = 0``.

    Blank lines and ``#`` comments are skipped; anything else malformed raises
    :class:`DataError` with the 1-based line number.
    """
    name = str(source) if isinstance(source, (str, Path)) else getattr(source, "name", None)
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = source.read()
    rows = []
    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise DataError(f"expected 'src<TAB>dst[<TAB>est_time]', got {raw.rstrip()!r}", lineno, name)
        try:
            vals = [int(p) for p in parts]
        except ValueError:
            raise DataError(f"non-integer field in {raw.rstrip()!r}", lineno, name) from None
        if min(vals) < 0:
            raise DataError("negative id or time", lineno, name)
        if len(vals) == 2:
            vals.append(0)
        rows.append(vals)
    return TemporalEdgeList.from_records(rows)
