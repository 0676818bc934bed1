"""Lower-bound edge creation times from ordered follower lists.

Follower lists carry the order in which accounts followed a target but not
when. Account ids (or an explicit creation index) do carry account creation
order, and an account cannot follow anyone before it exists. So the k-th
follower's edge can be no older than the newest account among the first k
followers: that running maximum is the inferred ``est_time``.
"""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping

import numpy as np

from .errors import DataError
from .graph import TemporalEdgeList


@dataclass(frozen=True)
class FollowerList:
    """A target account and its followers, oldest follow first."""

    target: int
    followers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "followers", tuple(int(f) for f in self.followers))
        if self.target in self.followers:
            raise DataError(f"target {self.target} appears in its own follower list")
        if len(set(self.followers)) != len(self.followers):
            dup = next(f for f, c in Counter(self.followers).items() if c > 1)
            raise DataError(f"duplicate follower id {dup} in list of {self.target}")


class CreationIndex:
    """Account id -> creation timestamp.

    ``CreationIndex()`` with no mapping is the identity (id = creation rank).
    ``epoch=True`` marks the timestamps as Unix seconds, which enables
    calendar era splitting.
    """

    def __init__(self, mapping: Mapping[int, int] | None = None, epoch: bool = False):
        self.mapping = None if mapping is None else {int(k): int(v) for k, v in mapping.items()}
        self.epoch = epoch

    @property
    def is_identity(self) -> bool:
        return self.mapping is None

    def __getitem__(self, node_id: int) -> int:
        if self.mapping is None:
            return int(node_id)
        try:
            return self.mapping[node_id]
        except KeyError:
            raise DataError(f"id {node_id} missing from creation index") from None

    def __contains__(self, node_id: int) -> bool:
        return self.mapping is None or node_id in self.mapping

    def __len__(self) -> int:
        return 0 if self.mapping is None else len(self.mapping)

    def remap(self, fn) -> "CreationIndex":
        """New index with every timestamp passed through ``fn``."""
        if self.mapping is None:
            raise ValueError("cannot remap the identity index")
        return CreationIndex({k: fn(v) for k, v in self.mapping.items()}, epoch=self.epoch)


def infer_edge_times(lists: Iterable[FollowerList], idx: CreationIndex | None = None) -> TemporalEdgeList:
    """Turn follower lists into a globally ordered edge list.

    Ties on ``est_time`` go to the smaller position within its list, then to
    the earlier list.
    """
    idx = idx or CreationIndex()
    src, dst, est, pos, owner = [], [], [], [], []
    for li, fl in enumerate(lists):
        running = -1
        for p, follower in enumerate(fl.followers):
            running = max(running, idx[follower])
            src.append(follower)
            dst.append(fl.target)
            est.append(running)
            pos.append(p)
            owner.append(li)
        if fl.followers and fl.target not in idx:
            raise DataError(f"id {fl.target} missing from creation index")
    if not src:
        return TemporalEdgeList.from_arrays([], [], [])
    ingest = np.lexsort((np.asarray(owner), np.asarray(pos)))
    seq = np.empty(len(src), dtype=np.int64)
    seq[ingest] = np.arange(len(src))
    return TemporalEdgeList.from_arrays(src, dst, est, seq)


def followback_order_histogram(edges: TemporalEdgeList) -> dict[int, int]:
    """Histogram of followback orders.

    For each reciprocal pair where ``A -> B`` comes before ``B -> A`` in the
    global order, the order is the number of edges ``B`` created strictly
    between the two events (0 means B followed back its most recent follower).
    """
    src, dst = edges.src.tolist(), edges.dst.tolist()
    position = {(s, d): i for i, (s, d) in enumerate(zip(src, dst))}
    out_positions: dict[int, list[int]] = {}
    for i, s in enumerate(src):
        out_positions.setdefault(s, []).append(i)

    hist: Counter[int] = Counter()
    for i, (a, b) in enumerate(zip(src, dst)):
        j = position.get((b, a))
        if j is None or j < i:
            continue
        pos_b = out_positions[b]
        k = bisect.bisect_left(pos_b, j) - bisect.bisect_right(pos_b, i)
        hist[k] += 1
    return dict(sorted(hist.items()))


# -- file formats -----------------------------------------------------------


def _lines(source: str | Path | IO[str]):
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
        name = str(source)
    else:
        text = source.read()
        name = getattr(source, "name", None)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line, name


def _int(tok: str, lineno: int, name: str | None) -> int:
    try:
        value = int(tok.strip())
    except ValueError:
        raise DataError(f"not an integer: {tok.strip()!r}", lineno, name) from None
    if value < 0:
        raise DataError(f"negative value {value}", lineno, name)
    return value


def read_follower_lists(source: str | Path | IO[str], newest_first: bool = False) -> list[FollowerList]:
    """Parse ``target:U1,U2,...`` lines (oldest follower first unless ``newest_first``)."""
    out = []
    for lineno, line, name in _lines(source):
        if ":" not in line:
            raise DataError("expected 'target:U1,U2,...'", lineno, name)
        head, tail = line.split(":", 1)
        target = _int(head, lineno, name)
        followers = [_int(t, lineno, name) for t in tail.split(",") if t.strip()]
        if newest_first:
            followers.reverse()
        try:
            out.append(FollowerList(target, tuple(followers)))
        except DataError as exc:
            raise DataError(str(exc), lineno, name) from None
    return out


def write_follower_lists(lists: Iterable[FollowerList], dest: IO[str], header: str | None = None) -> None:
    if header:
        for h in header.splitlines():
            dest.write(f"# {h}\n")
    for fl in lists:
        dest.write(f"{fl.target}:{','.join(map(str, fl.followers))}\n")


def read_creation_index(source: str | Path | IO[str], epoch: bool = False) -> CreationIndex:
    """Parse ``id<TAB>timestamp`` lines."""
    mapping = {}
    for lineno, line, name in _lines(source):
        parts = line.split()
        if len(parts) != 2:
            raise DataError("expected 'id<TAB>timestamp'", lineno, name)
        node, ts = (_int(p, lineno, name) for p in parts)
        if node in mapping:
            raise DataError(f"id {node} listed twice", lineno, name)
        mapping[node] = ts
    return CreationIndex(mapping, epoch=epoch)


def write_creation_index(idx: CreationIndex, dest: IO[str], header: str | None = None) -> None:
    if idx.mapping is None:
        raise ValueError("identity index has no entries to write")
    if header:
        for h in header.splitlines():
            dest.write(f"# {h}\n")
    for node in sorted(idx.mapping):
        dest.write(f"{node}\t{idx.mapping[node]}\n")
