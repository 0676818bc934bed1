"""Synthetic follow streams and random digraphs with known ground truth.

All randomness comes from ``numpy.random.PCG64`` seeded with the given
integer, so a seed reproduces a stream byte for byte.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .graph import Snapshot
from .timeinfer import CreationIndex, FollowerList, write_creation_index, write_follower_lists

RNG_ALGORITHM = "numpy.random.PCG64"
FOLLOWBACK_MEAN_DELAY = 2.0  # follow events
_MAX_TRIES = 8


@dataclass(frozen=True)
class StreamParams:
    n_users: int
    arrivals: float = 1.0
    follows_per_tick: float = 5.0
    attach_exponent: float = 1.0
    p_followback: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n_users < 2:
            raise ValueError("n_users must be >= 2")
        if self.arrivals <= 0 or self.follows_per_tick <= 0:
            raise ValueError("rates must be > 0")
        if not 0.0 <= self.p_followback <= 1.0:
            raise ValueError("p_followback must lie in [0, 1]")


@dataclass
class FollowStream:
    lists: list[FollowerList]
    truth: dict[tuple[int, int], int]  # (src, dst) -> tick the edge was created
    idx: CreationIndex
    params: StreamParams

    @property
    def metadata(self) -> str:
        fields = " ".join(f"{k}={v}" for k, v in asdict(self.params).items())
        return f"tempograph synthetic stream; rng={RNG_ALGORITHM}; {fields}"


def _count(rate: float, rng: np.random.Generator) -> int:
    """Integer part of the rate always, plus one more with the fractional probability."""
    whole = math.floor(rate)
    return whole + int(rng.random() < rate - whole)


def generate_follow_stream(p: StreamParams) -> FollowStream:
    """Simulate account arrivals and follows tick by tick.

    Each tick first creates ``arrivals`` accounts (ids are creation ranks),
    then performs ``follows_per_tick`` follows: a uniformly chosen existing
    account follows a target drawn with weight ``(in_degree + 1) **
    attach_exponent``. With probability ``p_followback`` the target follows
    back after a geometric number of further follow events (mean 2). A
    random follow whose reverse edge already exists is redrawn, so every
    reciprocal pair comes from the followback mechanism. The run ends once
    every account exists; pending followbacks fire on the last tick.
    """
    rng = np.random.Generator(np.random.PCG64(p.seed))
    n = p.n_users
    indeg = np.zeros(n, dtype=float)
    created_at: list[int] = []
    followers: dict[int, list[int]] = {}
    truth: dict[tuple[int, int], int] = {}
    pending: list[tuple[int, int, int, int]] = []  # (due event, push order, src, dst)
    events = 0
    pushes = 0

    def add_edge(src: int, dst: int, tick: int) -> None:
        nonlocal events
        truth[(src, dst)] = tick
        followers.setdefault(dst, []).append(src)
        indeg[dst] += 1
        events += 1

    def fire_due(tick: int, flush: bool = False) -> None:
        while pending and (flush or pending[0][0] <= events):
            _, _, src, dst = heapq.heappop(pending)
            if (src, dst) not in truth:
                add_edge(src, dst, tick)

    tick = 0
    while True:
        new = min(_count(p.arrivals, rng), n - len(created_at))
        created_at.extend([tick] * new)
        alive = len(created_at)
        k = _count(p.follows_per_tick, rng) if alive >= 2 else 0
        if k:
            cum = np.cumsum((indeg[:alive] + 1.0) ** p.attach_exponent)
        for _ in range(k):
            for _try in range(_MAX_TRIES):
                src = int(rng.integers(alive))
                dst = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
                dst = min(dst, alive - 1)
                if src != dst and (src, dst) not in truth and (dst, src) not in truth:
                    break
            else:
                continue
            add_edge(src, dst, tick)
            if p.p_followback > 0 and rng.random() < p.p_followback:
                delay = int(rng.geometric(1.0 / (1.0 + FOLLOWBACK_MEAN_DELAY))) - 1
                heapq.heappush(pending, (events + delay, pushes, dst, src))
                pushes += 1
            fire_due(tick)
        if alive == n:
            fire_due(tick, flush=True)
            break
        tick += 1

    lists = [FollowerList(t, tuple(fs)) for t, fs in sorted(followers.items())]
    idx = CreationIndex({i: t for i, t in enumerate(created_at)})
    return FollowStream(lists=lists, truth=truth, idx=idx, params=p)


def write_stream(stream: FollowStream, directory: str | Path) -> dict[str, Path]:
    """Write ``followers.txt``, ``creation.txt`` and ``truth.txt`` into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "lists": directory / "followers.txt",
        "index": directory / "creation.txt",
        "truth": directory / "truth.txt",
    }
    with open(paths["lists"], "w", encoding="utf-8", newline="\n") as fh:
        write_follower_lists(stream.lists, fh, header=stream.metadata)
    with open(paths["index"], "w", encoding="utf-8", newline="\n") as fh:
        write_creation_index(stream.idx, fh, header=stream.metadata)
    with open(paths["truth"], "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# {stream.metadata}\n")
        for (src, dst), t in sorted(stream.truth.items(), key=lambda kv: (kv[1], kv[0])):
            fh.write(f"{src}\t{dst}\t{t}\n")
    return paths


def generate_random_digraph(n: int, p_edge: float, seed: int = 0) -> Snapshot:
    """Each ordered pair ``u != v`` on nodes ``0..n-1`` is an edge with probability ``p_edge``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= p_edge <= 1.0:
        raise ValueError("p_edge must lie in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    # row by row draws the same stream as one n x n matrix without holding it
    src, dst = [], []
    for u in range(n):
        row = np.flatnonzero(rng.random(n) < p_edge)
        row = row[row != u]
        src.append(np.full(len(row), u, dtype=np.int64))
        dst.append(row)
    return Snapshot.from_edges(np.concatenate(src), np.concatenate(dst), nodes=np.arange(n))
