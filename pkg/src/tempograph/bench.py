"""Wall-clock cost of exact metric evaluation on a growing graph."""

from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import dataclass
from typing import Sequence

from .errors import MetricError
from .graph import Snapshot
from .metrics.registry import get_metric


@dataclass(frozen=True)
class BenchCell:
    metric: str
    v_count: int
    e_count: int
    seconds: float | None  # None when the cell timed out
    error: str | None = None

    @property
    def timed_out(self) -> bool:
        return self.seconds is None


def _time_exact(name: str, s: Snapshot) -> tuple[float, str | None]:
    spec = get_metric(name)
    start = time.perf_counter()
    try:
        spec.exact(s)
        error = None
    except MetricError as exc:
        error = str(exc)
    return time.perf_counter() - start, error


def _child(conn, name: str, s: Snapshot) -> None:
    conn.send(_time_exact(name, s))
    conn.close()


def _time_with_timeout(name: str, s: Snapshot, timeout: float) -> tuple[float | None, str | None]:
    ctx = mp.get_context("fork")
    parent, child = ctx.Pipe(duplex=False)
    proc = ctx.Process(target=_child, args=(child, name, s), daemon=True)
    proc.start()
    child.close()
    if parent.poll(timeout):
        result = parent.recv()
        proc.join()
        return result
    proc.terminate()
    proc.join()
    return None, None


def bench_metrics(
    snapshots: Sequence[Snapshot], metrics: Sequence[str], timeout: float | None = None
) -> list[BenchCell]:
    """Time one exact evaluation per (metric, snapshot).

    With ``timeout`` each cell runs in a forked child that is killed when
    the limit passes; since snapshots grow, a metric that timed out is not
    retried on larger snapshots and its remaining cells are marked as
    timeouts too.
    """
    for name in metrics:
        get_metric(name)
    rows = []
    for name in metrics:
        gave_up = False
        for s in snapshots:
            if gave_up:
                rows.append(BenchCell(name, s.v_count, s.e_count, None))
                continue
            if timeout is None:
                seconds, error = _time_exact(name, s)
            else:
                seconds, error = _time_with_timeout(name, s, timeout)
                gave_up = seconds is None
            rows.append(BenchCell(name, s.v_count, s.e_count, seconds, error))
    return rows
