"""Streaming maintenance of temporal butterfly counts over an edge stream.

Two engines keep a sliding window's six counters current.  The single-edge
engine recomputes, per inserted or deleted edge, the exact counts of the
butterflies containing that edge.  The batch engine exploits that windows
slide chronologically: a deleted edge only ever accounts for butterflies in
which it is the strict minimum timestamp, an inserted edge for those where
it is the strict maximum, so a whole stride of deletions and insertions can
be counted independently per edge, in parallel, against one fixed graph.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right, insort
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

from .count import CountVector, TimestampIndex, _counting_visit, _cross_lists, _wedge_order
from .graph import LAYOUT_TIME, TemporalBipartiteGraph, TemporalEdge, sort_adjacency_by_time

__all__ = [
    "StreamOrderError",
    "delta_count_edge",
    "stream_insert",
    "stream_delete",
    "batch_update",
    "SlidingWindow",
    "run_sliding_window",
]

EmissionSink = Callable[[int, int, int, CountVector], None]


class StreamOrderError(ValueError):
    """Raised when a stream edge arrives out of chronological order."""


def _require_time_layout(g: TemporalBipartiteGraph) -> None:
    if g.layout != LAYOUT_TIME:
        raise ValueError("streaming requires time-sorted adjacency; call sort_adjacency_by_time")


def _entry_t(entry: tuple[int, int, int]) -> int:
    return entry[1]


def _time_range(row: list[tuple[int, int, int]], lo: int, hi: int) -> tuple[int, int]:
    """Index range of entries with lo <= t <= hi."""
    return bisect_left(row, lo, key=_entry_t), bisect_right(row, hi, key=_entry_t)


def delta_count_edge(g: TemporalBipartiteGraph, delta: int, e: TemporalEdge) -> CountVector:
    """Exact per-type counts of the butterflies containing edge e.

    Every butterfly through e = (u, v, t) splits, seen from u, into the wedge
    through v whose first leg is e itself and a wedge through another middle,
    both ending at the opposite upper corner.  Both wedge families are read
    off time-sorted adjacency inside [t - delta, t + delta] and cross-matched
    per end vertex; only cross pairs are taken, so e is in every match.
    """
    _require_time_layout(g)
    if not g.has_edge(e):
        raise ValueError(f"edge {e} is not in the graph")
    u, v, t, _ = e
    acc = [0] * 6
    via: dict[int, tuple[list, list]] = {}
    row = g.lower_adj[v]
    lo, hi = _time_range(row, t - delta, t + delta)
    for i in range(lo, hi):
        w, t2, _uid = row[i]
        if w == u or t2 == t:
            continue
        pair = via.get(w)
        if pair is None:
            via[w] = pair = ([], [])
        if t < t2:
            pair[0].append((t, t2))
        else:
            pair[1].append((t2, t))
    if not via:
        return CountVector.zeros()
    other: dict[int, tuple[list, list]] = {}
    urow = g.upper_adj[u]
    lo, hi = _time_range(urow, t - delta, t + delta)
    for i in range(lo, hi):
        x, t1, _uid = urow[i]
        if x == v or t1 == t:
            continue
        xrow = g.lower_adj[x]
        xlo, xhi = _time_range(xrow, max(t, t1) - delta, min(t, t1) + delta)
        for j in range(xlo, xhi):
            w, t2, _uid2 = xrow[j]
            if w == u or t2 == t or t2 == t1:
                continue
            if w not in via:
                continue
            pair = other.get(w)
            if pair is None:
                other[w] = pair = ([], [])
            if t1 < t2:
                pair[0].append((t1, t2))
            else:
                pair[1].append((t2, t1))
    visit = _counting_visit(acc, 0)
    make_index = lambda slot: TimestampIndex()
    for w, other_pair in other.items():
        via_pair = via[w]
        for part in (*via_pair, *other_pair):
            part.sort(key=_wedge_order)
        _cross_lists(via_pair, other_pair, delta, make_index, visit)
    return CountVector(acc)


def stream_insert(g: TemporalBipartiteGraph, delta: int, u_token: str, v_token: str, t: int, live: CountVector) -> TemporalEdge:
    """Insert one edge and add the butterflies it completes to live."""
    e = g.insert_edge(u_token, v_token, t)
    live.add_(delta_count_edge(g, delta, e))
    return e


def stream_delete(g: TemporalBipartiteGraph, delta: int, e: TemporalEdge, live: CountVector) -> None:
    """Subtract the butterflies containing e from live, then remove e."""
    live.sub_(delta_count_edge(g, delta, e))
    g.remove_edge(e)
    assert all(c >= 0 for c in live), "live counts went negative"


# --- batch path -------------------------------------------------------------


class SortedWedgeColumns:
    """Per-end-vertex wedge store as four independently sorted columns.

    Forward and backward wedges each keep their start timestamps and arrival
    timestamps in two parallel-by-multiset ascending lists.  Columns are
    filled unsorted and sorted lazily on first probe, so buckets that never
    meet a partner wedge are never sorted.  Rank queries are binary searches.
    """

    __slots__ = ("fwd_starts", "fwd_arrivals", "bwd_starts", "bwd_arrivals", "_sorted")

    def __init__(self) -> None:
        self.fwd_starts: list[int] = []
        self.fwd_arrivals: list[int] = []
        self.bwd_starts: list[int] = []
        self.bwd_arrivals: list[int] = []
        self._sorted = False

    def add(self, ts: int, ta: int) -> None:
        if ts < ta:
            self.fwd_starts.append(ts)
            self.fwd_arrivals.append(ta)
        else:
            self.bwd_starts.append(ta)
            self.bwd_arrivals.append(ts)

    def ensure_sorted(self) -> None:
        if not self._sorted:
            self.fwd_starts.sort()
            self.fwd_arrivals.sort()
            self.bwd_starts.sort()
            self.bwd_arrivals.sort()
            self._sorted = True


def _count_gt(col: list[int], x: int) -> int:
    return len(col) - bisect_right(col, x)


def _count_ge(col: list[int], x: int) -> int:
    return len(col) - bisect_left(col, x)


def _count_lt(col: list[int], x: int) -> int:
    return bisect_left(col, x)


def _count_edge_as_minimum(g: TemporalBipartiteGraph, delta: int, e: TemporalEdge) -> list[int]:
    """Counts of butterflies containing e in which e.t is the strict minimum.

    All other timestamps then lie in (t, t + delta], so the span bound holds
    by construction and the via-v wedge is always forward.
    """
    u, v, t, _ = e
    hi = t + delta
    via: dict[int, list[int]] = {}
    row = g.lower_adj[v]
    for i in range(*_time_range(row, t + 1, hi)):
        w, t2, _uid = row[i]
        if w != u:
            via.setdefault(w, []).append(t2)
    acc = [0] * 6
    if not via:
        return acc
    other: dict[int, SortedWedgeColumns] = {}
    urow = g.upper_adj[u]
    for i in range(*_time_range(urow, t + 1, hi)):
        x, t1, _uid = urow[i]
        if x == v:
            continue
        xrow = g.lower_adj[x]
        for j in range(*_time_range(xrow, t + 1, hi)):
            w, t2, _uid2 = xrow[j]
            if w == u or t2 == t1 or w not in via:
                continue
            cols = other.get(w)
            if cols is None:
                other[w] = cols = SortedWedgeColumns()
            cols.add(t1, t2)
    for w, cols in other.items():
        cols.ensure_sorted()
        fs, fa = cols.fwd_starts, cols.fwd_arrivals
        bs, ba = cols.bwd_starts, cols.bwd_arrivals
        for pivot in via[w]:
            # via wedge (t, pivot) is forward; forward partners are same direction
            acc[0] += _count_gt(fs, pivot)
            acc[1] += _count_gt(fa, pivot) - _count_ge(fs, pivot)
            acc[2] += _count_lt(fa, pivot)
            acc[3] += _count_gt(bs, pivot)
            acc[4] += _count_gt(ba, pivot) - _count_ge(bs, pivot)
            acc[5] += _count_lt(ba, pivot)
    return acc


def _count_edge_as_maximum(g: TemporalBipartiteGraph, delta: int, e: TemporalEdge) -> list[int]:
    """Counts of butterflies containing e in which e.t is the strict maximum.

    Mirror image of the minimum path: ranges become [t - delta, t) and the
    via-v wedge is always backward, which swaps the same-direction partner
    subset and mirrors the rank arithmetic.
    """
    u, v, t, _ = e
    lo = t - delta
    via: dict[int, list[int]] = {}
    row = g.lower_adj[v]
    for i in range(*_time_range(row, lo, t - 1)):
        w, t2, _uid = row[i]
        if w != u:
            via.setdefault(w, []).append(t2)
    acc = [0] * 6
    if not via:
        return acc
    other: dict[int, SortedWedgeColumns] = {}
    urow = g.upper_adj[u]
    for i in range(*_time_range(urow, lo, t - 1)):
        x, t1, _uid = urow[i]
        if x == v:
            continue
        xrow = g.lower_adj[x]
        for j in range(*_time_range(xrow, lo, t - 1)):
            w, t2, _uid2 = xrow[j]
            if w == u or t2 == t1 or w not in via:
                continue
            cols = other.get(w)
            if cols is None:
                other[w] = cols = SortedWedgeColumns()
            cols.add(t1, t2)
    for w, cols in other.items():
        cols.ensure_sorted()
        fs, fa = cols.fwd_starts, cols.fwd_arrivals
        bs, ba = cols.bwd_starts, cols.bwd_arrivals
        for pivot in via[w]:
            # via wedge (pivot, t) is backward; backward partners are same direction
            acc[0] += _count_lt(ba, pivot)
            acc[1] += _count_gt(ba, pivot) - _count_ge(bs, pivot)
            acc[2] += _count_gt(bs, pivot)
            acc[3] += _count_lt(fa, pivot)
            acc[4] += _count_gt(fa, pivot) - _count_ge(fs, pivot)
            acc[5] += _count_gt(fs, pivot)
    return acc


def _min_live_t(g: TemporalBipartiteGraph, skip_uids: set[int]) -> int | None:
    best = None
    for row in g.upper_adj:
        for nbr, t, uid in row:
            if uid in skip_uids:
                continue
            if best is None or t < best:
                best = t
            break
    return best


def _max_live_t(g: TemporalBipartiteGraph, skip_uids: set[int]) -> int | None:
    best = None
    for row in g.upper_adj:
        for nbr, t, uid in reversed(row):
            if uid in skip_uids:
                continue
            if best is None or t > best:
                best = t
            break
    return best


def batch_update(
    g: TemporalBipartiteGraph,
    delta: int,
    deletions: list[TemporalEdge],
    insertions: list[tuple[str, str, int]],
    live: CountVector,
    workers: int = 1,
    stats: dict | None = None,
) -> list[TemporalEdge]:
    """Apply one window slide: delete an oldest prefix, insert a newest suffix.

    The deletion batch must be a timestamp prefix of the graph's edges and
    the insertion batch a timestamp suffix of the stream; then every affected
    butterfly has its minimum-timestamp edge among the deletions or its
    maximum-timestamp edge among the insertions, never both counted, so
    per-edge counting cannot double-count.  Insertions go into the graph
    before counting; deletions leave it only after counting is done.  The
    counting phase is read-only on the graph and is split over workers, each
    with its own accumulator, reduced deterministically at the end.

    Returns the inserted edge records.
    """
    _require_time_layout(g)
    if workers < 1:
        raise ValueError(f"workers must be positive, got {workers}")
    del_uids = {e.uid for e in deletions}
    for batch, what in ((deletions, "deletion"), (insertions, "insertion")):
        ts = [e[2] if what == "insertion" else e.t for e in batch]
        if any(a > b for a, b in zip(ts, ts[1:])):
            raise ValueError(f"{what} batch is not chronologically ordered")
    if deletions:
        for e in deletions:
            if not g.has_edge(e):
                raise ValueError(f"deletion batch edge {e} is not in the graph")
        floor = _min_live_t(g, del_uids)
        if floor is not None and deletions[-1].t > floor:
            raise ValueError("deletion batch is not an oldest-timestamp prefix of the graph")
    if insertions:
        ceil = _max_live_t(g, set())
        if ceil is not None and insertions[0][2] < ceil:
            raise ValueError("insertion batch is not a newest-timestamp suffix of the stream")
    inserted = [g.insert_edge(u, v, t) for u, v, t in insertions]

    jobs: list[tuple[TemporalEdge, int]] = [(e, -1) for e in deletions] + [(e, 1) for e in inserted]

    def run_slice(k: int) -> tuple[list[int], list[int]]:
        removed = [0] * 6
        added = [0] * 6
        for e, sign in jobs[k::workers]:
            if sign < 0:
                part = _count_edge_as_minimum(g, delta, e)
                for i in range(6):
                    removed[i] += part[i]
            else:
                part = _count_edge_as_maximum(g, delta, e)
                for i in range(6):
                    added[i] += part[i]
        return removed, added

    if workers == 1 or len(jobs) <= 1:
        slices = [run_slice(0)] if jobs else []
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            slices = list(pool.map(run_slice, range(workers)))
    removed_total = [0] * 6
    added_total = [0] * 6
    for removed, added in slices:
        for i in range(6):
            removed_total[i] += removed[i]
            added_total[i] += added[i]
    for e in deletions:
        g.remove_edge(e)
    live.add_(added_total)
    live.sub_(removed_total)
    assert all(c >= 0 for c in live), "live counts went negative"
    if stats is not None:
        stats["removed"] = CountVector(removed_total)
        stats["added"] = CountVector(added_total)
    return inserted


# --- sliding-window driver --------------------------------------------------


class SlidingWindow:
    """Most recent `window` stream edges plus their live butterfly counts."""

    __slots__ = ("graph", "delta", "window", "stride", "buffer", "live")

    def __init__(self, delta: int, window: int, stride: int) -> None:
        if stride < 1:
            raise ValueError(f"stride must be at least 1, got {stride}")
        if window < stride:
            raise ValueError(f"window ({window}) must be at least the stride ({stride})")
        if delta < 0:
            raise ValueError(f"delta must be non-negative, got {delta}")
        self.graph = TemporalBipartiteGraph()
        sort_adjacency_by_time(self.graph)
        self.delta = delta
        self.window = window
        self.stride = stride
        self.buffer: deque[TemporalEdge] = deque()
        self.live = CountVector.zeros()

    def advance_single(self, chunk: list[tuple[str, str, int]]) -> None:
        for u, v, t in chunk:
            self.buffer.append(stream_insert(self.graph, self.delta, u, v, t, self.live))
        while len(self.buffer) > self.window:
            stream_delete(self.graph, self.delta, self.buffer.popleft(), self.live)

    def advance_batch(self, chunk: list[tuple[str, str, int]], workers: int) -> None:
        excess = len(self.buffer) + len(chunk) - self.window
        deletions = [self.buffer[i] for i in range(max(0, excess))]
        inserted = batch_update(self.graph, self.delta, deletions, chunk, self.live, workers)
        for _ in deletions:
            self.buffer.popleft()
        self.buffer.extend(inserted)

    def bounds(self) -> tuple[int, int]:
        return self.buffer[0].t, self.buffer[-1].t


def run_sliding_window(
    source: Iterable[tuple[str, str, int]],
    delta: int,
    window: int,
    stride: int,
    engine: str = "stbc",
    workers: int = 1,
    sink: EmissionSink | None = None,
) -> None:
    """Drive a sliding window over a chronological edge stream.

    The stream is consumed stride edges at a time (the final chunk may be
    short).  Each step inserts its chunk, evicts down to the window capacity,
    and emits (step index, oldest t, newest t, live counts) to the sink; the
    fill phase emits too.  engine picks the per-edge path ("stbc") or the
    batched path ("stbc+"); workers only applies to the latter.  A stream
    that goes backward in time raises StreamOrderError naming the edge.
    """
    if engine not in ("stbc", "stbc+"):
        raise ValueError(f"unknown streaming engine {engine!r}")
    win = SlidingWindow(delta, window, stride)
    step = 0
    last_t: int | None = None
    chunk: list[tuple[str, str, int]] = []

    def flush() -> None:
        nonlocal step, chunk
        if engine == "stbc":
            win.advance_single(chunk)
        else:
            win.advance_batch(chunk, workers)
        if sink is not None:
            start_t, end_t = win.bounds()
            sink(step, start_t, end_t, win.live.copy())
        step += 1
        chunk = []

    for u, v, t in source:
        if last_t is not None and t < last_t:
            raise StreamOrderError(
                f"edge ({u}, {v}, {t}) arrived after an edge with timestamp {last_t}"
            )
        last_t = t
        chunk.append((u, v, t))
        if len(chunk) == stride:
            flush()
    if chunk:
        flush()
