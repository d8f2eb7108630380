"""Exact counting of the six temporal butterfly types.

A temporal butterfly is four temporal edges on two upper and two lower
vertices whose vertex pairs form a 2x2 biclique, whose four timestamps are
pairwise distinct, and whose timestamp span is at most delta (inclusive).
Decomposed from one corner, it is a pair of temporal wedges sharing their
start and end vertices with distinct middles; the type in 0..5 encodes how
the two wedge intervals relate (disjoint, intersecting, one covering the
other) and whether the wedges run in the same direction.

Three engines share one answer:

- count_baseline groups wedges per end vertex and tests every pair.
- count_optimized prunes dead wedges, splits them per middle into forward
  and backward subsets sorted by wedge priority (start timestamp descending,
  arrival ascending), and cross-matches subsets mergesort-style, keeping
  candidate wedges in per-start-timestamp buckets of arrival lists.
- count_extreme is the same traversal with the buckets replaced by twin
  ordered multisets, so each probe is rank arithmetic instead of a walk over
  every live start timestamp.

All engines enumerate wedges only toward strictly lower-priority middle and
end vertices, so each butterfly is seen exactly once, from its max-priority
corner.  count_sampled runs count_extreme on an edge-sampled subgraph and
rescales, giving unbiased estimates.
"""

from __future__ import annotations

import random
from bisect import bisect_left, bisect_right
from typing import Callable, Iterable, Iterator, Sequence

from sortedcontainers import SortedList

from .graph import (
    LAYOUT_PRIORITY,
    TemporalBipartiteGraph,
    VertexPriority,
    compute_vertex_priority,
    sort_adjacency_by_priority,
)

__all__ = [
    "CountVector",
    "classify_type",
    "TimestampIndex",
    "TwinOrderedIndex",
    "combine",
    "count_baseline",
    "count_optimized",
    "count_extreme",
    "count_sampled",
]


class CountVector:
    """Six per-type tallies; component-wise arithmetic, list-like access."""

    __slots__ = ("counts",)

    def __init__(self, counts: Iterable[int | float] | None = None) -> None:
        self.counts = [0, 0, 0, 0, 0, 0] if counts is None else list(counts)
        if len(self.counts) != 6:
            raise ValueError("a count vector has exactly six components")

    @classmethod
    def zeros(cls) -> "CountVector":
        return cls()

    def __getitem__(self, i: int) -> int | float:
        return self.counts[i]

    def __setitem__(self, i: int, value: int | float) -> None:
        self.counts[i] = value

    def __iter__(self) -> Iterator[int | float]:
        return iter(self.counts)

    def __len__(self) -> int:
        return 6

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CountVector):
            return self.counts == other.counts
        if isinstance(other, (list, tuple)):
            return self.counts == list(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"CountVector({self.counts!r})"

    def __add__(self, other: "CountVector") -> "CountVector":
        return CountVector(a + b for a, b in zip(self.counts, other.counts))

    def __sub__(self, other: "CountVector") -> "CountVector":
        return CountVector(a - b for a, b in zip(self.counts, other.counts))

    def add_(self, other: "CountVector | Sequence[int]") -> None:
        for i in range(6):
            self.counts[i] += other[i]

    def sub_(self, other: "CountVector | Sequence[int]") -> None:
        for i in range(6):
            self.counts[i] -= other[i]

    def scaled(self, factor: float) -> "CountVector":
        return CountVector(c * factor for c in self.counts)

    def copy(self) -> "CountVector":
        return CountVector(self.counts)

    def total(self) -> int | float:
        return sum(self.counts)

    def as_dict(self) -> dict[str, int | float]:
        return {f"T{i}": c for i, c in enumerate(self.counts)}


def classify_type(w1: tuple[int, int], w2: tuple[int, int], start_in_upper: bool) -> int:
    """Type in 0..5 of the butterfly formed by two wedges off one start vertex.

    Each wedge is its raw (start-edge timestamp, arrival-edge timestamp) pair;
    the wedge runs forward when the start edge is earlier.  The relation of
    the two closed timestamp intervals picks non-overlap, intersecting, or
    covering; same-direction pairs map to types {0, 1, 2} and mixed-direction
    pairs to {3, 4, 5}, all xor 1 when the shared start vertex is in the
    lower layer.  The four timestamps must be pairwise distinct.
    """
    a1, b1 = w1
    a2, b2 = w2
    if len({a1, b1, a2, b2}) != 4:
        raise ValueError("butterfly timestamps must be pairwise distinct")
    lo1, hi1 = (a1, b1) if a1 < b1 else (b1, a1)
    lo2, hi2 = (a2, b2) if a2 < b2 else (b2, a2)
    if hi1 < lo2 or hi2 < lo1:
        shape = 0
    elif (lo1 < lo2 and hi2 < hi1) or (lo2 < lo1 and hi1 < hi2):
        shape = 2
    else:
        shape = 1
    if (a1 < b1) != (a2 < b2):
        shape += 3
    return shape if start_in_upper else shape ^ 1


# --- wedge bookkeeping ------------------------------------------------------
#
# Normalized wedges are (t_s, t_a) with t_s < t_a <= t_s + delta; a backward
# wedge stores its two timestamps swapped and is tracked in the backward
# subset instead.  Wedge priority sorts by t_s descending, then t_a ascending.


def _wedge_order(w: tuple) -> tuple[int, int]:
    return (-w[0], w[1])


def _merge_sorted(a: list, b: list) -> list:
    """Merge two wedge-priority-sorted lists."""
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    na, nb = len(a), len(b)
    while i < na and j < nb:
        wa, wb = a[i], b[j]
        if wa[0] > wb[0] or (wa[0] == wb[0] and wa[1] <= wb[1]):
            out.append(wa)
            i += 1
        else:
            out.append(wb)
            j += 1
    out.extend(a[i:] if i < na else b[j:])
    return out


class TimestampIndex:
    """Wedges bucketed by start timestamp, arrivals kept ascending per bucket.

    Probing walks every live bucket: a bucket starting after the probe's
    arrival matches whole as non-overlap, a bucket starting before it is
    split around the arrival by binary search into covering and intersecting
    parts.  Expiry also walks every bucket, popping arrivals above the bound.
    """

    __slots__ = ("_buckets",)

    def __init__(self) -> None:
        self._buckets: dict[int, list[int]] = {}

    def __len__(self) -> int:
        return sum(len(b) for b in self._buckets.values())

    def insert(self, wedge: tuple) -> None:
        # callers insert in wedge-priority order, so appends keep arrivals ascending
        self._buckets.setdefault(wedge[0], []).append(wedge[1])

    def delete_above(self, bound: int) -> None:
        dead = []
        for ts, arrivals in self._buckets.items():
            while arrivals and arrivals[-1] > bound:
                arrivals.pop()
            if not arrivals:
                dead.append(ts)
        for ts in dead:
            del self._buckets[ts]

    def query_counts(self, pivot: int, acc: list[int], offsets: tuple[int, int, int]) -> None:
        o_non, o_int, o_cov = offsets
        for ts, arrivals in self._buckets.items():
            if ts > pivot:
                acc[o_non] += len(arrivals)
            elif ts < pivot:
                acc[o_int] += len(arrivals) - bisect_right(arrivals, pivot)
                acc[o_cov] += bisect_left(arrivals, pivot)
            # ts == pivot: a shared timestamp, never a butterfly


class TwinOrderedIndex:
    """Twin ordered multisets over the indexed wedges.

    One side orders (arrival, start) pairs by arrival, the other holds the
    start timestamps alone.  The two stay element-for-element synchronized:
    expiry pops the arrival side and erases the matching start, and probes
    are rank queries, so every operation is logarithmic regardless of how
    many distinct start timestamps are live.
    """

    __slots__ = ("_arrivals", "_starts")

    _HI = (float("inf"),)
    _LO = (float("-inf"),)

    def __init__(self) -> None:
        self._arrivals: SortedList = SortedList()
        self._starts: SortedList = SortedList()

    def __len__(self) -> int:
        return len(self._arrivals)

    def insert(self, wedge: tuple) -> None:
        self._arrivals.add((wedge[1], wedge[0]))
        self._starts.add(wedge[0])

    def delete_above(self, bound: int) -> None:
        arrivals = self._arrivals
        while arrivals and arrivals[-1][0] > bound:
            _, ts = arrivals.pop()
            self._starts.remove(ts)

    def query_counts(self, pivot: int, acc: list[int], offsets: tuple[int, int, int]) -> None:
        o_non, o_int, o_cov = offsets
        arrivals = self._arrivals
        starts = self._starts
        n = len(arrivals)
        gt_start = n - starts.bisect_right(pivot)
        ge_start = n - starts.bisect_left(pivot)
        gt_arrival = n - arrivals.bisect_right((pivot,) + self._HI)
        lt_arrival = arrivals.bisect_left((pivot,) + self._LO)
        acc[o_non] += gt_start
        acc[o_int] += gt_arrival - ge_start
        acc[o_cov] += lt_arrival

    def start_counts(self) -> tuple[int, int]:
        """(arrival side size, start side size); equal at every quiescent point."""
        return len(self._arrivals), len(self._starts)


# --- subset cross-matching --------------------------------------------------

# for each of (fwd-left, bwd-left, fwd-right, bwd-right): (same-dir, other-dir)
# partner slots on the opposite side
_PARTNERS = ((2, 3), (3, 2), (0, 1), (1, 0))


def _cross_lists(left, right, delta, make_index, visit) -> None:
    """Match every left wedge against every compatible right wedge.

    All four lists are wedge-priority sorted.  Wedges are consumed in rounds
    of equal start timestamp, largest first.  A round first expires index
    entries whose arrival exceeds round start + delta (they can never again
    share a span with anything left), then probes the round's wedges against
    the opposite side's indexes, and only then inserts them; wedges sharing
    a start timestamp therefore never pair with each other.  Everything a
    probe sees lies fully inside [round start, round start + delta], so no
    span check is needed at match time.
    """
    lists = (left[0], left[1], right[0], right[1])
    if (not lists[0] and not lists[1]) or (not lists[2] and not lists[3]):
        return
    indexes = (make_index(0), make_index(1), make_index(2), make_index(3))
    sizes = (len(lists[0]), len(lists[1]), len(lists[2]), len(lists[3]))
    ptrs = [0, 0, 0, 0]
    ends = [0, 0, 0, 0]
    while True:
        maxn = None
        for k in range(4):
            i = ptrs[k]
            if i < sizes[k]:
                ts = lists[k][i][0]
                if maxn is None or ts > maxn:
                    maxn = ts
        if maxn is None:
            break
        bound = maxn + delta
        for idx in indexes:
            idx.delete_above(bound)
        for k in range(4):
            lst = lists[k]
            i = ptrs[k]
            n = sizes[k]
            while i < n and lst[i][0] == maxn:
                i += 1
            ends[k] = i
        for k in range(4):
            a, b = ptrs[k], ends[k]
            if a == b:
                continue
            same, diff = _PARTNERS[k]
            same_idx = indexes[same]
            diff_idx = indexes[diff]
            lst = lists[k]
            for i in range(a, b):
                visit(lst[i], same_idx, diff_idx, k)
        for k in range(4):
            a, b = ptrs[k], ends[k]
            if a < b:
                idx = indexes[k]
                lst = lists[k]
                for i in range(a, b):
                    idx.insert(lst[i])
                ptrs[k] = b


def _recur(subsets, p, q, cross):
    """Bottom-up pairing over subsets [p, q); returns their merged wedge sets.

    Left and right halves are resolved recursively, cross-matched (only pairs
    from different subsets, each exactly once), then merged in wedge priority
    order for the caller's own cross step.
    """
    if p + 1 >= q:
        return subsets[p]
    mid = (p + q) // 2
    left = _recur(subsets, p, mid, cross)
    right = _recur(subsets, mid, q, cross)
    cross(left, right)
    return (
        _merge_sorted(left[0], right[0]),
        _merge_sorted(left[1], right[1]),
    )


def _counting_visit(acc: list[int], layer: int):
    off_same = (0 ^ layer, 1 ^ layer, 2 ^ layer)
    off_diff = (3 ^ layer, 4 ^ layer, 5 ^ layer)

    def visit(wedge, same_idx, diff_idx, _slot):
        pivot = wedge[1]
        same_idx.query_counts(pivot, acc, off_same)
        diff_idx.query_counts(pivot, acc, off_diff)

    return visit


def combine(
    subsets: list[tuple[list, list]],
    delta: int,
    acc: list[int],
    start_in_upper: bool,
    make_index: Callable[[int], object] | None = None,
) -> None:
    """Count all distinct-middle wedge pairings of one end bucket into acc.

    Each subset is the (forward, backward) wedge-list pair of one middle
    vertex, both lists sorted by wedge priority.
    """
    if len(subsets) < 2:
        return
    if make_index is None:
        make_index = lambda slot: TimestampIndex()
    visit = _counting_visit(acc, 0 if start_in_upper else 1)
    _recur(subsets, 0, len(subsets), lambda L, R: _cross_lists(L, R, delta, make_index, visit))


# --- engines ----------------------------------------------------------------


def _require_priority_layout(g: TemporalBipartiteGraph) -> None:
    if g.layout != LAYOUT_PRIORITY:
        raise ValueError("engine requires priority-sorted adjacency; call sort_adjacency_by_priority")


def _layer_passes(g: TemporalBipartiteGraph, priority: VertexPriority):
    """(layer bit, start adjacency, middle adjacency, start prios, key arrays)."""
    yield 0, g.upper_adj, g.lower_adj, priority.upper, g._upper_keys, g._lower_keys
    yield 1, g.lower_adj, g.upper_adj, priority.lower, g._lower_keys, g._upper_keys


def count_baseline(
    g: TemporalBipartiteGraph,
    priority: VertexPriority,
    delta: int,
    prefilter: bool = False,
    stats: dict | None = None,
) -> CountVector:
    """Group wedges per end vertex and test every distinct-middle pair.

    With prefilter set, wedges whose two timestamps are equal or more than
    delta apart are dropped on sight; they can never be part of a butterfly,
    so the counts are unchanged either way.  When a stats dict is passed,
    stats["pairs_examined"] receives the number of distinct-middle pairs
    inspected, which equals the number of static 2x2 biclique edge choices
    because each is examined from exactly one start vertex.
    """
    _require_priority_layout(g)
    acc = [0] * 6
    pairs_examined = 0
    for layer, starts, mids, sprio, skeys, mkeys in _layer_passes(g, priority):
        in_upper = layer == 0
        for s in range(len(starts)):
            ps = sprio[s]
            row = starts[s]
            cut = bisect_right(skeys[s], -ps)
            if cut >= len(row):
                continue
            buckets: dict[int, list[tuple[int, int, int]]] = {}
            for mi in range(cut, len(row)):
                v, t1, _ = row[mi]
                mrow = mids[v]
                for wi in range(bisect_right(mkeys[v], -ps), len(mrow)):
                    w, t2, _ = mrow[wi]
                    if prefilter:
                        d = t2 - t1
                        if d == 0 or d > delta or -d > delta:
                            continue
                    bucket = buckets.get(w)
                    if bucket is None:
                        buckets[w] = bucket = []
                    bucket.append((t1, t2, v))
            for wedges in buckets.values():
                n = len(wedges)
                for i in range(n - 1):
                    t1a, t1b, m1 = wedges[i]
                    for j in range(i + 1, n):
                        t2a, t2b, m2 = wedges[j]
                        if m1 == m2:
                            continue
                        pairs_examined += 1
                        stamps = (t1a, t1b, t2a, t2b)
                        if max(stamps) - min(stamps) > delta:
                            continue
                        if t1a == t1b or t1a == t2a or t1a == t2b or t1b == t2a or t1b == t2b or t2a == t2b:
                            continue
                        acc[classify_type((t1a, t1b), (t2a, t2b), in_upper)] += 1
    if stats is not None:
        stats["pairs_examined"] = pairs_examined
    return CountVector(acc)


def _count_with_index(g, priority, delta, make_index) -> CountVector:
    _require_priority_layout(g)
    acc = [0] * 6
    for layer, starts, mids, sprio, skeys, mkeys in _layer_passes(g, priority):
        visit = _counting_visit(acc, layer)
        for s in range(len(starts)):
            ps = sprio[s]
            row = starts[s]
            cut = bisect_right(skeys[s], -ps)
            if cut >= len(row):
                continue
            # end vertex -> middle vertex -> (forward, backward) wedge lists
            ends: dict[int, dict[int, tuple[list, list]]] = {}
            for mi in range(cut, len(row)):
                v, t1, _ = row[mi]
                mrow = mids[v]
                for wi in range(bisect_right(mkeys[v], -ps), len(mrow)):
                    w, t2, _ = mrow[wi]
                    d = t2 - t1
                    if d == 0 or d > delta or -d > delta:
                        continue
                    by_mid = ends.get(w)
                    if by_mid is None:
                        ends[w] = by_mid = {}
                    pair = by_mid.get(v)
                    if pair is None:
                        by_mid[v] = pair = ([], [])
                    if d > 0:
                        pair[0].append((t1, t2))
                    else:
                        pair[1].append((t2, t1))
            for by_mid in ends.values():
                if len(by_mid) < 2:
                    continue
                subsets = list(by_mid.values())
                for fwd, bwd in subsets:
                    fwd.sort(key=_wedge_order)
                    bwd.sort(key=_wedge_order)
                _recur(
                    subsets,
                    0,
                    len(subsets),
                    lambda L, R: _cross_lists(L, R, delta, make_index, visit),
                )
    return CountVector(acc)


def count_optimized(g: TemporalBipartiteGraph, priority: VertexPriority, delta: int) -> CountVector:
    """Prune dead wedges, then cross-match per-middle subsets with bucketed probes."""
    return _count_with_index(g, priority, delta, lambda slot: TimestampIndex())


def count_extreme(g: TemporalBipartiteGraph, priority: VertexPriority, delta: int) -> CountVector:
    """Same traversal as count_optimized with rank-arithmetic probes throughout."""
    return _count_with_index(g, priority, delta, lambda slot: TwinOrderedIndex())


def count_sampled(
    g: TemporalBipartiteGraph,
    priority: VertexPriority,
    delta: int,
    sample_p: float,
    seed: int = 0,
) -> CountVector:
    """Unbiased estimates from an edge sample kept with probability sample_p.

    Each edge is retained independently (seeded PRNG, ingestion order), the
    retained subgraph is counted exactly, and every component is scaled by
    sample_p to the power -4, since a butterfly survives iff its four edges
    all do.
    """
    if not 0 < sample_p <= 1:
        raise ValueError(f"sample_p must be in (0, 1], got {sample_p}")
    if sample_p == 1:
        return CountVector(float(c) for c in count_extreme(g, priority, delta))
    rng = random.Random(seed)
    kept = [
        (g.upper_tokens[e.u], g.lower_tokens[e.v], e.t)
        for e in g.edges()
        if rng.random() < sample_p
    ]
    sub = TemporalBipartiteGraph.from_edges(kept)
    sub_priority = compute_vertex_priority(sub)
    sort_adjacency_by_priority(sub, sub_priority)
    exact = count_extreme(sub, sub_priority, delta)
    return exact.scaled(sample_p ** -4)
