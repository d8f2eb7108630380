"""Exhaustive reference counter and enumerator.

Deliberately the dumbest correct implementation: walk every 4-subset of
temporal edges in chronological order, keep the ones whose vertex pairs form
a 2x2 biclique with four pairwise distinct timestamps inside the span bound,
and classify each survivor from its upper layer.  Shares nothing with the
engines except the type classifier.  Quartic in the edge count, intended for
inputs of a few hundred edges at most.
"""

from __future__ import annotations

from typing import Callable, Iterator

from .count import CountVector, classify_type
from .enumeration import ButterflyInstance
from .graph import TemporalBipartiteGraph, TemporalEdge

__all__ = [
    "oracle_count",
    "oracle_enumerate",
    "oracle_contains",
    "oracle_static_pairings",
]


def _scan(g: TemporalBipartiteGraph, delta: int) -> Iterator[tuple[ButterflyInstance, frozenset[int]]]:
    """Yield every temporal butterfly with the uids of its four edges."""
    edges = sorted(((e.t, e.uid, e.u, e.v) for e in g.edges()))
    n = len(edges)
    for a in range(n - 3):
        ta, ua_, pa, qa = edges[a]
        limit = ta + delta
        for b in range(a + 1, n - 2):
            tb = edges[b][0]
            if tb > limit:
                break
            if tb == ta:
                continue
            for c in range(b + 1, n - 1):
                tc = edges[c][0]
                if tc > limit:
                    break
                if tc == tb:
                    continue
                for d in range(c + 1, n):
                    td = edges[d][0]
                    if td > limit:
                        break
                    if td == tc:
                        continue
                    quad = (edges[a], edges[b], edges[c], edges[d])
                    inst = _as_butterfly(quad, delta)
                    if inst is not None:
                        yield inst, frozenset(q[1] for q in quad)


def _as_butterfly(quad, delta: int) -> ButterflyInstance | None:
    uppers = {q[2] for q in quad}
    if len(uppers) != 2:
        return None
    lowers = {q[3] for q in quad}
    if len(lowers) != 2:
        return None
    stamps_by_pair = {(q[2], q[3]): q[0] for q in quad}
    if len(stamps_by_pair) != 4:
        # a repeated vertex pair; parallel edges never share one butterfly
        return None
    u, w = sorted(uppers)
    v, x = sorted(lowers)
    stamps = (
        stamps_by_pair[(u, v)],
        stamps_by_pair[(w, v)],
        stamps_by_pair[(u, x)],
        stamps_by_pair[(w, x)],
    )
    type_index = classify_type((stamps[0], stamps[1]), (stamps[2], stamps[3]), True)
    return ButterflyInstance(type_index, (u, w), (v, x), stamps)


def oracle_count(g: TemporalBipartiteGraph, delta: int) -> CountVector:
    """Per-type totals by exhaustive search."""
    acc = [0] * 6
    for inst, _ in _scan(g, delta):
        acc[inst.type_index] += 1
    return CountVector(acc)


def oracle_enumerate(
    g: TemporalBipartiteGraph, delta: int, sink: Callable[[ButterflyInstance], None]
) -> CountVector:
    """Emit every instance to sink; returns the per-type tallies."""
    acc = [0] * 6
    for inst, _ in _scan(g, delta):
        sink(inst)
        acc[inst.type_index] += 1
    return CountVector(acc)


def oracle_contains(g: TemporalBipartiteGraph, delta: int, e: TemporalEdge) -> CountVector:
    """Per-type totals restricted to butterflies containing the given edge."""
    acc = [0] * 6
    for inst, uids in _scan(g, delta):
        if e.uid in uids:
            acc[inst.type_index] += 1
    return CountVector(acc)


def oracle_static_pairings(g: TemporalBipartiteGraph) -> int:
    """4-edge subsets whose vertex pairs form a 2x2 biclique, ignoring time.

    This is what the baseline engine's pair loop examines: every way to pick
    one edge per pair of a static butterfly.
    """
    pairs = [(e.u, e.v) for e in g.edges()]
    n = len(pairs)
    total = 0
    for a in range(n - 3):
        pa = pairs[a]
        for b in range(a + 1, n - 2):
            pb = pairs[b]
            if pb == pa:
                continue
            for c in range(b + 1, n - 1):
                pc = pairs[c]
                if pc == pa or pc == pb:
                    continue
                for d in range(c + 1, n):
                    pd = pairs[d]
                    if pd == pa or pd == pb or pd == pc:
                        continue
                    quad = (pa, pb, pc, pd)
                    if len({p[0] for p in quad}) == 2 and len({p[1] for p in quad}) == 2:
                        total += 1
    return total
