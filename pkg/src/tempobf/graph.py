"""Temporal bipartite multigraph model and edge-list input/output.

Vertices live in two disjoint layers, called upper and lower.  Every edge
joins one upper vertex to one lower vertex and carries an integer timestamp;
parallel edges with different (or even equal) timestamps are allowed.  Input
tokens are interned to dense per-layer internal ids in order of first
appearance, and the original tokens are kept for output.

The counting engines and the streaming engines want different adjacency
layouts (neighbor-priority order versus chronological order), so the graph
carries a layout tag and the engines check it before running.
"""

from __future__ import annotations

import os
from bisect import bisect_right
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, NamedTuple

LAYOUT_UNSORTED = "unsorted"
LAYOUT_PRIORITY = "priority"
LAYOUT_TIME = "time"


class GraphParseError(ValueError):
    """Raised for malformed edge-list input; the message names the line."""


class TemporalEdge(NamedTuple):
    """One temporal edge, identified by endpoints, timestamp, and arrival index.

    The arrival index makes duplicate (u, v, t) edges distinguishable, so
    deleting one of them removes the oldest copy first.
    """

    u: int
    v: int
    t: int
    uid: int


@dataclass
class VertexPriority:
    """Rank in [1, |V|] per vertex, ascending in (temporal degree, global id).

    Global ids place the upper layer at [0, |U|) and the lower layer at
    [|U|, |U| + |L|), which fixes the tie-break between layers.
    """

    upper: list[int]
    lower: list[int]


class TemporalBipartiteGraph:
    """Adjacency-list temporal bipartite multigraph.

    Each adjacency entry is a (neighbor, t, uid) tuple and every edge appears
    in exactly two lists, one per endpoint.
    """

    __slots__ = (
        "upper_tokens",
        "lower_tokens",
        "_upper_ids",
        "_lower_ids",
        "upper_adj",
        "lower_adj",
        "edge_count",
        "layout",
        "_next_uid",
        "_upper_keys",
        "_lower_keys",
    )

    def __init__(self) -> None:
        self.upper_tokens: list[str] = []
        self.lower_tokens: list[str] = []
        self._upper_ids: dict[str, int] = {}
        self._lower_ids: dict[str, int] = {}
        self.upper_adj: list[list[tuple[int, int, int]]] = []
        self.lower_adj: list[list[tuple[int, int, int]]] = []
        self.edge_count = 0
        self.layout = LAYOUT_UNSORTED
        self._next_uid = 0
        # parallel arrays of negated neighbor priorities, valid in priority layout
        self._upper_keys: list[list[int]] | None = None
        self._lower_keys: list[list[int]] | None = None

    @property
    def upper_count(self) -> int:
        return len(self.upper_tokens)

    @property
    def lower_count(self) -> int:
        return len(self.lower_tokens)

    def _intern(self, token: str, ids: dict[str, int], tokens: list[str], adj: list[list[tuple[int, int, int]]]) -> int:
        vid = ids.get(token)
        if vid is None:
            if not token or token.split() != [token]:
                raise ValueError(f"vertex token {token!r} is empty or contains whitespace")
            vid = len(tokens)
            ids[token] = vid
            tokens.append(token)
            adj.append([])
        return vid

    def add_edge(self, u_token: str, v_token: str, t: int) -> TemporalEdge:
        """Append one edge during construction; invalidates any sorted layout."""
        u = self._intern(str(u_token), self._upper_ids, self.upper_tokens, self.upper_adj)
        v = self._intern(str(v_token), self._lower_ids, self.lower_tokens, self.lower_adj)
        uid = self._next_uid
        self._next_uid = uid + 1
        self.upper_adj[u].append((v, t, uid))
        self.lower_adj[v].append((u, t, uid))
        self.edge_count += 1
        self.layout = LAYOUT_UNSORTED
        self._upper_keys = None
        self._lower_keys = None
        return TemporalEdge(u, v, t, uid)

    @classmethod
    def from_edges(cls, triples: Iterable[tuple[str, str, int]]) -> "TemporalBipartiteGraph":
        g = cls()
        for u, v, t in triples:
            g.add_edge(str(u), str(v), int(t))
        return g

    def upper_token(self, u: int) -> str:
        return self.upper_tokens[u]

    def lower_token(self, v: int) -> str:
        return self.lower_tokens[v]

    def edges(self) -> list[TemporalEdge]:
        """All edges in ingestion order."""
        out = [TemporalEdge(u, v, t, uid) for u, row in enumerate(self.upper_adj) for v, t, uid in row]
        out.sort(key=lambda e: e.uid)
        return out

    # Streaming mutation; both require and preserve the chronological layout.

    def insert_edge(self, u_token: str, v_token: str, t: int) -> TemporalEdge:
        """Insert one edge keeping both adjacency lists time sorted."""
        if self.layout != LAYOUT_TIME:
            raise ValueError("insert_edge requires the time layout; call sort_adjacency_by_time first")
        u = self._intern(str(u_token), self._upper_ids, self.upper_tokens, self.upper_adj)
        v = self._intern(str(v_token), self._lower_ids, self.lower_tokens, self.lower_adj)
        uid = self._next_uid
        self._next_uid = uid + 1
        row = self.upper_adj[u]
        row.insert(bisect_right(row, t, key=_entry_t), (v, t, uid))
        row = self.lower_adj[v]
        row.insert(bisect_right(row, t, key=_entry_t), (u, t, uid))
        self.edge_count += 1
        return TemporalEdge(u, v, t, uid)

    def remove_edge(self, e: TemporalEdge) -> None:
        if self.layout != LAYOUT_TIME:
            raise ValueError("remove_edge requires the time layout")
        _remove_entry(self.upper_adj[e.u], e.v, e.t, e.uid)
        _remove_entry(self.lower_adj[e.v], e.u, e.t, e.uid)
        self.edge_count -= 1

    def has_edge(self, e: TemporalEdge) -> bool:
        if e.u >= self.upper_count:
            return False
        row = self.upper_adj[e.u]
        if self.layout == LAYOUT_TIME:
            i = bisect_right(row, e.t - 1, key=_entry_t)
            while i < len(row) and row[i][1] == e.t:
                if row[i][2] == e.uid:
                    return True
                i += 1
            return False
        return any(uid == e.uid for _, _, uid in row)


def _entry_t(entry: tuple[int, int, int]) -> int:
    return entry[1]


def _remove_entry(row: list[tuple[int, int, int]], nbr: int, t: int, uid: int) -> None:
    i = bisect_right(row, t - 1, key=_entry_t)
    while i < len(row) and row[i][1] == t:
        if row[i][2] == uid:
            del row[i]
            return
        i += 1
    raise KeyError(f"edge to {nbr} at t={t} (uid {uid}) not present")


def compute_vertex_priority(g: TemporalBipartiteGraph) -> VertexPriority:
    """Assign ranks 1..|V| ascending in (temporal degree, global id)."""
    nu = g.upper_count
    order = sorted(
        [(len(g.upper_adj[u]), u) for u in range(nu)]
        + [(len(g.lower_adj[v]), nu + v) for v in range(g.lower_count)]
    )
    upper = [0] * nu
    lower = [0] * g.lower_count
    for rank, (_, gid) in enumerate(order, 1):
        if gid < nu:
            upper[gid] = rank
        else:
            lower[gid - nu] = rank
    return VertexPriority(upper, lower)


def sort_adjacency_by_priority(g: TemporalBipartiteGraph, priority: VertexPriority) -> None:
    """Order every adjacency list by neighbor priority descending, then time.

    Also builds, per list, the parallel array of negated neighbor priorities
    that the engines binary-search to find where strictly lower priorities
    begin.
    """
    lp = priority.lower
    up = priority.upper
    for row in g.upper_adj:
        row.sort(key=lambda e: (-lp[e[0]], e[1], e[2]))
    for row in g.lower_adj:
        row.sort(key=lambda e: (-up[e[0]], e[1], e[2]))
    g._upper_keys = [[-lp[e[0]] for e in row] for row in g.upper_adj]
    g._lower_keys = [[-up[e[0]] for e in row] for row in g.lower_adj]
    g.layout = LAYOUT_PRIORITY


def sort_adjacency_by_time(g: TemporalBipartiteGraph) -> None:
    """Order every adjacency list chronologically, arrival index as tie-break."""
    for row in g.upper_adj:
        row.sort(key=lambda e: (e[1], e[2]))
    for row in g.lower_adj:
        row.sort(key=lambda e: (e[1], e[2]))
    g._upper_keys = None
    g._lower_keys = None
    g.layout = LAYOUT_TIME


def iter_edge_stream(source: str | os.PathLike | IO[str] | Iterable[str]) -> Iterator[tuple[str, str, int]]:
    """Yield (u, v, t) token triples from edge-list text.

    Lines hold either `u v t` or the four-field `u v w t` dialect, where the
    third field is a weight and is ignored.  Blank lines and lines starting
    with `#` or `%` are skipped.  Malformed lines raise GraphParseError naming
    the line number.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8") as fh:
            yield from _iter_lines(fh)
    else:
        yield from _iter_lines(source)


def _iter_lines(lines: Iterable[str]) -> Iterator[tuple[str, str, int]]:
    for lineno, raw in enumerate(lines, 1):
        stripped = raw.strip()
        if not stripped or stripped[0] in "#%":
            continue
        parts = stripped.split()
        if len(parts) == 3:
            u, v, ts = parts
        elif len(parts) == 4:
            u, v, _, ts = parts
        else:
            raise GraphParseError(f"line {lineno}: expected 3 or 4 fields, got {len(parts)}")
        try:
            t = int(ts)
        except ValueError:
            raise GraphParseError(f"line {lineno}: timestamp {ts!r} is not an integer") from None
        yield u, v, t


def load_edge_list(source: str | os.PathLike | IO[str] | Iterable[str]) -> TemporalBipartiteGraph:
    """Parse an edge list into a graph; an empty input is a valid empty graph."""
    return TemporalBipartiteGraph.from_edges(iter_edge_stream(source))


def save_edge_list(g: TemporalBipartiteGraph, sink: str | os.PathLike | IO[str]) -> None:
    """Write `u v t` lines in ingestion order; reloading gives the same edges."""
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "w", encoding="utf-8") as fh:
            save_edge_list(g, fh)
        return
    for e in g.edges():
        sink.write(f"{g.upper_tokens[e.u]} {g.lower_tokens[e.v]} {e.t}\n")
