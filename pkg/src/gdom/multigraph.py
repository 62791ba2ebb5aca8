"""Exact multigraph data model and surgery.

Graphs here are finite, connected, loopless multigraphs: parallel edges
are first class (a ``mult`` field), weights are exact rationals, and all
surgery (vertex contraction, edge-set contraction, subdivision) stays in
exact arithmetic.  Loops produced by contraction are discarded; the
number discarded is reported through the module logger for debugging.

Values are immutable once constructed and safe to share across threads.
"""

from __future__ import annotations

import json
import logging
from fractions import Fraction
from typing import Iterable, Optional, Sequence

log = logging.getLogger(__name__)

# (u, v, mult, weight) with u < v
Edge = tuple[int, int, int, Fraction]

GRAPH6_MAX = 62  # single-byte size encoding only; desk scale


class GraphError(ValueError):
    """Malformed graph input or unsupported operation."""


class DisconnectedError(GraphError):
    """Input graph is not connected."""


class FormatError(GraphError):
    """Syntax error in a serialized graph; carries the offending position."""

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message if position is None else f"{message} (at {position})")
        self.position = position


class Multigraph:
    """Connected weighted multigraph on vertices 0..n-1.

    Edge records with equal endpoints and equal weight are merged, so the
    edge list is a canonical sorted tuple; equality and hashing follow it.
    """

    __slots__ = ("n", "edges", "labels", "_adj", "_nbrs", "_hash")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple],
        labels: Optional[Sequence[str]] = None,
        _validated: bool = False,
    ):
        if n < 1:
            raise GraphError("vertex count must be positive")
        merged: dict[tuple[int, int, Fraction], int] = {}
        for rec in edges:
            if len(rec) == 2:
                u, v, mult, weight = rec[0], rec[1], 1, Fraction(1)
            elif len(rec) == 3:
                u, v, mult, weight = rec[0], rec[1], rec[2], Fraction(1)
            else:
                u, v, mult, weight = rec
                weight = Fraction(weight)
            if u == v:
                raise GraphError(f"loop at vertex {u} not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge endpoint out of range: {(u, v)}")
            if mult < 1:
                raise GraphError("edge multiplicity must be >= 1")
            if weight <= 0:
                raise GraphError("edge weight must be positive")
            if u > v:
                u, v = v, u
            key = (u, v, weight)
            merged[key] = merged.get(key, 0) + mult
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(
            sorted((u, v, m, w) for (u, v, w), m in merged.items())
        )
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise GraphError("labels length must equal vertex count")
        self._adj = None
        self._nbrs = None
        self._hash = None
        if not _validated and not self.is_connected():
            raise DisconnectedError("graph is not connected")

    # -- basic structure ------------------------------------------------

    @property
    def adjacency(self) -> dict[tuple[int, int], int]:
        """Total multiplicity per unordered pair (u < v)."""
        if self._adj is None:
            adj: dict[tuple[int, int], int] = {}
            for u, v, m, _ in self.edges:
                adj[(u, v)] = adj.get((u, v), 0) + m
            self._adj = adj
        return self._adj

    @property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        if self._nbrs is None:
            nbrs: list[set[int]] = [set() for _ in range(self.n)]
            for u, v, _, _ in self.edges:
                nbrs[u].add(v)
                nbrs[v].add(u)
            self._nbrs = tuple(tuple(sorted(s)) for s in nbrs)
        return self._nbrs

    def multiplicity(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self.adjacency.get((u, v), 0)

    def degree(self, v: int) -> int:
        """Degree counting multiplicities."""
        return sum(m for u, w, m, _ in self.edges if u == v or w == v)

    def weighted_degree(self, v: int) -> Fraction:
        return sum(
            (m * wt for u, w, m, wt in self.edges if u == v or w == v),
            Fraction(0),
        )

    def edge_unit_count(self) -> int:
        return sum(m for _, _, m, _ in self.edges)

    def total_weight(self) -> Fraction:
        """Sum of weight over edge units."""
        return sum((m * wt for _, _, m, wt in self.edges), Fraction(0))

    def is_simple(self) -> bool:
        return all(m == 1 for m in self.adjacency.values())

    def is_unweighted(self) -> bool:
        return all(w == 1 for _, _, _, w in self.edges)

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        seen = {0}
        stack = [0]
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v, _, _ in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Multigraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Multigraph(n={self.n}, edges={len(self.edges)} records, units={self.edge_unit_count()})"

    # -- Laplacian -------------------------------------------------------

    def laplacian(self) -> list[list[Fraction]]:
        """Weighted Laplacian: off-diagonal -(mult * weight), zero row sums."""
        L = [[Fraction(0)] * self.n for _ in range(self.n)]
        for u, v, m, w in self.edges:
            L[u][v] -= m * w
            L[v][u] -= m * w
            L[u][u] += m * w
            L[v][v] += m * w
        return L


def laplacian(g: Multigraph) -> list[list[Fraction]]:
    return g.laplacian()


# -- surgery -------------------------------------------------------------


def _quotient(g: Multigraph, cls: Sequence[int]) -> Multigraph:
    """Quotient by the vertex partition ``cls[v] -> block id``; drops loops."""
    blocks = sorted(set(cls))
    remap = {b: i for i, b in enumerate(blocks)}
    edges = []
    dropped = 0
    for u, v, m, w in g.edges:
        a, b = remap[cls[u]], remap[cls[v]]
        if a == b:
            dropped += m
        else:
            edges.append((a, b, m, w))
    if dropped:
        log.debug("contraction discarded %d loop unit(s)", dropped)
    return Multigraph(len(blocks), edges, _validated=True)


def contract_vertices(g: Multigraph, w: Iterable[int]) -> Multigraph:
    """G/W: identify all vertices of ``w`` to a single vertex."""
    ws = set(w)
    if not ws:
        raise GraphError("contract_vertices needs a nonempty vertex set")
    if not ws.issubset(range(g.n)):
        raise GraphError("vertex set out of range")
    rep = min(ws)
    cls = [rep if v in ws else v for v in range(g.n)]
    return _quotient(g, cls)


def contract_complement(g: Multigraph, a: Iterable[int]) -> Multigraph:
    """G_A := G/(V \\ A); with A = V this is G itself, with A = {} a point."""
    aset = set(a)
    if not aset.issubset(range(g.n)):
        raise GraphError("vertex set out of range")
    comp = set(range(g.n)) - aset
    if not comp:
        return g
    return contract_vertices(g, comp)


def contract_subgraph_edges(
    g: Multigraph, vertices: Iterable[int], sub_edges: Iterable[tuple[int, int]]
) -> Multigraph:
    """G//H: contract every edge of the subgraph H.

    ``vertices`` and ``sub_edges`` describe H inside g; one merged vertex
    per connected component of H, untouched vertices kept.  H need not be
    connected.
    """
    vs = set(vertices)
    if not vs.issubset(range(g.n)):
        raise GraphError("subgraph vertices out of range")
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in sub_edges:
        if u not in vs or v not in vs:
            raise GraphError(f"subgraph edge {(u, v)} not within its vertex set")
        if g.multiplicity(u, v) == 0:
            raise GraphError(f"subgraph edge {(u, v)} is not an edge of the graph")
        parent[find(u)] = find(v)
    cls = [find(v) for v in range(g.n)]
    return _quotient(g, cls)


def subdivide_edge(g: Multigraph, edge_index: int) -> Multigraph:
    """Replace one unit of edge record ``edge_index`` by a 2-path through a new vertex."""
    if not (0 <= edge_index < len(g.edges)):
        raise GraphError(f"no edge record {edge_index}")
    u, v, m, w = g.edges[edge_index]
    edges = [rec for i, rec in enumerate(g.edges) if i != edge_index]
    if m > 1:
        edges.append((u, v, m - 1, w))
    z = g.n
    edges.append((u, z, 1, w))
    edges.append((v, z, 1, w))
    return Multigraph(g.n + 1, edges, _validated=True)


def has_cut_edge(g: Multigraph) -> bool:
    """True iff deleting some single edge unit disconnects the graph.

    Only pairs of total multiplicity 1 can be cut edges; on those the
    classic DFS low-point bridge test applies.
    """
    if g.n == 1:
        return False
    adj = g.adjacency
    nbrs = g.neighbors
    disc = [-1] * g.n
    low = [0] * g.n
    timer = 0
    # iterative DFS from 0; graph is connected
    stack: list[tuple[int, int, int]] = [(0, -1, 0)]
    order: list[tuple[int, int]] = []
    while stack:
        x, parent, idx = stack.pop()
        if idx == 0:
            disc[x] = low[x] = timer
            timer += 1
            order.append((x, parent))
        children = nbrs[x]
        while idx < len(children):
            y = children[idx]
            idx += 1
            if disc[y] == -1:
                stack.append((x, parent, idx))
                stack.append((y, x, 0))
                break
            elif y != parent:
                low[x] = min(low[x], disc[y])
    # propagate lows to parents in reverse discovery order
    for x, parent in reversed(order):
        if parent != -1:
            low[parent] = min(low[parent], low[x])
            if low[x] > disc[parent]:
                pair = (min(x, parent), max(x, parent))
                if adj[pair] == 1:
                    return True
    return False


# -- serialization --------------------------------------------------------

_FORMATS = ("edge_list", "graph6", "json")


def _fraction_str(w: Fraction) -> str:
    return str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}"


def _parse_fraction(tok: str, pos: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad weight {tok!r}: {exc}", pos) from None


def _parse_edge_list(text: str) -> Multigraph:
    parts = text.split(";")
    head = parts[0].strip()
    if not head:
        raise FormatError("missing vertex count", 0)
    try:
        n = int(head)
    except ValueError:
        raise FormatError(f"bad vertex count {head!r}", 0) from None
    edges = []
    pos = len(parts[0])
    for clause in parts[1:]:
        pos += 1 + len(clause)
        toks = clause.split()
        if not toks:
            continue
        if len(toks) < 2 or len(toks) > 4:
            raise FormatError(f"bad edge clause {clause.strip()!r}", pos)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise FormatError(f"bad endpoints in {clause.strip()!r}", pos) from None
        mult = 1
        weight = Fraction(1)
        if len(toks) >= 3:
            try:
                mult = int(toks[2])
            except ValueError:
                raise FormatError(f"bad multiplicity in {clause.strip()!r}", pos) from None
        if len(toks) == 4:
            weight = _parse_fraction(toks[3], pos)
        if u == v:
            raise FormatError(f"loop at vertex {u} not allowed", pos)
        edges.append((u, v, mult, weight))
    try:
        return Multigraph(n, edges)
    except DisconnectedError:
        raise
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def _serialize_edge_list(g: Multigraph) -> str:
    clauses = [str(g.n)]
    for u, v, m, w in g.edges:
        if m == 1 and w == 1:
            clauses.append(f"{u} {v}")
        elif w == 1:
            clauses.append(f"{u} {v} {m}")
        else:
            clauses.append(f"{u} {v} {m} {_fraction_str(w)}")
    return "; ".join(clauses)


def _parse_graph6(text: str) -> Multigraph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise FormatError("empty graph6 string", 0)
    data = [ord(c) - 63 for c in s]
    if any(b < 0 or b > 63 for b in data):
        bad = next(i for i, b in enumerate(data) if b < 0 or b > 63)
        raise FormatError(f"invalid graph6 byte {s[bad]!r}", bad)
    if data[0] <= GRAPH6_MAX:
        n, body = data[0], data[1:]
    elif len(data) >= 4 and data[0] == 63 and data[1] != 63:
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        raise FormatError("unsupported graph6 size header", 0)
    if n == 0:
        raise FormatError("graph6 encodes the empty graph", 0)
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) != need:
        raise FormatError(f"graph6 body has {len(body)} bytes, expected {need}", 1)
    bits = []
    for b in body:
        bits.extend((b >> k) & 1 for k in range(5, -1, -1))
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                edges.append((u, v, 1, Fraction(1)))
            idx += 1
    return Multigraph(n, edges)


def _serialize_graph6(g: Multigraph) -> str:
    if not g.is_simple():
        raise GraphError("graph6 encodes simple graphs only (parallel edges present)")
    if g.n > GRAPH6_MAX:
        raise GraphError(f"graph6 support is limited to {GRAPH6_MAX} vertices here")
    adj = g.adjacency
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if (u, v) in adj else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(g.n + 63)]
    for i in range(0, len(bits), 6):
        byte = 0
        for b in bits[i : i + 6]:
            byte = (byte << 1) | b
        chars.append(chr(byte + 63))
    return "".join(chars)


def _parse_json(text: str) -> Multigraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad JSON: {exc.msg}", exc.pos) from None
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise FormatError("JSON graph needs keys 'n' and 'edges'")
    edges = []
    for rec in obj["edges"]:
        if len(rec) == 2:
            u, v, m, w = rec[0], rec[1], 1, Fraction(1)
        elif len(rec) == 3:
            u, v, m, w = rec[0], rec[1], rec[2], Fraction(1)
        elif len(rec) == 4:
            u, v, m = rec[0], rec[1], rec[2]
            w = Fraction(str(rec[3])) if isinstance(rec[3], str) else Fraction(rec[3])
        else:
            raise FormatError(f"bad edge record {rec!r}")
        edges.append((u, v, m, w))
    try:
        return Multigraph(obj["n"], edges, labels=obj.get("labels"))
    except DisconnectedError:
        raise
    except GraphError as exc:
        raise FormatError(str(exc)) from None


def _serialize_json(g: Multigraph) -> str:
    recs = []
    for u, v, m, w in g.edges:
        recs.append([u, v, m, int(w) if w.denominator == 1 else _fraction_str(w)])
    obj: dict = {"n": g.n, "edges": recs}
    if g.labels is not None:
        obj["labels"] = list(g.labels)
    return json.dumps(obj)


def parse_graph(text: str, format: str = "edge_list") -> Multigraph:
    """Parse a graph in one of the supported formats; rejects disconnected input."""
    if format == "edge_list":
        return _parse_edge_list(text)
    if format == "graph6":
        return _parse_graph6(text)
    if format == "json":
        return _parse_json(text)
    raise GraphError(f"unknown format {format!r}; expected one of {_FORMATS}")


def serialize_graph(g: Multigraph, format: str = "edge_list") -> str:
    if format == "edge_list":
        return _serialize_edge_list(g)
    if format == "graph6":
        return _serialize_graph6(g)
    if format == "json":
        return _serialize_json(g)
    raise GraphError(f"unknown format {format!r}; expected one of {_FORMATS}")


# -- small builders used throughout ---------------------------------------


def path_graph(n: int) -> Multigraph:
    return Multigraph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Multigraph:
    return Multigraph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Multigraph:
    return Multigraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Multigraph:
    return Multigraph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def single_edge() -> Multigraph:
    return Multigraph(2, [(0, 1)])


def single_vertex() -> Multigraph:
    return Multigraph(1, [])
