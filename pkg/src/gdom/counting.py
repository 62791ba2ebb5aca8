"""Exact combinatorial counting: spanning trees, Tutte polynomial, and friends.

Everything here is exact big-integer or big-rational arithmetic; no floats.
Determinants use fraction-free Bareiss elimination on integer matrices
(rational inputs are cleared to a common denominator first).  The Tutte
recursion works on an internal representation that consumes loops created
by contraction as y-factors immediately, so stored graphs stay loopless.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .multigraph import Multigraph
from .symmetry import cached_code

Count = Union[int, Fraction]

DEFAULT_TUTTE_EDGE_BOUND = 24
DEFAULT_SUBSET_BOUND = 40
DEFAULT_HOM_BOUND = 16


class CountingBoundExceeded(RuntimeError):
    pass


# -- exact determinants ----------------------------------------------------


def bareiss_determinant(mat: list[list[int]]) -> int:
    """Fraction-free Bareiss determinant of an integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _cleared(mat: list[list[Fraction]]) -> tuple[list[list[int]], int]:
    den = 1
    for row in mat:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    scaled = [[int(x * den) for x in row] for row in mat]
    return scaled, den


def rational_determinant(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    if n == 0:
        return Fraction(1)
    scaled, den = _cleared(mat)
    return Fraction(bareiss_determinant(scaled), den**n)


def _as_count(x: Fraction) -> Count:
    return int(x) if x.denominator == 1 else x


def laplacian_minor(g: Multigraph, a: Iterable[int]) -> Count:
    """det of the principal Laplacian submatrix on rows/columns ``a``; M({}) = 1."""
    idx = sorted(set(a))
    if not all(0 <= v < g.n for v in idx):
        raise ValueError("vertex set out of range")
    L = g.laplacian()
    sub = [[L[u][v] for v in idx] for u in idx]
    return _as_count(rational_determinant(sub))


def count_spanning_trees(g: Multigraph) -> Count:
    """Spanning-tree count by Matrix-Tree; weighted graphs give the tree weight sum."""
    if g.n == 1:
        return 1
    return laplacian_minor(g, range(g.n - 1))


# -- Tutte polynomial --------------------------------------------------------


@dataclass(frozen=True)
class BivariatePoly:
    """Bivariate polynomial with exact integer coefficients, indexed (x-deg, y-deg)."""

    coeffs: tuple[tuple[tuple[int, int], int], ...]

    @staticmethod
    def from_dict(d: dict[tuple[int, int], int]) -> "BivariatePoly":
        return BivariatePoly(tuple(sorted((k, v) for k, v in d.items() if v)))

    @staticmethod
    def constant(c: int) -> "BivariatePoly":
        return BivariatePoly.from_dict({(0, 0): c})

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.coeffs)

    def __add__(self, other: "BivariatePoly") -> "BivariatePoly":
        d = self.as_dict()
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + v
        return BivariatePoly.from_dict(d)

    def __sub__(self, other: "BivariatePoly") -> "BivariatePoly":
        d = self.as_dict()
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) - v
        return BivariatePoly.from_dict(d)

    def __mul__(self, other: "BivariatePoly") -> "BivariatePoly":
        d: dict[tuple[int, int], int] = {}
        for (i, j), a in self.coeffs:
            for (k, l), b in other.coeffs:
                key = (i + k, j + l)
                d[key] = d.get(key, 0) + a * b
        return BivariatePoly.from_dict(d)

    def scale(self, c: int) -> "BivariatePoly":
        return BivariatePoly.from_dict({k: c * v for k, v in self.coeffs})

    def shift_y(self, k: int) -> "BivariatePoly":
        """Multiply by y^k."""
        return BivariatePoly(tuple(((i, j + k), v) for (i, j), v in self.coeffs))

    def power(self, e: int) -> "BivariatePoly":
        result = BivariatePoly.constant(1)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def evaluate(self, x: Count, y: Count) -> Count:
        total: Fraction = Fraction(0)
        for (i, j), c in self.coeffs:
            total += Fraction(x) ** i * Fraction(y) ** j * c
        return _as_count(total)

    def substitute_plus_one(self) -> "BivariatePoly":
        """The polynomial p(x+1, y+1), by binomial expansion."""
        d: dict[tuple[int, int], int] = {}
        for (i, j), c in self.coeffs:
            for a in range(i + 1):
                ca = math.comb(i, a)
                for b in range(j + 1):
                    key = (a, b)
                    d[key] = d.get(key, 0) + c * ca * math.comb(j, b)
        return BivariatePoly.from_dict(d)

    def is_nonnegative(self) -> bool:
        return all(v >= 0 for _, v in self.coeffs)

    def to_json_triples(self) -> list[list]:
        return [[i, j, str(v)] for (i, j), v in self.coeffs]

    @staticmethod
    def from_json_triples(triples: list[list]) -> "BivariatePoly":
        return BivariatePoly.from_dict({(int(i), int(j)): int(v) for i, j, v in triples})


_X = BivariatePoly.from_dict({(1, 0): 1})
_Y = BivariatePoly.from_dict({(0, 1): 1})
_ONE = BivariatePoly.constant(1)

_tutte_cache: dict[bytes, BivariatePoly] = {}
_tutte_lock = threading.Lock()


def _skeleton_bridges(n: int, pairs: list[tuple[int, int]]) -> set[tuple[int, int]]:
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs:
        nbrs[u].append(v)
        nbrs[v].append(u)
    disc = [-1] * n
    low = [0] * n
    bridges: set[tuple[int, int]] = set()
    timer = 0

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
    for x, parent in reversed(order):
        if parent != -1:
            low[parent] = min(low[parent], low[x])
            if low[x] > disc[parent]:
                bridges.add((min(x, parent), max(x, parent)))
    return bridges


def _tutte_rec(n: int, pairs: tuple[tuple[int, int, int], ...]) -> BivariatePoly:
    """Tutte polynomial of a connected loopless multigraph (pairs: u < v, mult)."""
    if not pairs:
        return _ONE
    key = cached_code(Multigraph(n, [(u, v, m, 1) for u, v, m in pairs], _validated=True))
    with _tutte_lock:
        hit = _tutte_cache.get(key)
    if hit is not None:
        return hit

    plist = list(pairs)
    bridges = _skeleton_bridges(n, [(u, v) for u, v, _ in plist])
    # prefer a non-bridge unit so deletion keeps the graph connected
    pick = next(
        (i for i, (u, v, m) in enumerate(plist) if m > 1 or (u, v) not in bridges),
        None,
    )
    if pick is None:
        # every remaining pair is a single bridge: a tree with len(plist) edges
        result = _X.power(len(plist))
    else:
        u, v, m = plist[pick]
        rest = plist[:pick] + plist[pick + 1 :]
        # deletion of one unit
        if m > 1:
            deleted = tuple(sorted(rest + [(u, v, m - 1)]))
        else:
            deleted = tuple(sorted(rest))
        t_del = _tutte_rec(n, deleted)
        # contraction of one unit: m-1 sibling units become loops -> y factors
        remap = [w if w < v else (u if w == v else w - 1) for w in range(n)]
        merged: dict[tuple[int, int], int] = {}
        for a, b, mm in rest:
            x, y = remap[a], remap[b]
            if x == y:
                continue  # only mates of the contracted pair collapse; the y factor counts them
            if x > y:
                x, y = y, x
            merged[(x, y)] = merged.get((x, y), 0) + mm
        contracted = tuple(sorted((a, b, mm) for (a, b), mm in merged.items()))
        t_con = _tutte_rec(n - 1, contracted).shift_y(m - 1)
        result = t_del + t_con

    with _tutte_lock:
        _tutte_cache[key] = result
    return result


def tutte_polynomial(
    g: Multigraph, edge_bound: int = DEFAULT_TUTTE_EDGE_BOUND
) -> BivariatePoly:
    """Tutte polynomial by deletion-contraction, memoized on canonical codes."""
    units = g.edge_unit_count()
    if units > edge_bound:
        raise CountingBoundExceeded(
            f"{units} edge units exceed the Tutte bound {edge_bound}"
        )
    pairs = tuple(sorted((u, v, m) for (u, v), m in g.adjacency.items()))
    return _tutte_rec(g.n, pairs)


def count_forests(g: Multigraph, edge_bound: int = DEFAULT_TUTTE_EDGE_BOUND) -> int:
    return int(tutte_polynomial(g, edge_bound).evaluate(2, 1))


def count_acyclic_orientations(
    g: Multigraph, edge_bound: int = DEFAULT_TUTTE_EDGE_BOUND
) -> int:
    return int(tutte_polynomial(g, edge_bound).evaluate(2, 0))


# -- independent sets --------------------------------------------------------


def count_independent_sets(g: Multigraph, size_bound: int = DEFAULT_SUBSET_BOUND) -> int:
    """Number of independent vertex sets, the empty set included."""
    if g.n > size_bound:
        raise CountingBoundExceeded(f"|G| = {g.n} exceeds bound {size_bound}")
    closed = [1 << v for v in range(g.n)]
    for u, v, _, _ in g.edges:
        closed[u] |= 1 << v
        closed[v] |= 1 << u
    memo: dict[int, int] = {0: 1}

    def rec(mask: int) -> int:
        hit = memo.get(mask)
        if hit is not None:
            return hit
        v = (mask & -mask).bit_length() - 1
        res = rec(mask & ~(1 << v)) + rec(mask & ~closed[v])
        memo[mask] = res
        return res

    return rec((1 << g.n) - 1)


# -- chromatic counting ------------------------------------------------------

_chromatic_cache: dict[bytes, tuple[int, ...]] = {}
_chromatic_lock = threading.Lock()


def _poly_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    size = max(len(a), len(b))
    return tuple(
        (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(size)
    )


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _components(n: int, edges: frozenset[tuple[int, int]]) -> list[tuple[int, frozenset]]:
    nbrs: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    seen: set[int] = set()
    comps = []
    for s in range(n):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in nbrs[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        lbl = {v: i for i, v in enumerate(sorted(comp))}
        comp_edges = frozenset(
            (min(lbl[u], lbl[v]), max(lbl[u], lbl[v])) for u, v in edges if u in comp
        )
        comps.append((len(comp), comp_edges))
    return comps


def _chromatic_connected(n: int, edges: frozenset[tuple[int, int]]) -> tuple[int, ...]:
    if not edges:
        return tuple([0] * n + [1])  # q^n
    key = cached_code(Multigraph(n, [(u, v, 1, 1) for u, v in edges], _validated=True))
    with _chromatic_lock:
        hit = _chromatic_cache.get(key)
    if hit is not None:
        return hit
    u, v = min(edges)
    deleted = edges - {(u, v)}
    p_del = _chromatic_poly(n, deleted)
    remap = [w if w < v else (u if w == v else w - 1) for w in range(n)]
    contracted = frozenset(
        (min(remap[a], remap[b]), max(remap[a], remap[b]))
        for a, b in deleted
        if remap[a] != remap[b]
    )
    p_con = _chromatic_poly(n - 1, contracted)
    result = _poly_sub(p_del, p_con)
    with _chromatic_lock:
        _chromatic_cache[key] = result
    return result


def _chromatic_poly(n: int, edges: frozenset[tuple[int, int]]) -> tuple[int, ...]:
    out = (1,)
    for cn, cedges in _components(n, edges):
        out = _poly_mul(out, _chromatic_connected(cn, cedges))
    return out


def chromatic_polynomial(g: Multigraph) -> tuple[int, ...]:
    """Coefficients of the chromatic polynomial, ascending powers of q."""
    edges = frozenset(g.adjacency)
    return _chromatic_connected(g.n, edges)


def count_proper_colorings(g: Multigraph, q: int) -> int:
    if q < 0:
        raise ValueError("number of colors must be nonnegative")
    coeffs = chromatic_polynomial(g)
    return sum(c * q**i for i, c in enumerate(coeffs))


# -- weighted homomorphisms --------------------------------------------------


@dataclass(frozen=True)
class HomTarget:
    """Target graph for homomorphism counting; loops allowed."""

    n: int
    edges: frozenset[tuple[int, int]]  # (u, v) with u <= v; (v, v) is a loop

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    @staticmethod
    def looped_vertex() -> "HomTarget":
        return HomTarget(1, frozenset({(0, 0)}))

    @staticmethod
    def independent_set_target() -> "HomTarget":
        """Edge in/out with a loop at 'out'; maps are exactly independent-set indicators."""
        return HomTarget(2, frozenset({(0, 0), (0, 1)}))

    @staticmethod
    def complete(q: int) -> "HomTarget":
        return HomTarget(q, frozenset((i, j) for i in range(q) for j in range(i + 1, q)))


def count_weighted_homomorphisms(
    g: Multigraph,
    target: HomTarget,
    weights: Optional[dict[int, Fraction]] = None,
    size_bound: int = DEFAULT_HOM_BOUND,
) -> Count:
    """Total weight of adjacency-preserving maps V(G) -> V(target)."""
    if g.n > size_bound:
        raise CountingBoundExceeded(f"|G| = {g.n} exceeds bound {size_bound}")
    w = {v: Fraction(weights[v]) for v in range(target.n)} if weights else {
        v: Fraction(1) for v in range(target.n)
    }
    if any(x <= 0 for x in w.values()):
        raise ValueError("homomorphism weights must be positive")
    # connected DFS order over G
    order = [0]
    placed = {0}
    while len(order) < g.n:
        nxt = min(
            v
            for v in range(g.n)
            if v not in placed and any(u in placed for u in g.neighbors[v])
        )
        order.append(nxt)
        placed.add(nxt)
    image = [-1] * g.n
    total = Fraction(0)

    def rec(k: int, acc: Fraction) -> None:
        nonlocal total
        if k == g.n:
            total += acc
            return
        v = order[k]
        anchored = [u for u in g.neighbors[v] if image[u] != -1]
        for t in range(target.n):
            if all(target.adjacent(t, image[u]) for u in anchored):
                image[v] = t
                rec(k + 1, acc * w[t])
                image[v] = -1

    rec(0, Fraction(1))
    return _as_count(total)


# -- matchings and packings --------------------------------------------------


DEFAULT_MATCHING_UNIT_BOUND = 64


def count_matchings(g: Multigraph, unit_bound: int = DEFAULT_MATCHING_UNIT_BOUND) -> int:
    """Matchings over edge units (parallel units are distinct); empty included."""
    if g.edge_unit_count() > unit_bound:
        raise CountingBoundExceeded(
            f"{g.edge_unit_count()} edge units exceed the matching bound {unit_bound}"
        )
    records = sorted((u, v, m) for (u, v), m in g.adjacency.items())
    memo: dict[tuple, int] = {}

    def rec(recs: tuple) -> int:
        if not recs:
            return 1
        hit = memo.get(recs)
        if hit is not None:
            return hit
        (u, v, m), rest = recs[0], recs[1:]
        total = rec(rest)
        rest_uv = tuple(r for r in rest if u not in r[:2] and v not in r[:2])
        total += m * rec(rest_uv)
        memo[recs] = total
        return total

    return rec(tuple(records))


def count_packings(g: Multigraph, k: Multigraph, copy_limit: Optional[int] = None) -> int:
    """Sets of pairwise vertex-disjoint copies of k in g; the empty packing counts."""
    from .embeddings import CopyLimitExceeded, enumerate_copies

    if k.n > g.n:
        return 1
    clist = enumerate_copies(g, k, limit=copy_limit)
    if not clist.complete:
        raise CopyLimitExceeded("copy enumeration truncated; packing count unreliable")
    masks = [sum(1 << v for v in c.vertices) for c in clist.copies]

    def rec(i: int, used: int) -> int:
        if i == len(masks):
            return 1
        total = rec(i + 1, used)
        if not masks[i] & used:
            total += rec(i + 1, used | masks[i])
        return total

    return rec(0, 0)
