"""Deciders for the four graph-comparison relations, with certificates.

Tiling is exact cover by copies; fractional (edge-)tiling is exact rational
LP feasibility over the copy incidence matrix; domination is an integral
transportation problem solved by max-flow after scaling the uniform
marginals by |G|*|H|.  Every positive answer returns a certificate that
``verify_certificate`` re-checks from scratch.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Union

from .embeddings import Copy, CopyLimitExceeded, enumerate_copies, rooted_copy_relation
from .multigraph import Multigraph
from .symmetry import cached_code

HALL_SIZE_BOUND = 20


# -- certificates ------------------------------------------------------------


@dataclass
class TilingCertificate:
    copies: list[Copy]  # vertex-disjoint, covering V(G) exactly once


@dataclass
class FractionalTilingCertificate:
    copies: list[Copy]
    multiplicities: list[int]  # aligned with copies, >= 0, not all zero
    coverage: int  # the common cover count m
    mode: str  # "vertex" or "edge"


@dataclass
class CouplingCertificate:
    masses: dict[tuple[int, int], Fraction]  # (x in V(G), y in V(H)) -> mass


Certificate = Union[TilingCertificate, FractionalTilingCertificate, CouplingCertificate]


# -- exact rational phase-1 simplex ------------------------------------------


_BLAND_SWITCH = 200  # Dantzig pivoting until then, Bland afterwards (termination)


def feasible_nonnegative(
    rows: list[list[Fraction]], rhs: list[Fraction]
) -> Optional[list[Fraction]]:
    """Some x >= 0 with rows * x = rhs, or None.

    Exact phase-1 simplex with integer (fraction-free) pivoting: the tableau
    stays integral, true values are entries over the last pivot, and signs
    and ratio tests are decided by cross-multiplication.  Dantzig's rule with
    a Bland fallback guarantees termination without rational arithmetic.
    """
    m = len(rows)
    if m == 0:
        return []
    n = len(rows[0])
    T: list[list[int]] = []
    for i in range(m):
        den = 1
        for a in list(rows[i]) + [rhs[i]]:
            den = den * a.denominator // gcd(den, a.denominator)
        row = [int(a * den) for a in rows[i]]
        b = int(rhs[i] * den)
        if b < 0:
            row = [-a for a in row]
            b = -b
        T.append(row + [1 if j == i else 0 for j in range(m)] + [b])
    basis = [n + i for i in range(m)]
    width = n + m + 1
    # phase-1 objective: minimize the sum of artificials, priced out
    obj = [0] * width
    for i in range(m):
        for j in range(width):
            obj[j] -= T[i][j]
    for i in range(m):
        obj[n + i] += 1
    den_piv = 1  # previous pivot; all true values are entry / den_piv

    pivots = 0
    while True:
        if pivots < _BLAND_SWITCH:
            enter = None
            best_cost = 0
            for j in range(n + m):
                if obj[j] < best_cost:
                    best_cost = obj[j]
                    enter = j
        else:
            enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(m):
            tie = T[i][enter]
            if tie > 0:
                if leave is None:
                    leave = i
                else:
                    # compare rhs_i/tie with rhs_leave/T[leave][enter]
                    lhs = T[i][-1] * T[leave][enter]
                    rhs_ = T[leave][-1] * tie
                    if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[leave]):
                        leave = i
        if leave is None:
            return None  # cannot happen in phase 1 (objective bounded below)
        piv = T[leave][enter]
        prow = T[leave]
        for i in range(m):
            if i != leave:
                row = T[i]
                f = row[enter]
                if f:
                    T[i] = [(piv * a - f * b) // den_piv for a, b in zip(row, prow)]
                else:
                    T[i] = [(piv * a) // den_piv for a in row]
        f = obj[enter]
        if f:
            obj = [(piv * a - f * b) // den_piv for a, b in zip(obj, prow)]
        else:
            obj = [(piv * a) // den_piv for a in obj]
        den_piv = piv
        basis[leave] = enter
        pivots += 1

    if obj[-1] != 0:  # scaled optimum; zero iff all artificials vanish
        return None
    x = [Fraction(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = Fraction(T[i][-1], den_piv)
    return x


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _scale_to_integers(x: list[Fraction]) -> tuple[list[int], int]:
    den = 1
    for v in x:
        den = _lcm(den, v.denominator)
    return [int(v * den) for v in x], den


# -- max flow (Dinic) ---------------------------------------------------------


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.graph: list[list[list[int]]] = [[] for _ in range(n)]  # [to, cap, rev]

    def add_edge(self, u: int, v: int, cap: int) -> int:
        self.graph[u].append([v, cap, len(self.graph[v])])
        self.graph[v].append([u, 0, len(self.graph[u]) - 1])
        return len(self.graph[u]) - 1

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for e in self.graph[u]:
                    if e[1] > 0 and level[e[0]] < 0:
                        level[e[0]] = level[u] + 1
                        queue.append(e[0])
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, f: int) -> int:
                if u == t:
                    return f
                while it[u] < len(self.graph[u]):
                    e = self.graph[u][it[u]]
                    v = e[0]
                    if e[1] > 0 and level[v] == level[u] + 1:
                        d = dfs(v, min(f, e[1]))
                        if d > 0:
                            e[1] -= d
                            self.graph[v][e[2]][1] += d
                            return d
                    it[u] += 1
                return 0

            while True:
                f = dfs(s, 1 << 62)
                if f == 0:
                    break
                flow += f


# -- deciders ------------------------------------------------------------------


def check_tiling(
    g: Multigraph, h: Multigraph, copy_limit: Optional[int] = None
) -> Optional[TilingCertificate]:
    """Exact cover of V(G) by vertex-disjoint copies of H."""
    if h.n > g.n or g.n % h.n != 0:
        return None
    clist = enumerate_copies(g, h, limit=copy_limit)
    masks = [sum(1 << v for v in c.vertices) for c in clist.copies]
    by_vertex: list[list[int]] = [[] for _ in range(g.n)]
    for i, mask in enumerate(masks):
        for v in range(g.n):
            if mask >> v & 1:
                by_vertex[v].append(i)
    full = (1 << g.n) - 1
    chosen: list[int] = []

    def cover(used: int) -> bool:
        if used == full:
            return True
        v = ((~used) & full)
        v = (v & -v).bit_length() - 1
        for i in by_vertex[v]:
            if not masks[i] & used:
                chosen.append(i)
                if cover(used | masks[i]):
                    return True
                chosen.pop()
        return False

    if cover(0):
        return TilingCertificate(copies=[clist.copies[i] for i in chosen])
    if not clist.complete:
        raise CopyLimitExceeded("copy enumeration truncated before a tiling was found")
    return None


def _fractional_certificate(
    copies: list[Copy], solution: list[Fraction], mode: str
) -> FractionalTilingCertificate:
    mults, m = _scale_to_integers(solution)
    return FractionalTilingCertificate(
        copies=copies, multiplicities=mults, coverage=m, mode=mode
    )


def check_fractional_tiling(
    g: Multigraph, h: Multigraph, copy_limit: Optional[int] = None
) -> Optional[FractionalTilingCertificate]:
    """An integer combination of copies covering every vertex equally often.

    Copies with the same vertex set are interchangeable for coverage, so the
    LP runs over one representative per vertex set.
    """
    if h.n > g.n:
        return None
    clist = enumerate_copies(g, h, limit=copy_limit)
    if not clist.copies:
        if not clist.complete:
            raise CopyLimitExceeded("no copies within limit")
        return None
    reps: dict[frozenset[int], int] = {}
    for i, c in enumerate(clist.copies):
        reps.setdefault(c.vertex_set, i)
    cols = list(reps.values())
    rows = [
        [Fraction(1) if v in clist.copies[i].vertex_set else Fraction(0) for i in cols]
        for v in range(g.n)
    ]
    rhs = [Fraction(1)] * g.n
    x = feasible_nonnegative(rows, rhs)
    if x is None:
        if not clist.complete:
            raise CopyLimitExceeded("copy list truncated; infeasibility not conclusive")
        return None
    full = [Fraction(0)] * len(clist.copies)
    for i, xi in zip(cols, x):
        full[i] = xi
    return _fractional_certificate(clist.copies, full, "vertex")


def check_fractional_edge_tiling(
    g: Multigraph, h: Multigraph, copy_limit: Optional[int] = None
) -> Optional[FractionalTilingCertificate]:
    """An integer combination of copies covering every edge unit equally often.

    Parallel units of one pair are interchangeable, so coverage is accounted
    per pair, normalized by the pair multiplicity.
    """
    if h.n > g.n:
        return None
    clist = enumerate_copies(g, h, limit=copy_limit)
    if not clist.copies:
        if not clist.complete:
            raise CopyLimitExceeded("no copies within limit")
        return None
    pairs = sorted(g.adjacency)
    if not pairs:  # edgeless G = K_1; coverage is vacuous
        return FractionalTilingCertificate(
            copies=clist.copies,
            multiplicities=[1] + [0] * (len(clist.copies) - 1),
            coverage=1,
            mode="edge",
        )
    reps: dict[tuple, int] = {}
    for i, c in enumerate(clist.copies):
        reps.setdefault(c.edges, i)
    cols = list(reps.values())
    used = [{(u, v): m for u, v, m in clist.copies[i].edges} for i in cols]
    rows = []
    for u, v in pairs:
        denom = Fraction(g.adjacency[(u, v)])
        rows.append([Fraction(cm.get((u, v), 0)) / denom for cm in used])
    rhs = [Fraction(1)] * len(pairs)
    x = feasible_nonnegative(rows, rhs)
    if x is None:
        if not clist.complete:
            raise CopyLimitExceeded("copy list truncated; infeasibility not conclusive")
        return None
    full = [Fraction(0)] * len(clist.copies)
    for i, xi in zip(cols, x):
        full[i] = xi
    return _fractional_certificate(clist.copies, full, "edge")


def check_domination(g: Multigraph, h: Multigraph) -> Optional[CouplingCertificate]:
    """A coupling of uniform roots supported on rooted embeddings of H in G."""
    if h.n > g.n:
        return None
    rel = rooted_copy_relation(g, h)
    if not rel:
        return None
    ng, nh = g.n, h.n
    src, snk = ng + nh, ng + nh + 1
    net = _Dinic(ng + nh + 2)
    for x in range(ng):
        net.add_edge(src, x, nh)
    pair_edges: dict[tuple[int, int], tuple[int, int]] = {}
    for x, y in sorted(rel):
        idx = net.add_edge(x, ng + y, ng * nh)
        pair_edges[(x, y)] = (x, idx)
    for y in range(nh):
        net.add_edge(ng + y, snk, ng)
    if net.max_flow(src, snk) != ng * nh:
        return None
    masses: dict[tuple[int, int], Fraction] = {}
    for (x, y), (u, idx) in pair_edges.items():
        cap_left = net.graph[u][idx][1]
        sent = ng * nh - cap_left
        if sent:
            masses[(x, y)] = Fraction(sent, ng * nh)
    return CouplingCertificate(masses=masses)


def domination_hall_condition(
    g: Multigraph, h: Multigraph
) -> tuple[bool, Optional[frozenset[int]]]:
    """Brute-force transportation feasibility: for every T subset of V(H),
    |N(T)| * |H| >= |T| * |G| over the rooted-copy relation."""
    if h.n > HALL_SIZE_BOUND:
        raise ValueError(f"|H| = {h.n} exceeds Hall enumeration bound {HALL_SIZE_BOUND}")
    rel = rooted_copy_relation(g, h)
    nbr_mask = [0] * h.n
    for x, y in rel:
        nbr_mask[y] |= 1 << x
    for t in range(1, 1 << h.n):
        reach = 0
        size = 0
        for y in range(h.n):
            if t >> y & 1:
                reach |= nbr_mask[y]
                size += 1
        if reach.bit_count() * h.n < size * g.n:
            return False, frozenset(y for y in range(h.n) if t >> y & 1)
    return True, None


# -- certificate verification ---------------------------------------------------


def _copy_as_graph(c: Copy) -> Multigraph:
    lbl = {v: i for i, v in enumerate(c.vertices)}
    return Multigraph(
        len(c.vertices), [(lbl[u], lbl[v], m, 1) for u, v, m in c.edges]
    )


def _copy_is_valid(g: Multigraph, h: Multigraph, c: Copy) -> bool:
    if len(set(c.vertices)) != len(c.vertices) or len(c.vertices) != h.n:
        return False
    if not all(0 <= v < g.n for v in c.vertices):
        return False
    for u, v, m in c.edges:
        if u not in c.vertices or v not in c.vertices:
            return False
        if g.multiplicity(u, v) < m:
            return False
    try:
        as_graph = _copy_as_graph(c)
    except Exception:
        return False
    return cached_code(as_graph) == cached_code(h)


def verify_certificate(g: Multigraph, h: Multigraph, cert: Certificate) -> bool:
    """Re-validate every certificate invariant from scratch."""
    if isinstance(cert, TilingCertificate):
        seen: set[int] = set()
        for c in cert.copies:
            if not _copy_is_valid(g, h, c):
                return False
            if seen & set(c.vertices):
                return False
            seen.update(c.vertices)
        return seen == set(range(g.n))

    if isinstance(cert, FractionalTilingCertificate):
        if len(cert.copies) != len(cert.multiplicities):
            return False
        if any(m < 0 for m in cert.multiplicities) or not any(cert.multiplicities):
            return False
        if cert.coverage < 1:
            return False
        active = [
            (c, m) for c, m in zip(cert.copies, cert.multiplicities) if m > 0
        ]
        for c, _ in active:
            if not _copy_is_valid(g, h, c):
                return False
        if cert.mode == "vertex":
            for v in range(g.n):
                if sum(m for c, m in active if v in c.vertex_set) != cert.coverage:
                    return False
            return True
        if cert.mode == "edge":
            for (u, v), gm in g.adjacency.items():
                covered = sum(
                    m * cm
                    for c, m in active
                    for (a, b, cm) in c.edges
                    if (a, b) == (u, v)
                )
                if covered != cert.coverage * gm:
                    return False
            # copies may not use pairs outside g: _copy_is_valid checked that
            return True
        return False

    if isinstance(cert, CouplingCertificate):
        if any(mass < 0 for mass in cert.masses.values()):
            return False
        rel = rooted_copy_relation(g, h)
        if any(pair not in rel for pair, mass in cert.masses.items() if mass > 0):
            return False
        for x in range(g.n):
            if sum(
                (mass for (a, _), mass in cert.masses.items() if a == x), Fraction(0)
            ) != Fraction(1, g.n):
                return False
        for y in range(h.n):
            if sum(
                (mass for (_, b), mass in cert.masses.items() if b == y), Fraction(0)
            ) != Fraction(1, h.n):
                return False
        return True

    raise TypeError(f"unknown certificate type {type(cert)!r}")


# -- JSON serialization -----------------------------------------------------------


def _copy_to_json(c: Copy) -> dict:
    return {"vertices": list(c.vertices), "edges": [list(e) for e in c.edges]}


def _copy_from_json(obj: dict) -> Copy:
    return Copy(
        vertices=tuple(obj["vertices"]),
        edges=tuple((int(u), int(v), int(m)) for u, v, m in obj["edges"]),
    )


def certificate_to_json(cert: Certificate) -> dict:
    if isinstance(cert, TilingCertificate):
        return {"type": "tiling", "copies": [_copy_to_json(c) for c in cert.copies]}
    if isinstance(cert, FractionalTilingCertificate):
        return {
            "type": "fractional_tiling",
            "mode": cert.mode,
            "coverage": cert.coverage,
            "copies": [_copy_to_json(c) for c in cert.copies],
            "multiplicities": list(cert.multiplicities),
        }
    if isinstance(cert, CouplingCertificate):
        return {
            "type": "coupling",
            "masses": [
                [x, y, f"{m.numerator}/{m.denominator}"]
                for (x, y), m in sorted(cert.masses.items())
            ],
        }
    raise TypeError(f"unknown certificate type {type(cert)!r}")


def certificate_from_json(obj: dict) -> Certificate:
    kind = obj["type"]
    if kind == "tiling":
        return TilingCertificate(copies=[_copy_from_json(c) for c in obj["copies"]])
    if kind == "fractional_tiling":
        return FractionalTilingCertificate(
            copies=[_copy_from_json(c) for c in obj["copies"]],
            multiplicities=[int(m) for m in obj["multiplicities"]],
            coverage=int(obj["coverage"]),
            mode=obj["mode"],
        )
    if kind == "coupling":
        return CouplingCertificate(
            masses={(int(x), int(y)): Fraction(s) for x, y, s in obj["masses"]}
        )
    raise ValueError(f"unknown certificate type {kind!r}")


def certificate_json_string(cert: Certificate) -> str:
    return json.dumps(certificate_to_json(cert), sort_keys=True)
