"""Pair generators with verified relation certificates, and the hunt engine.

Three strategies: ``overlay_copies`` builds G as a union of copies of H
glued at random overlaps (every vertex covered), ``transitive_catalog``
pairs a vertex-transitive graph with a random connected subgraph, and
``random_connected_pair`` draws both sides independently.  Each emitted
pair's claimed relation is re-proved by the relation deciders before use;
rejection continues until a valid pair appears or the attempt cap trips.

All randomness flows from the generator's 64-bit seed through the
SplitMix64 streams in :mod:`gdom.rng`, so a (strategy, seed, bounds)
triple is reproducible bit for bit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from . import checks
from .checks import CheckReport, InequalityId, check
from .multigraph import Multigraph, serialize_graph
from .relations import (
    Certificate,
    check_domination,
    check_fractional_edge_tiling,
    check_fractional_tiling,
    check_tiling,
)
from .rng import Stream, derive_seed

STRATEGIES = ("overlay_copies", "transitive_catalog", "random_connected_pair")


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PairGenerator:
    strategy: str
    seed: int
    relation: str = "domination"
    max_g: int = 10
    max_h: int = 5
    max_attempts: int = 200

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}; expected {STRATEGIES}")
        if self.max_g < 1 or self.max_h < 1:
            raise ValueError("size bounds must be positive")
        if self.strategy == "overlay_copies" and self.max_h < 2:
            raise ValueError("overlay_copies needs max_h >= 2")


@dataclass
class GeneratedPair:
    g: Multigraph
    h: Multigraph
    relation: str
    certificate: Optional[Certificate]
    trial: int
    attempts: int


# -- random building blocks ---------------------------------------------------


def random_connected_graph(rng: Stream, n: int, extra_hi: Optional[int] = None) -> Multigraph:
    """Random spanning tree plus a random number of extra edges."""
    if n == 1:
        return Multigraph(1, [])
    pairs = {(rng.randrange(i), i) for i in range(1, n)}
    for _ in range(rng.randint(0, n if extra_hi is None else extra_hi)):
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    return Multigraph(n, [(u, v, 1, 1) for u, v in pairs])


def random_connected_subgraph(rng: Stream, g: Multigraph, k: int) -> Multigraph:
    """A connected k-vertex subgraph of g, relabeled to 0..k-1."""
    start = rng.randrange(g.n)
    chosen = [start]
    in_set = {start}
    while len(chosen) < k:
        frontier = sorted(
            {u for v in chosen for u in g.neighbors[v] if u not in in_set}
        )
        if not frontier:
            break
        v = rng.choice(frontier)
        chosen.append(v)
        in_set.add(v)
    chosen.sort()
    lbl = {v: i for i, v in enumerate(chosen)}
    induced = [
        (lbl[u], lbl[v], m)
        for (u, v), m in g.adjacency.items()
        if u in in_set and v in in_set
    ]
    # keep a random spanning tree of the induced graph, then a random edge subset
    n = len(chosen)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order = list(range(len(induced)))
    rng.shuffle(order)
    keep = []
    for i in order:
        u, v, m = induced[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            keep.append((u, v, 1))
        elif rng.chance(1, 2):
            mult = rng.randint(1, m)
            keep.append((u, v, mult))
    return Multigraph(n, [(u, v, m, 1) for u, v, m in keep])


def transitive_catalog(max_n: int) -> list[Multigraph]:
    """Vertex-transitive graphs at desk scale: cycles, completes, hypercubes,
    balanced complete bipartite, circulants."""
    out: list[Multigraph] = []
    for n in range(2, max_n + 1):
        out.append(Multigraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)]))
    for n in range(3, max_n + 1):
        out.append(Multigraph(n, [(i, (i + 1) % n) for i in range(n)]))
    d = 2
    while 2**d <= max_n:
        n = 2**d
        edges = [
            (x, x ^ (1 << b)) for x in range(n) for b in range(d) if x < x ^ (1 << b)
        ]
        out.append(Multigraph(n, edges))
        d += 1
    for k in range(2, max_n // 2 + 1):
        out.append(Multigraph(2 * k, [(i, k + j) for i in range(k) for j in range(k)]))
    for n in range(5, max_n + 1):
        for s in range(2, n // 2 + (n % 2)):
            pairs = set()
            for i in range(n):
                for step in (1, s):
                    j = (i + step) % n
                    pairs.add((min(i, j), max(i, j)))
            out.append(Multigraph(n, sorted((u, v, 1, 1) for u, v in pairs)))
    return out


def overlay_copies(rng: Stream, h: Multigraph, k: int, max_g: int) -> Multigraph:
    """Union of k copies of h, each glued to the existing graph at a random
    nonempty vertex overlap; every vertex ends up inside a copy."""
    n = h.n
    pair_mult: dict[tuple[int, int], int] = {}

    def add_copy(mapping: list[int]) -> None:
        for (a, b), m in h.adjacency.items():
            u, v = mapping[a], mapping[b]
            if u > v:
                u, v = v, u
            pair_mult[(u, v)] = max(pair_mult.get((u, v), 0), m)

    add_copy(list(range(n)))
    g_n = n
    for _ in range(k - 1):
        overlap = rng.randint(1, max(1, n - 1))
        overlap = max(overlap, g_n + n - max_g)  # respect the size budget
        if overlap > min(n, g_n):
            break
        targets = rng.sample(range(g_n), overlap)
        sources = rng.sample(range(n), overlap)
        mapping = [-1] * n
        for s, t in zip(sources, targets):
            mapping[s] = t
        nxt = g_n
        for v in range(n):
            if mapping[v] == -1:
                mapping[v] = nxt
                nxt += 1
        g_n = nxt
        add_copy(mapping)
    return Multigraph(g_n, [(u, v, m, 1) for (u, v), m in pair_mult.items()])


# -- pair generation -----------------------------------------------------------


def _subgraph_witness(g: Multigraph, h: Multigraph):
    from .embeddings import embeddings_iter

    return next(embeddings_iter(g, h), None)


_DECIDERS = {
    "domination": check_domination,
    "fractional_tiling": check_fractional_tiling,
    "fractional_edge_tiling": check_fractional_edge_tiling,
    "tiling": check_tiling,
    "subgraph": _subgraph_witness,
}


def _propose(rng: Stream, gen: PairGenerator) -> Optional[tuple[Multigraph, Multigraph]]:
    if gen.strategy == "overlay_copies":
        hn = rng.randint(2, gen.max_h)
        h = random_connected_graph(rng, hn, extra_hi=hn + 2)
        g = overlay_copies(rng, h, rng.randint(2, 4), gen.max_g)
        return g, h
    if gen.strategy == "transitive_catalog":
        catalog = transitive_catalog(gen.max_g)
        g = rng.choice(catalog)
        k = rng.randint(1, min(gen.max_h, g.n))
        h = random_connected_subgraph(rng, g, k)
        return g, h
    gn = rng.randint(2, gen.max_g)
    g = random_connected_graph(rng, gn)
    h = random_connected_graph(rng, rng.randint(1, min(gen.max_h, gn)))
    return g, h


def generate_pair(gen: PairGenerator, trial: int = 0) -> GeneratedPair:
    """Deterministic (strategy, seed, trial) -> verified pair; rejection-samples."""
    decider = _DECIDERS.get(gen.relation)
    if decider is None:
        raise ValueError(f"unknown relation {gen.relation!r}")
    for attempt in range(gen.max_attempts):
        rng = Stream(derive_seed(gen.seed, trial, attempt))
        proposal = _propose(rng, gen)
        if proposal is None:
            continue
        g, h = proposal
        if h.n > g.n:
            continue
        cert = decider(g, h)
        if cert is not None:
            if gen.relation == "subgraph":
                cert = None  # embeddings are re-proved by the checker directly
            return GeneratedPair(
                g=g, h=h, relation=gen.relation, certificate=cert, trial=trial, attempts=attempt + 1
            )
    raise GenerationError(
        f"no {gen.relation} pair found in {gen.max_attempts} attempts (trial {trial})"
    )


# -- parameter synthesis for single-graph inequalities ---------------------------


def random_regular_cover(rng: Stream, n: int, rounds: int) -> list[list[int]]:
    """Union of ``rounds`` random partitions of the vertex set: every vertex
    appears in exactly ``rounds`` of the returned sets."""
    cover: list[list[int]] = []
    for _ in range(rounds):
        verts = list(range(n))
        rng.shuffle(verts)
        i = 0
        while i < n:
            size = min(rng.randint(1, max(1, n // 2)), n - i)
            cover.append(sorted(verts[i : i + size]))
            i += size
    return cover


def random_vertex_subset(rng: Stream, n: int) -> list[int]:
    size = rng.randint(1, n)
    return sorted(rng.sample(range(n), size))


# -- the hunt -------------------------------------------------------------------


@dataclass
class Violation:
    trial: int
    report: CheckReport
    g: str
    h: Optional[str]

    def to_json(self) -> dict:
        return {"trial": self.trial, "g": self.g, "h": self.h, "report": self.report.to_json()}


@dataclass
class HuntResult:
    inequality: str
    strategy: str
    seed: int
    relation: str
    trials: int
    checked: int
    violations: list[Violation]
    elapsed: float
    generation_failures: int = 0
    resource_skips: int = 0
    params: dict = field(default_factory=dict)

    def summary(self) -> str:
        return (
            f"hunt {self.inequality}: {len(self.violations)} violation(s) in "
            f"{self.checked}/{self.trials} checked trials "
            f"({self.generation_failures} generation failures, "
            f"{self.resource_skips} resource skips), {self.elapsed:.1f}s"
        )

    def to_json(self) -> dict:
        return {
            "inequality": self.inequality,
            "strategy": self.strategy,
            "seed": self.seed,
            "relation": self.relation,
            "trials": self.trials,
            "checked": self.checked,
            "violations": [v.to_json() for v in self.violations],
            "generation_failures": self.generation_failures,
            "resource_skips": self.resource_skips,
            "elapsed": self.elapsed,
            "params": self.params,
        }


_PARAM_IDS = {
    InequalityId.KOTELJANSKII_STEP,
    InequalityId.COVER_PRODUCT,
    InequalityId.WEIGHTED_COVER_HEAT,
}


def _hunt_params_trial(
    ineq: InequalityId, gen: PairGenerator, trial: int, params: dict
) -> tuple[Optional[Multigraph], dict]:
    rng = Stream(derive_seed(gen.seed, trial, 10_000))
    g = random_connected_graph(rng, rng.randint(2, gen.max_g))
    extra = dict(params)
    if ineq is InequalityId.KOTELJANSKII_STEP:
        extra["a"] = random_vertex_subset(rng, g.n)
        extra["b"] = random_vertex_subset(rng, g.n)
    elif ineq is InequalityId.COVER_PRODUCT:
        extra["cover"] = random_regular_cover(rng, g.n, rng.randint(1, 3))
    else:
        # cover g by itself with randomly reduced weights; hypothesis (ii) holds
        from fractions import Fraction

        scale = Fraction(rng.randint(1, 4), 4)
        extra["weighted_cover"] = [
            {
                "vertices": list(range(g.n)),
                "edges": [[u, v, m, str(w * scale)] for u, v, m, w in g.edges],
            }
        ]
    return g, extra


def hunt(
    ineq: InequalityId | str,
    gen: PairGenerator,
    trials: int,
    params: Optional[dict] = None,
) -> HuntResult:
    """Run ``check`` over generated inputs; collect violated reports only.

    Hypothesis-failed trials are never reported as violations; generation
    failures (attempt cap) are counted and skipped.
    """
    from .counting import CountingBoundExceeded
    from .embeddings import CopyLimitExceeded

    ineq = InequalityId(ineq)
    params = dict(params or {})
    t0 = time.time()
    violations: list[Violation] = []
    checked = 0
    genfail = 0
    skips = 0
    for trial in range(trials):
        if ineq in _PARAM_IDS:
            g, trial_params = _hunt_params_trial(ineq, gen, trial, params)
            report = check(ineq, g, None, trial_params)
            checked += 1
            if report.verdict == checks.VIOLATED:
                violations.append(Violation(trial, report, serialize_graph(g), None))
            continue
        try:
            pair = generate_pair(gen, trial)
        except GenerationError:
            genfail += 1
            continue
        trial_params = dict(params)
        trial_params.setdefault("hypothesis", gen.relation)
        if pair.certificate is not None:
            trial_params["certificate"] = pair.certificate
        try:
            report = check(ineq, pair.g, pair.h, trial_params)
        except (CountingBoundExceeded, CopyLimitExceeded):
            skips += 1
            continue
        checked += 1
        if report.verdict == checks.VIOLATED:
            violations.append(
                Violation(trial, report, serialize_graph(pair.g), serialize_graph(pair.h))
            )
    clean_params = {
        k: v for k, v in params.items() if isinstance(v, (str, int, float, list))
    }
    return HuntResult(
        inequality=ineq.value,
        strategy=gen.strategy,
        seed=gen.seed,
        relation=gen.relation,
        trials=trials,
        checked=checked,
        violations=violations,
        elapsed=time.time() - t0,
        generation_failures=genfail,
        resource_skips=skips,
        params=clean_params,
    )
