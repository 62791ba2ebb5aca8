"""Inequality checkers for the graph-comparison relations.

Each checker verifies its relation hypothesis first (producing a
certificate), then compares both sides.  Exact quantities are compared by
big-integer cross-exponentiation: a^(1/m) >= b^(1/n) iff a^n >= b^m for
positive exact values, so equality cases are decided, never guessed.
Spectral quantities are compared in floating point under an explicit error
budget; a difference inside the budget is reported inconclusive, never a
false violation.  Continuous-parameter claims are checked on finite grids
named in the report.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import log
from typing import Optional, Sequence, Union

from . import counting, spectral
from .counting import Count
from .embeddings import embeddings_iter, enumerate_copies
from .multigraph import Multigraph, contract_complement, contract_subgraph_edges, has_cut_edge, serialize_graph
from .relations import (
    Certificate,
    CouplingCertificate,
    FractionalTilingCertificate,
    TilingCertificate,
    certificate_to_json,
    check_domination,
    check_fractional_edge_tiling,
    check_fractional_tiling,
    check_tiling,
    verify_certificate,
)
from .spectral import FunctionalSpec, heat_trace, spectral_functional, spectral_functional_error
from .symmetry import cached_code, is_transitive

HOLDS = "holds"
HOLDS_WITH_EQUALITY = "holds_with_equality"
VIOLATED = "violated"
HYPOTHESIS_FAILED = "hypothesis_failed"
INCONCLUSIVE = "inconclusive"

PROVEN = "proven"
CONJECTURED = "conjectured"
KNOWN_FALSE = "known_false"

VERTEX_FAMILIES = ("independent_sets", "proper_colorings", "weighted_homomorphisms")
EDGE_FAMILIES = ("acyclic_orientations", "forests", "matchings")


class InequalityId(str, Enum):
    SPANNING_TREE = "spanning_tree"
    TREE_PRODUCT = "tree_product"
    MINOR_POWER = "minor_power"
    TRANSITIVE_G = "transitive_G"
    TRANSITIVE_H = "transitive_H"
    FRAC_TILING_TREE = "frac_tiling_tree"
    KOTELJANSKII_STEP = "koteljanskii_step"
    COVER_PRODUCT = "cover_product"
    HEAT_TRACE_FRAC = "heat_trace_frac"
    WEIGHTED_COVER_HEAT = "weighted_cover_heat"
    SPECTRAL_DECREASING_CONVEX = "spectral_decreasing_convex"
    OP_MONOTONE = "op_monotone"
    CHAR_POLY = "char_poly"
    VERTEX_COUNTING = "vertex_counting"
    EDGE_COUNTING = "edge_counting"
    MATCHINGS_LOWER = "matchings_lower"
    TUTTE_POINTWISE = "tutte_pointwise"
    TUTTE_COEFFICIENTS = "tutte_coefficients"


# default relation hypothesis per id, and the set a caller may request instead
_DEFAULT_HYPOTHESIS: dict[InequalityId, str] = {
    InequalityId.SPANNING_TREE: "domination",
    InequalityId.TREE_PRODUCT: "subgraph",
    InequalityId.MINOR_POWER: "subgraph",
    InequalityId.TRANSITIVE_G: "domination",
    InequalityId.TRANSITIVE_H: "domination",
    InequalityId.FRAC_TILING_TREE: "fractional_tiling",
    InequalityId.KOTELJANSKII_STEP: "params",
    InequalityId.COVER_PRODUCT: "params",
    InequalityId.HEAT_TRACE_FRAC: "fractional_tiling",
    InequalityId.WEIGHTED_COVER_HEAT: "params",
    InequalityId.SPECTRAL_DECREASING_CONVEX: "fractional_tiling",
    InequalityId.OP_MONOTONE: "domination",
    InequalityId.CHAR_POLY: "domination",
    InequalityId.VERTEX_COUNTING: "fractional_tiling",
    InequalityId.EDGE_COUNTING: "fractional_edge_tiling",
    InequalityId.MATCHINGS_LOWER: "fractional_tiling",
    InequalityId.TUTTE_POINTWISE: "domination",
    InequalityId.TUTTE_COEFFICIENTS: "domination",
}

_RELATION_HYPOTHESES = ("domination", "fractional_tiling", "fractional_edge_tiling", "tiling", "subgraph")


def claim_status(
    ineq: InequalityId, hypothesis: str, family: Optional[str] = None, h_transitive: bool = False
) -> str:
    """Proven / conjectured / known-false status of the claim being checked."""
    i = InequalityId(ineq)
    if i in (
        InequalityId.TREE_PRODUCT,
        InequalityId.MINOR_POWER,
        InequalityId.TRANSITIVE_G,
        InequalityId.TRANSITIVE_H,
        InequalityId.FRAC_TILING_TREE,
        InequalityId.KOTELJANSKII_STEP,
        InequalityId.COVER_PRODUCT,
        InequalityId.WEIGHTED_COVER_HEAT,
        InequalityId.OP_MONOTONE,
        InequalityId.CHAR_POLY,
    ):
        return PROVEN
    if i is InequalityId.SPANNING_TREE:
        return PROVEN if hypothesis in ("fractional_tiling", "tiling") else CONJECTURED
    if i is InequalityId.HEAT_TRACE_FRAC:
        return PROVEN if hypothesis in ("fractional_tiling", "tiling") else CONJECTURED
    if i is InequalityId.SPECTRAL_DECREASING_CONVEX:
        if hypothesis in ("fractional_tiling", "tiling"):
            return PROVEN
        return CONJECTURED if h_transitive else KNOWN_FALSE
    if i is InequalityId.VERTEX_COUNTING:
        if hypothesis in ("fractional_tiling", "tiling"):
            return PROVEN
        return KNOWN_FALSE if family == "independent_sets" else CONJECTURED
    if i is InequalityId.EDGE_COUNTING:
        return PROVEN if hypothesis == "fractional_edge_tiling" else CONJECTURED
    if i is InequalityId.MATCHINGS_LOWER:
        if hypothesis in ("fractional_tiling", "tiling"):
            return CONJECTURED
        return KNOWN_FALSE
    return CONJECTURED  # tutte_pointwise, tutte_coefficients


# -- report ------------------------------------------------------------------


def _value_repr(v) -> Optional[Union[str, float]]:
    if v is None:
        return None
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return v
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    return str(v)


@dataclass
class GridPoint:
    label: str
    lhs: Union[Fraction, float, int]
    rhs: Union[Fraction, float, int]
    verdict: str
    error_bound: float = 0.0

    def to_json(self) -> dict:
        return {
            "at": self.label,
            "lhs": _value_repr(self.lhs),
            "rhs": _value_repr(self.rhs),
            "verdict": self.verdict,
            "error_bound": self.error_bound,
        }


@dataclass
class CheckReport:
    inequality: str
    verdict: str
    hypothesis: str
    hypothesis_ok: bool
    status: str = CONJECTURED
    g: Optional[str] = None
    h: Optional[str] = None
    family: Optional[str] = None
    lhs: Optional[Union[Fraction, float, int]] = None
    rhs: Optional[Union[Fraction, float, int]] = None
    exact: bool = True
    error_bound: float = 0.0
    certificate: Optional[dict] = None
    strictness: Optional[str] = None
    params: dict = field(default_factory=dict)
    points: list[GridPoint] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.verdict in (HOLDS, HOLDS_WITH_EQUALITY)

    def to_json(self) -> dict:
        return {
            "inequality": self.inequality,
            "verdict": self.verdict,
            "status": self.status,
            "hypothesis": self.hypothesis,
            "hypothesis_ok": self.hypothesis_ok,
            "g": self.g,
            "h": self.h,
            "family": self.family,
            "lhs": _value_repr(self.lhs),
            "rhs": _value_repr(self.rhs),
            "exact": self.exact,
            "error_bound": self.error_bound,
            "certificate": self.certificate,
            "strictness": self.strictness,
            "params": self.params,
            "points": [p.to_json() for p in self.points],
            "notes": self.notes,
        }


# -- grids and comparisons ------------------------------------------------------


def default_t_grid() -> list[Fraction]:
    return [Fraction(2) ** k for k in range(-6, 7)]


def default_xy_grid() -> list[tuple[Fraction, Fraction]]:
    axis = [Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)]
    return [(x, y) for x in axis for y in axis]


def compare_exact(lhs: Count, rhs: Count, direction: str) -> str:
    if lhs == rhs:
        return HOLDS_WITH_EQUALITY
    if direction == "ge":
        return HOLDS if lhs > rhs else VIOLATED
    return HOLDS if lhs < rhs else VIOLATED


def compare_normalized_powers(a: Count, na: int, b: Count, nb: int, direction: str) -> str:
    """Compare a^(1/na) with b^(1/nb) exactly via a^nb vs b^na (a, b >= 0)."""
    if a < 0 or b < 0:
        raise ValueError("normalized power comparison needs nonnegative values")
    return compare_exact(Fraction(a) ** nb, Fraction(b) ** na, direction)


def compare_float(lhs: float, rhs: float, direction: str, budget: float) -> str:
    diff = lhs - rhs
    if diff == 0.0:
        return HOLDS_WITH_EQUALITY
    if abs(diff) <= budget:
        return INCONCLUSIVE
    if direction == "ge":
        return HOLDS if diff > 0 else VIOLATED
    return HOLDS if diff < 0 else VIOLATED


def aggregate_verdicts(verdicts: Sequence[str]) -> str:
    if not verdicts:
        return INCONCLUSIVE
    if any(v == VIOLATED for v in verdicts):
        return VIOLATED
    if any(v == HYPOTHESIS_FAILED for v in verdicts):
        return HYPOTHESIS_FAILED
    if any(v == INCONCLUSIVE for v in verdicts):
        return INCONCLUSIVE
    if all(v == HOLDS_WITH_EQUALITY for v in verdicts):
        return HOLDS_WITH_EQUALITY
    return HOLDS


# -- hypothesis verification -----------------------------------------------------


class MissingParameter(ValueError):
    pass


def _has_copy(g: Multigraph, h: Multigraph) -> bool:
    if h.n > g.n:
        return False
    return next(embeddings_iter(g, h), None) is not None


def verify_relation_hypothesis(
    hypothesis: str,
    g: Multigraph,
    h: Multigraph,
    certificate: Optional[Certificate] = None,
    copy_limit: Optional[int] = None,
) -> tuple[bool, Optional[Certificate]]:
    """Certify the relation hypothesis, reusing a supplied certificate if valid."""
    if certificate is not None and verify_certificate(g, h, certificate):
        kind = {
            TilingCertificate: "tiling",
            FractionalTilingCertificate: None,  # mode decides
            CouplingCertificate: "domination",
        }[type(certificate)]
        if isinstance(certificate, FractionalTilingCertificate):
            kind = (
                "fractional_tiling"
                if certificate.mode == "vertex"
                else "fractional_edge_tiling"
            )
        implies = {
            "tiling": {"tiling", "fractional_tiling", "subgraph", "domination"},
            "fractional_tiling": {"fractional_tiling", "subgraph", "domination"},
            "fractional_edge_tiling": {"fractional_edge_tiling", "subgraph"},
            "domination": {"domination"},
        }[kind]
        if hypothesis in implies:
            return True, certificate
    if hypothesis == "domination":
        cert = check_domination(g, h)
        return cert is not None, cert
    if hypothesis == "fractional_tiling":
        cert = check_fractional_tiling(g, h, copy_limit)
        return cert is not None, cert
    if hypothesis == "fractional_edge_tiling":
        cert = check_fractional_edge_tiling(g, h, copy_limit)
        return cert is not None, cert
    if hypothesis == "tiling":
        cert = check_tiling(g, h, copy_limit)
        return cert is not None, cert
    if hypothesis == "subgraph":
        return _has_copy(g, h), None
    raise ValueError(f"unknown relation hypothesis {hypothesis!r}")


# -- family counters ---------------------------------------------------------------


def vertex_family_count(g: Multigraph, family: str, params: dict) -> Count:
    if family == "independent_sets":
        return counting.count_independent_sets(g)
    if family == "proper_colorings":
        return counting.count_proper_colorings(g, int(params.get("q", 3)))
    if family == "weighted_homomorphisms":
        target = params.get("hom_target")
        if target is None:
            raise MissingParameter("weighted_homomorphisms needs params['hom_target']")
        return counting.count_weighted_homomorphisms(g, target, params.get("hom_weights"))
    raise ValueError(f"unknown vertex family {family!r}; expected one of {VERTEX_FAMILIES}")


def edge_family_count(g: Multigraph, family: str) -> int:
    if family == "acyclic_orientations":
        return counting.count_acyclic_orientations(g)
    if family == "forests":
        return counting.count_forests(g)
    if family == "matchings":
        return counting.count_matchings(g)
    raise ValueError(f"unknown edge family {family!r}; expected one of {EDGE_FAMILIES}")


# -- the checker --------------------------------------------------------------------


def check(
    ineq: Union[InequalityId, str],
    g: Multigraph,
    h: Optional[Multigraph] = None,
    params: Optional[dict] = None,
) -> CheckReport:
    """Run one inequality check; see the id table for hypotheses and directions."""
    ineq = InequalityId(ineq)
    params = dict(params or {})
    hypothesis = params.get("hypothesis", _DEFAULT_HYPOTHESIS[ineq])
    report = CheckReport(
        inequality=ineq.value,
        verdict=INCONCLUSIVE,
        hypothesis=hypothesis,
        hypothesis_ok=False,
        g=serialize_graph(g),
        h=None if h is None else serialize_graph(h),
        family=params.get("family"),
    )
    needs_h = ineq not in (
        InequalityId.KOTELJANSKII_STEP,
        InequalityId.COVER_PRODUCT,
        InequalityId.WEIGHTED_COVER_HEAT,
    )
    if needs_h and h is None:
        raise MissingParameter(f"{ineq.value} needs a second graph")

    # --- hypothesis ---
    transitivity_note = None
    if ineq is InequalityId.MINOR_POWER or ineq is InequalityId.TRANSITIVE_G:
        if not is_transitive(g):
            report.notes.append("G is not transitive")
            report.verdict = HYPOTHESIS_FAILED
            report.status = claim_status(ineq, hypothesis)
            return report
        transitivity_note = "G transitive"
    if ineq is InequalityId.TRANSITIVE_H:
        if not is_transitive(h):
            report.notes.append("H is not transitive")
            report.verdict = HYPOTHESIS_FAILED
            report.status = claim_status(ineq, hypothesis)
            return report
        transitivity_note = "H transitive"

    relation_cert: Optional[Certificate] = None
    if hypothesis in _RELATION_HYPOTHESES:
        ok, relation_cert = verify_relation_hypothesis(
            hypothesis, g, h, params.get("certificate"), params.get("copy_limit")
        )
        report.hypothesis_ok = ok
        if relation_cert is not None:
            report.certificate = certificate_to_json(relation_cert)
        if not ok:
            report.verdict = HYPOTHESIS_FAILED
            report.status = claim_status(ineq, hypothesis, params.get("family"))
            return report
    if transitivity_note:
        report.notes.append(transitivity_note)

    h_trans = ineq is InequalityId.SPECTRAL_DECREASING_CONVEX and h is not None and is_transitive(h)
    report.status = claim_status(ineq, hypothesis, params.get("family"), h_trans)

    # --- dispatch ---
    if ineq is InequalityId.SPANNING_TREE or ineq in (
        InequalityId.TRANSITIVE_G,
        InequalityId.TRANSITIVE_H,
        InequalityId.FRAC_TILING_TREE,
    ):
        _check_tree_ratio(ineq, g, h, report)
    elif ineq is InequalityId.TREE_PRODUCT:
        _check_tree_product(g, h, report)
    elif ineq is InequalityId.MINOR_POWER:
        _check_minor_power(g, h, report)
    elif ineq is InequalityId.KOTELJANSKII_STEP:
        _check_koteljanskii_step(g, params, report)
    elif ineq is InequalityId.COVER_PRODUCT:
        _check_cover_product(g, params, report)
    elif ineq is InequalityId.HEAT_TRACE_FRAC:
        _check_heat_trace(g, h, params, report)
    elif ineq is InequalityId.WEIGHTED_COVER_HEAT:
        _check_weighted_cover_heat(g, params, report)
    elif ineq is InequalityId.SPECTRAL_DECREASING_CONVEX:
        _check_spectral_functionals(g, h, params, report, direction="le", need="decreasing_convex")
    elif ineq is InequalityId.OP_MONOTONE:
        _check_op_monotone(g, h, params, report)
    elif ineq is InequalityId.CHAR_POLY:
        _check_char_poly(g, h, params, report)
    elif ineq is InequalityId.VERTEX_COUNTING:
        _check_vertex_counting(g, h, params, report)
    elif ineq is InequalityId.EDGE_COUNTING:
        _check_edge_counting(g, h, params, report)
    elif ineq is InequalityId.MATCHINGS_LOWER:
        _check_matchings_lower(g, h, params, report)
    elif ineq is InequalityId.TUTTE_POINTWISE:
        _check_tutte_pointwise(g, h, params, report)
    elif ineq is InequalityId.TUTTE_COEFFICIENTS:
        _check_tutte_coefficients(g, h, report)
    else:  # pragma: no cover
        raise ValueError(f"unhandled inequality {ineq!r}")
    return report


# --- individual checkers ---


def _check_tree_ratio(ineq: InequalityId, g, h, report: CheckReport) -> None:
    tg, th = counting.count_spanning_trees(g), counting.count_spanning_trees(h)
    report.lhs, report.rhs = tg, th
    report.params["normalization"] = f"lhs^(1/{g.n}) vs rhs^(1/{h.n})"
    report.verdict = compare_normalized_powers(tg, g.n, th, h.n, "ge")
    if ineq is InequalityId.TRANSITIVE_G:
        strict_expected = not has_cut_edge(g) and cached_code(g) != cached_code(h)
        if strict_expected:
            report.strictness = "strict inequality asserted (no cut-edge, G not H)"
            if report.verdict == HOLDS_WITH_EQUALITY:
                report.verdict = VIOLATED
                report.notes.append("equality where strict inequality is asserted")


def _check_tree_product(g, h, report: CheckReport) -> None:
    tg = counting.count_spanning_trees(g)
    th = counting.count_spanning_trees(h)
    worst = None
    copies = enumerate_copies(g, h).copies
    for c in copies:
        quotient = contract_subgraph_edges(g, c.vertices, [(u, v) for u, v, _ in c.edges])
        lhs = th * counting.count_spanning_trees(quotient)
        if worst is None or lhs > worst:
            worst = lhs
    report.lhs, report.rhs = worst, tg
    report.params["copies_checked"] = len(copies)
    report.verdict = compare_exact(worst, tg, "le")


def _check_minor_power(g, h, report: CheckReport) -> None:
    tg = counting.count_spanning_trees(g)
    copies = enumerate_copies(g, h).copies
    verdicts = []
    worst = None
    for c in copies:
        minor = counting.count_spanning_trees(contract_complement(g, c.vertices))
        verdicts.append(compare_normalized_powers(minor, 1, Fraction(tg) ** h.n, g.n, "ge"))
        if worst is None or minor < worst:
            worst = minor
    report.lhs = worst
    report.rhs = tg
    report.params["copies_checked"] = len(copies)
    report.params["normalization"] = f"tau(G_H) vs tau(G)^({h.n}/{g.n})"
    report.verdict = aggregate_verdicts(verdicts)
    if not has_cut_edge(g) and g.n > h.n >= 1:
        report.strictness = "strict inequality asserted (no cut-edge, |G| > |H|)"
        if report.verdict == HOLDS_WITH_EQUALITY:
            report.verdict = VIOLATED
            report.notes.append("equality where strict inequality is asserted")


def _resolve_subsets(g: Multigraph, params: dict, keys=("a", "b")) -> list[frozenset[int]]:
    out = []
    for k in keys:
        if k not in params:
            raise MissingParameter(f"koteljanskii_step needs params[{k!r}]")
        s = frozenset(int(v) for v in params[k])
        if not s.issubset(range(g.n)):
            raise ValueError(f"subset {k} out of range")
        out.append(s)
    return out


def _tau_contract(g: Multigraph, a: frozenset[int]) -> Count:
    return counting.count_spanning_trees(contract_complement(g, a))


def _check_koteljanskii_step(g, params: dict, report: CheckReport) -> None:
    a, b = _resolve_subsets(g, params)
    union, inter = a | b, a & b
    lhs = Fraction(_tau_contract(g, a)) * Fraction(_tau_contract(g, b))
    rhs = Fraction(_tau_contract(g, union)) * Fraction(_tau_contract(g, inter))
    report.lhs, report.rhs = lhs, rhs
    report.params["a"] = sorted(a)
    report.params["b"] = sorted(b)
    crossing = any(
        g.multiplicity(u, v) > 0 for u in a - b for v in b - a
    )
    hyp_ok = len(union) < g.n or crossing
    report.hypothesis_ok = hyp_ok
    raw = compare_exact(lhs, rhs, "ge")
    if hyp_ok:
        report.verdict = raw
    else:
        report.verdict = HYPOTHESIS_FAILED
        report.notes.append(
            f"union is all of V(G) and no edge joins A-B to B-A; raw comparison: {raw}"
        )


def _check_cover_product(g, params: dict, report: CheckReport) -> None:
    cover = params.get("cover")
    if cover is None:
        raise MissingParameter("cover_product needs params['cover']")
    sets = [frozenset(int(v) for v in s) for s in cover]
    counts = [0] * g.n
    for s in sets:
        for v in s:
            counts[v] += 1
    m = counts[0] if counts else 0
    report.params["cover_sizes"] = [len(s) for s in sets]
    if m < 1 or any(c != m for c in counts):
        report.verdict = HYPOTHESIS_FAILED
        report.notes.append("cover is not m-regular over the vertices")
        return
    report.hypothesis_ok = True
    report.params["m"] = m
    lhs = Fraction(1)
    for s in sets:
        lhs *= Fraction(_tau_contract(g, s))
    rhs = Fraction(counting.count_spanning_trees(g)) ** m
    report.lhs, report.rhs = lhs, rhs
    report.verdict = compare_exact(lhs, rhs, "ge")


def _resolve_t_grid(params: dict) -> list[Fraction]:
    grid = params.get("t_grid")
    if grid is None:
        return default_t_grid()
    return [Fraction(t) for t in grid]


def _check_heat_trace(g, h, params: dict, report: CheckReport) -> None:
    grid = _resolve_t_grid(params)
    report.params["t_grid"] = [str(t) for t in grid]
    report.exact = False
    if g.is_unweighted() and h.is_unweighted() and cached_code(g) == cached_code(h):
        # isomorphic graphs have identical traces at every t
        for t in grid:
            val = heat_trace(g, float(t))
            report.points.append(GridPoint(f"t={t}", val, val, HOLDS_WITH_EQUALITY))
        report.notes.append("G and H are isomorphic; equality holds at every t")
        report.verdict = HOLDS_WITH_EQUALITY
        lastp = report.points[-1]
        report.lhs, report.rhs = lastp.lhs, lastp.rhs
        return
    for t in grid:
        spec = FunctionalSpec("exp_decay", Fraction(t))
        budget = spectral_functional_error(g, spec) + spectral_functional_error(h, spec)
        lhs = heat_trace(g, float(t))
        rhs = heat_trace(h, float(t))
        v = compare_float(lhs, rhs, "le", budget)
        report.points.append(GridPoint(f"t={t}", lhs, rhs, v, budget))
    report.verdict = aggregate_verdicts([p.verdict for p in report.points])
    bad = next((p for p in report.points if p.verdict == VIOLATED), report.points[-1])
    report.lhs, report.rhs, report.error_bound = bad.lhs, bad.rhs, bad.error_bound
    if report.verdict == VIOLATED:
        report.notes.append(f"violated at {bad.label}")


def _cover_entry_laplacian(entry: dict) -> tuple[list[list[Fraction]], int, dict]:
    verts = [int(v) for v in entry["vertices"]]
    lbl = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    L = [[Fraction(0)] * n for _ in range(n)]
    weights: dict[tuple[int, int], Fraction] = {}
    for rec in entry["edges"]:
        u, v, m, w = int(rec[0]), int(rec[1]), int(rec[2]), Fraction(rec[3])
        if u not in lbl or v not in lbl:
            raise ValueError("cover entry edge outside its vertex set")
        a, b = lbl[u], lbl[v]
        x = m * w
        L[a][b] -= x
        L[b][a] -= x
        L[a][a] += x
        L[b][b] += x
        key = (min(u, v), max(u, v))
        weights[key] = weights.get(key, Fraction(0)) + m * w
    return L, n, weights


def _check_weighted_cover_heat(g, params: dict, report: CheckReport) -> None:
    cover = params.get("weighted_cover")
    if cover is None:
        raise MissingParameter("weighted_cover_heat needs params['weighted_cover']")
    counts = [0] * g.n
    entries = []
    for entry in cover:
        entries.append(entry)
        for v in entry["vertices"]:
            counts[int(v)] += 1
    m = counts[0] if counts else 0
    if m < 1 or any(c != m for c in counts):
        report.verdict = HYPOTHESIS_FAILED
        report.notes.append("cover does not hit every vertex the same number of times")
        return
    # weight hypothesis: w(e) >= (1/m) sum of entry weights on e, per pair
    g_weight: dict[tuple[int, int], Fraction] = {}
    for u, v, mult, w in g.edges:
        g_weight[(u, v)] = g_weight.get((u, v), Fraction(0)) + mult * w
    lap_data = []
    total_weight_on: dict[tuple[int, int], Fraction] = {}
    for entry in entries:
        L, n, weights = _cover_entry_laplacian(entry)
        lap_data.append((L, n))
        for pair, w in weights.items():
            if pair not in g_weight:
                report.verdict = HYPOTHESIS_FAILED
                report.notes.append(f"cover entry uses pair {pair} absent from G")
                return
            total_weight_on[pair] = total_weight_on.get(pair, Fraction(0)) + w
    for pair, tw in total_weight_on.items():
        if g_weight[pair] < tw / m:
            report.verdict = HYPOTHESIS_FAILED
            report.notes.append(f"weight hypothesis fails on pair {pair}")
            return
    report.hypothesis_ok = True
    report.params["m"] = m
    big_n = sum(n for _, n in lap_data)
    grid = _resolve_t_grid(params)
    report.params["t_grid"] = [str(t) for t in grid]
    report.exact = False
    for t in grid:
        lhs = heat_trace(g, float(t))
        rhs = sum(spectral.heat_trace_sum_from_matrix(L, float(t)) for L, _ in lap_data) / big_n
        budget = 1e-9
        report.points.append(GridPoint(f"t={t}", lhs, rhs, compare_float(lhs, rhs, "le", budget), budget))
    report.verdict = aggregate_verdicts([p.verdict for p in report.points])
    bad = next((p for p in report.points if p.verdict == VIOLATED), report.points[-1])
    report.lhs, report.rhs, report.error_bound = bad.lhs, bad.rhs, bad.error_bound


def _resolve_functionals(params: dict, need: str) -> list[FunctionalSpec]:
    fs = params.get("functional")
    if fs is None:
        fs = [FunctionalSpec("exp_decay", Fraction(t)) for t in _resolve_t_grid(params)]
    elif isinstance(fs, FunctionalSpec):
        fs = [fs]
    for f in fs:
        if need == "decreasing_convex" and not (f.decreasing and f.convex):
            raise ValueError(f"functional {f.describe()} is not decreasing convex")
        if need == "op_monotone" and not f.operator_monotone_increasing:
            raise ValueError(f"functional {f.describe()} is not operator monotone increasing")
    return list(fs)


def _check_spectral_functionals(g, h, params: dict, report: CheckReport, direction: str, need: str) -> None:
    fs = _resolve_functionals(params, need)
    report.exact = False
    report.params["functionals"] = [f.describe() for f in fs]
    for f in fs:
        budget = spectral_functional_error(g, f) + spectral_functional_error(h, f)
        lhs = spectral_functional(g, f)
        rhs = spectral_functional(h, f)
        report.points.append(
            GridPoint(f.describe(), lhs, rhs, compare_float(lhs, rhs, direction, budget), budget)
        )
    report.verdict = aggregate_verdicts([p.verdict for p in report.points])
    bad = next((p for p in report.points if p.verdict == VIOLATED), report.points[-1])
    report.lhs, report.rhs, report.error_bound = bad.lhs, bad.rhs, bad.error_bound
    if report.verdict == VIOLATED:
        report.notes.append(f"violated at {bad.label}")


def _check_op_monotone(g, h, params: dict, report: CheckReport) -> None:
    if "functional" not in params:
        params = dict(params)
        params["functional"] = [
            FunctionalSpec("shifted_log", Fraction(t)) for t in _resolve_t_grid(params)
        ]
    _check_spectral_functionals(g, h, params, report, direction="ge", need="op_monotone")


def _check_char_poly(g, h, params: dict, report: CheckReport) -> None:
    grid = _resolve_t_grid(params)
    report.params["t_grid"] = [str(t) for t in grid]
    for t in grid:
        dg = spectral.shifted_determinant_exact(g, t)
        dh = spectral.shifted_determinant_exact(h, t)
        v = compare_normalized_powers(dg, g.n, dh, h.n, "ge")
        report.points.append(GridPoint(f"t={t}", dg, dh, v))
    report.verdict = aggregate_verdicts([p.verdict for p in report.points])
    bad = next((p for p in report.points if p.verdict == VIOLATED), report.points[-1])
    report.lhs, report.rhs = bad.lhs, bad.rhs
    report.params["normalization"] = f"det^(1/{g.n}) vs det^(1/{h.n})"


def _check_vertex_counting(g, h, params: dict, report: CheckReport) -> None:
    family = params.get("family", "independent_sets")
    report.family = family
    fg = vertex_family_count(g, family, params)
    fh = vertex_family_count(h, family, params)
    report.lhs, report.rhs = fg, fh
    report.params["normalization"] = f"lhs^(1/{g.n}) vs rhs^(1/{h.n})"
    report.verdict = compare_normalized_powers(fg, g.n, fh, h.n, "le")


def _check_edge_counting(g, h, params: dict, report: CheckReport) -> None:
    family = params.get("family", "forests")
    report.family = family
    eg, eh = g.edge_unit_count(), h.edge_unit_count()
    if eh == 0 or eg == 0:
        report.verdict = HYPOTHESIS_FAILED
        report.hypothesis_ok = False
        report.notes.append("edge-normalized comparison needs at least one edge on each side")
        return
    fg = edge_family_count(g, family)
    fh = edge_family_count(h, family)
    report.lhs, report.rhs = fg, fh
    report.params["normalization"] = f"lhs^(1/{eg}) vs rhs^(1/{eh})"
    report.verdict = compare_normalized_powers(fg, eg, fh, eh, "le")


def _check_matchings_lower(g, h, params: dict, report: CheckReport) -> None:
    k = params.get("packing_by")
    if k is None:
        fg = counting.count_matchings(g)
        fh = counting.count_matchings(h)
        report.family = "matchings"
    else:
        fg = counting.count_packings(g, k)
        fh = counting.count_packings(h, k)
        report.family = "packings"
        report.params["packing_by"] = serialize_graph(k)
    report.lhs, report.rhs = fg, fh
    report.params["normalization"] = f"lhs^(1/{g.n}) vs rhs^(1/{h.n})"
    report.verdict = compare_normalized_powers(fg, g.n, fh, h.n, "ge")


def _check_tutte_pointwise(g, h, params: dict, report: CheckReport) -> None:
    grid = params.get("xy_grid")
    if grid is None:
        grid = default_xy_grid()
    grid = [(Fraction(x), Fraction(y)) for x, y in grid]
    if any(x < 1 or y < 1 for x, y in grid):
        raise ValueError("tutte_pointwise grid needs x, y >= 1")
    report.params["xy_grid"] = [f"({x},{y})" for x, y in grid]
    tg = counting.tutte_polynomial(g)
    th = counting.tutte_polynomial(h)
    for x, y in grid:
        a = tg.evaluate(x, y)
        b = th.evaluate(x, y)
        v = compare_normalized_powers(a, g.n, b, h.n, "ge")
        report.points.append(GridPoint(f"(x,y)=({x},{y})", a, b, v))
    report.verdict = aggregate_verdicts([p.verdict for p in report.points])
    bad = next((p for p in report.points if p.verdict == VIOLATED), report.points[-1])
    report.lhs, report.rhs = bad.lhs, bad.rhs


def _check_tutte_coefficients(g, h, report: CheckReport) -> None:
    tg = counting.tutte_polynomial(g).substitute_plus_one()
    th = counting.tutte_polynomial(h).substitute_plus_one()
    diff = tg.power(h.n) - th.power(g.n)
    report.params["statement"] = f"coefficients of T_G(x+1,y+1)^{h.n} - T_H(x+1,y+1)^{g.n}"
    if not diff.coeffs:
        report.verdict = HOLDS_WITH_EQUALITY
        return
    negatives = [(k, v) for k, v in diff.coeffs if v < 0]
    if negatives:
        (i, j), v = min(negatives, key=lambda kv: kv[1])
        report.verdict = VIOLATED
        report.notes.append(f"negative coefficient {v} at x^{i} y^{j}")
        report.lhs, report.rhs = v, 0
    else:
        report.verdict = HOLDS


# -- Shearer ---------------------------------------------------------------------


@dataclass
class JointDistribution:
    """Finite joint distribution of k discrete coordinates, exact probabilities."""

    k: int
    probs: dict[tuple, Fraction]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need at least one coordinate")
        total = Fraction(0)
        for key, p in self.probs.items():
            if len(key) != self.k:
                raise ValueError(f"support tuple {key!r} has arity != {self.k}")
            if p <= 0:
                raise ValueError("support probabilities must be positive")
            total += p
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def marginal(self, coords: Sequence[int]) -> dict[tuple, Fraction]:
        out: dict[tuple, Fraction] = {}
        cs = tuple(coords)
        for key, p in self.probs.items():
            proj = tuple(key[i] for i in cs)
            out[proj] = out.get(proj, Fraction(0)) + p
        return out


def entropy_nats(probs: dict[tuple, Fraction]) -> float:
    """Shannon entropy in nats from exact probabilities, floating logs."""
    return -sum(float(p) * log(float(p)) for p in probs.values() if p != 1)


def check_shearer(
    dist: JointDistribution,
    cover: Sequence[Sequence[int]],
    r: int,
    budget: float = 1e-9,
) -> CheckReport:
    """r * H(X_1..X_k) <= sum over cover sets S of H(X_S), for an r-regular cover."""
    if r < 1:
        raise ValueError("r must be a positive integer")
    sets = [tuple(sorted(set(int(i) for i in s))) for s in cover]
    counts = [0] * dist.k
    for s in sets:
        for i in s:
            if not 0 <= i < dist.k:
                raise ValueError(f"cover index {i} out of range")
            counts[i] += 1
    if any(c != r for c in counts):
        raise ValueError(f"cover is not {r}-regular: coordinate counts {counts}")
    joint = entropy_nats(dist.probs)
    lhs = r * joint
    parts = [entropy_nats(dist.marginal(s)) for s in sets]
    rhs = sum(parts)
    report = CheckReport(
        inequality="shearer",
        verdict=compare_float(lhs, rhs, "le", budget),
        hypothesis=f"{r}-regular cover",
        hypothesis_ok=True,
        status=PROVEN,
        lhs=lhs,
        rhs=rhs,
        exact=False,
        error_bound=budget,
        params={"r": r, "cover": [list(s) for s in sets], "support": len(dist.probs)},
    )
    return report
