import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gdom.embeddings import CopyLimitExceeded, enumerate_copies
from gdom.multigraph import (
    Multigraph,
    complete_graph,
    cycle_graph,
    parse_graph,
    path_graph,
    single_edge,
    star_graph,
)
from gdom.relations import (
    CouplingCertificate,
    FractionalTilingCertificate,
    TilingCertificate,
    certificate_from_json,
    certificate_to_json,
    check_domination,
    check_fractional_edge_tiling,
    check_fractional_tiling,
    check_tiling,
    domination_hall_condition,
    feasible_nonnegative,
    verify_certificate,
)
from gdom.symmetry import is_transitive

from conftest import atlas_up_to, random_connected


def grid4x4():
    rows = [(i * 4 + j, i * 4 + j + 1) for i in range(4) for j in range(3)]
    cols = [(i * 4 + j, (i + 1) * 4 + j) for i in range(3) for j in range(4)]
    return Multigraph(16, rows + cols)


# -- simplex -------------------------------------------------------------------


def test_simplex_feasible_and_infeasible():
    one = Fraction(1)
    x = feasible_nonnegative([[one, one]], [one])
    assert x is not None and sum(x) == 1 and all(v >= 0 for v in x)
    # x1 - x2 = 1 and x1 + x2 = 0 has no nonnegative solution
    assert feasible_nonnegative([[one, -one], [one, one]], [one, Fraction(0)]) is None
    # equality forced: x = 3 in one variable
    x = feasible_nonnegative([[Fraction(2)]], [Fraction(3)])
    assert x == [Fraction(3, 2)]


def test_simplex_negative_rhs_rows():
    one = Fraction(1)
    x = feasible_nonnegative([[-one, -one]], [Fraction(-2)])
    assert x is not None and sum(x) == 2


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_simplex_against_scipy_oracle(seed):
    from scipy.optimize import linprog

    rng = random.Random(seed)
    m, n = rng.randint(1, 5), rng.randint(1, 8)
    rows = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(m)]
    rhs = [Fraction(rng.randint(-4, 4)) for _ in range(m)]
    x = feasible_nonnegative(rows, rhs)
    if x is not None:
        # soundness is exact: A x = b, x >= 0
        assert all(v >= 0 for v in x)
        for row, b in zip(rows, rhs):
            assert sum(a * v for a, v in zip(row, x)) == b
    ref = linprog(
        [0.0] * n,
        A_eq=[[float(a) for a in row] for row in rows],
        b_eq=[float(b) for b in rhs],
        bounds=[(0, None)] * n,
        method="highs",
    )
    assert (x is not None) == ref.success


# -- tiling -------------------------------------------------------------------


def test_grid_tiled_by_c4():
    cert = check_tiling(grid4x4(), cycle_graph(4))
    assert cert is not None and len(cert.copies) == 4
    assert verify_certificate(grid4x4(), cycle_graph(4), cert)


def test_k4_not_tiled_by_k3():
    assert check_tiling(complete_graph(4), complete_graph(3)) is None


def test_self_tiling():
    g = complete_graph(4)
    cert = check_tiling(g, g)
    assert cert is not None and len(cert.copies) == 1


def test_tiling_gives_fractional_tiling_with_m1():
    g, h = grid4x4(), cycle_graph(4)
    tiling = check_tiling(g, h)
    as_frac = FractionalTilingCertificate(
        copies=tiling.copies,
        multiplicities=[1] * len(tiling.copies),
        coverage=1,
        mode="vertex",
    )
    assert verify_certificate(g, h, as_frac)
    assert check_fractional_tiling(g, h) is not None


# -- fractional tiling -----------------------------------------------------------


def test_k4_fractionally_tiled_by_k3():
    cert = check_fractional_tiling(complete_graph(4), complete_graph(3))
    assert cert is not None
    assert cert.coverage == 3
    assert sorted(cert.multiplicities) == [1, 1, 1, 1]
    assert verify_certificate(complete_graph(4), complete_graph(3), cert)


def test_path3_edge_infeasible():
    assert check_fractional_tiling(path_graph(3), single_edge()) is None


def test_c5_by_edge():
    cert = check_fractional_tiling(cycle_graph(5), single_edge())
    assert cert is not None and cert.coverage == 2
    assert cert.multiplicities == [1] * 5
    assert verify_certificate(cycle_graph(5), single_edge(), cert)


def test_star_not_fractionally_tiled_by_edge():
    assert check_fractional_tiling(star_graph(4), single_edge()) is None


def test_fractional_tiling_by_edge_vs_scipy_oracle():
    """Tiling by an edge is a fractional perfect matching; cross-check the
    whole decider against an independent LP solver."""
    from scipy.optimize import linprog

    rng = random.Random(67)
    for _ in range(60):
        g = random_connected(rng, rng.randint(2, 8), extra=rng.randint(0, 5))
        mine = check_fractional_tiling(g, single_edge()) is not None
        pairs = sorted(g.adjacency)
        a_eq = [[1.0 if v in e else 0.0 for e in pairs] for v in range(g.n)]
        ref = linprog(
            [0.0] * len(pairs),
            A_eq=a_eq,
            b_eq=[1.0] * g.n,
            bounds=[(0, None)] * len(pairs),
            method="highs",
        )
        assert mine == ref.success, g.edges


def test_copy_limit_inconclusive():
    with pytest.raises(CopyLimitExceeded):
        check_fractional_tiling(path_graph(3), single_edge(), copy_limit=1)
    # a certificate found before the limit is final
    cert = check_fractional_tiling(complete_graph(4), complete_graph(4), copy_limit=1)
    assert cert is not None


# -- fractional edge tiling --------------------------------------------------------


def test_c6_edge_tiled_by_path3():
    g, h = cycle_graph(6), path_graph(3)
    cert = check_fractional_edge_tiling(g, h)
    assert cert is not None
    assert verify_certificate(g, h, cert)


def test_k4_edge_tiled_by_k3():
    cert = check_fractional_edge_tiling(complete_graph(4), complete_graph(3))
    assert cert is not None and cert.coverage == 2
    assert cert.multiplicities == [1, 1, 1, 1]  # each edge lies in exactly 2 triangles
    assert verify_certificate(complete_graph(4), complete_graph(3), cert)


def test_star_no_triangle_copies():
    assert check_fractional_edge_tiling(star_graph(2), complete_graph(3)) is None


# -- domination ---------------------------------------------------------------------


def test_domination_examples():
    assert check_domination(complete_graph(4), complete_graph(3)) is not None
    assert check_domination(star_graph(4), single_edge()) is not None
    assert check_domination(single_edge(), complete_graph(3)) is None


def test_coupling_marginals():
    g, h = complete_graph(4), complete_graph(3)
    cert = check_domination(g, h)
    for x in range(g.n):
        assert sum((m for (a, _), m in cert.masses.items() if a == x), Fraction(0)) == Fraction(1, 4)
    for y in range(h.n):
        assert sum((m for (_, b), m in cert.masses.items() if b == y), Fraction(0)) == Fraction(1, 3)
    assert verify_certificate(g, h, cert)


def test_hall_examples():
    assert domination_hall_condition(complete_graph(4), complete_graph(3)) == (True, None)
    assert domination_hall_condition(complete_graph(3), star_graph(2)) == (True, None)
    ok, witness = domination_hall_condition(cycle_graph(4), complete_graph(3))
    assert not ok and witness is not None


def test_hall_size_bound():
    from gdom.relations import HALL_SIZE_BOUND

    big = path_graph(HALL_SIZE_BOUND + 1)
    with pytest.raises(ValueError):
        domination_hall_condition(big, big)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_flow_agrees_with_hall(seed):
    rng = random.Random(seed)
    g = random_connected(rng, rng.randint(2, 8), extra=rng.randint(0, 5))
    h = random_connected(rng, rng.randint(1, min(6, g.n)), extra=rng.randint(0, 3))
    cert = check_domination(g, h)
    feasible, witness = domination_hall_condition(g, h)
    assert (cert is not None) == feasible
    if cert is not None:
        assert verify_certificate(g, h, cert)
    else:
        # the witness really violates Hall's condition
        from gdom.embeddings import rooted_copy_relation

        rel = rooted_copy_relation(g, h)
        reach = {x for (x, y) in rel if y in witness}
        assert len(reach) * h.n < len(witness) * g.n


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_fractional_tiling_implies_domination(seed):
    rng = random.Random(seed)
    g = random_connected(rng, rng.randint(2, 7), extra=rng.randint(0, 4))
    h = random_connected(rng, rng.randint(1, min(5, g.n)), extra=rng.randint(0, 2))
    if check_fractional_tiling(g, h) is not None:
        assert check_domination(g, h) is not None


def test_transitive_shortcuts_on_atlas():
    """For transitive H: domination iff every vertex covered; for transitive G:
    domination iff a copy exists, and then H fractionally tiles G."""
    from gdom.embeddings import covers_every_vertex, embeddings_iter

    graphs = atlas_up_to(5)
    rng = random.Random(77)
    for _ in range(120):
        g = rng.choice(graphs)
        h = rng.choice([x for x in graphs if x.n <= g.n])
        dom = check_domination(g, h) is not None
        if is_transitive(h):
            assert dom == covers_every_vertex(g, h)
        if is_transitive(g):
            has_copy = next(embeddings_iter(g, h), None) is not None
            assert dom == has_copy
            if dom:
                assert check_fractional_tiling(g, h) is not None


# -- verification and serialization ---------------------------------------------------


def test_perturbed_certificates_rejected():
    g, h = complete_graph(4), complete_graph(3)
    frac = check_fractional_tiling(g, h)
    bad = FractionalTilingCertificate(
        copies=frac.copies,
        multiplicities=[0] + frac.multiplicities[1:],
        coverage=frac.coverage,
        mode="vertex",
    )
    assert not verify_certificate(g, h, bad)
    coup = check_domination(g, h)
    masses = dict(coup.masses)
    key = next(iter(masses))
    masses[key] += Fraction(1, 997)
    assert not verify_certificate(g, h, CouplingCertificate(masses=masses))
    tiling = check_tiling(grid4x4(), cycle_graph(4))
    assert not verify_certificate(
        grid4x4(), cycle_graph(4), TilingCertificate(copies=tiling.copies[:-1])
    )


def test_certificate_wrong_isomorphism_type_rejected():
    g = complete_graph(4)
    cl = enumerate_copies(g, path_graph(3))
    cert = TilingCertificate(copies=[cl.copies[0]])
    # copies are paths, h claims triangle
    assert not verify_certificate(g, complete_graph(3), cert)


def test_json_roundtrip_all_certificate_kinds():
    g, h = complete_graph(4), complete_graph(3)
    for cert in (
        check_fractional_tiling(g, h),
        check_fractional_edge_tiling(g, h),
        check_domination(g, h),
        check_tiling(grid4x4(), cycle_graph(4)),
    ):
        assert cert is not None
        back = certificate_from_json(certificate_to_json(cert))
        target = (g, h) if not isinstance(cert, TilingCertificate) else (grid4x4(), cycle_graph(4))
        assert verify_certificate(*target, back)
