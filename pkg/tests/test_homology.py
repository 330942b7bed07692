"""Homology ranks, torsion, and the four-loop analysis on frozen examples."""

import random
from fractions import Fraction

import pytest

from buildings_lab.complexes import (
    SimplicialComplex,
    apartment_chain,
    build_BDA,
    build_oriented_tits,
    build_tits,
)
from buildings_lab.homology import (
    FourLoopReport,
    boundary_columns,
    chain_boundary,
    connected_components,
    four_loop_check,
    is_homologically_connected,
    rank_bareiss,
    reduced_homology,
    snf_invariant_factors,
)
from buildings_lab.kernels import DEFAULT_PRIME
from buildings_lab.residue import build_residue_field
from buildings_lab.rings import parse_element, ring_by_name


def ctx_of(ring_name: str, prime: str):
    ring = ring_by_name(ring_name)
    return build_residue_field(ring, parse_element(ring, prime))


def fraction_rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    for col in range(len(m[0]) if m else 0):
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                c = m[i][col]
                m[i] = [a - c * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def complex_from_top(n_vertices: int, top):
    """Downward closure of the given top simplices over range(n_vertices)."""
    levels: list[set] = [{(i,) for i in range(n_vertices)}]
    for s in top:
        d = len(s) - 1
        while len(levels) <= d:
            levels.append(set())
        stack = [tuple(sorted(s))]
        while stack:
            t = stack.pop()
            k = len(t) - 1
            if k > 0 and t not in levels[k]:
                levels[k].add(t)
                stack.extend(t[:j] + t[j + 1 :] for j in range(len(t)))
    return SimplicialComplex(
        [str(i) for i in range(n_vertices)], [sorted(l) for l in levels]
    )


# the 6-vertex projective plane: every edge of K6, each in exactly two faces
RP2_FACES = [
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 4, 5), (2, 3, 5), (1, 3, 5), (1, 3, 4),
]


def test_rank_bareiss_matches_fraction_elimination():
    rng = random.Random(7)
    for _ in range(40):
        nr = rng.randrange(1, 7)
        nc = rng.randrange(1, 7)
        rows = [[rng.randrange(-6, 7) for _ in range(nc)] for _ in range(nr)]
        assert rank_bareiss(rows) == fraction_rank(rows)


def test_rank_bareiss_edge_cases():
    assert rank_bareiss([]) == 0
    assert rank_bareiss([[0, 0], [0, 0]]) == 0
    assert rank_bareiss([[1, 0], [0, 1]]) == 2
    assert rank_bareiss([[2, 4], [1, 2]]) == 1


def test_snf_invariant_factors_known():
    assert snf_invariant_factors([[1, 0], [0, 1]]) == [1, 1]
    assert snf_invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert snf_invariant_factors([[4, 0], [0, 6]]) == [2, 12]
    assert snf_invariant_factors([[2, 4], [6, 10]]) == [2, 2]
    assert snf_invariant_factors([[0, 0], [0, 0]]) == []
    factors = snf_invariant_factors([[6, 0, 0], [0, 10, 0]])
    assert factors == [2, 30]
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0


def test_boundary_columns_square_to_zero():
    sc = build_BDA(ctx_of("zi", "3"), 2)
    for k in range(2, sc.dim + 1):
        faces = sc.simplices[k - 1]
        for rows, vals in boundary_columns(sc, k):
            total: dict = {}
            for r, v in zip(rows, vals):
                for s, c in chain_boundary(sc, {faces[r]: v}).items():
                    total[s] = total.get(s, 0) + c
            assert all(c == 0 for c in total.values())
    with pytest.raises(ValueError):
        boundary_columns(sc, sc.dim + 1)


def test_chain_boundary_of_boundary_vanishes():
    sc = build_tits(ctx_of("z", "3"), 3)
    rng = random.Random(3)
    tops = rng.sample(sc.simplices[1], 10)
    chain = {s: rng.choice([-2, -1, 1, 2]) for s in tops}
    assert chain_boundary(sc, chain_boundary(sc, chain)) == {}


def test_additive_complex_f3_is_a_sphere():
    sc = build_BDA(ctx_of("z", "3"), 2)
    assert sc.counts == (4, 6, 4)
    r = reduced_homology(sc, torsion=True)
    assert r.betti == (0, 0, 1)
    assert all(r.betti_exact)
    assert r.torsion == ((), (), ())
    assert r.methods[2] == "bareiss"
    assert r.primes == ()


def test_additive_complex_f5():
    sc = build_BDA(ctx_of("z", "5"), 2)
    assert sc.counts == (12, 30, 20)
    r = reduced_homology(sc)
    assert r.betti == (0, 0, 1)
    assert all(r.betti_exact)


def test_projective_plane_torsion():
    sc = complex_from_top(6, RP2_FACES)
    assert sc.counts == (6, 15, 10)
    sc.verify_closure()
    r = reduced_homology(sc, torsion=True)
    assert r.betti == (0, 0, 0)
    assert all(r.betti_exact)
    assert r.torsion == ((), (2,), ())


def test_torsion_request_rejected_on_large_complexes():
    sc = build_BDA(ctx_of("z", "5"), 2)
    with pytest.raises(ValueError):
        reduced_homology(sc, torsion=True, exact_limit=8)


def test_disconnected_complex_counts_components():
    sc = complex_from_top(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
    assert connected_components(sc) == 2
    r = reduced_homology(sc)
    assert r.components == 2
    assert r.betti == (1, 2)
    assert all(r.betti_exact)


def test_tits_building_f3_rank3():
    sc = build_tits(ctx_of("z", "3"), 3)
    assert sc.counts == (26, 52)
    r = reduced_homology(sc)
    assert r.betti == (0, 27)
    assert all(r.betti_exact)


def test_oriented_tits_building_f9_rank3():
    sc = build_oriented_tits(ctx_of("zi", "3"), 3)
    assert sc.counts == (364, 3640)
    r = reduced_homology(sc)
    assert r.betti == (0, 3277)
    assert all(r.betti_exact)
    assert r.primes == ()  # a graph needs only union-find


def test_additive_complex_f3_rank3_pinned_exactly():
    sc = build_BDA(ctx_of("z", "3"), 3)
    assert sc.counts == (13, 78, 286, 468)
    r = reduced_homology(sc)
    assert r.ranks == (1, 12, 66, 220, 0)
    assert all(r.rank_exact)
    assert r.betti == (0, 0, 0, 248)
    assert all(r.betti_exact)
    assert r.methods[2] == "mod-p" and r.methods[3] == "mod-p"
    assert r.primes == (DEFAULT_PRIME,)


def test_additive_complex_f5_rank3_certified():
    sc = build_BDA(ctx_of("z", "5"), 3)
    assert sc.counts == (62, 1860, 16740, 31000)
    r = reduced_homology(sc)
    assert r.ranks == (1, 61, 1799, 14941, 0)
    assert all(r.rank_exact)
    assert r.betti == (0, 0, 0, 16059)
    assert all(r.betti_exact)


def test_partial_range_skips_upper_degrees():
    sc = build_BDA(ctx_of("z", "5"), 2)
    r = reduced_homology(sc, up_to_dim=1)
    assert len(r.betti) == 2
    assert r.betti == (0, 0)


def test_is_homologically_connected():
    sc = build_BDA(ctx_of("z", "5"), 2)
    assert is_homologically_connected(sc, 0)
    assert is_homologically_connected(sc, 1)
    assert not is_homologically_connected(sc, 2)


def test_apartment_chains_are_cycles():
    ctx = ctx_of("z", "3")
    target = build_tits(ctx, 3)
    rng = random.Random(11)
    found = 0
    while found < 5:
        basis = [tuple(rng.randrange(3) for _ in range(3)) for _ in range(3)]
        try:
            chain = apartment_chain(ctx, 3, basis, target)
        except ValueError:
            continue
        found += 1
        assert sum(chain.values()) == 0
        assert chain_boundary(target, chain) == {}


def test_four_loop_reports_frozen():
    r = four_loop_check(build_BDA(ctx_of("zi", "3"), 2))
    assert r == FourLoopReport(
        sum_of_two_units=True,
        step_stays_outside=True,
        units_with_unit_predecessor=(2,),
        unfilled_cliques=(),
        cycle_classes=4,
        coned=1,
        chorded=3,
        uncovered=(),
    )
    assert r.all_cliques_filled and r.all_cycles_handled
    for prime in ("1+4*w", "3+4*w"):
        r = four_loop_check(build_BDA(ctx_of("zw", prime), 2))
        assert r.sum_of_two_units and r.step_stays_outside
        assert r.units_with_unit_predecessor == (4, 6)
        assert r.unfilled_cliques == ()
        assert (r.cycle_classes, r.chorded, r.coned) == (7, 5, 2)
        assert r.uncovered == ()


def test_four_loop_rejects_other_complexes():
    ctx = ctx_of("z", "5")
    with pytest.raises(ValueError):
        four_loop_check(build_tits(ctx, 2))
    with pytest.raises(ValueError):
        four_loop_check(build_BDA(ctx, 3))
