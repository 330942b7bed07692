import random

import pytest

from buildings_lab.errors import ResourceCapError
from buildings_lab.residue import (
    build_residue_field,
    extend_echelon,
    field_det,
    field_rank,
    field_rref,
    is_full_unit_image,
    lift_sl_matrix,
    quotient_structure,
    reduce_vector,
    unit_image,
)
from buildings_lab.rings import (
    EISENSTEIN,
    GAUSSIAN,
    INTEGERS,
    SQRT_MINUS_TWO,
    RingElement,
    parse_element,
    theta,
    zero,
    one,
)


def ctx_of(ring, text, cap=256):
    return build_residue_field(ring, parse_element(ring, text), cap)


def test_integers_mod_5():
    ctx = ctx_of(INTEGERS, "5")
    assert ctx.q == 5
    assert [(e.a, e.b) for e in ctx.elements] == [(0, 0), (1, 0), (-1, 0), (-2, 0), (2, 0)]
    assert ctx.reduce(RingElement(INTEGERS, 3)) == ctx.reduce(RingElement(INTEGERS, -2))
    assert unit_image(ctx) == frozenset({1, 2})
    assert not is_full_unit_image(ctx)


def test_gaussian_mod_3():
    ctx = ctx_of(GAUSSIAN, "3")
    assert ctx.q == 9
    assert len(unit_image(ctx)) == 4
    cosets, orbits = quotient_structure(ctx)
    assert len(cosets) == 2
    assert len(orbits) == 3
    assert all(e.norm() <= 2 for e in ctx.elements)


def test_full_unit_image_examples():
    assert is_full_unit_image(ctx_of(SQRT_MINUS_TWO, "1+s"))
    assert is_full_unit_image(ctx_of(GAUSSIAN, "1+2*i"))
    assert not is_full_unit_image(ctx_of(GAUSSIAN, "3"))
    ctx = ctx_of(SQRT_MINUS_TWO, "1+s")
    assert ctx.q == 3
    assert unit_image(ctx) == frozenset({1, ctx.neg[1]})
    cosets, orbits = quotient_structure(ctx)
    assert len(cosets) == 1 and len(orbits) == 2


def test_eisenstein_mod_1_plus_4w():
    ctx = ctx_of(EISENSTEIN, "1+4*w")
    assert ctx.q == 13
    assert len(unit_image(ctx)) == 6
    # 3 - w = (1 + 4w)(-1 - w), so 3 and w fall in the same class
    three = ctx.reduce(RingElement(EISENSTEIN, 3, 0))
    w = ctx.reduce(theta(EISENSTEIN))
    assert three == w
    assert three != ctx.neg[w]
    assert ctx.prime_values is not None
    assert {ctx.prime_values[u] for u in unit_image(ctx)} == {1, 3, 4, 9, 10, 12}
    assert len(quotient_structure(ctx)[0]) == 2


def test_indices_zero_and_one():
    for ring, text in [
        (INTEGERS, "7"),
        (GAUSSIAN, "3"),
        (EISENSTEIN, "2"),
        (SQRT_MINUS_TWO, "s"),
    ]:
        ctx = ctx_of(ring, text)
        assert ctx.reduce(zero(ring)) == 0
        assert ctx.reduce(one(ring)) == 1


def test_rejects_nonprime_and_caps():
    with pytest.raises(ValueError):
        ctx_of(INTEGERS, "6")
    with pytest.raises(ValueError):
        ctx_of(GAUSSIAN, "2")
    with pytest.raises(ValueError):
        ctx_of(INTEGERS, "1")
    with pytest.raises(ResourceCapError):
        ctx_of(INTEGERS, "257")
    with pytest.raises(ResourceCapError):
        build_residue_field(GAUSSIAN, RingElement(GAUSSIAN, 3, 0), 8)


def test_field_axioms_spot_checks():
    for ring, text in [(GAUSSIAN, "3"), (EISENSTEIN, "1+4*w"), (INTEGERS, "7")]:
        ctx = ctx_of(ring, text)
        rng = random.Random(7)
        add, mul = ctx.add, ctx.mul
        for _ in range(300):
            a, b, c = (rng.randrange(ctx.q) for _ in range(3))
            assert add[a][b] == add[b][a]
            assert mul[a][b] == mul[b][a]
            assert add[add[a][b]][c] == add[a][add[b][c]]
            assert mul[mul[a][b]][c] == mul[a][mul[b][c]]
            assert mul[a][add[b][c]] == add[mul[a][b]][mul[a][c]]
            assert add[a][ctx.neg[a]] == 0
            if a:
                assert mul[a][ctx.inv[a]] == 1


def test_multiplicative_group_cyclic():
    for ring, text in [(GAUSSIAN, "3"), (EISENSTEIN, "2"), (INTEGERS, "13")]:
        ctx = ctx_of(ring, text)
        found = False
        for g in range(1, ctx.q):
            order, x = 1, g
            while x != 1:
                x = ctx.mul[x][g]
                order += 1
            if order == ctx.q - 1:
                found = True
                break
        assert found


def test_reduce_is_ring_homomorphism():
    rng = random.Random(11)
    for ring, text in [(GAUSSIAN, "1+2*i"), (EISENSTEIN, "1+4*w"), (SQRT_MINUS_TWO, "1+s")]:
        ctx = ctx_of(ring, text)
        for _ in range(1000):
            x = RingElement(ring, rng.randrange(-40, 41), rng.randrange(-40, 41))
            y = RingElement(ring, rng.randrange(-40, 41), rng.randrange(-40, 41))
            assert ctx.reduce(x + y) == ctx.add[ctx.reduce(x)][ctx.reduce(y)]
            assert ctx.reduce(x * y) == ctx.mul[ctx.reduce(x)][ctx.reduce(y)]


def test_unit_image_is_a_subgroup_with_minus_one():
    for ring, text in [(GAUSSIAN, "3"), (EISENSTEIN, "1+4*w"), (INTEGERS, "11")]:
        ctx = ctx_of(ring, text)
        U = unit_image(ctx)
        assert 1 in U and ctx.neg[1] in U
        assert {ctx.mul[a][b] for a in U for b in U} == set(U)
        assert {ctx.inv[a] for a in U} == set(U)
        assert (ctx.q - 1) % len(U) == 0


def test_cosets_partition_and_orbits():
    ctx = ctx_of(GAUSSIAN, "3")
    cosets, orbits = quotient_structure(ctx)
    seen = sorted(x for c in cosets for x in c)
    assert seen == list(range(1, ctx.q))
    assert orbits[0] == (0,)
    assert orbits[1:] == cosets
    for c in cosets:
        assert len(c) == len(unit_image(ctx))


def test_canonicalize_vector():
    ctx = ctx_of(INTEGERS, "5")
    rng = random.Random(3)
    for _ in range(200):
        v = tuple(rng.randrange(ctx.q) for _ in range(3))
        cv = ctx.canonicalize_vector(v)
        for u in unit_image(ctx):
            scaled = tuple(ctx.mul[u][x] for x in v)
            assert ctx.canonicalize_vector(scaled) == cv
        first = next((x for x in cv if x), None)
        if first is not None:
            assert first == ctx.cosets[ctx.coset_index[first]][0]


def test_field_linear_algebra_helpers():
    ctx = ctx_of(INTEGERS, "5")
    rows = [(1, 2, 0), (0, 1, 1)]
    ech, pivots = field_rref(ctx, rows)
    assert len(ech) == 2 and pivots == (0, 1)
    assert field_rank(ctx, rows) == 2
    assert field_det(ctx, [(1, 2), (1, 2)]) == 0
    # scaling one row by a field element scales the determinant
    c = 3
    scaled = [tuple(ctx.mul[c][x] for x in (1, 2)), (0, 1)]
    assert field_det(ctx, scaled) == ctx.mul[c][field_det(ctx, [(1, 2), (0, 1)])]
    v = (1, 2, 3)
    res = reduce_vector(ctx, ech, pivots, v)
    assert res[0] == 0 and res[1] == 0
    grown = extend_echelon(ctx, ech, pivots, v)
    if res == (0, 0, 0):
        assert grown is None
    else:
        assert grown is not None and len(grown[0]) == 3


def test_lift_identity_and_rotation():
    for ring, text in [(INTEGERS, "5"), (GAUSSIAN, "3")]:
        ctx = ctx_of(ring, text)
        ident = [[1, 0], [0, 1]]
        lifted = lift_sl_matrix(ctx, ident)
        assert lifted[0][0] == one(ring) and lifted[1][1] == one(ring)
        assert lifted[0][1].is_zero() and lifted[1][0].is_zero()
    ctx = ctx_of(INTEGERS, "5")
    minus_one = ctx.neg[1]
    rotation = [[0, minus_one], [1, 0]]
    lifted = lift_sl_matrix(ctx, rotation)
    assert all(ctx.reduce(lifted[i][j]) == rotation[i][j] for i in range(2) for j in range(2))


def random_sl(ctx, n, rng):
    while True:
        M = [[rng.randrange(ctx.q) for _ in range(n)] for _ in range(n)]
        d = field_det(ctx, M)
        if d:
            break
    s = ctx.inv[d]
    M[0] = [ctx.mul[s][x] for x in M[0]]
    assert field_det(ctx, M) == 1
    return M


def test_lift_random_matrices():
    ctx = ctx_of(GAUSSIAN, "3")
    rng = random.Random(20)
    for n in (2, 3):
        for _ in range(100):
            M = random_sl(ctx, n, rng)
            lifted = lift_sl_matrix(ctx, M)
            assert all(
                ctx.reduce(lifted[i][j]) == M[i][j] for i in range(n) for j in range(n)
            )


def test_lift_rejects_non_sl():
    ctx = ctx_of(INTEGERS, "5")
    with pytest.raises(ValueError):
        lift_sl_matrix(ctx, [[1, 0], [0, 4]])
    with pytest.raises(ValueError):
        lift_sl_matrix(ctx, [[1, 0, 0], [0, 1, 0]])
