import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from buildings_lab.rings import (
    ALL_RINGS,
    EISENSTEIN,
    GAUSSIAN,
    INTEGERS,
    SQRT_MINUS_TWO,
    RingElement,
    associates,
    euclidean_divmod,
    format_element,
    is_prime,
    minimal_norm_primes,
    norm,
    one,
    parse_element,
    ring_by_name,
    theta,
    units,
    zero,
)

QUADRATIC = (GAUSSIAN, EISENSTEIN, SQRT_MINUS_TWO)


def elements(ring, lo=-50, hi=50):
    if ring is INTEGERS:
        return st.builds(lambda a: RingElement(ring, a, 0), st.integers(lo, hi))
    return st.builds(
        lambda a, b: RingElement(ring, a, b), st.integers(lo, hi), st.integers(lo, hi)
    )


def any_element():
    return st.sampled_from(ALL_RINGS).flatmap(elements)


def test_ring_names():
    assert ring_by_name("Z") is INTEGERS
    assert ring_by_name("Zi") is GAUSSIAN
    assert ring_by_name("eisenstein") is EISENSTEIN
    assert ring_by_name("Zs") is SQRT_MINUS_TWO
    with pytest.raises(ValueError):
        ring_by_name("Zq")


def test_norm_values():
    assert norm(RingElement(GAUSSIAN, 1, 1)) == 2
    assert norm(RingElement(EISENSTEIN, 1, 4)) == 13  # 1 + 4w
    assert norm(RingElement(EISENSTEIN, 3, 4)) == 13  # 3 + 4w
    assert norm(RingElement(EISENSTEIN, 1, 3)) == 7
    assert norm(RingElement(SQRT_MINUS_TWO, 1, 1)) == 3
    assert norm(RingElement(INTEGERS, -5)) == 25


def test_integers_have_no_theta():
    with pytest.raises(ValueError):
        RingElement(INTEGERS, 1, 1)
    with pytest.raises(ValueError):
        theta(INTEGERS)


def test_theta_relation():
    for ring in QUADRATIC:
        s, t = ring.theta_square
        th = theta(ring)
        assert th * th == RingElement(ring, s, t)


def test_divmod_integers():
    q, r = euclidean_divmod(RingElement(INTEGERS, 7), RingElement(INTEGERS, 3))
    assert (q.a, r.a) == (2, 1)


def test_divmod_by_one():
    for ring in ALL_RINGS:
        x = RingElement(ring, 5, 0 if ring is INTEGERS else -3)
        q, r = euclidean_divmod(x, one(ring))
        assert q == x and r.is_zero()


def test_divmod_gaussian_ties_round_down():
    # (5+3i)/2 = 2.5 + 1.5i; both coordinates are ties, which round toward
    # negative infinity, so q = 2+i and r = 1+i.
    x = RingElement(GAUSSIAN, 5, 3)
    y = RingElement(GAUSSIAN, 2, 0)
    q, r = euclidean_divmod(x, y)
    assert (q.a, q.b) == (2, 1)
    assert (r.a, r.b) == (1, 1)
    assert q * y + r == x
    assert norm(r) < norm(y)


def test_divmod_zero_divisor():
    with pytest.raises(ZeroDivisionError):
        euclidean_divmod(one(GAUSSIAN), zero(GAUSSIAN))


@settings(max_examples=1000)
@given(st.sampled_from(ALL_RINGS).flatmap(lambda r: st.tuples(elements(r), elements(r))))
def test_norm_multiplicative(pair):
    x, y = pair
    assert norm(x * y) == norm(x) * norm(y)


@settings(max_examples=1000)
@given(st.sampled_from(ALL_RINGS).flatmap(lambda r: st.tuples(elements(r), elements(r))))
def test_divmod_contract(pair):
    x, y = pair
    if y.is_zero():
        return
    q, r = euclidean_divmod(x, y)
    assert q * y + r == x
    assert norm(r) < norm(y)


def test_unit_groups():
    assert len(units(INTEGERS)) == 2
    assert len(units(GAUSSIAN)) == 4
    assert len(units(EISENSTEIN)) == 6
    assert len(units(SQRT_MINUS_TWO)) == 2
    for ring in ALL_RINGS:
        us = set(units(ring))
        assert all(norm(u) == 1 for u in us)
        # closed under multiplication, hence a group (finite and cancellative)
        assert {u * v for u in us for v in us} == us


def test_every_norm_one_element_is_listed():
    for ring in ALL_RINGS:
        listed = set(units(ring))
        b_range = (0,) if ring is INTEGERS else range(-2, 3)
        for a in range(-2, 3):
            for b in b_range:
                x = RingElement(ring, a, b)
                assert (norm(x) == 1) == (x in listed)


def test_is_prime_examples():
    assert is_prime(RingElement(GAUSSIAN, 3, 0))
    assert is_prime(RingElement(EISENSTEIN, 1, 4))
    assert not is_prime(RingElement(GAUSSIAN, 2, 0))  # 2 = -i(1+i)^2 ramifies
    assert is_prime(RingElement(INTEGERS, 7))
    assert is_prime(RingElement(INTEGERS, -5))
    assert not is_prime(RingElement(INTEGERS, 6))
    assert is_prime(RingElement(GAUSSIAN, 1, 2))
    assert not is_prime(RingElement(EISENSTEIN, 3, 0))  # 3 ramifies in Z[w]
    assert is_prime(RingElement(SQRT_MINUS_TWO, 0, 1))
    assert not is_prime(RingElement(SQRT_MINUS_TWO, 3, 0))  # 3 splits: (1+s)(1-s)


def test_is_prime_rejects_zero_and_units():
    with pytest.raises(ValueError):
        is_prime(zero(GAUSSIAN))
    with pytest.raises(ValueError):
        is_prime(RingElement(GAUSSIAN, 0, -1))
    with pytest.raises(ValueError):
        is_prime(RingElement(INTEGERS, -1))


def test_minimal_norm_primes():
    (p,) = minimal_norm_primes(INTEGERS)
    assert (p.a, p.b) == (2, 0)
    (p,) = minimal_norm_primes(GAUSSIAN)
    assert (p.a, p.b) == (1, 1) and norm(p) == 2
    (p,) = minimal_norm_primes(SQRT_MINUS_TWO)
    assert (p.a, p.b) == (0, 1) and norm(p) == 2
    (p,) = minimal_norm_primes(EISENSTEIN)
    assert norm(p) == 3  # 2 is not a value of a^2 - ab + b^2


def test_associates_count():
    x = RingElement(EISENSTEIN, 1, 4)
    assert len(set(associates(x))) == 6


def test_parse_and_format():
    assert parse_element(INTEGERS, " -12 ") == RingElement(INTEGERS, -12)
    assert parse_element(GAUSSIAN, "1+2*i") == RingElement(GAUSSIAN, 1, 2)
    assert parse_element(GAUSSIAN, "-i") == RingElement(GAUSSIAN, 0, -1)
    assert parse_element(GAUSSIAN, "3") == RingElement(GAUSSIAN, 3, 0)
    assert parse_element(EISENSTEIN, "1 + 4*w") == RingElement(EISENSTEIN, 1, 4)
    assert parse_element(EISENSTEIN, "3-w") == RingElement(EISENSTEIN, 3, -1)
    assert parse_element(SQRT_MINUS_TWO, "1+s") == RingElement(SQRT_MINUS_TWO, 1, 1)
    for bad in ("", "i+3", "2+3*q", "1++2*i", "w", "2*i+1"):
        with pytest.raises(ValueError):
            parse_element(INTEGERS if bad == "w" else INTEGERS, bad)
    with pytest.raises(ValueError):
        parse_element(GAUSSIAN, "1+2*w")


@settings(max_examples=500)
@given(any_element())
def test_format_round_trips(x):
    assert parse_element(x.ring, format_element(x)) == x


def test_format_examples():
    assert format_element(RingElement(GAUSSIAN, 0, 1)) == "i"
    assert format_element(RingElement(GAUSSIAN, 3, -1)) == "3-i"
    assert format_element(RingElement(EISENSTEIN, -1, -4)) == "-1-4*w"
    assert format_element(RingElement(SQRT_MINUS_TWO, 0, 2)) == "2*s"


def test_conjugate_and_norm_agree():
    for ring in QUADRATIC:
        x = RingElement(ring, 3, -2)
        prod = x * x.conjugate()
        assert prod == RingElement(ring, norm(x), 0)


def test_mixed_ring_operations_rejected():
    with pytest.raises(ValueError):
        RingElement(GAUSSIAN, 1, 0) + RingElement(EISENSTEIN, 1, 0)
