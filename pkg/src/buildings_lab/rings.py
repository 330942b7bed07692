"""Exact arithmetic in the four Euclidean number rings Z, Z[i], Z[w], Z[s].

Here i^2 = -1, w is a primitive cube root of unity (w^2 = -1 - w), and
s = sqrt(-2) (s^2 = -2). An element is a + b*theta with arbitrary-precision
integer coordinates; the rational integers force b = 0. All four rings are
norm-Euclidean, so division with a norm-reducing remainder is obtained by
rounding the exact rational quotient coordinatewise.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "RingId",
    "RingElement",
    "INTEGERS",
    "GAUSSIAN",
    "EISENSTEIN",
    "SQRT_MINUS_TWO",
    "ALL_RINGS",
    "ring_by_name",
    "zero",
    "one",
    "theta",
    "units",
    "norm",
    "euclidean_divmod",
    "divides",
    "is_prime",
    "associates",
    "minimal_norm_primes",
    "parse_element",
    "format_element",
]


@dataclass(frozen=True, slots=True)
class RingId:
    """Identifier of one of the supported rings.

    ``theta_square = (s, t)`` encodes the defining relation
    ``theta**2 = s + t*theta``; ``symbol`` is the letter standing for theta in
    the textual element syntax (empty for the rational integers).
    """

    tag: str
    theta_square: tuple[int, int]
    symbol: str

    def __repr__(self) -> str:
        return self.tag


INTEGERS = RingId("Integers", (0, 0), "")
GAUSSIAN = RingId("Gaussian", (-1, 0), "i")
EISENSTEIN = RingId("Eisenstein", (-1, -1), "w")
SQRT_MINUS_TWO = RingId("SqrtMinusTwo", (-2, 0), "s")

ALL_RINGS = (INTEGERS, GAUSSIAN, EISENSTEIN, SQRT_MINUS_TWO)

_BY_NAME = {
    "z": INTEGERS,
    "integers": INTEGERS,
    "zi": GAUSSIAN,
    "gaussian": GAUSSIAN,
    "zw": EISENSTEIN,
    "eisenstein": EISENSTEIN,
    "zs": SQRT_MINUS_TWO,
    "sqrtminustwo": SQRT_MINUS_TWO,
    "sqrt-minus-two": SQRT_MINUS_TWO,
}


def ring_by_name(name: str) -> RingId:
    """Resolve a ring from a CLI-style name such as ``Z``, ``Zi``, ``Zw``, ``Zs``."""
    key = name.strip().lower().replace("_", "-")
    try:
        return _BY_NAME[key]
    except KeyError:
        known = ", ".join(sorted({r.tag for r in ALL_RINGS}))
        raise ValueError(f"unknown ring {name!r}; known rings: {known} (short: Z, Zi, Zw, Zs)") from None


@dataclass(frozen=True, slots=True)
class RingElement:
    """a + b*theta with integer coordinates in a fixed ring."""

    ring: RingId
    a: int
    b: int = 0

    def __post_init__(self) -> None:
        if self.ring is INTEGERS and self.b != 0:
            raise ValueError("rational integers have no theta component")

    def __str__(self) -> str:
        return format_element(self)

    def _check(self, other: "RingElement") -> None:
        if self.ring is not other.ring:
            raise ValueError(f"mixed rings: {self.ring.tag} and {other.ring.tag}")

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, self.a + other.a, self.b + other.b)

    def __sub__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        return RingElement(self.ring, self.a - other.a, self.b - other.b)

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, -self.a, -self.b)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        s, t = self.ring.theta_square
        bd = self.b * other.b
        return RingElement(
            self.ring,
            self.a * other.a + s * bd,
            self.a * other.b + self.b * other.a + t * bd,
        )

    def __pow__(self, exponent: int) -> "RingElement":
        if exponent < 0:
            raise ValueError("negative exponents are not defined in the ring")
        out = one(self.ring)
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conjugate(self) -> "RingElement":
        # The other root of x^2 - t*x - s is t - theta.
        _, t = self.ring.theta_square
        return RingElement(self.ring, self.a + t * self.b, -self.b)

    def norm(self) -> int:
        s, t = self.ring.theta_square
        return self.a * self.a + t * self.a * self.b - s * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_unit(self) -> bool:
        return self.norm() == 1


def zero(ring: RingId) -> RingElement:
    return RingElement(ring, 0, 0)


def one(ring: RingId) -> RingElement:
    return RingElement(ring, 1, 0)


def theta(ring: RingId) -> RingElement:
    if ring is INTEGERS:
        raise ValueError("the rational integers have no adjoined element")
    return RingElement(ring, 0, 1)


_UNIT_COORDS = {
    INTEGERS: ((1, 0), (-1, 0)),
    GAUSSIAN: ((1, 0), (-1, 0), (0, 1), (0, -1)),
    EISENSTEIN: ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, -1)),
    SQRT_MINUS_TWO: ((1, 0), (-1, 0)),
}


def units(ring: RingId) -> tuple[RingElement, ...]:
    """All units of the ring: +-1, plus +-i for Z[i], plus the six sixth roots of unity for Z[w]."""
    return tuple(RingElement(ring, a, b) for a, b in _UNIT_COORDS[ring])


def norm(x: RingElement) -> int:
    return x.norm()


_HALF = Fraction(1, 2)


def _round_half_down(t: Fraction) -> int:
    """Nearest integer, ties toward negative infinity (keeps divmod deterministic)."""
    return math.ceil(t - _HALF)


def euclidean_divmod(x: RingElement, y: RingElement) -> tuple[RingElement, RingElement]:
    """Quotient and remainder with norm(r) < norm(y).

    The quotient rounds each rational coordinate of x/y to the nearest
    integer; for all four rings the rounding defect keeps the remainder norm
    at most 3/4 of norm(y).
    """
    x._check(y)
    if y.is_zero():
        raise ZeroDivisionError(f"division by zero in {y.ring.tag}")
    w = x * y.conjugate()
    n = y.norm()
    q = RingElement(
        x.ring,
        _round_half_down(Fraction(w.a, n)),
        _round_half_down(Fraction(w.b, n)),
    )
    r = x - q * y
    assert r.norm() < n, (x, y, q, r)
    return q, r


def divides(d: RingElement, x: RingElement) -> bool:
    """Exact divisibility test, done in the fraction field."""
    d._check(x)
    if d.is_zero():
        return x.is_zero()
    w = x * d.conjugate()
    n = d.norm()
    return w.a % n == 0 and w.b % n == 0


def _is_rational_prime(n: int) -> bool:
    if n < 2:
        return False
    from sympy import isprime

    return bool(isprime(n))


def _is_inert(ring: RingId, q: int) -> bool:
    """Whether the rational prime q stays prime in the ring."""
    if ring is INTEGERS:
        return True
    if ring is GAUSSIAN:
        return q % 4 == 3
    if ring is EISENSTEIN:
        return q % 3 == 2
    return q % 8 in (5, 7)


def is_prime(x: RingElement) -> bool:
    """Primality in the ring.

    A nonzero nonunit is prime iff its norm is a rational prime, or its norm
    is q^2 for a rational prime q that is inert in the ring (in which case x
    is an associate of q).
    """
    if x.is_zero() or x.is_unit():
        raise ValueError(f"{x} is zero or a unit; primality applies to nonzero nonunits")
    n = x.norm()
    if _is_rational_prime(n):
        return True
    q = math.isqrt(n)
    return q * q == n and _is_rational_prime(q) and _is_inert(x.ring, q)


def associates(x: RingElement) -> tuple[RingElement, ...]:
    return tuple(u * x for u in units(x.ring))


def minimal_norm_primes(ring: RingId) -> tuple[RingElement, ...]:
    """Nonunit elements of minimal norm, one representative per associate class.

    Each returned element is prime: minimal-norm nonunits have norm 2, 3, or 4
    (the latter only over Z), all of which force primality.
    """
    best: int | None = None
    found: list[RingElement] = []
    b_range = (0,) if ring is INTEGERS else range(-2, 3)
    for a in range(-2, 3):
        for b in b_range:
            x = RingElement(ring, a, b)
            n = x.norm()
            if n <= 1:
                continue
            if best is None or n < best:
                best, found = n, [x]
            elif n == best:
                found.append(x)
    reps: dict[tuple[int, int], RingElement] = {}
    for x in found:
        rep = max(associates(x), key=lambda y: (y.a, y.b))
        reps[(rep.a, rep.b)] = rep
    out = tuple(sorted(reps.values(), key=lambda y: (y.a, y.b)))
    assert all(is_prime(x) for x in out)
    return out


_INT_RE = re.compile(r"[+-]?\d+")


def parse_element(ring: RingId, text: str) -> RingElement:
    """Parse ``a``, ``a+b*i``, ``a+b*w``, or ``a+b*s`` (whitespace ignored).

    The bare symbol stands for coefficient 1, so ``i``, ``-i``, ``3-w`` all
    parse. Negative coefficients are fine; the symbol must match the ring.
    """
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ValueError("empty element")
    if _INT_RE.fullmatch(compact):
        return RingElement(ring, int(compact), 0)
    sym = ring.symbol
    if not sym:
        raise ValueError(f"cannot parse {text!r} as a rational integer")
    bad = ValueError(f"cannot parse {text!r} as an element of {ring.tag} (expected a+b*{sym})")
    if not compact.endswith(sym) or compact.count(sym) != 1:
        raise bad
    body = compact[: -len(sym)]
    if body.endswith("*"):
        # explicit coefficient: a sign is mandatory on b whenever a is present,
        # so "12*w" is 12w while "1+2*w" is 1 + 2w
        m = re.fullmatch(r"(?:(?P<a>[+-]?\d+)(?P<b>[+-]\d+)|(?P<b_only>[+-]?\d+))\*", body)
        if m is None:
            raise bad
        a = int(m["a"]) if m["a"] else 0
        b = int(m["b"] if m["b"] is not None else m["b_only"])
    else:
        # bare symbol: coefficient +-1
        m = re.fullmatch(r"(?:(?P<a>[+-]?\d+)(?P<sign>[+-])|(?P<sign_only>[+-]?))", body)
        if m is None:
            raise bad
        a = int(m["a"]) if m["a"] else 0
        b = -1 if (m["sign"] or m["sign_only"]) == "-" else 1
    return RingElement(ring, a, b)


def format_element(x: RingElement) -> str:
    """Inverse of parse_element, producing the compact canonical spelling."""
    if x.b == 0:
        return str(x.a)
    sym = x.ring.symbol
    if x.b == 1:
        b_part = sym
    elif x.b == -1:
        b_part = "-" + sym
    else:
        b_part = f"{x.b}*{sym}"
    if x.a == 0:
        return b_part
    joiner = "+" if x.b > 0 else ""
    return f"{x.a}{joiner}{b_part}"
