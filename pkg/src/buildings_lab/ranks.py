"""Top homology rank of the oriented building: recursion, oracle, and bounds.

t_n is the rank of the top reduced homology of the oriented building on F^n.
The recursion multiplies the previous rank by the count of new top cells a
cone contributes and adds a cross term for each intermediate splitting
degree; its only inputs are the field size q and the number a of U-cosets in
F*. brute_force_rank recomputes the same rank from an actual complex, which
is what settles the variant question: scaling a splitting by a unit moves
both halves at once, so the cross term counts cosets, not U-orbits of pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .complexes import DEFAULT_SIMPLEX_CAP, build_oriented_tits, gaussian_binomial
from .homology import reduced_homology
from .residue import PrimeContext
from .rings import INTEGERS, RingId

VARIANTS = ("cosets", "orbits")

__all__ = [
    "VARIANTS",
    "RankTable",
    "nu_degree",
    "recursive_rank",
    "brute_force_rank",
    "rank_lower_bound",
    "cross_validate",
]


def nu_degree(ring: RingId, n: int) -> int:
    """Degree of rank growth in degree n for the ring's place signature.

    With r real and c complex places of the fraction field (r=1, c=0 for the
    rational integers, r=0, c=1 for the imaginary quadratic rings) the degree
    is r*C(n+1,2) + c*n^2 - n - r - c + 1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    r, c = (1, 0) if ring is INTEGERS else (0, 1)
    return r * comb(n + 1, 2) + c * n * n - n - r - c + 1


def recursive_rank(ctx: PrimeContext, n: int, variant: str = "cosets") -> int:
    """t_n by the recursion; the "orbits" variant exists only for comparison."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if n < 1:
        raise ValueError("n must be at least 1")
    a = len(ctx.cosets)
    q = ctx.q
    factor = a if variant == "cosets" else a + 1
    t = [0, 1]
    for m in range(2, n + 1):
        total = ((a - 1) + a * q ** (m - 1)) * t[m - 1]
        for k in range(1, m - 1):
            total += (
                factor
                * (a - 1)
                * q**k
                * gaussian_binomial(q, m - 1, k)
                * t[k]
                * t[m - 1 - k]
            )
        t.append(total)
    return t[n]


def rank_lower_bound(ctx: PrimeContext, n: int) -> int:
    """q^C(n,2) * a^(n-1); attained exactly when U is all of F*."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return ctx.q ** comb(n, 2) * len(ctx.cosets) ** (n - 1)


def brute_force_rank(
    ctx: PrimeContext,
    n: int,
    cap: int = DEFAULT_SIMPLEX_CAP,
    use_numba: bool | None = None,
) -> int:
    """Top reduced Betti number of the oriented building, certified exact."""
    if n < 2:
        raise ValueError("the oriented building needs n >= 2")
    sc = build_oriented_tits(ctx, n, cap=cap)
    report = reduced_homology(sc, use_numba=use_numba)
    if not report.betti_exact[n - 2]:
        raise RuntimeError(f"top Betti number of {ctx.key} n={n} was not certified")
    return report.betti[n - 2]


@dataclass
class RankTable:
    key: str
    n: int
    variant: str
    recursive: int
    lower_bound: int
    brute_force: int | None = None

    @property
    def consistent(self) -> bool:
        if self.recursive < self.lower_bound:
            return False
        return self.brute_force is None or self.brute_force == self.recursive


def cross_validate(
    ctx: PrimeContext,
    n: int,
    variant: str = "cosets",
    brute: bool = True,
    cap: int = DEFAULT_SIMPLEX_CAP,
    use_numba: bool | None = None,
) -> RankTable:
    """Recursion, lower bound, and (optionally) the complex-built oracle."""
    return RankTable(
        key=ctx.key,
        n=n,
        variant=variant,
        recursive=recursive_rank(ctx, n, variant),
        lower_bound=rank_lower_bound(ctx, n),
        brute_force=brute_force_rank(ctx, n, cap=cap, use_numba=use_numba)
        if brute
        else None,
    )
