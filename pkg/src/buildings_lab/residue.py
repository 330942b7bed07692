"""Residue fields F = R/(p) with tabulated arithmetic and the image of the units.

A context is built once per (ring, prime) pair. Field elements are plain
integer indices into the context's table of canonical representatives; index 0
is the class of 0 and index 1 the class of 1. The canonical representative of
a class is its member of minimal norm, ties broken by the lexicographically
least (a, b) coordinate pair.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import ResourceCapError
from .rings import (
    INTEGERS,
    RingElement,
    RingId,
    divides,
    euclidean_divmod,
    format_element,
    is_prime,
    norm,
    one,
    parse_element,
    ring_by_name,
    theta,
    units,
    zero,
)

__all__ = [
    "PrimeContext",
    "STANDARD_PRIMES",
    "build_residue_field",
    "standard_contexts",
    "unit_image",
    "quotient_structure",
    "is_full_unit_image",
    "lift_sl_matrix",
    "field_rref",
    "field_rank",
    "field_det",
    "reduce_vector",
    "extend_echelon",
]

DEFAULT_Q_CAP = 256

# Every prime of residue field size at most 13, one per conjugate pair, except
# that both conjugate primes over 13 in the Eisenstein ring stay because the
# classification examples track them as separate rows.
STANDARD_PRIMES = {
    "Integers": ("2", "3", "5", "7", "11", "13"),
    "Gaussian": ("1+i", "2+i", "3", "3+2*i"),
    "Eisenstein": ("2+w", "2", "3+w", "1+4*w", "3+4*w"),
    "SqrtMinusTwo": ("s", "1+s", "3+s"),
}


def standard_contexts(q_cap: int = 13, ring_names=None) -> list["PrimeContext"]:
    """Residue contexts for every tabulated prime with field size <= q_cap."""
    wanted = None
    if ring_names is not None:
        wanted = {ring_by_name(name).tag for name in ring_names}
    out = []
    for tag, primes in STANDARD_PRIMES.items():
        if wanted is not None and tag not in wanted:
            continue
        ring = ring_by_name(tag)
        for text in primes:
            ctx = build_residue_field(ring, parse_element(ring, text))
            if ctx.q <= q_cap:
                out.append(ctx)
    return out


class PrimeContext:
    """Tabulated arithmetic of F = R/(p) plus the multiplicative data used downstream.

    Attributes:
        ring, p: the pair defining the field.
        q: number of elements.
        elements: canonical representative of each class; elements[0] is the
            zero class and elements[1] the one class.
        add, mul: q x q tables of indices.
        neg, inv: negation and inverse tables (inv[0] is a placeholder 0).
        U: frozenset of indices, the image of the ring's units.
        cosets: partition of the nonzero indices into U-cosets, each sorted,
            ordered by smallest member.
        orbits: the U-orbits on all of F, i.e. ((0,),) + cosets.
        coset_index: for each nonzero index, the position of its coset.
        canon_scale: for each nonzero x, the unit u with u*x = min of x's coset.
        prime_values: when q is prime, the integer value mod q of each index
            under the ring map Z -> F (None otherwise).
    """

    def __init__(self, ring: RingId, p: RingElement, q: int, elements, add, mul, memo):
        self.ring = ring
        self.p = p
        self.q = q
        self.elements = elements
        self.add = add
        self.mul = mul
        self._memo = memo
        self.neg = tuple(add[i].index(0) for i in range(q))
        inv = [0] * q
        for i in range(1, q):
            inv[i] = mul[i].index(1)
        self.inv = tuple(inv)

        unit_classes = sorted({self.reduce(u) for u in units(ring)})
        self.U = frozenset(unit_classes)
        assert 1 in self.U and self.neg[1] in self.U
        assert all(mul[a][b] in self.U for a in self.U for b in self.U)
        assert (q - 1) % len(self.U) == 0

        cosets = []
        coset_index = [-1] * q
        for x in range(1, q):
            if coset_index[x] >= 0:
                continue
            coset = tuple(sorted({mul[x][u] for u in self.U}))
            for y in coset:
                coset_index[y] = len(cosets)
            cosets.append(coset)
        self.cosets = tuple(cosets)
        self.orbits = ((0,),) + self.cosets
        self.coset_index = tuple(coset_index)
        scale = [0] * q
        for x in range(1, q):
            target = self.cosets[coset_index[x]][0]
            scale[x] = mul[target][self.inv[x]]
            assert scale[x] in self.U
        self.canon_scale = tuple(scale)

        self.prime_values = None
        if _is_q_prime(q):
            index_of_value = [0] * q
            cur = 0
            for v in range(1, q):
                cur = add[cur][1]
                index_of_value[v] = cur
            values = [0] * q
            for v, i in enumerate(index_of_value):
                values[i] = v
            self.prime_values = tuple(values)

    @property
    def key(self) -> str:
        return f"{self.ring.tag}:{format_element(self.p)}"

    def __repr__(self) -> str:
        return f"<PrimeContext {self.key} q={self.q}>"

    def reduce(self, x: RingElement) -> int:
        """Index of the class of x."""
        if x.ring is not self.ring:
            raise ValueError(f"element of {x.ring.tag} reduced in {self.ring.tag}")
        _, r = euclidean_divmod(x, self.p)
        key = (r.a, r.b)
        hit = self._memo.get(key)
        if hit is None:
            hit = next(i for i, rep in enumerate(self.elements) if divides(self.p, r - rep))
            self._memo[key] = hit
        return hit

    def lift(self, i: int) -> RingElement:
        return self.elements[i]

    def elem_str(self, i: int) -> str:
        return format_element(self.elements[i])

    def canonicalize_vector(self, vec) -> tuple[int, ...]:
        """The U-multiple of vec whose first nonzero coordinate is its coset's minimum."""
        for x in vec:
            if x:
                s = self.canon_scale[x]
                if s == 1:
                    return tuple(vec)
                row = self.mul[s]
                return tuple(row[v] for v in vec)
        return tuple(vec)


def _is_q_prime(q: int) -> bool:
    if q < 2:
        return False
    from sympy import isprime

    return bool(isprime(q))


def _canonical_rep(ring: RingId, p: RingElement, r: RingElement) -> RingElement:
    """Minimal-norm member of the class of r, ties to the lexicographically least (a, b).

    Any member of norm <= norm(r) < norm(p) differs from r by m*p with
    norm(m) <= 3, and all such m have |coordinates| <= 2.
    """
    best = None
    b_range = (0,) if ring is INTEGERS else range(-2, 3)
    for ma in range(-2, 3):
        for mb in b_range:
            cand = r + RingElement(ring, ma, mb) * p
            key = (cand.norm(), cand.a, cand.b)
            if best is None or key < best[0]:
                best = (key, cand)
    return best[1]


@lru_cache(maxsize=None)
def build_residue_field(ring: RingId, p: RingElement, q_cap: int = DEFAULT_Q_CAP) -> PrimeContext:
    """Construct the residue field R/(p) for a prime p.

    The classes are found by closing {0, 1, theta} under sums and products,
    reducing through euclidean division and identifying classes by the exact
    test p | (x - y). Contexts are cached, so repeated calls are cheap.
    """
    if p.ring is not ring:
        raise ValueError(f"prime {p} does not live in {ring.tag}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime in {ring.tag}")
    expected_q = abs(p.a) if ring is INTEGERS else norm(p)
    if expected_q > q_cap:
        raise ResourceCapError(
            f"residue field of {format_element(p)} has {expected_q} elements, over the cap {q_cap}",
            projected=expected_q,
            cap=q_cap,
        )

    prov: list[RingElement] = []
    memo: dict[tuple[int, int], int] = {}

    def locate(x: RingElement) -> int:
        _, r = euclidean_divmod(x, p)
        key = (r.a, r.b)
        hit = memo.get(key)
        if hit is not None:
            return hit
        for i, rep in enumerate(prov):
            if divides(p, r - rep):
                memo[key] = i
                return i
        prov.append(r)
        memo[key] = len(prov) - 1
        return len(prov) - 1

    seeds = [zero(ring), one(ring)]
    if ring is not INTEGERS:
        seeds.append(theta(ring))
    for s in seeds:
        locate(s)
    while True:
        size = len(prov)
        snapshot = list(prov)
        for x in snapshot:
            for y in snapshot:
                locate(x + y)
                locate(x * y)
        if len(prov) == size:
            break
    q = len(prov)
    assert q == expected_q, (q, expected_q)

    canon = [_canonical_rep(ring, p, r) for r in prov]
    zero_i = locate(zero(ring))
    one_i = locate(one(ring))
    rest = sorted(
        (i for i in range(q) if i not in (zero_i, one_i)),
        key=lambda i: (canon[i].norm(), canon[i].a, canon[i].b),
    )
    order = [zero_i, one_i] + rest
    final_of_prov = [0] * q
    for fin, prov_i in enumerate(order):
        final_of_prov[prov_i] = fin
    elements = tuple(canon[i] for i in order)

    def fin_locate(x: RingElement) -> int:
        return final_of_prov[locate(x)]

    add = tuple(
        tuple(fin_locate(elements[i] + elements[j]) for j in range(q)) for i in range(q)
    )
    mul = tuple(
        tuple(fin_locate(elements[i] * elements[j]) for j in range(q)) for i in range(q)
    )
    final_memo = {coords: final_of_prov[i] for coords, i in memo.items()}
    return PrimeContext(ring, p, q, elements, add, mul, final_memo)


def unit_image(ctx: PrimeContext) -> frozenset[int]:
    """The subgroup U of F*, the image of the ring's units."""
    return ctx.U


def quotient_structure(ctx: PrimeContext):
    """(U-cosets of F*, U-orbits on F)."""
    return ctx.cosets, ctx.orbits


def is_full_unit_image(ctx: PrimeContext) -> bool:
    return len(ctx.U) == ctx.q - 1


# ---------------------------------------------------------------------------
# Linear algebra over F


def field_rref(ctx: PrimeContext, rows):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    mul, add, neg, inv = ctx.mul, ctx.add, ctx.neg, ctx.inv
    work = [list(r) for r in rows]
    ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(work)) if work[i][c] != 0), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        scale = inv[work[r][c]]
        if scale != 1:
            row_s = mul[scale]
            work[r] = [row_s[x] for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = neg[work[i][c]]
                row_f = mul[f]
                work[i] = [add[x][row_f[y]] for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(w) for w in work[:r]), tuple(pivots)


def field_rank(ctx: PrimeContext, rows) -> int:
    return len(field_rref(ctx, rows)[0])


def field_det(ctx: PrimeContext, rows) -> int:
    """Determinant of a square matrix over F, by elimination."""
    n = len(rows)
    assert all(len(r) == n for r in rows)
    mul, add, neg, inv = ctx.mul, ctx.add, ctx.neg, ctx.inv
    work = [list(r) for r in rows]
    det = 1
    for c in range(n):
        pr = next((i for i in range(c, n) if work[i][c] != 0), None)
        if pr is None:
            return 0
        if pr != c:
            work[c], work[pr] = work[pr], work[c]
            det = neg[det]
        piv = work[c][c]
        det = mul[det][piv]
        ipiv = inv[piv]
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = neg[mul[work[i][c]][ipiv]]
                row_f = mul[f]
                work[i] = [add[x][row_f[y]] for x, y in zip(work[i], work[c])]
    return det


def reduce_vector(ctx: PrimeContext, ech_rows, pivots, vec):
    """Residual of vec after clearing the pivot coordinates of an echelon basis."""
    mul, add, neg = ctx.mul, ctx.add, ctx.neg
    v = list(vec)
    for row, c in zip(ech_rows, pivots):
        x = v[c]
        if x != 0:
            row_f = mul[neg[x]]
            v = [add[a][row_f[b]] for a, b in zip(v, row)]
    return tuple(v)


def extend_echelon(ctx: PrimeContext, ech_rows, pivots, vec):
    """Insert vec into a reduced echelon basis; None if vec lies in the span."""
    res = reduce_vector(ctx, ech_rows, pivots, vec)
    c = next((i for i, x in enumerate(res) if x != 0), None)
    if c is None:
        return None
    scale = ctx.inv[res[c]]
    if scale != 1:
        row_s = ctx.mul[scale]
        res = tuple(row_s[x] for x in res)
    rows = list(ech_rows) + [res]
    pivs = list(pivots) + [c]
    # clear the new pivot column in the old rows and restore pivot order
    mul, add, neg = ctx.mul, ctx.add, ctx.neg
    for i in range(len(rows) - 1):
        x = rows[i][c]
        if x != 0:
            row_f = mul[neg[x]]
            rows[i] = tuple(add[a][row_f[b]] for a, b in zip(rows[i], res))
    order = sorted(range(len(rows)), key=lambda i: pivs[i])
    return tuple(rows[i] for i in order), tuple(pivs[i] for i in order)


# ---------------------------------------------------------------------------
# Lifting SL_n(F) to SL_n(R)


def _transvection_factors(ctx: PrimeContext, M):
    """Factor an SL_n matrix over F into transvections E_ij(a).

    Row operations reduce M to a diagonal matrix of determinant one; the
    diagonal is then peeled into adjacent diag(u, 1/u) blocks, each of which
    expands into four elementary factors.
    """
    mul, add, neg, inv = ctx.mul, ctx.add, ctx.neg, ctx.inv
    n = len(M)
    A = [list(row) for row in M]
    ops: list[tuple[int, int, int]] = []

    def rowop(r: int, src: int, c: int) -> None:
        if c == 0:
            return
        row_c = mul[c]
        A[r] = [add[x][row_c[y]] for x, y in zip(A[r], A[src])]
        ops.append((r, src, c))

    for k in range(n):
        if A[k][k] == 0:
            src = next(i for i in range(k + 1, n) if A[i][k] != 0)
            rowop(k, src, 1)
        ipiv = inv[A[k][k]]
        for i in range(n):
            if i != k and A[i][k] != 0:
                rowop(i, k, neg[mul[A[i][k]][ipiv]])
    diag = [A[k][k] for k in range(n)]

    factors = [(r, src, neg[c]) for r, src, c in ops]
    prefix = 1
    for k in range(n - 1):
        prefix = mul[prefix][diag[k]]
        u = prefix
        if u == 1:
            continue
        iu = inv[u]
        factors.extend(
            [
                (k + 1, k, add[iu][neg[1]]),
                (k, k + 1, 1),
                (k + 1, k, add[u][neg[1]]),
                (k, k + 1, neg[iu]),
            ]
        )
    return [(r, src, c) for r, src, c in factors if c != 0]


def lift_sl_matrix(ctx: PrimeContext, matrix):
    """Lift a matrix in SL_n(F) to SL_n(R), reducing back entrywise.

    The matrix is given as rows of field-element indices. The result is a list
    of rows of ring elements with exact determinant 1.
    """
    n = len(matrix)
    M = [list(row) for row in matrix]
    if any(len(row) != n for row in M):
        raise ValueError("matrix must be square")
    if field_det(ctx, M) != 1:
        raise ValueError("matrix is not in SL_n: determinant differs from 1")

    factors = _transvection_factors(ctx, M)

    # check the factorization over F before lifting
    mul, add = ctx.mul, ctx.add
    P = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j, a in factors:
        row_a = mul[a]
        for r in range(n):
            P[r][j] = add[P[r][j]][row_a[P[r][i]]]
    assert P == M, "internal factorization mismatch"

    ring = ctx.ring
    lifted = [[one(ring) if i == j else zero(ring) for j in range(n)] for i in range(n)]
    for i, j, a in factors:
        la = ctx.elements[a]
        for r in range(n):
            lifted[r][j] = lifted[r][j] + lifted[r][i] * la
    assert _ring_det(ring, lifted) == one(ring)
    assert all(ctx.reduce(lifted[r][c]) == M[r][c] for r in range(n) for c in range(n))
    return lifted


def _ring_det(ring: RingId, rows) -> RingElement:
    from itertools import permutations

    n = len(rows)
    total = zero(ring)
    for perm in permutations(range(n)):
        inversions = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        term = one(ring)
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + (term if inversions % 2 == 0 else -term)
    return total
