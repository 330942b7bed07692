"""Simplicial complexes of partial bases and buildings over a residue field.

Vertices are U-vector classes (or subspaces with a U-orientation class for the
oriented buildings); a class is stored as its canonical member, the U-multiple
whose first nonzero coordinate is the smallest index in its coset. Vertex
payloads are plain strings so complexes serialize to a line-oriented text
format; builders additionally attach structured data (field context, vectors,
subspace tables) for in-process use. Builders are deterministic: vertices and
simplices always come out sorted.
"""

from __future__ import annotations

import math
from itertools import combinations, permutations, product

from .errors import ResourceCapError
from .residue import (
    PrimeContext,
    build_residue_field,
    extend_echelon,
    field_det,
    field_rank,
    field_rref,
    reduce_vector,
)
from .rings import format_element, parse_element, ring_by_name

DEFAULT_SIMPLEX_CAP = 5_000_000

LABEL_STANDARD = "standard"
LABEL_INTERNAL = "internally-additive"
LABEL_EXTERNAL = "externally-additive"

__all__ = [
    "DEFAULT_SIMPLEX_CAP",
    "SimplicialComplex",
    "gaussian_binomial",
    "partial_basis_vertices",
    "projected_total",
    "build_B",
    "build_BD",
    "build_BA",
    "build_BDA",
    "build_primed",
    "enumerate_subspaces",
    "build_tits",
    "build_oriented_tits",
    "subdivision_vertex",
    "apartment_chain",
    "complex_to_text",
    "complex_from_text",
]


class SimplicialComplex:
    """A finite downward-closed complex over an indexed vertex table.

    simplices[d] is the sorted list of d-simplices, each a strictly increasing
    tuple of vertex indices; simplices[0] lists every vertex. labels maps a
    simplex tuple to its class when the builder distinguishes one (absence
    means standard).
    """

    def __init__(self, vertices, simplices, labels=None, meta=None):
        self.vertices = list(vertices)
        self.simplices = [sorted(level) for level in simplices]
        self.labels = dict(labels or {})
        self.meta = dict(meta or {})
        # structured companions, populated by builders, absent after reload
        self.ctx: PrimeContext | None = None
        self.vectors = None
        self.subspaces = None
        self.oriented_vertices = None
        self.vertex_index = None
        self._sets = [set(level) for level in self.simplices]

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    def n_simplices(self) -> int:
        return sum(len(level) for level in self.simplices)

    def has(self, simplex) -> bool:
        s = tuple(simplex)
        d = len(s) - 1
        return 0 <= d < len(self._sets) and s in self._sets[d]

    def label_of(self, simplex) -> str:
        return self.labels.get(tuple(simplex), LABEL_STANDARD)

    def verify_closure(self) -> None:
        """Check that every face of every simplex is present; raises on failure."""
        assert self.simplices[0] == [(i,) for i in range(len(self.vertices))]
        for d in range(1, len(self.simplices)):
            lower = self._sets[d - 1]
            for s in self.simplices[d]:
                assert list(s) == sorted(set(s)), f"degenerate simplex {s}"
                for j in range(len(s)):
                    face = s[:j] + s[j + 1 :]
                    assert face in lower, f"missing face {face} of {s}"

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(level) for d, level in enumerate(self.simplices))

    def __repr__(self) -> str:
        kind = self.meta.get("type", "complex")
        return f"<SimplicialComplex {kind} counts={self.counts}>"


def gaussian_binomial(q: int, n: int, k: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


# ---------------------------------------------------------------------------
# Partial-basis complexes B, BD, BA, BDA


def _exact_div(a: int, b: int) -> int:
    assert a % b == 0, (a, b)
    return a // b


def _standard_counts(ctx: PrimeContext, n: int, m: int, det_unit: bool) -> list[int]:
    """Exact simplex counts of B (or BD when det_unit) by dimension."""
    q, ku = ctx.q, len(ctx.U)
    N = n + m
    counts = []
    ordered = 1
    for k in range(n):
        ordered *= q**N - q ** (m + k)
        counts.append(_exact_div(ordered, ku ** (k + 1) * math.factorial(k + 1)))
    if det_unit and n >= 1:
        counts[n - 1] = _exact_div(counts[n - 1] * ku, q - 1)
    return counts


def projected_total(ctx: PrimeContext, n: int, m: int, kind: str) -> int:
    """Upper estimate of the simplex count of a family build (exact for B/BD)."""
    det_unit = kind in ("BD", "BDA")
    base = _standard_counts(ctx, n, m, det_unit)
    total = sum(base)
    if kind in ("BA", "BDA"):
        coeffs = len(ctx.U) if kind == "BDA" else ctx.q - 1
        for k in range(n):
            total += base[k] * (k + 1) * (k + m) * coeffs
    return total


def partial_basis_vertices(ctx: PrimeContext, n: int, m: int) -> list[tuple[int, ...]]:
    """Sorted canonical U-vector classes v with {e_1..e_m, v} independent."""
    q = ctx.q
    N = n + m
    if q**N > 2_000_000:
        raise ResourceCapError(f"vertex enumeration over {q}^{N} vectors is too large")
    seen = set()
    for coords in product(range(q), repeat=N):
        if not any(coords[m:]):
            continue
        seen.add(ctx.canonicalize_vector(coords))
    return sorted(seen)


def _basis_rows(m: int, N: int) -> list[tuple[int, ...]]:
    return [tuple(1 if c == i else 0 for c in range(N)) for i in range(m)]


def _check_family_params(n: int, m: int) -> None:
    if n < 1 or m < 0 or n + m < 2:
        raise ValueError(f"need n >= 1, m >= 0, n + m >= 2; got n={n}, m={m}")


def _build_family(ctx: PrimeContext, n: int, m: int, kind: str, cap: int) -> SimplicialComplex:
    _check_family_params(n, m)
    projected = projected_total(ctx, n, m, kind)
    if projected > cap:
        raise ResourceCapError(
            f"{kind} build for {ctx.key}, n={n}, m={m} projects {projected} simplices (cap {cap})",
            projected=projected,
            cap=cap,
        )
    N = n + m
    vectors = partial_basis_vertices(ctx, n, m)
    index = {v: i for i, v in enumerate(vectors)}
    base_ech, base_piv = field_rref(ctx, _basis_rows(m, N)) if m else ((), ())

    det_unit = kind in ("BD", "BDA")
    levels: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    levels[0] = [(i,) for i in range(len(vectors))]

    def extend(prefix: tuple[int, ...], ech, piv, start: int) -> None:
        size = len(prefix) + 1
        for idx in range(start, len(vectors)):
            grown = extend_echelon(ctx, ech, piv, vectors[idx])
            if grown is None:
                continue
            simplex = prefix + (idx,)
            if size == n and det_unit:
                minor = [vectors[i][m:] for i in simplex]
                if field_det(ctx, minor) not in ctx.U:
                    continue
            if size > 1:
                levels[size - 1].append(simplex)
            if size < n:
                extend(simplex, grown[0], grown[1], idx + 1)

    extend((), base_ech, base_piv, 0)

    labels: dict[tuple[int, ...], str] = {}
    if kind in ("BA", "BDA"):
        coeffs = sorted(ctx.U) if kind == "BDA" else list(range(1, ctx.q))
        add_table, mul_table = ctx.add, ctx.mul
        e_rows = _basis_rows(m, N)
        extra: list[set[tuple[int, ...]]] = [set() for _ in range(n + 1)]

        def apex_of(va, vb, u):
            row_u = mul_table[u]
            vec = tuple(add_table[x][row_u[y]] for x, y in zip(va, vb))
            return ctx.canonicalize_vector(vec)

        def add_augmented(simplex, tag):
            members = [vectors[i] for i in simplex]
            for va in members:
                pool = [vb for vb in members if vb != va] if tag == LABEL_INTERNAL else e_rows
                for vb in pool:
                    for u in coeffs:
                        apex = apex_of(va, vb, u)
                        apex_idx = index[apex]
                        assert apex_idx not in simplex
                        aug = tuple(sorted(simplex + (apex_idx,)))
                        extra[len(aug) - 1].add(aug)
                        labels.setdefault(aug, tag)

        # internal before external so the internal label wins when both apply
        for tag in (LABEL_INTERNAL, LABEL_EXTERNAL):
            for d in range(n):
                for simplex in levels[d]:
                    add_augmented(simplex, tag)

        levels = levels + [[]]
        for d in range(1, n + 1):
            merged = set(levels[d])
            merged.update(extra[d])
            levels[d] = sorted(merged)
        if not levels[n]:
            levels = levels[:n]

    total = sum(len(level) for level in levels)
    if total > cap:
        raise ResourceCapError(
            f"{kind} build for {ctx.key} produced {total} simplices (cap {cap})",
            projected=total,
            cap=cap,
        )

    meta = {
        "type": kind,
        "ring": ctx.ring.tag,
        "p": format_element(ctx.p),
        "q": ctx.q,
        "n": n,
        "m": m,
    }
    sc = SimplicialComplex(
        [",".join(map(str, v)) for v in vectors], levels, labels, meta
    )
    sc.ctx = ctx
    sc.vectors = vectors
    sc.vertex_index = index
    return sc


def build_B(ctx: PrimeContext, n: int, m: int = 0, cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Complex of partial bases of F^{n+m} extending the first m unit vectors."""
    return _build_family(ctx, n, m, "B", cap)


def build_BD(ctx: PrimeContext, n: int, m: int = 0, cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Like build_B, but full-size simplices must have determinant in U."""
    return _build_family(ctx, n, m, "BD", cap)


def build_BA(ctx: PrimeContext, n: int, m: int = 0, cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """build_B plus augmented simplices with apex [v_a + c*v_b], c over all of F*."""
    return _build_family(ctx, n, m, "BA", cap)


def build_BDA(ctx: PrimeContext, n: int, m: int = 0, cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """build_BD plus augmented simplices with apex [v_a + u*v_b], u over U.

    The second member v_b of the core pair is either another member of the
    simplex (internally additive) or one of e_1..e_m (externally additive);
    a simplex reachable both ways is labeled internal.
    """
    return _build_family(ctx, n, m, "BDA", cap)


def build_primed(sc: SimplicialComplex) -> SimplicialComplex:
    """Subcomplex of simplices whose vertex vectors span a proper subspace of F^n.

    Defined for BD and BDA complexes with m = 0.
    """
    if sc.ctx is None or sc.vectors is None:
        raise ValueError("primed subcomplex needs a freshly built complex with vectors")
    meta = sc.meta
    if meta.get("m") != 0 or meta.get("type") not in ("BD", "BDA"):
        raise ValueError("primed subcomplex is defined for BD/BDA complexes with m = 0")
    ctx, n = sc.ctx, meta["n"]
    levels = []
    labels = {}
    for d, level in enumerate(sc.simplices):
        kept = []
        for s in level:
            if d + 1 >= n:
                rows = [sc.vectors[i] for i in s]
                if field_rank(ctx, rows) >= n:
                    continue
            kept.append(s)
            if s in sc.labels:
                labels[s] = sc.labels[s]
        levels.append(kept)
    while len(levels) > 1 and not levels[-1]:
        levels.pop()
    out = SimplicialComplex(sc.vertices, levels, labels, dict(meta, type=meta["type"] + "-primed"))
    out.ctx = ctx
    out.vectors = sc.vectors
    out.vertex_index = sc.vertex_index
    return out


# ---------------------------------------------------------------------------
# Tits buildings


def enumerate_subspaces(ctx: PrimeContext, n: int, k: int) -> list[tuple[tuple[int, ...], ...]]:
    """All k-dimensional subspaces of F^n as canonical reduced echelon row tuples."""
    if not 0 < k < n + 1:
        raise ValueError(f"need 1 <= k <= n, got k={k}")
    q = ctx.q
    out = []
    for pivots in combinations(range(n), k):
        free = [
            (i, c)
            for i in range(k)
            for c in range(pivots[i] + 1, n)
            if c not in pivots
        ]
        for assignment in product(range(q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), val in zip(free, assignment):
                rows[i][c] = val
            out.append(tuple(tuple(r) for r in rows))
    out.sort()
    assert len(out) == gaussian_binomial(q, n, k)
    return out


def _subspace_pivots(rows) -> tuple[int, ...]:
    return tuple(next(c for c, x in enumerate(r) if x) for r in rows)


def _contains(ctx: PrimeContext, big_rows, small_rows) -> bool:
    pivots = _subspace_pivots(big_rows)
    return all(
        not any(reduce_vector(ctx, big_rows, pivots, v)) for v in small_rows
    )


def _tits_data(ctx: PrimeContext, n: int):
    subspaces = []
    for d in range(1, n):
        for rows in enumerate_subspaces(ctx, n, d):
            subspaces.append((d, rows))
    up: list[list[int]] = [[] for _ in subspaces]
    for i, (d1, r1) in enumerate(subspaces):
        for j in range(i + 1, len(subspaces)):
            d2, r2 = subspaces[j]
            if d2 > d1 and _contains(ctx, r2, r1):
                up[i].append(j)
    chains: list[list[tuple[int, ...]]] = [[(i,) for i in range(len(subspaces))]]
    frontier = chains[0]
    while frontier:
        grown = []
        for chain in frontier:
            for j in up[chain[-1]]:
                grown.append(chain + (j,))
        if grown:
            chains.append(sorted(grown))
        frontier = grown
    return subspaces, chains


def _sub_payload(d: int, rows) -> str:
    return f"{d}:" + "|".join(",".join(map(str, r)) for r in rows)


def build_tits(ctx: PrimeContext, n: int, cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """Order complex of proper nonzero subspaces of F^n (flags of subspaces)."""
    if n < 2:
        raise ValueError("the building needs n >= 2")
    subspaces, chains = _tits_data(ctx, n)
    total = sum(len(level) for level in chains)
    if total > cap:
        raise ResourceCapError("building too large", projected=total, cap=cap)
    meta = {
        "type": "T",
        "ring": ctx.ring.tag,
        "p": format_element(ctx.p),
        "q": ctx.q,
        "n": n,
        "m": 0,
    }
    sc = SimplicialComplex([_sub_payload(d, r) for d, r in subspaces], chains, None, meta)
    sc.ctx = ctx
    sc.subspaces = subspaces
    sc.vertex_index = {key: i for i, key in enumerate(subspaces)}
    return sc


def build_oriented_tits(ctx: PrimeContext, n: int, cap: int = DEFAULT_SIMPLEX_CAP) -> SimplicialComplex:
    """U-oriented building: vertices are (subspace, orientation class in F*/U).

    Simplices are flags of the underlying subspaces with arbitrary orientation
    classes; two orientations of the same subspace are never adjacent. When
    U = F* this coincides with build_tits up to vertex payload names.
    """
    if n < 2:
        raise ValueError("the building needs n >= 2")
    subspaces, chains = _tits_data(ctx, n)
    a = len(ctx.cosets)
    total = sum(len(level) * a ** (level_dim + 1) for level_dim, level in enumerate(chains))
    if total > cap:
        raise ResourceCapError("building too large", projected=total, cap=cap)
    oriented = [(i, c) for i in range(len(subspaces)) for c in range(a)]
    vertex_of = {pair: idx for idx, pair in enumerate(oriented)}
    levels: list[list[tuple[int, ...]]] = []
    for d, level in enumerate(chains):
        out = []
        for chain in level:
            for combo in product(range(a), repeat=d + 1):
                out.append(tuple(vertex_of[(i, c)] for i, c in zip(chain, combo)))
        levels.append(sorted(out))
    meta = {
        "type": "TU",
        "ring": ctx.ring.tag,
        "p": format_element(ctx.p),
        "q": ctx.q,
        "n": n,
        "m": 0,
    }
    payloads = [
        _sub_payload(*subspaces[i]) + f"@{c}" for i, c in oriented
    ]
    sc = SimplicialComplex(payloads, levels, None, meta)
    sc.ctx = ctx
    sc.subspaces = subspaces
    sc.oriented_vertices = oriented
    sc.vertex_index = {
        (subspaces[i][0], subspaces[i][1], c): idx for idx, (i, c) in enumerate(oriented)
    }
    return sc


# ---------------------------------------------------------------------------
# Subdivision vertices and apartment chains


def subdivision_vertex(ctx: PrimeContext, m: int, vectors) -> tuple[int, ...]:
    """Barycentric replacement vertex [(1/d)(v_1 + ... + v_n)] for a non-unimodular basis.

    vectors are the non-basis members of a full basis {e_1..e_m, v_1..v_n} of
    F^{m+n}; d is its determinant. Rejects d in U (nothing to subdivide) and
    singular input. Replacing any one v_i by the result makes the determinant
    land in U (it becomes 1).
    """
    vectors = [tuple(v) for v in vectors]
    n = len(vectors)
    N = n + m
    if any(len(v) != N for v in vectors):
        raise ValueError("vector length must be n + m")
    d = field_det(ctx, [v[m:] for v in vectors])
    if d == 0:
        raise ValueError("vectors do not complete a basis")
    if d in ctx.U:
        raise ValueError("determinant already lies in U; the simplex needs no subdivision")
    add, mul = ctx.add, ctx.mul
    total = vectors[0]
    for v in vectors[1:]:
        total = tuple(add[x][y] for x, y in zip(total, v))
    scale = mul[ctx.inv[d]]
    return ctx.canonicalize_vector(tuple(scale[x] for x in total))


def apartment_chain(ctx: PrimeContext, n: int, basis, target: SimplicialComplex):
    """Signed sum of the n! flags spanned by a basis, as a top-dimensional chain.

    The chain assigns sign(sigma) to the flag <v_sigma(1)> < <v_sigma(1),
    v_sigma(2)> < ...; in an oriented building each flag member carries the
    U-class of the determinant expressing the chosen vectors in the subspace's
    echelon basis. The result is a cycle because -1 lies in U.
    """
    basis = [tuple(v) for v in basis]
    if len(basis) != n or any(len(v) != n for v in basis):
        raise ValueError("basis must consist of n vectors of length n")
    if field_rank(ctx, basis) != n:
        raise ValueError("vectors are linearly dependent")
    oriented = target.meta.get("type") == "TU"
    if target.meta.get("type") not in ("T", "TU") or target.meta.get("n") != n:
        raise ValueError("target must be a building on the same n")
    coeffs: dict[tuple[int, ...], int] = {}
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        flag = []
        for k in range(1, n):
            chosen = [basis[perm[i]] for i in range(k)]
            rows, _ = field_rref(ctx, chosen)
            if oriented:
                pivots = _subspace_pivots(rows)
                det = field_det(ctx, [[v[c] for c in pivots] for v in chosen])
                key = (k, rows, ctx.coset_index[det])
            else:
                key = (k, rows)
            flag.append(target.vertex_index[key])
        simplex = tuple(flag)
        assert list(simplex) == sorted(simplex)
        coeffs[simplex] = coeffs.get(simplex, 0) + sign
    return {s: c for s, c in coeffs.items() if c}


# ---------------------------------------------------------------------------
# Serialization

_FORMAT_LINE = "buildings-lab-complex 1"


def complex_to_text(sc: SimplicialComplex) -> str:
    meta = sc.meta
    lines = [
        _FORMAT_LINE,
        f"ring {meta['ring']}",
        f"p {meta['p']}",
        f"type {meta['type']}",
        f"n {meta['n']}",
        f"m {meta['m']}",
        f"q {meta['q']}",
        "counts " + " ".join(map(str, sc.counts)),
    ]
    for payload in sc.vertices:
        lines.append(f"v {payload}")
    for d in range(1, len(sc.simplices)):
        for s in sc.simplices[d]:
            label = sc.labels.get(s)
            body = f"{d} " + " ".join(map(str, s))
            lines.append(f"l {body} {label}" if label else f"s {body}")
    return "\n".join(lines) + "\n"


def complex_from_text(text: str) -> SimplicialComplex:
    lines = text.splitlines()
    if not lines or lines[0] != _FORMAT_LINE:
        raise ValueError("not a serialized complex")
    header: dict[str, str] = {}
    i = 1
    while i < len(lines) and not lines[i].startswith(("v ", "s ", "l ")):
        key, _, value = lines[i].partition(" ")
        header[key] = value
        i += 1
    meta = {
        "ring": header["ring"],
        "p": header["p"],
        "type": header["type"],
        "n": int(header["n"]),
        "m": int(header["m"]),
        "q": int(header["q"]),
    }
    counts = [int(x) for x in header["counts"].split()]
    vertices: list[str] = []
    levels: list[list[tuple[int, ...]]] = [[] for _ in counts]
    labels: dict[tuple[int, ...], str] = {}
    for line in lines[i:]:
        if not line:
            continue
        tag, _, rest = line.partition(" ")
        if tag == "v":
            vertices.append(rest)
        elif tag == "s":
            parts = rest.split()
            levels[int(parts[0])].append(tuple(int(x) for x in parts[1:]))
        elif tag == "l":
            parts = rest.split()
            simplex = tuple(int(x) for x in parts[1:-1])
            levels[int(parts[0])].append(simplex)
            labels[simplex] = parts[-1]
        else:
            raise ValueError(f"unrecognized line {line!r}")
    levels[0] = [(i,) for i in range(len(vertices))]
    sc = SimplicialComplex(vertices, levels, labels, meta)
    if sc.counts != tuple(counts):
        raise ValueError("count header does not match the simplex lines")
    ring = ring_by_name(meta["ring"])
    sc.ctx = build_residue_field(ring, parse_element(ring, meta["p"]))
    if meta["type"] in ("B", "BD", "BA", "BDA"):
        sc.vectors = [tuple(int(x) for x in payload.split(",")) for payload in vertices]
        sc.vertex_index = {v: i for i, v in enumerate(sc.vectors)}
    return sc
