"""Verification suites bundling the library checks into reproducible reports.

Five suites: building homology with apartment spans (solomon-tits), vanishing
of low homology for the partial-basis families (connectivity), the residue
classification with its boundary rows and four-loop certificates (conditions),
the recursive rank formula against brute force (ranks), and SL_n lifting
round trips (lifting). Each suite yields a SuiteReport whose canonical JSON
is byte-stable across runs, worker counts, and kernel backends; wall-clock
times live on the items but stay out of the JSON.

A family build whose projected simplex count exceeds MATERIALIZE_LIMIT is not
materialized when n = 3. Instead the 2-skeleton is streamed: vertices and
edges are enumerated exactly, then triangle boundary columns feed the sparse
mod-p reducer until the cycle-space dimension E - V + c is reached. The mod-p
rank is a lower bound for the rational rank, so meeting the target proves the
reduced homology vanishes in degrees 0 and 1; on a shortfall the fallback
prime is tried once before the item reports unknown.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from random import Random

from .cache import Cache, cache_key, stable_json
from .complexes import (
    DEFAULT_SIMPLEX_CAP,
    ResourceCapError,
    apartment_chain,
    build_B,
    build_BA,
    build_BD,
    build_BDA,
    build_oriented_tits,
    build_tits,
    complex_from_text,
    complex_to_text,
    partial_basis_vertices,
    projected_total,
)
from .conditions import (
    CONDITIONS_1_TO_5,
    DEFAULT_EFFORT,
    FAIL,
    FULL_UNIT_IMAGE,
    NEITHER,
    PASS,
    UNDETERMINED,
    UNKNOWN,
    check_conditions,
    classify_pair,
)
from .homology import boundary_squared_is_zero, chain_boundary, reduced_homology
from .kernels import DEFAULT_PRIME, FALLBACK_PRIME, IncrementalRank
from .ranks import brute_force_rank, rank_lower_bound, recursive_rank
from .residue import (
    _ring_det,
    build_residue_field,
    extend_echelon,
    field_det,
    field_rank,
    field_rref,
    is_full_unit_image,
    lift_sl_matrix,
    reduce_vector,
    standard_contexts,
)
from .rings import format_element, one, parse_element, ring_by_name

MATERIALIZE_LIMIT = 250_000

_DEFAULT_QMAX = {
    "solomon-tits": 9,
    "connectivity": 5,
    "conditions": 13,
    "ranks": 13,
    "lifting": 13,
}
SUITES = tuple(_DEFAULT_QMAX)

# expected classification of the tabulated rows; the three rows satisfying
# conditions (1)-(5) are also the four-loop certificate rows
NAMED_CLASSIFICATIONS = (
    ("SqrtMinusTwo", "1+s", FULL_UNIT_IMAGE),
    ("Gaussian", "1+2*i", FULL_UNIT_IMAGE),
    ("Eisenstein", "1+2*w", FULL_UNIT_IMAGE),
    ("Eisenstein", "1+3*w", FULL_UNIT_IMAGE),
    ("Eisenstein", "2+3*w", FULL_UNIT_IMAGE),
    ("Gaussian", "3", CONDITIONS_1_TO_5),
    ("Eisenstein", "1+4*w", CONDITIONS_1_TO_5),
    ("Eisenstein", "3+4*w", CONDITIONS_1_TO_5),
)

# rational primes where the integers cross from passing to failing: the first
# failures must be condition (1) with a unit index other than 2
BOUNDARY_ROWS = ((3, True), (5, True), (7, False), (11, False), (13, False))

# rank oracle rows: brute force stays tractable for these
T3_ORACLE_ROWS = (("Integers", "3"), ("Integers", "5"), ("Gaussian", "3"))

APARTMENT_ROWS = (("Integers", "3", False), ("Gaussian", "3", True))

__all__ = [
    "MATERIALIZE_LIMIT",
    "NAMED_CLASSIFICATIONS",
    "SUITES",
    "SuiteConfig",
    "SuiteItem",
    "SuiteReport",
    "cached_complex",
    "complex_cache_header",
    "run_suite",
    "stream_two_skeleton",
]


@dataclass(frozen=True)
class SuiteItem:
    name: str
    status: str
    detail: dict
    wall_time: float = 0.0


@dataclass(frozen=True)
class SuiteConfig:
    """Knobs for a suite run; q_max of None picks the suite's own default.

    workers, use_numba, and cache_dir only affect speed, never report bytes,
    so they are left out of the JSON config echo. strict only affects the
    exit status.
    """

    q_max: int | None = None
    n_max: int = 3
    m_max: int = 1
    cap: int = DEFAULT_SIMPLEX_CAP
    effort: int = DEFAULT_EFFORT
    seed: int = 20260816
    samples: int = 100
    bases: int = 200
    rings: tuple[str, ...] | None = None
    workers: int = 0
    use_numba: bool | None = None
    cache_dir: str | None = None
    strict: bool = False


@dataclass
class SuiteReport:
    suite: str
    config: dict
    items: list[SuiteItem] = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, UNKNOWN: 0}
        for item in self.items:
            counts[item.status] += 1
        return {
            "pass": counts[PASS],
            "fail": counts[FAIL],
            "unknown": counts[UNKNOWN],
            "total": len(self.items),
        }

    @property
    def wall_time(self) -> float:
        return sum(item.wall_time for item in self.items)

    def to_json(self) -> str:
        return stable_json(
            {
                "suite": self.suite,
                "config": self.config,
                "summary": self.summary,
                "items": [
                    {"name": it.name, "status": it.status, "detail": it.detail}
                    for it in self.items
                ],
            }
        )

    def exit_status(self, strict: bool = False) -> int:
        s = self.summary
        if s["fail"] or (strict and s["unknown"]):
            return 1
        return 0


def _ctx_of(ring: str, p: str):
    rid = ring_by_name(ring)
    return build_residue_field(rid, parse_element(rid, p))


# ---------------------------------------------------------------------------
# Complex caching

_BUILDERS = {"B": build_B, "BD": build_BD, "BA": build_BA, "BDA": build_BDA}


def complex_cache_header(ctx, kind: str, n: int, m: int) -> dict:
    # the cap is absent on purpose: it gates the build but not its content
    return {
        "op": "complex",
        "ring": ctx.ring.tag,
        "p": format_element(ctx.p),
        "kind": kind,
        "n": n,
        "m": m,
    }


def cached_complex(ctx, kind: str, n: int, m: int, cap: int = DEFAULT_SIMPLEX_CAP,
                   cache_dir: str | None = None):
    """Build a partial-basis family complex through the text cache."""
    cache = Cache(cache_dir)
    header = complex_cache_header(ctx, kind, n, m)
    text = cache.get_or_build(
        header, lambda: complex_to_text(_BUILDERS[kind](ctx, n, m, cap))
    )
    return complex_from_text(text)


# ---------------------------------------------------------------------------
# Streamed 2-skeleton certificate

_STREAM_BATCH = 512


def stream_two_skeleton(ctx, n: int, m: int, kind: str, use_numba=None,
                        prime: int | None = None, collect: bool = False):
    """Certify H~_0 = H~_1 = 0 for a family build too large to materialize.

    Only n = 3 is supported: there the size-3 simplices are exactly the
    det-filtered standard triples plus the augmented triples grown from
    standard edges, so the 2-skeleton is enumerable edge by edge. Returns a
    dict with the exact vertex/edge/component counts, the cycle-space target
    E - V + c, and the mod-p rank of the triangle boundary reached before the
    early stop. With collect=True every triangle is enumerated (no early
    stop) and listed under "triangles" for cross-checks against the builder.
    """
    if n != 3:
        raise ValueError("streaming covers n = 3 only; smaller builds materialize")
    if kind not in _BUILDERS:
        raise ValueError(f"unknown family kind {kind!r}")
    q = ctx.q
    N = n + m
    vertices = partial_basis_vertices(ctx, n, m)
    V = len(vertices)
    index = {v: i for i, v in enumerate(vertices)}
    e_rows = [tuple(1 if c == i else 0 for c in range(N)) for i in range(m)]
    base_ech, base_piv = field_rref(ctx, e_rows) if m else ((), ())

    grown = [extend_echelon(ctx, base_ech, base_piv, v) for v in vertices]
    std_adj: list[list[int]] = [[] for _ in range(V)]
    edges: list[tuple[int, int]] = []
    for i in range(V):
        ech_i, piv_i = grown[i]
        for j in range(i + 1, V):
            if any(reduce_vector(ctx, ech_i, piv_i, vertices[j])):
                edges.append((i, j))
                std_adj[i].append(j)
                std_adj[j].append(i)

    add_t, mul_t, neg_t = ctx.add, ctx.mul, ctx.neg
    additive = kind in ("BA", "BDA")
    coeffs = sorted(ctx.U) if kind == "BDA" else list(range(1, q))

    def apex_of(va, vb, u):
        row_u = mul_t[u]
        return index[
            ctx.canonicalize_vector(
                tuple(add_t[x][row_u[y]] for x, y in zip(va, vb))
            )
        ]

    add_edges: set[tuple[int, int]] = set()
    if additive:
        for a in range(V):
            va = vertices[a]
            for er in e_rows:
                for u in coeffs:
                    b = apex_of(va, er, u)
                    add_edges.add((a, b) if a < b else (b, a))
    all_edges = edges + sorted(add_edges)
    edge_id = {e: k for k, e in enumerate(all_edges)}
    assert len(edge_id) == len(all_edges)
    E = len(all_edges)

    parent = list(range(V))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in all_edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    components = sum(1 for i, p_ in enumerate(parent) if i == p_)
    target = E - V + components

    det_unit = kind in ("BD", "BDA")
    U = ctx.U

    def minor_det(vi, vj, vk):
        a0, a1, a2 = vi[m], vi[m + 1], vi[m + 2]
        b0, b1, b2 = vj[m], vj[m + 1], vj[m + 2]
        c0, c1, c2 = vk[m], vk[m + 1], vk[m + 2]
        t0 = add_t[mul_t[b1][c2]][neg_t[mul_t[b2][c1]]]
        t1 = add_t[mul_t[b0][c2]][neg_t[mul_t[b2][c0]]]
        t2 = add_t[mul_t[b0][c1]][neg_t[mul_t[b1][c0]]]
        return add_t[add_t[mul_t[a0][t0]][neg_t[mul_t[a1][t1]]]][mul_t[a2][t2]]

    def run_rank(p_mod):
        rank = IncrementalRank(E, p=p_mod, target=target, use_numba=use_numba)
        processed = 0
        batch: list[tuple[list[int], list[int]]] = []
        triangles: list[tuple[int, int, int]] = [] if collect else None
        seen_extra: set[tuple[int, int, int]] = set()

        def push(i, j, k):
            nonlocal processed
            entries = sorted(
                (edge_id[f], s)
                for f, s in (((i, j), 1), ((i, k), -1), ((j, k), 1))
            )
            batch.append(([r for r, _ in entries], [v for _, v in entries]))
            processed += 1
            if triangles is not None:
                triangles.append((i, j, k))

        def flush():
            rank.add_columns(batch, defer=True)
            batch.clear()

        for i, j in edges:
            if not collect and rank.done:
                break
            if additive:
                vi, vj = vertices[i], vertices[j]
                pools = [(vi, vj), (vj, vi)]
                for va, vb in pools:
                    for u in coeffs:
                        tri = tuple(sorted((i, j, apex_of(va, vb, u))))
                        if tri not in seen_extra:
                            seen_extra.add(tri)
                            push(*tri)
                for va in (vi, vj):
                    for er in e_rows:
                        for u in coeffs:
                            tri = tuple(sorted((i, j, apex_of(va, er, u))))
                            if tri not in seen_extra:
                                seen_extra.add(tri)
                                push(*tri)
            in_j = set(std_adj[j])
            vi, vj = vertices[i], vertices[j]
            for k in std_adj[i]:
                if k > j and k in in_j:
                    det = minor_det(vi, vj, vertices[k])
                    if det and (not det_unit or det in U):
                        push(i, j, k)
            if len(batch) >= _STREAM_BATCH:
                flush()
        flush()
        return rank, processed, triangles

    primes = [prime] if prime is not None else [DEFAULT_PRIME, FALLBACK_PRIME]
    tried = []
    for p_mod in primes:
        rank, processed, triangles = run_rank(p_mod)
        tried.append(p_mod)
        if rank.rank == target:
            break
    out = {
        "vertices": V,
        "edges": E,
        "components": components,
        "target": target,
        "rank": rank.rank,
        "columns": processed,
        "primes": tried,
    }
    if collect:
        out["triangles"] = sorted(triangles)
    return out


# ---------------------------------------------------------------------------
# Item bodies (top level so the process pool can pickle them)


def _item_tits(ring, p, n, oriented, check_value, use_numba):
    ctx = _ctx_of(ring, p)
    sc = build_oriented_tits(ctx, n) if oriented else build_tits(ctx, n)
    rep = reduced_homology(sc, use_numba=use_numba)
    top = n - 2
    detail = {
        "counts": list(rep.counts),
        "betti": list(rep.betti),
        "top_rank": rep.betti[top],
        "q": ctx.q,
    }
    if not boundary_squared_is_zero(sc):
        detail["note"] = "boundary squared is nonzero"
        return FAIL, detail
    detail["boundary_squared"] = True
    if all(rep.betti_exact):
        reduced_chi = sum((-1) ** i * c for i, c in enumerate(rep.counts)) - 1
        detail["euler"] = reduced_chi == sum(
            (-1) ** i * b for i, b in enumerate(rep.betti)
        )
        if not detail["euler"]:
            return FAIL, detail
    for i, b in enumerate(rep.betti):
        if i == top:
            continue
        if b != 0:
            return (FAIL if rep.betti_exact[i] else UNKNOWN), detail
    if check_value:
        expected = ctx.q ** (n * (n - 1) // 2)
        detail["expected_top"] = expected
        if rep.betti[top] != expected:
            return (FAIL if rep.betti_exact[top] else UNKNOWN), detail
        if not rep.betti_exact[top]:
            return UNKNOWN, detail
    return PASS, detail


def _item_apartments(ring, p, n, oriented, bases, seed, use_numba):
    ctx = _ctx_of(ring, p)
    sc = build_oriented_tits(ctx, n) if oriented else build_tits(ctx, n)
    edge_id = {s: i for i, s in enumerate(sc.simplices[1])}
    target = recursive_rank(ctx, n)
    nedges = len(sc.simplices[1])
    cycle_target = nedges - len(sc.vertices) + 1
    rng = Random(f"apartments:{seed}:{ctx.key}:{int(oriented)}")
    rank = IncrementalRank(nedges, target=target, use_numba=use_numba)
    span_cap = bases + 3 * target
    attempts = 0
    cycle_failures = 0
    while attempts < bases or (not rank.done and attempts < span_cap):
        basis = [
            tuple(rng.randrange(ctx.q) for _ in range(n)) for _ in range(n)
        ]
        if field_rank(ctx, basis) != n:
            continue
        attempts += 1
        chain = apartment_chain(ctx, n, basis, sc)
        if chain_boundary(sc, chain):
            cycle_failures += 1
        entries = sorted((edge_id[s], c) for s, c in chain.items())
        rank.add_column([r for r, _ in entries], [c for _, c in entries])
    detail = {
        "bases": attempts,
        "cycle_failures": cycle_failures,
        "rank": rank.rank,
        "target": target,
        "cycle_space": cycle_target,
    }
    if cycle_failures:
        return FAIL, detail
    if rank.rank != target:
        return (FAIL if rank.rank > target else UNKNOWN), detail
    return PASS, detail


def _item_family(ring, p, kind, n, m, cap, effort, cache_dir, use_numba):
    ctx = _ctx_of(ring, p)
    projected = projected_total(ctx, n, m, kind)
    if n == 3 and projected > MATERIALIZE_LIMIT:
        res = stream_two_skeleton(ctx, n, m, kind, use_numba=use_numba)
        detail = {"method": "streamed-2-skeleton", "projected": projected, **res}
        if projected > cap:
            detail["capped"] = True
        if res["components"] != 1:
            return FAIL, detail
        if res["rank"] != res["target"]:
            detail["note"] = "mod-p rank short of the cycle-space target"
            return UNKNOWN, detail
        return PASS, detail

    sc = cached_complex(ctx, kind, n, m, cap, cache_dir)
    rep = reduced_homology(sc, use_numba=use_numba)
    required = list(range(n - 1))
    if kind == "BDA" and m == 0:
        if classify_pair(ctx, effort=effort) in (FULL_UNIT_IMAGE, CONDITIONS_1_TO_5):
            required.append(n - 1)
    detail = {
        "method": "materialized",
        "counts": list(rep.counts),
        "betti": list(rep.betti),
        "required_zero": required,
        "cache_key": cache_key(complex_cache_header(ctx, kind, n, m)),
    }
    if not boundary_squared_is_zero(sc):
        detail["note"] = "boundary squared is nonzero"
        return FAIL, detail
    detail["boundary_squared"] = True
    if all(rep.betti_exact):
        reduced_chi = sum(
            (-1) ** i * c for i, c in enumerate(rep.counts)
        ) - 1
        detail["euler"] = reduced_chi == sum(
            (-1) ** i * b for i, b in enumerate(rep.betti)
        )
        if not detail["euler"]:
            return FAIL, detail
    for i in required:
        if rep.betti[i] != 0:
            return (FAIL if rep.betti_exact[i] else UNKNOWN), detail
    return PASS, detail


def _item_classification(ring, p, expected, effort):
    ctx = _ctx_of(ring, p)
    cls = classify_pair(ctx, effort=effort)
    detail = {
        "classification": cls,
        "expected": expected,
        "q": ctx.q,
        "unit_index": (ctx.q - 1) // len(ctx.U),
    }
    if cls != FULL_UNIT_IMAGE:
        report = check_conditions(ctx, effort=effort)
        detail["conditions"] = [v.status for v in report.verdicts]
    if cls == expected:
        return PASS, detail
    return (UNKNOWN if cls == UNDETERMINED else FAIL), detail


def _item_boundary(p, expect_pass, effort):
    ctx = _ctx_of("Integers", str(p))
    cls = classify_pair(ctx, effort=effort)
    detail = {"p": p, "classification": cls, "q": ctx.q}
    if expect_pass:
        ok = cls in (FULL_UNIT_IMAGE, CONDITIONS_1_TO_5)
        return (PASS if ok else FAIL), detail
    report = check_conditions(ctx, effort=effort, deep=False)
    first = report.condition(1)
    detail["condition_1"] = first.status
    detail["unit_index"] = first.witness
    ok = cls == NEITHER and first.status == FAIL and first.witness != 2
    return (PASS if ok else FAIL), detail


def _item_four_loop(ring, p, effort):
    ctx = _ctx_of(ring, p)
    report = check_conditions(ctx, effort=effort)
    fl = report.four_loop
    pi1 = report.condition(5)
    detail = {
        "cycle_classes": fl.cycle_classes,
        "chorded": fl.chorded,
        "coned": fl.coned,
        "uncovered": [list(c) for c in fl.uncovered],
        "cliques_filled": fl.all_cliques_filled,
        "pi1": pi1.status,
    }
    if not fl.all_cliques_filled:
        return FAIL, detail
    if fl.all_cycles_handled or pi1.status == PASS:
        return PASS, detail
    return (UNKNOWN if pi1.status == UNKNOWN else FAIL), detail


def _item_rank_t2(ring, p, use_numba):
    ctx = _ctx_of(ring, p)
    a = len(ctx.cosets)
    closed_form = a * (ctx.q + 1) - 1
    values = {
        "closed_form": closed_form,
        "cosets": recursive_rank(ctx, 2, "cosets"),
        "orbits": recursive_rank(ctx, 2, "orbits"),
        "brute": brute_force_rank(ctx, 2, use_numba=use_numba),
    }
    ok = len(set(values.values())) == 1
    return (PASS if ok else FAIL), {"q": ctx.q, **values}


def _item_rank_t3(ring, p, use_numba):
    ctx = _ctx_of(ring, p)
    values = {
        "cosets": recursive_rank(ctx, 3, "cosets"),
        "orbits": recursive_rank(ctx, 3, "orbits"),
        "brute": brute_force_rank(ctx, 3, use_numba=use_numba),
    }
    ok = values["brute"] == values["cosets"]
    return (PASS if ok else FAIL), {"q": ctx.q, "variant": "cosets", **values}


def _item_rank_bound(ring, p):
    ctx = _ctx_of(ring, p)
    full = is_full_unit_image(ctx)
    rows = {}
    ok = True
    for n in (2, 3, 4):
        t = recursive_rank(ctx, n)
        lb = rank_lower_bound(ctx, n)
        rows[str(n)] = [t, lb]
        ok = ok and t >= lb and ((t == lb) == full)
    return (PASS if ok else FAIL), {
        "q": ctx.q,
        "full_unit_image": full,
        "rank_vs_bound": rows,
    }


def _item_lift(ring, p, degree, samples, seed):
    ctx = _ctx_of(ring, p)
    rng = Random(f"lift:{seed}:{ctx.key}:{degree}")
    failures = 0
    for _ in range(samples):
        while True:
            M = [
                [rng.randrange(ctx.q) for _ in range(degree)]
                for _ in range(degree)
            ]
            d = field_det(ctx, M)
            if d:
                break
        if d != 1:
            mulrow = ctx.mul[ctx.inv[d]]
            M[0] = [mulrow[x] for x in M[0]]
        lifted = lift_sl_matrix(ctx, M)
        back = [[ctx.reduce(e) for e in row] for row in lifted]
        if back != M or _ring_det(ctx.ring, lifted) != one(ctx.ring):
            failures += 1
    return (PASS if failures == 0 else FAIL), {
        "q": ctx.q,
        "degree": degree,
        "samples": samples,
        "failures": failures,
    }


# ---------------------------------------------------------------------------
# Task construction


def _tasks_solomon_tits(cfg, q_max):
    tasks = []
    ctxs = standard_contexts(q_max, cfg.rings)
    for ctx in ctxs:
        ring, p = ctx.ring.tag, format_element(ctx.p)
        for n in range(2, cfg.n_max + 1):
            for oriented in (False, True):
                kind = "TU" if oriented else "T"
                check_value = ctx.q <= 5 and n <= 3 and (
                    not oriented or is_full_unit_image(ctx)
                )
                tasks.append(
                    (
                        f"{kind}{n}:{ctx.key}",
                        _item_tits,
                        {
                            "ring": ring,
                            "p": p,
                            "n": n,
                            "oriented": oriented,
                            "check_value": check_value,
                            "use_numba": cfg.use_numba,
                        },
                    )
                )
    keys = {ctx.key for ctx in ctxs}
    if cfg.n_max >= 3:
        for ring, p, oriented in APARTMENT_ROWS:
            key = f"{ring}:{p}"
            if key not in keys:
                continue
            kind = "TU" if oriented else "T"
            tasks.append(
                (
                    f"apartments:{kind}3:{key}",
                    _item_apartments,
                    {
                        "ring": ring,
                        "p": p,
                        "n": 3,
                        "oriented": oriented,
                        "bases": cfg.bases,
                        "seed": cfg.seed,
                        "use_numba": cfg.use_numba,
                    },
                )
            )
    return tasks


def _tasks_connectivity(cfg, q_max):
    tasks = []
    for ctx in standard_contexts(q_max, cfg.rings):
        ring, p = ctx.ring.tag, format_element(ctx.p)
        for n in range(2, cfg.n_max + 1):
            for m in range(cfg.m_max + 1):
                for kind in ("B", "BD", "BDA"):
                    tasks.append(
                        (
                            f"{kind}({n},{m}):{ctx.key}",
                            _item_family,
                            {
                                "ring": ring,
                                "p": p,
                                "kind": kind,
                                "n": n,
                                "m": m,
                                "cap": cfg.cap,
                                "effort": cfg.effort,
                                "cache_dir": cfg.cache_dir,
                                "use_numba": cfg.use_numba,
                            },
                        )
                    )
    return tasks


def _tasks_conditions(cfg, q_max):
    wanted = None if cfg.rings is None else {
        ring_by_name(r).tag for r in cfg.rings
    }
    tasks = []
    for ring, p, expected in NAMED_CLASSIFICATIONS:
        if wanted is not None and ring not in wanted:
            continue
        if _ctx_of(ring, p).q > q_max:
            continue
        tasks.append(
            (
                f"classify:{ring}:{p}",
                _item_classification,
                {"ring": ring, "p": p, "expected": expected, "effort": cfg.effort},
            )
        )
    if wanted is None or "Integers" in wanted:
        for p, expect_pass in BOUNDARY_ROWS:
            if p > q_max:
                continue
            tasks.append(
                (
                    f"boundary:Integers:{p}",
                    _item_boundary,
                    {"p": p, "expect_pass": expect_pass, "effort": cfg.effort},
                )
            )
    for ring, p, expected in NAMED_CLASSIFICATIONS:
        if expected != CONDITIONS_1_TO_5:
            continue
        if wanted is not None and ring not in wanted:
            continue
        if _ctx_of(ring, p).q > q_max:
            continue
        tasks.append(
            (
                f"four-loop:{ring}:{p}",
                _item_four_loop,
                {"ring": ring, "p": p, "effort": cfg.effort},
            )
        )
    return tasks


def _tasks_ranks(cfg, q_max):
    tasks = []
    ctxs = standard_contexts(q_max, cfg.rings)
    for ctx in ctxs:
        ring, p = ctx.ring.tag, format_element(ctx.p)
        tasks.append(
            (
                f"t2:{ctx.key}",
                _item_rank_t2,
                {"ring": ring, "p": p, "use_numba": cfg.use_numba},
            )
        )
    keys = {ctx.key for ctx in ctxs}
    for ring, p in T3_ORACLE_ROWS:
        key = f"{ring}:{p}"
        if key not in keys:
            continue
        tasks.append(
            (
                f"t3:{key}",
                _item_rank_t3,
                {"ring": ring, "p": p, "use_numba": cfg.use_numba},
            )
        )
    for ctx in ctxs:
        tasks.append(
            (
                f"bound:{ctx.key}",
                _item_rank_bound,
                {"ring": ctx.ring.tag, "p": format_element(ctx.p)},
            )
        )
    return tasks


def _tasks_lifting(cfg, q_max):
    tasks = []
    for ctx in standard_contexts(q_max, cfg.rings):
        for degree in (2, 3):
            tasks.append(
                (
                    f"lift-sl{degree}:{ctx.key}",
                    _item_lift,
                    {
                        "ring": ctx.ring.tag,
                        "p": format_element(ctx.p),
                        "degree": degree,
                        "samples": cfg.samples,
                        "seed": cfg.seed,
                    },
                )
            )
    return tasks


_TASK_BUILDERS = {
    "solomon-tits": _tasks_solomon_tits,
    "connectivity": _tasks_connectivity,
    "conditions": _tasks_conditions,
    "ranks": _tasks_ranks,
    "lifting": _tasks_lifting,
}


# ---------------------------------------------------------------------------
# Runner


def _run_item(task):
    name, func, kwargs = task
    t0 = time.perf_counter()
    try:
        status, detail = func(**kwargs)
    except ResourceCapError as exc:
        status, detail = UNKNOWN, {"note": str(exc), "capped": True}
    return SuiteItem(name, status, detail, time.perf_counter() - t0)


def run_suite(suite: str, config: SuiteConfig | None = None) -> SuiteReport:
    if suite not in _TASK_BUILDERS:
        known = ", ".join(SUITES)
        raise ValueError(f"unknown suite {suite!r}; expected one of {known}")
    cfg = config or SuiteConfig()
    q_max = cfg.q_max if cfg.q_max is not None else _DEFAULT_QMAX[suite]
    tasks = _TASK_BUILDERS[suite](cfg, q_max)
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    if workers <= 1 or len(tasks) <= 1:
        items = [_run_item(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            items = list(pool.map(_run_item, tasks, chunksize=1))
    echo = {
        "q_max": q_max,
        "n_max": cfg.n_max,
        "m_max": cfg.m_max,
        "cap": cfg.cap,
        "effort": cfg.effort,
        "seed": cfg.seed,
        "samples": cfg.samples,
        "bases": cfg.bases,
        "rings": None if cfg.rings is None else list(cfg.rings),
    }
    return SuiteReport(suite, echo, items)
