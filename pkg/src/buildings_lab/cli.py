"""Command line surface: inspection, builds, verdicts, and the verify suites.

Every command prints canonical JSON (sorted keys, compact separators) that
validates against the shipped schemas; scan, ranks, and verify can print CSV
derived from the same rows instead. Output is deterministic given the inputs
and cache state, so re-running a recorded manifest reproduces byte-identical
JSON. Wall-clock times never enter the JSON; they live in the optional
manifest file next to the cache keys the run touched.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import re
import sys
import time
from pathlib import Path

from . import __version__
from .cache import Cache, cache_key, stable_json
from .complexes import (
    DEFAULT_SIMPLEX_CAP,
    ResourceCapError,
    build_B,
    build_BA,
    build_BD,
    build_BDA,
    build_oriented_tits,
    build_tits,
    complex_from_text,
    complex_to_text,
)
from .conditions import (
    DEFAULT_EFFORT,
    UNDETERMINED,
    check_conditions,
    classify_pair,
)
from .homology import reduced_homology
from .presentations import (
    abelianization_invariants,
    fundamental_group,
    is_trivial_group,
    tietze_simplify,
)
from .ranks import cross_validate, nu_degree
from .residue import (
    STANDARD_PRIMES,
    _ring_det,
    build_residue_field,
    lift_sl_matrix,
)
from .rings import (
    RingElement,
    associates,
    format_element,
    is_prime,
    minimal_norm_primes,
    norm,
    one,
    parse_element,
    ring_by_name,
    units,
)
from .schemas import validate_output
from .suites import SUITES, SuiteConfig, complex_cache_header, run_suite

SCAN_NORM_CAP = 256

_KEY_RE = re.compile(r"[0-9a-f]{64}")
_FAMILY_BUILDERS = {"B": build_B, "BD": build_BD, "BA": build_BA, "BDA": build_BDA}
COMPLEX_KINDS = ("B", "BD", "BA", "BDA", "T", "TU")


def _ctx(ring: str, p: str):
    rid = ring_by_name(ring)
    return build_residue_field(rid, parse_element(rid, p))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, RingElement):
        return format_element(x)
    return x


def _emit_json(kind: str, obj) -> str:
    validate_output(kind, obj)
    text = stable_json(obj) + "\n"
    sys.stdout.write(text)
    return text


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _emit_csv(rows, fieldnames) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    writer.writerows([{k: _csv_cell(v) for k, v in row.items()} for row in rows])
    text = buf.getvalue()
    sys.stdout.write(text)
    return text


def _build_cached(ctx, kind: str, n: int, m: int, cap: int, cache: Cache):
    if kind == "T":
        build = lambda: build_tits(ctx, n, cap)
        m = 0
    elif kind == "TU":
        build = lambda: build_oriented_tits(ctx, n, cap)
        m = 0
    elif kind in _FAMILY_BUILDERS:
        builder = _FAMILY_BUILDERS[kind]
        build = lambda: builder(ctx, n, m, cap)
    else:
        raise ValueError(f"unknown complex kind {kind!r}; expected one of {', '.join(COMPLEX_KINDS)}")
    header = complex_cache_header(ctx, kind, n, m)
    text = cache.get_or_build(header, lambda: complex_to_text(build()))
    return complex_from_text(text), cache_key(header)


def _load_complex(ref: str, cache_dir, cap: int):
    """A complex by cache key or by <ring>:<p>:<kind>:<n>[:<m>] spec."""
    cache = Cache(cache_dir)
    if _KEY_RE.fullmatch(ref):
        payload = cache.get_by_key(ref)
        if payload is None:
            raise ValueError(f"no cached complex under key {ref}")
        return complex_from_text(payload), ref
    parts = ref.split(":")
    if len(parts) not in (4, 5):
        raise ValueError(
            "complex reference must be a 64-hex cache key or <ring>:<p>:<kind>:<n>[:<m>]"
        )
    ctx = _ctx(parts[0], parts[1])
    kind, n = parts[2], int(parts[3])
    m = int(parts[4]) if len(parts) == 5 else 0
    return _build_cached(ctx, kind, n, m, cap, cache)


# ---------------------------------------------------------------------------
# Command handlers: each returns (exit_code, output_text, cache_keys)


def _cmd_ring_info(args):
    rid = ring_by_name(args.ring)
    obj = {
        "ring": rid.tag,
        "symbol": rid.symbol,
        "theta_square": list(rid.theta_square),
        "units": [format_element(u) for u in units(rid)],
        "minimal_norm_primes": [format_element(p) for p in minimal_norm_primes(rid)],
        "standard_primes": list(STANDARD_PRIMES[rid.tag]),
    }
    return 0, _emit_json("ring-info", obj), []


def _cmd_field(args):
    ctx = _ctx(args.ring, args.p)
    obj = {
        "ring": ctx.ring.tag,
        "p": format_element(ctx.p),
        "key": ctx.key,
        "q": ctx.q,
        "elements": [ctx.elem_str(i) for i in range(ctx.q)],
        "U": sorted(ctx.U),
        "cosets": [list(c) for c in ctx.cosets],
        "orbits": [list(o) for o in ctx.orbits],
    }
    return 0, _emit_json("field", obj), []


def _cmd_complex(args):
    ctx = _ctx(args.ring, args.p)
    cache = Cache(args.cache_dir)
    sc, ck = _build_cached(ctx, args.kind, args.n, args.m, args.cap, cache)
    obj = {
        "key": ctx.key,
        "kind": args.kind,
        "n": args.n,
        "m": sc.meta.get("m", 0),
        "counts": list(sc.counts),
        "euler_characteristic": sc.euler_characteristic(),
        "cache_key": ck,
    }
    return 0, _emit_json("complex", obj), [ck]


def _cmd_homology(args):
    sc, ck = _load_complex(args.complex, args.cache_dir, args.cap)
    rep = reduced_homology(sc, torsion=args.torsion)
    obj = {
        "complex": args.complex,
        "counts": list(rep.counts),
        "components": rep.components,
        "ranks": list(rep.ranks),
        "rank_exact": [bool(x) for x in rep.rank_exact],
        "betti": list(rep.betti),
        "betti_exact": [bool(x) for x in rep.betti_exact],
        "methods": {str(k): v for k, v in rep.methods.items()},
        "primes": list(rep.primes),
        "torsion": None if rep.torsion is None else [list(t) for t in rep.torsion],
    }
    return 0, _emit_json("homology", obj), [ck]


def _cmd_pi1(args):
    sc, ck = _load_complex(args.complex, args.cache_dir, args.cap)
    pres = tietze_simplify(fundamental_group(sc))
    verdict = is_trivial_group(pres, effort=args.effort)
    free, torsion = abelianization_invariants(pres)
    obj = {
        "complex": args.complex,
        "verdict": verdict,
        "generators": pres.ngens,
        "relators": [list(r) for r in pres.relators],
        "abelianization": {"free": free, "torsion": list(torsion)},
    }
    text = _emit_json("pi1", obj)
    code = 1 if args.strict and verdict == "unknown" else 0
    return code, text, [ck]


def _four_loop_obj(fl):
    if fl is None:
        return None
    return {
        "sum_of_two_units": fl.sum_of_two_units,
        "step_stays_outside": fl.step_stays_outside,
        "units_with_unit_predecessor": list(fl.units_with_unit_predecessor),
        "unfilled_cliques": [list(c) for c in fl.unfilled_cliques],
        "cycle_classes": fl.cycle_classes,
        "chorded": fl.chorded,
        "coned": fl.coned,
        "uncovered": [list(c) for c in fl.uncovered],
        "all_cliques_filled": fl.all_cliques_filled,
        "all_cycles_handled": fl.all_cycles_handled,
    }


def _cmd_conditions(args):
    ctx = _ctx(args.ring, args.p)
    report = check_conditions(ctx, effort=args.effort)
    cls = classify_pair(ctx, effort=args.effort)
    obj = {
        "ring": ctx.ring.tag,
        "p": format_element(ctx.p),
        "key": ctx.key,
        "q": ctx.q,
        "unit_index": report.unit_index,
        "classification": cls,
        "conditions": [
            {
                "index": i + 1,
                "status": v.status,
                "witness": _jsonable(v.witness),
                "note": v.note,
            }
            for i, v in enumerate(report.verdicts)
        ],
        "four_loop": _four_loop_obj(report.four_loop),
    }
    text = _emit_json("conditions", obj)
    code = 1 if args.strict and (report.unknown or cls == UNDETERMINED) else 0
    return code, text, []


def _ideal_norm(x: RingElement) -> int:
    """Residue count of R/(x): |a| over the integers, the ring norm otherwise."""
    if x.ring.theta_square == (0, 0):
        return abs(x.a)
    return norm(x)


def _enumerate_primes(rid, norm_max: int):
    if rid.theta_square == (0, 0):
        cands = [RingElement(rid, a) for a in range(2, norm_max + 1)]
    else:
        reach = int(2 * norm_max**0.5) + 2
        cands = [
            RingElement(rid, a, b)
            for a in range(-reach, reach + 1)
            for b in range(-reach, reach + 1)
        ]
    seen = set()
    out = []
    for x in cands:
        if not 2 <= _ideal_norm(x) <= norm_max or not is_prime(x):
            continue
        canon = max(associates(x), key=lambda y: (y.a, y.b))
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    out.sort(key=lambda y: (_ideal_norm(y), y.a, y.b))
    return out


def _cmd_scan(args):
    rid = ring_by_name(args.ring)
    if args.norm_max > SCAN_NORM_CAP:
        raise ValueError(f"--norm-max is capped at {SCAN_NORM_CAP}")
    rows = []
    for p in _enumerate_primes(rid, args.norm_max):
        ctx = build_residue_field(rid, p)
        rows.append(
            {
                "p": format_element(p),
                "norm": _ideal_norm(p),
                "q": ctx.q,
                "unit_index": (ctx.q - 1) // len(ctx.U),
                "classification": classify_pair(ctx, effort=args.effort),
            }
        )
    obj = {"ring": rid.tag, "norm_max": args.norm_max, "rows": rows}
    validate_output("scan", obj)
    if args.csv:
        return 0, _emit_csv(rows, ["p", "norm", "q", "unit_index", "classification"]), []
    return 0, _emit_json("scan", obj), []


def _cmd_ranks(args):
    ctx = _ctx(args.ring, args.p)
    rows = []
    for n in range(1, args.n_max + 1):
        table = cross_validate(
            ctx, n, variant=args.variant, brute=args.oracle and n >= 2, cap=args.cap
        )
        rows.append(
            {
                "n": n,
                "recursive": table.recursive,
                "lower_bound": table.lower_bound,
                "brute_force": table.brute_force,
                "consistent": table.consistent,
            }
        )
    obj = {
        "ring": ctx.ring.tag,
        "p": format_element(ctx.p),
        "key": ctx.key,
        "variant": args.variant,
        "rows": rows,
    }
    validate_output("ranks", obj)
    if args.csv:
        return 0, _emit_csv(
            rows, ["n", "recursive", "lower_bound", "brute_force", "consistent"]
        ), []
    return 0, _emit_json("ranks", obj), []


def _cmd_nu(args):
    rid = ring_by_name(args.ring)
    obj = {"ring": rid.tag, "n": args.n, "nu": nu_degree(rid, args.n)}
    return 0, _emit_json("nu", obj), []


def _cmd_lift(args):
    ctx = _ctx(args.ring, args.p)
    raw = json.loads(args.matrix)
    if not isinstance(raw, list) or any(not isinstance(r, list) for r in raw):
        raise ValueError("--matrix must be a JSON list of rows")
    rid = ctx.ring
    M = [[ctx.reduce(parse_element(rid, str(e))) for e in row] for row in raw]
    lifted = lift_sl_matrix(ctx, M)
    verified = (
        all(
            ctx.reduce(lifted[r][c]) == M[r][c]
            for r in range(len(M))
            for c in range(len(M))
        )
        and _ring_det(rid, lifted) == one(rid)
    )
    obj = {
        "ring": rid.tag,
        "p": format_element(ctx.p),
        "matrix": M,
        "lifted": [[format_element(e) for e in row] for row in lifted],
        "verified": verified,
    }
    return (0 if verified else 1), _emit_json("lift", obj), []


def _cmd_verify(args):
    cfg = SuiteConfig(
        q_max=args.q_max,
        n_max=args.n_max,
        m_max=args.m_max,
        cap=args.cap,
        effort=args.effort,
        seed=args.seed,
        samples=args.samples,
        bases=args.bases,
        rings=tuple(args.rings) if args.rings else None,
        workers=args.workers,
        cache_dir=args.cache_dir,
        strict=args.strict,
    )
    report = run_suite(args.suite, cfg)
    keys = [
        it.detail["cache_key"] for it in report.items if "cache_key" in it.detail
    ]
    if args.csv:
        rows = [
            {
                "name": it.name,
                "status": it.status,
                "detail": stable_json(it.detail),
            }
            for it in report.items
        ]
        text = _emit_csv(rows, ["name", "status", "detail"])
    elif args.json:
        obj = json.loads(report.to_json())
        text = _emit_json("suite-report", obj)
    else:
        lines = [f"suite {report.suite}: {stable_json(report.summary)}"]
        for it in report.items:
            if it.status != "pass":
                lines.append(f"  {it.status:8s} {it.name}  {stable_json(it.detail)}")
        text = "\n".join(lines) + "\n"
        sys.stdout.write(text)
    return report.exit_status(args.strict), text, keys


# ---------------------------------------------------------------------------
# Parser


def _write_manifest(path, command, argv, keys, wall, output_text, item_walls=None):
    manifest = {
        "command": command,
        "arguments": list(argv),
        "version": __version__,
        "cache_keys": sorted(set(keys)),
        "wall_times": {"total": round(wall, 6), **(item_walls or {})},
        "output_digest": "sha256:"
        + hashlib.sha256(output_text.encode()).hexdigest(),
    }
    validate_output("manifest", manifest)
    Path(path).write_text(stable_json(manifest) + "\n")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--manifest",
        metavar="PATH",
        help="write a run manifest (arguments, cache keys, output digest) to PATH",
    )

    parser = argparse.ArgumentParser(
        prog="buildings-lab",
        description="Partial-basis complexes over Euclidean number rings: "
        "builds, homology, condition verdicts, rank formulas, and suites.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ring-info", parents=[common], help="ring constants and units")
    p.add_argument("ring")
    p.set_defaults(handler=_cmd_ring_info)

    p = sub.add_parser("field", parents=[common], help="residue field tables for a prime")
    p.add_argument("ring")
    p.add_argument("p")
    p.set_defaults(handler=_cmd_field)

    p = sub.add_parser("complex", parents=[common], help="complex builds")
    csub = p.add_subparsers(dest="action", required=True)
    pb = csub.add_parser("build", parents=[common], help="build and cache a complex")
    pb.add_argument("ring")
    pb.add_argument("p")
    pb.add_argument("kind", choices=COMPLEX_KINDS)
    pb.add_argument("n", type=int)
    pb.add_argument("--m", type=int, default=0)
    pb.add_argument("--cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    pb.add_argument("--cache-dir")
    pb.set_defaults(handler=_cmd_complex)

    p = sub.add_parser("homology", parents=[common], help="reduced homology report")
    p.add_argument("complex", help="cache key or <ring>:<p>:<kind>:<n>[:<m>]")
    p.add_argument("--torsion", action="store_true")
    p.add_argument("--cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    p.add_argument("--cache-dir")
    p.set_defaults(handler=_cmd_homology)

    p = sub.add_parser("pi1", parents=[common], help="fundamental group verdict")
    p.add_argument("complex", help="cache key or <ring>:<p>:<kind>:<n>[:<m>]")
    p.add_argument("--effort", type=int, default=DEFAULT_EFFORT)
    p.add_argument("--cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    p.add_argument("--cache-dir")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(handler=_cmd_pi1)

    p = sub.add_parser("conditions", parents=[common], help="five-condition report")
    p.add_argument("ring")
    p.add_argument("p")
    p.add_argument("--effort", type=int, default=DEFAULT_EFFORT)
    p.add_argument("--strict", action="store_true")
    p.set_defaults(handler=_cmd_conditions)

    p = sub.add_parser("scan", parents=[common], help="classify primes up to a norm")
    p.add_argument("ring")
    p.add_argument("--norm-max", type=int, required=True)
    p.add_argument("--effort", type=int, default=DEFAULT_EFFORT)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_scan)

    p = sub.add_parser("ranks", parents=[common], help="recursive rank table")
    p.add_argument("ring")
    p.add_argument("p")
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--variant", choices=("cosets", "orbits"), default="cosets")
    p.add_argument("--oracle", action="store_true", help="cross-check by building the complex")
    p.add_argument("--cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_ranks)

    p = sub.add_parser("nu", parents=[common], help="duality degree")
    p.add_argument("ring")
    p.add_argument("n", type=int)
    p.set_defaults(handler=_cmd_nu)

    p = sub.add_parser("lift", parents=[common], help="lift a matrix from SL_n(F) to SL_n(R)")
    p.add_argument("ring")
    p.add_argument("p")
    p.add_argument("--matrix", required=True, help="JSON rows, entries as integers or element strings")
    p.set_defaults(handler=_cmd_lift)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--q-max", type=int, default=None)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--m-max", type=int, default=1)
    p.add_argument("--cap", type=int, default=DEFAULT_SIMPLEX_CAP)
    p.add_argument("--effort", type=int, default=DEFAULT_EFFORT)
    p.add_argument("--seed", type=int, default=20260816)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--bases", type=int, default=200)
    p.add_argument("--rings", nargs="*", default=None)
    p.add_argument("--workers", type=int, default=0, help="0 means one per logical core")
    p.add_argument("--cache-dir")
    p.add_argument("--strict", action="store_true", help="unknown verdicts fail the run")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(handler=_cmd_verify)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        code, text, keys = args.handler(args)
    except (ValueError, ResourceCapError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        target = getattr(exc, "filename", None) or ""
        print(f"error: {exc}{' at ' + str(target) if target else ''}", file=sys.stderr)
        return 1
    if getattr(args, "manifest", None):
        _write_manifest(
            args.manifest, args.command, argv, keys, time.perf_counter() - t0, text
        )
    return code


if __name__ == "__main__":
    raise SystemExit(main())
