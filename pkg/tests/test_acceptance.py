"""Acceptance suite: ten end-to-end checks with pinned values and budgets.

Each test prints one ACCEPTANCE line straight to the terminal so a plain
pytest run leaves a visible audit trail. Expensive suite runs are shared
through module-scoped fixtures; each fixture records its wall time so the
budget assertions charge the right run.
"""

import time

import pytest

from buildings_lab.complexes import build_BDA
from buildings_lab.conditions import (
    CONDITIONS_1_TO_5,
    FULL_UNIT_IMAGE,
    NEITHER,
    check_conditions,
    classify_pair,
)
from buildings_lab.homology import four_loop_check
from buildings_lab.ranks import rank_lower_bound, recursive_rank
from buildings_lab.residue import (
    build_residue_field,
    is_full_unit_image,
    standard_contexts,
)
from buildings_lab.rings import parse_element, ring_by_name
from buildings_lab.suites import (
    NAMED_CLASSIFICATIONS,
    SuiteConfig,
    run_suite,
)


def _ctx(ring, p):
    rid = ring_by_name(ring)
    return build_residue_field(rid, parse_element(rid, p))


def _timed_suite(suite, **kw):
    cfg = SuiteConfig(**kw)
    t0 = time.perf_counter()
    rep = run_suite(suite, cfg)
    return rep, time.perf_counter() - t0


@pytest.fixture(scope="module")
def solomon_tits_run():
    return _timed_suite("solomon-tits")


@pytest.fixture(scope="module")
def connectivity_run():
    return _timed_suite("connectivity")


@pytest.fixture(scope="module")
def ranks_run():
    return _timed_suite("ranks")


def _announce(capsys, line):
    with capsys.disabled():
        print(line, flush=True)


def test_acceptance_1_named_classifications(capsys):
    t0 = time.perf_counter()
    for ring, p, expected in NAMED_CLASSIFICATIONS:
        got = classify_pair(_ctx(ring, p))
        assert got == expected, f"({ring}, {p}): {got} != {expected}"
    wall = time.perf_counter() - t0
    assert wall < 60.0
    _announce(
        capsys,
        f"ACCEPTANCE 1: PASS  {len(NAMED_CLASSIFICATIONS)} named pairs classified "
        f"as recorded in {wall:.1f}s",
    )


def test_acceptance_2_integer_boundary(capsys):
    for p, expected_witness in ((3, None), (5, None)):
        cls = classify_pair(_ctx("Integers", str(p)))
        assert cls in (FULL_UNIT_IMAGE, CONDITIONS_1_TO_5)
    witnesses = {}
    for p, expected_witness in ((7, 3), (11, 5), (13, 6)):
        ctx = _ctx("Integers", str(p))
        assert classify_pair(ctx) == NEITHER
        report = check_conditions(ctx, deep=False)
        first = report.condition(1)
        assert first.status == "fail"
        assert first.witness == expected_witness != 2
        witnesses[p] = first.witness
    _announce(
        capsys,
        "ACCEPTANCE 2: PASS  ints 3,5 satisfy the conditions; 7,11,13 fail "
        f"condition 1 with unit indices {witnesses}",
    )


def test_acceptance_3_tits_homology(capsys, solomon_tits_run):
    rep, wall = solomon_tits_run
    assert wall < 300.0
    tits = [it for it in rep.items if it.name.split(":")[0] in ("T2", "T3", "TU2", "TU3")]
    assert tits and all(it.status == "pass" for it in tits)
    by_name = {it.name: it.detail for it in rep.items}
    assert by_name["T3:Integers:3"]["betti"] == [0, 27]
    assert by_name["TU3:Gaussian:3"]["betti"] == [0, 3277]
    checked = sum(1 for it in tits if "expected_top" in it.detail)
    _announce(
        capsys,
        f"ACCEPTANCE 3: PASS  {len(tits)} building homologies concentrated in "
        f"top degree, {checked} top ranks matching q^(n choose 2), in {wall:.1f}s",
    )


def test_acceptance_4_rank_oracle(capsys, ranks_run):
    rep, wall = ranks_run
    assert wall < 600.0
    assert rep.summary["fail"] == 0
    assert rep.summary["unknown"] == 0
    t2 = [it for it in rep.items if it.name.startswith("t2:")]
    t3 = {it.name: it.detail for it in rep.items if it.name.startswith("t3:")}
    assert len(t2) == 18
    assert all(it.detail["closed_form"] == it.detail["brute"] for it in t2)
    assert t3["t3:Integers:3"]["brute"] == t3["t3:Integers:3"]["cosets"] == 27
    assert t3["t3:Integers:5"]["brute"] == t3["t3:Integers:5"]["cosets"] == 621
    assert t3["t3:Gaussian:3"]["brute"] == t3["t3:Gaussian:3"]["cosets"] == 3277
    _announce(
        capsys,
        f"ACCEPTANCE 4: PASS  t_2 closed form on {len(t2)} fields; t_3 oracle "
        f"27/621/3277 matches the recursion in {wall:.1f}s",
    )


def test_acceptance_5_rank_bound(capsys):
    rows = 0
    for ctx in standard_contexts():
        full = is_full_unit_image(ctx)
        for n in (2, 3, 4):
            t = recursive_rank(ctx, n)
            lb = rank_lower_bound(ctx, n)
            assert t >= lb
            assert (t == lb) == full
            rows += 1
    _announce(
        capsys,
        f"ACCEPTANCE 5: PASS  t_n >= q^C(n,2)*a^(n-1) on {rows} rows, equality "
        "exactly on full-unit-image fields",
    )


def test_acceptance_6_family_connectivity(capsys, connectivity_run):
    rep, wall = connectivity_run
    assert wall < 900.0
    assert rep.summary["fail"] == 0
    assert rep.summary["unknown"] == 0
    materialized = sum(1 for it in rep.items if it.detail["method"] == "materialized")
    streamed = rep.summary["total"] - materialized
    top_checked = sum(
        1
        for it in rep.items
        if it.detail["method"] == "materialized"
        and it.name.startswith("BDA(")
        and it.detail["required_zero"]
        and it.detail["required_zero"][-1] == len(it.detail["counts"]) - 2
    )
    assert top_checked >= 10
    _announce(
        capsys,
        f"ACCEPTANCE 6: PASS  {rep.summary['total']} family complexes connected "
        f"through degree n-2 ({materialized} materialized, {streamed} streamed; "
        f"{top_checked} with vanishing top homology) in {wall:.1f}s",
    )


def test_acceptance_7_four_loops(capsys):
    pairs = (("Gaussian", "3"), ("Eisenstein", "1+4*w"), ("Eisenstein", "3+4*w"))
    stats = {}
    for ring, p in pairs:
        ctx = _ctx(ring, p)
        sc = build_BDA(ctx, 2, 0)
        fl = four_loop_check(sc)
        assert fl.all_cliques_filled, (ring, p, fl.unfilled_cliques)
        assert fl.all_cycles_handled, (ring, p, fl.uncovered)
        stats[f"{ring}:{p}"] = (fl.cycle_classes, fl.chorded, fl.coned)
    assert stats["Gaussian:3"] == (4, 3, 1)
    assert stats["Eisenstein:1+4*w"] == (7, 5, 2)
    assert stats["Eisenstein:3+4*w"] == (7, 5, 2)
    _announce(
        capsys,
        "ACCEPTANCE 7: PASS  unit cliques filled and every 4-loop chorded or "
        f"coned on 3 pairs {stats}",
    )


def test_acceptance_8_lifting(capsys):
    rep, wall = _timed_suite("lifting")
    assert rep.summary["fail"] == 0
    assert rep.summary["unknown"] == 0
    assert rep.summary["total"] == 36
    samples = sum(it.detail["samples"] for it in rep.items)
    _announce(
        capsys,
        f"ACCEPTANCE 8: PASS  {samples} random matrices lifted to determinant-one "
        f"ring matrices over 18 fields in {wall:.1f}s",
    )


def test_acceptance_9_apartment_span(capsys, solomon_tits_run):
    rep, _ = solomon_tits_run
    by_name = {it.name: it for it in rep.items}
    plain = by_name["apartments:T3:Integers:3"]
    oriented = by_name["apartments:TU3:Gaussian:3"]
    for it in (plain, oriented):
        assert it.status == "pass"
        assert it.detail["cycle_failures"] == 0
        assert it.detail["bases"] >= 200
    assert plain.detail["rank"] == plain.detail["target"] == 27
    assert oriented.detail["rank"] == oriented.detail["target"] == 3277
    _announce(
        capsys,
        "ACCEPTANCE 9: PASS  random apartment chains are cycles and span "
        f"27/27 (T3, q=3) and 3277/3277 (oriented T3, q=9)",
    )


def test_acceptance_10_integrity_and_reproducibility(
    capsys, solomon_tits_run, connectivity_run, tmp_path
):
    checked = 0
    for rep, _ in (solomon_tits_run, connectivity_run):
        for it in rep.items:
            if "boundary_squared" in it.detail:
                assert it.detail["boundary_squared"] is True
                assert it.detail.get("euler", True) is True
                checked += 1
    assert checked >= 40

    cfg = SuiteConfig(q_max=3, cache_dir=tmp_path / "cache")
    cold = run_suite("connectivity", cfg).to_json()
    warm = run_suite("connectivity", cfg).to_json()
    assert cold == warm
    _announce(
        capsys,
        f"ACCEPTANCE 10: PASS  boundary^2 = 0 and Euler identity on {checked} "
        "materialized complexes; cold and warm cache reports byte-identical",
    )
