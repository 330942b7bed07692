"""Five unit-image conditions on a residue field and the pair classification.

Conditions 1 through 4 are finite checks on the pair (F, U): the index of U
in F*, connectivity of the unit-step graph on the nonzero non-units, additive
generation of F by U, and a three-term unit progression. Condition 5 asks the
degree-2 additive complex to be simply connected; its verdict can come back
"unknown" when the group-triviality decision exhausts its budget, and that is
the only unknown a classification will ever propagate.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import build_BDA
from .homology import (
    FourLoopReport,
    connected_components,
    four_loop_check,
    reduced_homology,
)
from .presentations import NONTRIVIAL, TRIVIAL, fundamental_group, is_trivial_group
from .residue import PrimeContext, is_full_unit_image

PASS = "pass"
FAIL = "fail"
UNKNOWN = "unknown"

FULL_UNIT_IMAGE = "full-unit-image"
CONDITIONS_1_TO_5 = "conditions-1-to-5"
NEITHER = "neither"
UNDETERMINED = "undetermined"

DEFAULT_EFFORT = 10**6

__all__ = [
    "PASS",
    "FAIL",
    "UNKNOWN",
    "FULL_UNIT_IMAGE",
    "CONDITIONS_1_TO_5",
    "NEITHER",
    "UNDETERMINED",
    "DEFAULT_EFFORT",
    "Verdict",
    "ConditionReport",
    "unit_index_condition",
    "nonunit_graph_condition",
    "additive_generation_condition",
    "unit_progression_condition",
    "simply_connected_condition",
    "check_sum_of_two_units",
    "check_conditions",
    "classify_pair",
]


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: object = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.status == PASS


@dataclass
class ConditionReport:
    key: str
    q: int
    unit_index: int
    verdicts: tuple[Verdict, ...]
    four_loop: FourLoopReport | None = None

    def condition(self, i: int) -> Verdict:
        if not 1 <= i <= len(self.verdicts):
            raise IndexError(f"no condition {i}")
        return self.verdicts[i - 1]

    @property
    def all_pass(self) -> bool:
        return all(v.status == PASS for v in self.verdicts)

    @property
    def failed(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, v in enumerate(self.verdicts) if v.status == FAIL)

    @property
    def unknown(self) -> tuple[int, ...]:
        return tuple(i + 1 for i, v in enumerate(self.verdicts) if v.status == UNKNOWN)


def unit_index_condition(ctx: PrimeContext) -> Verdict:
    """Condition 1: U has index exactly two in the multiplicative group."""
    index = (ctx.q - 1) // len(ctx.U)
    status = PASS if index == 2 else FAIL
    return Verdict(status, witness=index, note=f"index of U in F* is {index}")


def nonunit_graph_condition(ctx: PrimeContext) -> Verdict:
    """Condition 2: nonzero non-units are connected under steps by U-members."""
    nonunits = [x for x in range(1, ctx.q) if x not in ctx.U]
    if len(nonunits) <= 1:
        return Verdict(PASS, witness=len(nonunits), note="at most one non-unit")
    slot = {c: i for i, c in enumerate(nonunits)}
    parent = list(range(len(nonunits)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in nonunits:
        for u in ctx.U:
            d = ctx.add[c][u]
            if d in slot:
                ra, rb = find(slot[c]), find(slot[d])
                if ra != rb:
                    parent[ra] = rb
    comps = sum(1 for i, p in enumerate(parent) if find(i) == i)
    return Verdict(
        PASS if comps == 1 else FAIL,
        witness=comps,
        note=f"{comps} unit-step component(s) on {len(nonunits)} non-units",
    )


def additive_generation_condition(ctx: PrimeContext) -> Verdict:
    """Condition 3: U generates the additive group of F."""
    closure = {0} | set(ctx.U)
    while True:
        grown = {ctx.add[x][y] for x in closure for y in closure}
        if grown <= closure:
            break
        closure |= grown
    status = PASS if len(closure) == ctx.q else FAIL
    return Verdict(
        status,
        witness=len(closure),
        note=f"additive closure of U has {len(closure)} of {ctx.q} elements",
    )


def unit_progression_condition(ctx: PrimeContext) -> Verdict:
    """Condition 4: 2 is a nonzero non-unit, or some u1, u2 in U have
    u1 + u2 and 2 u1 + u2 nonzero non-units while 3 u1 + u2 lands in U."""
    add, unit_set = ctx.add, ctx.U
    two = add[1][1]
    if two != 0 and two not in unit_set:
        return Verdict(PASS, witness="2", note="2 is a nonzero non-unit")
    for u1 in sorted(unit_set):
        for u2 in sorted(unit_set):
            s1 = add[u1][u2]
            if s1 == 0 or s1 in unit_set:
                continue
            s2 = add[s1][u1]
            if s2 == 0 or s2 in unit_set:
                continue
            if add[s2][u1] in unit_set:
                return Verdict(
                    PASS,
                    witness=(u1, u2),
                    note=f"u1={ctx.elem_str(u1)}, u2={ctx.elem_str(u2)}",
                )
    return Verdict(FAIL, note="2 lies in U and no unit pair steps as required")


def simply_connected_condition(
    ctx: PrimeContext, effort: int = DEFAULT_EFFORT
) -> tuple[Verdict, FourLoopReport]:
    """Condition 5: the degree-2 additive complex is simply connected.

    Returns the verdict together with the four-loop analysis of the same
    complex; the latter records which square classes needed the fundamental
    group at all.
    """
    sc = build_BDA(ctx, 2)
    loops = four_loop_check(sc)
    if connected_components(sc) != 1:
        return Verdict(FAIL, witness="disconnected"), loops
    betti1 = reduced_homology(sc, up_to_dim=1).betti[1]
    if betti1 != 0:
        return (
            Verdict(FAIL, witness={"betti1": betti1}, note="first homology is nonzero"),
            loops,
        )
    group = is_trivial_group(fundamental_group(sc), effort=effort)
    status = {TRIVIAL: PASS, NONTRIVIAL: FAIL}.get(group, UNKNOWN)
    return (
        Verdict(status, witness={"betti1": 0, "pi1": group}, note=f"pi1 {group}"),
        loops,
    )


def check_sum_of_two_units(ctx: PrimeContext) -> Verdict:
    """Whether every nonzero non-unit of F is a sum of two U-members."""
    sums = {ctx.add[u1][u2] for u1 in ctx.U for u2 in ctx.U}
    missing = [c for c in range(1, ctx.q) if c not in ctx.U and c not in sums]
    if missing:
        c = missing[0]
        return Verdict(FAIL, witness=c, note=f"{ctx.elem_str(c)} is not such a sum")
    return Verdict(PASS, note="every nonzero non-unit is a sum of two U-members")


def check_conditions(
    ctx: PrimeContext, effort: int = DEFAULT_EFFORT, deep: bool = True
) -> ConditionReport:
    """Evaluate all five conditions; deep=False skips the simply-connected one."""
    verdicts = [
        unit_index_condition(ctx),
        nonunit_graph_condition(ctx),
        additive_generation_condition(ctx),
        unit_progression_condition(ctx),
    ]
    loops = None
    if deep:
        v5, loops = simply_connected_condition(ctx, effort=effort)
    else:
        v5 = Verdict(UNKNOWN, note="condition 5 skipped")
    verdicts.append(v5)
    return ConditionReport(
        key=ctx.key,
        q=ctx.q,
        unit_index=(ctx.q - 1) // len(ctx.U),
        verdicts=tuple(verdicts),
        four_loop=loops,
    )


def classify_pair(ctx: PrimeContext, effort: int = DEFAULT_EFFORT) -> str:
    """Classification of a ring/prime pair by its unit image.

    "full-unit-image" when U is all of F*, "conditions-1-to-5" when all five
    conditions hold, "neither" when some condition certifiably fails, and
    "undetermined" when nothing failed but condition 5 ran out of budget.
    """
    if is_full_unit_image(ctx):
        return FULL_UNIT_IMAGE
    report = check_conditions(ctx, effort=effort)
    if report.all_pass:
        return CONDITIONS_1_TO_5
    if report.failed:
        return NEITHER
    return UNDETERMINED
