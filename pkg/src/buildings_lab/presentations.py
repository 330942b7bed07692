"""Fundamental groups of 2-complexes and a triviality decision procedure.

A presentation stores relators as tuples of nonzero integers; letter x stands
for generator abs(x)-1, inverted when x < 0. is_trivial_group never guesses:
"trivial" and "nontrivial" are certified (by Tietze reduction to nothing, a
nontrivial abelianization, or a closed coset enumeration), and budget
exhaustion reports "unknown".
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .complexes import SimplicialComplex
from .homology import connected_components, snf_invariant_factors

TRIVIAL = "trivial"
NONTRIVIAL = "nontrivial"
UNKNOWN = "unknown"

__all__ = [
    "TRIVIAL",
    "NONTRIVIAL",
    "UNKNOWN",
    "GroupPresentation",
    "fundamental_group",
    "abelianization_invariants",
    "tietze_simplify",
    "todd_coxeter_order",
    "is_trivial_group",
]


@dataclass(frozen=True)
class GroupPresentation:
    ngens: int
    relators: tuple[tuple[int, ...], ...]

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


def fundamental_group(sc: SimplicialComplex) -> GroupPresentation:
    """Edge-path presentation of pi_1 of the 2-skeleton, from a spanning tree."""
    if connected_components(sc) != 1:
        raise ValueError("fundamental group needs a connected complex")
    nv = len(sc.vertices)
    edges = sc.simplices[1] if sc.dim >= 1 else []
    adjacency: list[list[int]] = [[] for _ in range(nv)]
    for i, j in edges:
        adjacency[i].append(j)
        adjacency[j].append(i)
    in_tree: set[tuple[int, int]] = set()
    seen = [False] * nv
    seen[0] = True
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if not seen[y]:
                seen[y] = True
                in_tree.add((min(x, y), max(x, y)))
                queue.append(y)
    gen_of: dict[tuple[int, int], int] = {}
    for e in edges:
        if e not in in_tree:
            gen_of[e] = len(gen_of)

    def letter(x: int, y: int) -> int:
        # the letter traversing x -> y, 0 for a tree edge
        e = (min(x, y), max(x, y))
        g = gen_of.get(e)
        if g is None:
            return 0
        return (g + 1) if x < y else -(g + 1)

    relators = []
    for a, b, c in (sc.simplices[2] if sc.dim >= 2 else []):
        word = tuple(
            l for l in (letter(a, b), letter(b, c), letter(c, a)) if l
        )
        if word:
            relators.append(word)
    return GroupPresentation(len(gen_of), tuple(relators))


def abelianization_invariants(pres: GroupPresentation) -> tuple[int, tuple[int, ...]]:
    """(free rank, nontrivial torsion factors) of the abelianized group."""
    if pres.ngens == 0:
        return 0, ()
    rows = []
    for rel in pres.relators:
        row = [0] * pres.ngens
        for x in rel:
            row[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(row)
    if not rows:
        return pres.ngens, ()
    factors = snf_invariant_factors(rows)
    free = pres.ngens - len(factors)
    return free, tuple(d for d in factors if d > 1)


def _free_reduce_cyclic(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
        reduced: list[int] = []
        for x in out:
            if reduced and reduced[-1] == -x:
                reduced.pop()
            else:
                reduced.append(x)
        out = reduced
    return tuple(out)


def _canonical_cyclic(word: tuple[int, ...]) -> tuple[int, ...]:
    if not word:
        return word
    candidates = []
    for w in (word, tuple(-x for x in reversed(word))):
        for i in range(len(w)):
            candidates.append(w[i:] + w[:i])
    return min(candidates)


def _substitute(relators, target: int, replacement: tuple[int, ...]):
    """Replace every occurrence of generator letter target with the word."""
    inv = tuple(-x for x in reversed(replacement))
    out = []
    for rel in relators:
        word: list[int] = []
        for x in rel:
            if x == target:
                word.extend(replacement)
            elif x == -target:
                word.extend(inv)
            else:
                word.append(x)
        out.append(tuple(word))
    return out


def tietze_simplify(pres: GroupPresentation, max_passes: int = 200) -> GroupPresentation:
    """Shrink a presentation without changing the group it presents.

    Applies free and cyclic reduction, duplicate removal, trivial-generator
    deletion (length-1 relators), inverse substitution (length-2 relators with
    distinct generators), and elimination of a generator that occurs exactly
    once in exactly one relator. Generators that merely lose all their
    occurrences stay in the presentation as free factors.
    """
    relators = [_free_reduce_cyclic(tuple(r)) for r in pres.relators]
    alive = set(range(1, pres.ngens + 1))
    for _ in range(max_passes):
        before = relators
        relators = sorted({_canonical_cyclic(_free_reduce_cyclic(r)) for r in relators if r})
        changed = relators != before

        killer = next((r for r in relators if len(r) == 1), None)
        if killer is not None:
            relators = _substitute(relators, abs(killer[0]), ())
            alive.discard(abs(killer[0]))
            continue

        pair = next(
            (r for r in relators if len(r) == 2 and abs(r[0]) != abs(r[1])), None
        )
        if pair is not None:
            a, b = pair
            # the relator reads a*b = 1, so the higher-indexed generator is
            # the inverse of the other; substitute it away
            if abs(b) < abs(a):
                a, b = b, a
            replacement = (-a,) if b > 0 else (a,)
            relators = _substitute(relators, abs(b), replacement)
            alive.discard(abs(b))
            continue

        occurrences: dict[int, int] = {}
        for rel in relators:
            for x in rel:
                occurrences[abs(x)] = occurrences.get(abs(x), 0) + 1
        lonely = next(
            (g for g, hits in sorted(occurrences.items()) if hits == 1), None
        )
        if lonely is not None:
            relators = [r for r in relators if all(abs(x) != lonely for x in r)]
            alive.discard(lonely)
            continue

        if not changed:
            break
    remap = {g: i + 1 for i, g in enumerate(sorted(alive))}
    out = [
        tuple(remap[abs(x)] * (1 if x > 0 else -1) for x in rel)
        for rel in relators
        if rel
    ]
    return GroupPresentation(len(alive), tuple(out))


def todd_coxeter_order(pres: GroupPresentation, max_cells: int = 10**6) -> int | None:
    """Order of the presented group by coset enumeration over the trivial
    subgroup; None when the table budget is exhausted before closure."""
    g = pres.ngens
    if g == 0:
        return 1
    width = 2 * g
    max_rows = max(64, max_cells // width)
    words = [
        [2 * (abs(x) - 1) + (0 if x > 0 else 1) for x in rel]
        for rel in pres.relators
    ]

    table: list[list[int]] = [[-1] * width]
    parent = [0]
    live = 1
    pending: deque = deque()

    def find(c: int) -> int:
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def merge(a: int, b: int) -> None:
        nonlocal live
        a, b = find(a), find(b)
        if a == b:
            return
        if b < a:
            a, b = b, a
        parent[b] = a
        live -= 1
        row = table[b]
        for l in range(width):
            if row[l] != -1:
                pending.append((a, l, row[l]))

    def drain() -> None:
        while pending:
            c, l, d = pending.popleft()
            c, d = find(c), find(d)
            e = table[c][l]
            if e == -1:
                table[c][l] = d
            elif find(e) != d:
                merge(find(e), d)
                continue
            e2 = table[d][l ^ 1]
            if e2 == -1:
                table[d][l ^ 1] = c
            elif find(e2) != c:
                merge(find(e2), c)

    def define(c: int, l: int) -> int:
        nonlocal live
        new = len(table)
        table.append([-1] * width)
        parent.append(new)
        live += 1
        table[c][l] = new
        table[new][l ^ 1] = c
        return new

    budget_hit = False
    c = 0
    while c < len(table):
        if find(c) != c:
            c += 1
            continue
        for word in words:
            if find(c) != c:
                break
            cur = find(c)
            closed_by_deduction = False
            for pos, l in enumerate(word):
                cur = find(cur)
                nxt = table[cur][l]
                if nxt == -1:
                    if pos == len(word) - 1:
                        pending.append((cur, l, find(c)))
                        drain()
                        closed_by_deduction = True
                        break
                    if len(table) >= max_rows:
                        budget_hit = True
                        break
                    nxt = define(cur, l)
                cur = find(nxt)
            if budget_hit:
                return None
            if not closed_by_deduction and find(cur) != find(c):
                merge(find(cur), find(c))
                drain()
        if find(c) == c:
            for l in range(width):
                if table[c][l] == -1:
                    if len(table) >= max_rows:
                        return None
                    define(c, l)
        c += 1

    assert all(
        all(x != -1 for x in table[r]) for r in range(len(table)) if find(r) == r
    )
    return live


def is_trivial_group(pres: GroupPresentation, effort: int = 10**6) -> str:
    """TRIVIAL / NONTRIVIAL / UNKNOWN, never wrong on the first two."""
    simplified = tietze_simplify(pres)
    if simplified.ngens == 0:
        return TRIVIAL
    free, torsion = abelianization_invariants(simplified)
    if free > 0 or torsion:
        return NONTRIVIAL
    order = todd_coxeter_order(simplified, max_cells=effort)
    if order is None:
        return UNKNOWN
    return TRIVIAL if order == 1 else NONTRIVIAL
