"""Timing comparison of the mod-p rank kernel backends.

Feeds the boundary matrix of a building to IncrementalRank once per backend
and prints a small table. The numba column only appears when numba imports;
set BUILDINGS_LAB_NUMBA=0 to force the pure python path for a baseline.

Run from the repository root:

    python3 benchmarks/bench_rank.py [--q 5] [--n 3] [--repeat 3]
"""

import argparse
import time

from buildings_lab.complexes import build_tits
from buildings_lab.homology import boundary_columns
from buildings_lab.kernels import IncrementalRank
from buildings_lab.residue import build_residue_field
from buildings_lab.rings import INTEGERS, RingElement


def boundary_instance(q: int, n: int):
    ctx = build_residue_field(INTEGERS, RingElement(INTEGERS, q))
    sc = build_tits(ctx, n)
    k = sc.dim
    cols = boundary_columns(sc, k)
    return cols, len(sc.simplices[k - 1]), sc.counts


def run_once(cols, nrows, use_numba):
    t0 = time.perf_counter()
    rank = IncrementalRank(nrows, use_numba=use_numba)
    rank.add_columns(cols, defer=True)
    return rank.rank, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=5, help="prime residue count")
    ap.add_argument("--n", type=int, default=3, help="building rank")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cols, nrows, counts = boundary_instance(args.q, args.n)
    print(f"T_{args.n}(F_{args.q}) counts={counts}, {len(cols)} columns x {nrows} rows")

    try:
        import numba  # noqa: F401
        backends = [("python", False), ("numba", True)]
    except ImportError:
        print("numba not importable; timing the python backend only")
        backends = [("python", False)]

    header = f"{'backend':8s} {'rank':>6s} " + " ".join(
        f"{'run ' + str(i + 1):>9s}" for i in range(args.repeat)
    )
    print(header)
    for name, use_numba in backends:
        times = []
        rank_value = None
        for _ in range(args.repeat):
            rank_value, dt = run_once(cols, nrows, use_numba)
            times.append(dt)
        cells = " ".join(f"{t * 1000:8.1f}ms" for t in times)
        print(f"{name:8s} {rank_value:6d} {cells}")


if __name__ == "__main__":
    main()
