"""Feasibility tests and run time of every algorithm on random knapsack instances.

    python3 scripts/compare_algorithms.py --m 50 --sigma 100 --s 0.1 --seeds 10 --out runs.csv
"""

import argparse

from qbop.balanced import ALGORITHMS
from qbop.bench import Grid, run_grid, summarize, write_records


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, nargs="+", default=[30])
    ap.add_argument("--sigma", type=float, nargs="+", default=[100.0])
    ap.add_argument("--s", type=float, nargs="+", default=[0.1, 0.3, 0.5])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--mode", nargs="+", default=["ft2"])
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", help="optional run-record CSV")
    args = ap.parse_args()

    grid = Grid(m=args.m, sigma=args.sigma, s=args.s, seeds=list(range(args.seeds)),
                algorithms=list(ALGORITHMS), modes=args.mode)
    records = run_grid(grid, workers=args.workers)
    if args.out:
        write_records(args.out, records)
    print(f"{'cell':32} {'alg':5} {'mode':6} {'tests':>9} {'iters':>8} {'ms':>9}")
    for row in summarize(records):
        print(f"{row['cell']:32} {row['algorithm']:5} {row['mode']:6} {row['mean_tests']:9.1f} "
              f"{row['mean_iterations']:8.1f} {row['mean_elapsed_ms']:9.1f}")


if __name__ == "__main__":
    main()
