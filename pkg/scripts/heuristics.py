"""Time-budgeted (ft3) runs compared with the exact optimum.

    python3 scripts/heuristics.py --m 30 --budgets 1 10 100 --seeds 10
"""

import argparse
import statistics

from qbop.balanced import ALGORITHMS, solve
from qbop.families import FT2, FT3
from qbop.generate import GeneratorSpec, generate_qbalkp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=30)
    ap.add_argument("--sigma", type=float, default=100.0)
    ap.add_argument("--s", type=float, default=0.5)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--budgets", type=float, nargs="+", default=[1, 10, 100])
    args = ap.parse_args()

    insts = [generate_qbalkp(GeneratorSpec(args.m, args.sigma, args.s, k)) for k in range(args.seeds)]
    exact = [solve(inst, "ib1", FT2).objective for inst in insts]
    print(f"{'alg':5} {'budget_ms':>9} {'mean_gap':>9} {'optimal':>8} {'unknowns':>9} {'ms':>8}")
    for alg in ALGORITHMS:
        for ms in args.budgets:
            gaps, hits, unknowns, times = [], 0, 0, []
            for inst, opt in zip(insts, exact):
                res = solve(inst, alg, FT3(ms))
                if res.objective is not None and opt is not None:
                    gaps.append(res.objective - opt)
                    hits += res.objective == opt
                unknowns += res.stats.unknowns
                times.append(res.stats.elapsed * 1000)
            print(f"{alg:5} {ms:9g} {statistics.fmean(gaps) if gaps else float('nan'):9.2f} "
                  f"{hits:5d}/{len(insts):<2d} {unknowns:9d} {statistics.fmean(times):8.1f}")


if __name__ == "__main__":
    main()
