"""Effect of early optimality detection on BDT and IB1 iteration counts.

For each instance: the exact Omega, the relaxed Omega(d) for a few gaps, and
iterations/tests with and without the early exit.

    python3 scripts/early_detection.py --m 50 --seeds 10
"""

import argparse

from qbop.balanced import EarlyDetectionConfig, compute_omega, solve
from qbop.families import FT2
from qbop.generate import GeneratorSpec, generate_qbalkp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=50)
    ap.add_argument("--sigma", type=float, default=100.0)
    ap.add_argument("--s", type=float, default=0.1)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--gaps", type=int, nargs="+", default=[2, 8])
    args = ap.parse_args()

    print("seed  p    obj  omega  " + "  ".join(f"omega(d={d})" for d in args.gaps)
          + "  alg  iters  iters_ed  tests  tests_ed")
    for seed in range(args.seeds):
        inst = generate_qbalkp(GeneratorSpec(args.m, args.sigma, args.s, seed))
        omegas = [compute_omega(inst.cost, inst.family, FT2, d) for d in [1] + args.gaps]
        for alg in ("bdt", "ib1"):
            plain = solve(inst, alg, FT2)
            early = solve(inst, alg, FT2, EarlyDetectionConfig(enabled=True))
            assert plain.objective == early.objective
            print(f"{seed:4d}  {len(inst.ladder()):3d}  {plain.objective:4d}  "
                  + "  ".join(f"{o:5d}" for o in omegas)
                  + f"  {alg:4} {plain.stats.iterations:6d} {early.stats.iterations:8d}"
                  f"  {plain.stats.tests:5d} {early.stats.tests:9d}")


if __name__ == "__main__":
    main()
