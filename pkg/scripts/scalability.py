"""Imputation wall time against dataset size, with a linear fit.

    python scripts/scalability.py --sizes 1000,2000,4000,8000 --out bench.csv
"""
import argparse

from praa.eval_stats.bench import bench_scalability


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,2000,4000,8000")
    ap.add_argument("--cols", type=int, default=6)
    ap.add_argument("--missing", type=float, default=0.1)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", help="optional CSV path")
    args = ap.parse_args()

    rep = bench_scalability([int(s) for s in args.sizes.split(",")], seed=args.seed, n=args.cols,
                            missing_rate=args.missing, repeats=args.repeats)
    for d, s in zip(rep.sizes, rep.seconds):
        print(f"{d:>8}  {s:.4f} s")
    print(rep.summary())
    for d, ratio in rep.doubling_ratios():
        print(f"(T(2D) - b) / (T(D) - b) at D={d}: {ratio:.3f}")
    if args.out:
        rep.write_csv(args.out)


if __name__ == "__main__":
    main()
