"""Time cover at fixed (t, r) over a range of m and compare with the cost model."""

import argparse
import time

import numpy as np

from rmcover.cover import cover_many, predicted_cost


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=int, default=1)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--m-min", type=int, default=6)
    ap.add_argument("--m-max", type=int, default=10)
    ap.add_argument("--batch", type=int, default=1024)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    prev = None
    print("m,seconds,predicted,measured_ratio,predicted_ratio")
    for m in range(args.m_min, args.m_max + 1):
        V = rng.integers(0, 2, size=(args.batch, args.t, 1 << m), dtype=np.uint8)
        cover_many(V[:8], args.r)
        best = float("inf")
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            cover_many(V, args.r)
            best = min(best, time.perf_counter() - t0)
        pred = predicted_cost(args.t, args.r, m)
        if prev is None:
            print(f"{m},{best:.6f},{pred:.6g},,")
        else:
            print(f"{m},{best:.6f},{pred:.6g},{best / prev[0]:.3f},{pred / prev[1]:.3f}")
        prev = (best, pred)


if __name__ == "__main__":
    main()
