"""Write the rate/radius comparison CSV for several t (plotting is left to the reader)."""

import argparse
from pathlib import Path

from rmcover.bounds import below_entropy, kappa_csv, kappa_points


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--m-max", type=int, default=20)
    ap.add_argument("--out-dir", default=".")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for t in args.t:
        path = out / f"kappa_t{t}.csv"
        path.write_text(kappa_csv(t, args.m_max))
        pts = kappa_points(t, args.m_max)
        below = sum(below_entropy(p, t) for p in pts)
        print(f"{path}: {len(pts)} code points, {below} strictly below 1 - H_2(rho/{t})")


if __name__ == "__main__":
    main()
