"""Exact R_t(r, m) next to the closed forms and the best certified upper bound."""

import argparse

from rmcover.bounds import best_upper_bound, lb_ball_covering
from rmcover.exactradius import METHODS, closed_form_exact, exact_rt
from rmcover.rmcode import CapExceeded, rm


def exact_or_none(t, r, m):
    for meth in METHODS:
        try:
            return exact_rt(rm(r, m), t, meth)
        except CapExceeded:
            continue
    return None


def show(v):
    return "-" if v is None else str(v)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m-max", type=int, default=4)
    ap.add_argument("--t-max", type=int, default=3)
    args = ap.parse_args()
    print(f"{'t':>2} {'r':>2} {'m':>2} {'lower':>6} {'exact':>6} {'closed':>6} {'upper':>6}  source")
    for m in range(1, args.m_max + 1):
        for r in range(m + 1):
            for t in range(1, args.t_max + 1):
                ex = exact_or_none(t, r, m)
                cf = closed_form_exact(t, r, m)
                ub = best_upper_bound(t, r, m)
                lo = lb_ball_covering(t, r, m).integer_form
                print(f"{t:>2} {r:>2} {m:>2} {lo:>6} {show(ex):>6} {show(cf):>6} {ub.integer_form:>6}  {ub.source}")


if __name__ == "__main__":
    main()
