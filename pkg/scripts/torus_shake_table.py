"""Shake genus of positive torus knots over a range of framings.

    python3 scripts/torus_shake_table.py --max-q 9 --csv out.csv
"""
import argparse
import csv
import sys
from math import gcd

from shakecert.engine import propagate
from shakecert.expr import Torus


def rows(max_q, r_lo):
    for p in range(2, max_q):
        for q in range(p + 1, max_q + 1):
            if gcd(p, q) != 1:
                continue
            g = (p - 1) * (q - 1) // 2
            rs = list(range(r_lo, 2 * g + 1))
            n = propagate(Torus(p, q), rs=rs).top
            for r in rs:
                iv = n.gsh[r]
                yield p, q, g, r, iv.lo, iv.hi


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-q", type=int, default=7)
    ap.add_argument("--r-lo", type=int, default=-3)
    ap.add_argument("--csv", help="write rows here instead of stdout")
    args = ap.parse_args()
    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["p", "q", "g4", "r", "gsh_lo", "gsh_hi"])
    for row in rows(args.max_q, args.r_lo):
        w.writerow(row)
    if args.csv:
        fh.close()


if __name__ == "__main__":
    main()
