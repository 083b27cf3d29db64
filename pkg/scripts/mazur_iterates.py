"""Iterated Mazur satellites of a base knot: closed form against per-term
propagation, for a range of twists."""
import argparse

from shakecert.expr import parse_expr
from shakecert.verdicts import family_row, family_table


def fmt(iv):
    if iv is None:
        return "-"
    lo, hi = iv
    return str(lo) if lo == hi else f"[{lo},{hi}]"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--base", default="(wh (torus 2 3))")
    ap.add_argument("--pattern", default="mazur")
    ap.add_argument("--iters", type=int, default=8)
    ap.add_argument("--r", type=int, nargs="+", default=[-2, -1, 0, 1, 2])
    args = ap.parse_args()
    base = parse_expr(args.base)
    for r in args.r:
        t = family_table(args.pattern, base, r, args.iters)
        how = "closed form" if t.closed_form else "per-term"
        print(f"r = {r} ({how})")
        for msg in t.diagnostics:
            print(f"  note: {msg}")
        print("   i  g4  tau  s   gsh  agree")
        for row in t.rows:
            direct = family_row(args.pattern, base, r, row.i)
            agree = (direct.g4, direct.tau, direct.s) == (row.g4, row.tau, row.s) and (
                row.gsh is None or direct.gsh == row.gsh)
            print(f"  {row.i:2d}  {fmt(row.g4):>3} {fmt(row.tau):>4} {fmt(row.s):>3} {fmt(row.gsh):>5}  {agree}")


if __name__ == "__main__":
    main()
