"""When does an iterated satellite equal a composed one?  Prints a grid of
Equal / mismatch coefficient over winding numbers and twists."""
import argparse

from shakecert.shake import compare_gluings


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--range", type=int, default=3, dest="span")
    ap.add_argument("--wp", type=int, default=1, help="winding number of the outer pattern")
    args = ap.parse_args()
    span = range(-args.span, args.span + 1)
    for w in span:
        if w == 0:
            continue
        print(f"w(Q) = {w}")
        print("  r\\s " + " ".join(f"{s:>4}" for s in span))
        for r in span:
            cells = []
            for s in span:
                c = compare_gluings(args.wp, w, r, s)
                cells.append("   =" if c.equal else f"{c.mismatch.coeff('m_i(Q)'):>4}")
            print(f"  {r:>3} " + " ".join(cells))


if __name__ == "__main__":
    main()
