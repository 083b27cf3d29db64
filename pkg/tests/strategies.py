"""Hypothesis strategies shared by the test modules."""
from math import gcd

from hypothesis import strategies as st

from shakecert.expr import UNKNOT, Mirror, Named, Reverse, Sat, Sum, Torus, Wh

TORI = [Torus(p, q) for p in range(2, 8) for q in range(p + 1, 10) if gcd(p, q) == 1]

tori = st.sampled_from(TORI)
pattern_names = st.sampled_from(["core", "mazur", "r0", "r1", "r2"])
twists = st.integers(-3, 3)


def knots(max_leaves=6):
    leaves = st.one_of(st.just(UNKNOT), tori)

    def extend(children):
        return st.one_of(
            children.map(Mirror),
            children.map(Reverse),
            children.map(Wh),
            st.lists(children, min_size=2, max_size=3).map(lambda xs: Sum(tuple(xs))),
            st.builds(lambda n, r, k: Sat(Named(n), r, k), pattern_names, twists, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


odd = st.integers(-20, 20).map(lambda n: 2 * n + 1)
