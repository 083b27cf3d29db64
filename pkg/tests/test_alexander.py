import sympy
from hypothesis import given, strategies as st

from shakecert.alexander import LaurentPoly, alexander, arf, arf_from_alexander, torus_alexander
from shakecert.expr import UNKNOT, Mirror, Named, Sat, Sum, Torus, Wh
from shakecert.patterns import default_registry

from strategies import TORI, knots, tori

REG = default_registry()
t = sympy.symbols("t")


def sympy_torus(p, q):
    """Centred coefficient dict from the closed form, computed by sympy."""
    expr = sympy.cancel((t ** (p * q) - 1) * (t - 1) / ((t ** p - 1) * (t ** q - 1)))
    poly = sympy.Poly(expr, t)
    deg = poly.degree()
    return {e - deg // 2: int(c) for (e,), c in poly.terms()}


def test_torus_matches_sympy():
    for k in TORI:
        assert torus_alexander(k.p, k.q).as_dict() == sympy_torus(k.p, k.q), k


def test_trefoil():
    d = torus_alexander(2, 3)
    assert d.as_dict() == {-1: 1, 0: -1, 1: 1}
    assert str(d) == "t - 1 + t^-1"
    assert d(-1) == -3 and arf_from_alexander(d) == 1


def test_arf_values():
    # Arf(T(2,q)) is 1 exactly when q = +-3 mod 8
    for q in (3, 5, 7, 9, 11, 13):
        assert arf(Torus(2, q), REG) == (1 if q % 8 in (3, 5) else 0)
    assert arf(Torus(3, 4), REG) == 1
    assert arf(Torus(3, 5), REG) == 0
    assert arf(UNKNOT, REG) == 0
    assert arf(Wh(Torus(2, 3)), REG) == 0


@given(st.lists(tori, min_size=2, max_size=4))
def test_arf_additive(parts):
    total = arf(Sum(tuple(parts)), REG)
    assert total == sum(arf(k, REG) for k in parts) % 2


@given(knots())
def test_symmetric_when_known(e):
    d = alexander(e, REG)
    if d is not None:
        assert d.is_symmetric()
        assert d(1) == 1


def test_satellites():
    k = Torus(2, 5)
    assert alexander(Sat(Named("mazur"), 0, k), REG) == alexander(k, REG)
    # the r1 closure is recorded without a polynomial
    assert alexander(Sat(Named("r1"), 0, k), REG) is None
    assert arf(Sat(Named("r1"), 0, k), REG) is None
    assert alexander(Mirror(k), REG) == alexander(k, REG)


def test_normalized_sign_and_shift():
    p = LaurentPoly.from_dict({3: -1, 4: 1, 5: -1})
    assert p.normalized().as_dict() == {-1: 1, 0: -1, 1: 1}
