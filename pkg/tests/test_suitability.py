import pytest

from shakecert.engine import propagate, suit_cert_fact
from shakecert.expr import UNKNOT, Named, Sat, Sum, Torus, Wh
from shakecert.patterns import PatternDatum, default_registry
from shakecert.suitability import (
    SuitabilityError, ceil_half, consequences, satellite_conditions, suit_destab, suit_positive_torus,
    suit_satellite, suit_sum, suit_unknot, suit_wh, topologically_slice_rsuitable,
)

REG = default_registry()
MAZUR = REG["mazur"]


def test_positive_torus():
    c = suit_positive_torus(2, 3)
    assert (c.r, c.g4) == (1, 1)
    assert suit_positive_torus(3, 4).r == 5
    with pytest.raises(SuitabilityError):
        suit_positive_torus(2, 4)


def test_unknot_is_minus_one_suitable():
    c = suit_unknot()
    assert (c.expr, c.r, c.g4) == (UNKNOT, -1, 0)


def test_destab():
    c = suit_positive_torus(2, 5)
    d = suit_destab(suit_destab(c, 1), -2)
    assert d.r == -2 and d.premises == (c,)
    assert suit_destab(c, 3) is c
    with pytest.raises(SuitabilityError):
        suit_destab(c, 4)


def test_whitehead():
    c = suit_wh(suit_positive_torus(2, 3))
    assert (c.expr, c.r, c.g4) == (Wh(Torus(2, 3)), 1, 1)
    with pytest.raises(SuitabilityError):
        suit_wh(suit_unknot())


def test_sum():
    c = suit_sum(suit_positive_torus(2, 3), suit_positive_torus(2, 5))
    assert (c.r, c.g4) == (1 + 3 + 1, 3)
    assert c.expr == Sum((Torus(2, 3), Torus(2, 5)))


def test_satellite_lemma():
    base = suit_wh(suit_positive_torus(2, 3))
    c = suit_satellite(base, MAZUR, (1, 1), 0)
    assert (c.r, c.g4) == (1, 2)
    c = suit_satellite(base, MAZUR, (0, 2), 1)
    assert c.r == 1
    with pytest.raises(SuitabilityError, match="need r \\+ m"):
        suit_satellite(base, MAZUR, (2, 0), 0)


def test_satellite_conditions():
    assert satellite_conditions(MAZUR, (1, 1)) == []
    assert satellite_conditions(MAZUR, (2, 0)) == []
    assert any("no Legendrian pair" in m for m in satellite_conditions(MAZUR, (3, -1)))
    assert any("g4(P) > 0" in m for m in satellite_conditions(REG["core"], (0, 0)))
    unknown = PatternDatum("x", 1, leg_pairs=frozenset({(1, 1)}))
    assert any("not known exactly" in m for m in satellite_conditions(unknown, (1, 1)))
    w3 = PatternDatum("y", 3, g4=(1, 1), leg_pairs=frozenset({(1, 1)}))
    assert any("winding number 3" in m for m in satellite_conditions(w3, (1, 1)))


@pytest.mark.parametrize("r", range(7))
def test_topologically_slice_family(r):
    e, c = topologically_slice_rsuitable(r)
    copies = max(1, ceil_half(r + 1))
    assert c.r == r and c.g4 == copies
    store = propagate(e, REG, rs=[r], external=[suit_cert_fact(c)])
    assert store.top.g4.exact == copies


def test_consequences():
    c = suit_positive_torus(2, 5)
    got = {x.inv: x.value for x in consequences(c)}
    assert got["g4_lo"] == 2
    assert got["witness"].pair == (3, 0)
    assert got["not_slice"] == 1
    assert "not_slice" not in {x.inv for x in consequences(suit_unknot())}


def test_engine_agrees_with_certificates():
    base = suit_wh(suit_positive_torus(2, 3))
    c = suit_satellite(base, MAZUR, (1, 1), 0)
    store = propagate(Sat(Named("mazur"), 0, Wh(Torus(2, 3))), REG, rs=[0])
    assert store.top.suit[0] >= c.r
    assert store.top.g4.exact == c.g4
