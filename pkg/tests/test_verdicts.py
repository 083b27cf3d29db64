import pytest

from shakecert.expr import UNKNOT, Named, Sat, Sum, Torus, Wh, parse_expr
from shakecert.patterns import datum_to_json, default_registry, registry_from_json
from shakecert.verdicts import (
    CERTIFIED, CERTIFIED_MOD_SPC4, NO, UNKNOWN, Characterization, FamilyHypothesisError,
    audit_meridian_flags, family_row, family_table, iterate, shake_slice_verdict,
)

REG = default_registry()
BASE = Wh(Torus(2, 3))


@pytest.mark.parametrize("r", range(-5, 6))
def test_trefoil_never_shake_slice(r):
    v, store = shake_slice_verdict(Torus(2, 3), r)
    assert v.kind == NO
    assert "Arf invariant is 1" in v.reasons
    assert all(t in store.traces for t in v.traces)


def test_tau_blocks_zero_shake_slice():
    for p in ("core", "mazur", "r0", "r1", "r2"):
        v, _ = shake_slice_verdict(Sat(Named(p), 0, Torus(2, 5)), 0)
        assert v.kind == NO
        assert any("tau" in reason for reason in v.reasons), p


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_spc4_family(m, r):
    v, _ = shake_slice_verdict(Sat(Named(f"r{m}"), r, UNKNOT), r)
    assert v.kind == CERTIFIED_MOD_SPC4


def test_certified_and_unknown():
    assert shake_slice_verdict(UNKNOT, 4)[0].kind == CERTIFIED
    # K # -K is slice, but no rule here says so
    assert shake_slice_verdict(Sum((Torus(2, 3), parse_expr("(mirror (torus 2 3))"))), 0)[0].kind == UNKNOWN
    # a topologically slice double with nothing decisive at r = -3
    v, _ = shake_slice_verdict(Wh(parse_expr("(mirror (torus 2 3))")), -3)
    assert v.kind == UNKNOWN and str(v) == UNKNOWN


def test_characterization():
    k = Wh(parse_expr("(mirror (torus 2 3))"))
    v, _ = shake_slice_verdict(k, 2, characterization=Characterization("mazur"))
    assert v.kind == CERTIFIED
    v, _ = shake_slice_verdict(k, 2, characterization=Characterization("mazur", caveats=("mod SPC4",)))
    assert v.kind == CERTIFIED_MOD_SPC4
    data = [datum_to_json(p) for p in REG]
    for obj in data:
        obj["tilde_ribbon"] = False
    with pytest.raises(ValueError, match="ribbon"):
        shake_slice_verdict(k, 2, registry_from_json(data), characterization=Characterization("mazur"))


@pytest.mark.parametrize("r", [-3, -2, -1, 0, 1])
def test_mazur_table_closed_form_matches_per_term(r):
    t = family_table("mazur", BASE, r, 5)
    assert t.closed_form
    for row in t.rows:
        assert row.g4 == (1 + row.i,) * 2
        assert row.tau == (1 + row.i,) * 2
        assert row.s == (2 + 2 * row.i,) * 2
        if r <= 0:
            assert row.gsh == (1 + row.i,) * 2
        direct = family_row("mazur", BASE, r, row.i)
        assert (direct.g4, direct.tau, direct.s) == (row.g4, row.tau, row.s)
        if row.gsh is not None:
            assert direct.gsh == row.gsh


def test_table_csv():
    t = family_table("mazur", BASE, 0, 2)
    assert t.to_csv() == "i,g4,tau,s,gsh_r,caveats\n0,1,1,2,1,\n1,2,2,4,2,\n2,3,3,6,3,\n"


def test_table_fallback_and_strict():
    with pytest.raises(FamilyHypothesisError, match="g4\\(P\\) > 0"):
        family_table("core", BASE, 0, 2, fallback=False)
    with pytest.raises(FamilyHypothesisError, match="no Legendrian pairs"):
        family_table("r1", BASE, 0, 2, fallback=False)
    t = family_table("r1", BASE, 0, 1)
    assert not t.closed_form and t.diagnostics
    assert t.rows[0].g4 == (1, 1)
    # base only 1-suitable: r = 2 is outside the lemma
    t = family_table("mazur", BASE, 1, 1)
    assert t.closed_form and t.rows[1].g4 == (2, 2) and t.rows[1].gsh is None
    t = family_table("mazur", BASE, 2, 1)
    assert not t.closed_form
    assert any("need r + m" in d for d in t.diagnostics)


def test_iterate():
    assert iterate("mazur", UNKNOT, 3, 2) == Sat(Named("mazur"), 3, Sat(Named("mazur"), 3, UNKNOT))
    assert iterate("mazur", UNKNOT, 3, 0) == UNKNOT


def test_meridian_audit():
    assert audit_meridian_flags(REG) == []
    data = [datum_to_json(p) for p in REG]
    for obj in data:
        if obj["name"] == "mazur":
            obj["meridian_ng"] = True
    found = audit_meridian_flags(registry_from_json(data))
    assert found and all(msg.startswith("mazur") for msg in found)
