import json
import random

import pytest
from hypothesis import given, settings

from shakecert.engine import ExternalFact, inject_suitability, propagate
from shakecert.expr import UNKNOT, Mirror, Named, Reverse, Sat, Sum, Torus, Wh, parse_expr
from shakecert.patterns import datum_to_json, default_registry, registry_from_json
from shakecert.trace import MOD_SPC4, ContradictionError

from corpus import CONFLUENCE_FIXTURES, CORPUS
from strategies import knots

REG = default_registry()
RS = [-2, 0, 1, 3]


def values(e, *rs):
    n = propagate(e, REG, rs=rs).top
    return n


@pytest.mark.parametrize("e", CONFLUENCE_FIXTURES, ids=str)
def test_confluence(e):
    ref = propagate(e, REG, rs=RS).snapshot()
    for seed in range(50):
        assert propagate(e, REG, rs=RS, rng=random.Random(seed)).snapshot() == ref


@pytest.mark.parametrize("e", CORPUS, ids=str)
def test_corpus_well_formed(e):
    store = propagate(e, REG, rs=RS)
    for f in store.facts.values():
        for iv in f.intervals():
            assert iv.lo is None or iv.hi is None or iv.lo <= iv.hi
            for d in (iv.lo_trace, iv.hi_trace):
                assert d is None or d.id in store.traces
        if f.tau.hi is not None and f.g4.hi is not None:
            assert f.tau.hi <= f.g4.hi
        for (t, rho) in f.wits:
            for r, iv in f.gsh.items():
                if t >= r + 1:
                    assert 2 * iv.lo - 1 >= t + abs(rho)
    assert store.sweeps <= store.iteration_bound()


def test_false_suitability_contradicts():
    with pytest.raises(ContradictionError) as info:
        propagate(UNKNOT, REG, external=[inject_suitability(UNKNOT, 1)])
    err = info.value
    assert err.lower.rule == "suitable-genus-bound"
    assert err.upper.rule == "unknot"
    assert "g4(unknot)" in err.what


def test_torus_values():
    n = values(Torus(2, 5), 0)
    assert (n.g4.exact, n.tau.exact, n.s.exact, n.gsh[0].exact, n.tb, n.arf) == (2, 2, 4, 2, 3, 1)
    for r in (-3, 0, 3):
        assert values(Torus(3, 4), r).gsh[r].exact == 3


def test_whitehead_double():
    n = values(Wh(Torus(2, 3)), 0)
    assert (n.g4.exact, n.tau.exact, n.s.exact, n.gsh[0].exact, n.arf) == (1, 1, 2, 1, 0)
    assert n.suit[0] == 1
    # the negative double of a negative knot gives nothing beyond g4 <= 1
    m = values(Wh(Mirror(Torus(2, 3))), 0)
    assert m.g4.hi == 1 and m.g4.lo == 0


def test_triple_mazur_iterate():
    e = parse_expr("(sat mazur :r 0 (sat mazur :r 0 (sat mazur :r 0 (wh (torus 2 3)))))")
    n = values(e, 0)
    assert (n.g4.exact, n.tau.exact, n.s.exact, n.gsh[0].exact) == (4, 4, 8, 4)


def test_mirror_and_reverse():
    n = values(Mirror(Torus(2, 5)), 0)
    assert (n.g4.exact, n.tau.exact, n.s.exact, n.arf) == (2, -2, -4, 1)
    # g_sh^r(K) = g_sh^{-r}(-K)
    k = Torus(3, 4)
    inv = Reverse(Mirror(k))
    for r in (-3, 3):
        assert values(inv, r).gsh[r].exact == values(k, -r).gsh[-r].exact
    assert values(Reverse(Wh(Torus(2, 3))), 0).g4.exact == 1


def test_sums():
    n = values(Sum((Torus(2, 3), Torus(2, 5))), 0)
    assert (n.g4.exact, n.tau.exact, n.tb, n.arf) == (3, 3, 5, 0)
    n = values(Sum((Torus(2, 3), Mirror(Torus(2, 3)))), 0)
    assert n.tau.exact == 0 and n.arf == 0 and n.g4.hi == 2


def test_inverse_pattern_rule_carries_caveat():
    for m in range(3):
        for r in (1, 2, 3):
            iv = values(Sat(Named(f"r{m}"), r, UNKNOT), r).gsh[r]
            assert iv.hi == 0
            assert MOD_SPC4 in iv.hi_trace.caveats


def test_slice_closure_transfer():
    n = values(Sat(Named("mazur"), 0, Torus(2, 5)), 0)
    assert n.g4.exact == 3 and n.arf == 1


def test_false_meridian_flag_is_caught():
    data = [datum_to_json(p) for p in REG]
    for obj in data:
        if obj["name"] == "mazur":
            obj["meridian_ng"] = True
    reg = registry_from_json(data)
    with pytest.raises(ContradictionError) as info:
        propagate(Sat(Named("mazur"), -1, UNKNOT), reg, rs=[-1])
    assert MOD_SPC4 in info.value.upper.caveats


def test_external_facts():
    k = Sum((Wh(Torus(2, 3)), Wh(Torus(2, 3))))
    n = propagate(k, REG, external=[ExternalFact(k, "witness", value=(3, 0))]).top
    assert n.tb == 3 and n.g4.exact == 2
    with pytest.raises(ValueError):
        propagate(UNKNOT, REG, external=[ExternalFact(UNKNOT, "colour")])
    k = Sat(Named("r1"), 0, Torus(2, 3))
    n = propagate(k, REG, external=[ExternalFact(k, "g4", value=(1, 1), caveats=("trusted",))]).top
    assert n.g4.exact == 1 and "trusted" in n.g4.caveats


def test_external_contradiction_has_two_sides():
    with pytest.raises(ContradictionError) as info:
        propagate(Torus(2, 3), REG, external=[ExternalFact(Torus(2, 3), "slice")])
    assert {info.value.lower.basis, info.value.upper.basis} >= {"external"}


def test_trace_json_is_serializable():
    store = propagate(Sat(Named("mazur"), 0, Wh(Torus(2, 3))), REG, rs=[0])
    blob = {d.id: d.to_json() for d in store.traces.by_id.values()}
    assert json.loads(json.dumps(blob)) == blob


@settings(max_examples=60, deadline=None)
@given(knots(max_leaves=5))
def test_random_expressions_are_consistent(e):
    store = propagate(e, REG, rs=[0, 1])
    assert store.sweeps <= store.iteration_bound()
    for f in store.facts.values():
        for iv in f.intervals():
            assert iv.lo is None or iv.hi is None or iv.lo <= iv.hi
        assert f.g4.lo >= 0
        for tb, rot in f.wits:
            assert (tb + rot) % 2 == 1
            if f.g4.hi is not None:
                assert tb + abs(rot) <= 2 * f.g4.hi - 1
