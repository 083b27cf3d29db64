from collections import deque

import pytest
from hypothesis import given, strategies as st

from shakecert.legendrian import (
    UNKNOT_WITNESS, LegWitness, ParityError, connect_sum_witness, dominates, pareto, reachable,
    reverse_witness, satellite_witness, stabilize, stabilize_to, wh_witness,
)

BOX = 6


def bfs_reachable(start):
    """Everything reachable by explicit stabilizations inside the box."""
    seen = {start}
    todo = deque([start])
    while todo:
        tb, rot = todo.popleft()
        for step in (1, -1):
            nxt = (tb - 1, rot + step)
            if abs(nxt[0]) <= BOX and abs(nxt[1]) <= BOX and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def legal(tb, rot):
    return (tb + rot) % 2 == 1


BOX_PAIRS = [(tb, rot) for tb in range(-BOX, BOX + 1) for rot in range(-BOX, BOX + 1) if legal(tb, rot)]


@pytest.mark.parametrize("start", BOX_PAIRS[::5])
def test_reachable_matches_bfs(start):
    oracle = bfs_reachable(start)
    for target in BOX_PAIRS:
        assert reachable(start, target) == (target in oracle), (start, target)


def test_stabilize():
    assert stabilize(LegWitness(1, 0), "+").pair == (0, 1)
    assert stabilize(LegWitness(1, 0), "-").pair == (0, -1)
    assert stabilize(UNKNOT_WITNESS, "+").pair == (-2, 1)
    with pytest.raises(ValueError):
        stabilize(UNKNOT_WITNESS, "*")


def test_parity_enforced():
    with pytest.raises(ParityError):
        LegWitness(1, 1)
    with pytest.raises(ParityError):
        satellite_witness((1, 0), 1, LegWitness(1, 0))


witnesses = st.tuples(st.integers(-10, 10), st.integers(-10, 10)).filter(lambda p: legal(*p)).map(
    lambda p: LegWitness(*p))


@given(witnesses, witnesses)
def test_connected_sum_keeps_parity(a, b):
    c = connect_sum_witness(a, b)
    assert c.pair == (a.tb + b.tb + 1, a.rot + b.rot)
    assert connect_sum_witness(UNKNOT_WITNESS, a).pair == a.pair


@given(witnesses, st.integers(0, 5))
def test_stabilize_to_extremes(w, drop):
    got = stabilize_to(w, w.tb - drop)
    assert {x.rot for x in got} == {w.rot + drop, w.rot - drop}
    assert all(reachable(w, x.pair) for x in got)
    assert stabilize_to(w, w.tb + 1) == []


def test_satellite_rule():
    # mazur pair (1, 1) on the trefoil stabilized to tb = 0
    k = stabilize(LegWitness(1, 0), "-")
    assert satellite_witness((1, 1), 1, k).pair == (1, 0)
    with pytest.raises(ValueError, match="winding number"):
        satellite_witness((1, 0), 2, k)


def test_reverse_and_whitehead():
    assert reverse_witness(LegWitness(0, 3)).pair == (0, -3)
    assert wh_witness([LegWitness(0, 1)]).pair == (1, 0)
    assert wh_witness([UNKNOT_WITNESS]) is None


def test_pareto():
    ws = [LegWitness(1, 0), LegWitness(0, 1), LegWitness(-3, 4), LegWitness(-1, 4)]
    kept = pareto(ws)
    assert [w.pair for w in kept] == [(1, 0), (-1, 4)]
    assert dominates(LegWitness(1, 0), LegWitness(-1, 0))
    assert not dominates(LegWitness(-1, 0), LegWitness(1, 0))
