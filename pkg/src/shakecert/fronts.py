"""Legendrian front diagrams as words of cusp and crossing events.

A front is read left to right.  The current strands are stacked in slots
counted from the bottom.  Events:

* ``L i``  a left cusp is born with ``i`` strands below it (two new strands);
* ``R i``  strands ``i`` and ``i+1`` (1-based) meet in a right cusp;
* ``X i``  strands ``i`` and ``i+1`` cross.

Each strand runs from a left cusp to a right cusp, so a front is a graph on
cusps with strands as edges.  A valid front has one cycle.  Orientation is
fixed by sending the lower strand of the first left cusp rightward; ``flip``
reverses it.

Conventions, calibrated so that the positive trefoil front has tb = 1:
a crossing is positive when both strands travel in the same horizontal
direction; ``tb = writhe - #right cusps``; ``rot = (D - U) / 2`` where a cusp is
``D`` when it is traversed from its upper branch to its lower branch.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources

Event = tuple[str, int]


class FrontError(ValueError):
    pass


@dataclass(frozen=True)
class _Trace:
    # event index where each strand is born and where it dies
    birth: tuple[int, ...]
    death: tuple[int, ...]
    crossings: tuple[tuple[int, int], ...]  # (lower strand, upper strand) per X event
    left_cusps: tuple[tuple[int, int], ...]  # (lower strand, upper strand) per L event
    right_cusps: tuple[tuple[int, int], ...]  # (lower strand, upper strand) per R event
    slots: tuple[tuple[int, ...], ...]  # strand ids in each gap before event k


def _trace(events: tuple[Event, ...]) -> _Trace:
    strands: list[int] = []
    birth: list[int] = []
    death: list[int] = []
    crossings, lefts, rights, slots = [], [], [], []
    for k, (kind, i) in enumerate(events):
        slots.append(tuple(strands))
        n = len(strands)
        if kind == "L":
            if not 0 <= i <= n:
                raise FrontError(f"event {k} (L {i}): index out of range with {n} strands")
            lo, hi = len(birth), len(birth) + 1
            birth += [k, k]
            death += [-1, -1]
            strands[i:i] = [lo, hi]
            lefts.append((lo, hi))
        elif kind in ("R", "X"):
            if not 1 <= i <= n - 1:
                raise FrontError(f"event {k} ({kind} {i}): index out of range with {n} strands")
            a, b = strands[i - 1], strands[i]
            if kind == "R":
                death[a] = death[b] = k
                del strands[i - 1:i + 1]
                rights.append((a, b))
            else:
                strands[i - 1], strands[i] = b, a
                crossings.append((a, b))
        else:
            raise FrontError(f"event {k}: unknown event kind {kind!r}")
    slots.append(tuple(strands))
    if strands:
        raise FrontError(f"strand count ends at {len(strands)}, expected 0")
    if not events:
        raise FrontError("empty front")
    return _Trace(tuple(birth), tuple(death), tuple(crossings), tuple(lefts), tuple(rights), tuple(slots))


def _directions(tr: _Trace) -> tuple[list[int], int]:
    """Direction (+1 rightward, -1 leftward) of every strand reached from the
    seed, and the number of components."""
    n = len(tr.birth)
    left_mate = {}
    for lo, hi in tr.left_cusps:
        left_mate[lo], left_mate[hi] = hi, lo
    right_mate = {}
    for lo, hi in tr.right_cusps:
        right_mate[lo], right_mate[hi] = hi, lo
    direction = [0] * n
    components = 0
    for start in range(n):
        if direction[start]:
            continue
        components += 1
        # start on the lower strand of a left cusp, heading right
        s = start if left_mate[start] > start else left_mate[start]
        d = 1
        while not direction[s]:
            direction[s] = d
            if d == 1:
                s, d = right_mate[s], -1
            else:
                s, d = left_mate[s], 1
    return direction, components


@dataclass(frozen=True)
class OrientedFront:
    events: tuple[Event, ...]
    flip: bool = False
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        tr = _trace(self.events)
        dirs, comps = _directions(tr)
        if comps != 1:
            raise FrontError(f"front has {comps} components, expected 1")
        self._cache["trace"] = tr
        self._cache["dirs"] = [-d for d in dirs] if self.flip else dirs

    @property
    def trace(self) -> _Trace:
        return self._cache["trace"]

    @property
    def directions(self) -> list[int]:
        return self._cache["dirs"]

    def reversed(self) -> "OrientedFront":
        return OrientedFront(self.events, not self.flip)

    def reflected(self) -> "OrientedFront":
        """Mirror the front left to right (a rotation of R^3 preserving the
        contact structure); the orientation is carried along."""
        events = []
        for kind, i in reversed(self.events):
            if kind == "L":
                events.append(("R", i + 1))
            elif kind == "R":
                events.append(("L", i - 1))
            else:
                events.append((kind, i))
        out = OrientedFront(tuple(events))
        # strand directions reverse under the reflection; compare one strand
        first_lower = out.trace.left_cusps[0][0]
        # the first left cusp of the reflection is our last right cusp
        ours = self.trace.right_cusps[-1][0]
        want = -self.directions[ours]
        return out if out.directions[first_lower] == want else out.reversed()

    @cached_property
    def writhe(self) -> int:
        d = self.directions
        return sum(1 if d[a] == d[b] else -1 for a, b in self.trace.crossings)

    @cached_property
    def cusp_counts(self) -> tuple[int, int]:
        d = self.directions
        down = up = 0
        for lo, _hi in self.trace.left_cusps:
            if d[lo] == 1:
                down += 1
            else:
                up += 1
        for _lo, hi in self.trace.right_cusps:
            if d[hi] == 1:
                down += 1
            else:
                up += 1
        return down, up

    def tb_rot(self) -> tuple[int, int]:
        down, up = self.cusp_counts
        return self.writhe - len(self.trace.right_cusps), (down - up) // 2

    def to_text(self) -> str:
        return "\n".join(f"{k} {i}" for k, i in self.events) + "\n"


def validate(events) -> OrientedFront:
    return OrientedFront(tuple((str(k), int(i)) for k, i in events))


def tb_rot(f: OrientedFront) -> tuple[int, int]:
    return f.tb_rot()


def parse_front(text: str) -> OrientedFront:
    events = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("L", "R", "X"):
            raise FrontError(f"line {lineno}: expected 'L i', 'R i' or 'X i', got {line!r}")
        try:
            events.append((parts[0], int(parts[1])))
        except ValueError:
            raise FrontError(f"line {lineno}: bad index {parts[1]!r}") from None
    return validate(events)


# --------------------------------------------------------------------------
# builders


def unknot_front() -> OrientedFront:
    return validate([("L", 0), ("R", 1)])


def torus_front(p: int, q: int) -> OrientedFront:
    """Front of the positive ``(p, q)`` torus knot: ``p`` nested left cusps,
    the braid ``(s_1 ... s_{p-1})^q`` on the lower strands, ``p`` right cusps."""
    events: list[Event] = [("L", i) for i in range(p)]
    events += [("X", i) for i in range(1, p)] * q
    events += [("R", i) for i in range(p, 0, -1)]
    return validate(events)


def rht_front() -> OrientedFront:
    return torus_front(2, 3)


FIXTURES = ("unknot", "rht", "t25", "t34", "stab_rht")


def fixture_front(name: str) -> OrientedFront:
    path = resources.files("shakecert").joinpath("data").joinpath("fronts").joinpath(f"{name}.front")
    return parse_front(path.read_text())


def stabilize_front(f: OrientedFront, sign: str, segment: tuple[int, int]) -> OrientedFront:
    """Insert a zigzag in the strand at ``segment = (k, j)``: slot ``j``
    (0-based from the bottom) in the gap just before event ``k``."""
    k, j = segment
    slots = f.trace.slots
    if not 0 <= k < len(slots) or not 0 <= j < len(slots[k]):
        raise FrontError(f"no strand at gap {k}, slot {j}")
    if sign not in ("+", "-"):
        raise ValueError(f"stabilization sign must be '+' or '-', got {sign!r}")
    rightward = f.directions[slots[k][j]] == 1
    below = (sign == "+") == rightward
    # the zigzag's two new strands go below or above strand j
    zig = [("L", j), ("R", j + 2)] if below else [("L", j + 1), ("R", j + 1)]
    events = f.events[:k] + tuple(zig) + f.events[k:]
    out = OrientedFront(events)
    # k >= 1, so the first left cusp (strands 0 and 1) is shared
    return out if out.directions[0] == f.directions[0] else out.reversed()


def _splice(f1: OrientedFront, f2: OrientedFront) -> OrientedFront | None:
    """``f1`` without its final right cusp followed by ``f2`` without its first
    left cusp, if the orientations agree on the joined strands."""
    if f1.events[-1] != ("R", 1) or f2.events[0] != ("L", 0):
        return None
    end_lower = f1.trace.right_cusps[-1][0]
    start_lower = f2.trace.left_cusps[0][0]
    if f1.directions[end_lower] != f2.directions[start_lower]:
        return None
    out = OrientedFront(f1.events[:-1] + f2.events[1:])
    first = f1.trace.left_cusps[0][0]
    return out if out.directions[first] == f1.directions[first] else out.reversed()


def connect_sum_front(f1: OrientedFront, f2: OrientedFront) -> tuple[OrientedFront, OrientedFront, OrientedFront]:
    """Oriented connected sum.  Returns ``(sum, g1, g2)`` where ``g1``, ``g2``
    are the oriented fronts actually spliced: reflections of the inputs when
    needed, and as a last resort ``f2`` with reversed orientation."""
    for g1 in (f1, f1.reflected()):
        for g2 in (f2, f2.reflected()):
            out = _splice(g1, g2)
            if out is not None:
                return out, g1, g2
    g2 = f2.reversed()
    out = _splice(f1, g2)
    assert out is not None
    return out, f1, g2


def random_front(seed: int, size: int, max_tries: int = 10_000) -> OrientedFront:
    """A random single-component front with ``size`` left cusps."""
    if size < 1:
        raise ValueError("size must be >= 1")
    rng = random.Random(seed)
    for _ in range(max_tries):
        events: list[Event] = []
        n = 0
        births = 0
        while births < size or n:
            choices = []
            if births < size:
                choices += ["L"] * 2
            if n >= 2:
                choices += ["R"] * (3 if births >= size else 1) + ["X"] * 2
            kind = rng.choice(choices)
            if kind == "L":
                events.append(("L", rng.randint(0, n)))
                n += 2
                births += 1
            elif kind == "R":
                events.append(("R", rng.randint(1, n - 1)))
                n -= 2
            else:
                events.append(("X", rng.randint(1, n - 1)))
        try:
            return validate(events)
        except FrontError:
            continue
    raise RuntimeError(f"no single-component front found for seed {seed}")


def audit_front(f: OrientedFront, partner: OrientedFront | None = None) -> list[str]:
    """Check a front against the witness calculus: parity, every
    stabilization, and the connected sum with ``partner`` (the unknot if
    omitted).  Returns the failures."""
    tb, rot = f.tb_rot()
    bad = []
    if (tb + rot) % 2 == 0:
        bad.append(f"tb + rot = {tb + rot} is even")
    for k, slots in enumerate(f.trace.slots):
        for j in range(len(slots)):
            for sign, step in (("+", 1), ("-", -1)):
                got = stabilize_front(f, sign, (k, j)).tb_rot()
                if got != (tb - 1, rot + step):
                    bad.append(f"stabilization {sign} at ({k}, {j}) gave {got}, expected {(tb - 1, rot + step)}")
    partner = unknot_front() if partner is None else partner
    total, g1, g2 = connect_sum_front(f, partner)
    (t1, r1), (t2, r2) = g1.tb_rot(), g2.tb_rot()
    if total.tb_rot() != (t1 + t2 + 1, r1 + r2):
        bad.append(f"connected sum gave {total.tb_rot()}, expected {(t1 + t2 + 1, r1 + r2)}")
    return bad
