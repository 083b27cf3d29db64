"""Symbolic (tb, rot) arithmetic for Legendrian representatives."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable


class ParityError(ValueError):
    """A (tb, rot) pair with tb + rot even: not a Legendrian knot."""


@dataclass(frozen=True, order=True)
class LegWitness:
    tb: int
    rot: int
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        if (self.tb + self.rot) % 2 == 0:
            raise ParityError(f"internal error: witness ({self.tb}, {self.rot}) has tb + rot even")

    @property
    def pair(self) -> tuple[int, int]:
        return (self.tb, self.rot)

    def __str__(self) -> str:
        return f"({self.tb}, {self.rot})"


UNKNOT_WITNESS = LegWitness(-1, 0, "standard unknot")


def stabilize(wit: LegWitness, sign: str) -> LegWitness:
    if sign not in ("+", "-"):
        raise ValueError(f"stabilization sign must be '+' or '-', got {sign!r}")
    step = 1 if sign == "+" else -1
    return LegWitness(wit.tb - 1, wit.rot + step, wit.provenance)


def reachable(wit: LegWitness | tuple[int, int], target: tuple[int, int]) -> bool:
    """Whether ``target`` is obtained from ``wit`` by stabilizations."""
    tb, rot = wit.pair if isinstance(wit, LegWitness) else wit
    t2, r2 = target
    drop = tb - t2
    return drop >= 0 and abs(r2 - rot) <= drop and (r2 - rot - drop) % 2 == 0


def stabilize_to(wit: LegWitness, tb: int) -> list[LegWitness]:
    """The two extreme witnesses at the lower ``tb`` (largest and smallest
    rotation); one element when they coincide, empty when ``tb`` is too high."""
    drop = wit.tb - tb
    if drop < 0:
        return []
    out = {LegWitness(tb, wit.rot + drop, wit.provenance), LegWitness(tb, wit.rot - drop, wit.provenance)}
    return sorted(out)


def connect_sum_witness(a: LegWitness, b: LegWitness) -> LegWitness:
    return LegWitness(a.tb + b.tb + 1, a.rot + b.rot)


def satellite_witness(p: tuple[int, int], w: int, k: LegWitness) -> LegWitness:
    """Legendrian satellite of ``k`` by a pattern diagram with pair ``p``.

    The result represents the ``k.tb``-twisted satellite, so callers
    stabilize ``k`` to the wanted twist first."""
    if w != 1:
        raise ValueError(f"unsupported winding number {w}: only winding number one has a rule")
    tb, rot = p[0] + k.tb, p[1] + k.rot
    if (tb + rot) % 2 == 0:
        raise ParityError(f"pattern pair {p} on {k} gives ({tb}, {rot}), which fails the parity check")
    return LegWitness(tb, rot)


def reverse_witness(wit: LegWitness) -> LegWitness:
    return LegWitness(wit.tb, -wit.rot, wit.provenance)


def mirror_witness(wit: LegWitness) -> None:
    # no rule relates Legendrian representatives of a knot and its mirror
    return None


def wh_witness(companion_wits: Iterable[LegWitness]) -> LegWitness | None:
    if any(w.tb >= 0 for w in companion_wits):
        return LegWitness(1, 0)
    return None


def dominates(a: LegWitness, b: LegWitness) -> bool:
    return reachable(a, b.pair)


def pareto(wits: Iterable[LegWitness]) -> list[LegWitness]:
    """Drop every witness reachable from another one.  Ties keep the first seen."""
    kept: list[LegWitness] = []
    for w in wits:
        if any(dominates(k, w) for k in kept):
            continue
        kept = [k for k in kept if not dominates(w, k)]
        kept.append(w)
    return sorted(kept, key=lambda w: (-w.tb, -abs(w.rot), w.rot))
