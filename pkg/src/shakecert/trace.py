"""Derivation traces and traced integer intervals."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable

MOD_SPC4 = "mod SPC4"

# rule classes
AXIOM = "axiom"
RULE = "rule"
BACKGROUND = "standard-background"
EXTERNAL = "external"


@dataclass(frozen=True, eq=False)
class Derivation:
    """One step of a proof: a rule applied to earlier steps."""

    id: str
    rule: str
    statement: str
    premises: tuple["Derivation", ...] = ()
    basis: str = RULE
    caveats: frozenset[str] = frozenset()

    def walk(self) -> list["Derivation"]:
        """This step and all its ancestors, premises first, without repeats."""
        seen: dict[str, Derivation] = {}

        def go(d):
            if d.id in seen:
                return
            for p in d.premises:
                go(p)
            seen[d.id] = d

        go(self)
        return list(seen.values())

    def render(self, indent: int = 0, _seen=None) -> str:
        seen = set() if _seen is None else _seen
        pad = "  " * indent
        tag = f" [{', '.join(sorted(self.caveats))}]" if self.caveats else ""
        head = f"{pad}{self.id}: {self.statement}  <{self.rule}; {self.basis}>{tag}"
        if self.id in seen:
            return head + " (see above)" if self.premises else head
        seen.add(self.id)
        lines = [head] + [p.render(indent + 1, seen) for p in self.premises]
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "statement": self.statement,
            "premises": [p.id for p in self.premises],
            "basis": self.basis,
            "caveats": sorted(self.caveats),
        }


class TraceTable:
    """Issues derivation ids ``t1, t2, ...`` in creation order."""

    def __init__(self):
        self._counter = itertools.count(1)
        self.by_id: dict[str, Derivation] = {}

    def derive(self, rule: str, statement: str, premises: Iterable[Derivation] = (),
               basis: str = RULE, caveats: Iterable[str] = ()) -> Derivation:
        premises = tuple(premises)
        cav = frozenset(caveats).union(*(p.caveats for p in premises))
        d = Derivation(f"t{next(self._counter)}", rule, statement, premises, basis, cav)
        self.by_id[d.id] = d
        return d

    def __getitem__(self, key: str) -> Derivation:
        return self.by_id[key]

    def __contains__(self, key: str) -> bool:
        return key in self.by_id


class ContradictionError(Exception):
    def __init__(self, what: str, lower: Derivation | None, upper: Derivation | None):
        self.what = what
        self.lower = lower
        self.upper = upper
        parts = [f"contradiction: {what}"]
        for label, d in (("lower bound", lower), ("upper bound", upper)):
            if d is not None:
                parts.append(f"  {label} {d.id}: {d.statement} <{d.rule}>")
        super().__init__("\n".join(parts))


Thunk = Callable[[], Derivation]


@dataclass
class Interval:
    """Integer interval; ``None`` endpoints are infinite.  Endpoints only move
    inward, and each move records the derivation that justified it."""

    name: str
    lo: int | None = None
    hi: int | None = None
    lo_trace: Derivation | None = field(default=None, repr=False)
    hi_trace: Derivation | None = field(default=None, repr=False)

    @property
    def exact(self) -> int | None:
        return self.lo if self.lo is not None and self.lo == self.hi else None

    def contains(self, v: int) -> bool:
        return (self.lo is None or self.lo <= v) and (self.hi is None or v <= self.hi)

    def width(self) -> int | None:
        if self.lo is None or self.hi is None:
            return None
        return self.hi - self.lo

    def raise_lo(self, v: int | None, why: Thunk) -> bool:
        if v is None or (self.lo is not None and v <= self.lo):
            return False
        self.lo, self.lo_trace = v, why()
        self._check()
        return True

    def lower_hi(self, v: int | None, why: Thunk) -> bool:
        if v is None or (self.hi is not None and v >= self.hi):
            return False
        self.hi, self.hi_trace = v, why()
        self._check()
        return True

    def _check(self):
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ContradictionError(f"{self.name} has lower bound {self.lo} above upper bound {self.hi}",
                                     self.lo_trace, self.hi_trace)

    @property
    def caveats(self) -> frozenset[str]:
        out = frozenset()
        for d in (self.lo_trace, self.hi_trace):
            if d is not None:
                out |= d.caveats
        return out

    def values(self) -> tuple[int | None, int | None]:
        return (self.lo, self.hi)

    def __str__(self) -> str:
        if self.exact is not None:
            return f"= {self.exact}"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "+inf" if self.hi is None else str(self.hi)
        return f"∈ [{lo}, {hi}]"
