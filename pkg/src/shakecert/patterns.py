"""Pattern data and the pattern registry.

A registry entry records what is known about a pattern knot in the solid
torus: its winding numbers, the slice genus of the pattern (as an interval,
``None`` when unknown), Legendrian ``(tb, rot)`` pairs for the pattern, the
flags of its closure in the standard unknotted solid torus, and per-twist
data about the closures ``P_t(U)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator

from .alexander import LaurentPoly
from .expr import Compose, KnotExpr, Named, PatternRef, Twist, Unknot, parse_expr

REGISTRY_KEYS = ("name", "w", "n_geom", "g4_lo", "g4_hi", "leg_pairs",
                 "tilde_slice", "tilde_ribbon", "meridian_ng", "tilde_twists")


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class TildeKnot:
    """What is recorded about the closure ``P_t(U)`` for one twist ``t``."""

    knot: KnotExpr | None = None
    slice: bool | None = None
    ribbon: bool | None = None
    alexander: LaurentPoly | None = None


@dataclass(frozen=True)
class PatternDatum:
    name: str
    w: int
    n_geom: int | None = None
    g4: tuple[int, int] | None = None
    leg_pairs: frozenset[tuple[int, int]] = frozenset()
    tilde_slice: bool | None = None
    tilde_ribbon: bool | None = None
    meridian_ng: bool | None = None
    tilde_twists: dict[int, TildeKnot] = field(default_factory=dict, hash=False, compare=False)

    def tilde_at(self, t: int) -> TildeKnot | None:
        return self.tilde_twists.get(t)

    @property
    def g4_exact(self) -> int | None:
        if self.g4 is not None and self.g4[0] == self.g4[1]:
            return self.g4[0]
        return None

    def problems(self) -> list[str]:
        out = []
        if self.tilde_ribbon and self.tilde_slice is False:
            out.append("ribbon closure must be slice")
        if self.n_geom is not None and self.n_geom < abs(self.w):
            out.append(f"geometric winding number {self.n_geom} < |w| = {abs(self.w)}")
        if self.n_geom is not None and (self.n_geom - self.w) % 2:
            out.append(f"geometric winding number {self.n_geom} has the wrong parity for w = {self.w}")
        if self.g4 is not None and not (0 <= self.g4[0] <= self.g4[1]):
            out.append(f"bad pattern genus interval {self.g4}")
        for tb, rot in sorted(self.leg_pairs):
            same = (tb - rot) % 2 == 0
            if same != (self.w % 2 == 1):
                want = "the same parity" if self.w % 2 else "opposite parities"
                out.append(f"leg pair ({tb}, {rot}) must have {want} for w = {self.w}")
        for t, tk in sorted(self.tilde_twists.items()):
            if tk.ribbon and tk.slice is False:
                out.append(f"twist {t}: ribbon closure must be slice")
            if tk.alexander is not None and not tk.alexander.is_symmetric():
                out.append(f"twist {t}: Alexander polynomial is not symmetric")
        return out


def twist_pattern(p: PatternDatum, t: int) -> PatternDatum:
    """``P`` with ``t`` extra twists.  The pattern genus survives (a surface
    can end on any twisted longitude); Legendrian pairs do not."""
    shifted = {k - t: v for k, v in p.tilde_twists.items()}
    here = shifted.get(0)
    return replace(
        p,
        name=f"({p.name})_{t}" if t else p.name,
        leg_pairs=p.leg_pairs if t == 0 else frozenset(),
        tilde_slice=here.slice if here else None,
        tilde_ribbon=here.ribbon if here else None,
        tilde_twists=shifted,
    )


def compose_patterns(p: PatternDatum, q: PatternDatum) -> PatternDatum:
    """``P * Q``.  Only the winding number is multiplicative in general; the
    closure data is carried over where ``Q`` closes up to the unknot."""
    twists: dict[int, TildeKnot] = {}
    for t, q_closed in q.tilde_twists.items():
        if not isinstance(q_closed.knot, Unknot):
            continue
        if not (abs(q.w) == 1 or t == 0):
            continue
        p_closed = p.tilde_twists.get(t)
        if p_closed is not None:
            twists[t] = p_closed
    here = twists.get(0)
    return PatternDatum(
        name=f"{p.name}*{q.name}",
        w=p.w * q.w,
        tilde_slice=here.slice if here else None,
        tilde_ribbon=here.ribbon if here else None,
        tilde_twists=twists,
    )


class Registry:
    """Read-only mapping from pattern names to data."""

    def __init__(self, patterns):
        self._patterns: dict[str, PatternDatum] = {}
        for p in patterns:
            if p.name in self._patterns:
                raise RegistryError(f"duplicate pattern {p.name!r}")
            self._patterns[p.name] = p

    def __contains__(self, name: str) -> bool:
        return name in self._patterns

    def __getitem__(self, name: str) -> PatternDatum:
        try:
            return self._patterns[name]
        except KeyError:
            raise RegistryError(f"unknown pattern {name!r}") from None

    def __iter__(self) -> Iterator[PatternDatum]:
        return iter(sorted(self._patterns.values(), key=lambda p: p.name))

    def __len__(self) -> int:
        return len(self._patterns)

    def resolve(self, ref: PatternRef) -> PatternDatum:
        if isinstance(ref, Named):
            return self[ref.name]
        if isinstance(ref, Twist):
            return twist_pattern(self.resolve(ref.ref), ref.t)
        assert isinstance(ref, Compose)
        return compose_patterns(self.resolve(ref.outer), self.resolve(ref.inner))

    def problems(self) -> dict[str, list[str]]:
        return {p.name: p.problems() for p in self if p.problems()}


# --------------------------------------------------------------------------
# JSON


def _poly_from_json(obj) -> LaurentPoly | None:
    if obj is None:
        return None
    return LaurentPoly.from_dict({int(k): int(v) for k, v in obj.items()})


def datum_from_json(obj: dict) -> PatternDatum:
    keys = set(obj)
    if keys != set(REGISTRY_KEYS):
        missing = sorted(set(REGISTRY_KEYS) - keys)
        extra = sorted(keys - set(REGISTRY_KEYS))
        raise RegistryError(f"pattern {obj.get('name')!r}: missing keys {missing}, unexpected keys {extra}")
    lo, hi = obj["g4_lo"], obj["g4_hi"]
    if (lo is None) != (hi is None):
        raise RegistryError(f"pattern {obj['name']!r}: g4_lo and g4_hi must both be set or both null")
    twists = {}
    for t, entry in (obj["tilde_twists"] or {}).items():
        knot = entry.get("knot")
        twists[int(t)] = TildeKnot(
            knot=parse_expr(knot, None) if knot is not None else None,
            slice=entry.get("slice"),
            ribbon=entry.get("ribbon"),
            alexander=_poly_from_json(entry.get("alexander")),
        )
    datum = PatternDatum(
        name=obj["name"],
        w=int(obj["w"]),
        n_geom=obj["n_geom"],
        g4=None if lo is None else (int(lo), int(hi)),
        leg_pairs=frozenset((int(a), int(b)) for a, b in (obj["leg_pairs"] or [])),
        tilde_slice=obj["tilde_slice"],
        tilde_ribbon=obj["tilde_ribbon"],
        meridian_ng=obj["meridian_ng"],
        tilde_twists=twists,
    )
    return datum


def datum_to_json(p: PatternDatum) -> dict:
    return {
        "name": p.name,
        "w": p.w,
        "n_geom": p.n_geom,
        "g4_lo": None if p.g4 is None else p.g4[0],
        "g4_hi": None if p.g4 is None else p.g4[1],
        "leg_pairs": [list(x) for x in sorted(p.leg_pairs)],
        "tilde_slice": p.tilde_slice,
        "tilde_ribbon": p.tilde_ribbon,
        "meridian_ng": p.meridian_ng,
        "tilde_twists": {
            str(t): {
                "knot": None if tk.knot is None else str(tk.knot),
                "slice": tk.slice,
                "ribbon": tk.ribbon,
                "alexander": None if tk.alexander is None
                else {str(e): c for e, c in tk.alexander.terms},
            }
            for t, tk in sorted(p.tilde_twists.items())
        },
    }


def load_registry(path: str | Path, validate: bool = True) -> Registry:
    with open(path) as fh:
        data = json.load(fh)
    return registry_from_json(data, validate)


def registry_from_json(data, validate: bool = True) -> Registry:
    if not isinstance(data, list):
        raise RegistryError("registry file must hold a JSON list of pattern objects")
    reg = Registry(datum_from_json(obj) for obj in data)
    if validate:
        bad = reg.problems()
        if bad:
            lines = [f"{name}: {msg}" for name, msgs in bad.items() for msg in msgs]
            raise RegistryError("invalid registry:\n  " + "\n  ".join(lines))
    return reg


DEFAULT_REGISTRY_FILE = "patterns.json"


@lru_cache(maxsize=None)
def default_registry() -> Registry:
    text = resources.files("shakecert").joinpath("data").joinpath(DEFAULT_REGISTRY_FILE).read_text()
    return registry_from_json(json.loads(text))
