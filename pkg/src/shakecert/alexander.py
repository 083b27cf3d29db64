"""Alexander polynomials of expressions and the Arf invariant read off them.

The Arf invariant is 0 exactly when the Alexander polynomial evaluated at -1
is congruent to +-1 modulo 8 (Murasugi/Levine).  Untwisted Whitehead doubles
have trivial Alexander polynomial, and a satellite with winding number +-1
multiplies the companion's polynomial by that of the pattern closed up in the
same framing.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

from .expr import KnotExpr, Mirror, Reverse, Sat, Sum, Torus, Unknot, Wh

if TYPE_CHECKING:
    from .patterns import Registry


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial, stored as sorted ``(exponent, coeff)`` pairs."""

    terms: tuple[tuple[int, int], ...]

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, int]) -> "LaurentPoly":
        return cls(tuple(sorted((int(k), int(v)) for k, v in coeffs.items() if v)))

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(((0, 1),))

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        out: dict[int, int] = {}
        for a, x in self.terms:
            for b, y in other.terms:
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly.from_dict(out)

    def __call__(self, t: int) -> int:
        # only used at t = +-1, where negative powers are harmless
        return sum(c * (t ** e if e >= 0 else t ** (-e)) for e, c in self.terms)

    def normalized(self) -> "LaurentPoly":
        """Shift to be symmetric about exponent 0 and fix the sign so that
        the value at 1 is positive."""
        if not self.terms:
            return self
        lo, hi = self.terms[0][0], self.terms[-1][0]
        if (lo + hi) % 2:
            raise ValueError(f"{self} cannot be centred: odd exponent span")
        shift = -(lo + hi) // 2
        sign = -1 if self(1) < 0 else 1
        return LaurentPoly(tuple((e + shift, sign * c) for e, c in self.terms))

    def is_symmetric(self) -> bool:
        d = self.as_dict()
        return all(d.get(-e) == c for e, c in d.items())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in reversed(self.terms):
            mono = "" if e == 0 else ("t" if e == 1 else f"t^{e}")
            coef = str(c) if (mono == "" or abs(c) != 1) else ("-" if c < 0 else "")
            parts.append(coef + mono)
        return " + ".join(parts).replace("+ -", "- ")


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (lowest degree first), ``den`` monic."""
    num = list(num)
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    quot = [0] * (len(num) - len(den) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = num[i + len(den) - 1]
        quot[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        raise ValueError("division is not exact")
    return quot


def _t_power_minus_one(n: int) -> list[int]:
    return [-1] + [0] * (n - 1) + [1]


def _polymul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def torus_alexander(p: int, q: int) -> LaurentPoly:
    num = _polymul(_t_power_minus_one(p * q), _t_power_minus_one(1))
    den = _polymul(_t_power_minus_one(p), _t_power_minus_one(q))
    quot = _poly_divexact(num, den)
    return LaurentPoly.from_dict(dict(enumerate(quot))).normalized()


def alexander(e: KnotExpr, registry: "Registry") -> LaurentPoly | None:
    """Alexander polynomial, or ``None`` when no formula applies."""
    if isinstance(e, Unknot) or isinstance(e, Wh):
        return LaurentPoly.one()
    if isinstance(e, Torus):
        return torus_alexander(e.p, e.q)
    if isinstance(e, (Mirror, Reverse)):
        return alexander(e.knot, registry)
    if isinstance(e, Sum):
        out = LaurentPoly.one()
        for s in e.summands:
            d = alexander(s, registry)
            if d is None:
                return None
            out = out * d
        return out
    assert isinstance(e, Sat)
    pattern = registry.resolve(e.pattern)
    if abs(pattern.w) != 1:
        return None
    closed = pattern.tilde_at(e.r)
    if closed is None or closed.alexander is None:
        return None
    companion = alexander(e.companion, registry)
    if companion is None:
        return None
    return (closed.alexander * companion).normalized()


def arf_from_alexander(delta: LaurentPoly) -> int:
    return 0 if delta(-1) % 8 in (1, 7) else 1


def arf(e: KnotExpr, registry: "Registry") -> int | None:
    """Arf invariant: 0, 1, or ``None`` when unknown."""
    delta = alexander(e, registry)
    if delta is not None:
        return arf_from_alexander(delta)
    if isinstance(e, (Mirror, Reverse)):
        return arf(e.knot, registry)
    if isinstance(e, Sum):
        values = [arf(s, registry) for s in e.summands]
        if None in values:
            return None
        return sum(values) % 2
    return None
