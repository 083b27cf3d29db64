"""r-suitability certificates.

A knot is r-suitable when it has a Legendrian representative with
``tb = r`` and ``rot = 2 g4 - 1 - r``.  Certificates are built only by the
constructions below (or supplied externally); a missing certificate never
means "not suitable".
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .expr import KnotExpr, Named, Sat, Torus, Wh, make_sum
from .legendrian import LegWitness
from .patterns import PatternDatum


class SuitabilityError(ValueError):
    pass


@dataclass(frozen=True)
class SuitCert:
    expr: KnotExpr
    r: int
    g4: int | None
    rule: str
    premises: tuple["SuitCert", ...] = ()
    provenance: str = "derived"

    def __str__(self) -> str:
        g = "" if self.g4 is None else f", g4 = {self.g4}"
        return f"{self.expr} is {self.r}-suitable{g} <{self.rule}>"

    def depth(self) -> int:
        return 1 + max((p.depth() for p in self.premises), default=0)

    def leaves(self) -> list["SuitCert"]:
        if not self.premises:
            return [self]
        return [leaf for p in self.premises for leaf in p.leaves()]


def ceil_half(n: int) -> int:
    return -((-n) // 2)


def suit_positive_torus(p: int, q: int) -> SuitCert:
    if not (2 <= p < q) or gcd(p, q) != 1:
        raise SuitabilityError(f"torus parameters ({p}, {q}) must be coprime with 2 <= p < q")
    g = (p - 1) * (q - 1) // 2
    return SuitCert(Torus(p, q), 2 * g - 1, g, "positive-torus-knot")


def suit_unknot() -> SuitCert:
    from .expr import UNKNOT
    return SuitCert(UNKNOT, -1, 0, "standard-unknot")


def suit_destab(c: SuitCert, k: int) -> SuitCert:
    if k > c.r:
        raise SuitabilityError(f"cannot pass from {c.r}-suitable to {k}-suitable: k must be <= {c.r}")
    if k == c.r:
        return c
    # destabilizing a destabilized certificate reuses the original premise
    base = c.premises[0] if c.rule == "stabilize" else c
    return SuitCert(c.expr, k, c.g4, "stabilize", (base,))


def suit_wh(c: SuitCert) -> SuitCert:
    if c.r < 0:
        raise SuitabilityError(f"the Whitehead double rule needs r >= 0, got {c.r}")
    return SuitCert(Wh(c.expr), 1, 1, "whitehead-suitable", (c,))


def suit_sum(a: SuitCert, b: SuitCert) -> SuitCert:
    g = None if a.g4 is None or b.g4 is None else a.g4 + b.g4
    return SuitCert(make_sum([a.expr, b.expr]), a.r + b.r + 1, g, "sum-suitable", (a, b))


def satellite_conditions(p: PatternDatum, leg: tuple[int, int]) -> list[str]:
    """Why a pattern and Legendrian pair fail the satellite lemma (empty if they pass)."""
    m, rho = leg
    out = []
    if p.w != 1:
        out.append(f"pattern {p.name} has winding number {p.w}, need 1")
    if leg not in p.leg_pairs:
        out.append(f"pattern {p.name} has no Legendrian pair {leg}")
    if m < 0:
        out.append(f"Legendrian pair needs tb = m >= 0, got {m}")
    g = p.g4_exact
    if g is None:
        out.append(f"slice genus of pattern {p.name} is not known exactly")
    else:
        if g <= 0:
            out.append(f"g4(P) > 0 required, pattern {p.name} has g4 = {g}")
        if 2 * g > m + rho:
            out.append(f"g4(P) <= (m + rot)/2 fails: {g} > ({m} + {rho})/2")
    return out


def suit_satellite(c: SuitCert, p: PatternDatum, leg: tuple[int, int], r: int) -> SuitCert:
    """``P_r(K)`` is ``(r+m)``-suitable when ``K`` is and ``P`` has a pair ``(m, rho)``
    with ``0 < g4(P) <= (m + rho)/2``."""
    m, _ = leg
    problems = satellite_conditions(p, leg)
    if c.r != r + m:
        problems.append(f"companion certificate is {c.r}-suitable, need r + m = {r + m}")
    if problems:
        raise SuitabilityError("; ".join(problems))
    g = None if c.g4 is None else c.g4 + p.g4_exact
    return SuitCert(Sat(Named(p.name), r, c.expr), r + m, g, "satellite-suitable", (c,))


def topologically_slice_rsuitable(r: int) -> tuple[KnotExpr, SuitCert]:
    """A sum of copies of ``Wh(T(2,3))`` that is ``r``-suitable."""
    copies = max(1, ceil_half(r + 1))
    one = suit_wh(suit_positive_torus(2, 3))
    cert = one
    for _ in range(copies - 1):
        cert = suit_sum(cert, one)
    cert = suit_destab(cert, min(r, cert.r))
    return cert.expr, cert


@dataclass(frozen=True)
class Consequence:
    """A fact implied by a certificate: ``inv`` is ``g4_lo``, ``link``,
    ``witness`` or ``not_slice``."""

    inv: str
    value: object
    why: str


def consequences(c: SuitCert, g4: int | None = None) -> list[Consequence]:
    g = c.g4 if g4 is None else g4
    out = [
        Consequence("link", "2 tau = s = 2 g4", "tau and s attain their slice-Bennequin bounds"),
        Consequence("g4_lo", ceil_half(c.r + 1), f"r <= 2 g4 - 1 with r = {c.r}"),
    ]
    if g is not None:
        out.append(Consequence("witness", LegWitness(c.r, 2 * g - 1 - c.r), "definition of r-suitable"))
    if c.r >= 0:
        out.append(Consequence("not_slice", 1, "a knot that is r-suitable with r >= 0 has g4 >= 1"))
    return out
