"""Shake concordance certificates and the peripheral-curve gluing algebra.

A ``ShakeCert`` records that the ``p``-component r-shaking of ``left`` and
the ``q``-component r-shaking of ``right`` cobound a genus zero surface in
``S^3 x I``.  ``None`` for ``p`` or ``q`` means "some odd number".

The gluing half models the exteriors of iterated and composed satellites
by their boundary identifications in first homology, and compares them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .engine import ExternalFact
from .expr import UNKNOT, KnotExpr, Named, Sat, parse_expr
from .patterns import PatternDatum
from .trace import MOD_SPC4


class ShakeError(ValueError):
    pass


def _odd(n: int | None) -> bool:
    return n is None or (n > 0 and n % 2 == 1)


def _mul(a: int | None, b: int | None) -> int | None:
    return None if a is None or b is None else a * b


@dataclass(frozen=True)
class ShakeCert:
    r: int
    left: KnotExpr
    right: KnotExpr
    p: int | None
    q: int | None
    rule: str
    premises: tuple["ShakeCert", ...] = ()
    caveats: frozenset[str] = frozenset()

    def __post_init__(self):
        if not (_odd(self.p) and _odd(self.q)):
            raise ShakeError(f"shakings have an odd number of components, got ({self.p}, {self.q})")

    def counts(self) -> str:
        show = lambda n: "odd" if n is None else str(n)
        return f"({show(self.p)}, {show(self.q)})"

    def __str__(self) -> str:
        tag = " (mod SPC4)" if MOD_SPC4 in self.caveats else ""
        return f"{self.left} ~ {self.right}: {self.counts()} {self.r}-shake concordant <{self.rule}>{tag}"

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "left": str(self.left),
            "right": str(self.right),
            "p": self.p,
            "q": self.q,
            "rule": self.rule,
            "premises": [c.to_json() for c in self.premises],
            "caveats": sorted(self.caveats),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ShakeCert":
        return cls(
            r=obj["r"],
            left=parse_expr(obj["left"]),
            right=parse_expr(obj["right"]),
            p=obj["p"],
            q=obj["q"],
            rule=obj["rule"],
            premises=tuple(cls.from_json(c) for c in obj["premises"]),
            caveats=frozenset(obj["caveats"]),
        )


def _caveats(certs: Iterable[ShakeCert]) -> frozenset[str]:
    return frozenset().union(*(c.caveats for c in certs))


def reflexive(k: KnotExpr, r: int) -> ShakeCert:
    return ShakeCert(r, k, k, 1, 1, "reflexive")


def symmetry(c: ShakeCert) -> ShakeCert:
    return ShakeCert(c.r, c.right, c.left, c.q, c.p, "symmetry", (c,), c.caveats)


def _chainable(a: ShakeCert, b: ShakeCert):
    if a.r != b.r:
        raise ShakeError(f"framings differ: {a.r} and {b.r}")
    if a.right != b.left:
        raise ShakeError(f"endpoints do not match: {a.right} and {b.left}")


def compose_11(a: ShakeCert, b: ShakeCert) -> ShakeCert:
    """``(p, 1)`` then ``(m, 1)`` gives ``(pm, 1)``."""
    _chainable(a, b)
    if a.q != 1 or b.q != 1:
        raise ShakeError(f"need (p, 1) and (m, 1) certificates, got {a.counts()} and {b.counts()}")
    return ShakeCert(a.r, a.left, b.right, _mul(a.p, b.p), 1, "compose", (a, b), _caveats((a, b)))


def compose_1n(a: ShakeCert, b: ShakeCert) -> ShakeCert:
    """``(1, p)`` then ``(1, m)`` gives ``(1, pm)``."""
    _chainable(a, b)
    if a.p != 1 or b.p != 1:
        raise ShakeError(f"need (1, p) and (1, m) certificates, got {a.counts()} and {b.counts()}")
    return ShakeCert(a.r, a.left, b.right, 1, _mul(a.q, b.q), "compose", (a, b), _caveats((a, b)))


def satellite_shake(p: PatternDatum, k: KnotExpr, r: int) -> ShakeCert:
    """``P_r(K)`` is ``(1, n)`` r-shake concordant to ``K`` for a winding number
    one pattern with slice closure, ``n`` the geometric winding number."""
    problems = []
    if p.w != 1:
        problems.append(f"pattern {p.name} has winding number {p.w}, need 1")
    if p.tilde_slice is not True:
        problems.append(f"closure of pattern {p.name} is not known to be slice")
    if p.n_geom is None:
        problems.append(f"geometric winding number of pattern {p.name} is unknown")
    if problems:
        raise ShakeError("; ".join(problems))
    return ShakeCert(r, Sat(Named(p.name), r, k), k, 1, p.n_geom, "satellite-shake")


def glue_general(s: ShakeCert, a: ShakeCert, b: ShakeCert) -> ShakeCert:
    """From ``P_r(K) ~ Q_r(J)`` as ``(2k+1, 2l+1)`` and ``(1, m)``, ``(1, n)``
    certificates ``P_r(K) ~ K``, ``Q_r(J) ~ J``: ``K ~ J`` as ``(m(2k+1), n(2l+1))``."""
    if not (s.r == a.r == b.r):
        raise ShakeError(f"framings differ: {s.r}, {a.r}, {b.r}")
    if a.left != s.left:
        raise ShakeError(f"first satellite certificate starts at {a.left}, expected {s.left}")
    if b.left != s.right:
        raise ShakeError(f"second satellite certificate starts at {b.left}, expected {s.right}")
    if a.p != 1 or b.p != 1:
        raise ShakeError("satellite certificates must be (1, n)")
    return ShakeCert(s.r, a.right, b.right, _mul(a.q, s.p), _mul(b.q, s.q), "glue", (s, a, b),
                     _caveats((s, a, b)))


def shake_slice_cert(c: ShakeCert) -> ExternalFact:
    """A ``(m, 1)`` certificate to the unknot makes ``c.left`` r-shake slice."""
    if c.right != UNKNOT:
        raise ShakeError(f"certificate must end at the unknot, ends at {c.right}")
    if c.q != 1:
        raise ShakeError(f"need an (m, 1) certificate, got {c.counts()}")
    return ExternalFact(c.left, "shake_slice", r=c.r, caveats=tuple(sorted(c.caveats)),
                        note=f"from {c.counts()} certificate to the unknot")


def from_slice(q: PatternDatum, sat: KnotExpr, caveats: Iterable[str] = ()) -> tuple[ShakeCert, ExternalFact]:
    """Given that ``sat = Q_r(K)`` is slice, with ``Q`` winding number one and
    ribbon closure, ``K`` is r-shake slice."""
    if not isinstance(sat, Sat) or sat.pattern != Named(q.name):
        raise ShakeError(f"expected a satellite with pattern {q.name}, got {sat}")
    if q.w != 1:
        raise ShakeError(f"pattern {q.name} has winding number {q.w}, need 1")
    if q.tilde_ribbon is not True:
        raise ShakeError(f"closure of pattern {q.name} is not known to be ribbon")
    cav = frozenset(caveats)
    cert = ShakeCert(sat.r, sat.companion, UNKNOT, None, 1, "characterization", (), cav)
    return cert, shake_slice_cert(cert)


def lift_chain(chain: list[ShakeCert], p: PatternDatum) -> list[ShakeCert]:
    """A chain ``K ~ ... ~ J`` becomes ``P_r(K) ~ K ~ ... ~ J ~ P_r(J)``."""
    if not chain:
        raise ShakeError("empty chain")
    r = chain[0].r
    for a, b in zip(chain, chain[1:]):
        _chainable(a, b)
    start = satellite_shake(p, chain[0].left, r)
    end = symmetry(satellite_shake(p, chain[-1].right, r))
    return [start, *chain, end]


# --------------------------------------------------------------------------
# peripheral curves


@dataclass(frozen=True)
class CurveClass:
    """Integer combination of peripheral curves, e.g. ``l_i(Q) - 3 m_i(Q)``."""

    terms: tuple[tuple[str, int], ...] = ()

    @classmethod
    def basis(cls, name: str) -> "CurveClass":
        return cls(((name, 1),))

    @classmethod
    def from_dict(cls, d: dict[str, int]) -> "CurveClass":
        return cls(tuple(sorted((k, v) for k, v in d.items() if v)))

    def as_dict(self) -> dict[str, int]:
        return dict(self.terms)

    def __add__(self, other: "CurveClass") -> "CurveClass":
        d = self.as_dict()
        for k, v in other.terms:
            d[k] = d.get(k, 0) + v
        return CurveClass.from_dict(d)

    def __neg__(self) -> "CurveClass":
        return CurveClass(tuple((k, -v) for k, v in self.terms))

    def __sub__(self, other: "CurveClass") -> "CurveClass":
        return self + (-other)

    def __rmul__(self, c: int) -> "CurveClass":
        return CurveClass.from_dict({k: c * v for k, v in self.terms})

    def coeff(self, name: str) -> int:
        return self.as_dict().get(name, 0)

    def substitute(self, name: str, value: "CurveClass") -> "CurveClass":
        c = self.coeff(name)
        if not c:
            return self
        rest = CurveClass.from_dict({k: v for k, v in self.terms if k != name})
        return rest + c * value

    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for k, v in sorted(self.terms, key=lambda kv: (not kv[0].startswith("l"), kv[0])):
            mag = "" if abs(v) == 1 else f"{abs(v)}*"
            out.append(("- " if v < 0 else "+ ") + mag + k)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def m_i(x): return CurveClass.basis(f"m_i({x})")
def l_i(x): return CurveClass.basis(f"l_i({x})")
def m_o(x): return CurveClass.basis(f"m_o({x})")
def l_o(x): return CurveClass.basis(f"l_o({x})")


MU_K = CurveClass.basis("mu(K)")
LAMBDA_K = CurveClass.basis("lambda(K)")


@dataclass(frozen=True)
class Identification:
    lhs: CurveClass
    rhs: CurveClass

    def __str__(self) -> str:
        return f"{self.lhs} ~ {self.rhs}"


@dataclass(frozen=True)
class GluingData:
    """Boundary identifications of a satellite exterior.  ``interfaces`` maps
    an interface name ``"X|Y"`` to its meridian and longitude identifications,
    both with left side a curve on the outer boundary of ``X``."""

    label: str
    interfaces: dict[str, tuple[Identification, Identification]] = field(hash=False)
    longitude: CurveClass

    def normal_form(self) -> dict[str, tuple[CurveClass, CurveClass]]:
        """Per interface: the class identified with ``m_o(X)`` and with ``l_o(X)``."""
        out = {}
        for name, (mer, lon) in self.interfaces.items():
            x = name.split("|")[0]
            mo, lo = m_o(x), l_o(x)
            if mer.lhs != mo:
                raise ValueError(f"{name}: meridian identification must start with {mo}")
            # lon: l_o(X) + a*m_o(X) ~ rhs; move the m_o part across and substitute
            a = lon.lhs.coeff(mo.terms[0][0])
            if lon.lhs - a * mo != lo:
                raise ValueError(f"{name}: longitude identification must be l_o + k m_o")
            out[name] = (mer.rhs, lon.rhs - a * mer.rhs)
        return out

    def lines(self) -> list[str]:
        out = [f"{self.label}:"]
        for name, pair in self.interfaces.items():
            for ident in pair:
                out.append(f"  [{name}] {ident}")
        out.append(f"  longitude: {self.longitude}")
        return out


def _w(x: PatternDatum | int) -> int:
    return x if isinstance(x, int) else x.w


def build_gluings(p: PatternDatum | int, q: PatternDatum | int, r: int, s: int) -> tuple[GluingData, GluingData]:
    """Gluing data of ``P_s(Q_r(K))`` and of ``(P_{s-r} * Q)_r(K)``."""
    wp, wq = _w(p), _w(q)
    qk = (Identification(m_o("Q"), MU_K), Identification(l_o("Q") - r * m_o("Q"), LAMBDA_K))
    iterated = GluingData(
        "iterated",
        {
            "Q|K": qk,
            "P|Q": (Identification(m_o("P"), m_i("Q")),
                    Identification(l_o("P") - s * m_o("P"), l_i("Q") - (r * wq * wq) * m_i("Q"))),
        },
        l_i("P") - (s * wp * wp) * m_i("P"),
    )
    t = s - r
    composed = GluingData(
        "composed",
        {
            "Q|K": qk,
            "P|Q": (Identification(m_o("P"), m_i("Q")),
                    Identification(l_o("P") - t * m_o("P"), l_i("Q"))),
        },
        l_i("P") - (t * wp * wp + r * wp * wp * wq * wq) * m_i("P"),
    )
    return iterated, composed


@dataclass(frozen=True)
class GluingComparison:
    equal: bool
    interface: str | None = None
    mismatch: CurveClass = CurveClass()
    longitude_mismatch: CurveClass = CurveClass()

    def __str__(self) -> str:
        if self.equal:
            return "Equal"
        return (f"Mismatch at {self.interface}: composed - iterated = {self.mismatch}; "
                f"longitudes differ by {self.longitude_mismatch}")


def compare_gluings(p: PatternDatum | int, q: PatternDatum | int, r: int, s: int) -> GluingComparison:
    iterated, composed = build_gluings(p, q, r, s)
    a, b = iterated.normal_form(), composed.normal_form()
    lon = composed.longitude - iterated.longitude
    for name in a:
        mer = b[name][0] - a[name][0]
        diff = b[name][1] - a[name][1]
        if not (mer.is_zero() and diff.is_zero()):
            return GluingComparison(False, name, diff if mer.is_zero() else mer, lon)
    return GluingComparison(lon.is_zero(), None if lon.is_zero() else "longitude", CurveClass(), lon)
