"""Shake-slice verdicts and iterated-satellite tables."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .engine import ExternalFact, FactStore, propagate
from .expr import UNKNOT, KnotExpr, Named, Sat, normalize
from .patterns import PatternDatum, Registry, default_registry
from .suitability import satellite_conditions
from .trace import MOD_SPC4, ContradictionError

NO = "No"
CERTIFIED = "Certified"
CERTIFIED_MOD_SPC4 = "CertifiedModuloSPC4"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    kind: str
    reasons: tuple[str, ...] = ()
    traces: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.reasons:
            return self.kind
        return f"{self.kind}: " + "; ".join(self.reasons)


@dataclass(frozen=True)
class Characterization:
    """A winding number one pattern ``Q`` with ribbon closure such that
    ``Q_r(K)`` is slice (the sliceness is taken on trust)."""

    pattern: str
    caveats: tuple[str, ...] = ()
    note: str = "user-supplied slice certificate"


def _sat_parts(store: FactStore, x: KnotExpr):
    if isinstance(x, Sat):
        return store.pattern(x), store.of(x.companion)
    return None, None


def shake_slice_verdict(e: KnotExpr, r: int, registry: Registry | None = None,
                        external=(), characterization: Characterization | None = None,
                        store: FactStore | None = None) -> tuple[Verdict, FactStore]:
    registry = registry or default_registry()
    external = list(external)
    if characterization is not None:
        q = registry[characterization.pattern]
        if q.w != 1 or q.tilde_ribbon is not True:
            raise ValueError(f"characterization pattern {q.name} needs winding number one and ribbon closure")
        sat = Sat(Named(q.name), r, normalize(e, registry))
        external.append(ExternalFact(sat, "slice", caveats=characterization.caveats, note=characterization.note))
    if store is None:
        store = propagate(e, registry, rs=[r], external=external)
    n = store.top
    x = store.root
    gsh = n.gsh[r]
    reasons, traces = [], []

    def no(reason, d):
        reasons.append(reason)
        if d is not None:
            traces.append(d.id)

    if n.arf == 1:
        no("Arf invariant is 1", n.arf_trace)
    if r == 0 and not n.tau.contains(0):
        no(f"tau {n.tau} excludes 0", n.tau.lo_trace if n.tau.lo and n.tau.lo > 0 else n.tau.hi_trace)
    if gsh.lo >= 1:
        no(f"gsh^{r} >= {gsh.lo}", gsh.lo_trace)
    p, k = _sat_parts(store, x)
    if p is not None and x.r == r and p.w == 1 and p.tilde_slice:
        if k.arf == 1:
            no(f"companion has Arf invariant 1 and {p.name} has slice closure", k.arf_trace)
        if r == 0 and not k.tau.contains(0):
            no(f"companion tau {k.tau} excludes 0 and {p.name} has slice closure",
               k.tau.lo_trace if k.tau.lo and k.tau.lo > 0 else k.tau.hi_trace)
    if reasons:
        return Verdict(NO, tuple(reasons), tuple(traces)), store
    if gsh.hi == 0:
        d = gsh.hi_trace
        kind = CERTIFIED_MOD_SPC4 if MOD_SPC4 in d.caveats else CERTIFIED
        return Verdict(kind, (d.statement,), (d.id,)), store
    return Verdict(UNKNOWN), store


# --------------------------------------------------------------------------
# iterated satellites


class FamilyHypothesisError(ValueError):
    pass


@dataclass
class FamilyRow:
    i: int
    g4: tuple[int | None, int | None]
    tau: tuple[int | None, int | None]
    s: tuple[int | None, int | None]
    gsh: tuple[int | None, int | None] | None
    caveats: tuple[str, ...] = ()


@dataclass
class FamilyTable:
    pattern: str
    base: KnotExpr
    r: int
    rows: list[FamilyRow]
    closed_form: bool
    diagnostics: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "g4", "tau", "s", "gsh_r", "caveats"])
        for row in self.rows:
            w.writerow([row.i, _cell(row.g4), _cell(row.tau), _cell(row.s),
                        "" if row.gsh is None else _cell(row.gsh), ";".join(row.caveats)])
        return buf.getvalue()


def _cell(iv) -> str:
    lo, hi = iv
    if lo is not None and lo == hi:
        return str(lo)
    return f"[{'-inf' if lo is None else lo},{'+inf' if hi is None else hi}]"


def iterate(p: str, base: KnotExpr, r: int, i: int) -> KnotExpr:
    e = base
    for _ in range(i):
        e = Sat(Named(p), r, e)
    return e


def closed_form_conditions(p: PatternDatum, store: FactStore, r: int) -> tuple[list, list, list[str]]:
    """Legendrian pairs usable for the genus columns and for the shake genus
    column, and the reasons the others fail."""
    k = store.top
    why = []
    cert = None if k.suit is None else k.suit[0]
    genus_legs, shake_legs = [], []
    if not p.leg_pairs:
        why.append(f"pattern {p.name} has no Legendrian pairs")
    for leg in sorted(p.leg_pairs):
        problems = satellite_conditions(p, leg)
        m = leg[0]
        if cert is None:
            problems.append("base has no suitability certificate")
        elif cert < r + m:
            problems.append(f"base is {cert}-suitable, need r + m = {r + m}")
        if problems:
            why.extend(f"pair {leg}: {msg}" for msg in problems)
            continue
        genus_legs.append(leg)
        if m >= 1:
            shake_legs.append(leg)
    for name, iv in (("g4", k.g4), ("tau", k.tau), ("s", k.s)):
        if iv.exact is None:
            why.append(f"{name} of the base is not known exactly ({iv})")
    return genus_legs, shake_legs, sorted(set(why))


def family_table(pattern: str, base: KnotExpr, r: int, iters: int, registry: Registry | None = None,
                 fallback: bool = True) -> FamilyTable:
    registry = registry or default_registry()
    p = registry[pattern]
    base_store = propagate(base, registry, rs=[r])
    genus_legs, shake_legs, why = closed_form_conditions(p, base_store, r)
    k = base_store.top
    if genus_legs and k.g4.exact is not None and k.tau.exact is not None and k.s.exact is not None:
        g = p.g4_exact
        gsh0 = k.gsh[r].exact if shake_legs else None
        rows = []
        for i in range(iters + 1):
            gsh = None if gsh0 is None else (gsh0 + i * g,) * 2
            rows.append(FamilyRow(i, (k.g4.exact + i * g,) * 2, (k.tau.exact + i * g,) * 2,
                                  (k.s.exact + 2 * i * g,) * 2, gsh))
        diag = [] if shake_legs else [f"no pair with m >= 1 applies at r = {r}: shake genus column omitted"]
        return FamilyTable(pattern, normalize(base, registry), r, rows, True, diag)
    if not fallback:
        raise FamilyHypothesisError("; ".join(why) or "closed form does not apply")
    rows = [family_row(pattern, base, r, i, registry) for i in range(iters + 1)]
    return FamilyTable(pattern, normalize(base, registry), r, rows, False, why)


def family_row(pattern: str, base: KnotExpr, r: int, i: int, registry: Registry | None = None) -> FamilyRow:
    """One row computed by propagating the ``i``-th iterate itself."""
    store = propagate(iterate(pattern, base, r, i), registry, rs=[r])
    n = store.top
    gsh = n.gsh[r]
    cav = sorted(set().union(*(iv.caveats for iv in (n.g4, n.tau, n.s, gsh))))
    return FamilyRow(i, n.g4.values(), n.tau.values(), n.s.values(), gsh.values(), tuple(cav))



def audit_meridian_flags(registry: Registry, rs=range(-3, 4)) -> list[str]:
    """Run the engine on ``P_r(U)`` for every pattern that claims a
    meridian normally generating the group.  A false claim tends to collide
    with the Legendrian lower bounds."""
    out = []
    for p in registry:
        if not p.meridian_ng:
            continue
        for r in rs:
            try:
                propagate(Sat(Named(p.name), r, UNKNOT), registry, rs=[r])
            except ContradictionError as exc:
                out.append(f"{p.name} at r = {r}: {exc.what}")
    return out
