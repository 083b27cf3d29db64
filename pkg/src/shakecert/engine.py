"""Fixpoint propagation of traced interval facts over a knot expression.

Every subexpression gets intervals for g4, tau, s and the r-shake genera
over a finite set of twists, a lower bound on the maximal Thurston-Bennequin
number, an Arf value, a Pareto set of Legendrian witnesses and the best
suitability certificate.  Rules only narrow intervals or add witnesses, so
the result is the least fixpoint regardless of the order rules fire in.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .alexander import alexander
from .expr import (
    KnotExpr, Mirror, Reverse, Sat, Sum, Torus, Unknot, Wh, normalize, subexpressions, unfold,
)
from .legendrian import LegWitness, connect_sum_witness, reachable
from .patterns import PatternDatum, Registry, default_registry
from .suitability import SuitCert, ceil_half, satellite_conditions
from .trace import (
    AXIOM, BACKGROUND, EXTERNAL, MOD_SPC4, RULE, ContradictionError, Derivation, Interval, TraceTable,
)

MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class ExternalFact:
    """A fact supplied by the user, accepted with provenance ``external``.

    kinds: ``slice``; ``suitable`` (``r``); ``witness`` (``value=(tb, rot)``);
    ``g4`` (``value=(lo, hi)``); ``shake_slice`` (``r``)."""

    expr: KnotExpr
    kind: str
    r: int | None = None
    value: object = None
    caveats: tuple[str, ...] = ()
    note: str = ""


def _arg(x: KnotExpr) -> str:
    s = str(x)
    return s if s.startswith("(") else f"({s})"


@dataclass
class NodeFacts:
    expr: KnotExpr
    g4: Interval
    tau: Interval
    s: Interval
    gsh: dict[int, Interval]
    tb: int | None = None
    tb_trace: Derivation | None = None
    arf: int | None = None
    arf_trace: Derivation | None = None
    wits: dict[tuple[int, int], Derivation] = field(default_factory=dict)
    suit: tuple[int, Derivation] | None = None

    def intervals(self) -> list[Interval]:
        return [self.g4, self.tau, self.s, *self.gsh.values()]


class FactStore:
    def __init__(self, expr: KnotExpr, registry: Registry | None = None, rs: Iterable[int] = (),
                 external: Iterable[ExternalFact] = (), rng: random.Random | None = None):
        self.registry = registry or default_registry()
        self.display = normalize(expr, self.registry)
        self.root = unfold(self.display, self.registry)
        self.requested = sorted(set(rs))
        self.traces = TraceTable()
        self.rng = rng
        self._nonneg = self.traces.derive("nonnegative-genus", "genera are nonnegative", basis=AXIOM)

        self.external: dict[KnotExpr, list[ExternalFact]] = {}
        roots = [self.root]
        for fact in external:
            e = unfold(normalize(fact.expr, self.registry), self.registry)
            self.external.setdefault(e, []).append(fact)
            roots.append(e)

        nodes: dict[KnotExpr, None] = {}
        pending = list(roots)
        while pending:
            e = pending.pop(0)
            for x in subexpressions(e):
                if x in nodes:
                    continue
                nodes[x] = None
                closed = self._closure_knot(x)
                if closed is not None and closed not in nodes:
                    pending.append(closed)
        self.order = list(nodes)

        twists = {0, *self.requested}
        for x in self.order:
            if isinstance(x, Sat):
                twists.add(x.r)
        self.rs = sorted(twists | {-r for r in twists})

        self.facts: dict[KnotExpr, NodeFacts] = {x: self._fresh(x) for x in self.order}
        self.rules: list[Callable[[NodeFacts], bool]] = [
            self.axiom_unknot, self.axiom_torus, self.apply_external,
            self.alexander_arf, self.arf_sum, self.slice_arf, self.arf_obstruction,
            self.slice_bennequin, self.genus_chain, self.shake_bennequin, self.shake_below_slice,
            self.max_tb_shake_bound, self.tau_obstruction,
            self.suitable_linkage, self.suitable_genus_bound, self.suitable_witness,
            self.witness_suitable, self.suitable_shake_equality,
            self.sum_genus, self.sum_tau, self.sum_witness, self.sum_suitable,
            self.sat_genus_bound, self.sat_shake_monotone, self.sat_witness, self.sat_suitable,
            self.sat_closure, self.sat_inverse_pattern,
            self.wh_witness, self.wh_suitable, self.wh_genus,
            self.mirror_transfer, self.reverse_invariance,
        ]
        self.sweeps = 0
        self.first_sweep_width = 0
        self._run()

    # ------------------------------------------------------------------
    # setup

    def _fresh(self, x: KnotExpr) -> NodeFacts:
        label = _arg(x)
        return NodeFacts(
            expr=x,
            g4=Interval(f"g4{label}", lo=0, lo_trace=self._nonneg),
            tau=Interval(f"tau{label}"),
            s=Interval(f"s{label}"),
            gsh={r: Interval(f"gsh^{r}{label}", lo=0, lo_trace=self._nonneg) for r in self.rs},
        )

    def _closure_knot(self, x: KnotExpr) -> KnotExpr | None:
        if isinstance(x, Sat) and isinstance(x.companion, Unknot):
            tk = self.pattern(x).tilde_at(x.r)
            if tk is not None and tk.knot is not None:
                return unfold(normalize(tk.knot, self.registry), self.registry)
        return None

    def pattern(self, x: Sat) -> PatternDatum:
        return self.registry.resolve(x.pattern)

    def _run(self):
        pairs = [(rule, self.facts[x]) for x in self.order for rule in self.rules]
        changed = True
        while changed:
            self.sweeps += 1
            if self.sweeps > MAX_SWEEPS:
                raise RuntimeError("propagation did not reach a fixpoint")
            changed = False
            order = pairs if self.rng is None else self.rng.sample(pairs, len(pairs))
            for rule, node in order:
                if rule(node):
                    changed = True
            if self.sweeps == 1:
                self.first_sweep_width = max(
                    (iv.width() or 0 for f in self.facts.values() for iv in f.intervals()), default=0)

    def iteration_bound(self) -> int:
        """Sweeps allowed before the fixpoint: one per unit of interval width
        per node, plus the sweep that detects quiescence."""
        return len(self.order) * (self.first_sweep_width + 2) + 2

    # ------------------------------------------------------------------
    # helpers

    def of(self, x: KnotExpr) -> NodeFacts:
        return self.facts[x]

    def derive(self, rule: str, statement: str, premises=(), basis: str = RULE, caveats=()) -> Derivation:
        return self.traces.derive(rule, statement, [p for p in premises if p is not None], basis, caveats)

    def add_witness(self, n: NodeFacts, tb: int, rot: int, why: Callable[[], Derivation]) -> bool:
        pair = (tb, rot)
        if any(reachable(w, pair) for w in n.wits):
            return False
        LegWitness(tb, rot)  # parity audit
        d = why()
        for w in [w for w in n.wits if reachable(pair, w)]:
            del n.wits[w]
        n.wits[pair] = d
        if n.tb is None or tb > n.tb:
            n.tb, n.tb_trace = tb, d
        return True

    def add_suit(self, n: NodeFacts, r: int, why: Callable[[], Derivation]) -> bool:
        if n.suit is not None and n.suit[0] >= r:
            return False
        n.suit = (r, why())
        return True

    def set_arf(self, n: NodeFacts, v: int, why: Callable[[], Derivation]) -> bool:
        if n.arf is not None:
            if n.arf != v:
                d = why()
                raise ContradictionError(f"Arf{_arg(n.expr)} is both {n.arf} and {v}", n.arf_trace, d)
            return False
        n.arf, n.arf_trace = v, why()
        return True

    def _equate(self, a: Interval, b: Interval, rule: str, basis: str, sign: int = 1,
                scale: int = 1) -> bool:
        """Impose ``a = sign * scale * b`` in both directions (scale > 0)."""
        changed = False

        def img(v):
            return None if v is None else sign * scale * v

        blo, bhi = (img(b.lo), img(b.hi)) if sign > 0 else (img(b.hi), img(b.lo))
        blt, bht = (b.lo_trace, b.hi_trace) if sign > 0 else (b.hi_trace, b.lo_trace)
        rel = f"{a.name} = {'-' if sign < 0 else ''}{'' if scale == 1 else scale}{b.name}"
        changed |= a.raise_lo(blo, lambda: self.derive(rule, f"{a.name} >= {blo} since {rel}", [blt], basis))
        changed |= a.lower_hi(bhi, lambda: self.derive(rule, f"{a.name} <= {bhi} since {rel}", [bht], basis))

        def pre(v, up):
            if v is None:
                return None
            q = sign * v
            return (q // scale) if up else -((-q) // scale)

        alo, ahi = (pre(a.lo, False), pre(a.hi, True)) if sign > 0 else (pre(a.hi, False), pre(a.lo, True))
        alt, aht = (a.lo_trace, a.hi_trace) if sign > 0 else (a.hi_trace, a.lo_trace)
        changed |= b.raise_lo(alo, lambda: self.derive(rule, f"{b.name} >= {alo} since {rel}", [alt], basis))
        changed |= b.lower_hi(ahi, lambda: self.derive(rule, f"{b.name} <= {ahi} since {rel}", [aht], basis))
        return changed

    # ------------------------------------------------------------------
    # axioms and external data

    def axiom_unknot(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Unknot):
            return False
        ch = n.g4.lower_hi(0, lambda: self.derive("unknot", "the unknot bounds a disk: g4 = 0", basis=AXIOM))
        ch |= self.add_witness(n, -1, 0, lambda: self.derive(
            "unknot", "standard Legendrian unknot (tb, rot) = (-1, 0)", basis=AXIOM))
        ch |= self.add_suit(n, -1, lambda: self.derive(
            "unknot", "unknot is (-1)-suitable: (-1, 0) = (r, 2 g4 - 1 - r)", basis=AXIOM))
        return ch

    def axiom_torus(self, n: NodeFacts) -> bool:
        x = n.expr
        if not isinstance(x, Torus):
            return False
        g = (x.p - 1) * (x.q - 1) // 2
        ax = lambda: self.derive("torus-knot", f"g4{x} = {g} (positive torus knot)", basis=AXIOM)
        ch = n.g4.raise_lo(g, ax) | n.g4.lower_hi(g, ax)
        ch |= self.add_witness(n, 2 * g - 1, 0, lambda: self.derive(
            "torus-knot", f"positive braid closure {x} has a Legendrian (tb, rot) = ({2 * g - 1}, 0)",
            basis=AXIOM))
        ch |= self.add_suit(n, 2 * g - 1, lambda: self.derive(
            "torus-knot", f"{x} is {2 * g - 1}-suitable (positive braid closure)", basis=AXIOM))
        return ch

    def apply_external(self, n: NodeFacts) -> bool:
        ch = False
        for fact in self.external.get(n.expr, ()):
            note = f" ({fact.note})" if fact.note else ""

            def ext(stmt, fact=fact):
                return lambda: self.derive("external", stmt + note, basis=EXTERNAL, caveats=fact.caveats)

            if fact.kind == "slice":
                ch |= n.g4.lower_hi(0, ext(f"{n.expr} is slice"))
            elif fact.kind == "g4":
                lo, hi = fact.value
                ch |= n.g4.raise_lo(lo, ext(f"g4{_arg(n.expr)} >= {lo}"))
                ch |= n.g4.lower_hi(hi, ext(f"g4{_arg(n.expr)} <= {hi}"))
            elif fact.kind == "suitable":
                ch |= self.add_suit(n, fact.r, ext(f"{n.expr} is {fact.r}-suitable"))
            elif fact.kind == "witness":
                tb, rot = fact.value
                ch |= self.add_witness(n, tb, rot, ext(f"{n.expr} has a Legendrian ({tb}, {rot})"))
            elif fact.kind == "shake_slice":
                iv = self._gsh(n, fact.r)
                ch |= iv.lower_hi(0, ext(f"{n.expr} is {fact.r}-shake slice"))
            else:
                raise ValueError(f"unknown external fact kind {fact.kind!r}")
        return ch

    def _gsh(self, n: NodeFacts, r: int) -> Interval:
        if r not in n.gsh:
            raise KeyError(f"twist {r} is not tracked; pass it in rs")
        return n.gsh[r]

    # ------------------------------------------------------------------
    # Arf

    def alexander_arf(self, n: NodeFacts) -> bool:
        if n.arf is not None:
            return False
        delta = alexander(n.expr, self.registry)
        if delta is None:
            return False
        v = 0 if delta(-1) % 8 in (1, 7) else 1
        return self.set_arf(n, v, lambda: self.derive(
            "alexander-arf", f"Delta{_arg(n.expr)} = {delta}, Delta(-1) = {delta(-1)}, so Arf = {v}",
            basis=BACKGROUND))

    def arf_sum(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Sum):
            return False
        parts = [self.of(s) for s in n.expr.summands]
        if any(p.arf is None for p in parts):
            return False
        v = sum(p.arf for p in parts) % 2
        return self.set_arf(n, v, lambda: self.derive(
            "arf-additive", f"Arf{_arg(n.expr)} = {v}, the sum of the summands' Arf invariants mod 2",
            [p.arf_trace for p in parts], BACKGROUND))

    def slice_arf(self, n: NodeFacts) -> bool:
        ch = False
        if n.g4.hi == 0:
            ch |= self.set_arf(n, 0, lambda: self.derive(
                "slice-arf", f"{n.expr} is slice, so Arf = 0", [n.g4.hi_trace], BACKGROUND))
        if n.arf == 1:
            ch |= n.g4.raise_lo(1, lambda: self.derive(
                "arf-obstruction", f"Arf{_arg(n.expr)} = 1, so {n.expr} is not slice", [n.arf_trace]))
        return ch

    def arf_obstruction(self, n: NodeFacts) -> bool:
        if n.arf != 1:
            return False
        ch = False
        for r, iv in n.gsh.items():
            ch |= iv.raise_lo(1, lambda r=r: self.derive(
                "arf-obstruction", f"Arf{_arg(n.expr)} = 1, so it is not {r}-shake slice: gsh^{r} >= 1",
                [n.arf_trace]))
        return ch

    # ------------------------------------------------------------------
    # inequalities valid for every knot

    def slice_bennequin(self, n: NodeFacts) -> bool:
        ch = False
        for (t, rho), d in n.wits.items():
            k = (t + abs(rho) + 1) // 2
            ch |= n.tau.raise_lo(k, lambda t=t, rho=rho, k=k, d=d: self.derive(
                "slice-bennequin", f"tau{_arg(n.expr)} >= (tb + |rot| + 1)/2 = {k} from ({t}, {rho})", [d]))
            ch |= n.s.raise_lo(2 * k, lambda t=t, rho=rho, k=k, d=d: self.derive(
                "slice-bennequin", f"s{_arg(n.expr)} >= tb + |rot| + 1 = {2 * k} from ({t}, {rho})", [d]))
        return ch

    def genus_chain(self, n: NodeFacts) -> bool:
        g, tau, s = n.g4, n.tau, n.s
        ch = False
        if g.hi is not None:
            why = lambda: self.derive("genus-chain", f"|tau{_arg(n.expr)}| <= g4 <= {g.hi}", [g.hi_trace])
            ch |= tau.lower_hi(g.hi, why) | tau.raise_lo(-g.hi, why)
            why = lambda: self.derive("genus-chain", f"|s{_arg(n.expr)}| <= 2 g4 <= {2 * g.hi}", [g.hi_trace])
            ch |= s.lower_hi(2 * g.hi, why) | s.raise_lo(-2 * g.hi, why)
        for v, d, what in ((tau.lo, tau.lo_trace, "tau"), (None if tau.hi is None else -tau.hi, tau.hi_trace, "-tau")):
            if v is not None:
                ch |= g.raise_lo(v, lambda v=v, d=d, what=what: self.derive(
                    "genus-chain", f"g4{_arg(n.expr)} >= {what} >= {v}", [d]))
        for v, d, what in ((s.lo, s.lo_trace, "s"), (None if s.hi is None else -s.hi, s.hi_trace, "-s")):
            if v is not None:
                ch |= g.raise_lo(ceil_half(v), lambda v=v, d=d, what=what: self.derive(
                    "genus-chain", f"g4{_arg(n.expr)} >= {what}/2 >= {ceil_half(v)}", [d]))
        return ch

    def shake_bennequin(self, n: NodeFacts) -> bool:
        ch = False
        for (t, rho), d in n.wits.items():
            k = (t + abs(rho) + 1) // 2
            for r, iv in n.gsh.items():
                if t >= r + 1:
                    ch |= iv.raise_lo(k, lambda t=t, rho=rho, k=k, d=d, r=r: self.derive(
                        "shake-bennequin",
                        f"gsh^{r}{_arg(n.expr)} >= (tb + |rot| + 1)/2 = {k} from ({t}, {rho}) with tb >= r + 1", [d]))
        return ch

    def shake_below_slice(self, n: NodeFacts) -> bool:
        ch = False
        for r, iv in n.gsh.items():
            ch |= iv.lower_hi(n.g4.hi, lambda r=r: self.derive(
                "shake-below-slice", f"gsh^{r}{_arg(n.expr)} <= g4 <= {n.g4.hi}", [n.g4.hi_trace]))
            ch |= n.g4.raise_lo(iv.lo, lambda r=r, iv=iv: self.derive(
                "shake-below-slice", f"g4{_arg(n.expr)} >= gsh^{r} >= {iv.lo}", [iv.lo_trace]))
        return ch

    def max_tb_shake_bound(self, n: NodeFacts) -> bool:
        if n.tb is None or n.tb < 1:
            return False
        k = ceil_half(n.tb + 1)
        ch = False
        for r, iv in n.gsh.items():
            if r < n.tb:
                ch |= iv.raise_lo(k, lambda r=r: self.derive(
                    "max-tb-shake-bound", f"TB{_arg(n.expr)} >= {n.tb} > r = {r}, so gsh^{r} >= {k}", [n.tb_trace]))
        return ch

    def tau_obstruction(self, n: NodeFacts) -> bool:
        if n.tau.contains(0) or 0 not in n.gsh:
            return False
        d = n.tau.lo_trace if n.tau.lo is not None and n.tau.lo > 0 else n.tau.hi_trace
        return n.gsh[0].raise_lo(1, lambda: self.derive(
            "tau-obstruction", f"tau{_arg(n.expr)} {n.tau} excludes 0, so it is not 0-shake slice", [d]))

    # ------------------------------------------------------------------
    # suitability

    def suitable_linkage(self, n: NodeFacts) -> bool:
        if n.suit is None:
            return False
        r, d = n.suit
        ch = self._equate(n.tau, n.g4, "suitable-linkage", RULE)
        ch |= self._equate(n.s, n.g4, "suitable-linkage", RULE, scale=2)
        return ch

    def suitable_genus_bound(self, n: NodeFacts) -> bool:
        if n.suit is None:
            return False
        r, d = n.suit
        k = ceil_half(r + 1)
        return n.g4.raise_lo(k, lambda: self.derive(
            "suitable-genus-bound", f"{n.expr} is {r}-suitable and r <= 2 g4 - 1, so g4 >= {k}", [d]))

    def suitable_witness(self, n: NodeFacts) -> bool:
        if n.suit is None or n.g4.exact is None:
            return False
        r, d = n.suit
        g = n.g4.exact
        return self.add_witness(n, r, 2 * g - 1 - r, lambda: self.derive(
            "suitable-witness", f"{n.expr} is {r}-suitable with g4 = {g}: witness ({r}, {2 * g - 1 - r})",
            [d, n.g4.lo_trace, n.g4.hi_trace]))

    def witness_suitable(self, n: NodeFacts) -> bool:
        g = n.g4.exact
        if g is None:
            return False
        ch = False
        for (t, rho), d in list(n.wits.items()):
            if t + rho == 2 * g - 1:
                ch |= self.add_suit(n, t, lambda t=t, rho=rho, d=d: self.derive(
                    "witness-suitable", f"witness ({t}, {rho}) has rot = 2 g4 - 1 - tb with g4 = {g}: "
                    f"{n.expr} is {t}-suitable", [d, n.g4.lo_trace, n.g4.hi_trace]))
        return ch

    def suitable_shake_equality(self, n: NodeFacts) -> bool:
        if n.suit is None:
            return False
        rs, d = n.suit
        ch = False
        for r, iv in n.gsh.items():
            if rs >= r + 1:
                ch |= iv.raise_lo(n.g4.lo, lambda r=r: self.derive(
                    "suitable-shake-equality", f"{n.expr} is {rs}-suitable, {rs} >= r + 1: gsh^{r} = g4 >= {n.g4.lo}",
                    [d, n.g4.lo_trace]))
        return ch

    # ------------------------------------------------------------------
    # connected sums

    def sum_genus(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Sum):
            return False
        parts = [self.of(s) for s in n.expr.summands]
        if any(p.g4.hi is None for p in parts):
            return False
        total = sum(p.g4.hi for p in parts)
        return n.g4.lower_hi(total, lambda: self.derive(
            "sum-genus", f"g4{_arg(n.expr)} <= sum of summand genera <= {total}", [p.g4.hi_trace for p in parts]))

    def sum_tau(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Sum):
            return False
        parts = [self.of(s) for s in n.expr.summands]
        ch = False
        if all(p.tau.lo is not None for p in parts):
            lo = sum(p.tau.lo for p in parts)
            ch |= n.tau.raise_lo(lo, lambda: self.derive(
                "sum-tau", f"tau{_arg(n.expr)} = sum of summand tau >= {lo}", [p.tau.lo_trace for p in parts]))
        if all(p.tau.hi is not None for p in parts):
            hi = sum(p.tau.hi for p in parts)
            ch |= n.tau.lower_hi(hi, lambda: self.derive(
                "sum-tau", f"tau{_arg(n.expr)} = sum of summand tau <= {hi}", [p.tau.hi_trace for p in parts]))
        return ch

    def sum_witness(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Sum):
            return False
        parts = [self.of(s) for s in n.expr.summands]
        if any(not p.wits for p in parts):
            return False
        combos: list[tuple[LegWitness, list[Derivation]]] = [(None, [])]
        for p in parts:
            nxt = []
            for acc, ds in combos:
                for pair, d in sorted(p.wits.items()):
                    w = LegWitness(*pair)
                    nxt.append((w if acc is None else connect_sum_witness(acc, w), ds + [d]))
            combos = nxt
        ch = False
        for w, ds in combos:
            ch |= self.add_witness(n, w.tb, w.rot, lambda w=w, ds=ds: self.derive(
                "sum-witness", f"connected sum of Legendrians: tb adds plus one, rot adds: ({w.tb}, {w.rot})", ds))
        return ch

    def sum_suitable(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Sum):
            return False
        parts = [self.of(s) for s in n.expr.summands]
        if any(p.suit is None for p in parts):
            return False
        r = sum(p.suit[0] for p in parts) + len(parts) - 1
        return self.add_suit(n, r, lambda: self.derive(
            "sum-suitable", f"suitable summands {[p.suit[0] for p in parts]}: {n.expr} is {r}-suitable",
            [p.suit[1] for p in parts]))

    # ------------------------------------------------------------------
    # satellites

    def sat_genus_bound(self, n: NodeFacts) -> bool:
        x = n.expr
        if not isinstance(x, Sat):
            return False
        p = self.pattern(x)
        k = self.of(x.companion)
        if abs(p.w) != 1 or p.g4 is None or k.g4.hi is None:
            return False
        hi = k.g4.hi + p.g4[1]
        return n.g4.lower_hi(hi, lambda: self.derive(
            "satellite-genus-bound", f"g4{x} <= g4(companion) + g4({p.name}) <= {hi}", [k.g4.hi_trace]))

    def sat_shake_monotone(self, n: NodeFacts) -> bool:
        x = n.expr
        if not isinstance(x, Sat):
            return False
        p = self.pattern(x)
        if p.w != 1 or not p.tilde_slice:
            return False
        k = self.of(x.companion)
        a, b = k.gsh[x.r], n.gsh[x.r]
        r = x.r
        ch = b.raise_lo(a.lo, lambda: self.derive(
            "satellite-shake-monotone", f"gsh^{r}{x} >= gsh^{r}(companion) >= {a.lo}", [a.lo_trace]))
        ch |= a.lower_hi(b.hi, lambda: self.derive(
            "satellite-shake-monotone", f"gsh^{r}{x.companion} <= gsh^{r}{x} <= {b.hi}", [b.hi_trace]))
        return ch

    def sat_witness(self, n: NodeFacts) -> bool:
        x = n.expr
        if not isinstance(x, Sat):
            return False
        p = self.pattern(x)
        if p.w != 1 or not p.leg_pairs:
            return False
        k = self.of(x.companion)
        ch = False
        for (t, rho), d in sorted(k.wits.items()):
            drop = t - x.r
            if drop < 0:
                continue
            for krot in range(rho - drop, rho + drop + 1, 2):
                for m, prot in sorted(p.leg_pairs):
                    tb, rot = m + x.r, prot + krot
                    ch |= self.add_witness(n, tb, rot, lambda t=t, rho=rho, krot=krot, m=m, prot=prot, d=d, tb=tb, rot=rot:
                                           self.derive(
                        "satellite-witness",
                        f"companion ({t}, {rho}) stabilized to ({x.r}, {krot}), pattern {p.name} ({m}, {prot}): "
                        f"({tb}, {rot})", [d]))
        return ch

    def sat_suitable(self, n: NodeFacts) -> bool:
        x = n.expr
        if not isinstance(x, Sat):
            return False
        p = self.pattern(x)
        k = self.of(x.companion)
        if k.suit is None:
            return False
        kr, kd = k.suit
        ch = False
        for leg in sorted(p.leg_pairs):
            m = leg[0]
            if satellite_conditions(p, leg) or kr < x.r + m:
                continue
            ch |= self.add_suit(n, x.r + m, lambda leg=leg, m=m: self.derive(
                "satellite-suitable", f"companion {kr}-suitable >= r + m = {x.r + m}, pattern {p.name} pair {leg}: "
                f"{x} is {x.r + m}-suitable", [kd]))
            gp = p.g4_exact
            ch |= self._shift(n.g4, k.g4, gp, "satellite-suitable", x)
        return ch

    def _shift(self, a: Interval, b: Interval, c: int, rule: str, x) -> bool:
        """``a = b + c`` both ways."""
        ch = False
        if b.lo is not None:
            ch |= a.raise_lo(b.lo + c, lambda: self.derive(rule, f"{a.name} = g4(companion) + {c} >= {b.lo + c}", [b.lo_trace]))
        if b.hi is not None:
            ch |= a.lower_hi(b.hi + c, lambda: self.derive(rule, f"{a.name} = g4(companion) + {c} <= {b.hi + c}", [b.hi_trace]))
        if a.lo is not None:
            ch |= b.raise_lo(a.lo - c, lambda: self.derive(rule, f"{b.name} = g4{x} - {c} >= {a.lo - c}", [a.lo_trace]))
        if a.hi is not None:
            ch |= b.lower_hi(a.hi - c, lambda: self.derive(rule, f"{b.name} = g4{x} - {c} <= {a.hi - c}", [a.hi_trace]))
        return ch

    def sat_closure(self, n: NodeFacts) -> bool:
        x = n.expr
        if not isinstance(x, Sat) or not isinstance(x.companion, Unknot):
            return False
        tk = self.pattern(x).tilde_at(x.r)
        if tk is None:
            return False
        ch = False
        if tk.slice:
            ch |= n.g4.lower_hi(0, lambda: self.derive(
                "pattern-closure", f"{x} is the closure of the pattern at twist {x.r}, recorded slice",
                basis=EXTERNAL))
        closed = self._closure_knot(x)
        if closed is not None and closed != x:
            ch |= self._same_knot(n, self.of(closed))
        return ch

    def _same_knot(self, a: NodeFacts, b: NodeFacts) -> bool:
        rule = "same-knot"
        ch = self._equate(a.g4, b.g4, rule, EXTERNAL)
        ch |= self._equate(a.tau, b.tau, rule, EXTERNAL)
        ch |= self._equate(a.s, b.s, rule, EXTERNAL)
        for r in self.rs:
            ch |= self._equate(a.gsh[r], b.gsh[r], rule, EXTERNAL)
        for src, dst in ((a, b), (b, a)):
            for pair, d in list(src.wits.items()):
                ch |= self.add_witness(dst, *pair, lambda d=d, pair=pair, dst=dst: self.derive(
                    rule, f"{dst.expr} has witness {pair}: same knot as {src.expr}", [d], EXTERNAL))
            if src.suit is not None:
                ch |= self.add_suit(dst, src.suit[0], lambda src=src, dst=dst: self.derive(
                    rule, f"{dst.expr} is {src.suit[0]}-suitable: same knot as {src.expr}", [src.suit[1]], EXTERNAL))
            if src.arf is not None:
                ch |= self.set_arf(dst, src.arf, lambda src=src: self.derive(
                    rule, f"Arf{_arg(dst.expr)} = {src.arf}: same knot as {src.expr}", [src.arf_trace], EXTERNAL))
        return ch

    def sat_inverse_pattern(self, n: NodeFacts) -> bool:
        x = n.expr
        if not isinstance(x, Sat) or not isinstance(x.companion, Unknot):
            return False
        p = self.pattern(x)
        if p.w != 1 or p.meridian_ng is not True or p.tilde_slice is not True:
            return False
        return n.gsh[x.r].lower_hi(0, lambda: self.derive(
            "inverse-pattern", f"{p.name} has slice closure and its meridian is normally generated by the "
            f"meridian of the solid torus: {x} is {x.r}-shake slice", basis=RULE, caveats=[MOD_SPC4]))

    # ------------------------------------------------------------------
    # Whitehead doubles

    def wh_witness(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Wh):
            return False
        k = self.of(n.expr.knot)
        good = [(pair, d) for pair, d in sorted(k.wits.items()) if pair[0] >= 0]
        if not good:
            return False
        pair, d = good[0]
        return self.add_witness(n, 1, 0, lambda: self.derive(
            "whitehead-witness", f"companion witness {pair} has tb >= 0: Wh has a Legendrian (1, 0)", [d]))

    def wh_suitable(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Wh):
            return False
        k = self.of(n.expr.knot)
        if k.suit is None or k.suit[0] < 0:
            return False
        return self.add_suit(n, 1, lambda: self.derive(
            "whitehead-suitable", f"companion is {k.suit[0]}-suitable with r >= 0: {n.expr} is 1-suitable",
            [k.suit[1]]))

    def wh_genus(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Wh):
            return False
        return n.g4.lower_hi(1, lambda: self.derive(
            "whitehead-genus", f"{n.expr} has a genus one Seifert surface: g4 <= 1", basis=BACKGROUND))

    # ------------------------------------------------------------------
    # mirrors and reverses

    def mirror_transfer(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Mirror):
            return False
        k = self.of(n.expr.knot)
        rule = "mirror-transfer"
        ch = self._equate(n.g4, k.g4, rule, BACKGROUND)
        ch |= self._equate(n.tau, k.tau, rule, BACKGROUND, sign=-1)
        ch |= self._equate(n.s, k.s, rule, BACKGROUND, sign=-1)
        for r in self.rs:
            ch |= self._equate(n.gsh[r], k.gsh[-r], rule, RULE)
        if k.arf is not None:
            ch |= self.set_arf(n, k.arf, lambda: self.derive(rule, f"Arf{_arg(n.expr)} = Arf of the mirror", [k.arf_trace], BACKGROUND))
        if n.arf is not None:
            ch |= self.set_arf(k, n.arf, lambda: self.derive(rule, f"Arf{_arg(k.expr)} = Arf of the mirror", [n.arf_trace], BACKGROUND))
        return ch

    def reverse_invariance(self, n: NodeFacts) -> bool:
        if not isinstance(n.expr, Reverse):
            return False
        k = self.of(n.expr.knot)
        rule = "reverse-invariance"
        ch = self._equate(n.g4, k.g4, rule, BACKGROUND)
        ch |= self._equate(n.tau, k.tau, rule, BACKGROUND)
        ch |= self._equate(n.s, k.s, rule, BACKGROUND)
        for r in self.rs:
            ch |= self._equate(n.gsh[r], k.gsh[r], rule, BACKGROUND)
        for src, dst in ((k, n), (n, k)):
            for (t, rho), d in list(src.wits.items()):
                ch |= self.add_witness(dst, t, -rho, lambda d=d, t=t, rho=rho: self.derive(
                    "reverse-witness", f"reversing orientation negates rot: ({t}, {-rho})", [d]))
            if src.arf is not None:
                ch |= self.set_arf(dst, src.arf, lambda src=src, dst=dst: self.derive(
                    rule, f"Arf{_arg(dst.expr)} = Arf of the reverse", [src.arf_trace], BACKGROUND))
        return ch

    # ------------------------------------------------------------------
    # results

    @property
    def top(self) -> NodeFacts:
        return self.facts[self.root]

    def facts_for(self, e: KnotExpr) -> NodeFacts:
        x = unfold(normalize(e, self.registry), self.registry)
        return self.facts[x]

    def snapshot(self) -> dict:
        """Values only (no traces), for comparing runs."""
        out = {}
        for x, f in self.facts.items():
            out[str(x)] = (
                f.g4.values(), f.tau.values(), f.s.values(),
                tuple((r, iv.values()) for r, iv in sorted(f.gsh.items())),
                f.tb, f.arf, tuple(sorted(f.wits)), None if f.suit is None else f.suit[0],
            )
        return out

    def interval_trace(self, iv: Interval) -> Derivation:
        """A single derivation covering both endpoints of ``iv``."""
        if iv.lo_trace is not None and iv.lo_trace is iv.hi_trace:
            return iv.lo_trace
        prem = [d for d in (iv.lo_trace, iv.hi_trace) if d is not None]
        if len(prem) == 1 and (iv.lo is None or iv.hi is None or iv.lo_trace is None or iv.hi_trace is None):
            return prem[0]
        return self.derive("interval", f"{iv.name} {iv}", prem, basis=RULE)


def propagate(e: KnotExpr, registry: Registry | None = None, rs: Iterable[int] = (),
              external: Iterable[ExternalFact] = (), rng: random.Random | None = None) -> FactStore:
    return FactStore(e, registry, rs, external, rng)


def inject_suitability(e: KnotExpr, r: int, note: str = "") -> ExternalFact:
    return ExternalFact(e, "suitable", r=r, note=note)


def suit_cert_fact(c: SuitCert) -> ExternalFact:
    return ExternalFact(c.expr, "suitable", r=c.r, note=f"certificate <{c.rule}>")
