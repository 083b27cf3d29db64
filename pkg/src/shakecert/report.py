"""Text and JSON reports for a propagated fact store."""
from __future__ import annotations

from dataclasses import dataclass

from .engine import FactStore, NodeFacts
from .legendrian import LegWitness, pareto
from .trace import MOD_SPC4, Derivation, Interval


@dataclass
class Line:
    inv: str
    lo: int | None
    hi: int | None
    trace: Derivation | None
    text: str

    @property
    def caveats(self) -> list[str]:
        return [] if self.trace is None else sorted(self.trace.caveats)


def _suffix(caveats) -> str:
    return " (mod SPC4)" if MOD_SPC4 in caveats else ""


def _interval_line(store: FactStore, label: str, iv: Interval) -> Line:
    if iv.lo is None and iv.hi is None:
        return Line(label, None, None, None, f"{label} {iv}")
    d = store.interval_trace(iv)
    return Line(label, iv.lo, iv.hi, d, f"{label} {iv}")


def lines(store: FactStore, n: NodeFacts | None = None, rs=None) -> list[Line]:
    """Report lines in a fixed order.  Calling this may add combined
    interval derivations to the store, so call it once per report."""
    n = store.top if n is None else n
    rs = (store.requested or [0]) if rs is None else rs
    out = [_interval_line(store, "g4", n.g4), _interval_line(store, "tau", n.tau), _interval_line(store, "s", n.s)]
    for r in rs:
        out.append(_interval_line(store, f"gsh^{r}", n.gsh[r]))
    if n.tb is None:
        out.append(Line("TB", None, None, None, "TB ∈ [-inf, +inf]"))
    else:
        out.append(Line("TB", n.tb, None, n.tb_trace, f"TB >= {n.tb}"))
    if n.arf is None:
        out.append(Line("Arf", None, None, None, "Arf unknown"))
    else:
        out.append(Line("Arf", n.arf, n.arf, n.arf_trace, f"Arf = {n.arf}"))
    if n.suit is not None:
        out.append(Line("suitable", n.suit[0], None, n.suit[1], f"{n.suit[0]}-suitable"))
    for w in pareto(LegWitness(*pair) for pair in n.wits):
        d = n.wits[w.pair]
        out.append(Line("witness", w.tb, w.rot, d, f"witness (tb, rot) = ({w.tb}, {w.rot})"))
    return out


def render_text(store: FactStore, rs=None) -> str:
    out = [str(store.display)]
    for line in lines(store, rs=rs):
        tag = "" if line.trace is None else f"  [{line.trace.id}]"
        out.append(f"  {line.text}{tag}{_suffix(line.caveats)}")
    return "\n".join(out) + "\n"


def _trace_closure(roots) -> dict[str, dict]:
    seen: dict[str, Derivation] = {}
    for d in roots:
        for x in d.walk():
            seen[x.id] = x
    order = sorted(seen, key=lambda k: int(k[1:]))
    return {k: seen[k].to_json() for k in order}


def report_json(store: FactStore, rs=None) -> dict:
    inv, wits, roots = {}, [], []
    for line in lines(store, rs=rs):
        tid = None if line.trace is None else line.trace.id
        if line.trace is not None:
            roots.append(line.trace)
        if line.inv == "witness":
            wits.append({"tb": line.lo, "rot": line.hi, "trace_id": tid})
            continue
        inv[line.inv] = {"lo": line.lo, "hi": line.hi, "trace_id": tid, "caveats": line.caveats}
    return {"expr": str(store.display), "invariants": inv, "witnesses": wits, "traces": _trace_closure(roots)}


def explain(store: FactStore, trace_id: str) -> str:
    if trace_id not in store.traces:
        raise KeyError(trace_id)
    return store.traces[trace_id].render() + "\n"
