"""Knot and pattern expressions, the s-expression reader, and normalization.

Expressions are immutable trees.  ``normalize`` produces the canonical form
used everywhere else: connected sums flattened and sorted, mirrors and
reversals pushed toward the leaves, and iterated satellites collapsed into
a single satellite with a composed pattern whenever the collapse is an
isotopy (inner winding number +-1, or inner twist 0).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:
    from .patterns import Registry


class ParseError(ValueError):
    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = expected
        detail = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"position {position}: {message}{detail}")


# --------------------------------------------------------------------------
# pattern references


@dataclass(frozen=True)
class Named:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Twist:
    """The pattern ``ref`` with ``t`` extra full twists in its solid torus."""

    ref: "PatternRef"
    t: int

    def __str__(self) -> str:
        return f"(twist {self.ref} {self.t})"


@dataclass(frozen=True)
class Compose:
    """``outer * inner``: satellite by ``inner`` first, then ``outer``."""

    outer: "PatternRef"
    inner: "PatternRef"

    def __str__(self) -> str:
        return f"(compose {self.outer} {self.inner})"


PatternRef = Union[Named, Twist, Compose]


# --------------------------------------------------------------------------
# knot expressions


@dataclass(frozen=True)
class Unknot:
    def __str__(self) -> str:
        return "unknot"


@dataclass(frozen=True)
class Torus:
    p: int
    q: int

    def __post_init__(self):
        if not (2 <= self.p < self.q):
            raise ValueError(f"torus parameters must satisfy 2 <= p < q, got ({self.p}, {self.q})")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"torus parameters ({self.p}, {self.q}) are not coprime")

    def __str__(self) -> str:
        return f"(torus {self.p} {self.q})"


@dataclass(frozen=True)
class Mirror:
    knot: "KnotExpr"

    def __str__(self) -> str:
        return f"(mirror {self.knot})"


@dataclass(frozen=True)
class Reverse:
    knot: "KnotExpr"

    def __str__(self) -> str:
        return f"(rev {self.knot})"


@dataclass(frozen=True)
class Sum:
    summands: tuple["KnotExpr", ...]

    def __post_init__(self):
        if len(self.summands) < 2:
            raise ValueError("a connected sum needs at least two summands")

    def __str__(self) -> str:
        return "(sum " + " ".join(str(s) for s in self.summands) + ")"


@dataclass(frozen=True)
class Wh:
    """Untwisted positive Whitehead double."""

    knot: "KnotExpr"

    def __str__(self) -> str:
        return f"(wh {self.knot})"


@dataclass(frozen=True)
class Sat:
    """The ``r``-twisted satellite of ``companion`` with the given pattern."""

    pattern: PatternRef
    r: int
    companion: "KnotExpr"

    def __str__(self) -> str:
        return f"(sat {self.pattern} :r {self.r} {self.companion})"


KnotExpr = Union[Unknot, Torus, Mirror, Reverse, Sum, Wh, Sat]

UNKNOT = Unknot()


def inverse(e: KnotExpr) -> KnotExpr:
    """Concordance inverse ``-K``."""
    return Reverse(Mirror(e))


def children(e: KnotExpr) -> tuple[KnotExpr, ...]:
    if isinstance(e, (Mirror, Reverse, Wh)):
        return (e.knot,)
    if isinstance(e, Sum):
        return e.summands
    if isinstance(e, Sat):
        return (e.companion,)
    return ()


def subexpressions(e: KnotExpr) -> list[KnotExpr]:
    """Distinct subexpressions in post-order (children before parents)."""
    seen: dict[KnotExpr, None] = {}

    def walk(x):
        for c in children(x):
            walk(c)
        seen.setdefault(x, None)

    walk(e)
    return list(seen)


# --------------------------------------------------------------------------
# total order (only needed to canonicalize connected sums)

_KNOT_TAGS = {Unknot: 0, Torus: 1, Mirror: 2, Reverse: 3, Sum: 4, Wh: 5, Sat: 6}
_REF_TAGS = {Named: 0, Twist: 1, Compose: 2}


def ref_key(ref: PatternRef) -> tuple:
    if isinstance(ref, Named):
        return (0, ref.name)
    if isinstance(ref, Twist):
        return (1, ref_key(ref.ref), ref.t)
    return (2, ref_key(ref.outer), ref_key(ref.inner))


def sort_key(e: KnotExpr) -> tuple:
    tag = _KNOT_TAGS[type(e)]
    if isinstance(e, Unknot):
        return (tag,)
    if isinstance(e, Torus):
        return (tag, e.p, e.q)
    if isinstance(e, (Mirror, Reverse, Wh)):
        return (tag, sort_key(e.knot))
    if isinstance(e, Sum):
        return (tag, len(e.summands), tuple(sort_key(s) for s in e.summands))
    return (tag, ref_key(e.pattern), e.r, sort_key(e.companion))


# --------------------------------------------------------------------------
# reader

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(:r)\b|([+-]?\d+)|([a-z0-9_]+)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex)
        kind = ("(", ")", ":r", "int", "name", "junk")[m.lastindex - 1]
        if kind == "junk":
            raise ParseError(f"unexpected character {m.group(m.lastindex)!r}", start)
        tokens.append((kind, m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Reader:
    def __init__(self, text: str, registry: "Registry | None"):
        self.tokens = _tokenize(text)
        self.i = 0
        self.registry = registry

    def peek(self):
        return self.tokens[self.i]

    def take(self, *kinds: str):
        tok = self.tokens[self.i]
        if tok[0] not in kinds:
            got = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"unexpected {got}", tok[2], kinds)
        self.i += 1
        return tok

    def integer(self) -> tuple[int, int]:
        _, value, pos = self.take("int")
        return int(value), pos

    def expr(self) -> KnotExpr:
        kind, value, pos = self.take("(", "name")
        if kind == "name":
            if value != "unknot":
                raise ParseError(f"unknown atom {value!r}", pos, ("unknot", "("))
            return UNKNOT
        _, op, op_pos = self.take("name")
        if op == "torus":
            p, p_pos = self.integer()
            q, _ = self.integer()
            if gcd(p, q) != 1:
                raise ParseError(f"torus parameters ({p}, {q}) are not coprime", p_pos)
            p, q = min(p, q), max(p, q)
            if p < 2:
                raise ParseError(f"torus parameters must be >= 2, got ({p}, {q})", p_pos)
            node: KnotExpr = Torus(p, q)
        elif op == "mirror":
            node = Mirror(self.expr())
        elif op == "rev":
            node = Reverse(self.expr())
        elif op == "wh":
            node = Wh(self.expr())
        elif op == "sum":
            parts = [self.expr(), self.expr()]
            while self.peek()[0] != ")":
                parts.append(self.expr())
            node = Sum(tuple(parts))
        elif op == "sat":
            _, name, name_pos = self.take("name")
            if self.registry is not None and name not in self.registry:
                raise ParseError(f"unknown pattern {name!r}", name_pos)
            self.take(":r")
            r, _ = self.integer()
            node = Sat(Named(name), r, self.expr())
        else:
            raise ParseError(f"unknown operator {op!r}", op_pos,
                             ("torus", "mirror", "rev", "sum", "wh", "sat"))
        self.take(")")
        return node


def parse_expr(text: str, registry: "Registry | None" = None) -> KnotExpr:
    """Read one expression.  Pattern names are checked against ``registry``
    when one is given; pass ``None`` to skip the check."""
    reader = _Reader(text, registry)
    e = reader.expr()
    reader.take("eof")
    return e


# --------------------------------------------------------------------------
# normalization


def make_sum(parts) -> KnotExpr:
    flat: list[KnotExpr] = []
    for p in parts:
        if isinstance(p, Sum):
            flat.extend(p.summands)
        elif not isinstance(p, Unknot):
            flat.append(p)
    if not flat:
        return UNKNOT
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(sorted(flat, key=sort_key)))


def normalize_ref(ref: PatternRef) -> PatternRef:
    if isinstance(ref, Named):
        return ref
    if isinstance(ref, Twist):
        inner = normalize_ref(ref.ref)
        if isinstance(inner, Twist):
            return Twist(inner.ref, inner.t + ref.t)
        return Twist(inner, ref.t)
    outer, inner = normalize_ref(ref.outer), normalize_ref(ref.inner)
    # left-nested chain: a * (b * c) -> (a * b) * c
    while isinstance(inner, Compose):
        outer, inner = Compose(outer, inner.outer), inner.inner
    return Compose(outer, inner)


def _mirror(x: KnotExpr) -> KnotExpr:
    if isinstance(x, Unknot):
        return x
    if isinstance(x, Mirror):
        return x.knot
    if isinstance(x, Reverse):
        return _reverse(_mirror(x.knot))
    if isinstance(x, Sum):
        return make_sum(_mirror(s) for s in x.summands)
    return Mirror(x)


def _reverse(x: KnotExpr) -> KnotExpr:
    # torus knots (and their mirrors) are reversible
    if isinstance(x, (Unknot, Torus)):
        return x
    if isinstance(x, Reverse):
        return x.knot
    if isinstance(x, Mirror) and isinstance(x.knot, Torus):
        return x
    if isinstance(x, Sum):
        return make_sum(_reverse(s) for s in x.summands)
    return Reverse(x)


def normalize(e: KnotExpr, registry: "Registry | None" = None) -> KnotExpr:
    if registry is None:
        from .patterns import default_registry
        registry = default_registry()
    return _normalize(e, registry)


def _normalize(e: KnotExpr, registry: "Registry") -> KnotExpr:
    if isinstance(e, (Unknot, Torus)):
        return e
    if isinstance(e, Mirror):
        return _mirror(_normalize(e.knot, registry))
    if isinstance(e, Reverse):
        return _reverse(_normalize(e.knot, registry))
    if isinstance(e, Sum):
        return make_sum(_normalize(s, registry) for s in e.summands)
    if isinstance(e, Wh):
        return Wh(_normalize(e.knot, registry))
    companion = _normalize(e.companion, registry)
    ref = normalize_ref(e.pattern)
    if isinstance(companion, Sat) and collapses(registry.resolve(companion.pattern).w, companion.r):
        merged = Compose(Twist(ref, e.r - companion.r), companion.pattern)
        return Sat(normalize_ref(merged), companion.r, companion.companion)
    return Sat(ref, e.r, companion)


def collapses(inner_w: int, inner_r: int) -> bool:
    """Whether ``P_s(Q_r(K))`` equals ``(P_{s-r} * Q)_r(K)`` for inner winding ``inner_w``."""
    return abs(inner_w) == 1 or inner_r == 0


def unfold(e: KnotExpr, registry: "Registry") -> KnotExpr:
    """Rewrite composed and twisted pattern references back into nested
    satellites of registry patterns.  Each step is an isotopy; composed
    references that fail the collapse criterion are left in place."""
    if isinstance(e, (Unknot, Torus)):
        return e
    if isinstance(e, (Mirror, Reverse, Wh)):
        return type(e)(unfold(e.knot, registry))
    if isinstance(e, Sum):
        return Sum(tuple(unfold(s, registry) for s in e.summands))
    companion = unfold(e.companion, registry)
    ref = e.pattern
    if isinstance(ref, Twist):
        return unfold(Sat(ref.ref, ref.t + e.r, companion), registry)
    if isinstance(ref, Compose) and collapses(registry.resolve(ref.inner).w, e.r):
        inner = unfold(Sat(ref.inner, e.r, companion), registry)
        return unfold(Sat(ref.outer, e.r, inner), registry)
    return Sat(ref, e.r, companion)
