"""Certified termination constructors.

Every constructor here returns a relation carrying a certificate: the rule
that justifies the absence of infinite descent, the certificates of the
inputs it was built from, and a trust level. Sound rules are accepted
without re-checking; claimed rules are taken as hints and re-verified on
use, because some of them are wrong on purpose (composition being the
canonical offender).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import MalformedExpr, UnknownNamedFunction
from .noether import (METHOD_CERTIFICATE, NOETHERIAN, NoetherianVerdict,
                      _find_cycle, is_noetherian)
from .relations import Relation, from_pairs, from_successors, pair_values
from .spaces import DEFAULT_MAX_SPACE, Space, explicit
from .values import (Int, Interval, IntervalSet, Node, Pair, Seq, Tup,
                     interval_strictly_within)

SOUND = "sound"
CLAIMED = "claimed"

CLAIMED_RULES = frozenset({"COMPOSE", "PARENT", "ANCESTOR"})

RULES = (
    "COMPOSE", "CLOSURE", "SUBREL", "RESTRICT", "INDUCED", "PROJECTION",
    "INVERSE", "ACYCLIC", "ACYCLIC'", "PARENT", "ANCESTOR", "CHILD",
    "DESCENDANT", "SUPSET", "SUBSET", "SUCCESSOR", "INTGREATER",
    "PREDECESSOR", "INTLESSER", "INTDIFF", "INTSUM", "MAXINT", "MININT",
    "SUPINTERVAL", "SUBINTERVAL", "INTERVAL", "INTERVAL'", "INTERVALSUPSET",
    "INTERVALSUBSET", "INTERVALMAX",
)

EXHAUSTIVE = "EXHAUSTIVE"


@dataclass(frozen=True, slots=True)
class NoetherianCert:
    """Why a relation terminates: a rule, its input certificates, a trust
    level. A certificate is only as sound as everything under it."""
    rule: str
    premises: tuple = ()
    trust: str = SOUND

    @property
    def sound(self) -> bool:
        if self.trust != SOUND:
            return False
        return all(p is not None and p.sound for p in self.premises)

    def render(self) -> str:
        inner = ""
        if self.premises:
            inner = "[" + ", ".join(p.render() if p else "?" for p in self.premises) + "]"
        tag = "" if self.sound else " (claimed)"
        return f"{self.rule}{inner}{tag}"


def certify(r: Relation, cap: int = DEFAULT_MAX_SPACE,
            fuel: int | None = None) -> NoetherianVerdict:
    """Sound certificate: trusted outright. Claimed or absent: re-checked."""
    cert = getattr(r, "cert", None)
    if cert is not None and cert.sound:
        return NoetherianVerdict(NOETHERIAN, None, METHOD_CERTIFICATE, 0)
    return is_noetherian(r, cap, fuel)


def exhaustive_cert() -> NoetherianCert:
    return NoetherianCert(EXHAUSTIVE)


# -- space shape guards ------------------------------------------------------

def _want_int_range(space: Space, rule: str, natural: bool = False) -> None:
    if space.kind != "int_range":
        raise MalformedExpr(f"{rule} needs an integer window space, "
                            f"got {space.describe()}")
    if natural and space.lo < 0:
        raise MalformedExpr(f"{rule} needs a window of naturals, "
                            f"got {space.describe()}")


def _want_int_pairs(space: Space, rule: str, natural: bool = False) -> None:
    ok = (space.kind == "product" and len(space.components) == 2
          and all(c.kind == "int_range" for c in space.components))
    if not ok:
        raise MalformedExpr(f"{rule} needs a product of two integer windows, "
                            f"got {space.describe()}")
    if natural and any(c.lo < 0 for c in space.components):
        raise MalformedExpr(f"{rule} needs windows of naturals, "
                            f"got {space.describe()}")


def _want_intervals(space: Space, rule: str) -> None:
    if space.kind != "intervals_of":
        raise MalformedExpr(f"{rule} needs a space of subintervals, "
                            f"got {space.describe()}")


def _want_interval_sets(space: Space, rule: str) -> None:
    if space.kind != "interval_sets_of":
        raise MalformedExpr(f"{rule} needs a space of subinterval sets, "
                            f"got {space.describe()}")


def _want_seq_sets(space: Space, rule: str, cap: int) -> None:
    if space.kind != "explicit":
        raise MalformedExpr(f"{rule} needs an explicit space of set-like "
                            f"sequences, got {space.describe()}")
    for v in space.values(cap):
        if not isinstance(v, Seq):
            raise MalformedExpr(f"{rule} members must be sequences, got {v!r}")
        if any(v.items[i] >= v.items[i + 1] for i in range(len(v.items) - 1)):
            raise MalformedExpr(f"{rule} members must be strictly increasing "
                                f"sequences, got {v!r}")


# -- building blocks ---------------------------------------------------------

def _leaf(space, succ, holds, name, cap=DEFAULT_MAX_SPACE) -> Relation:
    r = from_successors(space, space, succ, holds=holds, name=name)
    r.cert = NoetherianCert(name, (),
                            CLAIMED if name in CLAIMED_RULES else SOUND)
    return r


def _space_filter(space, holds, name, cap) -> Relation:
    def succ(a):
        # generator so emptiness probes stop at the first hit
        return (b for b in space.values(cap) if holds(a, b))
    return _leaf(space, succ, holds, name, cap)


# -- the named families ------------------------------------------------------

def _successor(space, params, cap):
    _want_int_range(space, "SUCCESSOR", natural=True)
    lo = space.lo
    def succ(a):
        return (Int(a.value - 1),) if a.value - 1 >= lo else ()
    def holds(a, b):
        return b.value == a.value - 1 and a.value - 1 >= lo
    return _leaf(space, succ, holds, "SUCCESSOR")


def _intgreater(space, params, cap):
    _want_int_range(space, "INTGREATER", natural=True)
    lo = space.lo
    def succ(a):
        return [Int(k) for k in range(lo, a.value)]
    def holds(a, b):
        return b.value < a.value
    return _leaf(space, succ, holds, "INTGREATER")


def _predecessor(space, params, cap):
    _want_int_range(space, "PREDECESSOR")
    hi = space.hi
    def succ(a):
        return (Int(a.value + 1),) if a.value + 1 <= hi else ()
    def holds(a, b):
        return b.value == a.value + 1 and a.value + 1 <= hi
    return _leaf(space, succ, holds, "PREDECESSOR")


def _intlesser(space, params, cap):
    _want_int_range(space, "INTLESSER")
    hi = space.hi
    def succ(a):
        return [Int(k) for k in range(a.value + 1, hi + 1)]
    def holds(a, b):
        return b.value > a.value
    return _leaf(space, succ, holds, "INTLESSER")


def _intdiff(space, params, cap):
    _want_int_pairs(space, "INTDIFF")
    def gap(v):
        return abs(v.first.value - v.second.value)
    return _space_filter(space, lambda a, b: gap(b) < gap(a), "INTDIFF", cap)


def _intsum(space, params, cap):
    _want_int_pairs(space, "INTSUM", natural=True)
    def tot(v):
        return v.first.value + v.second.value
    return _space_filter(space, lambda a, b: tot(b) < tot(a), "INTSUM", cap)


def _maxint(space, params, cap):
    _want_int_pairs(space, "MAXINT", natural=True)
    def top(v):
        return max(v.first.value, v.second.value)
    return _space_filter(space, lambda a, b: top(b) < top(a), "MAXINT", cap)


def _minint(space, params, cap):
    _want_int_pairs(space, "MININT", natural=True)
    def bot(v):
        return min(v.first.value, v.second.value)
    return _space_filter(space, lambda a, b: bot(b) < bot(a), "MININT", cap)


def _supset(space, params, cap):
    _want_seq_sets(space, "SUPSET", cap)
    def holds(a, b):
        sa, sb = set(a.items), set(b.items)
        return sb < sa
    return _space_filter(space, holds, "SUPSET", cap)


def _subset(space, params, cap):
    _want_seq_sets(space, "SUBSET", cap)
    def holds(a, b):
        sa, sb = set(a.items), set(b.items)
        return sa < sb
    return _space_filter(space, holds, "SUBSET", cap)


def _supinterval(space, params, cap):
    """Interval strictly shrinks, set-wise."""
    _want_intervals(space, "SUPINTERVAL")
    lo, hi = space.lo, space.hi
    def succ(a):
        if a.empty:
            return []
        out = [Interval(s, s - 1) for s in range(lo, hi + 2)]
        for s in range(a.lo, a.hi + 1):
            for e in range(s, a.hi + 1):
                if not (s == a.lo and e == a.hi):
                    out.append(Interval(s, e))
        return out
    def holds(a, b):
        return interval_strictly_within(b, a)
    return _leaf(space, succ, holds, "SUPINTERVAL")


def _subinterval(space, params, cap):
    """Interval strictly grows, set-wise, bounded by the window."""
    _want_intervals(space, "SUBINTERVAL")
    lo, hi = space.lo, space.hi
    def succ(a):
        out = []
        if a.empty:
            for s in range(lo, hi + 1):
                for e in range(s, hi + 1):
                    out.append(Interval(s, e))
            return out
        for s in range(lo, a.lo + 1):
            for e in range(a.hi, hi + 1):
                if not (s == a.lo and e == a.hi):
                    out.append(Interval(s, e))
        return out
    def holds(a, b):
        return interval_strictly_within(a, b)
    return _leaf(space, succ, holds, "SUBINTERVAL")


def _interval(space, params, cap):
    _want_intervals(space, "INTERVAL")
    return _space_filter(space, lambda a, b: b.width < a.width,
                         "INTERVAL", cap)


def _interval_up(space, params, cap):
    _want_intervals(space, "INTERVAL'")
    return _space_filter(space, lambda a, b: b.width > a.width,
                         "INTERVAL'", cap)


def _intervalsupset(space, params, cap):
    _want_interval_sets(space, "INTERVALSUPSET")
    return _space_filter(space, lambda a, b: b.members < a.members,
                         "INTERVALSUPSET", cap)


def _intervalsubset(space, params, cap):
    _want_interval_sets(space, "INTERVALSUBSET")
    return _space_filter(space, lambda a, b: a.members < b.members,
                         "INTERVALSUBSET", cap)


def _intervalmax(space, params, cap):
    _want_interval_sets(space, "INTERVALMAX")
    return _space_filter(space, lambda a, b: b.max_width() < a.max_width(),
                         "INTERVALMAX", cap)


def _acyclic_edges(space, params, cap, *, flip: bool, rule: str):
    edges = params.get("edges")
    if edges is None:
        raise MalformedExpr(f"{rule} needs an edges parameter")
    pairs = []
    for e in edges:
        a, b = e
        if not space.contains(a) or not space.contains(b):
            raise MalformedExpr(f"{rule} edge endpoint outside the space")
        pairs.append((a, b))
    probe = from_pairs(space, space, pairs, check=False)
    outcome, path, _ = _find_cycle(probe, pair_values(pairs), None)
    if outcome == "cycle":
        raise MalformedExpr(f"{rule} edges contain a cycle")
    if flip:
        pairs = [(b, a) for a, b in pairs]
    r = from_pairs(space, space, pairs, name=rule, check=False)
    r.cert = NoetherianCert(rule)
    return r


def _acyclic(space, params, cap):
    return _acyclic_edges(space, params, cap, flip=False, rule="ACYCLIC")


def _acyclic_up(space, params, cap):
    return _acyclic_edges(space, params, cap, flip=True, rule="ACYCLIC'")


def _forest_maps(space, params, cap, rule):
    parent = params.get("parent")
    if parent is None:
        raise MalformedExpr(f"{rule} needs a parent map")
    names = set()
    for v in space.values(cap):
        if not isinstance(v, Node):
            raise MalformedExpr(f"{rule} space members must be nodes, got {v!r}")
        names.add(v.name)
    kids = {}
    for child, par in parent.items():
        if child not in names or par not in names:
            raise MalformedExpr(f"{rule} parent map mentions unknown node")
        kids.setdefault(par, []).append(child)
    for start in parent:
        seen = set()
        cur = start
        while cur in parent:
            if cur in seen:
                raise MalformedExpr(f"{rule} parent map loops at {cur!r}")
            seen.add(cur)
            cur = parent[cur]
    return parent, kids


def _parent(space, params, cap):
    parent, kids = _forest_maps(space, params, cap, "PARENT")
    def succ(a):
        return [Node(c) for c in kids.get(a.name, ())]
    def holds(a, b):
        return parent.get(b.name) == a.name
    r = from_successors(space, space, succ, holds=holds, name="PARENT")
    r.cert = NoetherianCert("PARENT", (), CLAIMED)
    return r


def _ancestor(space, params, cap):
    base = _parent(space, params, cap)
    r = base.plus()
    r.name = "ANCESTOR"
    r.cert = NoetherianCert("ANCESTOR", (base.cert,), CLAIMED)
    return r


def _child(space, params, cap):
    parent, _ = _forest_maps(space, params, cap, "CHILD")
    def succ(a):
        p = parent.get(a.name)
        return (Node(p),) if p is not None else ()
    def holds(a, b):
        return parent.get(a.name) == b.name
    r = from_successors(space, space, succ, holds=holds, name="CHILD")
    r.cert = NoetherianCert("CHILD")
    return r


def _descendant(space, params, cap):
    base = _child(space, params, cap)
    r = base.plus()
    r.name = "DESCENDANT"
    r.cert = NoetherianCert("DESCENDANT", (base.cert,))
    return r


_BUILDERS = {
    "SUCCESSOR": _successor,
    "INTGREATER": _intgreater,
    "PREDECESSOR": _predecessor,
    "INTLESSER": _intlesser,
    "INTDIFF": _intdiff,
    "INTSUM": _intsum,
    "MAXINT": _maxint,
    "MININT": _minint,
    "SUPSET": _supset,
    "SUBSET": _subset,
    "SUPINTERVAL": _supinterval,
    "SUBINTERVAL": _subinterval,
    "INTERVAL": _interval,
    "INTERVAL'": _interval_up,
    "INTERVALSUPSET": _intervalsupset,
    "INTERVALSUBSET": _intervalsubset,
    "INTERVALMAX": _intervalmax,
    "ACYCLIC": _acyclic,
    "ACYCLIC'": _acyclic_up,
    "PARENT": _parent,
    "ANCESTOR": _ancestor,
    "CHILD": _child,
    "DESCENDANT": _descendant,
}


def named(name: str, space: Space, cap: int = DEFAULT_MAX_SPACE,
          **params) -> Relation:
    """One of the named families, validated against the space shape."""
    builder = _BUILDERS.get(name)
    if builder is None:
        raise MalformedExpr(f"unknown named relation: {name!r}")
    return builder(space, params, cap)


# -- combining constructors ---------------------------------------------------

def compose_rel(r: Relation, s: Relation) -> Relation:
    """Composition. Never sound: descent through two terminating relations
    can still loop, so this certificate is only ever a claim."""
    out = r.compose(s)
    out.cert = NoetherianCert(
        "COMPOSE", (getattr(r, "cert", None), getattr(s, "cert", None)),
        CLAIMED)
    return out


def closure_of(r: Relation) -> Relation:
    out = r.plus()
    out.cert = NoetherianCert("CLOSURE", (getattr(r, "cert", None),))
    return out


def subrel(r: Relation, pairs, name: str | None = None) -> Relation:
    """Explicit subset of a relation's pairs."""
    got = []
    for a, b in pairs:
        if not r.holds(a, b):
            raise MalformedExpr(
                "subset constructor given a pair the base relation lacks")
        got.append((a, b))
    out = from_pairs(r.source, r.target, got, name=name or "subrel",
                     check=False)
    out.cert = NoetherianCert("SUBREL", (getattr(r, "cert", None),))
    return out


def restrict_to(keep, r: Relation) -> Relation:
    out = r.restrict(keep)
    out.cert = NoetherianCert("RESTRICT", (getattr(r, "cert", None),))
    return out


def inverse_of(r: Relation, cap: int = DEFAULT_MAX_SPACE) -> Relation:
    out = r.materialized(cap).inverse()
    out.cert = NoetherianCert("INVERSE", (getattr(r, "cert", None),))
    return out


def induced(fn, over: Relation, space: Space, fn_name: str | None = None,
            cap: int = DEFAULT_MAX_SPACE) -> Relation:
    """Pull a relation back through a function: a steps to b when fn(a)
    steps to fn(b) in the underlying relation."""
    if isinstance(fn, str):
        fn_name = fn_name or fn
        fn = resolve_function(fn)
    def holds(a, b):
        return over.holds(fn(a), fn(b))
    def succ(a):
        fa = fn(a)
        return (b for b in space.values(cap) if over.holds(fa, fn(b)))
    label = f"induced[{fn_name}]" if fn_name else "induced"
    out = from_successors(space, space, succ, holds=holds, name=label)
    out.cert = NoetherianCert("INDUCED", (getattr(over, "cert", None),))
    return out


def component_of(v, i: int):
    if isinstance(v, Pair):
        if i == 0:
            return v.first
        if i == 1:
            return v.second
        raise MalformedExpr(f"pair has no component {i}")
    if isinstance(v, Tup):
        if 0 <= i < len(v.items):
            return v.items[i]
        raise MalformedExpr(f"tuple has no component {i}")
    raise MalformedExpr(f"value {v!r} has no components")


def projection(i: int, comp: Relation, space: Space,
               cap: int = DEFAULT_MAX_SPACE) -> Relation:
    """Compare one coordinate of a product space by a component relation."""
    if space.kind != "product":
        raise MalformedExpr("projection needs a product space")
    if not (0 <= i < len(space.components)):
        raise MalformedExpr(f"product has no component {i}")
    def holds(a, b):
        return comp.holds(component_of(a, i), component_of(b, i))
    def succ(a):
        ca = component_of(a, i)
        return (b for b in space.values(cap)
                if comp.holds(ca, component_of(b, i)))
    out = from_successors(space, space, succ, holds=holds,
                          name=f"projection[{i}]")
    out.cert = NoetherianCert("PROJECTION", (getattr(comp, "cert", None),))
    return out


# -- named measure functions ---------------------------------------------------

def _ints_in(v):
    if isinstance(v, Int):
        return (v.value,)
    if isinstance(v, Pair):
        return (v.first.value, v.second.value)
    if isinstance(v, Tup):
        return tuple(x.value for x in v.items)
    raise MalformedExpr(f"no integer components in {v!r}")


def _fn_max(v):
    return Int(max(_ints_in(v)))


def _fn_min(v):
    return Int(min(_ints_in(v)))


def _fn_sum(v):
    return Int(sum(_ints_in(v)))


def _fn_abs_diff(v):
    a, b = _ints_in(v)
    return Int(abs(a - b))


def _fn_length(v):
    if not isinstance(v, Seq):
        raise MalformedExpr(f"length wants a sequence, got {v!r}")
    return Int(len(v.items))


def _fn_interval_width(v):
    if not isinstance(v, Interval):
        raise MalformedExpr(f"interval_width wants an interval, got {v!r}")
    return Int(v.width)


def _fn_max_interval_length(v):
    if not isinstance(v, IntervalSet):
        raise MalformedExpr(f"max_interval_length wants an interval set, got {v!r}")
    return Int(v.max_width())


def _fn_cardinality(v):
    if isinstance(v, IntervalSet):
        return Int(len(v.members))
    if isinstance(v, Seq):
        return Int(len(v.items))
    raise MalformedExpr(f"cardinality wants a set-like value, got {v!r}")


NAMED_FUNCTIONS = {
    "max": _fn_max,
    "min": _fn_min,
    "sum": _fn_sum,
    "abs_diff": _fn_abs_diff,
    "length": _fn_length,
    "interval_width": _fn_interval_width,
    "max_interval_length": _fn_max_interval_length,
    "cardinality": _fn_cardinality,
}

for _i in range(4):
    NAMED_FUNCTIONS[f"component_{_i}"] = (
        lambda v, _j=_i: component_of(v, _j))


def make_depth_fn(parent: dict):
    """Node depth in a forest given a child-to-parent map; roots at 0."""
    def depth(v):
        if not isinstance(v, Node):
            raise MalformedExpr(f"depth wants a node, got {v!r}")
        d, cur, seen = 0, v.name, set()
        while cur in parent:
            if cur in seen:
                raise MalformedExpr(f"parent map loops at {cur!r}")
            seen.add(cur)
            cur = parent[cur]
            d += 1
        return Int(d)
    return depth


def resolve_function(name: str, parent: dict | None = None):
    if name == "depth":
        if parent is None:
            raise UnknownNamedFunction("depth (needs a parent map)")
        return make_depth_fn(parent)
    fn = NAMED_FUNCTIONS.get(name)
    if fn is None:
        raise UnknownNamedFunction(name)
    return fn


# -- convenience ---------------------------------------------------------------

def powerset_space(base_ints, limit: int = 10) -> Space:
    """Explicit space of all subsets of a few integers, each subset encoded
    as its strictly increasing sequence."""
    base = sorted(set(base_ints))
    if len(base) > limit:
        raise MalformedExpr(f"powerset base capped at {limit} elements")
    subsets = []
    for k in range(len(base) + 1):
        for combo in itertools.combinations(base, k):
            subsets.append(Seq(combo))
    return explicit(subsets)
