"""Five worked loops, each assembled from a certified order and a seed body.

Every instance bundles its loop definition with the oracle context, the
designated input, a single-run choice policy where the classical algorithm
has one, and the classical variant measure for that loop. Spaces are built
lazily so bulk sweeps never enumerate what a run does not touch.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .catalog import NoetherianCert
from .errors import ParameterOutOfRange
from . import oracles
from .loops import LoopDef, make_loop
from .relations import from_successors
from .spaces import (DEFAULT_MAX_SPACE, explicit, filtered, int_range,
                     interval_sets_of, lazy_explicit, product)
from .values import (Int, Interval, IntervalSet, Node, Pair, Seq, Tup,
                     interval_strictly_within, sort_values, value_key)

EXAMPLE_NAMES = ("gcd", "seq_search", "general_search_interval",
                 "general_search_intervalset", "partition", "lamsort")

# flag name -> parser kind, per example; used by the command line
EXAMPLE_PARAMS = {
    "gcd": (("a", "int"), ("b", "int"), ("bound", "int?")),
    "seq_search": (("t", "ints"), ("x", "int")),
    "general_search_interval": (("t", "ints"), ("x", "int")),
    "general_search_intervalset": (("t", "ints"), ("x", "int")),
    "partition": (("t", "ints"), ("pivot", "int")),
    "lamsort": (("t", "ints"),),
}

EXAMPLE_SUMMARIES = {
    "gcd": "subtractive gcd on pairs sharing a gcd, ordered by max",
    "seq_search": "scan a growing prefix until a hit or the end",
    "general_search_interval": "shrink a candidate interval set-wise",
    "general_search_intervalset": "accumulate intervals that miss the key",
    "partition": "three-way pointer walk splitting around a pivot",
    "lamsort": "sort by repeatedly partitioning a widest-enough block",
}


@dataclass(frozen=True, slots=True)
class ExampleInstance:
    name: str
    loop: LoopDef
    input: object
    ctx: dict
    params: dict
    chooser: object
    variant: object
    variant_name: str
    checked: bool

    def oracle_check(self, input_value, terminal) -> bool:
        ctx = dict(self.ctx)
        ctx["loop"] = self.loop
        return oracles.check(self.loop.postcondition, ctx, input_value,
                             terminal)


def _as_items(t) -> tuple:
    items = tuple(t)
    for v in items:
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParameterOutOfRange(f"array items must be integers, got {v!r}")
    return items


def _perm_count(items) -> int:
    total = math.factorial(len(items))
    for v in set(items):
        total //= math.factorial(items.count(v))
    return total


# -- shared partition machinery ------------------------------------------------

def _partition_step(items, a, b, pivot):
    """One move of the three-way walk on 1-based bounds a <= b."""
    if items[a - 1] <= pivot:
        return items, a + 1, b
    if items[b - 1] >= pivot:
        return items, a, b - 1
    moved = list(items)
    moved[a - 1], moved[b - 1] = moved[b - 1], moved[a - 1]
    return tuple(moved), a + 1, b - 1


def _partition_run(items, lo, hi, pivot):
    """Drive the walk to its exit a = b + 1. This is the partition body
    iterated deterministically, reused by lamsort as its sub-procedure."""
    a, b = lo, hi
    while a <= b:
        items, a, b = _partition_step(items, a, b, pivot)
    return items, a, b


# -- gcd -----------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gcd_core(g: int, bound: int, check: bool) -> LoopDef:
    base = product(int_range(1, bound), int_range(1, bound))
    space = filtered(base,
                     lambda v: math.gcd(v.first.value, v.second.value) == g,
                     pred_id=f"gcd={g}")

    def top(v):
        return v.first.value if v.first.value >= v.second.value else v.second.value

    def order_succ(p):
        lim = top(p)
        return (q for q in space.values() if top(q) < lim)

    order = from_successors(space, space, order_succ,
                            holds=lambda p, q: top(q) < top(p),
                            name="max-descent")
    order.cert = NoetherianCert("SUBREL", (NoetherianCert("MAXINT"),))

    def body_succ(p):
        m, n = p.first.value, p.second.value
        if m > n:
            return (Pair(Int(m - n), Int(n)),)
        if n > m:
            return (Pair(Int(m), Int(n - m)),)
        return ()

    body = from_successors(space, space, body_succ, name="subtract-larger")
    init = from_successors(space, space, lambda v: (v,),
                           holds=lambda v, s: v == s, name="start")
    return make_loop(space, order, init, body, postcondition="gcd",
                     check=check)


def _gcd_instance(params, check, cap):
    a = params["a"]
    b = params["b"]
    if not (isinstance(a, int) and isinstance(b, int)) or a < 1 or b < 1:
        raise ParameterOutOfRange("gcd needs positive integers a and b")
    bound = params.get("bound") or max(a, b)
    if bound < max(a, b):
        raise ParameterOutOfRange("gcd bound must cover both inputs")
    g = math.gcd(a, b)
    if check is None:
        check = bound <= 32
    loop = _gcd_core(g, bound, check)
    return ExampleInstance(
        name="gcd", loop=loop, input=Pair(Int(a), Int(b)), ctx={},
        params={"a": a, "b": b, "bound": bound}, chooser=None,
        variant=lambda s: max(s.first.value, s.second.value),
        variant_name="max", checked=check)


# -- sequential search ----------------------------------------------------------

def _seq_search_instance(params, check, cap):
    t = _as_items(params["t"])
    x = params["x"]
    n = len(t)
    prefixes = []
    for i in range(n + 1):
        if x in t[:i]:
            break
        prefixes.append(Interval(1, i))
    space = explicit(prefixes)

    def order_succ(cur):
        return (j for j in space.values()
                if interval_strictly_within(cur, j))

    order = from_successors(
        space, space, order_succ,
        holds=lambda cur, j: interval_strictly_within(cur, j),
        name="prefix-growth")
    order.cert = NoetherianCert("SUBREL", (NoetherianCert("SUBINTERVAL"),))

    def body_succ(cur):
        i = cur.hi
        if i < n and t[i] != x:
            return (Interval(1, i + 1),)
        return ()

    body = from_successors(space, space, body_succ, name="scan-one-more")
    inputs = explicit([Node("start")])
    init = from_successors(inputs, space, lambda v: (Interval(1, 0),),
                           name="empty-prefix")
    loop = make_loop(space, order, init, body,
                     postcondition="membership_prefix",
                     check=True if check is None else check)
    return ExampleInstance(
        name="seq_search", loop=loop, input=Node("start"),
        ctx={"t": t, "x": x}, params={"t": t, "x": x}, chooser=None,
        variant=lambda s: n - s.hi, variant_name="interval_width (unscanned side)",
        checked=True if check is None else check)


# -- general search, interval model ----------------------------------------------

def _interval_slice(t, interval):
    return t[interval.lo - 1:interval.hi]


def _gsi_instance(params, check, cap):
    t = _as_items(params["t"])
    x = params["x"]
    n = len(t)
    present = x in t
    states = []
    if not present:
        states.append(Interval(1, 0))
    for lo in range(1, n + 1):
        for hi in range(lo, n + 1):
            if (x in _interval_slice(t, Interval(lo, hi))) == present:
                states.append(Interval(lo, hi))
    space = explicit(states)

    def order_succ(cur):
        return (j for j in space.values()
                if interval_strictly_within(j, cur))

    order = from_successors(
        space, space, order_succ,
        holds=lambda cur, j: interval_strictly_within(j, cur),
        name="interval-shrink")
    order.cert = NoetherianCert("SUBREL", (NoetherianCert("SUPINTERVAL"),))

    # any strict subinterval that keeps the space predicate is a legal move
    body = order

    inputs = explicit([Node("start")])
    start = Interval(1, n) if n >= 1 else Interval(1, 0)
    init = from_successors(inputs, space, lambda v: (start,),
                           name="whole-range")

    def midpoint(cur, succs):
        # binary-search policy; sensible when t is sorted, safe otherwise
        mid = (cur.lo + cur.hi) // 2
        if t[mid - 1] == x:
            nxt = Interval(mid, mid)
        elif t[mid - 1] < x:
            nxt = Interval(mid + 1, cur.hi)
        else:
            nxt = Interval(cur.lo, mid - 1)
        if nxt.empty:
            nxt = Interval(1, 0)
        return nxt if nxt in succs else succs[0]

    loop = make_loop(space, order, init, body, postcondition="membership",
                     check=True if check is None else check)
    return ExampleInstance(
        name="general_search_interval", loop=loop, input=Node("start"),
        ctx={"t": t, "x": x}, params={"t": t, "x": x}, chooser=midpoint,
        variant=lambda s: s.width, variant_name="interval_width",
        checked=True if check is None else check)


# -- general search, interval set model --------------------------------------------

def _gsis_instance(params, check, cap):
    t = _as_items(params["t"])
    x = params["x"]
    n = len(t)
    eligible = tuple(sort_values(
        Interval(lo, hi)
        for lo in range(1, n + 1)
        for hi in range(lo, n + 1)
        if x not in t[lo - 1:hi]))
    hits = tuple(i + 1 for i, v in enumerate(t) if v == x)

    base = interval_sets_of(1, n) if n >= 1 else interval_sets_of(1, 0)
    pred_id = f"avoid x at {hits} in 1..{n}"
    space = filtered(
        base,
        lambda s: all(not any(m.covers(p) for p in hits) for m in s.members),
        pred_id=pred_id)

    def order_succ(s):
        return (q for q in space.values() if s.members < q.members)

    order = from_successors(space, space, order_succ,
                            holds=lambda s, q: s.members < q.members,
                            name="set-growth")
    order.cert = NoetherianCert("SUBREL", (NoetherianCert("INTERVALSUBSET"),))

    def body_succ(s):
        return [IntervalSet(s.members | {j}) for j in eligible
                if j not in s.members]

    def body_holds(s, q):
        return s.members < q.members and len(q.members - s.members) == 1

    body = from_successors(space, space, body_succ, holds=body_holds,
                           name="add-one-interval")
    inputs = explicit([Node("start")])
    init = from_successors(inputs, space,
                           lambda v: (IntervalSet(frozenset()),),
                           name="no-intervals")
    if check is None:
        check = n <= 4
    loop = make_loop(space, order, init, body, postcondition="membership",
                     check=check)
    return ExampleInstance(
        name="general_search_intervalset", loop=loop, input=Node("start"),
        ctx={"t": t, "x": x}, params={"t": t, "x": x}, chooser=None,
        variant=lambda s: len(eligible) - len(s.members),
        variant_name="missing_subintervals", checked=check)


# -- partition -------------------------------------------------------------------

def _partition_space(t, pivot):
    n = len(t)
    multiset = sorted(t)

    def side_ok(items, lo, hi):
        return (all(v <= pivot for v in items[:lo - 1])
                and all(v >= pivot for v in items[hi:]))

    def contains(v):
        if not (isinstance(v, Tup) and len(v.items) == 2):
            return False
        u, cut = v.items
        if not (isinstance(u, Seq) and isinstance(cut, Interval)):
            return False
        if sorted(u.items) != multiset:
            return False
        if cut.empty:
            if not (1 <= cut.lo <= n + 1):
                return False
        elif not (1 <= cut.lo and cut.hi <= n):
            return False
        return side_ok(u.items, cut.lo, cut.hi)

    def factory():
        cuts = [Interval(a, a - 1) for a in range(1, n + 2)]
        cuts += [Interval(lo, hi)
                 for lo in range(1, n + 1) for hi in range(lo, n + 1)]
        for perm in sorted(set(itertools.permutations(t))):
            for cut in cuts:
                if side_ok(perm, cut.lo, cut.hi):
                    yield Tup((Seq(perm), cut))

    intervals = n * (n + 1) // 2 + n + 1
    return lazy_explicit(factory, contains,
                         estimate=_perm_count(t) * intervals,
                         label=f"partition states over {n} items")


def _partition_instance(params, check, cap):
    t = _as_items(params["t"])
    pivot = params["pivot"]
    n = len(t)
    space = _partition_space(t, pivot)

    def cut_of(s):
        return s.items[1]

    def order_succ(s):
        cur = cut_of(s)
        return (q for q in space.values()
                if interval_strictly_within(cut_of(q), cur))

    order = from_successors(
        space, space, order_succ,
        holds=lambda s, q: interval_strictly_within(cut_of(q), cut_of(s)),
        name="cut-shrink")
    order.cert = NoetherianCert("PROJECTION", (NoetherianCert("SUPINTERVAL"),))

    def body_succ(s):
        u, cut = s.items
        if cut.empty:
            return ()
        items, a, b = _partition_step(u.items, cut.lo, cut.hi, pivot)
        return (Tup((Seq(items), Interval(a, b))),)

    body = from_successors(space, space, body_succ, name="three-way-step")
    inputs = explicit([Seq(t)])
    init = from_successors(inputs, space,
                           lambda v: (Tup((v, Interval(1, n))),),
                           name="whole-array")
    if check is None:
        check = n <= 4
    loop = make_loop(space, order, init, body, postcondition="partition_split",
                     check=check)
    return ExampleInstance(
        name="partition", loop=loop, input=Seq(t),
        ctx={"pivot": pivot}, params={"t": t, "pivot": pivot}, chooser=None,
        variant=lambda s: s.items[1].width, variant_name="interval_width",
        checked=check)


# -- lamsort ----------------------------------------------------------------------

def _blocks_sorted(items, members) -> bool:
    blocks = sorted(members, key=value_key)
    for earlier, later in zip(blocks, blocks[1:]):
        left = items[earlier.lo - 1:earlier.hi]
        right = items[later.lo - 1:later.hi]
        if left and right and max(left) > min(right):
            return False
    return True


def _lamsort_space(t):
    n = len(t)
    multiset = sorted(t)

    def contains(v):
        if not (isinstance(v, Tup) and len(v.items) == 2):
            return False
        u, parts = v.items
        if not (isinstance(u, Seq) and isinstance(parts, IntervalSet)):
            return False
        if sorted(u.items) != multiset:
            return False
        covered = []
        for m in parts.members:
            if m.empty:
                return False
            covered.extend(m.positions())
        if sorted(covered) != list(range(1, n + 1)):
            return False
        return _blocks_sorted(u.items, parts.members)

    def compositions():
        if n == 0:
            yield IntervalSet(frozenset())
            return
        for cutmask in range(2 ** (n - 1)):
            blocks = []
            start = 1
            for pos in range(1, n):
                if cutmask >> (pos - 1) & 1:
                    blocks.append(Interval(start, pos))
                    start = pos + 1
            blocks.append(Interval(start, n))
            yield IntervalSet(frozenset(blocks))

    splits = list(compositions())

    def factory():
        for perm in sorted(set(itertools.permutations(t))):
            for parts in splits:
                if _blocks_sorted(perm, parts.members):
                    yield Tup((Seq(perm), parts))

    return lazy_explicit(factory, contains,
                         estimate=_perm_count(t) * max(1, 2 ** max(0, n - 1)),
                         label=f"block-sorted states over {n} items")


def _lamsort_split(items, block):
    """Split one wide-enough block, partitioning around min-plus-a-half so
    both sides come out non-empty; an all-equal block just sheds its head."""
    vals = items[block.lo - 1:block.hi]
    low = min(vals)
    if all(v == low for v in vals):
        return items, Interval(block.lo, block.lo), Interval(block.lo + 1, block.hi)
    moved, a, _ = _partition_run(items, block.lo, block.hi, low + 0.5)
    return moved, Interval(block.lo, a - 1), Interval(a, block.hi)


def _lamsort_apply(state, block):
    u, parts = state.items
    items, left, right = _lamsort_split(u.items, block)
    members = (parts.members - {block}) | {left, right}
    return Tup((Seq(items), IntervalSet(members)))


def _lamsort_instance(params, check, cap):
    t = _as_items(params["t"])
    n = len(t)
    space = _lamsort_space(t)

    def nblocks(s):
        return len(s.items[1].members)

    def order_succ(s):
        cur = nblocks(s)
        return (q for q in space.values() if nblocks(q) > cur)

    order = from_successors(space, space, order_succ,
                            holds=lambda s, q: nblocks(q) > nblocks(s),
                            name="block-count-growth")
    order.cert = NoetherianCert("INDUCED", (NoetherianCert("INTGREATER"),))

    def wide_blocks(s):
        return [m for m in sort_values(s.items[1].members) if m.width >= 2]

    def body_succ(s):
        return [_lamsort_apply(s, block) for block in wide_blocks(s)]

    body = from_successors(space, space, body_succ, name="split-one-block")

    inputs = explicit([Seq(t)])
    start_parts = (IntervalSet(frozenset({Interval(1, n)})) if n >= 1
                   else IntervalSet(frozenset()))
    init = from_successors(inputs, space,
                           lambda v: (Tup((v, start_parts)),),
                           name="one-block")

    def leftmost_longest(state, succs):
        blocks = wide_blocks(state)
        best = max(blocks, key=lambda m: (m.width, -m.lo))
        return _lamsort_apply(state, best)

    if check is None:
        check = n <= 4
    loop = make_loop(space, order, init, body,
                     postcondition="sorted_permutation", check=check)
    return ExampleInstance(
        name="lamsort", loop=loop, input=Seq(t), ctx={},
        params={"t": t}, chooser=leftmost_longest,
        variant=lambda s: s.items[1].max_width(),
        variant_name="max_interval_length", checked=check)


_INSTANCERS = {
    "gcd": _gcd_instance,
    "seq_search": _seq_search_instance,
    "general_search_interval": _gsi_instance,
    "general_search_intervalset": _gsis_instance,
    "partition": _partition_instance,
    "lamsort": _lamsort_instance,
}


def instantiate(name: str, *, check: bool | None = None,
                cap: int = DEFAULT_MAX_SPACE, **params) -> ExampleInstance:
    """Build one example instance. check defaults to construction-time
    proof whenever the space is small enough to enumerate comfortably."""
    maker = _INSTANCERS.get(name)
    if maker is None:
        raise ParameterOutOfRange(f"unknown example: {name!r}")
    needed = {flag for flag, kind in EXAMPLE_PARAMS[name]
              if not kind.endswith("?")}
    missing = needed - set(params)
    if missing:
        raise ParameterOutOfRange(
            f"{name} needs parameters: {', '.join(sorted(missing))}")
    extra = set(params) - {flag for flag, _ in EXAMPLE_PARAMS[name]}
    if extra:
        raise ParameterOutOfRange(
            f"{name} does not take: {', '.join(sorted(extra))}")
    return maker(params, check, cap)
