"""Termination certification and the limit operator.

A relation is treated as pointing downward: successors of a value are the
one-step-smaller values. Certifying it means proving no infinite descending
chain exists, which over finite reachable sets is exactly the absence of a
reachable cycle. The cycle search here is a three-color depth-first walk,
kept deliberately separate from the pair-join fixpoint in
relations.classify so the two can audit each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (FuelExhausted, NotNoetherian, SpaceMismatch,
                     SpaceTooLarge, ValueOutsideSpace)
from .relations import Relation, from_pairs
from .spaces import DEFAULT_MAX_SPACE, same_space
from .values import render_chain, sort_values, value_key

DEFAULT_FUEL = 10_000

NOETHERIAN = "noetherian"
NOT_NOETHERIAN = "not_noetherian"
UNKNOWN = "unknown_fuel_exhausted"

METHOD_EXHAUSTIVE = "exhaustive"
METHOD_CERTIFICATE = "certificate"
METHOD_BOUNDED = "bounded"

MAXDEPTH = "maxdepth"
REACHABLE_MINIMA = "reachable_minima"
LIMIT_MODES = (MAXDEPTH, REACHABLE_MINIMA)


@dataclass(frozen=True, slots=True)
class Chain:
    """A descending walk: consecutive elements are relation steps.

    complete means the walk cannot be extended (its last element has no
    successors); a chain cut off by a length bound or fuel is not complete.
    """
    elements: tuple
    complete: bool

    @property
    def steps(self) -> int:
        return len(self.elements) - 1

    def __len__(self) -> int:
        return len(self.elements)

    def render(self) -> str:
        return render_chain(self.elements)


@dataclass(frozen=True, slots=True)
class NoetherianVerdict:
    """Outcome of a termination check.

    status: noetherian | not_noetherian | unknown_fuel_exhausted
    witness: a cycle chain when refuted, an over-fuel chain when unknown
    method: exhaustive | certificate | bounded
    explored: how many relation edges the check walked
    """
    status: str
    witness: Chain | None
    method: str
    explored: int = 0

    @property
    def holds(self):
        if self.status == NOETHERIAN:
            return True
        if self.status == NOT_NOETHERIAN:
            return False
        return None

    def render(self) -> str:
        if self.status == NOETHERIAN:
            return f"Noetherian ({self.method})"
        if self.status == NOT_NOETHERIAN:
            body = f"not Noetherian ({self.method})"
            if self.witness is not None:
                body = f"not Noetherian, cycle: {self.witness.render()}"
            return body
        if self.witness is not None:
            return (f"unknown: fuel exhausted after {self.explored} edges; "
                    f"descending chain of {self.witness.steps} steps found")
        return (f"unknown: bounded probe walked {self.explored} edges "
                f"without a verdict")


@dataclass(frozen=True, slots=True)
class SeedReport:
    """Outcome of the seed test: containment plus equal domains."""
    holds: bool
    subset_witness: tuple | None = None
    domain_witness: object = None
    domain_side: str | None = None   # "body_only" | "order_only"

    def render(self) -> str:
        if self.holds:
            return "seed: yes"
        if self.subset_witness is not None:
            a, b = self.subset_witness
            return f"seed: no, pair {render_chain((a, b))} falls outside the larger relation"
        side = ("smaller relation only" if self.domain_side == "body_only"
                else "larger relation only")
        return f"seed: no, domain mismatch at {render_chain((self.domain_witness,))} ({side})"


# -- cycle search ----------------------------------------------------------

def _find_cycle(r: Relation, starts, fuel: int | None):
    """Three-color DFS over the reachable part.

    Returns ("clear", None, explored), ("cycle", chain_elements, explored),
    or ("fuel", path_elements, explored).
    """
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {}
    explored = 0
    for root in starts:
        if color.get(root, WHITE) != WHITE:
            continue
        path = [root]
        iters = [iter(r._succ(root))]
        color[root] = GRAY
        while iters:
            child = next(iters[-1], None)
            if child is None:
                color[path[-1]] = BLACK
                path.pop()
                iters.pop()
                continue
            explored += 1
            if fuel is not None and explored > fuel:
                return "fuel", list(path) + [child], explored
            mark = color.get(child, WHITE)
            if mark == GRAY:
                idx = path.index(child)
                return "cycle", path[idx:] + [child], explored
            if mark == WHITE:
                color[child] = GRAY
                path.append(child)
                iters.append(iter(r._succ(child)))
    return "clear", None, explored


def is_noetherian(r: Relation, cap: int = DEFAULT_MAX_SPACE,
                  fuel: int | None = None) -> NoetherianVerdict:
    """Certify absence of infinite descent.

    Enumerable source: exhaustive, every value is a root, fuel ignored.
    Unenumerable source: bounded probe from sampled start values, cut off
    by fuel (default DEFAULT_FUEL); a clean probe is still only "unknown".
    """
    if not same_space(r.source, r.target):
        raise SpaceMismatch("termination checks need matching source and target")
    try:
        starts = r.source.values(cap)
        method = METHOD_EXHAUSTIVE
        budget = None
    except SpaceTooLarge:
        starts = r.source.sample_values(16)
        method = METHOD_BOUNDED
        budget = DEFAULT_FUEL if fuel is None else fuel
    outcome, path, explored = _find_cycle(r, starts, budget)
    if outcome == "cycle":
        return NoetherianVerdict(NOT_NOETHERIAN, Chain(tuple(path), False),
                                 method, explored)
    if outcome == "fuel":
        return NoetherianVerdict(UNKNOWN, Chain(tuple(path), False),
                                 method, explored)
    if method == METHOD_BOUNDED:
        # a finite probe that found nothing proves nothing
        return NoetherianVerdict(UNKNOWN, None, method, explored)
    return NoetherianVerdict(NOETHERIAN, None, method, explored)


def assert_noetherian(r: Relation, cap: int = DEFAULT_MAX_SPACE) -> None:
    verdict = is_noetherian(r, cap)
    if verdict.status != NOETHERIAN:
        raise NotNoetherian(verdict.witness.render() if verdict.witness else None)


# -- descent measures ------------------------------------------------------

def _descend_dp(r: Relation, a, combine, fuel: int | None):
    """Bottom-up value over the reachable part: combine(child values).

    Iterative post-order with an explicit stack; a gray node seen again is
    a cycle, reported through NotNoetherian with the offending loop.
    """
    memo = {}
    on_path = set()
    path = []
    succ_cache = {}
    explored = 0
    stack = [(a, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            kids = succ_cache[node]
            memo[node] = combine([memo[k] for k in kids])
            on_path.discard(node)
            path.pop()
            continue
        if node in memo:
            continue
        if node in on_path:
            idx = path.index(node)
            raise NotNoetherian(render_chain(path[idx:] + [node]))
        on_path.add(node)
        path.append(node)
        kids = succ_cache.get(node)
        if kids is None:
            kids = list(r._succ(node))
            succ_cache[node] = kids
            explored += len(kids)
            if fuel is not None and explored > fuel:
                raise FuelExhausted(fuel, partial=render_chain(path))
        stack.append((node, True))
        for k in kids:
            if k not in memo:
                stack.append((k, False))
    return memo[a]


def height_from(r: Relation, a, fuel: int | None = None) -> int:
    """Longest descending chain length from one value."""
    return _descend_dp(r, a, lambda kids: 1 + max(kids) if kids else 0, fuel)


def count_chains_from(r: Relation, a, fuel: int | None = None) -> int:
    """How many chains start at a (prefixes counted, the trivial one too)."""
    return _descend_dp(r, a, lambda kids: 1 + sum(kids), fuel)


def chains_from(r: Relation, a, max_len: int,
                max_chains: int = 100_000) -> list[Chain]:
    """Every chain from a of at most max_len steps, flagged complete when
    its last element is minimal. Preorder, canonically sorted siblings."""
    if not r.source.contains(a):
        raise ValueOutsideSpace(a, r.source)
    if max_len < 0:
        raise ValueError("chain length bound must be >= 0")
    out = []
    stack = [(a,)]
    while stack:
        prefix = stack.pop()
        kids = sort_values(r._succ(prefix[-1]))
        out.append(Chain(prefix, complete=not kids))
        if len(out) > max_chains:
            raise FuelExhausted(max_chains, partial=f"{len(out)} chains")
        if len(prefix) - 1 < max_len:
            for k in reversed(kids):
                stack.append(prefix + (k,))
    return out


# -- reachability and minima ------------------------------------------------

def reachable_from(r: Relation, a, fuel: int | None = None) -> frozenset:
    seen = {a}
    frontier = [a]
    explored = 0
    while frontier:
        nxt = []
        for x in frontier:
            for y in r._succ(x):
                explored += 1
                if fuel is not None and explored > fuel:
                    raise FuelExhausted(fuel)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def is_minimal(r: Relation, a) -> bool:
    for _ in r._succ(a):
        return False
    return True


def minima(r: Relation, cap: int = DEFAULT_MAX_SPACE) -> list:
    return [a for a in r.source.values(cap) if is_minimal(r, a)]


# -- the limit operator ------------------------------------------------------

def limit_from(r: Relation, a, mode: str = REACHABLE_MINIMA,
               fuel: int | None = None) -> list:
    """Values the limit relation pairs with a.

    maxdepth: iterate the one-step image height(a) times and keep that
    frontier. reachable_minima: minimal values reachable from a. Minimal
    values map to themselves under both modes. Raises NotNoetherian on a
    reachable cycle.
    """
    if mode not in LIMIT_MODES:
        raise ValueError(f"unknown limit mode: {mode!r}")
    h = height_from(r, a, fuel)   # doubles as the reachable-cycle check
    if mode == MAXDEPTH:
        frontier = {a}
        for _ in range(h):
            nxt = set()
            for x in frontier:
                nxt.update(r._succ(x))
            frontier = nxt
        return sort_values(frontier)
    return sort_values(v for v in reachable_from(r, a, fuel)
                       if is_minimal(r, v))


def limit_relation(r: Relation, mode: str = REACHABLE_MINIMA,
                   cap: int = DEFAULT_MAX_SPACE,
                   fuel: int | None = None) -> Relation:
    """The limit as a relation over r's space."""
    if not same_space(r.source, r.target):
        raise SpaceMismatch("limits need matching source and target")
    got = []
    for a in r.source.values(cap):
        for m in limit_from(r, a, mode, fuel):
            got.append((a, m))
    return from_pairs(r.source, r.source, got, check=False,
                      name=f"limit[{mode}]")


# -- seeds -----------------------------------------------------------------

def is_seed(body: Relation, order: Relation,
            cap: int = DEFAULT_MAX_SPACE) -> SeedReport:
    """body is a seed of order: body subset of order, equal domains."""
    if not (same_space(body.source, order.source)
            and same_space(body.target, order.target)):
        raise SpaceMismatch("seed test needs relations over one space")
    ok, witness = body.is_subset_of(order, cap)
    if not ok:
        return SeedReport(False, subset_witness=witness)
    # walk the space once; any() short-circuits on generator successors,
    # so dense orders never get materialized here
    for a in body.source.values(cap):
        in_body = any(True for _ in body._succ(a))
        in_order = any(True for _ in order._succ(a))
        if in_body and not in_order:
            return SeedReport(False, domain_witness=a, domain_side="body_only")
        if in_order and not in_body:
            return SeedReport(False, domain_witness=a, domain_side="order_only")
    return SeedReport(True)


def seed_gap(body: Relation, order: Relation,
             cap: int = DEFAULT_MAX_SPACE) -> list:
    """Pairs of order that body leaves unused, canonically sorted."""
    missing = order.pairs(cap) - body.pairs(cap)
    return sorted(missing, key=lambda p: (value_key(p[0]), value_key(p[1])))


# -- finitary probe -----------------------------------------------------------

def is_finitary(r: Relation, a, fuel: int = 1000):
    """(True, bound) when iterated images from a stabilize; bound is the
    step count that already covers everything zero-or-more steps away.
    (None, None) when fuel runs out first."""
    union = {a}
    frontier = frozenset((a,))
    seen_frontiers = {frontier}
    last_growth = 0
    for i in range(1, fuel + 1):
        frontier = frozenset(r.image(frontier))
        if not frontier:
            return True, i - 1
        if not (frontier <= union):
            union.update(frontier)
            last_growth = i
        elif frontier in seen_frontiers:
            return True, last_growth
        seen_frontiers.add(frontier)
    return None, None
