"""JSON documents for values, spaces, relations, loops.

Documents are human-writable; normalization reorders lists by the value
ordering and drops duplicates so that parse -> emit is byte-stable. The
expression grammar builds relations through the catalog constructors.
"""

from __future__ import annotations

import json

from . import catalog
from .errors import MalformedExpr
from .loops import LoopDef, make_loop
from .relations import Relation, from_pairs
from .spaces import (DEFAULT_MAX_SPACE, Space, explicit, int_range,
                     interval_sets_of, intervals_of, product)
from .values import (Int, Interval, IntervalSet, Node, Pair, Seq, Tup,
                     value_key)


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _need(doc, key, kind):
    if key not in doc:
        raise MalformedExpr(f"{kind} needs field {key!r}")
    return doc[key]


def _int_field(doc, key, kind):
    v = _need(doc, key, kind)
    if not isinstance(v, int) or isinstance(v, bool):
        raise MalformedExpr(f"{kind}.{key} must be an integer")
    return v


# -- values --------------------------------------------------------------------

def value_doc(v) -> dict:
    if isinstance(v, Int):
        return {"int": v.value}
    if isinstance(v, Pair):
        return {"pair": [value_doc(v.first), value_doc(v.second)]}
    if isinstance(v, Interval):
        return {"interval": [v.lo, v.hi]}
    if isinstance(v, IntervalSet):
        members = sorted(v.members, key=value_key)
        return {"iset": [[m.lo, m.hi] for m in members]}
    if isinstance(v, Seq):
        return {"seq": list(v.items)}
    if isinstance(v, Node):
        return {"node": v.name}
    if isinstance(v, Tup):
        return {"tuple": [value_doc(x) for x in v.items]}
    raise MalformedExpr(f"not a serializable value: {v!r}")


def _raw_int(x, what):
    if not isinstance(x, int) or isinstance(x, bool):
        raise MalformedExpr(f"{what} must be an integer, got {x!r}")
    return x


def _interval_of_doc(item, what):
    if not (isinstance(item, list) and len(item) == 2):
        raise MalformedExpr(f"{what} must be a [lo, hi] pair")
    lo, hi = (_raw_int(x, what) for x in item)
    if lo > hi + 1:
        raise MalformedExpr(f"{what} has impossible bounds {lo}..{hi}")
    return Interval(lo, hi)


def parse_value(doc):
    if not isinstance(doc, dict) or len(doc) != 1:
        raise MalformedExpr(f"a value document has exactly one tag: {doc!r}")
    tag, body = next(iter(doc.items()))
    if tag == "int":
        return Int(_raw_int(body, "int value"))
    if tag == "pair":
        if not (isinstance(body, list) and len(body) == 2):
            raise MalformedExpr("pair value needs two parts")
        return Pair(parse_value(body[0]), parse_value(body[1]))
    if tag == "interval":
        return _interval_of_doc(body, "interval value")
    if tag == "iset":
        if not isinstance(body, list):
            raise MalformedExpr("iset value needs a list of intervals")
        members = [_interval_of_doc(item, "iset member") for item in body]
        for m in members:
            if m.empty:
                raise MalformedExpr("iset members must be non-empty")
        return IntervalSet(frozenset(members))
    if tag == "seq":
        if not isinstance(body, list):
            raise MalformedExpr("seq value needs a list of integers")
        return Seq(tuple(_raw_int(x, "seq item") for x in body))
    if tag == "node":
        if not isinstance(body, str) or not body:
            raise MalformedExpr("node value needs a non-empty name")
        return Node(body)
    if tag == "tuple":
        if not isinstance(body, list) or len(body) < 2:
            raise MalformedExpr("tuple value needs at least two parts")
        return Tup(tuple(parse_value(x) for x in body))
    raise MalformedExpr(f"unknown value tag {tag!r}")


# -- spaces --------------------------------------------------------------------

def space_doc(space: Space) -> dict:
    k = space.kind
    if k == "int_range":
        return {"kind": "int_range", "lo": space.lo, "hi": space.hi}
    if k == "intervals_of":
        return {"kind": "intervals_of", "lo": space.lo, "hi": space.hi}
    if k == "interval_sets_of":
        return {"kind": "interval_sets_of", "lo": space.lo, "hi": space.hi}
    if k == "product":
        return {"kind": "product",
                "of": [space_doc(c) for c in space.components]}
    if k == "explicit" and space._factory is None:
        return {"kind": "explicit",
                "values": [value_doc(v) for v in space.values()]}
    raise MalformedExpr(f"space is not serializable: {space.describe()}")


def parse_space(doc) -> Space:
    if not isinstance(doc, dict):
        raise MalformedExpr("a space document is an object with a kind")
    kind = _need(doc, "kind", "space")
    if kind == "int_range":
        lo = _int_field(doc, "lo", "int_range")
        hi = _int_field(doc, "hi", "int_range")
        if lo > hi:
            raise MalformedExpr(f"empty integer window {lo}..{hi}")
        return int_range(lo, hi)
    if kind == "intervals_of":
        lo = _int_field(doc, "lo", "intervals_of")
        hi = _int_field(doc, "hi", "intervals_of")
        if lo > hi:
            raise MalformedExpr(f"empty interval window {lo}..{hi}")
        return intervals_of(lo, hi)
    if kind == "interval_sets_of":
        lo = _int_field(doc, "lo", "interval_sets_of")
        hi = _int_field(doc, "hi", "interval_sets_of")
        if lo > hi:
            raise MalformedExpr(f"empty interval window {lo}..{hi}")
        return interval_sets_of(lo, hi)
    if kind == "product":
        parts = _need(doc, "of", "product")
        if not isinstance(parts, list) or len(parts) < 2:
            raise MalformedExpr("product needs at least two component spaces")
        return product(*(parse_space(p) for p in parts))
    if kind == "explicit":
        vals = _need(doc, "values", "explicit")
        if not isinstance(vals, list) or not vals:
            raise MalformedExpr("explicit space needs a non-empty value list")
        return explicit([parse_value(v) for v in vals])
    raise MalformedExpr(f"unknown space kind {kind!r}")


# -- relation expressions --------------------------------------------------------

def _parse_pairs(body, what):
    if not isinstance(body, list):
        raise MalformedExpr(f"{what} must be a list of [a, b] pairs")
    out = []
    for item in body:
        if not (isinstance(item, list) and len(item) == 2):
            raise MalformedExpr(f"{what} entries are two-value lists")
        out.append((parse_value(item[0]), parse_value(item[1])))
    return out


def _sorted_pairs(pairs):
    uniq = sorted(set(pairs),
                  key=lambda p: (value_key(p[0]), value_key(p[1])))
    return uniq


def parse_rel(doc, space: Space, cap: int = DEFAULT_MAX_SPACE) -> Relation:
    if not isinstance(doc, dict):
        raise MalformedExpr("a relation document is an object with a kind")
    kind = _need(doc, "kind", "relation")
    if kind == "extensional":
        pairs = _parse_pairs(_need(doc, "pairs", "extensional"), "pairs")
        return from_pairs(space, space, pairs)
    if kind == "named":
        name = _need(doc, "name", "named")
        params = {}
        if "edges" in doc:
            params["edges"] = _parse_pairs(doc["edges"], "edges")
        if "parent" in doc:
            pm = doc["parent"]
            if not isinstance(pm, dict):
                raise MalformedExpr("parent map is an object of names")
            params["parent"] = dict(pm)
        return catalog.named(name, space, cap=cap, **params)
    if kind == "closure":
        return catalog.closure_of(parse_rel(_need(doc, "of", "closure"),
                                            space, cap))
    if kind == "inverse":
        return catalog.inverse_of(parse_rel(_need(doc, "of", "inverse"),
                                            space, cap), cap)
    if kind == "compose":
        first = parse_rel(_need(doc, "first", "compose"), space, cap)
        second = parse_rel(_need(doc, "second", "compose"), space, cap)
        return catalog.compose_rel(first, second)
    if kind == "restrict":
        of = parse_rel(_need(doc, "of", "restrict"), space, cap)
        keep = _need(doc, "keep", "restrict")
        if not isinstance(keep, list):
            raise MalformedExpr("restrict.keep is a list of values")
        return catalog.restrict_to([parse_value(v) for v in keep], of)
    if kind == "subrel":
        of = parse_rel(_need(doc, "of", "subrel"), space, cap)
        pairs = _parse_pairs(_need(doc, "pairs", "subrel"), "subrel.pairs")
        return catalog.subrel(of, pairs)
    if kind == "induced":
        over_space = parse_space(_need(doc, "over_space", "induced"))
        over = parse_rel(_need(doc, "over", "induced"), over_space, cap)
        fn_name = _need(doc, "fn", "induced")
        parent = doc.get("parent")
        fn = catalog.resolve_function(fn_name, parent=parent)
        return catalog.induced(fn, over, space, fn_name=fn_name, cap=cap)
    if kind == "projection":
        i = _int_field(doc, "component", "projection")
        over_space = parse_space(_need(doc, "over_space", "projection"))
        over = parse_rel(_need(doc, "over", "projection"), over_space, cap)
        return catalog.projection(i, over, space)
    raise MalformedExpr(f"unknown relation kind {kind!r}")


def rel_doc_extensional(r: Relation, cap: int = DEFAULT_MAX_SPACE) -> dict:
    pairs = r.sorted_pairs(cap)
    return {"kind": "extensional",
            "pairs": [[value_doc(a), value_doc(b)] for a, b in pairs]}


# -- document normalization --------------------------------------------------------

def normalize_value_doc(doc) -> dict:
    return value_doc(parse_value(doc))


def normalize_space_doc(doc) -> dict:
    return space_doc(parse_space(doc))


def _normalized_pairs_field(body, what):
    pairs = _sorted_pairs(_parse_pairs(body, what))
    return [[value_doc(a), value_doc(b)] for a, b in pairs]


def normalize_rel_doc(doc) -> dict:
    """Canonical form of a relation expression: same constructor tree,
    value lists sorted and deduplicated."""
    if not isinstance(doc, dict):
        raise MalformedExpr("a relation document is an object with a kind")
    kind = _need(doc, "kind", "relation")
    if kind == "extensional":
        return {"kind": "extensional",
                "pairs": _normalized_pairs_field(
                    _need(doc, "pairs", "extensional"), "pairs")}
    if kind == "named":
        out = {"kind": "named", "name": _need(doc, "name", "named")}
        if "edges" in doc:
            out["edges"] = _normalized_pairs_field(doc["edges"], "edges")
        if "parent" in doc:
            pm = doc["parent"]
            if not isinstance(pm, dict):
                raise MalformedExpr("parent map is an object of names")
            out["parent"] = {str(k): str(v) for k, v in pm.items()}
        return out
    if kind in ("closure", "inverse"):
        return {"kind": kind,
                "of": normalize_rel_doc(_need(doc, "of", kind))}
    if kind == "compose":
        return {"kind": "compose",
                "first": normalize_rel_doc(_need(doc, "first", "compose")),
                "second": normalize_rel_doc(_need(doc, "second", "compose"))}
    if kind == "restrict":
        keep = _need(doc, "keep", "restrict")
        if not isinstance(keep, list):
            raise MalformedExpr("restrict.keep is a list of values")
        vals = sorted({parse_value(v) for v in keep}, key=value_key)
        return {"kind": "restrict",
                "of": normalize_rel_doc(_need(doc, "of", "restrict")),
                "keep": [value_doc(v) for v in vals]}
    if kind == "subrel":
        return {"kind": "subrel",
                "of": normalize_rel_doc(_need(doc, "of", "subrel")),
                "pairs": _normalized_pairs_field(
                    _need(doc, "pairs", "subrel"), "subrel.pairs")}
    if kind == "induced":
        out = {"kind": "induced",
               "fn": _need(doc, "fn", "induced"),
               "over": normalize_rel_doc(_need(doc, "over", "induced")),
               "over_space": normalize_space_doc(
                   _need(doc, "over_space", "induced"))}
        if "parent" in doc:
            out["parent"] = {str(k): str(v) for k, v in doc["parent"].items()}
        return out
    if kind == "projection":
        return {"kind": "projection",
                "component": _int_field(doc, "component", "projection"),
                "over": normalize_rel_doc(_need(doc, "over", "projection")),
                "over_space": normalize_space_doc(
                    _need(doc, "over_space", "projection"))}
    raise MalformedExpr(f"unknown relation kind {kind!r}")


# -- relation and loop files ---------------------------------------------------------

def parse_relation_file(doc, cap: int = DEFAULT_MAX_SPACE):
    if not isinstance(doc, dict):
        raise MalformedExpr("a relation file is a JSON object")
    space = parse_space(_need(doc, "space", "relation file"))
    rel = parse_rel(_need(doc, "relation", "relation file"), space, cap)
    return space, rel


def normalize_relation_file(doc) -> dict:
    if not isinstance(doc, dict):
        raise MalformedExpr("a relation file is a JSON object")
    return {"space": normalize_space_doc(_need(doc, "space", "relation file")),
            "relation": normalize_rel_doc(
                _need(doc, "relation", "relation file"))}


def parse_loop_file(doc, cap: int = DEFAULT_MAX_SPACE, *,
                    check: bool = True, fuel=None) -> LoopDef:
    if not isinstance(doc, dict):
        raise MalformedExpr("a loop file is a JSON object")
    space = parse_space(_need(doc, "space", "loop file"))
    input_space = (parse_space(doc["input_space"])
                   if "input_space" in doc else space)
    order = parse_rel(_need(doc, "order", "loop file"), space, cap)
    init_doc = _need(doc, "init", "loop file")
    if not (isinstance(init_doc, dict)
            and init_doc.get("kind") == "extensional"):
        raise MalformedExpr("loop init must be an extensional relation")
    init_pairs = _parse_pairs(_need(init_doc, "pairs", "init"), "init.pairs")
    init = from_pairs(input_space, space, init_pairs)
    body = parse_rel(_need(doc, "body", "loop file"), space, cap)
    post = doc.get("postcondition")
    if post is not None and not isinstance(post, str):
        raise MalformedExpr("postcondition is a built-in oracle name")
    return make_loop(space, order, init, body, postcondition=post,
                     check=check, cap=cap, fuel=fuel)


def normalize_loop_file(doc) -> dict:
    if not isinstance(doc, dict):
        raise MalformedExpr("a loop file is a JSON object")
    out = {"space": normalize_space_doc(_need(doc, "space", "loop file"))}
    if "input_space" in doc:
        out["input_space"] = normalize_space_doc(doc["input_space"])
    out["order"] = normalize_rel_doc(_need(doc, "order", "loop file"))
    init_doc = _need(doc, "init", "loop file")
    if not (isinstance(init_doc, dict)
            and init_doc.get("kind") == "extensional"):
        raise MalformedExpr("loop init must be an extensional relation")
    out["init"] = normalize_rel_doc(init_doc)
    out["body"] = normalize_rel_doc(_need(doc, "body", "loop file"))
    if "postcondition" in doc:
        post = doc["postcondition"]
        if not isinstance(post, str):
            raise MalformedExpr("postcondition is a built-in oracle name")
        out["postcondition"] = post
    return out


def normalize_file(doc) -> dict:
    """Canonical form for any top-level document (relation or loop file)."""
    if isinstance(doc, dict) and "order" in doc and "body" in doc:
        return normalize_loop_file(doc)
    return normalize_relation_file(doc)


def load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedExpr(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedExpr(f"{path} is not valid JSON: {exc}") from exc
