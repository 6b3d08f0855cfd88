"""Shared strategies and helpers for the suite."""

from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from noet import Int, explicit, from_pairs

settings.register_profile(
    "suite", deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("suite")


def int_space(n: int):
    return explicit([Int(i) for i in range(n)])


@st.composite
def any_relation(draw, max_n: int = 5):
    """Arbitrary relation on a small integer space."""
    n = draw(st.integers(1, max_n))
    vals = [Int(i) for i in range(n)]
    cells = [(a, b) for a in vals for b in vals]
    picked = draw(st.lists(st.sampled_from(cells), unique=True, max_size=len(cells)))
    sp = explicit(vals)
    return from_pairs(sp, sp, picked)


@st.composite
def dag_relation(draw, max_n: int = 6):
    """Relation whose edges all point down a hidden arrangement: acyclic,
    hence terminating, by construction."""
    n = draw(st.integers(1, max_n))
    vals = [Int(i) for i in range(n)]
    order = draw(st.permutations(vals))
    cells = [(order[i], order[j])
             for i in range(n) for j in range(i + 1, n)]
    picked = draw(st.lists(st.sampled_from(cells), unique=True,
                           max_size=len(cells)) if cells else st.just([]))
    sp = explicit(vals)
    return from_pairs(sp, sp, picked)


def random_dag(rng: random.Random, n: int):
    """Deterministic cousin of dag_relation for the bulk acceptance sweeps."""
    vals = [Int(i) for i in range(n)]
    rng.shuffle(vals)
    pairs = [(vals[i], vals[j])
             for i in range(n) for j in range(i + 1, n)
             if rng.random() < 0.4]
    sp = explicit(sorted(vals, key=lambda v: v.value))
    return from_pairs(sp, sp, pairs)


@pytest.fixture
def tmp_rel_file(tmp_path):
    """Write a relation document to disk and hand back the path."""
    import json

    def write(doc, name="rel.json"):
        p = tmp_path / name
        p.write_text(json.dumps(doc), encoding="utf-8")
        return str(p)

    return write
