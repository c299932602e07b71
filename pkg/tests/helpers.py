"""Graph generators and brute-force helpers shared by the tests."""

from __future__ import annotations

import random
from itertools import combinations, product

import pytest
from hypothesis import strategies as st

from unfriendly.graph import FiniteGraph, Partition

NAMES = "abcdefghijklmnop"


def labelled_graphs(max_n: int):
    """Every labelled simple graph on 1..max_n vertices."""
    for n in range(1, max_n + 1):
        vs = list(NAMES[:n])
        pairs = list(combinations(vs, 2))
        for mask in range(1 << len(pairs)):
            yield FiniteGraph.build(vs, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def random_graph(rng: random.Random, max_n: int, min_n: int = 1) -> FiniteGraph:
    n = rng.randint(min_n, max_n)
    vs = list(NAMES[:n])
    p = rng.random()
    return FiniteGraph.build(vs, [e for e in combinations(vs, 2) if rng.random() < p])


def all_partitions(g: FiniteGraph):
    for bits in product((0, 1), repeat=len(g.order)):
        yield Partition(dict(zip(g.order, bits)))


def nonisomorphic_graphs(max_n: int):
    """One representative per isomorphism class on 1..max_n vertices.

    Classes on n vertices come from adding a vertex to every class on
    n-1 vertices in all possible ways, deduplicated by the nauty
    certificate. Yields ``(n, adjacency list)``.
    """
    pynauty = pytest.importorskip("pynauty")
    level = [[]]  # n = 0: the empty graph
    for n in range(1, max_n + 1):
        seen = {}
        for adj in level:
            for mask in range(1 << (n - 1)):
                new = [set(a) for a in adj] + [set()]
                for u in range(n - 1):
                    if mask >> u & 1:
                        new[u].add(n - 1)
                        new[n - 1].add(u)
                cert = pynauty.certificate(pynauty.Graph(n, adjacency_dict={i: list(s) for i, s in enumerate(new)}))
                seen.setdefault(cert, new)
        level = list(seen.values())
        for adj in level:
            yield n, adj


def from_adjacency(adj) -> FiniteGraph:
    vs = [NAMES[i] for i in range(len(adj))]
    return FiniteGraph.build(vs, [(NAMES[u], NAMES[v]) for u in range(len(adj)) for v in adj[u] if u < v])


@st.composite
def graphs(draw, max_n: int = 8, min_n: int = 1):
    n = draw(st.integers(min_n, max_n))
    vs = list(NAMES[:n])
    pairs = list(combinations(vs, 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return FiniteGraph.build(vs, [e for e, k in zip(pairs, keep) if k])


@st.composite
def graph_and_partition(draw, max_n: int = 8):
    g = draw(graphs(max_n))
    sides = draw(st.lists(st.integers(0, 1), min_size=len(g.order), max_size=len(g.order)))
    return g, Partition(dict(zip(g.order, sides)))


def path(n: int) -> FiniteGraph:
    vs = list(NAMES[:n])
    return FiniteGraph.build(vs, list(zip(vs, vs[1:])))


def complete(n: int) -> FiniteGraph:
    vs = list(NAMES[:n])
    return FiniteGraph.build(vs, list(combinations(vs, 2)))


def cycle(n: int) -> FiniteGraph:
    vs = list(NAMES[:n])
    return FiniteGraph.build(vs, list(zip(vs, vs[1:] + vs[:1])))
