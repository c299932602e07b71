"""Finite simple graphs, (partial) two-colourings and the happiness calculus.

A vertex is *happy* under a colouring when at least half of its neighbours
sit on the other side. Everything else in the package is phrased in terms
of the helpers defined here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import InputError

Edge = tuple[str, str]


def _edge(u: str, v: str) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class FiniteGraph:
    """Simple loopless undirected graph on string-labelled vertices.

    Use :meth:`build` to construct from arbitrary iterables; it validates
    and normalises edges to sorted pairs.
    """

    vertices: frozenset[str]
    edges: frozenset[Edge]

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[Iterable[str]] = ()) -> FiniteGraph:
        vs = set()
        for v in vertices:
            if not isinstance(v, str):
                raise InputError(f"vertex identifiers must be strings, got {v!r}")
            vs.add(v)
        es: set[Edge] = set()
        for pair in edges:
            pair = tuple(pair)
            if len(pair) != 2:
                raise InputError(f"edge must have exactly two endpoints: {pair!r}")
            u, v = pair
            if u == v:
                raise InputError(f"self-loop at {u!r}")
            for x in (u, v):
                if x not in vs:
                    raise InputError(f"edge {pair!r} has endpoint {x!r} outside the vertex set")
            e = _edge(u, v)
            if e in es:
                raise InputError(f"duplicate edge {e!r} (multigraphs are not supported)")
            es.add(e)
        return cls(frozenset(vs), frozenset(es))

    @cached_property
    def adjacency(self) -> Mapping[str, frozenset[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return {v: frozenset(ns) for v, ns in adj.items()}

    @cached_property
    def order(self) -> list[str]:
        """Vertices in lexicographic order; used for every deterministic scan."""
        return sorted(self.vertices)

    def neighbours(self, v: str) -> frozenset[str]:
        try:
            return self.adjacency[v]
        except KeyError:
            raise InputError(f"unknown vertex {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.neighbours(v))

    def induced(self, keep: Iterable[str]) -> FiniteGraph:
        keep = frozenset(keep)
        unknown = keep - self.vertices
        if unknown:
            raise InputError(f"unknown vertices {sorted(unknown)}")
        return FiniteGraph(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def components(self) -> list[frozenset[str]]:
        """Connected components, ordered by their least vertex."""
        seen: set[str] = set()
        comps = []
        for root in self.order:
            if root in seen:
                continue
            comp = {root}
            stack = [root]
            while stack:
                x = stack.pop()
                for y in self.adjacency[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def to_json(self) -> dict:
        return {"vertices": self.order, "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, data: Mapping) -> FiniteGraph:
        if not isinstance(data, Mapping) or "vertices" not in data:
            raise InputError("graph JSON needs a 'vertices' list")
        vertices = list(data["vertices"])
        if len(set(vertices)) != len(vertices):
            raise InputError("duplicate vertex identifiers")
        return cls.build(vertices, data.get("edges", []))

    def __repr__(self) -> str:
        return f"FiniteGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


@dataclass(frozen=True)
class Partition:
    """A possibly partial map from vertices to sides 0/1."""

    assignments: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for v, side in self.assignments.items():
            if side not in (0, 1) or isinstance(side, bool):
                raise InputError(f"side of {v!r} must be 0 or 1, got {side!r}")
        object.__setattr__(self, "assignments", dict(self.assignments))

    @property
    def domain(self) -> frozenset[str]:
        return frozenset(self.assignments)

    def __getitem__(self, v: str) -> int:
        return self.assignments[v]

    def __contains__(self, v: str) -> bool:
        return v in self.assignments

    def get(self, v: str, default=None):
        return self.assignments.get(v, default)

    def is_total_on(self, g: FiniteGraph) -> bool:
        return g.vertices <= self.domain

    def extends(self, other: Partition) -> bool:
        return all(self.assignments.get(v) == s for v, s in other.assignments.items())

    def with_sides(self, updates: Mapping[str, int]) -> Partition:
        return Partition({**self.assignments, **updates})

    def swapped(self) -> Partition:
        return Partition({v: 1 - s for v, s in self.assignments.items()})

    def check_within(self, g: FiniteGraph) -> None:
        extra = self.domain - g.vertices
        if extra:
            raise InputError(f"partition assigns vertices not in the graph: {sorted(extra)}")

    def to_json(self) -> dict:
        return {"assignments": dict(sorted(self.assignments.items()))}

    @classmethod
    def from_json(cls, data: Mapping) -> Partition:
        if not isinstance(data, Mapping) or not isinstance(data.get("assignments"), Mapping):
            raise InputError("partition JSON needs an 'assignments' object")
        return cls(dict(data["assignments"]))


@dataclass(frozen=True)
class VertexHappiness:
    degree: int
    opponents: int
    friends: int

    @property
    def happy(self) -> bool:
        return 2 * self.opponents >= self.degree


@dataclass(frozen=True)
class HappinessReport:
    records: Mapping[str, VertexHappiness]

    @property
    def unhappy(self) -> list[str]:
        return sorted(v for v, r in self.records.items() if not r.happy)

    @property
    def all_happy(self) -> bool:
        return not self.unhappy


def degree_in(g: FiniteGraph, v: str, u: Iterable[str]) -> int:
    """Number of neighbours of ``v`` inside the vertex set ``u``."""
    u = frozenset(u)
    unknown = u - g.vertices
    if unknown:
        raise InputError(f"unknown vertices {sorted(unknown)}")
    return len(g.neighbours(v) & u)


def _side(pi: Partition, v: str) -> int:
    s = pi.get(v)
    if s is None:
        raise InputError(f"partition is undefined on vertex {v!r}")
    return s


def happiness(g: FiniteGraph, pi: Partition, targets: Iterable[str] | None = None) -> HappinessReport:
    targets = g.order if targets is None else sorted(targets)
    records = {}
    for v in targets:
        nbrs = g.neighbours(v)
        mine = _side(pi, v)
        opp = sum(1 for y in nbrs if _side(pi, y) != mine)
        records[v] = VertexHappiness(len(nbrs), opp, len(nbrs) - opp)
    return HappinessReport(records)


def is_unfriendly_for(g: FiniteGraph, pi: Partition, ys: Iterable[str]) -> bool:
    return happiness(g, pi, ys).all_happy


def is_unfriendly(g: FiniteGraph, pi: Partition) -> bool:
    return is_unfriendly_for(g, pi, g.vertices)


def flip(pi: Partition, w: Iterable[str]) -> Partition:
    """Move every vertex of ``w`` to the other side."""
    w = frozenset(w)
    missing = w - pi.domain
    if missing:
        raise InputError(f"cannot flip vertices outside the partition: {sorted(missing)}")
    return pi.with_sides({v: 1 - pi[v] for v in w})


def cut_size(g: FiniteGraph, pi: Partition, incident_to: Iterable[str] | None = None) -> int:
    """Cross edges, optionally restricted to edges meeting ``incident_to``."""
    if incident_to is None:
        return sum(1 for u, v in g.edges if pi[u] != pi[v])
    inc = frozenset(incident_to)
    return sum(1 for u, v in g.edges if (u in inc or v in inc) and pi[u] != pi[v])


def dumps(obj) -> str:
    """Canonical JSON text: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
