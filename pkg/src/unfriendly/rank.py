"""Bounded separator rank of finite graphs.

A graph has rank 0 when it belongs to the base family. Otherwise its rank
is the least ``mu`` for which some vertex set ``S`` with ``|S| <= k``
leaves only components of rank below ``mu``. Without the bound every
finite graph would have rank at most 1 (take ``S = V``), so ``k`` is
mandatory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping

from .errors import CapacityError, InputError
from .graph import FiniteGraph

DEFAULT_VERTEX_CEILING = 16


Adjacency = Mapping[str, frozenset[str]]


@dataclass(frozen=True)
class BaseFamily:
    """Named, isomorphism-invariant membership predicate for rank 0.

    ``member(adj, sub)`` decides whether the subgraph of ``adj`` induced on
    ``sub`` belongs to the family. Only ``all-finite`` is finitely closed
    in the strict sense; the other built-ins are hereditary (closed under
    induced subgraphs) but not under adding joined vertices, which is what
    makes their ranks interesting.
    """

    name: str
    member: Callable[[Adjacency, frozenset[str]], bool] = field(compare=False)

    def contains(self, g: FiniteGraph) -> bool:
        return self.member(g.adjacency, g.vertices)

    @classmethod
    def parse(cls, text: str) -> BaseFamily:
        text = text.strip().replace("≤", "<=")
        if text == "edgeless":
            return EDGELESS
        if text == "all-finite":
            return ALL_FINITE
        m = re.fullmatch(r"(order|maxdeg)\s*(?:<=|:)\s*(\d+)", text)
        if not m:
            raise InputError(f"unknown base family {text!r}")
        bound = int(m.group(2))
        if m.group(1) == "order":
            return order_at_most(bound)
        return maxdeg_at_most(bound)


EDGELESS = BaseFamily("edgeless", lambda adj, sub: all(adj[v].isdisjoint(sub) for v in sub))
ALL_FINITE = BaseFamily("all-finite", lambda adj, sub: True)


def order_at_most(p: int) -> BaseFamily:
    return BaseFamily(f"order<={p}", lambda adj, sub: len(sub) <= p)


def maxdeg_at_most(d: int) -> BaseFamily:
    return BaseFamily(f"maxdeg<={d}", lambda adj, sub: all(len(adj[v] & sub) <= d for v in sub))


@dataclass(frozen=True)
class WitnessNode:
    separator: tuple[str, ...]
    children: tuple[tuple[frozenset[str], RankResult], ...]


@dataclass(frozen=True)
class RankResult:
    rank: int
    witness: WitnessNode | None = None  # None exactly when rank == 0

    def to_json(self) -> dict:
        out: dict = {"rank": self.rank}
        if self.witness is not None:
            out["witness"] = {
                "separator": list(self.witness.separator),
                "children": [
                    {"component": sorted(comp), **child.to_json()}
                    for comp, child in self.witness.children
                ],
            }
        return out

    def separators(self) -> Iterable[tuple[str, ...]]:
        if self.witness is not None:
            yield self.witness.separator
            for _, child in self.witness.children:
                yield from child.separators()


def _fingerprint(g: FiniteGraph, sub: frozenset[str]) -> tuple:
    adj = g.adjacency
    return tuple((v, tuple(sorted(adj[v] & sub))) for v in sorted(sub))


def _components(g: FiniteGraph, sub: frozenset[str]) -> list[frozenset[str]]:
    """Components of ``g[sub]``, ordered by their least vertex."""
    adj = g.adjacency
    left = set(sub)
    comps = []
    while left:
        frontier = {left.pop()}
        comp = set(frontier)
        while frontier:
            frontier = {y for x in frontier for y in adj[x] if y in left}
            left -= frontier
            comp |= frontier
        comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


def _separators(sub: frozenset[str], k: int, connected: bool):
    """Candidate separators: by size, then lexicographically."""
    order = sorted(sub)
    for size in range(0 if not connected else 1, min(k, len(order)) + 1):
        yield from combinations(order, size)


def bounded_rank(g: FiniteGraph, base: BaseFamily, k: int,
                 max_vertices: int = DEFAULT_VERTEX_CEILING,
                 memo: dict | None = None) -> RankResult | None:
    """Least rank of ``g`` over separators of size at most ``k``.

    Returns ``None`` when no rank exists under the bound. Within one call
    subproblems are cached by vertex set; ``memo``, if given, is an extra
    cache keyed by the labelled-subgraph fingerprint and may be shared
    between calls with the same ``base`` and ``k``.
    """
    if k < 0:
        raise InputError("separator bound k must be non-negative")
    if len(g.vertices) > max_vertices:
        raise CapacityError(f"{len(g.vertices)} vertices exceed the exact-mode ceiling {max_vertices}")
    local: dict[frozenset[str], RankResult | None] = {}

    def solve(sub: frozenset[str]) -> RankResult | None:
        if sub in local:
            return local[sub]
        key = _fingerprint(g, sub) if memo is not None else None
        if key is not None and key in memo:
            local[sub] = memo[key]
            return local[sub]
        best = _solve(sub)
        local[sub] = best
        if key is not None:
            memo[key] = best
        return best

    def _solve(sub: frozenset[str]) -> RankResult | None:
        if base.member(g.adjacency, sub):
            return RankResult(0)
        connected = len(_components(g, sub)) <= 1
        best: RankResult | None = None
        for sep in _separators(sub, k, connected):
            rest = sub.difference(sep)
            children = []
            worst = -1
            for comp in _components(g, rest):
                r = solve(comp)
                if r is None or (best is not None and r.rank + 1 >= best.rank):
                    break
                children.append((comp, r))
                worst = max(worst, r.rank)
            else:
                mu = worst + 1 if worst >= 0 else 1
                if best is None or mu < best.rank:
                    best = RankResult(mu, WitnessNode(tuple(sep), tuple(children)))
                    if mu == 1:
                        break
        return best

    return solve(frozenset(g.vertices))


def naive_rank(g: FiniteGraph, base: BaseFamily, k: int,
               max_vertices: int = DEFAULT_VERTEX_CEILING) -> int | None:
    """Independent oracle for :func:`bounded_rank` (rank value only).

    Decides "rank <= mu" for mu = 0, 1, 2, ... by plain recursion with no
    caching and no witness bookkeeping.
    """
    if len(g.vertices) > max_vertices:
        raise CapacityError(f"{len(g.vertices)} vertices exceed the exact-mode ceiling {max_vertices}")
    adj = {v: set(ns) for v, ns in g.adjacency.items()}

    def pieces(sub: frozenset[str]) -> list[frozenset[str]]:
        left = set(sub)
        out = []
        while left:
            frontier = {left.pop()}
            comp = set(frontier)
            while frontier:
                frontier = {y for x in frontier for y in adj[x] if y in left}
                left -= frontier
                comp |= frontier
            out.append(frozenset(comp))
        return out

    def within(sub: frozenset[str], mu: int) -> bool:
        if base.member(g.adjacency, sub):
            return True
        if mu == 0:
            return False
        smallest = 0 if len(pieces(sub)) > 1 else 1
        for size in range(smallest, min(k, len(sub)) + 1):
            for sep in combinations(sub, size):
                if all(within(c, mu - 1) for c in pieces(sub - frozenset(sep))):
                    return True
        return False

    # every separator step either removes a vertex or splits, so rank <= |V|
    for mu in range(len(g.vertices) + 1):
        if within(g.vertices, mu):
            return mu
    return None


def rank_union_check(g: FiniteGraph, base: BaseFamily, k: int, separator: Iterable[str],
                     components: Iterable[Iterable[str]],
                     max_vertices: int = DEFAULT_VERTEX_CEILING) -> bool:
    """Bounded form of "S plus finitely many components has smaller rank".

    Checks ``rank(G[S + C_1 + ... + C_n]) <= max_i rank(C_i)`` where the
    left side may use separators of size ``k * (1 + n)``, the size of the
    union of ``S`` with one witness separator per component.
    """
    sep = frozenset(separator)
    if not sep <= g.vertices:
        raise InputError(f"separator has unknown vertices {sorted(sep - g.vertices)}")
    whole = bounded_rank(g, base, k, max_vertices)
    if whole is None:
        raise InputError(f"graph has no rank under k={k}, so S cannot come from a witness")
    if whole.rank == 0:
        return True
    actual = set(_components(g, g.vertices - sep))
    chosen = [frozenset(c) for c in components]
    if not chosen:
        raise InputError("components subset must be nonempty")
    for c in chosen:
        if c not in actual:
            raise InputError(f"{sorted(c)} is not a component of G - S")
    ranks = []
    for c in chosen:
        r = bounded_rank(g.induced(c), base, k, max_vertices)
        if r is None:
            raise InputError(f"component {sorted(c)} has no rank under k={k}")
        if r.rank >= whole.rank:
            raise InputError(f"component {sorted(c)} does not have smaller rank than G")
        ranks.append(r.rank)
    union = sep.union(*chosen)
    k_union = k * (1 + len(chosen))
    lhs = bounded_rank(g.induced(union), base, k_union, max_vertices)
    return lhs is not None and lhs.rank <= max(ranks)
