"""Constructive solvers for unfriendly partitions of finite graphs.

All local-search routines flip the lexicographically least unhappy vertex,
so traces are reproducible. Termination follows from a potential (a count
of cross edges) that every improvement flip raises by at least one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import CapacityError, InputError, InvariantViolation
from .graph import FiniteGraph, Partition, cut_size, happiness

log = logging.getLogger(__name__)

DEFAULT_EXHAUSTIVE_BOUND = 20


@dataclass(frozen=True)
class TraceStep:
    flipped: tuple[str, ...]
    potential: int
    improvement: bool = True


@dataclass
class SolveTrace:
    initial: Partition
    steps: list[TraceStep] = field(default_factory=list)
    # vertices the solver does not own but whose happiness is still reported
    unhappy_fixed: tuple[str, ...] = ()

    @property
    def flips(self) -> int:
        return sum(len(s.flipped) for s in self.steps if s.improvement)

    def potentials_increase(self) -> bool:
        """True iff the potential strictly rises at every improvement step."""
        prev = None
        for step in self.steps:
            if step.improvement and prev is not None and step.potential <= prev:
                return False
            prev = step.potential
        return True

    def to_json(self) -> dict:
        out = {
            "initial": self.initial.to_json()["assignments"],
            "steps": [{"flipped": list(s.flipped), "potential": s.potential} for s in self.steps],
        }
        if self.unhappy_fixed:
            out["unhappy_fixed"] = list(self.unhappy_fixed)
        return out


def _opponents(g: FiniteGraph, sides: dict[str, int], v: str) -> int:
    s = sides[v]
    return sum(1 for y in g.adjacency[v] if sides[y] != s)


def _improve(g: FiniteGraph, sides: dict[str, int], free: list[str], trace: SolveTrace,
             potential_set: Iterable[str], max_flips: int | None = None) -> None:
    """Flip the least unhappy vertex of ``free`` until none is left.

    ``free`` must be sorted. Mutates ``sides`` and appends to ``trace``.
    """
    pot = cut_size(g, Partition(sides), potential_set)
    deficit = {v: g.degree(v) - 2 * _opponents(g, sides, v) for v in free}
    unhappy = {v for v, d in deficit.items() if d > 0}
    free_set = set(free)
    flips = 0
    while unhappy:
        if max_flips is not None and flips >= max_flips:
            raise InvariantViolation(f"flip cascade exceeded its bound of {max_flips} flips")
        v = min(unhappy)
        gain = deficit[v]
        sides[v] = 1 - sides[v]
        flips += 1
        pot += gain
        deficit[v] = -gain
        unhappy.discard(v)
        for y in g.adjacency[v]:
            if y in free_set:
                # y gained or lost an opponent
                deficit[y] += -2 if sides[y] != sides[v] else 2
                if deficit[y] > 0:
                    unhappy.add(y)
                else:
                    unhappy.discard(y)
        trace.steps.append(TraceStep((v,), pot))
        log.debug("flip %s -> potential %d", v, pot)


def extend_pre_partition(g: FiniteGraph, fixed: Partition,
                         seed: Partition | None = None) -> tuple[Partition, SolveTrace]:
    """Extend ``fixed`` so that every vertex outside its domain is happy.

    Free vertices start from ``seed`` (default side 0) and only free
    vertices are ever flipped. The potential is the number of cross edges
    incident with the free set.
    """
    fixed.check_within(g)
    free = [v for v in g.order if v not in fixed]
    sides = {v: 0 for v in free}
    if seed is not None:
        seed.check_within(g)
        sides.update({v: seed[v] for v in free if v in seed})
    sides.update(fixed.assignments)
    trace = SolveTrace(Partition(sides))
    _improve(g, sides, free, trace, free)
    return Partition(sides), trace


def unfriendly_partition(g: FiniteGraph, seed: Partition | None = None) -> tuple[Partition, SolveTrace]:
    if seed is not None and not seed.is_total_on(g):
        raise InputError("seed partition must be total")
    return extend_pre_partition(g, Partition(), seed)


def exact_max_cut_extension(g: FiniteGraph, fixed: Partition,
                            bound: int = DEFAULT_EXHAUSTIVE_BOUND) -> Partition:
    """Best extension of ``fixed`` by total cut size, found exhaustively.

    Walks all completions in Gray-code order, updating the cut
    incrementally; the first maximum met wins.
    """
    fixed.check_within(g)
    free = [v for v in g.order if v not in fixed]
    if len(free) > bound:
        raise CapacityError(f"{len(free)} free vertices exceed the exhaustive bound {bound}")
    sides = dict(fixed.assignments)
    sides.update({v: 0 for v in free})
    cut = cut_size(g, Partition(sides))
    best, best_code = cut, 0
    code = 0
    for i in range(1, 1 << len(free)):
        bit = (i & -i).bit_length() - 1
        v = free[bit]
        delta = g.degree(v) - 2 * _opponents(g, sides, v)
        sides[v] = 1 - sides[v]
        cut += delta
        code ^= 1 << bit
        if cut > best:
            best, best_code = cut, code
    result = dict(fixed.assignments)
    result.update({v: (best_code >> j) & 1 for j, v in enumerate(free)})
    return Partition(result)


def flip_cascade(g: FiniteGraph, pi: Partition, flipped: Iterable[str],
                 free: Iterable[str]) -> tuple[Partition, SolveTrace]:
    """Flip ``flipped`` once, then repair unhappy vertices of ``free``.

    ``pi`` must be strongly maximal with respect to ``free`` (for instance
    the output of :func:`exact_max_cut_extension` with everything else
    fixed). With ``k`` cross edges of ``pi`` incident with ``flipped``, the
    repair phase cannot take more than ``2k`` flips; exceeding that raises
    :class:`InvariantViolation`.

    The flipped vertices themselves may end up unhappy; they are listed in
    ``trace.unhappy_fixed``.
    """
    if not pi.is_total_on(g):
        raise InputError("flip_cascade needs a total partition")
    pi.check_within(g)
    f = frozenset(flipped)
    free = frozenset(free)
    if f & free:
        raise InputError(f"flipped and free sets overlap: {sorted(f & free)}")
    for x in f | free:
        g.neighbours(x)
    k = cut_size(g, pi, f)
    sides = dict(pi.assignments)
    for v in f:
        sides[v] = 1 - sides[v]
    trace = SolveTrace(pi)
    trace.steps.append(TraceStep(tuple(sorted(f)), cut_size(g, Partition(sides), free), improvement=False))
    _improve(g, sides, sorted(free), trace, free, max_flips=2 * k)
    result = Partition(sides)
    trace.unhappy_fixed = tuple(happiness(g, result, f).unhappy)
    return result, trace


def cascade_bound(g: FiniteGraph, pi: Partition, flipped: Iterable[str]) -> int:
    """The ``2k`` flip budget for :func:`flip_cascade`."""
    return 2 * cut_size(g, pi, flipped)


def round_robin_opponents(g: FiniteGraph, targets: Iterable[str],
                          schedule: Sequence[str]) -> tuple[Partition, dict[str, int]]:
    """Finite run of the scheduling argument for vertices of infinite degree.

    Scanning ``schedule``: an uncoloured vertex is put on side 0; a coloured
    vertex with an uncoloured target neighbour colours the least such
    neighbour against itself and earns one credit. Each credit is a distinct
    opponent, so every target ends with at least as many opponents as
    credits.
    """
    targets = frozenset(targets)
    for v in targets:
        g.neighbours(v)
    colours: dict[str, int] = {}
    credits = {v: 0 for v in sorted(targets)}
    for v in schedule:
        if v not in targets:
            raise InputError(f"schedule visits non-target vertex {v!r}")
        if v not in colours:
            colours[v] = 0
            continue
        open_nbrs = sorted(y for y in g.adjacency[v] if y in targets and y not in colours)
        if open_nbrs:
            colours[open_nbrs[0]] = 1 - colours[v]
            credits[v] += 1
    return Partition(colours), credits


def coloured_opponents(g: FiniteGraph, pi: Partition, v: str) -> int:
    """Opponents of ``v`` among neighbours that ``pi`` colours."""
    s = pi[v]
    return sum(1 for y in g.adjacency[v] if y in pi and pi[y] != s)
