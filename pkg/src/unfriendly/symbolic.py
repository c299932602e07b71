"""Unfriendly partitions of presented (countable rayless) graphs.

A symbolic partition colours each Glue separator explicitly and, for each
copy family, gives one *default* colouring shared by all but finitely many
copies plus a finite map of *exception* copies. The solver works bottom-up:

* a child copy is summarised by its *opponent signature*, the number of
  opponents it hands to each parent separator vertex; only colourings that
  keep every vertex inside the copy happy are admitted;
* separator vertices of finite degree are checked by exact counting;
* a separator vertex of infinite degree is happy iff some infinite family's
  default copies each give it an opponent, since countably many such
  copies supply countably many opponents.

The search tries separator colourings in binary order and family defaults
in signature order, so results are reproducible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Iterable, Mapping, Union

from .errors import CapacityError, InputError, InvariantViolation, PreconditionError, UnsatError
from .finite_solver import extend_pre_partition, unfriendly_partition
from .graph import FiniteGraph, Partition
from .presentation import (
    OMEGA,
    CopyFamily,
    Finite,
    Glue,
    Leaf,
    Presentation,
    SymbolicCardinal,
    VertexAddress,
    _degree,
    _resolve,
    require_valid,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_LEAF = 6
DEFAULT_MAX_EXCEPTIONS = 8


# ---------------------------------------------------------------- partitions

@dataclass
class LeafPartition:
    leaf_colours: dict[str, int]

    def swapped(self) -> LeafPartition:
        return LeafPartition({v: 1 - c for v, c in self.leaf_colours.items()})

    def to_json(self) -> dict:
        return {"leaf_colours": dict(sorted(self.leaf_colours.items()))}


@dataclass
class FamilyPartition:
    default: SymbolicPartition
    exceptions: dict[int, SymbolicPartition] = field(default_factory=dict)

    def copy_partition(self, c: int | None) -> SymbolicPartition:
        return self.default if c is None else self.exceptions.get(c, self.default)


@dataclass
class GluePartition:
    s_colours: dict[str, int]
    families: list[FamilyPartition]

    def swapped(self) -> GluePartition:
        return GluePartition(
            {v: 1 - c for v, c in self.s_colours.items()},
            [FamilyPartition(f.default.swapped(), {i: e.swapped() for i, e in f.exceptions.items()})
             for f in self.families],
        )

    def to_json(self) -> dict:
        return {
            "s_colours": dict(sorted(self.s_colours.items())),
            "families": [
                {
                    "default": f.default.to_json(),
                    "exceptions": {str(i): e.to_json() for i, e in sorted(f.exceptions.items())},
                }
                for f in self.families
            ],
        }


SymbolicPartition = Union[LeafPartition, GluePartition]


def _sides(obj, what: str) -> dict[str, int]:
    if not isinstance(obj, Mapping):
        raise InputError(f"{what} must be an object")
    for v, s in obj.items():
        if s not in (0, 1) or isinstance(s, bool):
            raise InputError(f"{what}: side of {v!r} must be 0 or 1")
    return dict(obj)


def partition_from_json(data) -> SymbolicPartition:
    if not isinstance(data, Mapping):
        raise InputError("symbolic partition JSON must be an object")
    if "leaf_colours" in data:
        return LeafPartition(_sides(data["leaf_colours"], "leaf_colours"))
    if "s_colours" in data:
        fams = []
        for f in data.get("families", []):
            if not isinstance(f, Mapping) or "default" not in f:
                raise InputError("family partition needs a 'default'")
            exc = {}
            for k, v in f.get("exceptions", {}).items():
                if not str(k).isdigit():
                    raise InputError(f"exception index {k!r} is not a natural number")
                exc[int(k)] = partition_from_json(v)
            fams.append(FamilyPartition(partition_from_json(f["default"]), exc))
        return GluePartition(_sides(data["s_colours"], "s_colours"), fams)
    raise InputError("symbolic partition JSON needs 'leaf_colours' or 's_colours'")


def uses_exceptions(sigma: SymbolicPartition) -> bool:
    if isinstance(sigma, LeafPartition):
        return False
    return any(f.exceptions or uses_exceptions(f.default) or any(uses_exceptions(e) for e in f.exceptions.values())
               for f in sigma.families)


# ---------------------------------------------------------------- signatures

@dataclass(frozen=True, order=True)
class OpponentSignature:
    """Opponents that one child copy gives each attached parent vertex."""

    opponents: tuple[tuple[str, int], ...]
    child_happy: bool = True

    def of(self, s: str) -> int:
        return dict(self.opponents).get(s, 0)


def _boundary_colour(sigma: SymbolicPartition, b: str) -> int:
    return sigma.leaf_colours[b] if isinstance(sigma, LeafPartition) else sigma.s_colours[b]


def _copy_opponents(fam: CopyFamily, colouring: Mapping[str, int], child_colour) -> dict[str, int]:
    """Per parent vertex, opponents contributed by one copy."""
    out: dict[str, int] = {}
    for s, b in fam.attachment:
        out[s] = out.get(s, 0) + int(child_colour(b) != colouring[s])
    return out


# ---------------------------------------------------------------- fixed maps

@dataclass(frozen=True)
class _Fixed:
    here: tuple[tuple[str, int], ...] = ()
    copies: tuple[tuple[tuple[int, int], _Fixed], ...] = ()

    def sides(self) -> dict[str, int]:
        return dict(self.here)

    def in_family(self, i: int) -> dict[int, _Fixed]:
        return {c: sub for (f, c), sub in self.copies if f == i}


_EMPTY = _Fixed()


def _fixed_tree(p: Presentation, fixed: Mapping[str | VertexAddress, int]) -> _Fixed:
    root: dict = {"here": {}, "copies": {}}
    for raw, side in fixed.items():
        if side not in (0, 1) or isinstance(side, bool):
            raise InputError(f"fixed side of {raw} must be 0 or 1")
        a, _, _ = _resolve(p, raw)
        if any(c is None for _, c in a.steps):
            raise InputError(f"fixed address {a} must name a concrete copy, not '*'")
        node = root
        for step in a.steps:
            node = node["copies"].setdefault(step, {"here": {}, "copies": {}})
        node["here"][a.name] = side

    def freeze(node) -> _Fixed:
        return _Fixed(tuple(sorted(node["here"].items())),
                      tuple(sorted((k, freeze(v)) for k, v in node["copies"].items())))

    return freeze(root)


# ---------------------------------------------------------------- solver

Ctx = tuple[tuple[str, int, int], ...]  # (boundary vertex, parent nbrs on side 0, on side 1)


def _child_ctx(fam: CopyFamily, colouring: Mapping[str, int]) -> Ctx:
    counts: dict[str, list[int]] = {}
    for s, b in fam.attachment:
        counts.setdefault(b, [0, 0])[colouring[s]] += 1
    return tuple((b, n0, n1) for b, (n0, n1) in sorted(counts.items()))


def _colourings(names: list[str], fixed: Mapping[str, int], symmetric: bool):
    """Colourings of ``names`` in binary order (first name most significant)."""
    free = [v for v in names if v not in fixed]
    for bits in product((0, 1), repeat=len(free)):
        col = dict(fixed)
        col.update(zip(free, bits))
        if symmetric and names and col[names[0]] != 0:
            continue
        yield {v: col[v] for v in names}


@dataclass
class _FamilyChoice:
    index: int
    default: tuple  # option key
    extras: tuple = ()  # option keys for non-forced exception copies
    forced: tuple = ()  # (copy, option key) for fixed copies


class SymbolicSolver:
    """Stateful search with memoised child options.

    ``options(node, ctx, fixed)`` maps each achievable boundary colouring of
    one copy of ``node`` to a symbolic partition of that copy in which every
    non-fixed vertex is happy, given the parent's colours in ``ctx``.
    """

    def __init__(self, max_leaf: int = DEFAULT_MAX_LEAF, max_exceptions: int = DEFAULT_MAX_EXCEPTIONS):
        self.max_leaf = max_leaf
        self.max_exceptions = max_exceptions
        self.truncated = False
        self._memo: dict = {}
        self._keep: list = []  # keeps memo keys' nodes alive

    # -- options ---------------------------------------------------------
    def options(self, node: Presentation, ctx: Ctx, fixed: _Fixed = _EMPTY) -> dict[tuple, SymbolicPartition]:
        key = (id(node), ctx, fixed)
        if key not in self._memo:
            self._keep.append(node)
            if isinstance(node, Leaf):
                self._memo[key] = self._leaf_options(node, ctx, fixed)
            else:
                self._memo[key] = self._glue_options(node, ctx, fixed)
        return self._memo[key]

    def _leaf_options(self, leaf: Leaf, ctx: Ctx, fixed: _Fixed) -> dict[tuple, SymbolicPartition]:
        g = leaf.graph
        parent = {b: (n0, n1) for b, n0, n1 in ctx}
        pinned = fixed.sides()
        free = [v for v in g.order if v not in pinned]
        bnd = [b for b, _, _ in ctx]
        if len(free) > self.max_leaf:
            col = self._large_leaf(g, parent, pinned)
            return {tuple(col[b] for b in bnd): LeafPartition(col)}
        out: dict[tuple, SymbolicPartition] = {}
        for col in _colourings(g.order, pinned, symmetric=False):
            k = tuple(col[b] for b in bnd)
            if k in out:
                continue
            if all(self._leaf_happy(g, col, parent, v) for v in free):
                out[k] = LeafPartition(col)
        return out

    @staticmethod
    def _leaf_happy(g: FiniteGraph, col, parent, v) -> bool:
        n0, n1 = parent.get(v, (0, 0))
        opp = sum(1 for y in g.adjacency[v] if col[y] != col[v]) + (n1 if col[v] == 0 else n0)
        return 2 * opp >= g.degree(v) + n0 + n1

    @staticmethod
    def _large_leaf(g: FiniteGraph, parent, pinned) -> dict[str, int]:
        # parent neighbours become pinned pseudo-vertices; names with '/' cannot clash
        vertices = list(g.vertices)
        edges = [tuple(e) for e in g.edges]
        fixed = dict(pinned)
        for b, (n0, n1) in parent.items():
            for side, count in ((0, n0), (1, n1)):
                for i in range(count):
                    x = f"/parent/{b}/{side}/{i}"
                    vertices.append(x)
                    edges.append((b, x))
                    fixed[x] = side
        part, _ = extend_pre_partition(FiniteGraph.build(vertices, edges), Partition(fixed))
        return {v: part[v] for v in g.order}

    def _glue_options(self, glue: Glue, ctx: Ctx, fixed: _Fixed) -> dict[tuple, SymbolicPartition]:
        parent = {b: (n0, n1) for b, n0, n1 in ctx}
        bnd = [b for b, _, _ in ctx]
        out: dict[tuple, SymbolicPartition] = {}
        for col in _colourings(glue.separator, fixed.sides(), symmetric=False):
            k = tuple(col[b] for b in bnd)
            if k in out:
                continue
            sigma = self.complete(glue, col, parent, fixed)
            if sigma is not None:
                out[k] = sigma
        return out

    # -- completing one separator colouring ------------------------------
    def complete(self, glue: Glue, col: Mapping[str, int], parent: Mapping[str, tuple[int, int]],
                 fixed: _Fixed = _EMPTY) -> GluePartition | None:
        """Choose family colourings making every non-fixed vertex happy."""
        pinned = fixed.sides()
        names = glue.separator
        degree = {s: _degree(glue, None, "S:" + s) + sum(parent.get(s, (0, 0))) for s in names}
        base_opp = {}
        for s in names:
            n0, n1 = parent.get(s, (0, 0))
            base_opp[s] = sum(1 for y in glue.s_graph.adjacency[s] if col[y] != col[s]) + (n1 if col[s] == 0 else n0)
        s1 = [s for s in names if not degree[s].is_finite and s not in pinned]
        s0 = [s for s in names if degree[s].is_finite and s not in pinned]

        opts, sigs = [], []
        for i, fam in enumerate(glue.families):
            ctx = _child_ctx(fam, col)
            default = self.options(fam.child, ctx)
            forced = {c: self.options(fam.child, ctx, sub) for c, sub in sorted(fixed.in_family(i).items())}
            if any(not o for o in forced.values()):
                return None
            free_copies = OMEGA if fam.is_omega else Finite(fam.multiplicity.value - len(forced))
            if not default and free_copies != Finite(0):
                return None
            if len(forced) > self.max_exceptions:
                raise CapacityError(f"family {i} needs {len(forced)} exception copies, budget is {self.max_exceptions}")
            table = {}
            for k, sigma in list(default.items()) + [kv for o in forced.values() for kv in o.items()]:
                table[k] = _copy_opponents(fam, col, lambda b, sigma=sigma: _boundary_colour(sigma, b))
            opts.append((default, forced, free_copies))
            sigs.append(table)

        def sig_order(i, keys):
            return sorted(keys, key=lambda k: (tuple(sigs[i][k].get(s, 0) for s in names), k))

        # infinite families: only separator vertices of infinite degree care
        omega_ix = [i for i, f in enumerate(glue.families) if f.is_omega]
        omega_choice = None
        for pick in product(*(sig_order(i, opts[i][0]) for i in omega_ix)):
            chosen = dict(zip(omega_ix, pick))
            if all(any(sigs[i][k].get(s, 0) >= 1 for i, k in chosen.items()) for s in s1):
                omega_choice = chosen
                break
        if omega_choice is None:
            return None

        finite_ix = [i for i, f in enumerate(glue.families) if not f.is_omega]
        finite_choice = self._finite_search(glue, finite_ix, opts, sigs, s0, degree, base_opp, sig_order)
        if finite_choice is None:
            return None

        fams = []
        for i, fam in enumerate(glue.families):
            default, forced, _ = opts[i]
            if i in omega_choice:
                d = omega_choice[i]
                exc = {c: o[sig_order(i, o)[0]] for c, o in forced.items()}
            else:
                choice = finite_choice[i]
                d = choice.default
                exc = {c: forced[c][k] for c, k in choice.forced}
                spare = (c for c in range(fam.multiplicity.value) if c not in forced)
                for k, c in zip(choice.extras, spare):
                    exc[c] = default[k]
            d_sigma = default[d] if d in default else next(iter(o[d] for o in forced.values() if d in o))
            fams.append(FamilyPartition(d_sigma, exc))
        return GluePartition(dict(col), fams)

    def _finite_search(self, glue, finite_ix, opts, sigs, s0, degree, base_opp, sig_order):
        """Per finite family: a default plus, if needed, a few exception copies."""
        per_family = []
        for i in finite_ix:
            default, forced, free_copies = opts[i]
            r = free_copies.value
            forced_lists = [[(c, k) for k in sig_order(i, o)] for c, o in forced.items()]
            budget = self.max_exceptions - len(forced)
            cap = max(r - 1, 0)
            if cap > budget:
                cap = budget
                self.truncated = True
            configs = []
            keys = sig_order(i, default)
            defaults = keys if r > 0 else (keys[:1] or [None])
            for e in range(cap + 1):
                for d in defaults:
                    for extras in combinations_with_replacement(keys, e):
                        for forced_pick in product(*forced_lists):
                            vec = {}
                            if d is not None:
                                for s, x in sigs[i][d].items():
                                    vec[s] = vec.get(s, 0) + x * (r - e)
                            for k in extras:
                                for s, x in sigs[i][k].items():
                                    vec[s] = vec.get(s, 0) + x
                            for _, k in forced_pick:
                                for s, x in sigs[i][k].items():
                                    vec[s] = vec.get(s, 0) + x
                            if d is None:
                                d_key = forced_pick[0][1] if forced_pick else None
                            else:
                                d_key = d
                            configs.append((e, _FamilyChoice(i, d_key, extras, forced_pick), vec))
            per_family.append(configs)

        need = {s: -(-degree[s].value // 2) - base_opp[s] for s in s0}
        max_total = sum(max((c[0] for c in cfgs), default=0) for cfgs in per_family)
        for total in range(max_total + 1):
            for combo in product(*per_family):
                if sum(c[0] for c in combo) != total:
                    continue
                got = {s: 0 for s in s0}
                for _, _, vec in combo:
                    for s, x in vec.items():
                        if s in got:
                            got[s] += x
                if all(got[s] >= need[s] for s in s0):
                    return {c[1].index: c[1] for c in combo}
        return None


# ---------------------------------------------------------------- public API

@dataclass
class SolverState:
    s0: list[str]
    s1: list[str]
    signatures: dict[int, list[OpponentSignature]]
    partition: SymbolicPartition
    unhappy: list[str]  # the residual set F; empty on success
    used_exceptions: bool
    s0_neighbourhoods_finite: bool

    @property
    def F(self) -> list[str]:
        return self.unhappy


def classify_S(p: Presentation) -> tuple[list[str], list[str]]:
    """Split the root separator into finite-degree and infinite-degree vertices.

    With every copy contributing finitely many edges and countably many
    copies, a vertex gets its full degree inside finitely many copies
    exactly when that degree is finite.
    """
    if not isinstance(p, Glue):
        raise PreconditionError("classify_S needs a Glue node")
    s0, s1 = [], []
    for s in p.separator:
        (s0 if _degree(p, None, "S:" + s).is_finite else s1).append(s)
    return s0, s1


def family_signatures(p: Presentation, family: int, s_colouring: Mapping[str, int],
                      max_leaf: int = DEFAULT_MAX_LEAF,
                      solver: SymbolicSolver | None = None) -> frozenset[OpponentSignature]:
    if not isinstance(p, Glue) or not 0 <= family < len(p.families):
        raise InputError(f"no family {family} at the root")
    missing = set(p.separator) - set(s_colouring)
    if missing:
        raise InputError(f"separator colouring misses {sorted(missing)}")
    solver = solver or SymbolicSolver(max_leaf=max_leaf)
    fam = p.families[family]
    attached = sorted({s for s, _ in fam.attachment})
    out = set()
    for sigma in solver.options(fam.child, _child_ctx(fam, s_colouring)).values():
        opp = _copy_opponents(fam, s_colouring, lambda b: _boundary_colour(sigma, b))
        out.add(OpponentSignature(tuple((s, opp.get(s, 0)) for s in attached)))
    return frozenset(out)


def _solve(p: Presentation, fixed: Mapping, max_leaf: int, max_exceptions: int) -> SolverState:
    require_valid(p)
    tree = _fixed_tree(p, fixed)
    exempt = {str(VertexAddress.parse(a) if isinstance(a, str) else a) for a in fixed}
    if isinstance(p, Leaf):
        if fixed:
            part, _ = extend_pre_partition(p.graph, Partition(tree.sides()))
        else:
            part, _ = unfriendly_partition(p.graph)
        sigma: SymbolicPartition = LeafPartition(dict(part.assignments))
        report = check_symbolic(p, sigma, exempt)
        return _finish(SolverState([], [], {}, sigma, report.unhappy, False, True))

    solver = SymbolicSolver(max_leaf, max_exceptions)
    s0, s1 = classify_S(p)
    for col in _colourings(p.separator, tree.sides(), symmetric=not fixed):
        sigma = solver.complete(p, col, {}, tree)
        if sigma is None:
            continue
        sigs = {i: sorted(family_signatures(p, i, col, solver=solver)) for i in range(len(p.families))}
        report = check_symbolic(p, sigma, exempt)
        # S0 vertices only ever see finite families, so N(s) lies in S and finitely many copies
        nbhd_finite = all(not fam.is_omega or fam.attached_to(s) == 0 for s in s0 for fam in p.families)
        state = SolverState(s0, s1, sigs, sigma, report.unhappy, uses_exceptions(sigma), nbhd_finite)
        return _finish(state)
    if solver.truncated:
        raise CapacityError("no partition found within the exception budget")
    raise UnsatError("no symbolic partition found; every rayless graph has one, so this is a bug")


def _finish(state: SolverState) -> SolverState:
    if state.unhappy:
        raise InvariantViolation(f"solver output leaves unhappy positions {state.unhappy}")
    log.info("solved: S0=%s S1=%s exceptions=%s", state.s0, state.s1, state.used_exceptions)
    return state


def solve_unfriendly(p: Presentation, max_leaf: int = DEFAULT_MAX_LEAF,
                     max_exceptions: int = DEFAULT_MAX_EXCEPTIONS) -> tuple[SymbolicPartition, SolverState]:
    state = _solve(p, {}, max_leaf, max_exceptions)
    return state.partition, state


def solve_pre_partition(p: Presentation, fixed: Mapping[str | VertexAddress, int],
                        max_leaf: int = DEFAULT_MAX_LEAF,
                        max_exceptions: int = DEFAULT_MAX_EXCEPTIONS) -> SymbolicPartition:
    """Extend ``fixed`` so every other position is happy.

    Fixed vertices inside copy families become exceptions at their copy
    indices.
    """
    return _solve(p, fixed, max_leaf, max_exceptions).partition


# ---------------------------------------------------------------- checking

@dataclass(frozen=True)
class PositionCheck:
    degree: SymbolicCardinal
    opponents: SymbolicCardinal

    @property
    def happy(self) -> bool:
        if self.degree.is_finite:
            return 2 * self.opponents.value >= self.degree.value
        return not self.opponents.is_finite


@dataclass
class CheckReport:
    positions: dict[str, PositionCheck]
    unhappy: list[str]

    @property
    def ok(self) -> bool:
        return not self.unhappy

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "unhappy": self.unhappy,
            "positions": {
                a: {"degree": c.degree.to_json(), "opponents": c.opponents.to_json(), "happy": c.happy}
                for a, c in self.positions.items()
            },
        }


def _check_shape(node: Presentation, sigma, where: str) -> None:
    if isinstance(node, Leaf):
        if not isinstance(sigma, LeafPartition):
            raise InputError(f"{where}: expected leaf colours")
        if set(sigma.leaf_colours) != set(node.graph.vertices):
            raise InputError(f"{where}: leaf colours must cover exactly the leaf vertices")
        return
    if not isinstance(sigma, GluePartition):
        raise InputError(f"{where}: expected separator colours and families")
    if set(sigma.s_colours) != set(node.s_graph.vertices):
        raise InputError(f"{where}: separator colours must cover exactly S")
    if len(sigma.families) != len(node.families):
        raise InputError(f"{where}: {len(sigma.families)} family partitions for {len(node.families)} families")
    for i, (fam, fp) in enumerate(zip(node.families, sigma.families)):
        for c in fp.exceptions:
            if c < 0 or (fam.multiplicity.is_finite and c >= fam.multiplicity.value):
                raise InputError(f"{where} family {i}: exception index {c} out of range")


def check_symbolic(p: Presentation, sigma: SymbolicPartition, exempt: Iterable[str] = ()) -> CheckReport:
    """Happiness of every position under ``sigma``.

    Default copies are reported with ``*`` in their copy slot, exception
    copies with their index. Addresses in ``exempt`` are not required to
    be happy.
    """
    exempt = set(exempt)
    positions: dict[str, PositionCheck] = {}

    def visit(node, sg, parent_fam: CopyFamily | None, parent_col: Mapping[str, int], steps):
        _check_shape(node, sg, str(VertexAddress(tuple(steps), "")) or "<root>")
        prefix = tuple(steps)
        if isinstance(node, Leaf):
            col = sg.leaf_colours
            for v in node.graph.order:
                opp = sum(1 for y in node.graph.adjacency[v] if col[y] != col[v])
                if parent_fam is not None:
                    opp += sum(1 for s, b in parent_fam.attachment if b == v and parent_col[s] != col[v])
                deg = _degree(node, parent_fam, v)
                positions[str(VertexAddress(prefix, v))] = PositionCheck(deg, Finite(opp))
            return
        col = sg.s_colours
        opp: dict[str, SymbolicCardinal] = {}
        for s in node.separator:
            n = sum(1 for y in node.s_graph.adjacency[s] if col[y] != col[s])
            if parent_fam is not None:
                n += sum(1 for x, b in parent_fam.attachment if b == s and parent_col[x] != col[s])
            opp[s] = Finite(n)
        for i, (fam, fp) in enumerate(zip(node.families, sg.families)):
            count = OMEGA if fam.is_omega else Finite(fam.multiplicity.value - len(fp.exceptions))
            copies = [(None, fp.default, count)] if count != Finite(0) else []
            copies += [(c, e, Finite(1)) for c, e in sorted(fp.exceptions.items())]
            for c, child_sigma, times in copies:
                _check_shape(fam.child, child_sigma, f"family {i}")
                per = _copy_opponents(fam, col, lambda b, cs=child_sigma: _boundary_colour(cs, b))
                for s, x in per.items():
                    opp[s] = opp[s] + times * x
                visit(fam.child, child_sigma, fam, col, steps + [(i, c)])
        for s in node.separator:
            deg = _degree(node, parent_fam, "S:" + s)
            positions[str(VertexAddress(prefix, "S:" + s))] = PositionCheck(deg, opp[s])

    visit(p, sigma, None, {}, [])
    unhappy = sorted(a for a, c in positions.items() if not c.happy and a not in exempt)
    return CheckReport(dict(sorted(positions.items())), unhappy)


def witness_kapom(p: Presentation, sigma: SymbolicPartition, s: str,
                  exempt: Iterable[str] = ()) -> list[tuple[int, int]]:
    """Finitely many infinite-family copies outweighing ``s``'s other edges.

    Returns ``(family, copy)`` pairs whose attachment edges to ``s`` number
    strictly more than the edges from ``s`` into ``S`` plus all edges from
    ``s`` into finite families. Copies whose default colouring gives ``s``
    an opponent are taken first; exception copies are skipped. ``exempt``
    is passed on to :func:`check_symbolic` for pre-partition outputs.
    """
    if not isinstance(p, Glue):
        raise PreconditionError("witness_kapom needs a Glue node")
    _, s1 = classify_S(p)
    if s not in s1:
        raise PreconditionError(f"{s!r} is not a separator vertex of infinite degree")
    report = check_symbolic(p, sigma, exempt)
    if not report.ok:
        raise PreconditionError("partition is not accepted by check_symbolic")
    threshold = witness_threshold(p, s)
    col = sigma.s_colours

    def gives_opponent(i):
        fam, fp = p.families[i], sigma.families[i]
        return _copy_opponents(fam, col, lambda b: _boundary_colour(fp.default, b)).get(s, 0) >= 1

    ranked = [i for i, f in enumerate(p.families) if f.is_omega and f.attached_to(s) > 0]
    ranked.sort(key=lambda i: (not gives_opponent(i), i))
    group: list[tuple[int, int]] = []
    total = 0
    copy_iters = {i: _free_copies(sigma.families[i].exceptions) for i in ranked}
    while total <= threshold:
        for i in ranked:
            group.append((i, next(copy_iters[i])))
            total += p.families[i].attached_to(s)
            if total > threshold:
                break
    return group


def witness_threshold(p: Glue, s: str) -> int:
    """Edges from ``s`` into ``S`` plus edges into all finite families."""
    d = p.s_graph.degree(s)
    for fam in p.families:
        if not fam.is_omega:
            d += fam.multiplicity.value * fam.attached_to(s)
    return d


def _free_copies(exceptions: Mapping[int, SymbolicPartition]):
    n = 0
    while True:
        if n not in exceptions:
            yield n
        n += 1


# ---------------------------------------------------------------- instantiation

def instantiate_partition(p: Presentation, sigma: SymbolicPartition, n: int) -> tuple[Partition, list[str]]:
    """Colouring of ``instantiate(p, n)`` read off ``sigma``.

    Exceptions at copy indices ``>= n`` of infinite families have no copy to
    land on; they are dropped and returned (and logged) as warnings.
    """
    sides: dict[str, int] = {}
    dropped: list[str] = []

    def emit(node, sg, steps):
        _check_shape(node, sg, str(VertexAddress(tuple(steps), "")) or "<root>")
        if isinstance(node, Leaf):
            for v, c in sg.leaf_colours.items():
                sides[str(VertexAddress(tuple(steps), v))] = c
            return
        for v, c in sg.s_colours.items():
            sides[str(VertexAddress(tuple(steps), "S:" + v))] = c
        for i, (fam, fp) in enumerate(zip(node.families, sg.families)):
            copies = fam.multiplicity.value if fam.multiplicity.is_finite else n
            for c in sorted(fp.exceptions):
                if c >= copies:
                    where = str(VertexAddress(tuple(steps) + ((i, c),), "")).rstrip("/")
                    dropped.append(where)
                    log.warning("exception copy %s dropped at n=%d", where, n)
            for c in range(copies):
                emit(fam.child, fp.copy_partition(c), steps + [(i, c)])

    emit(p, sigma, [])
    return Partition(sides), dropped
