"""Finite descriptions of countable rayless graphs.

A presentation is a tree. A ``Leaf`` holds a finite graph. A ``Glue`` node
holds a finite separator graph ``S`` plus copy families: each family glues
``n`` or countably many copies of a child presentation onto ``S`` through a
fixed set of attachment edges. Attachments always land on the child's
boundary (its leaf vertices, or its own root separator), so any single copy
contributes only finitely many edges to a parent separator vertex.

Vertices of the described graph are named by addresses such as
``0[3]/1[0]/S:c`` (family 0 copy 3, then family 1 copy 0, separator vertex
``c``). A *position* replaces every copy index by ``*`` and stands for all
vertices that play the same role.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .errors import InputError, PreconditionError
from .graph import FiniteGraph


@dataclass(frozen=True, order=False)
class SymbolicCardinal:
    """A finite count or the countable infinite cardinal (``value is None``)."""

    value: int | None

    def __post_init__(self):
        if self.value is not None and (not isinstance(self.value, int) or self.value < 0):
            raise InputError(f"finite cardinal must be a non-negative int, got {self.value!r}")

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __add__(self, other: SymbolicCardinal | int) -> SymbolicCardinal:
        other = _card(other)
        if self.value is None or other.value is None:
            return OMEGA
        return SymbolicCardinal(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, other: SymbolicCardinal | int) -> SymbolicCardinal:
        other = _card(other)
        if self.value == 0 or other.value == 0:
            return SymbolicCardinal(0)
        if self.value is None or other.value is None:
            return OMEGA
        return SymbolicCardinal(self.value * other.value)

    __rmul__ = __mul__

    def _key(self) -> float:
        return float("inf") if self.value is None else self.value

    def __lt__(self, other):
        return self._key() < _card(other)._key()

    def __le__(self, other):
        return self._key() <= _card(other)._key()

    def __gt__(self, other):
        return self._key() > _card(other)._key()

    def __ge__(self, other):
        return self._key() >= _card(other)._key()

    def __str__(self) -> str:
        return "Omega" if self.value is None else str(self.value)

    def __repr__(self) -> str:
        return "OMEGA" if self.value is None else f"Finite({self.value})"

    def to_json(self):
        return "omega" if self.value is None else self.value

    @classmethod
    def from_json(cls, data) -> SymbolicCardinal:
        if isinstance(data, str) and data.lower() in ("omega", "ω"):
            return OMEGA
        if isinstance(data, int) and not isinstance(data, bool) and data >= 0:
            return cls(data)
        raise InputError(f"multiplicity must be a non-negative integer or 'omega', got {data!r}")


def Finite(n: int) -> SymbolicCardinal:
    return SymbolicCardinal(n)


OMEGA = SymbolicCardinal(None)


def _card(x) -> SymbolicCardinal:
    return x if isinstance(x, SymbolicCardinal) else SymbolicCardinal(x)


@dataclass(frozen=True)
class Leaf:
    graph: FiniteGraph


@dataclass(frozen=True)
class CopyFamily:
    child: Presentation
    multiplicity: SymbolicCardinal
    attachment: frozenset[tuple[str, str]]  # (parent S vertex, child boundary vertex)

    @classmethod
    def build(cls, child: Presentation, multiplicity, attachment=()) -> CopyFamily:
        mult = multiplicity if isinstance(multiplicity, SymbolicCardinal) else SymbolicCardinal.from_json(multiplicity)
        return cls(child, mult, frozenset((str(s), str(b)) for s, b in attachment))

    @property
    def is_omega(self) -> bool:
        return not self.multiplicity.is_finite

    def attached_to(self, s: str) -> int:
        """Attachment edges one copy sends to parent vertex ``s``."""
        return sum(1 for x, _ in self.attachment if x == s)

    def attached_at(self, b: str) -> int:
        """Attachment edges reaching child boundary vertex ``b`` in one copy."""
        return sum(1 for _, y in self.attachment if y == b)


@dataclass(frozen=True)
class Glue:
    s_graph: FiniteGraph
    families: tuple[CopyFamily, ...] = ()

    @property
    def separator(self) -> list[str]:
        return self.s_graph.order


Presentation = Union[Leaf, Glue]


def boundary(p: Presentation) -> frozenset[str]:
    return p.graph.vertices if isinstance(p, Leaf) else p.s_graph.vertices


def depth(p: Presentation) -> int:
    if isinstance(p, Leaf) or not p.families:
        return 0 if isinstance(p, Leaf) else 1
    return 1 + max(depth(f.child) for f in p.families)


# ---------------------------------------------------------------- addresses

_STEP = re.compile(r"(\d+)\[(\d+|\*)\]")


@dataclass(frozen=True)
class VertexAddress:
    """Path of ``(family, copy)`` steps followed by a terminal name.

    The terminal is ``S:<name>`` for a separator vertex of a Glue node and
    the bare vertex name inside a Leaf. ``copy is None`` (printed ``*``)
    means "any copy" and turns the address into a position.
    """

    steps: tuple[tuple[int, int | None], ...]
    terminal: str

    @classmethod
    def parse(cls, text: str) -> VertexAddress:
        if not isinstance(text, str) or not text:
            raise InputError(f"bad vertex address {text!r}")
        *head, terminal = text.split("/")
        steps = []
        for part in head:
            m = _STEP.fullmatch(part)
            if not m:
                raise InputError(f"bad address step {part!r} in {text!r}")
            steps.append((int(m.group(1)), None if m.group(2) == "*" else int(m.group(2))))
        if not terminal:
            raise InputError(f"address {text!r} has no terminal vertex")
        return cls(tuple(steps), terminal)

    @property
    def is_separator(self) -> bool:
        return self.terminal.startswith("S:")

    @property
    def name(self) -> str:
        return self.terminal[2:] if self.is_separator else self.terminal

    @property
    def family_path(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.steps)

    @property
    def position(self) -> VertexAddress:
        return VertexAddress(tuple((f, None) for f, _ in self.steps), self.terminal)

    def child(self, family: int, copy: int | None, terminal: str) -> VertexAddress:
        return VertexAddress(self.steps + ((family, copy),), terminal)

    def __str__(self) -> str:
        parts = [f"{f}[{'*' if c is None else c}]" for f, c in self.steps]
        return "/".join(parts + [self.terminal])


def _address(steps, terminal: str) -> str:
    return str(VertexAddress(tuple(steps), terminal))


@dataclass(frozen=True)
class NodeInfo:
    path: tuple[int, ...]
    node: Presentation
    parent_family: CopyFamily | None
    multiplicity: SymbolicCardinal  # number of copies of this node in the whole graph


def walk(p: Presentation) -> Iterator[NodeInfo]:
    """Every node of the tree, parents before children."""
    stack = [NodeInfo((), p, None, Finite(1))]
    while stack:
        info = stack.pop()
        yield info
        if isinstance(info.node, Glue):
            for i in reversed(range(len(info.node.families))):
                fam = info.node.families[i]
                stack.append(NodeInfo(info.path + (i,), fam.child, fam, info.multiplicity * fam.multiplicity))


def node_at(p: Presentation, path: tuple[int, ...]) -> tuple[Presentation, CopyFamily | None]:
    node, parent = p, None
    for f in path:
        if not isinstance(node, Glue) or not 0 <= f < len(node.families):
            raise InputError(f"no family {f} along path {list(path)}")
        parent = node.families[f]
        node = parent.child
    return node, parent


def _resolve(p: Presentation, a: VertexAddress | str) -> tuple[VertexAddress, Presentation, CopyFamily | None]:
    if isinstance(a, str):
        a = VertexAddress.parse(a)
    node, parent = p, None
    for f, c in a.steps:
        if not isinstance(node, Glue) or not 0 <= f < len(node.families):
            raise InputError(f"address {a}: no family {f}")
        parent = node.families[f]
        mult = parent.multiplicity
        if c is not None and mult.is_finite and c >= mult.value:
            raise InputError(f"address {a}: copy {c} out of range for multiplicity {mult}")
        node = parent.child
    if isinstance(node, Glue):
        if not a.is_separator or a.name not in node.s_graph.vertices:
            raise InputError(f"address {a}: no separator vertex {a.terminal!r} here")
    elif a.terminal not in node.graph.vertices:
        raise InputError(f"address {a}: no leaf vertex {a.terminal!r} here")
    return a, node, parent


# ---------------------------------------------------------------- validation

def validate(p: Presentation) -> list[str]:
    """Diagnostics for every broken invariant; an empty list means valid."""
    problems: list[str] = []

    def where(path) -> str:
        return "<root>" if not path else "<root>/" + "/".join(map(str, path))

    def check_names(names, path):
        for v in names:
            if "/" in v:
                problems.append(f"{where(path)}: vertex name {v!r} contains '/'")

    def visit(node, path):
        if isinstance(node, Leaf):
            if not isinstance(node.graph, FiniteGraph):
                problems.append(f"{where(path)}: leaf graph is not a FiniteGraph")
                return
            if not node.graph.vertices:
                problems.append(f"{where(path)}: leaf graph is empty")
            check_names(node.graph.vertices, path)
            for v in node.graph.vertices:
                if v.startswith("S:"):
                    problems.append(f"{where(path)}: leaf vertex name {v!r} starts with 'S:'")
            return
        if not isinstance(node, Glue):
            problems.append(f"{where(path)}: not a Leaf or Glue node")
            return
        if not node.s_graph.vertices:
            problems.append(f"{where(path)}: separator S is empty")
        check_names(node.s_graph.vertices, path)
        for i, fam in enumerate(node.families):
            here = f"{where(path)} family {i}"
            if not isinstance(fam.multiplicity, SymbolicCardinal):
                problems.append(f"{here}: multiplicity is not a symbolic cardinal")
            elif fam.multiplicity.is_finite and fam.multiplicity.value < 1:
                problems.append(f"{here}: multiplicity must be at least 1")
            if not isinstance(fam.child, (Leaf, Glue)):
                problems.append(f"{here}: child is not a presentation")
                continue
            targets = boundary(fam.child) if isinstance(fam.child, (Leaf, Glue)) and _has_graph(fam.child) else frozenset()
            for s, b in sorted(fam.attachment):
                if s not in node.s_graph.vertices:
                    problems.append(f"{here}: attachment source {s!r} is not in S")
                if b not in targets:
                    problems.append(f"{here}: attachment target {b!r} is not on the child's boundary")
            visit(fam.child, path + (i,))

    visit(p, ())
    return problems


def _has_graph(node) -> bool:
    g = node.graph if isinstance(node, Leaf) else node.s_graph
    return isinstance(g, FiniteGraph)


def require_valid(p: Presentation) -> None:
    problems = validate(p)
    if problems:
        raise InputError("invalid presentation: " + "; ".join(problems))


# ---------------------------------------------------------------- degrees

def _degree(node: Presentation, parent: CopyFamily | None, terminal: str) -> SymbolicCardinal:
    if isinstance(node, Leaf):
        d = Finite(node.graph.degree(terminal))
        name = terminal
    else:
        name = terminal[2:]
        d = Finite(node.s_graph.degree(name))
        for fam in node.families:
            d = d + fam.multiplicity * fam.attached_to(name)
    if parent is not None:
        d = d + parent.attached_at(name)
    return d


def symbolic_degree(p: Presentation, a: VertexAddress | str) -> SymbolicCardinal:
    a, node, parent = _resolve(p, a)
    return _degree(node, parent, a.terminal)


def node_terminals(node: Presentation) -> list[str]:
    if isinstance(node, Leaf):
        return node.graph.order
    return ["S:" + v for v in node.s_graph.order]


@dataclass(frozen=True)
class AtlasEntry:
    degree: SymbolicCardinal
    multiplicity: SymbolicCardinal
    in_v_inf: bool
    in_v_star: bool
    v_inf_neighbours: SymbolicCardinal | None  # only tracked for V-infinity positions


@dataclass(frozen=True)
class DegreeAtlas:
    entries: Mapping[str, AtlasEntry]
    v_star_size: SymbolicCardinal

    @property
    def v_inf(self) -> list[str]:
        return [a for a, e in self.entries.items() if e.in_v_inf]

    @property
    def v_star(self) -> list[str]:
        return [a for a, e in self.entries.items() if e.in_v_star]

    def to_json(self) -> dict:
        return {
            "positions": {
                a: {
                    "degree": e.degree.to_json(),
                    "multiplicity": e.multiplicity.to_json(),
                    "in_v_inf": e.in_v_inf,
                    "in_v_star": e.in_v_star,
                }
                for a, e in self.entries.items()
            },
            "v_star_size": self.v_star_size.to_json(),
            "in_w": self.v_star_size.is_finite,
        }


def degree_atlas(p: Presentation) -> DegreeAtlas:
    """Infinite-degree positions and those with finitely many such neighbours."""
    infos = list(walk(p))
    degree = {}
    for info in infos:
        prefix = [(f, None) for f in info.path]
        for t in node_terminals(info.node):
            degree[_address(prefix, t)] = (_degree(info.node, info.parent_family, t), info.multiplicity)

    def infinite(addr: str) -> bool:
        return not degree[addr][0].is_finite

    entries = {}
    total = Finite(0)
    for info in infos:
        prefix = [(f, None) for f in info.path]
        for t in node_terminals(info.node):
            addr = _address(prefix, t)
            d, mult = degree[addr]
            if d.is_finite:
                entries[addr] = AtlasEntry(d, mult, False, False, None)
                continue
            # only separator vertices can reach infinite degree
            node, name = info.node, t[2:]
            count = Finite(0)
            for nb in node.s_graph.neighbours(name):
                count = count + int(infinite(_address(prefix, "S:" + nb)))
            for i, fam in enumerate(node.families):
                if isinstance(fam.child, Glue):
                    for s, b in fam.attachment:
                        if s == name and infinite(_address(prefix + [(i, None)], "S:" + b)):
                            count = count + fam.multiplicity
            if info.parent_family is not None:
                for s, b in info.parent_family.attachment:
                    if b == name and infinite(_address(prefix[:-1], "S:" + s)):
                        count = count + 1
            star = count.is_finite
            if star:
                total = total + mult
            entries[addr] = AtlasEntry(d, mult, True, star, count)
    return DegreeAtlas(entries, total)


def is_in_W(p: Presentation) -> bool:
    return degree_atlas(p).v_star_size.is_finite


# ---------------------------------------------------------------- rank

def structural_rank(p: Presentation) -> int:
    """Upper bound on the rank of the described graph.

    Finite graphs get 0. A Glue node takes the larger of its finite
    families' child ranks and one more than its infinite families' child
    ranks.
    """
    if isinstance(p, Leaf):
        return 0
    return _group_rank(p.families)


def _group_rank(families) -> int:
    r = 0
    for fam in families:
        child = structural_rank(fam.child)
        r = max(r, child + 1 if fam.is_omega else child)
    return r


def _max_component_rank(p: Glue, kept: frozenset[str]) -> int:
    """Largest structural rank among components of ``p - (S - kept)``.

    Kept separator vertices are merged with every copy they touch and with
    kept S-neighbours. A family touching two kept vertices is treated as
    joining them, which can only overestimate the rank.
    """
    parent = {v: v for v in kept}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v in p.s_graph.edges:
        if u in kept and v in kept:
            parent[find(u)] = find(v)
    for fam in p.families:
        touched = sorted({s for s, _ in fam.attachment if s in kept})
        for s in touched[1:]:
            parent[find(s)] = find(touched[0])

    groups: dict[str, list[CopyFamily]] = {find(v): [] for v in kept}
    worst = 0
    for fam in p.families:
        touched = {s for s, _ in fam.attachment if s in kept}
        if touched:
            groups[find(next(iter(touched)))].append(fam)
        else:
            worst = max(worst, structural_rank(fam.child))
    for fams in groups.values():
        worst = max(worst, _group_rank(fams))
    return worst


def minimal_separator(p: Presentation) -> frozenset[str]:
    """Inclusion-minimal part of the root separator that still drops the rank.

    Separator vertices whose removal from the set keeps every component
    below the root's structural rank are released greedily in lexicographic
    order; since merging only raises component ranks, one pass suffices.
    """
    if not isinstance(p, Glue):
        raise PreconditionError("minimal_separator needs a Glue node")
    rank = structural_rank(p)
    if rank < 1:
        raise PreconditionError("minimal_separator needs structural rank at least 1")
    current = frozenset(p.s_graph.vertices)
    if _max_component_rank(p, frozenset()) >= rank:
        raise PreconditionError("the root separator does not witness the structural rank")
    for v in p.s_graph.order:
        trial = current - {v}
        kept = frozenset(p.s_graph.vertices) - trial
        if _max_component_rank(p, kept) < rank:
            current = trial
    return current


# ---------------------------------------------------------------- instantiation

def instantiate(p: Presentation, n: int) -> tuple[FiniteGraph, dict[str, VertexAddress]]:
    """Finite graph with every infinite multiplicity replaced by ``n``."""
    if n < 0:
        raise InputError("n must be non-negative")
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    addresses: dict[str, VertexAddress] = {}

    def emit(node, steps):
        if isinstance(node, Leaf):
            g, names = node.graph, {v: _address(steps, v) for v in node.graph.vertices}
        else:
            g, names = node.s_graph, {v: _address(steps, "S:" + v) for v in node.s_graph.vertices}
        for v in g.order:
            vertices.append(names[v])
            addresses[names[v]] = VertexAddress.parse(names[v])
        edges.extend((names[u], names[v]) for u, v in sorted(g.edges))
        if isinstance(node, Glue):
            for i, fam in enumerate(node.families):
                copies = fam.multiplicity.value if fam.multiplicity.is_finite else n
                for c in range(copies):
                    child_names = emit(fam.child, steps + [(i, c)])
                    edges.extend((names[s], child_names[b]) for s, b in sorted(fam.attachment))
        return names

    emit(p, [])
    return FiniteGraph.build(vertices, edges), addresses


# ---------------------------------------------------------------- JSON

def to_json(p: Presentation) -> dict:
    if isinstance(p, Leaf):
        return {"type": "leaf", "graph": p.graph.to_json()}
    return {
        "type": "glue",
        "s": p.s_graph.to_json(),
        "families": [
            {
                "multiplicity": fam.multiplicity.to_json(),
                "child": to_json(fam.child),
                "attachment": [list(pair) for pair in sorted(fam.attachment)],
            }
            for fam in p.families
        ],
    }


def from_json(data) -> Presentation:
    if not isinstance(data, Mapping):
        raise InputError("presentation JSON must be an object")
    kind = data.get("type")
    if kind == "leaf":
        return Leaf(FiniteGraph.from_json(data.get("graph")))
    if kind == "glue":
        fams = []
        for f in data.get("families", []):
            if not isinstance(f, Mapping) or "child" not in f:
                raise InputError("family JSON needs 'child' and 'multiplicity'")
            pairs = [tuple(pair) for pair in f.get("attachment", [])]
            if any(len(pair) != 2 for pair in pairs):
                raise InputError("attachment entries must be pairs")
            if len(set(pairs)) != len(pairs):
                raise InputError("duplicate attachment pair")
            fams.append(CopyFamily.build(from_json(f["child"]), f.get("multiplicity"), pairs))
        return Glue(FiniteGraph.from_json(data.get("s")), tuple(fams))
    raise InputError(f"unknown presentation type {kind!r}")
