"""Cross-validation of symbolic partitions against finite instantiations.

For each ``n`` the presentation and its symbolic partition are both
instantiated with ``n`` copies per infinite family. Finite-degree vertices
must then be happy by exact count; infinite-degree vertices must collect
opponents at least linearly in ``n``:

    opponents(n) >= c * (n - e)

where ``c`` counts the infinite families whose default copies give the
vertex an opponent and ``e`` is the largest exception count among its
infinite families.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import happiness
from .presentation import Glue, Presentation, VertexAddress, _resolve, instantiate, symbolic_degree
from .symbolic import SymbolicPartition, _boundary_colour, _copy_opponents, instantiate_partition


@dataclass
class Observation:
    n: int
    degree: int
    opponents: int
    happy: bool


@dataclass
class AddressVerdict:
    address: str
    finite_degree: int | None  # None for infinite symbolic degree
    observations: list[Observation] = field(default_factory=list)
    n0: int | None = None  # finite degree: happy for every n >= n0 in range
    c: int | None = None  # infinite degree: opponent rate and exception offset
    e: int | None = None
    failure: str | None = None

    @property
    def passed(self) -> bool:
        return self.failure is None

    def to_json(self) -> dict:
        out = {
            "address": self.address,
            "degree": "omega" if self.finite_degree is None else self.finite_degree,
            "observations": [[o.n, o.degree, o.opponents, o.happy] for o in self.observations],
            "passed": self.passed,
        }
        for name in ("n0", "c", "e", "failure"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        return out


@dataclass
class CrossValReport:
    ns: list[int]
    sizes: dict[int, tuple[int, int]]
    verdicts: dict[str, AddressVerdict]
    dropped: dict[int, list[str]]

    @property
    def failures(self) -> list[tuple[str, int | None, str]]:
        out = []
        for v in self.verdicts.values():
            if v.failure is not None:
                n = v.observations[-1].n if v.observations else None
                out.append((v.address, _failing_n(v) or n, v.failure))
        return out

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def max_n0(self) -> int | None:
        return max((v.n0 for v in self.verdicts.values() if v.n0 is not None), default=None)

    def to_json(self) -> dict:
        return {
            "ns": self.ns,
            "sizes": {str(n): list(s) for n, s in self.sizes.items()},
            "dropped": {str(n): d for n, d in self.dropped.items() if d},
            "passed": self.passed,
            "max_n0": self.max_n0,
            "addresses": [v.to_json() for v in self.verdicts.values()],
        }


def _failing_n(v: AddressVerdict) -> int | None:
    if v.c is not None and v.c < 1 and v.observations:
        return v.observations[0].n
    for o in v.observations:
        if v.finite_degree is not None and not o.happy:
            return o.n
        if v.c is not None and o.opponents < v.c * (o.n - v.e):
            return o.n
    return None


def opponent_rate(p: Presentation, sigma: SymbolicPartition, address: str | VertexAddress) -> tuple[int, int]:
    """``(c, e)`` for an infinite-degree separator vertex."""
    a, node, _ = _resolve(p, address)
    sg = sigma
    for f, copy in a.steps:
        sg = sg.families[f].copy_partition(copy)
    if not isinstance(node, Glue):
        return 0, 0
    col = sg.s_colours
    c = e = 0
    for fam, fp in zip(node.families, sg.families):
        if not fam.is_omega:
            continue
        e = max(e, len(fp.exceptions))
        per = _copy_opponents(fam, col, lambda b, d=fp.default: _boundary_colour(d, b))
        if per.get(a.name, 0) >= 1:
            c += 1
    return c, e


def cross_validate(p: Presentation, sigma: SymbolicPartition, ns: Iterable[int],
                   exempt: Iterable[str] = ()) -> CrossValReport:
    ns = sorted(set(ns))
    exempt = set(exempt)
    sizes: dict[int, tuple[int, int]] = {}
    dropped: dict[int, list[str]] = {}
    verdicts: dict[str, AddressVerdict] = {}
    degree_cache: dict[str, int | None] = {}

    for n in ns:
        g, addresses = instantiate(p, n)
        part, dropped[n] = instantiate_partition(p, sigma, n)
        sizes[n] = (len(g.vertices), len(g.edges))
        report = happiness(g, part)
        for name in g.order:
            if name in exempt:
                continue
            pos = str(addresses[name].position)
            if pos not in degree_cache:
                d = symbolic_degree(p, pos)
                degree_cache[pos] = d.value
            v = verdicts.get(name)
            if v is None:
                v = verdicts[name] = AddressVerdict(name, degree_cache[pos])
                if v.finite_degree is None:
                    v.c, v.e = opponent_rate(p, sigma, name)
            r = report.records[name]
            v.observations.append(Observation(n, r.degree, r.opponents, r.happy))

    for v in verdicts.values():
        _judge(v, ns)
    return CrossValReport(ns, sizes, dict(sorted(verdicts.items())), dropped)


def _judge(v: AddressVerdict, ns: list[int]) -> None:
    obs = v.observations
    if v.finite_degree is not None:
        wrong = [o.n for o in obs if o.degree != v.finite_degree]
        if wrong:
            v.failure = f"instantiated degree differs from symbolic degree {v.finite_degree} at n={wrong[0]}"
            return
        n0 = ns[0]
        for o in obs:
            if not o.happy:
                later = [x for x in ns if x > o.n]
                n0 = later[0] if later else None
        v.n0 = n0
        if n0 is None:
            v.failure = "unhappy at the largest n"
        return
    if v.c < 1:
        v.failure = "no infinite family gives this vertex an opponent"
        return
    for o in obs:
        if o.opponents < v.c * (o.n - v.e):
            v.failure = f"opponents {o.opponents} < {v.c}*({o.n}-{v.e}) at n={o.n}"
            return
    for prev, cur in zip(obs, obs[1:]):
        if cur.opponents < prev.opponents:
            v.failure = f"opponents decreased from n={prev.n} to n={cur.n}"
            return
