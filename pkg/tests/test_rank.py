from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import complete, graphs, path
from unfriendly.errors import CapacityError, InputError
from unfriendly.graph import FiniteGraph, dumps
from unfriendly.rank import (
    ALL_FINITE,
    EDGELESS,
    BaseFamily,
    bounded_rank,
    maxdeg_at_most,
    naive_rank,
    order_at_most,
    rank_union_check,
)

TWO_TRIANGLES = FiniteGraph.build("sabcxyz", ["ab", "bc", "ac", "xy", "yz", "xz", "sa", "sx"])


@pytest.mark.parametrize("k", [0, 1, 3])
def test_edgeless_has_rank_zero(k):
    r = bounded_rank(FiniteGraph.build("abcd"), EDGELESS, k)
    assert r.rank == 0 and r.witness is None


def test_p7_and_k4():
    p7 = bounded_rank(path(7), EDGELESS, 1)
    assert p7.rank == 2
    assert p7.witness.separator == ("d",)
    assert bounded_rank(complete(4), EDGELESS, 1).rank == 3


def test_no_rank_without_separators():
    assert bounded_rank(path(2), EDGELESS, 0) is None
    assert naive_rank(path(2), EDGELESS, 0) is None


def test_capacity_ceiling():
    g = FiniteGraph.build([f"v{i:02d}" for i in range(17)])
    with pytest.raises(CapacityError):
        bounded_rank(g, EDGELESS, 1)
    with pytest.raises(CapacityError):
        naive_rank(g, EDGELESS, 1)


def test_rank_json_round_trips():
    data = bounded_rank(path(3), EDGELESS, 1).to_json()
    assert data == {"rank": 1, "witness": {"separator": ["b"], "children": [
        {"component": ["a"], "rank": 0}, {"component": ["c"], "rank": 0}]}}
    assert json.loads(dumps(data)) == data


@pytest.mark.parametrize(
    "text,name",
    [("edgeless", "edgeless"), ("all-finite", "all-finite"), ("order<=2", "order<=2"),
     ("order≤3", "order<=3"), ("maxdeg<=1", "maxdeg<=1")],
)
def test_base_family_parse(text, name):
    assert BaseFamily.parse(text).name == name


def test_base_family_parse_rejects_unknown():
    with pytest.raises(InputError):
        BaseFamily.parse("planar")


def test_builtin_membership():
    assert ALL_FINITE.contains(complete(5))
    assert not EDGELESS.contains(path(2))
    assert maxdeg_at_most(2).contains(path(5)) and not maxdeg_at_most(1).contains(path(3))
    assert order_at_most(2).contains(path(2)) and not order_at_most(2).contains(path(3))


def test_union_check_examples():
    assert rank_union_check(FiniteGraph.build("ab"), EDGELESS, 1, [], [])
    assert rank_union_check(path(7), EDGELESS, 1, ["d"], [["a", "b", "c"]])
    assert rank_union_check(TWO_TRIANGLES, EDGELESS, 1, ["s"], [["a", "b", "c"]])
    assert rank_union_check(TWO_TRIANGLES, EDGELESS, 1, ["s"], [["a", "b", "c"], ["x", "y", "z"]])


def test_union_check_rejects_non_component():
    with pytest.raises(InputError):
        rank_union_check(path(7), EDGELESS, 1, ["d"], [["a", "b"]])


def _replay(g: FiniteGraph, sub: frozenset, result, base, k) -> None:
    if result.rank == 0:
        assert base.contains(g.induced(sub))
        return
    sep = frozenset(result.witness.separator)
    assert len(sep) <= k and sep <= sub
    comps = {frozenset(c) for c in g.induced(sub - sep).components()}
    assert {c for c, _ in result.witness.children} == comps
    for comp, child in result.witness.children:
        assert child.rank < result.rank
        _replay(g, comp, child, base, k)


@given(graphs(max_n=7), st.integers(1, 2))
@settings(max_examples=80, deadline=None)
def test_witness_replays(g, k):
    r = bounded_rank(g, EDGELESS, k)
    if r is not None:
        _replay(g, g.vertices, r, EDGELESS, k)
        assert all(len(s) <= k for s in r.separators())


@given(graphs(max_n=7))
@settings(max_examples=80, deadline=None)
def test_memo_agrees_with_naive(g):
    for base in (EDGELESS, maxdeg_at_most(1)):
        r = bounded_rank(g, base, 1)
        assert (None if r is None else r.rank) == naive_rank(g, base, 1)


@given(graphs(max_n=7))
@settings(max_examples=60, deadline=None)
def test_monotone_in_k(g):
    a, b = bounded_rank(g, EDGELESS, 1), bounded_rank(g, EDGELESS, 2)
    assert b is not None
    if a is not None:
        assert b.rank <= a.rank


@given(graphs(max_n=7))
@settings(max_examples=60, deadline=None)
def test_monotone_in_base(g):
    chain = [order_at_most(1), EDGELESS, maxdeg_at_most(1), maxdeg_at_most(2), ALL_FINITE]
    ranks = [bounded_rank(g, base, 2).rank for base in chain]
    assert ranks == sorted(ranks, reverse=True)


@given(graphs(max_n=7), st.data())
@settings(max_examples=60, deadline=None)
def test_induced_subgraph_rank_does_not_grow(g, data):
    keep = data.draw(st.sets(st.sampled_from(g.order), min_size=1))
    whole, part = bounded_rank(g, EDGELESS, 1), bounded_rank(g.induced(keep), EDGELESS, 1)
    if whole is not None:
        assert part is not None and part.rank <= whole.rank


def test_shared_memo_is_consistent():
    memo: dict = {}
    first = [bounded_rank(g, EDGELESS, 1, memo=memo).rank for g in (path(7), complete(4), path(5))]
    again = [bounded_rank(g, EDGELESS, 1, memo=memo).rank for g in (path(7), complete(4), path(5))]
    assert first == again == [2, 3, 2]
