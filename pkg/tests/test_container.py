import itertools

import pytest
from hypothesis import given, strategies as st

from hylocheck.container import (ContainerSpec, FStructure, Shape, enumerate_fstructures,
                                 lift_pred, lift_rel, map_functor)
from hylocheck.errors import UnknownElement, ValidationError

NAT = ContainerSpec([("z", 0), ("s", 1)])
PAIR = ContainerSpec([("n", 2)])
ZN = ContainerSpec([("z", 0), ("n", 2)])


def test_map_functor_examples():
    assert map_functor(NAT, {"b0": "b1"}, FStructure("z")) == FStructure("z")
    assert map_functor(NAT, {"b0": "b1", "b1": "b1"}, FStructure("s", ("b0",))) \
        == FStructure("s", ("b1",))
    assert map_functor(PAIR, {"x": "y", "y": "x"}, FStructure("n", ("x", "y"))) \
        == FStructure("n", ("y", "x"))


def test_map_functor_unknown_element():
    with pytest.raises(UnknownElement):
        map_functor(NAT, {}, FStructure("s", ("b0",)))


def test_lift_pred_examples():
    assert lift_pred(NAT, set(), FStructure("z"))
    assert not lift_pred(NAT, {"b0"}, FStructure("s", ("b1",)))
    assert lift_pred(PAIR, {"x"}, FStructure("n", ("x", "x")))


def test_lift_rel_examples():
    assert lift_rel(NAT, set(), FStructure("z"), FStructure("z"))
    assert not lift_rel(NAT, {("b0", "b0")}, FStructure("z"), FStructure("s", ("b0",)))
    assert lift_rel(NAT, {("a0", "b0")}, FStructure("s", ("a0",)), FStructure("s", ("b0",)))


def test_enumerate_examples():
    assert enumerate_fstructures(NAT, ["b0", "b1"]) == [
        FStructure("z"), FStructure("s", ("b0",)), FStructure("s", ("b1",))]
    assert enumerate_fstructures(PAIR, ["x"]) == [FStructure("n", ("x", "x"))]
    assert len(enumerate_fstructures(ZN, ["x", "y"])) == 5


def test_validation():
    with pytest.raises(ValidationError):
        ContainerSpec([])
    with pytest.raises(ValidationError):
        ContainerSpec([("z", 0), ("z", 1)])
    with pytest.raises(ValidationError):
        ContainerSpec([("", 0)])
    with pytest.raises(ValidationError, match="arity cap"):
        ContainerSpec([("big", 5)])
    assert ContainerSpec([("big", 5)], max_arity=5).profile == (5,)


def test_index_roundtrip():
    F = ContainerSpec([("a", 0), ("b", 2), ("c", 1), ("d", 3)])
    for n in range(4):
        structs = list(F.index_structures(n))
        assert len(structs) == F.count(n)
        for k, (s, args) in enumerate(structs):
            assert F.index(s, args, n) == k
            assert F.structure(k, n) == (s, args)


profiles = st.lists(st.integers(0, 3), min_size=1, max_size=3)


@given(profiles, st.integers(0, 3))
def test_enumeration_count_and_distinct(profile, n):
    F = ContainerSpec([Shape(f"s{i}", a) for i, a in enumerate(profile)])
    X = [f"x{i}" for i in range(n)]
    structs = enumerate_fstructures(F, X)
    assert len(structs) == sum(n ** a for a in profile)
    assert len(set(structs)) == len(structs)


def _carriers_and_structs():
    for F in (NAT, PAIR, ZN, ContainerSpec([("u", 1), ("t", 3)])):
        for n in range(4):
            X = [f"x{i}" for i in range(n)]
            yield F, X, enumerate_fstructures(F, X)


def test_lift_rel_equality_is_structural_equality():
    for F, X, structs in _carriers_and_structs():
        eq = {(x, x) for x in X}
        for fs, gs in itertools.product(structs, repeat=2):
            assert lift_rel(F, eq, fs, gs) == (fs == gs)


def test_lift_pred_is_diagonal_lift_rel():
    for F, X, structs in _carriers_and_structs():
        for bits in itertools.product((False, True), repeat=len(X)):
            P = {x for x, b in zip(X, bits) if b}
            diag = {(x, x) for x in P}
            for fs in structs:
                assert lift_pred(F, P, fs) == lift_rel(F, diag, fs, fs)


def test_map_functor_laws():
    for F, X, structs in _carriers_and_structs():
        ident = {x: x for x in X}
        for h_vals in itertools.product(X, repeat=len(X)):
            h = dict(zip(X, h_vals))
            g = dict(zip(X, reversed(X)))
            gh = {x: g[h[x]] for x in X}
            for fs in structs:
                assert map_functor(F, ident, fs) == fs
                mapped = map_functor(F, h, fs)
                assert mapped.shape == fs.shape
                assert map_functor(F, g, mapped) == map_functor(F, gh, fs)
