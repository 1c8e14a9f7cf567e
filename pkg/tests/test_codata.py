import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES
from hylocheck.codata import (FuelExhausted, check_guardedness, codata_from_document,
                              emit_codata, load_codata, parse_codata, prefix,
                              productivity_probe, random_smerge_machine, smerge_machine, unfold)
from hylocheck.errors import ParseError, StuckTerm, ValidationError

CONS = {
    "destructors": [{"name": "hd", "sort": "value"}, {"name": "tl", "sort": "codata"}],
    "operations": [{"name": "cons", "args": ["value", "codata"]}],
    "generators": [],
    "rules": ["hd(cons(x,s)) = x", "tl(cons(x,s)) = s"],
    "equation": ["f(s) = cons(hd(s),f(tl(s)))"],
}


def system(**changes):
    return codata_from_document(dict(json.loads(json.dumps(CONS)), **changes))


@pytest.fixture(scope="module")
def dropeven():
    return load_codata(FIXTURES / "dropeven.codata")


@pytest.fixture(scope="module")
def smerge():
    return load_codata(FIXTURES / "smerge.codata")


@pytest.fixture(scope="module")
def bad():
    return load_codata(FIXTURES / "bad_loop.codata")


def test_fixtures_parse(dropeven, smerge, bad):
    assert dropeven.stream_signature() == ("hd", "tl")
    assert set(smerge.rules) == {("hd", "smerge"), ("tl", "smerge")}
    assert str(smerge.rules[("tl", "smerge")]) == \
        "tl(smerge(x,xs0,xs1)) = smerge(hd(xs0),xs1,tl(xs0))"
    assert set(smerge.equation) == {"g", "h", "z"}
    assert ("hd", "bad") in bad.rules


def test_emit_roundtrip(dropeven, smerge, bad):
    for sys in (dropeven, smerge, bad):
        text = emit_codata(sys)
        assert emit_codata(parse_codata(text)) == text


@pytest.mark.parametrize("change, message", [
    ({"rules": CONS["rules"] + ["tl(cons(y,t)) = t"]}, "duplicate rule"),
    ({"rules": ["hd(cons(x,s)) = s", "tl(cons(x,s)) = s"]}, "ill-sorted"),
    ({"rules": ["hd(cons(x,s)) = x"]}, "missing rule"),
    ({"rules": ["hd(cons(x,s)) = x", "tl(cons(x,s)) = cons(s,s)"]}, "ill-sorted"),
    ({"rules": ["hd(cons(x,s)) = y", "tl(cons(x,s)) = s"]}, "unbound variable"),
    ({"rules": ["hd(cons(x,x)) = x", "tl(cons(x,s)) = s"]}, "repeated pattern"),
    ({"equation": ["f(s) = hd(s)"]}, "codata"),
    ({"equation": ["f(s) = s", "f(t) = t"]}, "overlapping"),
    ({"rules": CONS["rules"] + ["hd(snoc(x,s)) = x"]}, "not a declared"),
])
def test_validation_errors(change, message):
    with pytest.raises(ValidationError, match=message):
        system(**change)


@pytest.mark.parametrize("text", ["{", "[]", json.dumps(dict(CONS, rules=["hd(cons(x,s)) x"])),
                                  json.dumps(dict(CONS, rules=["hd(cons(x,s) = x"]))])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_codata(text)


def test_dropeven_unfold(dropeven):
    t = "f(arith(0,1))"
    assert unfold(dropeven, t, ["hd"]).value == 0
    assert unfold(dropeven, t, ["tl", "hd"]).value == 2
    assert unfold(dropeven, t, ["tl", "tl", "hd"]).value == 4
    assert prefix(dropeven, t, 8) == [0, 2, 4, 6, 8, 10, 12, 14]
    cert = productivity_probe(dropeven, t, 32)
    assert cert.ok and cert.max_steps_per_observation > 0


def test_smerge_prefixes(smerge):
    assert prefix(smerge, "f(g)", 4) == [0, 1, 1, 0]
    assert prefix(smerge, "f(z)", 4) == [0, 0, 0, 0]


def test_copy_on_cycle():
    sys = system()
    assert prefix(sys, "f(cycle([7]))", 10) == [7] * 10
    assert prefix(sys, "f(cycle([1,2,3]))", 7) == [1, 2, 3, 1, 2, 3, 1]


def test_bad_loop(bad):
    r = unfold(bad, "f(arith(0,1))", ["hd"], fuel=1000)
    assert r.exhausted and r.steps_used == 1000
    assert "hd" in r.value.observation
    cert = productivity_probe(bad, "f(arith(0,1))", 1, fuel=1000)
    assert not cert.ok and cert.failed_at == 0 and "FuelExhausted" in cert.report
    p = prefix(bad, "f(arith(0,1))", 3, fuel=50)
    assert isinstance(p, FuelExhausted) and p.index == 0


def test_guardedness(dropeven, smerge, bad):
    assert check_guardedness(smerge).guarded
    assert check_guardedness(dropeven).guarded
    v = check_guardedness(bad)
    assert not v.guarded and "hd(bad(s))" in v.offending
    assert not check_guardedness(system(equation=["f(s) = f(tl(s))"])).guarded


def test_stuck_terms(smerge):
    with pytest.raises(StuckTerm):
        unfold(smerge, "f(arith(0,1))", ["hd"])
    with pytest.raises(StuckTerm):
        unfold(system(), "cycle([])", ["hd"])
    cert = productivity_probe(smerge, "f(arith(0,1))", 4)
    assert not cert.ok and cert.report.startswith("stuck")


def test_unknown_destructor(dropeven):
    with pytest.raises(ValidationError):
        unfold(dropeven, "f(arith(0,1))", ["head"])
    with pytest.raises(ValidationError):
        unfold(dropeven, "f(nope)", ["hd"])


# Independent oracle for smerge machines: streams as index functions with
# smerge(x, a, b) = x : smerge(hd a, b, tl a) interpreted directly in Python.

def _smerge(x, a, b):
    def at(i):
        if i == 0:
            return x
        return _smerge(a(0), b, lambda j: a(j + 1))(i - 1)
    return at


def machine_stream(table, q):
    x, j, k = table[q]
    return _smerge(x, lambda i: machine_stream(table, j)(i),
                   lambda i: machine_stream(table, k)(i))


def test_smerge_hand_example():
    table = [(0, 1, 1), (1, 0, 0)]
    assert [machine_stream(table, 0)(i) for i in range(4)] == [0, 1, 1, 0]
    assert prefix(smerge_machine(table), "f(q0)", 4) == [0, 1, 1, 0]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32))
def test_smerge_matches_independent_oracle(size, seed):
    sys, table = random_smerge_machine(size, seed)
    for q in range(size):
        expect = [machine_stream(table, q)(i) for i in range(10)]
        assert prefix(sys, f"f(q{q})", 10) == expect


def test_smerge_random_machines_productive():
    for seed in range(20):
        sys, table = random_smerge_machine(1 + seed % 4, seed)
        assert check_guardedness(sys).guarded
        for q in range(len(table)):
            assert productivity_probe(sys, f"f(q{q})", 16).ok


def test_shipped_guarded_fixtures_productive(dropeven, smerge):
    for sys, t in ((dropeven, "f(arith(0,1))"), (smerge, "f(g)"), (smerge, "f(h)"),
                   (smerge, "f(z)"), (system(), "f(cycle([4,5]))")):
        assert check_guardedness(sys).guarded
        assert productivity_probe(sys, t, 32).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2 ** 32), st.integers(0, 6))
def test_determinism_fuel_and_prefix_coherence(size, seed, depth):
    sys, _ = random_smerge_machine(size, seed)
    path = ["tl"] * depth + ["hd"]
    r = unfold(sys, "f(q0)", path)
    assert r == unfold(sys, "f(q0)", path)
    assert r.steps_used <= 10_000
    exact = unfold(sys, "f(q0)", path, fuel=r.steps_used)
    assert exact.value == r.value
    assert unfold(sys, "f(q0)", path, fuel=r.steps_used + 17).value == r.value
    if r.steps_used > 0:
        assert unfold(sys, "f(q0)", path, fuel=r.steps_used - 1).exhausted
    short, longer = prefix(sys, "f(q0)", depth), prefix(sys, "f(q0)", depth + 1)
    assert longer[:depth] == short
