"""Acceptance criteria 1-8.

Each criterion builds a JSON-able record of what it measured, asserts the
expected values, and checks its time bound.  One PASS/FAIL line per
criterion is printed straight to the terminal (not captured), so the lines
appear in ``pytest -v`` logs.  Criterion 8 recomputes 1-7 and compares the
records byte for byte.
"""
import json
import time

import numpy as np
import pytest

from conftest import FIXTURES
from hylocheck.codata import (check_guardedness, load_codata, prefix, productivity_probe,
                              random_smerge_machine, unfold)
from hylocheck.coinductive import (check_criteria, compute_quotient, extract_quotient_solution,
                                   verify_solution)
from hylocheck.inductive import SolutionTable, extract_partial_solution, is_wellfounded
from hylocheck.instance import generate_example, load_instance
from hylocheck.oracle import DEFAULT_CAMPAIGN, enumerate_solutions, run_campaign
from hylocheck.report import build_report, oracle_section, to_json

SMERGE_SEED = 20240601
RECORDS = {}


def merge_sort(xs):
    if len(xs) <= 1:
        return list(xs)
    mid = len(xs) // 2
    left, right = merge_sort(xs[:mid]), merge_sort(xs[mid:])
    out = []
    while left and right:
        out.append(left.pop(0) if left[0] <= right[0] else right.pop(0))
    return out + left + right


def _names(carrier, mask):
    return sorted(carrier.elements[i] for i in np.flatnonzero(mask))


def _pairs(X, Y, M):
    return sorted((X.elements[i], Y.elements[j]) for i, j in zip(*np.nonzero(M)))


def _full_report(inst):
    v = check_criteria(inst)
    rep = build_report(inst, v, oracle_section(inst, enumerate_solutions(inst)))
    return v, rep


def criterion_1():
    inst = load_instance(FIXTURES / "tiny.json")
    v, rep = _full_report(inst)
    assert _names(inst.A, v.dom.member) == ["a0", "a1"]
    assert [v.dom.rank[inst.A.index(a)] for a in ("a0", "a1")] == [1, 2]
    assert _pairs(inst.A, inst.B, v.graph.pairs) == [("a0", "b0"), ("a1", "b1")]
    assert (v.bisim.pairs == np.eye(2, dtype=bool)).all()
    assert v.wellfounded and v.antifounded
    assert rep["oracle"]["count"] == 1
    return to_json(rep)


def criterion_2():
    inst = load_instance(FIXTURES / "tiny_loop.json")
    v, rep = _full_report(inst)
    assert not v.wellfounded and _names(inst.A, v.dom.member) == ["a0"]
    assert _names(inst.A, v.cograph.dom_inf) == ["a0", "a1"]
    assert (v.cograph.equiv == np.eye(2, dtype=bool)).all()
    assert v.criterion_equiv
    assert rep["oracle"]["count"] == 1
    sol = extract_quotient_solution(inst)
    # the classes are singletons, so the quotient solution is a plain one
    plain = {a: sol.quotient.representative[c] for a, c in sol.value.items()}
    assert {inst.A.elements[a]: inst.B.elements[b] for a, b in plain.items()} == \
        {"a0": "b0", "a1": "b1"}
    assert verify_solution(inst, SolutionTable(sol.defined_on, plain), "plain").ok
    return to_json(rep)


def criterion_3():
    inst = load_instance(FIXTURES / "modsucc2.json")
    v, rep = _full_report(inst)
    assert not v.antifounded and not v.criterion_bisim and not v.criterion_equiv
    assert rep["oracle"]["count"] == 0
    q = compute_quotient(inst)
    assert len(q) == 1
    sol = extract_quotient_solution(inst, q)
    assert sol.total and verify_solution(inst, sol, "quotiented", q).ok
    return to_json(rep)


def criterion_4():
    inst = generate_example("identity", size_a=1, size_b=2)
    v, rep = _full_report(inst)
    assert not v.dom.member.any()
    assert v.cograph.equiv.all()
    assert not v.criterion_bisim and not v.criterion_equiv
    assert rep["oracle"]["count"] == 2
    return to_json(rep)


def criterion_5():
    out = {}
    for name, size in (("isort_k2n3.json", 15), ("qsort_k3n4.json", 121)):
        inst = load_instance(FIXTURES / name)
        assert inst.nA == size
        assert is_wellfounded(inst).wellfounded
        sol = extract_partial_solution(inst).named(inst)
        assert len(sol) == size
        for a, b in sol.items():
            assert json.loads(b) == merge_sort(json.loads(a))
        out[name] = sol
    return json.dumps(out, sort_keys=True)


def criterion_6():
    rep = run_campaign(DEFAULT_CAMPAIGN)
    assert rep.ok, rep.failures[:3]
    assert all(t["fail"] == 0 for t in rep.tallies.values())
    assert rep.data["bisim_not_in_equiv"] >= 1
    assert rep.witnesses["bisim_not_in_equiv"]
    return rep.to_json()


def criterion_7():
    out = {}
    dropeven = load_codata(FIXTURES / "dropeven.codata")
    out["dropeven"] = prefix(dropeven, "f(arith(0,1))", 8)
    assert out["dropeven"] == [0, 2, 4, 6, 8, 10, 12, 14]
    probes = []
    for i in range(20):
        sys, table = random_smerge_machine(1 + i % 4, (SMERGE_SEED, i))
        cert = productivity_probe(sys, "f(q0)", 16)
        assert cert.ok
        probes.append({"table": table, "max_steps": cert.max_steps_per_observation})
    out["smerge"] = probes
    bad = load_codata(FIXTURES / "bad_loop.codata")
    r = unfold(bad, "f(arith(0,1))", ["hd"], fuel=1000)
    assert r.exhausted
    guard = check_guardedness(bad)
    assert not guard.guarded
    out["bad_loop"] = {"result": str(r.value), "guarded": guard.guarded}
    return json.dumps(out, sort_keys=True)


CRITERIA = {
    1: ("fixture exactness on tiny", criterion_1, 1.0),
    2: ("coinductive criterion where induction fails (tiny_loop)", criterion_2, 1.0),
    3: ("no-solution counterexample (modsucc2)", criterion_3, 1.0),
    4: ("underdetermined counterexample (identity 1x2)", criterion_4, 1.0),
    5: ("sorting examples against a reference sort", criterion_5, 10.0),
    6: ("property campaign", criterion_6, 300.0),
    7: ("productive stream examples", criterion_7, 5.0),
}


def _announce(capsys, number, title, ok, detail):
    with capsys.disabled():
        print(f"\n[acceptance] criterion {number} {'PASS' if ok else 'FAIL'}: {title} ({detail})")


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    title, fn, limit = CRITERIA[number]
    t0 = time.perf_counter()
    try:
        record = fn()
    except AssertionError:
        _announce(capsys, number, title, False, "assertion failed")
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < limit
    _announce(capsys, number, title, ok, f"{elapsed:.2f}s, limit {limit:g}s")
    RECORDS[number] = record
    assert ok, f"criterion {number} took {elapsed:.2f}s (limit {limit}s)"


def test_criterion_8_determinism(capsys):
    t0 = time.perf_counter()
    first = {n: RECORDS.get(n) or CRITERIA[n][1]() for n in CRITERIA}
    second = {n: CRITERIA[n][1]() for n in CRITERIA}
    differing = [n for n in CRITERIA if first[n] != second[n]]
    ok = not differing
    _announce(capsys, 8, "byte-identical JSON on re-run", ok,
              f"{time.perf_counter() - t0:.2f}s" + (f", differs: {differing}" if differing else ""))
    assert ok
