"""Least-fixpoint analyses of an equation instance.

The domain predicate ``dom`` is the least D with ``a in D`` whenever every
argument of ``alpha(a)`` is in D.  The inductive graph is the least
relation G containing ``(a, beta(bs))`` whenever ``alpha(a)`` and ``bs``
have the same shape and G relates them position by position.

Both are computed by plain round-based iteration from the empty set so that
every member carries the round in which it first appeared (its rank).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .container import lift_rows
from .errors import EngineInconsistency
from .instance import EquationInstance


@dataclass(frozen=True, eq=False)
class PredResult:
    member: np.ndarray          # bool, over A
    rank: dict                  # element index -> first round (>= 1)
    trace: tuple                # member count after each round

    @property
    def members(self) -> list:
        return [int(i) for i in np.flatnonzero(self.member)]


@dataclass(frozen=True, eq=False)
class RelResult:
    pairs: np.ndarray           # bool, |A| x |B|
    rank: dict                  # (a, b) -> first round
    trace: tuple

    def pair_list(self) -> list:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.pairs))]


@dataclass(frozen=True, eq=False)
class SolutionTable:
    """A function on a subset of A.

    ``value`` maps element positions of A to positions of B, or to class
    numbers of ``quotient`` when that is set.
    """
    defined_on: np.ndarray
    value: dict
    quotient: object = field(default=None)

    def __post_init__(self):
        dom = {int(i) for i in np.flatnonzero(self.defined_on)}
        if dom != set(self.value):
            raise ValueError("defined_on must equal the domain of value")

    @property
    def total(self) -> bool:
        return bool(self.defined_on.all())

    def named(self, inst: EquationInstance) -> dict:
        if self.quotient is None:
            return {inst.A.elements[a]: inst.B.elements[b] for a, b in sorted(self.value.items())}
        return {inst.A.elements[a]: self.quotient.label(c) for a, c in sorted(self.value.items())}


@dataclass(frozen=True)
class InductionCheck:
    premise_holds: bool
    conclusion_holds: bool


def _beta_blocks(inst: EquationInstance) -> list:
    """Per shape, the beta table reshaped to ``(|B|,)*arity``."""
    nB = inst.nB
    out = []
    for (off, ar) in zip(inst.functor.offsets(nB), inst.functor.profile):
        out.append(inst.beta.out[off:off + nB ** ar].reshape((nB,) * ar))
    return out


def graph_step(inst: EquationInstance, R: np.ndarray, blocks=None) -> np.ndarray:
    """One application of the graph operator to ``R`` (|A| x |B| booleans)."""
    if blocks is None:
        blocks = _beta_blocks(inst)
    out = np.zeros((inst.nA, inst.nB), dtype=bool)
    for a in range(inst.nA):
        s = inst.alpha.shape[a]
        mask = lift_rows([R[x] for x in inst.alpha.args[a]])
        out[a, blocks[s][mask]] = True
    return out


def dom_step(inst: EquationInstance, D: np.ndarray) -> np.ndarray:
    return np.array([all(D[x] for x in inst.alpha.args[a]) for a in range(inst.nA)], dtype=bool)


def _lfp(step, start):
    current = start
    ranks = {}
    trace = []
    rounds = 0
    while True:
        nxt = step(current)
        rounds += 1
        if not (nxt >= current).all():
            raise EngineInconsistency("fixpoint iteration is not increasing")
        for idx in zip(*np.nonzero(nxt & ~current)):
            ranks[tuple(int(i) for i in idx) if len(idx) > 1 else int(idx[0])] = rounds
        trace.append(int(nxt.sum()))
        if (nxt == current).all():
            return current, ranks, tuple(trace)
        current = nxt


def compute_dom(inst: EquationInstance) -> PredResult:
    member, rank, trace = _lfp(lambda D: dom_step(inst, D), np.zeros(inst.nA, dtype=bool))
    return PredResult(member, rank, trace)


@dataclass(frozen=True, eq=False)
class WellfoundedCheck:
    wellfounded: bool
    rank: dict                   # certificate when wellfounded
    counterexample: list         # A \ dom otherwise

    def __bool__(self):
        return self.wellfounded


def is_wellfounded(inst: EquationInstance, dom: PredResult | None = None) -> WellfoundedCheck:
    dom = dom or compute_dom(inst)
    missing = [int(i) for i in np.flatnonzero(~dom.member)]
    return WellfoundedCheck(not missing, dict(dom.rank), missing)


def compute_graph_lfp(inst: EquationInstance) -> RelResult:
    blocks = _beta_blocks(inst)
    pairs, rank, trace = _lfp(lambda R: graph_step(inst, R, blocks),
                              np.zeros((inst.nA, inst.nB), dtype=bool))
    return RelResult(pairs, rank, trace)


def check_functional(rel: RelResult):
    """``None`` when every row has at most one entry, else ``(a, b, b*)``."""
    for a, row in enumerate(rel.pairs):
        hits = np.flatnonzero(row)
        if len(hits) > 1:
            return a, int(hits[0]), int(hits[1])
    return None


def check_dom_vs_Dom(inst: EquationInstance, dom: PredResult | None = None,
                     graph: RelResult | None = None):
    """``None`` when dom and the graph's projection agree, else the first differing element."""
    dom = dom or compute_dom(inst)
    graph = graph or compute_graph_lfp(inst)
    Dom = graph.pairs.any(axis=1)
    diff = np.flatnonzero(Dom != dom.member)
    return int(diff[0]) if len(diff) else None


def extract_partial_solution(inst: EquationInstance, dom: PredResult | None = None,
                             graph: RelResult | None = None) -> SolutionTable:
    """The unique solution on A|dom, computed by rank and checked against the graph."""
    dom = dom or compute_dom(inst)
    graph = graph or compute_graph_lfp(inst)
    F, nB = inst.functor, inst.nB
    f = {}
    for a in sorted(dom.rank, key=lambda a: (dom.rank[a], a)):
        args = [f[x] for x in inst.alpha.args[a]]
        f[a] = int(inst.beta.out[F.index(inst.alpha.shape[a], args, nB)])
    for a in range(inst.nA):
        row = np.flatnonzero(graph.pairs[a])
        expected = [f[a]] if a in f else []
        if list(row) != expected:
            raise EngineInconsistency(
                f"rank recursion and inductive graph disagree at {inst.A.elements[a]!r}")
    return SolutionTable(dom.member.copy(), f)


def check_induction_principle(inst: EquationInstance, P) -> InductionCheck:
    """``P`` is a boolean mask over A or a collection of element names."""
    P = _as_mask(P, inst)
    closed = all(P[a] or not all(P[x] for x in inst.alpha.args[a]) for a in range(inst.nA))
    return InductionCheck(bool(closed), bool(P.all()))


def _as_mask(P, inst):
    if isinstance(P, np.ndarray) and P.dtype == bool:
        return P
    mask = np.zeros(inst.nA, dtype=bool)
    for x in P:
        mask[inst.A.index(x) if isinstance(x, str) else int(x)] = True
    return mask
