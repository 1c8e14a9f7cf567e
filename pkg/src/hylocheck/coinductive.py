"""Greatest-fixpoint analyses: bisimilarity, the coinductive graph, quotients.

Bisimilarity on B is the largest R such that every related pair ``(b, b*)``
has presentations ``b = beta(bs)``, ``b* = beta(bs*)`` with ``bs`` and
``bs*`` related position-wise by the reflexive-transitive closure R*.  The
closure is recomputed from the current iterate in every round.

The coinductive graph is the largest relation G between A and B such that
every ``(a, b)`` in G has ``b = beta(bs)`` with ``alpha(a)`` related to
``bs`` by G position-wise; it is the greatest fixpoint of the same operator
whose least fixpoint is the inductive graph.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainMismatch, EngineInconsistency
from .inductive import (PredResult, RelResult, SolutionTable, _beta_blocks, compute_dom,
                        compute_graph_lfp, graph_step)
from .instance import EquationInstance


@dataclass(frozen=True, eq=False)
class BisimResult:
    pairs: np.ndarray        # bool |B| x |B|
    classes: tuple           # partition of B by the closure, ordered by least member
    class_of: np.ndarray     # class number per element of B
    trace: tuple

    @property
    def closure(self) -> np.ndarray:
        return self.class_of[:, None] == self.class_of[None, :]


@dataclass(frozen=True, eq=False)
class CoGraphResult:
    pairs: np.ndarray        # bool |A| x |B|
    dom_inf: np.ndarray      # bool over A
    equiv: np.ndarray        # bool |B| x |B|
    trace: tuple

    def pair_list(self) -> list:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self.pairs))]


@dataclass(frozen=True, eq=False)
class Quotient:
    classes: tuple           # tuple of tuples of B positions
    class_of: np.ndarray
    representative: tuple    # least member of each class
    induced_beta: np.ndarray # over the enumeration of F(classes)
    labels: tuple = field(default=())

    def __len__(self):
        return len(self.classes)

    def label(self, c: int) -> str:
        return self.labels[c] if self.labels else str(c)


@dataclass(frozen=True, eq=False)
class Verdict:
    wellfounded: bool
    antifounded: bool
    criterion_bisim: bool
    criterion_equiv: bool
    evidence: dict           # field -> {"certificate": ...} or {"counterexample": ...}
    dom: PredResult
    graph: RelResult
    bisim: BisimResult
    cograph: CoGraphResult

    def flags(self) -> dict:
        return {"wellfounded": self.wellfounded, "antifounded": self.antifounded,
                "criterion_bisim": self.criterion_bisim,
                "criterion_equiv": self.criterion_equiv}


@dataclass(frozen=True)
class CoinductionCheck:
    premise_holds: bool
    conclusion_holds: bool


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    failing: object = None   # first element of A where the square fails

    def __bool__(self):
        return self.ok


def closure(R: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean matrix (Warshall)."""
    C = R | np.eye(len(R), dtype=bool)
    for k in range(len(R)):
        C |= np.logical_and.outer(C[:, k], C[k, :])
    return C


def _one_hot(values: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((len(values), n))
    out[np.arange(len(values)), values] = 1.0
    return out


def bisim_step(inst: EquationInstance, R: np.ndarray, blocks=None) -> np.ndarray:
    """Pairs with same-shape presentations whose arguments are related by R*."""
    if blocks is None:
        blocks = _beta_blocks(inst)
    nB = inst.nB
    C = closure(R).astype(float)
    out = np.zeros((nB, nB), dtype=bool)
    for block in blocks:
        k = block.ndim
        M = _one_hot(block.reshape(-1), nB)           # structure x output
        W = M.reshape((nB,) * k + (nB,))
        for axis in range(k):
            # W[.., j', ..] = sum_j C[j, j'] W[.., j, ..]
            W = np.moveaxis(np.tensordot(W, C, axes=([axis], [0])), -1, axis)
        out |= (W.reshape(-1, nB).T @ M) > 0
    return out


def _gfp(step, start):
    current = start
    trace = []
    while True:
        nxt = step(current)
        if not (nxt <= current).all():
            raise EngineInconsistency("fixpoint iteration is not decreasing")
        trace.append(int(nxt.sum()))
        if (nxt == current).all():
            return current, tuple(trace)
        current = nxt


def _partition(C: np.ndarray):
    n = len(C)
    if not (C == C.T).all():
        raise EngineInconsistency("closure of bisimilarity is not symmetric")
    class_of = np.full(n, -1, dtype=np.int64)
    classes = []
    for b in range(n):
        if class_of[b] < 0:
            members = tuple(int(x) for x in np.flatnonzero(C[b]))
            class_of[list(members)] = len(classes)
            classes.append(members)
    return tuple(classes), class_of


def compute_bisim(inst: EquationInstance) -> BisimResult:
    blocks = _beta_blocks(inst)
    nB = inst.nB
    pairs, trace = _gfp(lambda R: bisim_step(inst, R, blocks), np.ones((nB, nB), dtype=bool))
    classes, class_of = _partition(closure(pairs))
    return BisimResult(pairs, classes, class_of, trace)


def is_antifounded(inst: EquationInstance, bisim: BisimResult | None = None):
    """``(True, None)`` or ``(False, (b, b*))`` with ``b != b*`` bisimilar."""
    bisim = bisim or compute_bisim(inst)
    off = bisim.pairs & ~np.eye(inst.nB, dtype=bool)
    if off.any():
        b, c = np.argwhere(off)[0]
        return False, (int(b), int(c))
    return True, None


def compute_quotient(inst: EquationInstance, bisim: BisimResult | None = None) -> Quotient:
    bisim = bisim or compute_bisim(inst)
    F, nB = inst.functor, inst.nB
    classes, class_of = bisim.classes, bisim.class_of
    reps = tuple(c[0] for c in classes)
    nq = len(classes)
    induced = np.array([class_of[inst.beta.out[F.index(s, [reps[c] for c in args], nB)]]
                        for s, args in F.index_structures(nq)], dtype=np.int64)
    # independence of the representative choice, checked on every structure of F B
    for k, (s, args) in enumerate(F.index_structures(nB)):
        q = F.index(s, [class_of[x] for x in args], nq)
        if class_of[inst.beta.out[k]] != induced[q]:
            raise EngineInconsistency("induced algebra on the quotient is not well defined")
    labels = tuple("{" + ",".join(inst.B.elements[x] for x in c) + "}" for c in classes)
    return Quotient(classes, class_of, reps, induced, labels)


def compute_cograph(inst: EquationInstance) -> CoGraphResult:
    blocks = _beta_blocks(inst)
    pairs, trace = _gfp(lambda R: graph_step(inst, R, blocks),
                        np.ones((inst.nA, inst.nB), dtype=bool))
    dom_inf = pairs.any(axis=1)
    P = pairs.astype(np.int64)
    equiv = (P.T @ P) > 0
    return CoGraphResult(pairs, dom_inf, equiv, trace)


def _off_diagonal(R):
    off = R & ~np.eye(len(R), dtype=bool)
    if off.any():
        b, c = np.argwhere(off)[0]
        return int(b), int(c)
    return None


def check_criteria(inst: EquationInstance) -> Verdict:
    dom = compute_dom(inst)
    graph = compute_graph_lfp(inst)
    bisim = compute_bisim(inst)
    cograph = compute_cograph(inst)
    ev = {}

    missing = [int(a) for a in np.flatnonzero(~dom.member)]
    wellfounded = not missing
    ev["wellfounded"] = ({"certificate": {"rank": dict(dom.rank)}} if wellfounded
                         else {"counterexample": {"not_in_dom": missing}})

    bad_bisim = _off_diagonal(bisim.pairs)
    antifounded = bad_bisim is None
    ev["antifounded"] = ({"certificate": {"bisim_is_equality": True}} if antifounded
                         else {"counterexample": {"bisimilar_pair": bad_bisim}})

    not_inf = [int(a) for a in np.flatnonzero(~cograph.dom_inf)]
    bad_equiv = _off_diagonal(cograph.equiv)
    criterion_bisim = not not_inf and antifounded
    criterion_equiv = not not_inf and bad_equiv is None
    for name, ok, pair_key, pair in (
            ("criterion_bisim", criterion_bisim, "bisimilar_pair", bad_bisim),
            ("criterion_equiv", criterion_equiv, "equivalent_pair", bad_equiv)):
        if ok:
            ev[name] = {"certificate": {"cograph": cograph.pair_list()}}
        elif not_inf:
            ev[name] = {"counterexample": {"not_in_dom_inf": not_inf}}
        else:
            ev[name] = {"counterexample": {pair_key: pair}}
    return Verdict(wellfounded, antifounded, criterion_bisim, criterion_equiv, ev,
                   dom, graph, bisim, cograph)


def extract_quotient_solution(inst: EquationInstance, quotient: Quotient | None = None,
                              cograph: CoGraphResult | None = None) -> SolutionTable:
    """The unique solution from A|Dom-inf into the quotient of B."""
    quotient = quotient or compute_quotient(inst)
    cograph = cograph or compute_cograph(inst)
    f = {}
    for a in np.flatnonzero(cograph.dom_inf):
        hits = {int(quotient.class_of[b]) for b in np.flatnonzero(cograph.pairs[a])}
        if len(hits) != 1:
            raise EngineInconsistency(
                f"coinductive graph sends {inst.A.elements[a]!r} to several classes")
        f[int(a)] = hits.pop()
    sol = SolutionTable(cograph.dom_inf.copy(), f, quotient)
    check = verify_solution(inst, sol, "quotiented", quotient)
    if not check.ok:
        raise EngineInconsistency(f"quotiented square fails at {check.failing!r}")
    return sol


def check_coinduction_principle(inst: EquationInstance, R) -> CoinductionCheck:
    """``R`` is a boolean |B| x |B| matrix or a collection of name pairs."""
    if not (isinstance(R, np.ndarray) and R.dtype == bool):
        M = np.zeros((inst.nB, inst.nB), dtype=bool)
        for b, c in R:
            M[inst.B.index(b), inst.B.index(c)] = True
        R = M
    premise = bool((R <= bisim_step(inst, R)).all())
    return CoinductionCheck(premise, _off_diagonal(R) is None)


def verify_solution(inst: EquationInstance, f: SolutionTable, mode: str = "plain",
                    quotient: Quotient | None = None) -> VerifyResult:
    """Pointwise check of the square in ``mode`` (plain, restricted or quotiented)."""
    if mode not in ("plain", "restricted", "quotiented"):
        raise ValueError(f"unknown mode {mode!r}")
    F = inst.functor
    if len(f.defined_on) != inst.nA:
        raise DomainMismatch("solution table is over a different domain")
    if mode == "plain" and not f.total:
        raise DomainMismatch("plain mode needs a total function")
    if mode == "quotiented":
        quotient = quotient or f.quotient or compute_quotient(inst)
        size, table, lookup = len(quotient), quotient.induced_beta, quotient.class_of
    else:
        if f.quotient is not None:
            raise DomainMismatch("quotiented solution checked in plain/restricted mode")
        size, table, lookup = inst.nB, inst.beta.out, None
    for a in range(inst.nA):
        if not f.defined_on[a]:
            continue
        args = inst.alpha.args[a]
        if not all(f.defined_on[x] for x in args):
            raise DomainMismatch(f"alpha({inst.A.elements[a]}) leaves the solution's domain")
        vals = [f.value[x] for x in args]
        if any(not 0 <= v < size for v in vals + [f.value[a]]):
            raise DomainMismatch("solution value outside the codomain")
        got = int(table[F.index(inst.alpha.shape[a], vals, size)])
        if got != f.value[a]:
            return VerifyResult(False, inst.A.elements[a])
    return VerifyResult(True)
