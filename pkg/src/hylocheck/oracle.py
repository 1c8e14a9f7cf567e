"""Ground truth by exhaustion, and the cross-validation campaign.

Candidate functions ``f : A -> B`` are numbered in mixed radix over the
carrier order, the first element of A being the most significant digit, so
solution indices are stable across runs.  Checking is vectorised over
blocks of candidates.
"""
from __future__ import annotations

import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .coinductive import check_criteria
from .container import ContainerSpec, Shape
from .errors import BudgetExceeded
from .inductive import SolutionTable, check_dom_vs_Dom, check_functional
from .instance import (EquationInstance, instance_from_document, instance_to_document,
                       make_instance)

log = logging.getLogger(__name__)

DEFAULT_FUNCTION_BUDGET = 10 ** 7
DEFAULT_INSTANCE_BUDGET = 10 ** 5
_CHUNK = 1 << 16


@dataclass(frozen=True, eq=False)
class SolutionCount:
    count: int
    solutions: list
    truncated: bool


def _candidate_block(start, stop, nA, nB):
    idx = np.arange(start, stop, dtype=np.int64)
    cols = np.empty((len(idx), nA), dtype=np.int64)
    for j in range(nA - 1, -1, -1):
        idx, cols[:, j] = np.divmod(idx, nB)
    return cols


def _solves(functor, alpha_shape, alpha_args, betas, cands, nB):
    """Boolean ``(len(betas), len(cands))``: which candidates solve which algebra."""
    offsets = functor.offsets(nB)
    ok = np.ones((len(betas), len(cands)), dtype=bool)
    for a, (s, args) in enumerate(zip(alpha_shape, alpha_args)):
        pos = np.full(len(cands), offsets[s], dtype=np.int64)
        radix = np.zeros(len(cands), dtype=np.int64)
        for x in args:
            radix = radix * nB + cands[:, x]
        ok &= betas[:, pos + radix] == cands[:, a]
    return ok


def _check_budget(n, budget, what):
    if n > budget:
        raise BudgetExceeded(f"{what}: {n} exceeds budget {budget}", n, budget)


def enumerate_solutions(inst: EquationInstance, cap: int = 16,
                        budget: int = DEFAULT_FUNCTION_BUDGET) -> SolutionCount:
    """Count every total ``f`` with ``f = beta . F f . alpha`` by brute force."""
    nA, nB = inst.nA, inst.nB
    total = nB ** nA
    _check_budget(total, budget, "candidate functions")
    betas = np.asarray(inst.beta.out)[None, :]
    count, kept = 0, []
    for start in range(0, total, _CHUNK):
        cands = _candidate_block(start, min(total, start + _CHUNK), nA, nB)
        hit = _solves(inst.functor, inst.alpha.shape, inst.alpha.args, betas, cands, nB)[0]
        count += int(hit.sum())
        for row in cands[hit][:max(0, cap - len(kept))]:
            kept.append(SolutionTable(np.ones(nA, dtype=bool),
                                      {a: int(v) for a, v in enumerate(row)}))
    return SolutionCount(count, kept, count > cap)


def _count_for_algebras(functor, alpha_shape, alpha_args, nA, nB, betas, budget):
    total = nB ** nA
    _check_budget(total * len(betas), budget, "probe work")
    counts = np.zeros(len(betas), dtype=np.int64)
    for start in range(0, total, _CHUNK):
        cands = _candidate_block(start, min(total, start + _CHUNK), nA, nB)
        counts += _solves(functor, alpha_shape, alpha_args, betas, cands, nB).sum(axis=1)
    return counts


@dataclass(frozen=True)
class ProbeVerdict:
    holds: bool
    witness: object = None   # a table with count != 1, when the probe fails
    witness_count: int = None
    checked: int = 0

    def __bool__(self):
        return self.holds


def probe_recursive(inst: EquationInstance, max_codomain: int = 2,
                    budget: int = DEFAULT_FUNCTION_BUDGET) -> ProbeVerdict:
    """Every algebra over a codomain of size 1..max_codomain gives exactly one solution?

    Only the coalgebra side of ``inst`` is used.  The witness is the output
    table (over the enumeration of F B) of an offending algebra.
    """
    F, nA = inst.functor, inst.nA
    checked = 0
    for nB in range(1, max_codomain + 1):
        nfb = F.count(nB)
        n_alg = nB ** nfb
        _check_budget(n_alg * nB ** nA, budget, "probe work")
        betas = _candidate_block(0, n_alg, nfb, nB)
        counts = _count_for_algebras(F, inst.alpha.shape, inst.alpha.args, nA, nB, betas,
                                     budget)
        checked += n_alg
        bad = np.flatnonzero(counts != 1)
        if len(bad):
            k = int(bad[0])
            return ProbeVerdict(False, (nB, [int(x) for x in betas[k]]), int(counts[k]), checked)
    return ProbeVerdict(True, checked=checked)


def probe_corecursive(inst: EquationInstance, max_domain: int = 2,
                      budget: int = DEFAULT_FUNCTION_BUDGET) -> ProbeVerdict:
    """Every coalgebra with 1..max_domain elements gives exactly one solution?

    Only the algebra side of ``inst`` is used.  The witness is the coalgebra
    as a list of ``(shape, args)``.
    """
    F, nB = inst.functor, inst.nB
    betas = np.asarray(inst.beta.out)[None, :]
    checked = 0
    for nA in range(1, max_domain + 1):
        structs = list(F.index_structures(nA))
        _check_budget(len(structs) ** nA * nB ** nA, budget, "probe work")
        for alpha in itertools.product(structs, repeat=nA):
            shapes = [s for s, _ in alpha]
            args = [a for _, a in alpha]
            count = int(_count_for_algebras(F, shapes, args, nA, nB, betas, budget)[0])
            checked += 1
            if count != 1:
                return ProbeVerdict(False, [(s, list(a)) for s, a in alpha], count, checked)
    return ProbeVerdict(True, checked=checked)


# ---------------------------------------------------------------- instance families

def canonical_functor(profile) -> ContainerSpec:
    return ContainerSpec([Shape(f"c{i}", ar) for i, ar in enumerate(profile)])


def _carriers(size_a, size_b):
    return [f"a{i}" for i in range(size_a)], [f"b{i}" for i in range(size_b)]


def count_instances(profile, size_a, size_b) -> int:
    F = canonical_functor(profile)
    if size_b == 0 and size_a > 0:
        return 0
    return F.count(size_a) ** size_a * size_b ** F.count(size_b)


def exhaustive_instances(profile, size_a, size_b, budget: int = DEFAULT_INSTANCE_BUDGET):
    """Every instance over canonical carriers, coalgebra-major order."""
    n = count_instances(profile, size_a, size_b)
    _check_budget(n, budget, "instances")
    return _exhaustive(profile, size_a, size_b)


def _exhaustive(profile, size_a, size_b):
    F = canonical_functor(profile)
    A, B = _carriers(size_a, size_b)
    if size_b == 0 and size_a > 0:
        return
    fa = list(F.index_structures(size_a))
    for alpha in itertools.product(fa, repeat=size_a):
        for beta in itertools.product(range(size_b), repeat=F.count(size_b)):
            yield make_instance(F, A, B, alpha, beta)


def random_instance(profile, size_a, size_b, seed) -> EquationInstance:
    """Tables drawn uniformly per entry with numpy's PCG64 generator.

    ``seed`` is anything :func:`numpy.random.default_rng` accepts; campaigns
    pass ``(campaign_seed, index)``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    F = canonical_functor(profile)
    A, B = _carriers(size_a, size_b)
    fa = list(F.index_structures(size_a))
    alpha = [fa[int(rng.integers(len(fa)))] for _ in range(size_a)]
    beta = rng.integers(size_b, size=F.count(size_b)) if size_b else []
    return make_instance(F, A, B, alpha, beta)


# ---------------------------------------------------------------- campaign

PROPERTIES = (
    "graph_functional",
    "dom_equals_Dom",
    "lfp_graph_in_gfp_graph",
    "equiv_in_bisim",
    "bisim_symmetric",
    "wellfounded_implies_unique",
    "criterion_implies_unique",
    "antifounded_implies_at_most_one",
    "probe_recursive_equals_wellfounded",
)


@dataclass
class CampaignConfig:
    """What to sweep.

    ``exhaustive`` entries are ``[profile, size_a, size_b]``; ``random``
    entries are ``[profile, size_a, size_b, count]``.
    """
    exhaustive: list = field(default_factory=list)
    random: list = field(default_factory=list)
    seed: int = 0
    properties: list = field(default_factory=lambda: list(PROPERTIES))
    probe_max_codomain: int = 2
    function_budget: int = DEFAULT_FUNCTION_BUDGET
    instance_budget: int = DEFAULT_INSTANCE_BUDGET
    witness_cap: int = 5
    workers: int = 1

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown campaign config fields: {sorted(unknown)}")
        cfg = cls(**d)
        if not 0 <= int(cfg.seed) < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        return cfg

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_CAMPAIGN = {
    "exhaustive": [[[0, 1], a, b] for a in (0, 1, 2) for b in (1, 2)]
                  + [[[0, 2], a, b] for a in (0, 1, 2) for b in (1, 2)],
    "random": [[[0, 2], 3, 3, 10_000]],
    "seed": 20_240_601,
}


@dataclass
class CampaignReport:
    instances_run: int
    tallies: dict
    failures: list
    witnesses: dict
    data: dict
    seed: int

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"schema_version": 1, "seed": self.seed, "instances_run": self.instances_run,
                "ok": self.ok, "tallies": self.tallies, "failures": self.failures,
                "witnesses": self.witnesses, "data": self.data}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def check_instance(inst: EquationInstance, properties=PROPERTIES, probe_max_codomain=2,
                   function_budget=DEFAULT_FUNCTION_BUDGET) -> dict:
    """Evaluate every campaign property on one instance.

    Returns ``{"results": {prop: bool}, "bisim_not_in_equiv": bool,
    "unique_without_criteria": bool, "count": int}``.
    """
    v = check_criteria(inst)
    count = enumerate_solutions(inst, cap=0, budget=function_budget).count
    res = {}
    want = set(properties)
    if "graph_functional" in want:
        res["graph_functional"] = check_functional(v.graph) is None
    if "dom_equals_Dom" in want:
        res["dom_equals_Dom"] = check_dom_vs_Dom(inst, v.dom, v.graph) is None
    if "lfp_graph_in_gfp_graph" in want:
        res["lfp_graph_in_gfp_graph"] = bool((v.graph.pairs <= v.cograph.pairs).all())
    if "equiv_in_bisim" in want:
        res["equiv_in_bisim"] = bool((v.cograph.equiv <= v.bisim.pairs).all())
    if "bisim_symmetric" in want:
        res["bisim_symmetric"] = bool((v.bisim.pairs == v.bisim.pairs.T).all())
    if "wellfounded_implies_unique" in want:
        res["wellfounded_implies_unique"] = not v.wellfounded or count == 1
    if "criterion_implies_unique" in want:
        res["criterion_implies_unique"] = not (v.criterion_bisim or v.criterion_equiv) \
            or count == 1
    if "antifounded_implies_at_most_one" in want:
        res["antifounded_implies_at_most_one"] = not v.antifounded or count <= 1
    if "probe_recursive_equals_wellfounded" in want:
        probe = probe_recursive(inst, probe_max_codomain, function_budget)
        res["probe_recursive_equals_wellfounded"] = probe.holds == v.wellfounded
    return {"results": res,
            "bisim_not_in_equiv": not bool((v.bisim.pairs <= v.cograph.equiv).all()),
            "unique_without_criteria": count == 1 and not (v.criterion_bisim
                                                          or v.criterion_equiv),
            "count": count}


def _job_instances(cfg: CampaignConfig):
    """Yields ``(label, instance)`` in a fixed order."""
    for profile, size_a, size_b in cfg.exhaustive:
        for i, inst in enumerate(exhaustive_instances(profile, size_a, size_b,
                                                      cfg.instance_budget)):
            yield f"exhaustive{list(profile)}/{size_a}x{size_b}#{i}", inst
    for j, (profile, size_a, size_b, n) in enumerate(cfg.random):
        for i in range(n):
            yield (f"random{list(profile)}/{size_a}x{size_b}#{i}",
                   random_instance(profile, size_a, size_b, (int(cfg.seed), j, i)))


def _run_chunk(args):
    cfg_dict, jobs = args
    cfg = CampaignConfig.from_dict(cfg_dict)
    out = []
    for label, doc in jobs:
        inst = instance_from_document(doc)
        out.append((label, doc, check_instance(inst, cfg.properties, cfg.probe_max_codomain,
                                               cfg.function_budget)))
    return out


def run_campaign(config) -> CampaignReport:
    """Run every configured sweep and tally the properties.

    ``config`` is a :class:`CampaignConfig` or a dict of its fields.
    """
    cfg = config if isinstance(config, CampaignConfig) else CampaignConfig.from_dict(config)
    total = sum(count_instances(p, a, b) for p, a, b in cfg.exhaustive) \
        + sum(r[3] for r in cfg.random)
    _check_budget(total, cfg.instance_budget, "campaign instances")
    tallies = {p: {"pass": 0, "fail": 0} for p in cfg.properties}
    failures, bisim_wit, unique_wit = [], [], []
    data = {"bisim_not_in_equiv": 0, "unique_without_criteria": 0,
            "solution_counts": {}}
    n = 0

    def absorb(label, inst_doc, outcome):
        nonlocal n
        n += 1
        for prop, ok in outcome["results"].items():
            tallies[prop]["pass" if ok else "fail"] += 1
            if not ok:
                failures.append({"property": prop, "label": label, "instance": inst_doc})
        key = str(outcome["count"])
        data["solution_counts"][key] = data["solution_counts"].get(key, 0) + 1
        if outcome["bisim_not_in_equiv"]:
            data["bisim_not_in_equiv"] += 1
            if len(bisim_wit) < cfg.witness_cap:
                bisim_wit.append({"label": label, "instance": inst_doc})
        if outcome["unique_without_criteria"]:
            data["unique_without_criteria"] += 1
            if len(unique_wit) < cfg.witness_cap:
                unique_wit.append({"label": label, "instance": inst_doc})

    if cfg.workers <= 1:
        for label, inst in _job_instances(cfg):
            outcome = check_instance(inst, cfg.properties, cfg.probe_max_codomain,
                                     cfg.function_budget)
            absorb(label, instance_to_document(inst), outcome)
    else:
        jobs = [(label, instance_to_document(inst)) for label, inst in _job_instances(cfg)]
        size = max(1, len(jobs) // (cfg.workers * 8))
        chunks = [(cfg.to_dict(), jobs[i:i + size]) for i in range(0, len(jobs), size)]
        with ProcessPoolExecutor(cfg.workers) as pool:
            for chunk in pool.map(_run_chunk, chunks):
                for label, doc, outcome in chunk:
                    absorb(label, doc, outcome)

    failures.sort(key=lambda f: (f["property"], f["label"]))
    data["solution_counts"] = dict(sorted(data["solution_counts"].items(),
                                          key=lambda kv: int(kv[0])))
    log.info("campaign: %d instances, %d failures", n, len(failures))
    return CampaignReport(n, tallies, failures,
                          {"bisim_not_in_equiv": bisim_wit,
                           "unique_without_criteria": unique_wit},
                          data, int(cfg.seed))
