"""Analysis reports: a JSON-ready dict plus a capped human rendering."""
from __future__ import annotations

import json

import numpy as np

from .coinductive import Verdict, compute_quotient, extract_quotient_solution
from .inductive import extract_partial_solution
from .instance import EquationInstance

SCHEMA_VERSION = 1
HUMAN_ROWS = 50


def _names(carrier, idxs):
    return [carrier.elements[i] for i in idxs]


def _pairs(X, Y, M):
    return [[X.elements[i], Y.elements[j]] for i, j in zip(*np.nonzero(M))]


def _named_evidence(inst, ev):
    A, B = inst.A, inst.B
    out = {}
    for key, entry in ev.items():
        ((kind, body),) = entry.items()
        named = {}
        for k, v in body.items():
            if k == "rank":
                named[k] = {A.elements[a]: r for a, r in sorted(v.items())}
            elif k in ("not_in_dom", "not_in_dom_inf"):
                named[k] = _names(A, v)
            elif k in ("bisimilar_pair", "equivalent_pair"):
                named[k] = _names(B, v)
            elif k == "cograph":
                named[k] = [[A.elements[a], B.elements[b]] for a, b in v]
            else:
                named[k] = v
        out[key] = {kind: named}
    return out


def build_report(inst: EquationInstance, verdict: Verdict, oracle=None,
                 timings=None) -> dict:
    """Everything ``check`` knows about an instance, with element names."""
    A, B = inst.A, inst.B
    dom, graph, bisim, cograph = verdict.dom, verdict.graph, verdict.bisim, verdict.cograph
    partial = extract_partial_solution(inst, dom, graph)
    quotient = compute_quotient(inst, bisim)
    qsol = extract_quotient_solution(inst, quotient, cograph)
    report = {
        "schema_version": SCHEMA_VERSION,
        "instance": inst.summary(),
        "verdicts": verdict.flags(),
        "evidence": _named_evidence(inst, verdict.evidence),
        "relations": {
            "dom": {"members": _names(A, np.flatnonzero(dom.member)),
                    "rank": {A.elements[a]: r for a, r in sorted(dom.rank.items())},
                    "trace": list(dom.trace)},
            "graph": {"pairs": _pairs(A, B, graph.pairs), "trace": list(graph.trace)},
            "bisim": {"pairs": _pairs(B, B, bisim.pairs),
                      "classes": [_names(B, c) for c in bisim.classes],
                      "trace": list(bisim.trace)},
            "cograph": {"pairs": _pairs(A, B, cograph.pairs),
                        "dom_inf": _names(A, np.flatnonzero(cograph.dom_inf)),
                        "equiv": _pairs(B, B, cograph.equiv),
                        "trace": list(cograph.trace)},
        },
        "solutions": {
            "inductive": {"defined_on": _names(A, np.flatnonzero(partial.defined_on)),
                          "values": partial.named(inst)},
            "quotiented": {"classes": [_names(B, c) for c in quotient.classes],
                           "defined_on": _names(A, np.flatnonzero(qsol.defined_on)),
                           "values": qsol.named(inst)},
        },
    }
    if oracle is not None:
        report["oracle"] = oracle
    if timings is not None:
        report["timings"] = timings
    return report


def oracle_section(inst: EquationInstance, result) -> dict:
    return {"count": result.count, "truncated": result.truncated,
            "solutions": [s.named(inst) for s in result.solutions]}


def to_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True)


def _cap(rows, limit=HUMAN_ROWS):
    rows = list(rows)
    shown = rows[:limit]
    if len(rows) > limit:
        shown.append(f"  ... ({len(rows) - limit} more)")
    return shown


def _fmt_pairs(pairs):
    return _cap(f"  ({x}, {y})" for x, y in pairs)


def render_text(report: dict) -> str:
    s = report["instance"]
    lines = [f"instance: |A|={s['domain_size']} |B|={s['codomain_size']} "
             f"|FB|={s['fb_size']} profile={s['functor_profile']}", ""]
    for k, v in report["verdicts"].items():
        ev = report["evidence"][k]
        tag = "certificate" if "certificate" in ev else "counterexample"
        detail = ""
        if tag == "counterexample":
            detail = "  " + json.dumps(ev[tag])
        lines.append(f"  {k:16} {str(v).lower():5}  [{tag}]{detail}")
    rel = report["relations"]
    lines.append("")
    lines.append(f"dom ({len(rel['dom']['members'])}):")
    lines += _cap(f"  {a}  rank {r}" for a, r in rel["dom"]["rank"].items())
    for title, pairs in (("inductive graph", rel["graph"]["pairs"]),
                         ("bisimilarity", rel["bisim"]["pairs"]),
                         ("coinductive graph", rel["cograph"]["pairs"]),
                         ("equiv", rel["cograph"]["equiv"])):
        lines.append(f"{title} ({len(pairs)} pairs):")
        lines += _fmt_pairs(pairs)
    lines.append(f"bisimilarity classes ({len(rel['bisim']['classes'])}):")
    lines += _cap("  {" + ",".join(c) + "}" for c in rel["bisim"]["classes"])
    lines.append(f"Dom_inf ({len(rel['cograph']['dom_inf'])}):")
    lines += _cap("  " + a for a in rel["cograph"]["dom_inf"])
    if "oracle" in report:
        lines.append(f"solutions: {report['oracle']['count']}")
    return "\n".join(lines)


def render_solution(values: dict, defined_on_total: bool, header: str) -> str:
    lines = [header]
    lines += _cap(f"  {a} -> {b}" for a, b in values.items())
    if not defined_on_total:
        lines.append("  (restricted: undefined elsewhere)")
    return "\n".join(lines)
