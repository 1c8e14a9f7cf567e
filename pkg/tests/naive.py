"""Slow, literal re-statements of the analyses, used as test oracles.

Everything here works on element names through the public table lookups and
lifting helpers, and computes fixpoints by Knaster-Tarski (union of all
post-fixpoints, intersection of all pre-fixpoints) rather than by iteration.
Only usable on tiny carriers.
"""
import itertools

from hylocheck.container import enumerate_fstructures, lift_rel, map_functor
from hylocheck.instance import apply_alpha, apply_beta


def presentations(inst):
    """b -> list of structures bs with beta(bs) = b."""
    out = {b: [] for b in inst.B}
    for bs in enumerate_fstructures(inst.functor, inst.B.elements):
        out[apply_beta(inst, bs)].append(bs)
    return out


def all_relations(X, Y):
    pairs = [(x, y) for x in X for y in Y]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        yield frozenset(p for p, keep in zip(pairs, bits) if keep)


def rt_closure(R, X):
    C = set(R) | {(x, x) for x in X}
    changed = True
    while changed:
        changed = False
        for (x, y), (u, v) in itertools.product(list(C), list(C)):
            if y == u and (x, v) not in C:
                C.add((x, v))
                changed = True
    return C


def phi(inst, R, pres=None):
    """The bisimilarity operator, literally."""
    pres = pres or presentations(inst)
    C = rt_closure(R, inst.B.elements)
    out = set()
    for b in inst.B:
        for c in inst.B:
            if any(lift_rel(inst.functor, C, bs, cs) for bs in pres[b] for cs in pres[c]):
                out.add((b, c))
    return out


def psi(inst, R, pres=None):
    """The graph operator, literally."""
    pres = pres or presentations(inst)
    out = set()
    for a in inst.A:
        fa = apply_alpha(inst, a)
        for b in inst.B:
            if any(lift_rel(inst.functor, R, fa, bs) for bs in pres[b]):
                out.add((a, b))
    return out


def gfp_bisim(inst):
    pres = presentations(inst)
    out = set()
    for R in all_relations(inst.B.elements, inst.B.elements):
        if R <= phi(inst, R, pres):
            out |= R
    return out


def gfp_graph(inst):
    pres = presentations(inst)
    out = set()
    for R in all_relations(inst.A.elements, inst.B.elements):
        if R <= psi(inst, R, pres):
            out |= R
    return out


def lfp_graph(inst):
    pres = presentations(inst)
    out = {(a, b) for a in inst.A for b in inst.B}
    for R in all_relations(inst.A.elements, inst.B.elements):
        if psi(inst, R, pres) <= R:
            out &= R
    return out


def wellfounded_part(inst):
    """Elements from which no infinite chain of recursive arguments starts."""
    succ = {a: apply_alpha(inst, a).args for a in inst.A}
    on_cycle = set()
    for a in inst.A:
        # a lies on a cycle iff a is reachable from one of its own arguments
        seen, stack = set(), list(succ[a])
        while stack:
            x = stack.pop()
            if x == a:
                on_cycle.add(a)
                break
            if x not in seen:
                seen.add(x)
                stack.extend(succ[x])
    good = set()
    for a in inst.A:
        seen, stack, ok = set(), [a], True
        while stack:
            x = stack.pop()
            if x in on_cycle:
                ok = False
                break
            if x not in seen:
                seen.add(x)
                stack.extend(succ[x])
        if ok:
            good.add(a)
    return good


def count_solutions(inst):
    """Brute-force count over name-level maps."""
    A, B = inst.A.elements, inst.B.elements
    n = 0
    sols = []
    for values in itertools.product(B, repeat=len(A)):
        f = dict(zip(A, values))
        if all(apply_beta(inst, map_functor(inst.functor, f, apply_alpha(inst, a))) == f[a]
               for a in A):
            n += 1
            sols.append(f)
    return n, sols
