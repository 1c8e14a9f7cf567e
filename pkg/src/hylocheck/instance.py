"""Equation instances f = beta . F f . alpha over finite carriers.

An instance holds the functor, the coalgebra table ``alpha : A -> F A`` and
the algebra table ``beta : F B -> B``.  Internally both tables are stored by
carrier position: ``alpha`` as one ``(shape, args)`` pair per element of A,
``beta`` as an integer array indexed by the enumeration of F B.

The file format is a single JSON object::

    {"functor": {"shapes": [{"name": "z", "arity": 0}, ...]},
     "domain": {"elements": ["a0", ...]},
     "codomain": {"elements": ["b0", ...]},
     "alpha": {"a0": {"shape": "z", "args": []}, ...},
     "beta": [{"shape": "z", "args": [], "out": "b0"}, ...]}
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .container import DEFAULT_MAX_ARITY, ContainerSpec, FStructure, Shape
from .errors import (ParamsTooLarge, ParseError, UnknownElement, UnknownStructure,
                     ValidationError)

DEFAULT_ELEMENT_CAP = 100_000


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Carrier:
    name: str
    elements: tuple
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        index = {}
        for i, e in enumerate(elements):
            if not isinstance(e, str) or not e:
                raise ValidationError("element names must be nonempty strings",
                                      f"{self.name}.elements[{i}]")
            if e in index:
                raise ValidationError(f"duplicate element {e!r}", f"{self.name}.elements[{i}]")
            index[e] = i
        object.__setattr__(self, "_index", index)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e):
        return e in self._index

    def index(self, e: str) -> int:
        try:
            return self._index[e]
        except KeyError:
            raise UnknownElement(e) from None


@dataclass(frozen=True, eq=False)
class CoalgebraTable:
    carrier: Carrier
    shape: np.ndarray   # shape index per element
    args: tuple         # tuple of argument-index tuples per element


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    carrier: Carrier
    out: np.ndarray     # output index per structure of F B, enumeration order


@dataclass(frozen=True, eq=False)
class EquationInstance:
    functor: ContainerSpec
    alpha: CoalgebraTable
    beta: AlgebraTable

    @property
    def A(self) -> Carrier:
        return self.alpha.carrier

    @property
    def B(self) -> Carrier:
        return self.beta.carrier

    @property
    def nA(self) -> int:
        return len(self.alpha.carrier)

    @property
    def nB(self) -> int:
        return len(self.beta.carrier)

    def summary(self) -> dict:
        return {"domain_size": self.nA, "codomain_size": self.nB,
                "functor_profile": list(self.functor.profile),
                "shapes": [s.name for s in self.functor.shapes],
                "fb_size": self.functor.count(self.nB)}


def make_instance(functor: ContainerSpec, domain: Sequence[str], codomain: Sequence[str],
                  alpha: Sequence, beta: Sequence[int]) -> EquationInstance:
    """Build an instance from index-level tables.

    ``alpha[i]`` is ``(shape_index, args)`` with positions into ``domain``;
    ``beta`` lists output positions for every structure of F B in
    enumeration order.
    """
    A = Carrier("domain", domain)
    B = Carrier("codomain", codomain)
    if len(B) == 0 and len(A) > 0:
        raise ValidationError("empty codomain with nonempty domain", "codomain")
    if len(alpha) != len(A):
        raise ValidationError("alpha not total", "alpha")
    shapes, args = [], []
    for i, (s, xs) in enumerate(alpha):
        xs = tuple(int(x) for x in xs)
        if not 0 <= s < len(functor.shapes) or len(xs) != functor.shapes[s].arity:
            raise ValidationError("malformed structure", f"alpha[{A.elements[i]}]")
        if any(not 0 <= x < len(A) for x in xs):
            raise ValidationError("unknown element", f"alpha[{A.elements[i]}]")
        shapes.append(s)
        args.append(xs)
    nfb = functor.count(len(B))
    beta = np.asarray(beta, dtype=np.int64)
    if beta.shape != (nfb,):
        raise ValidationError("beta not total", "beta")
    if nfb and (beta.min() < 0 or beta.max() >= len(B)):
        raise ValidationError("unknown element", "beta")
    return EquationInstance(functor, CoalgebraTable(A, _frozen(shapes), tuple(args)),
                            AlgebraTable(B, _frozen(beta)))


def apply_alpha(inst: EquationInstance, a: str) -> FStructure:
    i = inst.A.index(a)
    s = inst.alpha.shape[i]
    return FStructure(inst.functor.shapes[s].name,
                      tuple(inst.A.elements[x] for x in inst.alpha.args[i]))


def apply_beta(inst: EquationInstance, fs: FStructure) -> str:
    F = inst.functor
    try:
        s = F.shape_index(fs.shape)
        if len(fs.args) != F.shapes[s].arity:
            raise UnknownStructure(str(fs))
        args = [inst.B.index(x) for x in fs.args]
    except (ValidationError, UnknownElement):
        raise UnknownStructure(str(fs)) from None
    return inst.B.elements[inst.beta.out[F.index(s, args, inst.nB)]]


# ---------------------------------------------------------------- file format

def _expect(cond, message, location):
    if not cond:
        raise ParseError(message, location)


def _structure_fields(obj, location):
    _expect(isinstance(obj, dict), "expected an object", location)
    _expect(isinstance(obj.get("shape"), str), "missing string field 'shape'", location)
    _expect(isinstance(obj.get("args"), list) and all(isinstance(x, str) for x in obj["args"]),
            "field 'args' must be a list of strings", location)
    return obj["shape"], obj["args"]


def instance_from_document(doc: dict, max_arity: int = DEFAULT_MAX_ARITY) -> EquationInstance:
    _expect(isinstance(doc, dict), "instance must be a JSON object", "$")
    for key in ("functor", "domain", "codomain", "alpha", "beta"):
        _expect(key in doc, f"missing field {key!r}", "$")
    fun = doc["functor"]
    _expect(isinstance(fun, dict) and isinstance(fun.get("shapes"), list),
            "expected {'shapes': [...]}", "functor")
    shapes = []
    for i, s in enumerate(fun["shapes"]):
        loc = f"functor.shapes[{i}]"
        _expect(isinstance(s, dict) and isinstance(s.get("name"), str), "missing shape name", loc)
        ar = s.get("arity")
        _expect(isinstance(ar, int) and not isinstance(ar, bool), "arity must be an integer", loc)
        shapes.append(Shape(s["name"], ar))
    F = ContainerSpec(shapes, max_arity=max_arity)
    carriers = []
    for key in ("domain", "codomain"):
        c = doc[key]
        _expect(isinstance(c, dict) and isinstance(c.get("elements"), list),
                "expected {'elements': [...]}", key)
        _expect(all(isinstance(e, str) for e in c["elements"]), "elements must be strings", key)
        carriers.append(Carrier(key, c["elements"]))
    A, B = carriers

    alpha_doc = doc["alpha"]
    _expect(isinstance(alpha_doc, dict), "alpha must be an object", "alpha")
    for a in alpha_doc:
        if a not in A:
            raise ValidationError(f"unknown element {a!r}", f"alpha[{a}]")
    alpha = []
    for a in A:
        if a not in alpha_doc:
            raise ValidationError(f"alpha not total: no entry for {a!r}", "alpha")
        loc = f"alpha[{a}]"
        shape, args = _structure_fields(alpha_doc[a], loc)
        if shape not in {s.name for s in F.shapes}:
            raise ValidationError(f"unknown shape {shape!r}", loc)
        s = F.shape_index(shape)
        if len(args) != F.shapes[s].arity:
            raise ValidationError(f"arity mismatch for {shape}", loc)
        for x in args:
            if x not in A:
                raise ValidationError(f"unknown element {x!r}", loc)
        alpha.append((s, [A.index(x) for x in args]))

    beta_doc = doc["beta"]
    _expect(isinstance(beta_doc, list), "beta must be a list", "beta")
    nB = len(B)
    table = np.full(F.count(nB), -1, dtype=np.int64)
    for i, entry in enumerate(beta_doc):
        loc = f"beta[{i}]"
        shape, args = _structure_fields(entry, loc)
        _expect(isinstance(entry.get("out"), str), "missing string field 'out'", loc)
        if shape not in {s.name for s in F.shapes}:
            raise ValidationError(f"unknown shape {shape!r}", loc)
        s = F.shape_index(shape)
        if len(args) != F.shapes[s].arity:
            raise ValidationError(f"arity mismatch for {shape}", loc)
        for x in list(args) + [entry["out"]]:
            if x not in B:
                raise ValidationError(f"unknown element {x!r}", loc)
        k = F.index(s, [B.index(x) for x in args], nB)
        if table[k] >= 0:
            raise ValidationError(f"duplicate beta entry for {shape}({','.join(args)})", loc)
        table[k] = B.index(entry["out"])
    missing = np.flatnonzero(table < 0)
    if len(missing):
        s, args = F.structure(int(missing[0]), nB)
        name = f"{F.shapes[s].name}({','.join(B.elements[x] for x in args)})"
        raise ValidationError(f"beta not total: no entry for {name}", "beta")
    return make_instance(F, A.elements, B.elements, alpha, table)


def parse_instance(document: str, max_arity: int = DEFAULT_MAX_ARITY) -> EquationInstance:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return instance_from_document(doc, max_arity=max_arity)


def load_instance(path, max_arity: int = DEFAULT_MAX_ARITY) -> EquationInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), max_arity=max_arity)


def instance_to_document(inst: EquationInstance) -> dict:
    F, A, B = inst.functor, inst.A, inst.B
    alpha = {}
    for i, a in enumerate(A):
        alpha[a] = {"shape": F.shapes[inst.alpha.shape[i]].name,
                    "args": [A.elements[x] for x in inst.alpha.args[i]]}
    beta = []
    for k, (s, args) in enumerate(F.index_structures(len(B))):
        beta.append({"shape": F.shapes[s].name, "args": [B.elements[x] for x in args],
                     "out": B.elements[inst.beta.out[k]]})
    return {"functor": {"shapes": [{"name": s.name, "arity": s.arity} for s in F.shapes]},
            "domain": {"elements": list(A.elements)},
            "codomain": {"elements": list(B.elements)},
            "alpha": alpha, "beta": beta}


def emit_instance(inst: EquationInstance) -> str:
    """Serialise with one table entry per line."""
    doc = instance_to_document(inst)
    dump = json.dumps
    alpha = ",\n".join(f"  {dump(a)}: {dump(v)}" for a, v in doc["alpha"].items())
    beta = ",\n".join(f"  {dump(e)}" for e in doc["beta"])
    return ("{\n"
            f' "functor": {dump(doc["functor"])},\n'
            f' "domain": {dump(doc["domain"])},\n'
            f' "codomain": {dump(doc["codomain"])},\n'
            f' "alpha": {{\n{alpha}\n }},\n'
            f' "beta": [\n{beta}\n ]\n'
            "}\n")


def with_algebra(inst: EquationInstance, codomain: Sequence[str], beta) -> EquationInstance:
    """Same coalgebra, different algebra."""
    return make_instance(inst.functor, inst.A.elements, codomain,
                         list(zip(inst.alpha.shape, inst.alpha.args)), beta)


def with_coalgebra(inst: EquationInstance, domain: Sequence[str], alpha) -> EquationInstance:
    """Same algebra, different coalgebra."""
    return make_instance(inst.functor, domain, inst.B.elements, alpha, inst.beta.out)


# ---------------------------------------------------------------- generated examples

def list_name(xs) -> str:
    return "[" + ",".join(map(str, xs)) + "]"


def all_lists(k: int, n: int) -> list:
    """Lists over ``0..k-1`` of length at most ``n``: by length, then lexicographic."""
    return [xs for j in range(n + 1) for xs in itertools.product(range(k), repeat=j)]


def _check_size(size, cap):
    if size > cap:
        raise ParamsTooLarge(f"carrier would have {size} elements (cap {cap})")


def insert_sorted(x, ys):
    for i, y in enumerate(ys):
        if x <= y:
            return ys[:i] + (x,) + ys[i:]
    return ys + (x,)


def qsplit(xs):
    """``None`` for the empty list, else ``(pivot, left, right)``; ties go left."""
    if not xs:
        return None
    x, rest = xs[0], xs[1:]
    return x, tuple(y for y in rest if y <= x), tuple(y for y in rest if y > x)


def _sorting_instance(k, n, recursive_arity, alpha_of, beta_of, element_cap):
    size = sum(k ** j for j in range(n + 1))
    _check_size(size, element_cap)
    lists = all_lists(k, n)
    pos = {xs: i for i, xs in enumerate(lists)}
    names = [list_name(xs) for xs in lists]
    F = ContainerSpec([Shape("nil", 0)] + [Shape(f"{recursive_arity[0]}{x}", recursive_arity[1])
                                           for x in range(k)])
    alpha = []
    for xs in lists:
        s, subs = alpha_of(xs)
        alpha.append((s, [pos[ys] for ys in subs]))
    beta = []
    for s, args in F.index_structures(len(lists)):
        beta.append(pos[beta_of(s, [lists[i] for i in args])[:n]])
    return make_instance(F, names, names, alpha, beta)


def isort_instance(k: int, n: int, element_cap: int = DEFAULT_ELEMENT_CAP):
    """List recursion with insertion: F X = 1 + El x X."""
    def alpha_of(xs):
        return (0, []) if not xs else (1 + xs[0], [xs[1:]])

    def beta_of(s, args):
        return () if s == 0 else insert_sorted(s - 1, args[0])

    return _sorting_instance(k, n, ("cons", 1), alpha_of, beta_of, element_cap)


def qsort_instance(k: int, n: int, element_cap: int = DEFAULT_ELEMENT_CAP):
    """Quicksort: F X = 1 + El x X x X, alpha = qsplit, beta = concatenation."""
    def alpha_of(xs):
        split = qsplit(xs)
        if split is None:
            return 0, []
        x, left, right = split
        return 1 + x, [left, right]

    def beta_of(s, args):
        return () if s == 0 else args[0] + (s - 1,) + args[1]

    return _sorting_instance(k, n, ("node", 2), alpha_of, beta_of, element_cap)


def modsucc_instance(m: int, element_cap: int = DEFAULT_ELEMENT_CAP):
    """F X = X, B = Z/m with successor, A = {a} with alpha = id."""
    if m < 1:
        raise ValidationError("modulus must be positive")
    _check_size(m, element_cap)
    F = ContainerSpec([Shape("next", 1)])
    return make_instance(F, ["a"], [str(i) for i in range(m)], [(0, [0])],
                         [(i + 1) % m for i in range(m)])


def identity_instance(size_a: int, size_b: int, element_cap: int = DEFAULT_ELEMENT_CAP):
    """F X = X with alpha and beta both the identity; every f solves f = f."""
    _check_size(max(size_a, size_b), element_cap)
    F = ContainerSpec([Shape("next", 1)])
    return make_instance(F, [f"a{i}" for i in range(size_a)], [f"b{i}" for i in range(size_b)],
                         [(0, [i]) for i in range(size_a)], list(range(size_b)))


GENERATORS = {
    "isort": isort_instance,
    "qsort": qsort_instance,
    "modsucc": modsucc_instance,
    "identity": identity_instance,
}


def generate_example(kind: str, **params) -> EquationInstance:
    """Build one of the shipped example families.

    ``isort``/``qsort`` take ``k`` (alphabet size) and ``n`` (maximum
    length), ``modsucc`` takes ``m``, ``identity`` takes ``size_a`` and
    ``size_b``.  All accept ``element_cap``.
    """
    try:
        build = GENERATORS[kind]
    except KeyError:
        raise ValidationError(f"unknown example kind {kind!r}") from None
    return build(**params)
