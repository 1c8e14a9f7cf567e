"""Productive definitions over streams, evaluated by fuel-bounded rewriting.

A :class:`CodataSystem` gives destructors (``hd``, ``tl``), operations with
one rewrite rule per destructor (``tl(smerge(x,xs0,xs1)) = ...``) and the
defining equation of the function ``f`` already compiled to rules
``f(pattern) = rhs``.  A pattern is either a variable, matching any
argument, or a generator application ``g(vars)``.  Two generators are built
in whenever the signature has exactly one value and one codata destructor:
``arith(start, step)`` and ``cycle([x, ...])``.

Evaluation is a small stack machine: pending destructors are pushed while
descending into the observed term, and popped once it reaches an operation
or generator at its root.  Every rule application costs one unit of fuel.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParseError, StuckTerm, ValidationError

VALUE, CODATA, LIST = "value", "codata", "list"
DEFAULT_FUEL = 10_000
BUILTINS = {"arith": (VALUE, VALUE), "cycle": (LIST,)}


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Lit:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class ListLit:
    values: tuple

    def __str__(self):
        return "[" + ",".join(map(str, self.values)) + "]"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    kind: str      # "dtor", "op", "gen" or "call"
    name: str
    args: tuple = ()

    def __str__(self):
        return f"{self.name}({','.join(map(str, self.args))})"


Term = Lit | ListLit | Var | App

_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_][A-Za-z0-9_']*)|(.))")


def _tokens(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, ident, sym = m.groups()
        if sym is not None and sym not in "()[],=":
            raise ParseError(f"unexpected character {sym!r}", f"column {m.start(3) + 1}")
        out.append((num, ident, sym, m.start()))
        pos = m.end()
    return out


class _RawParser:
    """Recursive descent over ``name(args) | name | int | [ints]``."""

    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, None, len(self.text))

    def expect(self, sym):
        tok = self.peek()
        if tok[2] != sym:
            raise ParseError(f"expected {sym!r}", f"column {tok[3] + 1} in {self.text!r}")
        self.i += 1

    def term(self):
        num, ident, sym, col = self.peek()
        if num is not None:
            self.i += 1
            return int(num)
        if sym == "[":
            self.i += 1
            vals = []
            if self.peek()[2] != "]":
                while True:
                    n = self.peek()[0]
                    if n is None:
                        raise ParseError("list literals hold integers only", f"column {col + 1}")
                    self.i += 1
                    vals.append(int(n))
                    if self.peek()[2] != ",":
                        break
                    self.i += 1
            self.expect("]")
            return ("[]", tuple(vals))
        if ident is None:
            raise ParseError("expected a term", f"column {col + 1} in {self.text!r}")
        self.i += 1
        if self.peek()[2] != "(":
            return (ident, None)
        self.i += 1
        args = []
        if self.peek()[2] != ")":
            while True:
                args.append(self.term())
                if self.peek()[2] != ",":
                    break
                self.i += 1
        self.expect(")")
        return (ident, tuple(args))

    def done(self):
        if self.i != len(self.toks):
            raise ParseError("trailing input", f"column {self.peek()[3] + 1} in {self.text!r}")


# ---------------------------------------------------------------- systems

@dataclass(frozen=True)
class Rule:
    lhs: App
    params: tuple          # variable names bound by the lhs pattern
    rhs: Term

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


@dataclass(frozen=True, eq=False)
class CodataSystem:
    destructors: tuple     # ((name, sort), ...)
    operations: tuple      # ((name, arg sorts), ...)
    generators: tuple      # user generators ((name, arg sorts), ...)
    rules: dict            # (destructor, operation or generator) -> Rule
    equation: dict         # generator name, or None for a variable pattern -> Rule
    function: str = "f"
    _symbols: dict = field(default=None, repr=False)

    def __post_init__(self):
        syms = {}
        for name, sort in self.destructors:
            syms[name] = ("dtor", (CODATA,), sort)
        for name, sorts in self.operations:
            syms[name] = ("op", tuple(sorts), CODATA)
        for name, sorts in self.generators:
            syms[name] = ("gen", tuple(sorts), CODATA)
        if self.stream_signature():
            for name, sorts in BUILTINS.items():
                syms.setdefault(name, ("gen", sorts, CODATA))
        syms[self.function] = ("call", (CODATA,), CODATA)
        object.__setattr__(self, "_symbols", syms)

    def stream_signature(self):
        """``(head, tail)`` destructor names, or ``None`` if not a stream signature."""
        vals = [d for d, s in self.destructors if s == VALUE]
        cods = [d for d, s in self.destructors if s == CODATA]
        if len(vals) == 1 and len(cods) == 1:
            return vals[0], cods[0]
        return None

    def all_rules(self):
        return list(self.rules.values()) + list(self.equation.values())

    def term(self, text: str) -> Term:
        """Parse a closed term against this system's symbols."""
        p = _RawParser(text)
        raw = p.term()
        p.done()
        t = _classify(raw, self._symbols, set(), text)
        _sort_of(t, self._symbols, {}, text)
        return t

    def to_document(self) -> dict:
        return {"destructors": [{"name": n, "sort": s} for n, s in self.destructors],
                "operations": [{"name": n, "args": list(s)} for n, s in self.operations],
                "generators": [{"name": n, "args": list(s)} for n, s in self.generators],
                "function": self.function,
                "rules": [str(r) for r in self.rules.values()],
                "equation": [str(r) for r in self.equation.values()]}


def _classify(raw, syms, bound, where):
    if isinstance(raw, int):
        return Lit(raw)
    name, args = raw
    if name == "[]":
        return ListLit(args)
    if name in syms:
        kind, sorts, _ = syms[name]
        args = args or ()
        if len(args) != len(sorts):
            raise ValidationError(f"{name} expects {len(sorts)} arguments", where)
        return App(kind, name, tuple(_classify(a, syms, bound, where) for a in args))
    if args is not None:
        raise ValidationError(f"unknown symbol {name!r}", where)
    if name not in bound:
        raise ValidationError(f"unbound variable {name!r}", where)
    return Var(name)


def _sort_of(t, syms, env, where):
    if isinstance(t, Lit):
        return VALUE
    if isinstance(t, ListLit):
        return LIST
    if isinstance(t, Var):
        return env[t.name]
    _, sorts, result = syms[t.name]
    for a, want in zip(t.args, sorts):
        got = _sort_of(a, syms, env, where)
        if got != want:
            raise ValidationError(f"ill-sorted argument {a} of {t.name}: {got}, expected {want}",
                                  where)
    return result


def _pattern_vars(args, where):
    names = []
    for a in args:
        if not (isinstance(a, tuple) and a[1] is None):
            raise ValidationError("patterns take distinct variables only", where)
        names.append(a[0])
    if len(set(names)) != len(names):
        raise ValidationError("repeated pattern variable", where)
    return tuple(names)


def _parse_rule_text(text):
    lhs_text, sep, rhs_text = text.partition("=")
    if not sep:
        raise ParseError("rule needs '='", text)
    lp, rp = _RawParser(lhs_text), _RawParser(rhs_text)
    lhs, rhs = lp.term(), rp.term()
    lp.done()
    rp.done()
    return lhs, rhs


def _sorts_field(entry, location):
    sorts = entry.get("args", [])
    if not isinstance(sorts, list) or any(s not in (VALUE, CODATA, LIST) for s in sorts):
        raise ParseError("'args' must list sorts (value, codata, list)", location)
    return tuple(sorts)


def codata_from_document(doc: dict) -> CodataSystem:
    if not isinstance(doc, dict):
        raise ParseError("codata system must be a JSON object", "$")
    for key in ("destructors", "operations", "rules", "equation"):
        if not isinstance(doc.get(key), list):
            raise ParseError(f"missing list field {key!r}", "$")
    function = doc.get("function", "f")
    destructors, operations, generators, seen = [], [], [], set()

    def declare(name, location):
        if not isinstance(name, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", name):
            raise ParseError("bad symbol name", location)
        if name in seen or name == function:
            raise ValidationError(f"duplicate symbol {name!r}", location)
        seen.add(name)

    for i, d in enumerate(doc["destructors"]):
        loc = f"destructors[{i}]"
        if not isinstance(d, dict) or d.get("sort") not in (VALUE, CODATA):
            raise ParseError("destructor needs a name and sort value|codata", loc)
        declare(d.get("name"), loc)
        destructors.append((d["name"], d["sort"]))
    for key, out in (("operations", operations), ("generators", generators)):
        for i, o in enumerate(doc.get(key, [])):
            loc = f"{key}[{i}]"
            if not isinstance(o, dict):
                raise ParseError("expected an object", loc)
            declare(o.get("name"), loc)
            out.append((o["name"], _sorts_field(o, loc)))
    if not destructors:
        raise ValidationError("at least one destructor is required", "destructors")

    proto = CodataSystem(tuple(destructors), tuple(operations), tuple(generators), {}, {},
                         function)
    syms = proto._symbols
    dsort = dict(destructors)
    rules, equation = {}, {}
    for i, text in enumerate(doc["rules"]):
        loc = f"rules[{i}]"
        if not isinstance(text, str):
            raise ParseError("rules are strings", loc)
        (dname, dargs), rhs_raw = _parse_rule_text(text)
        if dname not in dsort or not dargs or len(dargs) != 1 or not isinstance(dargs[0], tuple):
            raise ValidationError("rule lhs must be destructor(operation(vars))", loc)
        oname, oargs = dargs[0]
        if oname not in syms or syms[oname][0] not in ("op", "gen") or oname in BUILTINS:
            raise ValidationError(f"{oname!r} is not a declared operation or generator", loc)
        params = _pattern_vars(oargs or (), loc)
        sorts = syms[oname][1]
        if len(params) != len(sorts):
            raise ValidationError(f"{oname} expects {len(sorts)} arguments", loc)
        if (dname, oname) in rules:
            raise ValidationError(f"duplicate rule for {dname}({oname}(...))", loc)
        rhs = _classify(rhs_raw, syms, set(params), loc)
        got = _sort_of(rhs, syms, dict(zip(params, sorts)), loc)
        if got != dsort[dname]:
            raise ValidationError(f"ill-sorted rhs: {got}, expected {dsort[dname]}", loc)
        lhs = App("dtor", dname, (App(syms[oname][0], oname, tuple(Var(p) for p in params)),))
        rules[(dname, oname)] = Rule(lhs, params, rhs)
    for oname, _ in operations:
        for dname, _ in destructors:
            if (dname, oname) not in rules:
                raise ValidationError(f"missing rule for {dname}({oname}(...))", "rules")

    for i, text in enumerate(doc["equation"]):
        loc = f"equation[{i}]"
        if not isinstance(text, str):
            raise ParseError("equation rules are strings", loc)
        (fname, fargs), rhs_raw = _parse_rule_text(text)
        if fname != function or not fargs or len(fargs) != 1 or not isinstance(fargs[0], tuple):
            raise ValidationError(f"equation lhs must be {function}(pattern)", loc)
        gname, gargs = fargs[0]
        if gargs is None and gname not in syms:
            key, params, sorts = None, (gname,), (CODATA,)
            pattern = Var(gname)
        else:
            if gname not in syms or syms[gname][0] != "gen" or gname in BUILTINS:
                raise ValidationError(f"{gname!r} is not a declared generator", loc)
            params = _pattern_vars(gargs or (), loc)
            sorts = syms[gname][1]
            if len(params) != len(sorts):
                raise ValidationError(f"{gname} expects {len(sorts)} arguments", loc)
            key = gname
            pattern = App("gen", gname, tuple(Var(p) for p in params))
        if key in equation or (equation and (key is None or None in equation)):
            raise ValidationError("overlapping equation rules", loc)
        rhs = _classify(rhs_raw, syms, set(params), loc)
        if _sort_of(rhs, syms, dict(zip(params, sorts)), loc) != CODATA:
            raise ValidationError("equation rhs must be codata", loc)
        equation[key] = Rule(App("call", function, (pattern,)), params, rhs)

    return CodataSystem(tuple(destructors), tuple(operations), tuple(generators), rules,
                        equation, function)


def parse_codata(document: str) -> CodataSystem:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return codata_from_document(doc)


def load_codata(path) -> CodataSystem:
    with open(path, encoding="utf-8") as fh:
        return parse_codata(fh.read())


def emit_codata(sys: CodataSystem) -> str:
    return json.dumps(sys.to_document(), indent=1)


# ---------------------------------------------------------------- evaluation

def substitute(t: Term, env: dict) -> Term:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, App):
        return App(t.kind, t.name, tuple(substitute(a, env) for a in t.args))
    return t


class _OutOfFuel(Exception):
    pass


class _Machine:
    def __init__(self, sys: CodataSystem, fuel: int):
        self.sys = sys
        self.fuel = fuel
        self.steps = 0
        self.current = None
        self.stream = sys.stream_signature()

    def tick(self):
        if self.steps >= self.fuel:
            raise _OutOfFuel
        self.steps += 1

    def run(self, term: Term):
        """Evaluate to an integer or to a codata term with an operation/generator root."""
        stack = []
        eq = self.sys.equation
        while True:
            self.current = term
            if isinstance(term, Lit):
                if stack:
                    raise StuckTerm(f"value {term} observed by {stack[-1]}")
                return term.value
            if isinstance(term, (Var, ListLit)):
                raise StuckTerm(f"cannot evaluate {term}")
            if term.kind == "dtor":
                stack.append(term.name)
                term = term.args[0]
                continue
            if term.kind == "call":
                rule = eq.get(None)
                if rule is not None:
                    self.tick()
                    term = substitute(rule.rhs, {rule.params[0]: term.args[0]})
                else:
                    stack.append(None)
                    term = term.args[0]
                continue
            if not stack:
                return term
            frame = stack.pop()
            if frame is None:
                rule = eq.get(term.name) if term.kind == "gen" else None
                if rule is None:
                    raise StuckTerm(f"no equation rule for {self.sys.function}({term})")
                self.tick()
                term = substitute(rule.rhs, dict(zip(rule.params, term.args)))
            else:
                term = self.observe(frame, term)

    def observe(self, dtor, term):
        rule = self.sys.rules.get((dtor, term.name))
        if rule is not None:
            self.tick()
            return substitute(rule.rhs, dict(zip(rule.params, term.args)))
        if term.name in BUILTINS and self.stream and term.kind == "gen":
            self.tick()
            head = dtor == self.stream[0]
            if term.name == "arith":
                start, step = (Lit(self._int(a)) for a in term.args)
                return start if head else App("gen", "arith", (Lit(start.value + step.value),
                                                               step))
            values = term.args[0].values
            if not values:
                raise StuckTerm("cycle([]) has no observations")
            return Lit(values[0]) if head else App("gen", "cycle",
                                                   (ListLit(values[1:] + values[:1]),))
        raise StuckTerm(f"no rule for {dtor}({term})")

    def _int(self, t):
        if isinstance(t, Lit):
            return t.value
        saved = self.current
        out = self.run(t)
        self.current = saved
        if not isinstance(out, int):
            raise StuckTerm(f"{t} is not a value")
        return out


@dataclass(frozen=True)
class FuelExhausted:
    observation: str     # the observation that was being computed
    pending: str         # term under evaluation when fuel ran out
    index: int = None    # position within a prefix, when relevant

    def __str__(self):
        where = f" at index {self.index}" if self.index is not None else ""
        return f"FuelExhausted{where}: {self.observation} (pending {self.pending})"


@dataclass(frozen=True)
class UnfoldResult:
    value: object        # int, a codata Term, or FuelExhausted
    steps_used: int

    @property
    def exhausted(self) -> bool:
        return isinstance(self.value, FuelExhausted)


def _as_term(sys, t):
    return sys.term(t) if isinstance(t, str) else t


def observe_path(t: Term, path: Sequence[str]) -> Term:
    for d in path:
        t = App("dtor", d, (t,))
    return t


def unfold(sys: CodataSystem, t, path: Sequence[str], fuel: int = DEFAULT_FUEL) -> UnfoldResult:
    """Observe ``t`` along ``path`` (first destructor applied first)."""
    t = _as_term(sys, t)
    for d in path:
        if d not in dict(sys.destructors):
            raise ValidationError(f"unknown destructor {d!r}")
    obs = observe_path(t, path)
    m = _Machine(sys, fuel)
    try:
        return UnfoldResult(m.run(obs), m.steps)
    except _OutOfFuel:
        pending = str(m.current)
        if len(pending) > 200:
            pending = pending[:197] + "..."
        return UnfoldResult(FuelExhausted(str(obs), pending), m.steps)


def _stream(sys):
    sig = sys.stream_signature()
    if sig is None:
        raise ValidationError("needs exactly one value and one codata destructor")
    return sig


def prefix(sys: CodataSystem, t, n: int, fuel: int = DEFAULT_FUEL):
    """First ``n`` elements, or :class:`FuelExhausted` carrying the failing index.

    ``fuel`` is per observation.
    """
    hd, tl = _stream(sys)
    t = _as_term(sys, t)
    out = []
    for i in range(n):
        r = unfold(sys, t, [tl] * i + [hd], fuel)
        if r.exhausted:
            return FuelExhausted(r.value.observation, r.value.pending, i)
        out.append(r.value)
    return out


@dataclass(frozen=True)
class ProductivityCertificate:
    ok: bool
    max_steps_per_observation: int
    depth: int
    failed_at: int = None
    report: str = None


def productivity_probe(sys: CodataSystem, t, depth: int,
                       fuel: int = DEFAULT_FUEL) -> ProductivityCertificate:
    """Observe the first ``depth`` elements within ``fuel`` steps each."""
    hd, tl = _stream(sys)
    t = _as_term(sys, t)
    worst = 0
    for i in range(depth):
        try:
            r = unfold(sys, t, [tl] * i + [hd], fuel)
        except StuckTerm as exc:
            return ProductivityCertificate(False, worst, depth, i, f"stuck: {exc}")
        worst = max(worst, r.steps_used)
        if r.exhausted:
            return ProductivityCertificate(False, worst, depth, i,
                                           f"{r.value} after {r.steps_used} steps")
    return ProductivityCertificate(True, worst, depth)


@dataclass(frozen=True)
class GuardVerdict:
    guarded: bool
    offending: str = None


def _destructor_spine_ok(t):
    while isinstance(t, App) and t.kind == "dtor":
        t = t.args[0]
    return isinstance(t, Var)


def _guard_violation(t):
    if not isinstance(t, App):
        return None
    if t.kind == "dtor" and not _destructor_spine_ok(t.args[0]):
        return t
    for a in t.args:
        bad = _guard_violation(a)
        if bad is not None:
            return bad
    return None


def check_guardedness(sys: CodataSystem) -> GuardVerdict:
    """Destructors only observe variables (possibly through further destructors),
    and no equation rule unfolds directly into another call of the function."""
    for rule in sys.all_rules():
        bad = _guard_violation(rule.rhs)
        if bad is not None:
            return GuardVerdict(False, f"{rule}  [destructor applied to {bad.args[0]}]")
    for rule in sys.equation.values():
        if isinstance(rule.rhs, App) and rule.rhs.kind == "call":
            return GuardVerdict(False, f"{rule}  [unguarded recursive call]")
    return GuardVerdict(True)


# ---------------------------------------------------------------- smerge machines

SMERGE_RULES = ["hd(smerge(x,xs0,xs1)) = x",
                "tl(smerge(x,xs0,xs1)) = smerge(hd(xs0),xs1,tl(xs0))"]


def smerge_machine(table) -> CodataSystem:
    """Argument coalgebra ``alpha(q_i) = (x, q_j, q_k)`` for ``table[i] = (x, j, k)``,
    against the algebra ``smerge`` on streams."""
    states = [f"q{i}" for i in range(len(table))]
    doc = {"destructors": [{"name": "hd", "sort": VALUE}, {"name": "tl", "sort": CODATA}],
           "operations": [{"name": "smerge", "args": [VALUE, CODATA, CODATA]}],
           "generators": [{"name": q, "args": []} for q in states],
           "rules": SMERGE_RULES,
           "equation": [f"f({states[i]}) = smerge({x},f({states[j]}),f({states[k]}))"
                        for i, (x, j, k) in enumerate(table)]}
    return codata_from_document(doc)


def random_smerge_machine(size: int, seed, el_range=(0, 9)):
    """A random ``size``-state machine; returns ``(system, table)``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    lo, hi = el_range
    table = [(int(rng.integers(lo, hi + 1)), int(rng.integers(size)), int(rng.integers(size)))
             for _ in range(size)]
    return smerge_machine(table), table
