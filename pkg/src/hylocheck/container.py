"""Polynomial functors F X = sum_s X^ar(s), given as a finite list of shapes.

Elements of F X are :class:`FStructure` values.  Over a carrier with ``n``
elements the structures are numbered in a fixed order (shape order, then
arguments lexicographically by carrier position, first argument most
significant); :meth:`ContainerSpec.index` and
:meth:`ContainerSpec.structure` convert between the two views.  The engines
work on these indices, the public helpers below on element names.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping, Sequence

import numpy as np

from .errors import UnknownElement, ValidationError

DEFAULT_MAX_ARITY = 4


@dataclass(frozen=True)
class Shape:
    name: str
    arity: int


@dataclass(frozen=True)
class FStructure:
    shape: str
    args: tuple = ()

    def __str__(self):
        return f"{self.shape}({','.join(map(str, self.args))})"


class ContainerSpec:
    """An ordered, validated list of shapes."""

    def __init__(self, shapes: Iterable, max_arity: int = DEFAULT_MAX_ARITY):
        parsed = []
        for i, s in enumerate(shapes):
            if not isinstance(s, Shape):
                s = Shape(*s)
            if not isinstance(s.name, str) or not s.name:
                raise ValidationError("shape name must be a nonempty string", f"shapes[{i}]")
            if not isinstance(s.arity, int) or isinstance(s.arity, bool) or s.arity < 0:
                raise ValidationError("arity must be a natural number", f"shapes[{i}]")
            if s.arity > max_arity:
                raise ValidationError(
                    f"arity cap exceeded ({s.arity} > {max_arity})", f"shapes[{i}]")
            parsed.append(s)
        if not parsed:
            raise ValidationError("a functor needs at least one shape", "shapes")
        names = [s.name for s in parsed]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ValidationError(f"duplicate shape name {dup!r}", "shapes")
        self.shapes = tuple(parsed)
        self.max_arity = max_arity
        self._by_name = {s.name: i for i, s in enumerate(parsed)}

    def __repr__(self):
        body = ", ".join(f"{s.name}/{s.arity}" for s in self.shapes)
        return f"ContainerSpec({{{body}}})"

    def __eq__(self, other):
        return isinstance(other, ContainerSpec) and self.shapes == other.shapes

    def __hash__(self):
        return hash(self.shapes)

    @property
    def profile(self) -> tuple:
        return tuple(s.arity for s in self.shapes)

    def shape_index(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValidationError(f"unknown shape {name!r}") from None

    def arity(self, shape) -> int:
        if isinstance(shape, str):
            shape = self.shape_index(shape)
        return self.shapes[shape].arity

    def count(self, n: int) -> int:
        """Number of structures over a carrier of size ``n``."""
        return sum(n ** s.arity for s in self.shapes)

    def offsets(self, n: int) -> tuple:
        out, acc = [], 0
        for s in self.shapes:
            out.append(acc)
            acc += n ** s.arity
        return tuple(out)

    def index(self, shape: int, args: Sequence[int], n: int) -> int:
        """Position of ``shape(args)`` in the enumeration over a size-``n`` carrier."""
        pos = 0
        for x in args:
            pos = pos * n + x
        return self.offsets(n)[shape] + pos

    def structure(self, idx: int, n: int) -> tuple:
        """Inverse of :meth:`index`: returns ``(shape, args)``."""
        for s, (shape, off) in enumerate(zip(self.shapes, self.offsets(n))):
            size = n ** shape.arity
            if idx < off + size:
                rest = idx - off
                args = []
                for _ in range(shape.arity):
                    rest, d = divmod(rest, n)
                    args.append(d)
                return s, tuple(reversed(args))
        raise IndexError(idx)

    def index_structures(self, n: int):
        """All ``(shape, args)`` pairs over ``range(n)`` in enumeration order."""
        for s, shape in enumerate(self.shapes):
            for args in itertools.product(range(n), repeat=shape.arity):
                yield s, args

    def check(self, fs: FStructure, carrier: Sequence | None = None):
        s = self.shape_index(fs.shape)
        if len(fs.args) != self.shapes[s].arity:
            raise ValidationError(
                f"{fs.shape} expects {self.shapes[s].arity} arguments, got {len(fs.args)}")
        if carrier is not None:
            members = set(carrier)
            for x in fs.args:
                if x not in members:
                    raise UnknownElement(x)
        return s


def _membership(P) -> Callable[[Hashable], bool]:
    if callable(P):
        return P
    return P.__contains__


def map_functor(F: ContainerSpec, h: Mapping, fs: FStructure) -> FStructure:
    """Apply ``h`` at every argument position of ``fs``."""
    F.check(fs)
    try:
        return FStructure(fs.shape, tuple(h[x] for x in fs.args))
    except KeyError as exc:
        raise UnknownElement(exc.args[0]) from None


def lift_pred(F: ContainerSpec, P, fs: FStructure) -> bool:
    """Predicate lifting: ``P`` holds at every position (vacuous at arity 0).

    ``P`` is a container supporting ``in`` or a one-argument callable.
    """
    F.check(fs)
    holds = _membership(P)
    return all(holds(x) for x in fs.args)


def lift_rel(F: ContainerSpec, R, fs: FStructure, gs: FStructure) -> bool:
    """Relation lifting: same shape and ``R`` relates the arguments pointwise.

    ``R`` is a container of pairs or a two-argument callable.
    """
    F.check(fs)
    F.check(gs)
    if fs.shape != gs.shape:
        return False
    related = R if callable(R) else (lambda x, y: (x, y) in R)
    return all(related(x, y) for x, y in zip(fs.args, gs.args))


def enumerate_fstructures(F: ContainerSpec, X: Sequence) -> list:
    X = list(X)
    return [FStructure(F.shapes[s].name, tuple(X[i] for i in args))
            for s, args in F.index_structures(len(X))]


def structures_array(F: ContainerSpec, n: int):
    """Per shape, the arrays needed to vectorise over F X.

    Returns a list of ``(offset, arity)``; the structures of one shape
    occupy ``offset : offset + n**arity`` and reshape to ``(n,)*arity``.
    """
    return list(zip(F.offsets(n), F.profile))


def lift_rows(rows: Sequence[np.ndarray]) -> np.ndarray:
    """Outer conjunction of boolean vectors: the lifted relation image as a tensor.

    For arguments ``a_1..a_k`` with related sets ``rows[i]`` the result
    marks, in the ``(n,)*k`` block of one shape, exactly the structures
    whose i-th argument lies in ``rows[i]``.
    """
    if not rows:
        return np.ones((), dtype=bool)
    out = rows[0]
    for r in rows[1:]:
        out = np.logical_and.outer(out, r)
    return out
