"""Multilinear maps stored as structure constants over named bases.

Vectors are sparse dicts ``{basis index: Fraction}``. A map of arity n sends a
tuple of basis indices to a sparse vector; entries must respect the declared
degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from ..kernels import add_scaled, apply_multilinear
from ..linalg import GradedSpace, LinearAlgebraError, LinearMap, fmt_rational, rational

Vector = dict


def parity_sign(k: int) -> int:
    return -1 if k % 2 else 1


def basis_vector(k: int) -> Vector:
    return {k: Fraction(1)}


def vec_add(*vecs: Mapping[int, Fraction]) -> Vector:
    acc: Vector = {}
    for v in vecs:
        add_scaled(acc, v, 1)
    return acc


def vec_scale(v: Mapping[int, Fraction], c) -> Vector:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vec_degree(v: Mapping[int, Fraction], space: GradedSpace) -> int | None:
    degs = {space.degrees[k] for k in v}
    if len(degs) > 1:
        raise LinearAlgebraError("vector is not homogeneous")
    return degs.pop() if degs else None


def linear_columns(f: LinearMap) -> list[Vector]:
    return f.columns()


@dataclass(frozen=True)
class MultilinearMap:
    source: GradedSpace
    target: GradedSpace
    arity: int
    degree: int
    table: Mapping[tuple[int, ...], Mapping[int, Fraction]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, col in self.table.items():
            key = tuple(key)
            if len(key) != self.arity:
                raise LinearAlgebraError(f"entry {key} does not have arity {self.arity}")
            col = {k: Fraction(x) for k, x in col.items() if x}
            if not col:
                continue
            want = sum(self.source.degrees[k] for k in key) + self.degree
            for t in col:
                if self.target.degrees[t] != want:
                    names = ",".join(self.source.basis[k] for k in key)
                    raise LinearAlgebraError(
                        f"entry ({names}) -> {self.target.basis[t]} violates degree {self.degree}")
            clean[key] = col
        object.__setattr__(self, "table", clean)

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, arity: int, degree: int) -> "MultilinearMap":
        return cls(source, target, arity, degree, {})

    @classmethod
    def from_linear(cls, f: LinearMap) -> "MultilinearMap":
        return cls(f.source, f.target, 1, f.degree,
                   {(c,): col for c, col in enumerate(f.columns()) if col})

    @classmethod
    def from_function(cls, source: GradedSpace, target: GradedSpace, arity: int, degree: int,
                      fn) -> "MultilinearMap":
        """Tabulate ``fn(basis index tuple) -> vector`` on degree-compatible tuples."""
        table = {}
        for key in product(range(source.dim), repeat=arity):
            want = sum(source.degrees[k] for k in key) + degree
            if not target.indices(want):
                continue
            col = fn(key)
            if col:
                table[key] = col
        return cls(source, target, arity, degree, table)

    def __call__(self, *vecs: Mapping[int, Fraction]) -> Vector:
        if len(vecs) != self.arity:
            raise LinearAlgebraError(f"expected {self.arity} inputs, got {len(vecs)}")
        return apply_multilinear(self.table, list(vecs))

    def on_basis(self, key: Sequence[int]) -> Vector:
        return dict(self.table.get(tuple(key), {}))

    def is_zero(self) -> bool:
        return not self.table

    def __eq__(self, other):
        return (isinstance(other, MultilinearMap)
                and (self.source, self.target, self.arity, self.degree)
                == (other.source, other.target, other.arity, other.degree)
                and dict(self.table) == dict(other.table))

    def __hash__(self):
        return hash((self.arity, self.degree, len(self.table)))

    def __add__(self, other: "MultilinearMap") -> "MultilinearMap":
        table = {k: dict(v) for k, v in self.table.items()}
        for k, v in other.table.items():
            add_scaled(table.setdefault(k, {}), v, 1)
        return MultilinearMap(self.source, self.target, self.arity, self.degree, table)

    def scale(self, c) -> "MultilinearMap":
        return MultilinearMap(self.source, self.target, self.arity, self.degree,
                              {k: vec_scale(v, c) for k, v in self.table.items()})

    def entries(self) -> list[dict]:
        """Deterministic list of nonzero structure constants, with basis names."""
        out = []
        for key in sorted(self.table):
            col = self.table[key]
            out.append({
                "inputs": [self.source.basis[k] for k in key],
                "output": {self.target.basis[t]: fmt_rational(col[t]) for t in sorted(col)},
            })
        return out

    def to_json(self) -> dict:
        return {"arity": self.arity, "degree": self.degree, "entries": self.entries()}

    @classmethod
    def from_entries(cls, source: GradedSpace, target: GradedSpace, arity: int, degree: int,
                     entries: Iterable[Mapping]) -> "MultilinearMap":
        table: dict[tuple[int, ...], dict[int, Fraction]] = {}
        for e in entries:
            key = tuple(source.index(n) for n in e["inputs"])
            col = table.setdefault(key, {})
            for t, v in e["output"].items():
                add_scaled(col, {target.index(t): rational(v)}, 1)
        return cls(source, target, arity, degree, table)


def degree_tuples(space: GradedSpace, n: int) -> Iterable[tuple[int, ...]]:
    return product(range(space.dim), repeat=n)
