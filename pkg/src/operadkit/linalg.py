"""Exact rational linear algebra on finite-dimensional graded spaces.

Everything is over ``fractions.Fraction``. A :class:`GradedSpace` fixes a
global ordering of its basis (by degree, then by the listed order), and every
:class:`LinearMap` is a dense matrix in that ordering whose nonzero entries
respect the declared degree.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .kernels import rref

Rational = Fraction


class LinearAlgebraError(ValueError):
    pass


def rational(value) -> Fraction:
    """Parse ``3``, ``"-2/5"``, ``Fraction`` or ``int`` into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise LinearAlgebraError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LinearAlgebraError(f"bad rational literal {value!r}") from exc
    raise LinearAlgebraError(f"not a rational: {value!r}")


def fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- dense matrix helpers -----------------------------------------------------

def zeros(rows: int, cols: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity_matrix(n: int) -> list[list[Fraction]]:
    m = zeros(n, n)
    for k in range(n):
        m[k][k] = Fraction(1)
    return m


def matmul(a, b, cols: int | None = None) -> list[list[Fraction]]:
    if not a:
        return []
    inner = len(b)
    if cols is None:
        cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for r, row in enumerate(a):
        orow = out[r]
        for k in range(inner):
            x = row[k]
            if x:
                brow = b[k]
                for c in range(cols):
                    y = brow[c]
                    if y:
                        orow[c] += x * y
    return out


def transpose(a, nrows: int | None = None, ncols: int | None = None):
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(matrix: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : matrix v = 0}``; one vector per free column, with a 1 there."""
    reduced, pivots = rref(matrix, ncols) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def inverse(matrix: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    aug = [list(row) + e for row, e in zip(matrix, identity_matrix(n))]
    reduced, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise LinearAlgebraError("matrix is singular")
    return [row[n:] for row in reduced[:n]]


def solve(matrix: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], ncols: int):
    """One solution of ``matrix x = rhs`` (free variables set to 0), or None."""
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    reduced, pivots = rref(aug, ncols + 1) if aug else ([], [])
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x


def in_span(vectors: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    n = len(v)
    if not any(v):
        return True
    if not vectors:
        return False
    return rank(list(vectors) + [list(v)], n) == rank(vectors, n)


def same_span(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], n: int) -> bool:
    ra, rb = rank(a, n), rank(b, n)
    return ra == rb == rank(list(a) + list(b), n)


# -- graded spaces and maps ---------------------------------------------------

@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space with named basis elements.

    ``components`` is a tuple of ``(degree, names)`` pairs sorted by degree;
    zero components are dropped.
    """

    components: tuple[tuple[int, tuple[str, ...]], ...]
    basis: tuple[str, ...] = field(init=False, repr=False, compare=False)
    degrees: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        comps = tuple(sorted((int(d), tuple(ns)) for d, ns in self.components if ns))
        object.__setattr__(self, "components", comps)
        basis = tuple(n for _, ns in comps for n in ns)
        if len(set(basis)) != len(basis):
            raise LinearAlgebraError("basis names must be unique")
        degrees = tuple(d for d, ns in comps for _ in ns)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "_index", {n: k for k, n in enumerate(basis)})

    @classmethod
    def from_dict(cls, comps: Mapping[int, Iterable[str]]) -> GradedSpace:
        return cls(tuple((d, tuple(ns)) for d, ns in comps.items()))

    @classmethod
    def from_basis(cls, items: Iterable[tuple[str, int]]) -> GradedSpace:
        comps: dict[int, list[str]] = {}
        for name, deg in items:
            comps.setdefault(int(deg), []).append(name)
        return cls.from_dict(comps)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise LinearAlgebraError(f"unknown basis element {name!r}") from None

    def indices(self, degree: int) -> list[int]:
        return [k for k, d in enumerate(self.degrees) if d == degree]

    def degree_list(self) -> list[int]:
        return [d for d, _ in self.components]

    def component_dim(self, degree: int) -> int:
        return sum(1 for d in self.degrees if d == degree)


@dataclass(frozen=True)
class LinearMap:
    source: GradedSpace
    target: GradedSpace
    degree: int
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        if len(rows) != self.target.dim or any(len(r) != self.source.dim for r in rows):
            raise LinearAlgebraError("matrix shape does not match source/target dimensions")
        for r, row in enumerate(rows):
            for c, x in enumerate(row):
                if x and self.target.degrees[r] != self.source.degrees[c] + self.degree:
                    raise LinearAlgebraError(
                        f"entry ({self.target.basis[r]}, {self.source.basis[c]}) "
                        f"violates degree {self.degree}"
                    )
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, degree: int = 0) -> LinearMap:
        return cls(source, target, degree, zeros(target.dim, source.dim))

    @classmethod
    def identity(cls, space: GradedSpace) -> LinearMap:
        return cls(space, space, 0, identity_matrix(space.dim))

    @classmethod
    def from_images(cls, source, target, degree, images: Mapping[str, Mapping[str, object]]):
        """Build from ``{source_name: {target_name: coefficient}}``."""
        m = zeros(target.dim, source.dim)
        for s, col in images.items():
            c = source.index(s)
            for t, v in col.items():
                m[target.index(t)][c] = rational(v)
        return cls(source, target, degree, m)

    def __matmul__(self, other: LinearMap) -> LinearMap:
        if other.target != self.source:
            raise LinearAlgebraError("composition of incompatible maps")
        return LinearMap(other.source, self.target, self.degree + other.degree,
                         matmul(self.matrix, other.matrix, other.source.dim))

    def _check_same_shape(self, other: LinearMap):
        if (self.source, self.target, self.degree) != (other.source, other.target, other.degree):
            raise LinearAlgebraError("maps live in different Hom spaces")

    def __add__(self, other: LinearMap) -> LinearMap:
        self._check_same_shape(other)
        return LinearMap(self.source, self.target, self.degree,
                         [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __sub__(self, other: LinearMap) -> LinearMap:
        self._check_same_shape(other)
        return LinearMap(self.source, self.target, self.degree,
                         [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __neg__(self) -> LinearMap:
        return self.scale(-1)

    def scale(self, c) -> LinearMap:
        c = Fraction(c)
        return LinearMap(self.source, self.target, self.degree,
                         [[c * a for a in r] for r in self.matrix])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.matrix)

    def apply(self, vec: Mapping[int, Fraction]) -> dict[int, Fraction]:
        """Apply to a sparse vector ``{index: coefficient}``."""
        out: dict[int, Fraction] = {}
        for c, x in vec.items():
            for r in range(self.target.dim):
                y = self.matrix[r][c]
                if y:
                    out[r] = out.get(r, 0) + x * y
        return {k: v for k, v in out.items() if v}

    def column(self, c: int) -> dict[int, Fraction]:
        return {r: self.matrix[r][c] for r in range(self.target.dim) if self.matrix[r][c]}

    def columns(self) -> list[dict[int, Fraction]]:
        return [self.column(c) for c in range(self.source.dim)]

    def block(self, degree: int) -> list[list[Fraction]]:
        """Matrix of the component ``source_degree -> source_degree + self.degree``."""
        rows = self.target.indices(degree + self.degree)
        cols = self.source.indices(degree)
        return [[self.matrix[r][c] for c in cols] for r in rows]

    def blocks(self) -> dict[int, list[list[Fraction]]]:
        return {d: self.block(d) for d in self.source.degree_list()}


@dataclass(frozen=True)
class ChainComplex:
    """Graded space with a differential of degree -1 squaring to zero."""

    space: GradedSpace
    differential: LinearMap

    def __post_init__(self):
        d = self.differential
        if d.source != self.space or d.target != self.space:
            raise LinearAlgebraError("differential must be an endomorphism of the space")
        if d.degree != -1:
            raise LinearAlgebraError("differential must have degree -1")
        if not (d @ d).is_zero():
            raise LinearAlgebraError("differential does not square to zero")

    @classmethod
    def zero_differential(cls, space: GradedSpace) -> ChainComplex:
        return cls(space, LinearMap.zero(space, space, -1))

    @property
    def dim(self) -> int:
        return self.space.dim

    def to_json(self) -> dict:
        sp = self.space
        diff = {}
        for c, col in enumerate(self.differential.columns()):
            if col:
                diff[sp.basis[c]] = {sp.basis[r]: fmt_rational(v) for r, v in col.items()}
        return {"basis": [{"name": n, "degree": d} for n, d in zip(sp.basis, sp.degrees)],
                "differential": diff}

    @classmethod
    def from_json(cls, data: Mapping) -> ChainComplex:
        space = GradedSpace.from_basis((b["name"], b["degree"]) for b in data["basis"])
        d = LinearMap.from_images(space, space, -1, data.get("differential", {}))
        return cls(space, d)


# -- homology and the canonical retract --------------------------------------

@dataclass(frozen=True)
class Splitting:
    """``A_n = B_n (+) H_n (+) L_n`` with ``d(lifts[k]) = boundary basis of B_{n-1}``.

    All vectors are full-length coordinate vectors in the ambient space.
    """

    degree: int
    boundaries: tuple[tuple[Fraction, ...], ...]
    homology: tuple[tuple[Fraction, ...], ...]
    lifts: tuple[tuple[Fraction, ...], ...]
    homology_names: tuple[str, ...]


def homology_decomposition(c: ChainComplex) -> dict[int, Splitting]:
    sp, d = c.space, c.differential
    n_total = sp.dim
    lifts: dict[int, list[list[Fraction]]] = {}
    cycles: dict[int, list[list[Fraction]]] = {}
    for deg in sp.degree_list():
        cols = sp.indices(deg)
        rows = sp.indices(deg - 1)
        block = [[d.matrix[r][cc] for cc in cols] for r in rows]
        if block:
            _, pivots = rref(block, len(cols))
        else:
            pivots = []
        lift_vecs = []
        for pc in pivots:
            v = [Fraction(0)] * n_total
            v[cols[pc]] = Fraction(1)
            lift_vecs.append(v)
        lifts[deg] = lift_vecs
        ker = nullspace(block, len(cols)) if block else [
            [Fraction(int(k == j)) for k in range(len(cols))] for j in range(len(cols))]
        free = [cc for cc in range(len(cols)) if cc not in set(pivots)]
        full = []
        for v, f in zip(ker, free):
            w = [Fraction(0)] * n_total
            for k, x in zip(cols, v):
                w[k] = x
            full.append((w, sp.basis[cols[f]]))
        cycles[deg] = full

    out = {}
    for deg in sp.degree_list():
        bnd = [list(d.apply({k: x for k, x in enumerate(l) if x}).items())
               for l in lifts.get(deg + 1, [])]
        bnd_vecs = []
        for items in bnd:
            v = [Fraction(0)] * n_total
            for k, x in items:
                v[k] = x
            bnd_vecs.append(v)
        zs = [v for v, _ in cycles[deg]]
        # extend the boundary basis to a cycle basis, preferring low-index cycles
        mat = transpose(bnd_vecs + zs) if (bnd_vecs or zs) else []
        if mat:
            _, pivots = rref(mat, len(bnd_vecs) + len(zs))
        else:
            pivots = []
        nb = len(bnd_vecs)
        hom = [zs[p - nb] for p in pivots if p >= nb]
        # each cycle basis vector has a 1 at its own free coordinate; name the class by it
        names = [f"[{cycles[deg][p - nb][1]}]" for p in pivots if p >= nb]
        out[deg] = Splitting(deg, tuple(map(tuple, bnd_vecs)), tuple(map(tuple, hom)),
                             tuple(map(tuple, lifts[deg])), tuple(names))
        if len(bnd_vecs) + len(hom) + len(lifts[deg]) != sp.component_dim(deg):
            raise LinearAlgebraError(f"splitting in degree {deg} is not a direct sum")
    return out


@dataclass(frozen=True)
class DeformationRetract:
    """``i: H -> A``, ``p: A -> H``, ``h: A -> A`` with the usual identities."""

    big: ChainComplex
    small: ChainComplex
    i: LinearMap
    p: LinearMap
    h: LinearMap

    def failures(self) -> list[str]:
        """Names of the identities that do not hold (empty when all hold)."""
        A, H = self.big, self.small
        i, p, h = self.i, self.p, self.h
        dA, dH = A.differential, H.differential
        bad = []
        if (i.source, i.target, i.degree) != (H.space, A.space, 0):
            return ["i has the wrong signature"]
        if (p.source, p.target, p.degree) != (A.space, H.space, 0):
            return ["p has the wrong signature"]
        if (h.source, h.target, h.degree) != (A.space, A.space, 1):
            return ["h has the wrong signature"]
        if not (dA @ i - i @ dH).is_zero():
            bad.append("i is not a chain map")
        if not (dH @ p - p @ dA).is_zero():
            bad.append("p is not a chain map")
        if (p @ i) != LinearMap.identity(H.space):
            bad.append("p i != id")
        if (LinearMap.identity(A.space) - i @ p) != (dA @ h + h @ dA):
            bad.append("id - i p != d h + h d")
        if not (h @ i).is_zero():
            bad.append("h i != 0")
        if not (p @ h).is_zero():
            bad.append("p h != 0")
        if not (h @ h).is_zero():
            bad.append("h h != 0")
        return bad

    def is_valid(self) -> bool:
        return not self.failures()


def deformation_retract(c: ChainComplex) -> DeformationRetract:
    """Canonical retract of ``c`` onto its homology with zero differential."""
    split = homology_decomposition(c)
    sp = c.space
    n = sp.dim
    hspace = GradedSpace(tuple((deg, s.homology_names) for deg, s in split.items()))
    H = ChainComplex.zero_differential(hspace)

    i_m = zeros(n, hspace.dim)
    p_m = zeros(hspace.dim, n)
    h_m = zeros(n, n)
    inv_by_degree = {}
    for deg, s in split.items():
        cols = sp.indices(deg)
        basis = list(s.boundaries) + list(s.homology) + list(s.lifts)
        # change of basis restricted to A_deg: column j = j-th adapted vector
        P = [[basis[j][r] for j in range(len(basis))] for r in cols]
        inv_by_degree[deg] = (inverse(P) if P else [], cols, len(s.boundaries), len(s.homology))
        hcols = hspace.indices(deg)
        for k, v in enumerate(s.homology):
            for r in cols:
                i_m[r][hcols[k]] = v[r]
    for deg, (Pinv, cols, nb, nh) in inv_by_degree.items():
        hcols = hspace.indices(deg)
        for k in range(nh):
            row = Pinv[nb + k]
            for j, r in enumerate(cols):
                p_m[hcols[k]][r] = row[j]
        # h sends the boundary part of A_deg onto the lifts in A_{deg+1}
        up = split.get(deg + 1)
        if up is None or not up.lifts:
            continue
        for k, lift in enumerate(up.lifts):
            coeff_row = Pinv[k]
            for j, src in enumerate(cols):
                x = coeff_row[j]
                if x:
                    for r in range(n):
                        if lift[r]:
                            h_m[r][src] += x * lift[r]
    i = LinearMap(hspace, sp, 0, i_m)
    p = LinearMap(sp, hspace, 0, p_m)
    h = LinearMap(sp, sp, 1, h_m)
    r = DeformationRetract(c, H, i, p, h)
    bad = r.failures()
    if bad:  # pragma: no cover - guarded by the construction
        raise LinearAlgebraError("canonical retract failed: " + "; ".join(bad))
    return r


def load_complex(path) -> ChainComplex:
    with open(path, encoding="utf-8") as fh:
        return ChainComplex.from_json(json.load(fh))
