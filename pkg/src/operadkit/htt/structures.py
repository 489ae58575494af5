"""dg algebras, A-infinity algebras and A-infinity morphisms, with relation checkers.

Sign conventions (homological grading, |mu_n| = n - 2, |f_n| = n - 1):

* Stasheff relations: sum over p+q+r = n of
  (-1)^(p + q r) mu_{p+1+r}(1^p (x) mu_q (x) 1^r) = 0, with mu_1 = d.
* Morphism relations: sum (-1)^(p + q r) f_{p+1+r}(1^p (x) m_q (x) 1^r)
  = sum (-1)^w m'_k(f_{i_1} (x) ... (x) f_{i_k}),
  w = sum_{j=1..k} (k - j)(i_j - 1).
* Tensor products of maps act by the Koszul rule
  (f (x) g)(x (x) y) = (-1)^(|g||x|) f(x) (x) g(y).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from ..kernels import add_scaled
from ..linalg import ChainComplex, GradedSpace, LinearAlgebraError, LinearMap, fmt_rational, rational
from .multilinear import MultilinearMap, Vector, basis_vector, parity_sign

MAX_ARITY_CAP = 8
DEFAULT_MAX_ARITY = 5

STASHEFF_CONVENTION = "sum_{p+q+r=n} (-1)^(p+q*r) mu_{p+1+r}(1^p (x) mu_q (x) 1^r) = 0, mu_1 = d"


class StructureError(ValueError):
    pass


def compositions(n: int, k: int):
    """Ordered k-tuples of positive integers summing to n."""
    if k == 1:
        if n >= 1:
            yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def morphism_sign(parts: Sequence[int]) -> int:
    """``(-1)^w`` with ``w = sum_j (k - j)(i_j - 1)`` for ``parts = (i_1, ..., i_k)``."""
    k = len(parts)
    w = sum((k - j) * (i - 1) for j, i in enumerate(parts, start=1))
    return -1 if w % 2 else 1


def check_max_arity(n: int) -> int:
    if n < 1:
        raise StructureError("max arity must be at least 1")
    if n > MAX_ARITY_CAP:
        raise StructureError(f"max arity is capped at {MAX_ARITY_CAP}")
    return n


# -- dg algebras --------------------------------------------------------------

@dataclass(frozen=True)
class DgAlgebra:
    complex: ChainComplex
    product: MultilinearMap
    validate: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        sp = self.complex.space
        m = self.product
        if (m.source, m.target, m.arity, m.degree) != (sp, sp, 2, 0):
            raise StructureError("product must be a degree 0 bilinear map on the complex")
        if self.validate:
            bad = self.failures()
            if bad:
                raise StructureError("; ".join(bad))

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    def mul(self, a: Vector, b: Vector) -> Vector:
        return self.product(a, b)

    def d(self, a: Vector) -> Vector:
        return self.complex.differential.apply(a)

    def failures(self) -> list[str]:
        sp = self.space
        n = sp.dim
        bad = []
        for x, y in product(range(n), repeat=2):
            ex, ey = basis_vector(x), basis_vector(y)
            lhs = self.d(self.mul(ex, ey))
            rhs = self.mul(self.d(ex), ey)
            add_scaled(rhs, self.mul(ex, self.d(ey)), parity_sign(sp.degrees[x]))
            if lhs != rhs:
                bad.append(f"d is not a derivation on ({sp.basis[x]}, {sp.basis[y]})")
                break
        for x, y, z in product(range(n), repeat=3):
            ex, ey, ez = basis_vector(x), basis_vector(y), basis_vector(z)
            if self.mul(self.mul(ex, ey), ez) != self.mul(ex, self.mul(ey, ez)):
                bad.append(f"product is not associative on ({sp.basis[x]}, {sp.basis[y]}, {sp.basis[z]})")
                break
        return bad

    def as_ainfinity(self) -> "AInfinityStructure":
        return AInfinityStructure(self.complex, {2: self.product}, checked_arity=None)

    def to_json(self) -> dict:
        data = self.complex.to_json()
        prod: dict[str, dict[str, dict[str, str]]] = {}
        sp = self.space
        for (a, b), col in sorted(self.product.table.items()):
            prod.setdefault(sp.basis[a], {})[sp.basis[b]] = {
                sp.basis[t]: fmt_rational(col[t]) for t in sorted(col)}
        data["product"] = prod
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "DgAlgebra":
        c = ChainComplex.from_json(data)
        sp = c.space
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for a, row in data.get("product", {}).items():
            for b, out in row.items():
                table[(sp.index(a), sp.index(b))] = {sp.index(t): rational(v) for t, v in out.items()}
        return cls(c, MultilinearMap(sp, sp, 2, 0, table))


def load_dga(path) -> DgAlgebra:
    with open(path, encoding="utf-8") as fh:
        return DgAlgebra.from_json(json.load(fh))


# -- A-infinity algebras ------------------------------------------------------

@dataclass(frozen=True)
class AInfinityStructure:
    complex: ChainComplex
    ops: Mapping[int, MultilinearMap]
    checked_arity: int | None = None

    def __post_init__(self):
        sp = self.complex.space
        ops = {}
        for n, m in self.ops.items():
            if n < 2:
                raise StructureError("operations start at arity 2 (mu_1 is the differential)")
            if (m.source, m.target, m.arity, m.degree) != (sp, sp, n, n - 2):
                raise StructureError(f"mu_{n} must be an arity {n}, degree {n - 2} map on the space")
            if not m.is_zero():
                ops[n] = m
        object.__setattr__(self, "ops", ops)

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    def op(self, n: int) -> MultilinearMap:
        if n == 1:
            return MultilinearMap.from_linear(self.complex.differential)
        return self.ops.get(n) or MultilinearMap.zero(self.space, self.space, n, n - 2)

    def with_checked(self, n: int) -> "AInfinityStructure":
        return AInfinityStructure(self.complex, self.ops, n)

    def to_json(self) -> dict:
        return {
            "basis": [{"name": n, "degree": d} for n, d in zip(self.space.basis, self.space.degrees)],
            "differential": self.complex.to_json()["differential"],
            "operations": {str(n): self.ops[n].to_json() for n in sorted(self.ops)},
            "checked_arity": self.checked_arity,
            "sign_convention": STASHEFF_CONVENTION,
        }


@dataclass(frozen=True)
class RelationReport:
    name: str
    max_arity: int
    passed: bool
    failed_arity: int | None = None
    witness: tuple[str, ...] | None = None
    defect: Mapping[str, str] | None = None

    def summary(self) -> str:
        if self.passed:
            return f"{self.name}: pass through arity {self.max_arity}"
        args = ", ".join(self.witness or ())
        return f"{self.name}: fails in arity {self.failed_arity} on ({args})"

    def to_json(self) -> dict:
        return {"relation": self.name, "max_arity": self.max_arity, "passed": self.passed,
                "failed_arity": self.failed_arity,
                "witness": list(self.witness) if self.witness else None,
                "defect": dict(self.defect) if self.defect else None}


def _koszul_insert(space: GradedSpace, key: Sequence[int], p: int, inner_degree: int) -> int:
    """Sign of moving a map of the given degree past the first p inputs."""
    if inner_degree % 2 == 0:
        return 1
    return -1 if sum(space.degrees[k] for k in key[:p]) % 2 else 1


def _apply_with_inner(outer: MultilinearMap, key: Sequence[int], p: int, q: int,
                      inner: Vector) -> Vector:
    vecs = [basis_vector(k) for k in key[:p]] + [inner] + [basis_vector(k) for k in key[p + q:]]
    return outer(*vecs)


def stasheff_defect(s: AInfinityStructure, key: Sequence[int]) -> Vector:
    n = len(key)
    sp = s.space
    total: Vector = {}
    for q in range(1, n + 1):
        mq = s.op(q)
        if mq.is_zero():
            continue
        for p in range(0, n - q + 1):
            r = n - p - q
            outer = s.op(p + 1 + r)
            if outer.is_zero():
                continue
            inner = mq.on_basis(key[p:p + q])
            if not inner:
                continue
            sign = (-1) ** ((p + q * r) % 2) * _koszul_insert(sp, key, p, q - 2)
            add_scaled(total, _apply_with_inner(outer, key, p, q, inner), sign)
    return total


def _named(space: GradedSpace, v: Vector) -> dict[str, str]:
    return {space.basis[k]: fmt_rational(v[k]) for k in sorted(v)}


def check_ainfinity_relations(s: AInfinityStructure, max_arity: int = DEFAULT_MAX_ARITY) -> RelationReport:
    """Evaluate the Stasheff relations on every basis tuple of arity <= max_arity."""
    check_max_arity(max_arity)
    sp = s.space
    for n in range(1, max_arity + 1):
        for key in product(range(sp.dim), repeat=n):
            defect = stasheff_defect(s, key)
            if defect:
                return RelationReport("stasheff", max_arity, False, n,
                                      tuple(sp.basis[k] for k in key), _named(sp, defect))
    return RelationReport("stasheff", max_arity, True)


# -- A-infinity morphisms -----------------------------------------------------

@dataclass(frozen=True)
class AInfinityMorphism:
    source: AInfinityStructure
    target: AInfinityStructure
    components: Mapping[int, MultilinearMap]
    checked_arity: int | None = None

    def __post_init__(self):
        A, B = self.source.space, self.target.space
        comps = {}
        for n, f in self.components.items():
            if n < 1:
                raise StructureError("morphism components start at arity 1")
            if (f.source, f.target, f.arity, f.degree) != (A, B, n, n - 1):
                raise StructureError(f"f_{n} must be an arity {n}, degree {n - 1} map")
            if not f.is_zero():
                comps[n] = f
        object.__setattr__(self, "components", comps)

    def component(self, n: int) -> MultilinearMap:
        return self.components.get(n) or MultilinearMap.zero(
            self.source.space, self.target.space, n, n - 1)

    @classmethod
    def identity(cls, s: AInfinityStructure) -> "AInfinityMorphism":
        return cls(s, s, {1: MultilinearMap.from_linear(LinearMap.identity(s.space))})

    @classmethod
    def strict(cls, source: AInfinityStructure, target: AInfinityStructure,
               f: LinearMap) -> "AInfinityMorphism":
        return cls(source, target, {1: MultilinearMap.from_linear(f)})

    def to_json(self) -> dict:
        return {"components": {str(n): self.components[n].to_json() for n in sorted(self.components)},
                "checked_arity": self.checked_arity}


def apply_tensor(maps: Sequence[MultilinearMap], parts: Sequence[int], space: GradedSpace,
                 key: Sequence[int]) -> list[tuple[int, list[Vector]]]:
    """Apply f_{i_1} (x) ... (x) f_{i_k} to basis tensor ``key`` with Koszul signs.

    Returns ``[(sign, [vectors])]`` (a single entry, or none when a factor is 0).
    """
    sign = 1
    outs = []
    pos = 0
    seen_degree = 0
    for f, i in zip(maps, parts):
        block = key[pos:pos + i]
        if f.degree % 2 and seen_degree % 2:
            sign = -sign
        v = f.on_basis(block)
        if not v:
            return []
        outs.append(v)
        seen_degree += sum(space.degrees[k] for k in block)
        pos += i
    return [(sign, outs)]


def morphism_defect(f: AInfinityMorphism, key: Sequence[int]) -> Vector:
    A, B = f.source, f.target
    sp = A.space
    n = len(key)
    total: Vector = {}
    for q in range(1, n + 1):
        mq = A.op(q)
        if mq.is_zero():
            continue
        for p in range(0, n - q + 1):
            r = n - p - q
            outer = f.component(p + 1 + r)
            if outer.is_zero():
                continue
            inner = mq.on_basis(key[p:p + q])
            if not inner:
                continue
            sign = (-1) ** ((p + q * r) % 2) * _koszul_insert(sp, key, p, q - 2)
            add_scaled(total, _apply_with_inner(outer, key, p, q, inner), sign)
    for k in range(1, n + 1):
        mk = B.op(k)
        if mk.is_zero():
            continue
        for parts in compositions(n, k):
            fs = [f.component(i) for i in parts]
            if any(x.is_zero() for x in fs):
                continue
            for sign, vecs in apply_tensor(fs, parts, sp, key):
                add_scaled(total, mk(*vecs), -sign * morphism_sign(parts))
    return total


def check_morphism_relations(f: AInfinityMorphism, max_arity: int = DEFAULT_MAX_ARITY) -> RelationReport:
    check_max_arity(max_arity)
    sp = f.source.space
    for n in range(1, max_arity + 1):
        for key in product(range(sp.dim), repeat=n):
            defect = morphism_defect(f, key)
            if defect:
                return RelationReport("morphism", max_arity, False, n,
                                      tuple(sp.basis[k] for k in key), _named(f.target.space, defect))
    return RelationReport("morphism", max_arity, True)


def compose_morphisms(g: AInfinityMorphism, f: AInfinityMorphism,
                      max_arity: int = DEFAULT_MAX_ARITY) -> AInfinityMorphism:
    """``(g f)_n = sum (-1)^w g_k(f_{i_1} (x) ... (x) f_{i_k})`` through max_arity."""
    if f.target.space != g.source.space or f.target.complex != g.source.complex:
        raise StructureError("cannot compose: target of f differs from source of g")
    check_max_arity(max_arity)
    A, C = f.source.space, g.target.space
    comps = {}
    for n in range(1, max_arity + 1):
        table: dict[tuple[int, ...], Vector] = {}
        for key in product(range(A.dim), repeat=n):
            acc: Vector = {}
            for k in range(1, n + 1):
                gk = g.component(k)
                if gk.is_zero():
                    continue
                for parts in compositions(n, k):
                    fs = [f.component(i) for i in parts]
                    if any(x.is_zero() for x in fs):
                        continue
                    for sign, vecs in apply_tensor(fs, parts, A, key):
                        add_scaled(acc, gk(*vecs), sign * morphism_sign(parts))
            if acc:
                table[key] = acc
        comps[n] = MultilinearMap(A, C, n, n - 1, table)
    return AInfinityMorphism(f.source, g.target, comps, max_arity)


def morphism_equal(f: AInfinityMorphism, g: AInfinityMorphism, max_arity: int) -> bool:
    return all(f.component(n) == g.component(n) for n in range(1, max_arity + 1))


def induced_on_homology(f1: MultilinearMap, src: ChainComplex, tgt: ChainComplex) -> bool:
    """Whether a chain map induces an isomorphism in homology (rank comparison)."""
    from ..linalg import homology_decomposition, rank

    hs = homology_decomposition(src)
    ht = homology_decomposition(tgt)
    degs = set(hs) | set(ht)
    for deg in degs:
        a = hs.get(deg)
        b = ht.get(deg)
        na = len(a.homology) if a else 0
        nb = len(b.homology) if b else 0
        if na != nb:
            return False
        if na == 0:
            continue
        # images of homology representatives together with target boundaries must
        # span a space of dimension dim B + dim H
        imgs = []
        for v in a.homology:
            w = f1({k: x for k, x in enumerate(v) if x})
            row = [w.get(k, Fraction(0)) for k in range(tgt.dim)]
            imgs.append(row)
        bnd = [list(v) for v in b.boundaries]
        if rank(bnd + imgs, tgt.dim) != len(bnd) + na:
            return False
    return True


__all__ = [
    "AInfinityMorphism", "AInfinityStructure", "DgAlgebra", "RelationReport", "StructureError",
    "check_ainfinity_relations", "check_morphism_relations", "compose_morphisms", "compositions",
    "load_dga", "morphism_equal", "morphism_sign", "induced_on_homology", "LinearAlgebraError",
]
