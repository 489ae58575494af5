"""L-infinity antisymmetrization and the C-infinity shuffle condition.

For graded elements, ``chi(sigma)`` is the sign of the permutation times the
Koszul sign of reordering ``x_1 ... x_n`` into ``x_sigma(1) ... x_sigma(n)``.
The antisymmetrized brackets are ``l_n(x) = sum_sigma chi(sigma) mu_n(x_sigma)``
and satisfy

    sum_{i+j=n+1} sum_{sigma in Sh(i, n-i)} (-1)^(i(j-1)) chi(sigma)
        l_j(l_i(x_sigma(1..i)), x_sigma(i+1..n)) = 0,

where ``Sh(i, n-i)`` are the unshuffles (increasing on both blocks).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product
from typing import Mapping, Sequence

from ..kernels import add_scaled
from ..linalg import ChainComplex, GradedSpace, fmt_rational
from .multilinear import MultilinearMap, Vector, basis_vector
from .structures import DEFAULT_MAX_ARITY, AInfinityStructure, RelationReport, check_max_arity


def koszul_chi(perm: Sequence[int], degrees: Sequence[int], signed: bool = True) -> int:
    """chi for moving items of the given degrees into the order ``perm`` (0-based).

    With ``signed=False`` only the Koszul part is returned.
    """
    sign = 1
    n = len(perm)
    for a in range(n):
        for b in range(a + 1, n):
            if perm[a] > perm[b]:
                if signed:
                    sign = -sign
                if degrees[perm[a]] % 2 and degrees[perm[b]] % 2:
                    sign = -sign
    return sign


def unshuffles(n: int, i: int):
    """Permutations (as tuples) increasing on the first i and the last n-i positions."""
    for first in combinations(range(n), i):
        rest = tuple(k for k in range(n) if k not in first)
        yield first + rest


def shuffles(p: int, q: int):
    """Ways to interleave ``0..p-1`` with ``p..p+q-1`` keeping each block in order."""
    n = p + q
    for pos in combinations(range(n), p):
        order = [0] * n
        a, b = 0, p
        for k in range(n):
            if k in pos:
                order[k] = a
                a += 1
            else:
                order[k] = b
                b += 1
        yield tuple(order)


@dataclass(frozen=True)
class LInfinityStructure:
    complex: ChainComplex
    brackets: Mapping[int, MultilinearMap]
    checked_arity: int | None = None

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    def bracket(self, n: int) -> MultilinearMap:
        if n == 1:
            return MultilinearMap.from_linear(self.complex.differential)
        return self.brackets.get(n) or MultilinearMap.zero(self.space, self.space, n, n - 2)

    def to_json(self) -> dict:
        return {"brackets": {str(n): self.brackets[n].to_json() for n in sorted(self.brackets)},
                "checked_arity": self.checked_arity}


def antisymmetrize(m: MultilinearMap) -> MultilinearMap:
    sp = m.source
    n = m.arity
    table: dict[tuple[int, ...], Vector] = {}
    perms = list(permutations(range(n)))
    for key in product(range(sp.dim), repeat=n):
        degs = [sp.degrees[k] for k in key]
        acc: Vector = {}
        for perm in perms:
            v = m.table.get(tuple(key[k] for k in perm))
            if v:
                add_scaled(acc, v, koszul_chi(perm, degs))
        if acc:
            table[key] = acc
    return MultilinearMap(sp, m.target, n, m.degree, table)


def antisymmetrize_linfinity(s: AInfinityStructure) -> LInfinityStructure:
    return LInfinityStructure(s.complex, {n: antisymmetrize(m) for n, m in s.ops.items()},
                              s.checked_arity)


def is_skew_symmetric(m: MultilinearMap) -> bool:
    sp = m.source
    n = m.arity
    for key in product(range(sp.dim), repeat=n):
        degs = [sp.degrees[k] for k in key]
        base = m.on_basis(key)
        for a in range(n - 1):
            perm = list(range(n))
            perm[a], perm[a + 1] = perm[a + 1], perm[a]
            other = m.on_basis(tuple(key[k] for k in perm))
            want = {t: koszul_chi(perm, degs) * c for t, c in base.items()}
            if other != want:
                return False
    return True


def linfinity_defect(s: LInfinityStructure, key: Sequence[int]) -> Vector:
    sp = s.space
    n = len(key)
    degs = [sp.degrees[k] for k in key]
    total: Vector = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        li, lj = s.bracket(i), s.bracket(j)
        if li.is_zero() or lj.is_zero():
            continue
        base = -1 if (i * (j - 1)) % 2 else 1
        for perm in unshuffles(n, i):
            inner = li.on_basis(tuple(key[k] for k in perm[:i]))
            if not inner:
                continue
            rest = [basis_vector(key[k]) for k in perm[i:]]
            add_scaled(total, lj(inner, *rest), base * koszul_chi(perm, degs))
    return total


def check_linfinity_relations(s: LInfinityStructure, max_arity: int = 4) -> RelationReport:
    check_max_arity(max_arity)
    sp = s.space
    for n in range(1, max_arity + 1):
        for key in product(range(sp.dim), repeat=n):
            defect = linfinity_defect(s, key)
            if defect:
                return RelationReport("l-infinity", max_arity, False, n,
                                      tuple(sp.basis[k] for k in key),
                                      {sp.basis[k]: fmt_rational(defect[k]) for k in sorted(defect)})
    return RelationReport("l-infinity", max_arity, True)


def shuffle_sum(m: MultilinearMap, key: Sequence[int], p: int) -> Vector:
    """``m`` applied to the signed sum of (p, n-p)-shuffles of the basis tensor ``key``."""
    sp = m.source
    n = len(key)
    degs = [sp.degrees[k] for k in key]
    acc: Vector = {}
    for order in shuffles(p, n - p):
        v = m.table.get(tuple(key[k] for k in order))
        if v:
            add_scaled(acc, v, koszul_chi(order, degs))
    return acc


def check_shuffle_vanishing(s: AInfinityStructure, max_arity: int = DEFAULT_MAX_ARITY) -> RelationReport:
    """Whether every mu_n (n >= 2) vanishes on all (p, q)-shuffle sums, p, q >= 1."""
    check_max_arity(max_arity)
    sp = s.space
    for n in range(2, max_arity + 1):
        m = s.ops.get(n)
        if m is None:
            continue
        for key in product(range(sp.dim), repeat=n):
            for p in range(1, n):
                v = shuffle_sum(m, key, p)
                if v:
                    return RelationReport(
                        f"shuffle-vanishing (p={p}, q={n - p})", max_arity, False, n,
                        tuple(sp.basis[k] for k in key),
                        {sp.basis[k]: fmt_rational(v[k]) for k in sorted(v)})
    return RelationReport("shuffle-vanishing", max_arity, True)
