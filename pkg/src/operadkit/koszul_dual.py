"""Koszul dual presentations of binary quadratic operads.

Dual generators keep their names; in shuffle mode a symmetric generator
becomes skew and vice versa. The weight-2 arity-3 monomials are paired
diagonally: in nonsymmetric mode ``<a o_1 b, a* o_1 b*> = +1`` and
``<a o_2 b, a* o_2 b*> = -1``; in shuffle mode a monomial pairs with its dual
by the sign of its leaf reading order, times -1 when the inner vertex sits on
the right. The dual relators span the annihilator of the relators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import trees as T
from .free_operad import Generator, GeneratorSet, TreePolynomial
from .linalg import nullspace, rank, same_span
from .presentation import Presentation
from .trees import Node, Tree

_TWIST = {"symmetric": "skew", "skew": "symmetric", "none": "none"}


class KoszulDualError(ValueError):
    pass


def _perm_sign(seq: list[int]) -> int:
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def pairing_sign(m: Tree) -> int:
    """Diagonal pairing value of a weight-2 monomial with its dual."""
    right = isinstance(m.children[-1], Node)
    return (-1 if right else 1) * _perm_sign(T.leaves(m))


@dataclass(frozen=True)
class PairingTable:
    basis: tuple[Tree, ...]
    signs: tuple[int, ...]

    def pair(self, r: TreePolynomial, s: TreePolynomial) -> Fraction:
        return sum((r.coefficient(m) * s.coefficient(m) * e
                    for m, e in zip(self.basis, self.signs)), Fraction(0))

    def is_perfect(self) -> bool:
        return all(e in (1, -1) for e in self.signs)


def _check_supported(p: Presentation):
    for g in p.gens:
        if g.arity != 2:
            raise KoszulDualError(f"Koszul dual needs binary generators; {g.name!r} has arity {g.arity}")
        if g.degree != 0:
            raise KoszulDualError(f"Koszul dual needs degree-0 generators; {g.name!r} has degree {g.degree}")
        if p.mode == "shuffle" and g.symmetry == "none":
            raise KoszulDualError(
                f"shuffle-mode dual needs {g.name!r} flagged symmetric or skew")


def weight2_space(p: Presentation) -> list[Tree]:
    return p.operad.weight2_basis(3)


def pairing_table(p: Presentation) -> PairingTable:
    basis = weight2_space(p)
    return PairingTable(tuple(basis), tuple(pairing_sign(m) for m in basis))


def relator_matrix(p: Presentation, basis: list[Tree]) -> list[list[Fraction]]:
    return [[r.coefficient(m) for m in basis] for r in p.relators]


def dual_generators(gens: GeneratorSet) -> GeneratorSet:
    return GeneratorSet(tuple(Generator(g.name, g.arity, 0, _TWIST[g.symmetry]) for g in gens))


def koszul_dual_presentation(p: Presentation) -> Presentation:
    _check_supported(p)
    table = pairing_table(p)
    basis = list(table.basis)
    rows = [[c * e for c, e in zip(row, table.signs)] for row in relator_matrix(p, basis)]
    perp = nullspace(rows, len(basis)) if rows else [
        [Fraction(int(k == j)) for k in range(len(basis))] for j in range(len(basis))]
    relators = []
    for v in perp:
        relators.append(TreePolynomial({m: c for m, c in zip(basis, v) if c}))
    name = p.name[:-4] if p.name.endswith("Dual") else p.name + "Dual"
    comments = ("Koszul dual of " + p.name,
                "dual generators sit in degree 0 here; as cooperad cogenerators they carry suspension 1")
    return Presentation(name, dual_generators(p.gens), tuple(relators), p.mode, comments)


def relator_dimension(p: Presentation) -> int:
    basis = weight2_space(p)
    return rank(relator_matrix(p, basis), len(basis)) if p.relators else 0


def rename_generators(t: Tree, names: dict[str, str]) -> Tree:
    if isinstance(t, int):
        return t
    return Node(names[t.gen], tuple(rename_generators(c, names) for c in t.children))


def same_relator_span(p: Presentation, q: Presentation) -> bool:
    """Presentations agree up to relator span, generators matched in declaration order."""
    if p.mode != q.mode or len(p.gens) != len(q.gens):
        return False
    if [(g.arity, g.symmetry) for g in p.gens] != [(g.arity, g.symmetry) for g in q.gens]:
        return False
    names = {a.name: b.name for a, b in zip(p.gens, q.gens)}
    p_rel = [TreePolynomial({rename_generators(m, names): c for m, c in r}) for r in p.relators]
    monos = set()
    for r in p_rel + list(q.relators):
        monos.update(m for m, _ in r)
    basis = sorted(monos, key=T.to_text)
    a = [[r.coefficient(m) for m in basis] for r in p_rel]
    b = [[r.coefficient(m) for m in basis] for r in q.relators]
    if not a or not b:
        return rank(a, len(basis)) == rank(b, len(basis)) == 0
    return same_span(a, b, len(basis))
