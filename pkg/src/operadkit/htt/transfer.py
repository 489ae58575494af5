"""Homotopy transfer of A-infinity structures along a deformation retract.

The computation runs on the suspension, where every operation has odd
degree and the transfer is the plain recursion

    lambda_n = sum_{k>=2} sum_{n_1+...+n_k=n} b_k(G_{n_1} (x) ... (x) G_{n_k}),
    G_1 = i,  G_n = -h lambda_n,

with transferred operations p lambda_n and morphism components G_n. Because
all G_n have degree 0 on the suspension no Koszul signs appear; the signs
live entirely in the translation between a map and its suspended version.
Expanding the recursion gives the sum over planar trees with leaves i,
vertices mu_k, internal edges h and root p (or h for the morphism).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .. import trees as T
from ..kernels import add_scaled
from ..linalg import ChainComplex, DeformationRetract, GradedSpace, deformation_retract
from .multilinear import MultilinearMap, Vector
from .structures import (DEFAULT_MAX_ARITY, AInfinityMorphism, AInfinityStructure, DgAlgebra,
                         RelationReport, StructureError, check_ainfinity_relations,
                         check_max_arity, compositions)



def suspension_sign(degrees: Sequence[int]) -> int:
    """Sign relating an n-ary map f to its suspension on elements of the given degrees.

    The suspended map sends sa_1 ... sa_n to sign * s f(a_1, ..., a_n). The
    Koszul part comes from (s^-1)^{(x)n}; the extra n(n-1)/2 matches the
    suspended relations with the (-1)^(p+qr) Stasheff convention.
    """
    n = len(degrees)
    e = sum((n - j) * (deg + 1) for j, deg in enumerate(degrees, start=1)) + n * (n - 1) // 2
    return -1 if e % 2 else 1


@dataclass
class _Suspended:
    """Source operations as suspended maps, evaluated on vectors of known degree."""

    ops: Mapping[int, MultilinearMap]

    def apply(self, k: int, vecs: Sequence[Vector], degrees: Sequence[int]) -> Vector:
        out = self.ops[k](*vecs)
        if not out:
            return out
        if suspension_sign(degrees) < 0:
            return {t: -c for t, c in out.items()}
        return out


def _source_ops(source) -> tuple[ChainComplex, dict[int, MultilinearMap]]:
    if isinstance(source, DgAlgebra):
        return source.complex, {2: source.product}
    if isinstance(source, AInfinityStructure):
        return source.complex, dict(source.ops)
    raise StructureError("source must be a dg algebra or an A-infinity algebra")


@dataclass
class TransferData:
    """Everything the tree sums produce: lambda_n, G_n and the outputs on H."""

    retract: DeformationRetract
    max_arity: int
    lam: dict[int, dict[tuple[int, ...], Vector]]
    G: dict[int, dict[tuple[int, ...], Vector]]


def _compute(source, r: DeformationRetract, max_arity: int) -> TransferData:
    complex_, ops = _source_ops(source)
    if r.big != complex_:
        raise StructureError("retract does not start at the source complex")
    check_max_arity(max_arity)
    H = r.small.space
    A = r.big.space
    susp = _Suspended(ops)
    i_cols = r.i.columns()
    h_map = r.h
    G: dict[int, dict[tuple[int, ...], Vector]] = {1: {}}
    for x in range(H.dim):
        if i_cols[x]:
            G[1][(x,)] = dict(i_cols[x])
    lam: dict[int, dict[tuple[int, ...], Vector]] = {}

    def out_degree(key):
        return sum(H.degrees[k] for k in key) + len(key) - 1

    for n in range(2, max_arity + 1):
        lam[n] = {}
        G[n] = {}
        for key in product(range(H.dim), repeat=n):
            acc: Vector = {}
            for k in range(2, n + 1):
                if k not in ops:
                    continue
                for parts in compositions(n, k):
                    vecs, degs = [], []
                    pos = 0
                    for m in parts:
                        block = key[pos:pos + m]
                        v = G[m].get(block)
                        if not v:
                            break
                        vecs.append(v)
                        degs.append(out_degree(block))
                        pos += m
                    else:
                        add_scaled(acc, susp.apply(k, vecs, degs), 1)
            if acc:
                lam[n][key] = acc
                g = h_map.apply(acc)
                if g:
                    G[n][key] = {t: -c for t, c in g.items()}
    return TransferData(r, max_arity, lam, G)


def _unsuspend(table: Mapping[tuple[int, ...], Vector], space: GradedSpace) -> dict:
    out = {}
    for key, v in table.items():
        s = suspension_sign([space.degrees[k] for k in key])
        out[key] = v if s > 0 else {t: -c for t, c in v.items()}
    return out


def transfer_ainfinity(source, r: DeformationRetract | None = None,
                       max_arity: int = DEFAULT_MAX_ARITY, verify: bool = True) -> AInfinityStructure:
    """Transferred A-infinity structure on the small complex of ``r``.

    With ``verify`` the Stasheff relations are checked through ``max_arity``
    and a failure raises.
    """
    complex_, _ = _source_ops(source)
    r = r or deformation_retract(complex_)
    data = _compute(source, r, max_arity)
    return _structure_from(data, verify)


def _structure_from(data: TransferData, verify: bool) -> AInfinityStructure:
    r = data.retract
    H = r.small.space
    ops = {}
    for n, table in data.lam.items():
        projected = {}
        for key, v in table.items():
            w = r.p.apply(v)
            if w:
                projected[key] = w
        ops[n] = MultilinearMap(H, H, n, n - 2, _unsuspend(projected, H))
    s = AInfinityStructure(r.small, ops)
    if verify:
        report = check_ainfinity_relations(s, data.max_arity)
        if not report.passed:
            raise StructureError("transferred structure fails: " + report.summary())
    return s.with_checked(data.max_arity)


def build_iota_morphism(source, r: DeformationRetract | None = None,
                        max_arity: int = DEFAULT_MAX_ARITY,
                        transferred: AInfinityStructure | None = None) -> AInfinityMorphism:
    """The A-infinity quasi-isomorphism from the transferred structure back to the source."""
    complex_, ops = _source_ops(source)
    r = r or deformation_retract(complex_)
    data = _compute(source, r, max_arity)
    s = transferred or _structure_from(data, verify=False)
    H, A = r.small.space, r.big.space
    target = source.as_ainfinity() if isinstance(source, DgAlgebra) else source
    comps = {}
    for n, table in data.G.items():
        comps[n] = MultilinearMap(H, A, n, n - 1, _unsuspend(table, H))
    return AInfinityMorphism(s, target, comps)


def transfer_with_morphism(source, r: DeformationRetract | None = None,
                           max_arity: int = DEFAULT_MAX_ARITY, verify: bool = True):
    complex_, _ = _source_ops(source)
    r = r or deformation_retract(complex_)
    data = _compute(source, r, max_arity)
    s = _structure_from(data, verify)
    H, A = r.small.space, r.big.space
    target = source.as_ainfinity() if isinstance(source, DgAlgebra) else source
    comps = {n: MultilinearMap(H, A, n, n - 1, _unsuspend(t, H)) for n, t in data.G.items()}
    return s, AInfinityMorphism(s, target, comps), r


def tree_sum_transfer(source, r: DeformationRetract | None = None,
                      max_arity: int = DEFAULT_MAX_ARITY) -> AInfinityStructure:
    """Transferred structure as an explicit sum over planar trees.

    Each planar tree with n leaves and source arities at its vertices
    contributes p(root) composed with -h on internal edges and i on leaves,
    evaluated on the suspension. This is an independent check of the
    recursive computation in ``transfer_ainfinity``.
    """
    complex_, ops = _source_ops(source)
    r = r or deformation_retract(complex_)
    check_max_arity(max_arity)
    H = r.small.space
    susp = _Suspended(ops)
    i_cols = r.i.columns()
    out = {}
    for n in range(2, max_arity + 1):
        shapes = [t for t in T.enumerate_planar_trees(n)
                  if all(len(v.children) in ops for v in T.vertices(t))]
        table = {}
        for key in product(range(H.dim), repeat=n):
            acc: Vector = {}
            for t in shapes:
                v, _ = _eval_tree(t, key, susp, i_cols, r.h, H, root=True)
                add_scaled(acc, v, 1)
            w = r.p.apply(acc) if acc else {}
            if w:
                table[key] = w
        out[n] = MultilinearMap(H, H, n, n - 2, _unsuspend(table, H))
    return AInfinityStructure(r.small, out)


def _eval_tree(t, key, susp, i_cols, h, H, root=False):
    """Value of a subtree on the inputs named by its leaves, with its output degree."""
    if isinstance(t, int):
        x = key[t - 1]
        return dict(i_cols[x]), H.degrees[x]
    vecs, degs = [], []
    for c in t.children:
        v, deg = _eval_tree(c, key, susp, i_cols, h, H)
        if not v:
            return {}, 0
        vecs.append(v)
        degs.append(deg)
    k = len(vecs)
    val = susp.apply(k, vecs, degs)
    deg = sum(degs) + k - 2
    if root or not val:
        return val, deg
    g = h.apply(val)
    return {x: -c for x, c in g.items()}, deg + 1
