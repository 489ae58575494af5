"""Classical triple Massey products and their comparison with the transferred mu_3."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..kernels import add_scaled
from ..linalg import DeformationRetract, deformation_retract, in_span, rank
from .multilinear import Vector, basis_vector, parity_sign, vec_scale
from .structures import DgAlgebra, StructureError
from .transfer import transfer_ainfinity


class MasseyError(StructureError):
    pass


@dataclass(frozen=True)
class MasseyResult:
    classes: tuple[str, str, str]
    representative: Vector          # class of the classical chain, in H coordinates
    indeterminacy: tuple[Vector, ...]
    mu3: Vector
    chain: Vector                   # the cycle in A

    @property
    def verdict(self) -> bool:
        """Whether mu_3 minus the representative lies in the indeterminacy."""
        return _in_span_sparse(self.indeterminacy, _diff(self.mu3, self.representative))

    def indeterminacy_dimension(self, dim: int) -> int:
        rows = [[v.get(k, Fraction(0)) for k in range(dim)] for v in self.indeterminacy]
        return rank(rows, dim) if rows else 0


def _diff(a: Vector, b: Vector) -> Vector:
    out = dict(a)
    add_scaled(out, b, -1)
    return out


def _in_span_sparse(vectors, v: Vector) -> bool:
    if not v:
        return True
    keys = sorted(set(v).union(*[set(w) for w in vectors]) if vectors else set(v))
    rows = [[w.get(k, Fraction(0)) for k in keys] for w in vectors]
    return in_span(rows, [v.get(k, Fraction(0)) for k in keys])


def resolve_class(r: DeformationRetract, name: str) -> int:
    """Index of a homology basis element, accepting ``x`` for ``[x]``."""
    H = r.small.space
    for cand in (name, f"[{name}]"):
        if cand in H.basis:
            return H.index(cand)
    raise MasseyError(f"unknown homology class {name!r} (known: {', '.join(H.basis)})")


def massey_triple(alg: DgAlgebra, x: str, y: str, z: str,
                  r: DeformationRetract | None = None) -> MasseyResult:
    """Triple Massey product of three homology classes, with lifts chosen by h.

    With cycles x, y, z and a = (-1)^|x| h(x y), b = (-1)^|y| h(y z) the chain
    (-1)^|x| x b + (-1)^|a| a z is a cycle whose class is returned together
    with the indeterminacy x H + H z and the transferred mu_3(x, y, z).
    """
    r = r or deformation_retract(alg.complex)
    H = r.small.space
    A = alg.space
    ix, iy, iz = (resolve_class(r, n) for n in (x, y, z))
    i_cols = r.i.columns()
    cx, cy, cz = (dict(i_cols[k]) for k in (ix, iy, iz))
    dx, dy = H.degrees[ix], H.degrees[iy]
    xy = alg.mul(cx, cy)
    yz = alg.mul(cy, cz)
    for label, prod_ in (((x, y), xy), ((y, z), yz)):
        cls = r.p.apply(prod_)
        if cls:
            names = ", ".join(f"{H.basis[k]}: {v}" for k, v in sorted(cls.items()))
            raise MasseyError(f"product of {label[0]} and {label[1]} is nonzero in homology ({names})")
    a = vec_scale(r.h.apply(xy), parity_sign(dx))
    b = vec_scale(r.h.apply(yz), parity_sign(dy))
    deg_a = dx + dy + 1
    chain = vec_scale(alg.mul(cx, b), parity_sign(dx))
    add_scaled(chain, alg.mul(a, cz), parity_sign(deg_a))
    if alg.d(chain):
        raise MasseyError("internal error: Massey chain is not a cycle")
    rep = r.p.apply(chain)
    mu = transfer_ainfinity(alg, r, max_arity=3, verify=False)
    mu2 = mu.op(2)
    indet = []
    for e in range(H.dim):
        for v in (mu2(basis_vector(ix), basis_vector(e)), mu2(basis_vector(e), basis_vector(iz))):
            if v:
                indet.append(v)
    mu3 = mu.op(3)(basis_vector(ix), basis_vector(iy), basis_vector(iz))
    return MasseyResult((H.basis[ix], H.basis[iy], H.basis[iz]), rep, tuple(indet), mu3, chain)


@dataclass(frozen=True)
class FormalityReport:
    max_arity: int
    nonvanishing: tuple[int, ...]

    @property
    def vanishes(self) -> bool:
        return not self.nonvanishing

    def summary(self) -> str:
        if self.vanishes:
            return f"higher A-infinity Massey products vanish (formal through arity {self.max_arity})"
        arities = ", ".join(f"mu_{n}" for n in self.nonvanishing)
        return f"nonzero higher operations: {arities} (formality not decided by this transfer)"

    def to_json(self) -> dict:
        return {"max_arity": self.max_arity, "nonvanishing": list(self.nonvanishing),
                "formal_through_arity": self.max_arity if self.vanishes else None,
                "summary": self.summary()}


def formality_report(s, max_arity: int | None = None) -> FormalityReport:
    """Which transferred mu_n with 3 <= n <= max_arity are nonzero."""
    top = max_arity or s.checked_arity or max(s.ops, default=2)
    return FormalityReport(top, tuple(n for n in range(3, top + 1) if not s.op(n).is_zero()))
