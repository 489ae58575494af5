"""Multicomplexes (D-infinity modules) and transfer of bicomplexes.

A multicomplex is a chain complex (A, d) with maps d_n of degree n - 1 such that

    d d_n + (-1)^n d_n d = sum_{i+j=n, i,j>=1} (-1)^i d_i d_j.

A bicomplex with d of bidegree (0, -1) and delta of bidegree (-1, 0) becomes a
multicomplex graded by q, with d_1 = (-1)^q delta (which commutes with d) and
d_n = 0 for n >= 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..linalg import (ChainComplex, DeformationRetract, GradedSpace, LinearAlgebraError, LinearMap,
                      deformation_retract, fmt_rational, homology_decomposition, rational, solve)
from .structures import StructureError


@dataclass(frozen=True)
class Multicomplex:
    complex: ChainComplex
    ops: Mapping[int, LinearMap]

    def __post_init__(self):
        sp = self.complex.space
        ops = {}
        for n, f in self.ops.items():
            if n < 1:
                raise StructureError("multicomplex operators start at d_1")
            if (f.source, f.target, f.degree) != (sp, sp, n - 1):
                raise StructureError(f"d_{n} must be an endomorphism of degree {n - 1}")
            if not f.is_zero():
                ops[n] = f
        object.__setattr__(self, "ops", ops)

    @property
    def space(self) -> GradedSpace:
        return self.complex.space

    def op(self, n: int) -> LinearMap:
        return self.ops.get(n) or LinearMap.zero(self.space, self.space, n - 1)

    def to_json(self) -> dict:
        sp = self.space
        out = {}
        for n in sorted(self.ops):
            cols = {}
            for c, col in enumerate(self.ops[n].columns()):
                if col:
                    cols[sp.basis[c]] = {sp.basis[t]: fmt_rational(v) for t, v in sorted(col.items())}
            out[str(n)] = cols
        return {"basis": [{"name": n, "degree": d} for n, d in zip(sp.basis, sp.degrees)],
                "operators": out}


def dinfinity_defect(m: Multicomplex, n: int) -> LinearMap:
    d = m.complex.differential
    lhs = d @ m.op(n) + (m.op(n) @ d).scale(-1 if n % 2 else 1)
    for i in range(1, n):
        lhs = lhs - (m.op(i) @ m.op(n - i)).scale(-1 if i % 2 else 1)
    return lhs


def check_dinfinity_relations(m: Multicomplex, max_n: int | None = None) -> list[int]:
    """Indices n at which the relation fails (empty when all hold)."""
    top = max(m.ops, default=1)
    max_n = max_n or 2 * top + 1
    return [n for n in range(1, max_n + 1) if not dinfinity_defect(m, n).is_zero()]


# -- bicomplexes -----------------------------------------------------------------

@dataclass(frozen=True)
class Bicomplex:
    names: tuple[str, ...]
    bidegrees: tuple[tuple[int, int], ...]
    d: Mapping[str, Mapping[str, Fraction]]
    delta: Mapping[str, Mapping[str, Fraction]]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise StructureError("basis names must be unique")
        bideg = dict(zip(self.names, self.bidegrees))
        for label, maps, shift in (("d", self.d, (0, -1)), ("delta", self.delta, (-1, 0))):
            for s, col in maps.items():
                for t, v in col.items():
                    if s not in bideg or t not in bideg:
                        raise StructureError(f"{label} mentions unknown element")
                    ps, qs = bideg[s]
                    if v and bideg[t] != (ps + shift[0], qs + shift[1]):
                        raise StructureError(f"{label}({s}) -> {t} has the wrong bidegree")

    @classmethod
    def from_json(cls, data: Mapping) -> "Bicomplex":
        names = tuple(b["name"] for b in data["basis"])
        bideg = tuple((int(b["p"]), int(b["q"])) for b in data["basis"])

        def conv(m):
            return {s: {t: rational(v) for t, v in col.items()} for s, col in m.items()}

        return cls(names, bideg, conv(data.get("d", {})), conv(data.get("delta", {})))

    def to_json(self) -> dict:
        def conv(m):
            return {s: {t: fmt_rational(v) for t, v in col.items()} for s, col in m.items()}

        return {"basis": [{"name": n, "p": p, "q": q} for n, (p, q) in zip(self.names, self.bidegrees)],
                "d": conv(self.d), "delta": conv(self.delta)}

    def q_space(self) -> GradedSpace:
        return GradedSpace.from_basis((n, q) for n, (_, q) in zip(self.names, self.bidegrees))

    def columns(self) -> int:
        ps = [p for p, _ in self.bidegrees]
        return (max(ps) - min(ps) + 1) if ps else 0

    def to_multicomplex(self) -> Multicomplex:
        sp = self.q_space()
        d = LinearMap.from_images(sp, sp, -1, self.d)
        bideg = dict(zip(self.names, self.bidegrees))
        twisted = {s: {t: v * (-1 if bideg[s][1] % 2 else 1) for t, v in col.items()} for s, col in self.delta.items()}
        delta = LinearMap.from_images(sp, sp, 0, twisted)
        try:
            c = ChainComplex(sp, d)
        except LinearAlgebraError as exc:
            raise StructureError(f"d is not a differential: {exc}") from None
        m = Multicomplex(c, {1: delta})
        bad = check_dinfinity_relations(m, 3)
        if bad:
            raise StructureError("delta must square to zero and anticommute with d")
        return m


def load_bicomplex(path) -> Bicomplex:
    with open(path, encoding="utf-8") as fh:
        return Bicomplex.from_json(json.load(fh))


def transfer_multicomplex(m: Multicomplex, r: DeformationRetract | None = None,
                          max_n: int | None = None) -> Multicomplex:
    """Transferred operators p d_{k_1} h d_{k_2} h ... h d_{k_m} i on homology.

    For a bicomplex this is d_n = p (d_1 h)^(n-1) d_1 i. The sum is over all
    compositions n = k_1 + ... + k_m, which covers general multicomplex input.
    """
    r = r or deformation_retract(m.complex)
    if r.big != m.complex:
        raise StructureError("retract does not start at the multicomplex's chain complex")
    bad = check_dinfinity_relations(m)
    if bad:
        raise StructureError(f"input violates the D-infinity relation for n = {bad[0]}")
    span = len(set(m.space.degrees)) + 1
    top = max(m.ops, default=1)
    max_n = max_n or top * (span + 1)
    H = r.small.space
    # chains[n] = sum over compositions of n of d_{k_1} h ... h d_{k_m} i (maps H -> A)
    chains: dict[int, LinearMap] = {}
    for n in range(1, max_n + 1):
        acc = LinearMap.zero(H, m.space, n - 1)
        if n in m.ops:
            acc = acc + m.ops[n] @ r.i
        for k in range(1, n):
            if k in m.ops and (n - k) in chains:
                acc = acc + m.ops[k] @ r.h @ chains[n - k]
        if not acc.is_zero():
            chains[n] = acc
    ops = {n: r.p @ f for n, f in chains.items()}
    return Multicomplex(r.small, ops)


# -- zig-zag oracle --------------------------------------------------------------

def _columns(vectors: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    return [[v[r] for v in vectors] for r in range(n)]


def zigzag_d2(b: Bicomplex, r: DeformationRetract | None = None):
    """Second-page differential by diagram chasing, without the homotopy.

    For each vector v of a basis of ker(d_1) on H(A, d): take the cycle x
    representing v, solve delta x = -d y for any y, and record the class of
    delta y. Returns ``(kernel, images, d1_image)`` in homology coordinates;
    images are meaningful modulo the span of ``d1_image``.
    """
    from ..linalg import nullspace

    m = b.to_multicomplex()
    r = r or deformation_retract(m.complex)
    A = m.space
    n = A.dim
    delta = LinearMap.from_images(A, A, 0, b.delta)
    split = homology_decomposition(m.complex)
    reps = [list(v) for deg in sorted(split) for v in split[deg].homology]
    bnd = [list(v) for deg in sorted(split) for v in split[deg].boundaries]
    basis_mat = _columns(reps + bnd, n)
    dmat = [list(row) for row in m.complex.differential.matrix]

    def dense(v: Mapping[int, Fraction]) -> list[Fraction]:
        return [v.get(k, Fraction(0)) for k in range(n)]

    def sparse(v: list[Fraction]) -> dict[int, Fraction]:
        return {k: x for k, x in enumerate(v) if x}

    def class_of(cycle: list[Fraction]) -> list[Fraction]:
        sol = solve(basis_mat, cycle, len(reps) + len(bnd))
        if sol is None:
            raise StructureError("zig-zag produced a non-cycle")
        return sol[:len(reps)]

    k = len(reps)
    d1 = [class_of(dense(delta.apply(sparse(v)))) for v in reps]
    kernel = nullspace(_columns(d1, k), k) if k else []
    images = []
    for v in kernel:
        x = [sum((v[j] * reps[j][row] for j in range(k)), Fraction(0)) for row in range(n)]
        y = solve(dmat, [-c for c in dense(delta.apply(sparse(x)))], n)
        if y is None:
            raise StructureError("delta x is not a d-boundary")
        images.append(class_of(dense(delta.apply(sparse(y)))))
    return kernel, images, [col for col in d1 if any(col)]


def second_page_agrees(b: Bicomplex, transferred: Multicomplex | None = None) -> bool:
    """Transferred d_2 equals the zig-zag d_2 on ker d_1, modulo im d_1."""
    from ..linalg import in_span

    m = b.to_multicomplex()
    r = deformation_retract(m.complex)
    t = transferred or transfer_multicomplex(m, r)
    kernel, images, d1_image = zigzag_d2(b, r)
    d2 = t.op(2)
    k = t.space.dim
    for v, img in zip(kernel, images):
        got = d2.apply({j: x for j, x in enumerate(v) if x})
        diff = [got.get(j, Fraction(0)) - img[j] for j in range(k)]
        if not in_span(d1_image, diff):
            return False
    return True


def staircase_bicomplex() -> Bicomplex:
    """Three columns: x in (2,0), u in (1,0), y in (1,1), z in (0,1); delta x = u = d y, delta y = z."""
    return Bicomplex(
        names=("x", "u", "y", "z"),
        bidegrees=((2, 0), (1, 0), (1, 1), (0, 1)),
        d={"y": {"u": Fraction(1)}},
        delta={"x": {"u": Fraction(1)}, "y": {"z": Fraction(1)}},
    )


def staircase(length: int, start: tuple[int, int] = (0, 0), tag: str = "",
              coeffs: tuple[Fraction, ...] = ()) -> Bicomplex:
    """Zig-zag whose two ends are linked by d_length on homology.

    ``delta y_{k-1} = c_k u_k`` and ``d y_k = u_k`` for k < length, then
    ``delta y_{length-1} = c_length z``; the scalars c default to 1.
    """
    if length < 1:
        raise StructureError("staircase length must be positive")
    p, q = start
    names = [f"y0{tag}"]
    bideg = [(p, q)]
    d: dict[str, dict[str, Fraction]] = {}
    delta: dict[str, dict[str, Fraction]] = {}
    cs = list(coeffs) + [Fraction(1)] * length
    for k in range(1, length):
        u, y = f"u{k}{tag}", f"y{k}{tag}"
        names += [u, y]
        bideg += [(p - k, q + k - 1), (p - k, q + k)]
        delta[f"y{k - 1}{tag}"] = {u: Fraction(cs[k - 1])}
        d[y] = {u: Fraction(1)}
    z = f"z{tag}"
    names.append(z)
    bideg.append((p - length, q + length - 1))
    delta[f"y{length - 1}{tag}"] = {z: Fraction(cs[length - 1])}
    return Bicomplex(tuple(names), tuple(bideg), d, delta)


def tensor(a: Bicomplex, b: Bicomplex) -> Bicomplex:
    """Tensor product with Koszul signs from the total degree p + q."""
    bd_a = dict(zip(a.names, a.bidegrees))
    bd_b = dict(zip(b.names, b.bidegrees))
    names, bideg = [], []
    for x in a.names:
        for y in b.names:
            names.append(f"{x}*{y}")
            bideg.append((bd_a[x][0] + bd_b[y][0], bd_a[x][1] + bd_b[y][1]))

    def op(ma, mb):
        out: dict[str, dict[str, Fraction]] = {}
        for x in a.names:
            sx = -1 if sum(bd_a[x]) % 2 else 1
            for y in b.names:
                img: dict[str, Fraction] = {}
                for t, c in ma.get(x, {}).items():
                    img[f"{t}*{y}"] = img.get(f"{t}*{y}", Fraction(0)) + c
                for t, c in mb.get(y, {}).items():
                    img[f"{x}*{t}"] = img.get(f"{x}*{t}", Fraction(0)) + sx * c
                img = {k: v for k, v in img.items() if v}
                if img:
                    out[f"{x}*{y}"] = img
        return out

    return Bicomplex(tuple(names), tuple(bideg), op(a.d, b.d), op(a.delta, b.delta))


def square(start: tuple[int, int], tag: str) -> Bicomplex:
    """Acyclic square a -> b (d), a -> c (delta), b -> e, c -> e."""
    p, q = start
    names = tuple(f"{x}{tag}" for x in "abce")
    a, b_, c, e = names
    return Bicomplex(names, ((p, q), (p, q - 1), (p - 1, q), (p - 1, q - 1)),
                     {a: {b_: Fraction(1)}, c: {e: Fraction(1)}},
                     {a: {c: Fraction(1)}, b_: {e: Fraction(-1)}})


def scramble(b: Bicomplex, rng) -> Bicomplex:
    """Random change of basis inside each bidegree (keeps all structure)."""
    from ..linalg import inverse

    by_bideg: dict[tuple[int, int], list[str]] = {}
    for n, bd in zip(b.names, b.bidegrees):
        by_bideg.setdefault(bd, []).append(n)
    # new_j = sum_k S[k][j] old_k, so old coordinates = S new coordinates
    S: dict[str, dict[str, Fraction]] = {}
    Sinv: dict[str, dict[str, Fraction]] = {}
    for names in by_bideg.values():
        k = len(names)
        while True:
            mat = [[Fraction(rng.randint(-2, 2)) for _ in range(k)] for _ in range(k)]
            try:
                inv = inverse(mat)
                break
            except Exception:
                continue
        for j, nj in enumerate(names):
            S[nj] = {names[r]: mat[r][j] for r in range(k) if mat[r][j]}
            Sinv[nj] = {names[r]: inv[r][j] for r in range(k) if inv[r][j]}

    def apply(m, v):
        out: dict[str, Fraction] = {}
        for s_, x in v.items():
            for t, y in m.get(s_, {}).items():
                out[t] = out.get(t, Fraction(0)) + x * y
        return {t: x for t, x in out.items() if x}

    def conj(m):
        return {n: img for n in b.names if (img := apply(Sinv, apply(m, S[n])))}

    return Bicomplex(b.names, b.bidegrees, conj(b.d), conj(b.delta))


def _random_piece(rng, tag: str) -> Bicomplex:
    start = (rng.randint(0, 3), rng.randint(-1, 1))
    if rng.random() < 0.2:
        return square(start, tag)
    n = rng.randint(1, 3)
    coeffs = tuple(Fraction(rng.choice([-2, -1, 1, 3])) for _ in range(n))
    return staircase(n, start, tag, coeffs)


def random_bicomplex(rng, pieces: int = 2) -> Bicomplex:
    """Scrambled sum of staircases, squares and tensor products of staircases.

    Tensor products make composites such as d_3 d_2 nonzero on homology.
    """
    parts = []
    for k in range(pieces):
        if rng.random() < 0.6:
            parts.append(tensor(_random_piece(rng, f"a{k}"), _random_piece(rng, f"b{k}")))
        else:
            parts.append(_random_piece(rng, f"c{k}"))
    return scramble(direct_sum(*parts), rng)


def direct_sum(*parts: Bicomplex) -> Bicomplex:
    names, bideg, d, delta = [], [], {}, {}
    for b in parts:
        names += list(b.names)
        bideg += list(b.bidegrees)
        d.update(b.d)
        delta.update(b.delta)
    return Bicomplex(tuple(names), tuple(bideg), d, delta)
