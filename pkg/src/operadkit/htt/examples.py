"""Example inputs: random dg algebras, the Borromean pattern, graded-commutative
algebras, A-infinity sources and bicomplexes.

Random dg algebras are quotients of free (or free graded-commutative)
algebras without unit by monomial ideals that contain every long word and
are stable under the differential; the differential sends a generator to a
combination of words in earlier closed generators, so it squares to zero.
"""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from itertools import product

from ..kernels import add_scaled
from ..linalg import ChainComplex, GradedSpace, LinearMap, inverse, matmul
from .multilinear import MultilinearMap
from .structures import AInfinityStructure, DgAlgebra


# -- words and monomial algebras ----------------------------------------------

def _word_name(word: tuple[int, ...], names: list[str]) -> str:
    return "".join(names[g] for g in word)


def _normal_commutative(word, degrees):
    """Sort a word of graded-commutative generators; return (sign, word) or (0, None)."""
    w = list(word)
    sign = 1
    for a in range(len(w)):
        for b in range(len(w) - 1 - a):
            if w[b] > w[b + 1]:
                if degrees[w[b]] % 2 and degrees[w[b + 1]] % 2:
                    sign = -sign
                w[b], w[b + 1] = w[b + 1], w[b]
    for a in range(len(w) - 1):
        if w[a] == w[a + 1] and degrees[w[a]] % 2:
            return 0, None
    return sign, tuple(w)


class MonomialAlgebra:
    """Words in generators modulo an upward-closed set of killed words."""

    def __init__(self, names, degrees, dgen, max_length, commutative=False, killed=()):
        self.names = list(names)
        self.degrees = list(degrees)
        self.dgen = dgen  # generator index -> {word: coefficient}
        self.commutative = commutative
        self.max_length = max_length
        self.killed = set(killed)
        words = []
        for length in range(1, max_length + 1):
            for w in product(range(len(names)), repeat=length):
                s, nw = self.normal(w)
                if s and nw == w and nw not in words:
                    words.append(w)
        self.words = [w for w in words if not self.is_killed(w)]

    def normal(self, w):
        if self.commutative:
            return _normal_commutative(w, self.degrees)
        return 1, tuple(w)

    def is_killed(self, w) -> bool:
        if len(w) > self.max_length:
            return True
        n = len(w)
        for a in range(n):
            for b in range(a + 1, n + 1):
                sub = w[a:b]
                if sub in self.killed:
                    return True
        if self.commutative:
            # in the commutative case any sub-multiset counts as a divisor
            cw = Counter(w)
            for k in self.killed:
                ck = Counter(k)
                if all(cw[x] >= c for x, c in ck.items()):
                    return True
        return False

    def degree(self, w) -> int:
        return sum(self.degrees[g] for g in w)

    def multiply(self, u, v) -> dict:
        s, w = self.normal(u + v)
        if not s or self.is_killed(w):
            return {}
        return {w: Fraction(s)}

    def d(self, w) -> dict:
        out: dict = {}
        sign = 1
        for k, g in enumerate(w):
            for image, c in self.dgen.get(g, {}).items():
                s, nw = self.normal(w[:k] + image + w[k + 1:])
                if s and not self.is_killed(nw):
                    out[nw] = out.get(nw, 0) + sign * s * c
            if self.degrees[g] % 2:
                sign = -sign
        return {k: v for k, v in out.items() if v}

    def is_dg_ideal(self) -> bool:
        """Killed words span a dg ideal: d never maps a killed word outside it."""
        # the ideal is spanned by killed words of length <= max_length + 1 plus everything longer
        for length in range(1, self.max_length + 1):
            for w in product(range(len(self.names)), repeat=length):
                s, nw = self.normal(w)
                if not s or nw != w or not self.is_killed(w):
                    continue
                for k, g in enumerate(w):
                    for image, c in self.dgen.get(g, {}).items():
                        s2, nw2 = self.normal(w[:k] + image + w[k + 1:])
                        if s2 and not self.is_killed(nw2):
                            return False
        return True

    def to_dga(self) -> DgAlgebra:
        basis = [(_word_name(w, self.names), self.degree(w)) for w in self.words]
        space = GradedSpace.from_basis(basis)
        index = {w: space.index(_word_name(w, self.names)) for w in self.words}
        images = {}
        for w in self.words:
            col = {_word_name(t, self.names): c for t, c in self.d(w).items()}
            if col:
                images[_word_name(w, self.names)] = col
        dmap = LinearMap.from_images(space, space, -1, images)
        table = {}
        for u in self.words:
            for v in self.words:
                prod_ = self.multiply(u, v)
                if prod_:
                    table[(index[u], index[v])] = {index[t]: c for t, c in prod_.items()}
        return DgAlgebra(ChainComplex(space, dmap), MultilinearMap(space, space, 2, 0, table))


def _rand_coeff(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([1, -1, 2, -2, 3, 1, -1]), rng.choice([1, 1, 1, 2, 3]))


def _random_monomial_algebra(rng: random.Random, commutative: bool, max_dim: int):
    for _ in range(500):
        k = rng.choice([1, 2, 2, 3])
        names = ["x", "y", "z"][:k]
        degrees = []
        dgen = {}
        for g in range(k):
            closed_before = [h for h in range(g) if h not in dgen]
            if closed_before and rng.random() < 0.6:
                # choose a word of closed generators of length 2 and set the degree to match
                word = tuple(rng.choice(closed_before) for _ in range(2))
                deg = sum(degrees[h] for h in word) + 1
                if abs(deg) > 4:
                    deg = rng.choice([-1, 0, 1])
                    degrees.append(deg)
                    continue
                degrees.append(deg)
                # collect all closed words of that degree and length 2 for a random combination
                options = [w for w in product(closed_before, repeat=2)
                           if sum(degrees[h] for h in w) == deg - 1]
                img = {}
                for w in options:
                    if rng.random() < 0.7 or w == word:
                        img[w] = img.get(w, 0) + _rand_coeff(rng)
                img = {w: c for w, c in img.items() if c}
                if commutative:
                    norm = {}
                    for w, c in img.items():
                        s, nw = _normal_commutative(w, degrees)
                        if s:
                            norm[nw] = norm.get(nw, 0) + s * c
                    img = {w: c for w, c in norm.items() if c}
                if img:
                    dgen[g] = img
            else:
                degrees.append(rng.choice([-2, -1, -1, 0, 1]))
        max_length = rng.choice([2, 2, 3, 4])
        killed = set()
        for _ in range(rng.choice([0, 1, 2])):
            length = rng.choice([2, 3])
            killed.add(tuple(rng.randrange(k) for _ in range(length)))
        alg = MonomialAlgebra(names, degrees, dgen, max_length, commutative, killed)
        if not 2 <= len(alg.words) <= max_dim:
            continue
        if not alg.is_dg_ideal():
            continue
        try:
            dga = alg.to_dga()
        except ValueError:
            continue
        return dga
    raise RuntimeError("could not generate a random dg algebra")


def change_basis(dga: DgAlgebra, rng: random.Random) -> DgAlgebra:
    """Conjugate by a random degree-preserving invertible matrix, renaming basis e1..en."""
    sp = dga.space
    n = sp.dim
    while True:
        M = [[Fraction(0)] * n for _ in range(n)]
        for deg in sp.degree_list():
            idx = sp.indices(deg)
            for r in idx:
                for c in idx:
                    M[r][c] = Fraction(rng.choice([0, 0, 1, -1, 2])) + (1 if r == c else 0)
        try:
            Minv = inverse(M)
        except ValueError:
            continue
        break
    names = [f"e{k + 1}" for k in range(n)]
    new_space = GradedSpace.from_basis(zip(names, sp.degrees))
    # new basis vector k = sum_r M[r][k] old_r ; coordinates transform by Minv
    d_old = dga.complex.differential.matrix
    d_new = matmul(Minv, matmul(d_old, M, n), n)
    dmap = LinearMap(new_space, new_space, -1, d_new)
    cols = [{r: M[r][k] for r in range(n) if M[r][k]} for k in range(n)]
    table = {}
    for a in range(n):
        for b in range(n):
            v = dga.product(cols[a], cols[b])
            if not v:
                continue
            w = {}
            for r, x in v.items():
                for t in range(n):
                    if Minv[t][r]:
                        add_scaled(w, {t: Minv[t][r] * x}, 1)
            if w:
                table[(a, b)] = w
    # order of the new space equals the old order since degrees are copied in place
    return DgAlgebra(ChainComplex(new_space, dmap), MultilinearMap(new_space, new_space, 2, 0, table))


def random_dga(rng: random.Random, max_dim: int = 6, scramble: bool = True) -> DgAlgebra:
    dga = _random_monomial_algebra(rng, False, max_dim)
    return change_basis(dga, rng) if scramble else dga


def random_commutative_dga(rng: random.Random, max_dim: int = 6, scramble: bool = True) -> DgAlgebra:
    dga = _random_monomial_algebra(rng, True, max_dim)
    return change_basis(dga, rng) if scramble else dga


def random_dgas(seed: int, count: int, max_dim: int = 6, commutative: bool = False) -> list[DgAlgebra]:
    rng = random.Random(seed)
    make = random_commutative_dga if commutative else random_dga
    return [make(rng, max_dim) for _ in range(count)]


# -- fixed examples -----------------------------------------------------------

def borromean_dga() -> DgAlgebra:
    """Seven-dimensional algebra with x y = d a and y z = d b and a nonzero triple product.

    Degrees are homological: x, y, z, a, b in degree -1 and u, w in degree -2;
    d a = d b = u, x y = y z = u, x a = x b = w and all other products vanish.
    """
    space = GradedSpace.from_dict({-1: ["x", "y", "z", "a", "b"], -2: ["u", "w"]})
    d = LinearMap.from_images(space, space, -1, {"a": {"u": 1}, "b": {"u": 1}})
    ix = space.index
    table = {
        (ix("x"), ix("y")): {ix("u"): Fraction(1)},
        (ix("y"), ix("z")): {ix("u"): Fraction(1)},
        (ix("x"), ix("a")): {ix("w"): Fraction(1)},
        (ix("x"), ix("b")): {ix("w"): Fraction(1)},
    }
    return DgAlgebra(ChainComplex(space, d), MultilinearMap(space, space, 2, 0, table))


def heisenberg_cdga() -> DgAlgebra:
    """Free graded-commutative algebra on odd x, y, z with d z = x y, words of length <= 2."""
    alg = MonomialAlgebra(["x", "y", "z"], [-1, -1, -1], {2: {(0, 1): Fraction(1)}}, 2, True)
    return alg.to_dga()


def free_tensor_truncation() -> DgAlgebra:
    """Free associative algebra on x, y (degree 0) truncated to words of length <= 2."""
    return MonomialAlgebra(["x", "y"], [0, 0], {}, 2, False).to_dga()


def ainfinity_with_cone(base: AInfinityStructure, rng: random.Random) -> AInfinityStructure:
    """Add an acyclic pair in each occupied degree and scramble the basis.

    The operations are pulled back along the projection onto ``base``, so the
    result is an A-infinity algebra whose transfer recovers ``base`` up to
    isomorphism.
    """
    H = base.space
    items = list(zip(H.basis, H.degrees))
    extra = []
    for deg in sorted(set(H.degrees)):
        extra.append((f"c{deg}".replace("-", "m") + "u", deg + 1))
        extra.append((f"c{deg}".replace("-", "m") + "v", deg))
    space = GradedSpace.from_basis(items + extra)
    n = space.dim
    pos = {name: space.index(name) for name, _ in items + extra}
    dimg = {}
    for k in range(0, len(extra), 2):
        dimg[extra[k][0]] = {extra[k + 1][0]: 1}
    d = LinearMap.from_images(space, space, -1, dimg)
    emb = {H_k: pos[name] for H_k, name in enumerate(H.basis)}
    ops = {}
    for m, op in base.ops.items():
        table = {}
        for key, col in op.table.items():
            table[tuple(emb[k] for k in key)] = {emb[t]: c for t, c in col.items()}
        ops[m] = MultilinearMap(space, space, m, m - 2, table)
    s = AInfinityStructure(ChainComplex(space, d), ops)
    return scramble_ainfinity(s, rng)


def scramble_ainfinity(s: AInfinityStructure, rng: random.Random) -> AInfinityStructure:
    sp = s.space
    n = sp.dim
    while True:
        M = [[Fraction(0)] * n for _ in range(n)]
        for deg in sp.degree_list():
            idx = sp.indices(deg)
            for r in idx:
                for c in idx:
                    M[r][c] = Fraction(rng.choice([0, 0, 1, -1])) + (1 if r == c else 0)
        try:
            Minv = inverse(M)
        except ValueError:
            continue
        break
    names = [f"e{k + 1}" for k in range(n)]
    new_space = GradedSpace.from_basis(zip(names, sp.degrees))
    d_new = matmul(Minv, matmul(s.complex.differential.matrix, M, n), n)
    cols = [{r: M[r][k] for r in range(n) if M[r][k]} for k in range(n)]
    ops = {}
    for m, op in s.ops.items():
        table = {}
        for key in product(range(n), repeat=m):
            v = op(*[cols[k] for k in key])
            if not v:
                continue
            w = {}
            for r, x in v.items():
                for t in range(n):
                    if Minv[t][r]:
                        add_scaled(w, {t: Minv[t][r] * x}, 1)
            if w:
                table[key] = w
        ops[m] = MultilinearMap(new_space, new_space, m, m - 2, table)
    return AInfinityStructure(ChainComplex(new_space, LinearMap(new_space, new_space, -1, d_new)), ops)
