from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

import pytest

from operadkit.linalg import ChainComplex, GradedSpace, LinearMap, matmul, zeros


def random_complex(rng: random.Random, dims: dict[int, int], density: float = 0.6) -> ChainComplex:
    """Random complex with d = B A-style factorizations so that d^2 = 0."""
    degs = sorted(dims)
    names = {d: [f"e{d}_{k}" for k in range(dims[d])] for d in degs}
    space = GradedSpace.from_dict({d: names[d] for d in degs if dims[d]})
    n = space.dim
    mat = zeros(n, n)
    # pick d_k : A_k -> A_{k-1} inductively, each map landing in the kernel of the next
    prev = None
    for d in degs:
        src, tgt = space.indices(d), space.indices(d - 1)
        if not src or not tgt:
            prev = None
            continue
        block = [[Fraction(rng.randint(-2, 2)) if rng.random() < density else Fraction(0)
                  for _ in src] for _ in tgt]
        if prev is not None:
            # project the image into ker(d_{k-1}) by composing with a kernel basis
            from operadkit.linalg import nullspace

            ker = nullspace(prev, len(tgt))
            if not ker:
                block = [[Fraction(0)] * len(src) for _ in tgt]
            else:
                coeffs = [[Fraction(rng.randint(-2, 2)) for _ in src] for _ in ker]
                block = matmul([list(col) for col in zip(*ker)], coeffs, len(src))
        for r, row in zip(tgt, block):
            for c, x in zip(src, row):
                mat[r][c] = x
        prev = block
    return ChainComplex(space, LinearMap(space, space, -1, mat))


def mr_count(n: int) -> int:
    """Planar binary trees on a permutation of 1..n, each vertex's leftmost leaf minimal and rightmost maximal."""

    def shapes(k):
        if k == 1:
            return ["*"]
        return [(a, b) for i in range(1, k) for a in shapes(i) for b in shapes(k - i)]

    def fill(s, labels):
        if s == "*":
            return labels[0], labels[1:]
        a, rest = fill(s[0], labels)
        b, rest = fill(s[1], rest)
        return (a, b), rest

    def flat(t):
        return [t] if isinstance(t, int) else flat(t[0]) + flat(t[1])

    def ok(t):
        if isinstance(t, int):
            return True
        ls = flat(t)
        return ls[0] == min(ls) and ls[-1] == max(ls) and ok(t[0]) and ok(t[1])

    return sum(ok(fill(s, list(p))[0]) for s in shapes(n) for p in permutations(range(1, n + 1)))


def planar_tree_count(leaves: int, vertices: int) -> int:
    """Planar trees with every vertex of arity >= 2, counted by recursion on the root's subtrees."""

    @lru_cache(maxsize=None)
    def forests(n: int, v: int, k: int) -> int:
        # ordered k-tuples of trees with n leaves and v vertices in total
        if k == 0:
            return int(n == 0 and v == 0)
        return sum(trees(a, b) * forests(n - a, v - b, k - 1)
                   for a in range(1, n - k + 2) for b in range(0, v + 1))

    @lru_cache(maxsize=None)
    def trees(n: int, v: int) -> int:
        if n == 1:
            return int(v == 0)
        if v == 0:
            return 0
        return sum(forests(n, v - 1, k) for k in range(2, n + 1))

    return trees(leaves, vertices)


@pytest.fixture
def rng():
    return random.Random(12345)
