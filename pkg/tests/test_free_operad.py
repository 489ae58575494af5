from __future__ import annotations

import random
from fractions import Fraction

import pytest

from operadkit import trees as T
from operadkit.free_operad import (FreeOperad, Generator, GeneratorSet, OperadError, TreePolynomial,
                                   divisors, monomial_degree, partial_compose, substitute,
                                   weight2_basis)
from operadkit.trees import Node

GENS = GeneratorSet.of(Generator("m", 2, 0), Generator("o", 2, 1), Generator("t", 3, 1),
                       Generator("s", 3, 0))


def random_monomial(rng: random.Random, max_arity: int) -> Node | int:
    target = rng.randint(1, max_arity)
    t: Node | int = 1
    while T.arity(t) < target:
        fits = [g for g in GENS if T.arity(t) + g.arity - 1 <= max_arity]
        g = rng.choice(fits)
        t = T.graft(t, rng.randint(1, T.arity(t)), T.corolla(g.arity, g.name)) if not isinstance(t, int) \
            else T.corolla(g.arity, g.name)
    return t


def random_poly(rng: random.Random, max_arity: int) -> TreePolynomial:
    base = random_monomial(rng, max_arity)
    n = T.arity(base)
    terms = {base: Fraction(rng.randint(1, 3))}
    for _ in range(rng.randint(0, 2)):
        m = random_monomial(rng, max_arity)
        if T.arity(m) == n and m != base and monomial_degree(m, GENS) == monomial_degree(base, GENS):
            terms[m] = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    return TreePolynomial(terms)


def degree(p: TreePolynomial) -> int:
    degs = {monomial_degree(m, GENS) for m, _ in p}
    return degs.pop() if len(degs) == 1 else None


def test_axioms_on_random_triples():
    rng = random.Random(2024)
    checked = 0
    while checked < 200:
        lam, mu, nu = (random_monomial(rng, 6) for _ in range(3))
        lam, mu, nu = (TreePolynomial.monomial(x, rng.randint(1, 3)) for x in (lam, mu, nu))
        l, m = lam.arity, mu.arity
        i = rng.randint(1, l)
        j = rng.randint(1, m)
        lhs = partial_compose(partial_compose(lam, i, mu, GENS), i - 1 + j, nu, GENS)
        rhs = partial_compose(lam, i, partial_compose(mu, j, nu, GENS), GENS)
        assert lhs == rhs
        if l >= 2:
            i, k = sorted(rng.sample(range(1, l + 1), 2))
            lhs = partial_compose(partial_compose(lam, i, mu, GENS), k - 1 + m, nu, GENS)
            rhs = partial_compose(partial_compose(lam, k, nu, GENS), i, mu, GENS)
            sign = -1 if (degree(mu) * degree(nu)) % 2 else 1
            assert lhs == rhs.scale(sign)
        checked += 1


def test_axioms_on_polynomials():
    rng = random.Random(7)
    for _ in range(60):
        lam, mu, nu = (random_poly(rng, 4) for _ in range(3))
        i, j = rng.randint(1, lam.arity), rng.randint(1, mu.arity)
        assert partial_compose(partial_compose(lam, i, mu, GENS), i - 1 + j, nu, GENS) == \
            partial_compose(lam, i, partial_compose(mu, j, nu, GENS), GENS)


def test_odd_generators_sign_consistency():
    o = TreePolynomial.monomial(T.corolla(2, "o"))
    lhs = partial_compose(partial_compose(o, 1, o, GENS), 3, o, GENS)
    rhs = partial_compose(partial_compose(o, 2, o, GENS), 1, o, GENS)
    assert lhs == rhs.scale(-1)
    assert lhs.coefficient(T.parse_tree("o(o(1,2),o(3,4))")) == 1
    assert rhs.coefficient(T.parse_tree("o(o(1,2),o(3,4))")) == -1


def test_left_comb_and_gradings():
    m = TreePolynomial.monomial(T.corolla(2, "m"))
    assert partial_compose(m, 1, m, GENS) == TreePolynomial.monomial(T.parse_tree("m(m(1,2),3)"))
    p = partial_compose(partial_compose(m, 2, m, GENS), 1, m, GENS)
    assert p.weights() == {3} and p.arity == 4
    with pytest.raises(OperadError):
        partial_compose(m, 3, m, GENS)


def test_weight2_bases():
    one = GeneratorSet.of(Generator("m", 2))
    two = GeneratorSet.of(Generator("a", 2), Generator("b", 2))
    assert [T.to_text(t) for t in weight2_basis(one, 3, "ns")] == ["m(1,m(2,3))", "m(m(1,2),3)"]
    assert len(weight2_basis(one, 3, "shuffle")) == 3
    assert len(weight2_basis(two, 3, "ns")) == 8
    assert weight2_basis(one, 5, "ns") == []


def test_composition_is_strictly_monotone():
    ops = FreeOperad(GeneratorSet.of(Generator("a", 2), Generator("b", 2)), "ns")
    rank = ops.rank
    monos = ops.monomials(3, 2)
    for small, big in zip(monos, monos[1:]):
        for g in ops.monomials(2, 1):
            for i in range(1, 4):
                a = partial_compose(TreePolynomial.monomial(small), i, TreePolynomial.monomial(g), ops.gens)
                b = partial_compose(TreePolynomial.monomial(big), i, TreePolynomial.monomial(g), ops.gens)
                assert T.compare_path_lex(a.leading(rank), b.leading(rank), rank) == -1


def test_polynomial_text():
    p = TreePolynomial({T.parse_tree("m(m(1,2),3)"): Fraction(3, 2),
                        T.parse_tree("m(1,m(2,3))"): Fraction(-1)})
    assert p.to_text({"m": 0}) == "3/2*m(m(1,2),3) - m(1,m(2,3))"
    assert not (p - p)


def test_divisors_and_substitute():
    m = T.parse_tree("m(m(m(1,2),3),4)")
    ds = divisors(m)
    assert len(ds) == 2
    right = TreePolynomial.monomial(T.parse_tree("m(1,m(2,3))"))
    outs = {T.to_text(next(iter(substitute(m, d, right, GENS)))[0]) for d in ds}
    assert outs == {"m(m(1,m(2,3)),4)", "m(m(1,2),m(3,4))"}


def test_monomials_sorted_and_counted():
    ops = FreeOperad(GeneratorSet.of(Generator("m", 2)), "ns")
    assert [len(ops.monomials(n, n - 1)) for n in range(2, 7)] == [1, 2, 5, 14, 42]
    sh = FreeOperad(GeneratorSet.of(Generator("m", 2)), "shuffle")
    assert [len(sh.monomials(n, n - 1)) for n in range(2, 6)] == [1, 3, 15, 105]
