from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadkit import trees as T
from operadkit.trees import Node, TreeError


def catalan(n: int) -> int:
    c = [1]
    for k in range(1, n + 1):
        c.append(sum(c[j] * c[k - 1 - j] for j in range(k)))
    return c[n]


def test_small_planar_counts():
    assert len(T.enumerate_planar_trees(4, binary_only=True)) == 5
    assert len(T.enumerate_planar_trees(4, 2)) == 5
    assert len(T.enumerate_planar_trees(2, binary_only=True)) == 1
    assert len(T.enumerate_planar_trees(6, binary_only=True)) == 42
    assert len(T.enumerate_planar_trees(5, 2)) == 9


def test_catalan_through_eight():
    for n in range(1, 9):
        assert len(T.enumerate_planar_trees(n, binary_only=True)) == catalan(n - 1)


def test_arity_five_three_vertices_is_21():
    # the associahedron K_5 has 21 edges; brute force agrees
    assert len(T.enumerate_planar_trees(5, 3)) == 21
    brute = {T.strip(t) for t in T.enumerate_planar_trees(5) if T.vertex_count(t) == 3}
    assert len(brute) == 21


def test_incompatible_vertex_count_is_empty():
    assert T.enumerate_planar_trees(4, 2, binary_only=True) == []
    assert T.enumerate_planar_trees(3, 5) == []


def test_enumeration_is_duplicate_free_and_deterministic():
    a = T.enumerate_planar_trees(6)
    assert len(set(a)) == len(a)
    assert a == T.enumerate_planar_trees(6)
    # Schroeder-Hipparchus numbers count all planar trees
    assert [len(T.enumerate_planar_trees(n)) for n in range(1, 7)] == [1, 1, 3, 11, 45, 197]


def test_graft():
    c = T.corolla(2)
    left = T.graft(c, 1, c)
    right = T.graft(c, 2, c)
    assert T.to_text(left) == "*(*(1,2),3)"
    assert T.to_text(right) == "*(1,*(2,3))"
    g = T.graft(left, 3, c)
    assert T.arity(g) == 4 and T.vertex_count(g) == 3
    assert T.strip(g) in {T.strip(t) for t in T.enumerate_planar_trees(4, binary_only=True)}
    with pytest.raises(TreeError):
        T.graft(c, 3, c)


def test_graft_sequential_parallel():
    trees = T.enumerate_planar_trees(3) + T.enumerate_planar_trees(2)
    for a, b, c in itertools.product(trees, repeat=3):
        na, nb = T.arity(a), T.arity(b)
        for i in range(1, na + 1):
            for j in range(1, nb + 1):
                assert T.graft(T.graft(a, i, b), i - 1 + j, c) == T.graft(a, i, T.graft(b, j, c))
            for k in range(i + 1, na + 1):
                lhs = T.graft(T.graft(a, i, b), k - 1 + nb, c)
                rhs = T.graft(T.graft(a, k, c), i, b)
                assert lhs == rhs


def test_shuffle_trees_small():
    three = T.enumerate_shuffle_trees(3, [2, 2])
    assert sorted(T.to_text(t) for t in three) == ["*(*(1,2),3)", "*(*(1,3),2)", "*(1,*(2,3))"]
    assert len(T.enumerate_shuffle_trees(2, [2])) == 1
    assert [t for t in three if T.is_mr_tree(t)] != []
    assert len([t for t in three if T.is_mr_tree(t)]) == 2
    assert T.enumerate_shuffle_trees(3, [2]) == []


def test_shuffle_trees_against_brute_force():
    for n in range(2, 6):
        for k in range(1, n):
            for prof in _profiles(n, k):
                fast = T.enumerate_shuffle_trees(n, prof)
                slow = T.brute_force_shuffle_trees(n, prof)
                assert set(fast) == set(slow) and len(fast) == len(slow)
                assert all(T.is_shuffle_tree(t) for t in fast)


def _profiles(n, k):
    out = set()
    for combo in itertools.combinations_with_replacement(range(2, n + 1), k):
        if sum(a - 1 for a in combo) + 1 == n:
            out.add(combo)
    return sorted(out)


def test_binary_shuffle_counts():
    # (2n-3)!! binary shuffle trees with n leaves
    assert [len(T.enumerate_shuffle_trees(n, [2] * (n - 1))) for n in range(2, 6)] == [1, 3, 15, 105]


def test_mr_counts_are_factorials():
    for n in range(2, 7):
        mr = [t for t in T.enumerate_shuffle_trees(n, [2] * (n - 1)) if T.is_mr_tree(t)]
        assert len(mr) == [1, 1, 2, 6, 24, 120][n - 1]


def test_rooted_trees():
    # rooted trees with n labelled leaves and all vertices of arity >= 2
    assert [len(T.enumerate_rooted_trees(n)) for n in range(1, 6)] == [1, 1, 4, 26, 236]
    for t in T.enumerate_rooted_trees(4):
        assert T.is_shuffle_tree(t) and T.rooted_canonical(t) == t


def test_path_lex_weight_two_table():
    rank = {"a": 0, "b": 1}
    m = lambda g, *c: Node(g, c)
    right = m("a", 1, m("a", 2, 3))
    left = m("a", m("a", 1, 2), 3)
    assert T.compare_path_lex(right, left, rank) == -1
    assert T.compare_path_lex(left, left, rank) == 0
    with pytest.raises(TreeError):
        T.compare_path_lex(left, m("a", 1, 2), rank)
    # Com shuffle order: right comb < (13)2 < (12)3
    t3 = m("a", 1, m("a", 2, 3))
    t2 = m("a", m("a", 1, 3), 2)
    t1 = m("a", m("a", 1, 2), 3)
    assert sorted([t1, t2, t3], key=lambda t: T.path_lex_key(t, rank)) == [t3, t2, t1]


def _decorated(n, names):
    out = []
    for s in T.enumerate_planar_trees(n, binary_only=True):
        vs = T.vertices(s)
        for deco in itertools.product(names, repeat=len(vs)):
            it = iter(deco)

            def go(t):
                if isinstance(t, int):
                    return t
                g = next(it)
                return Node(g, tuple(go(c) for c in t.children))

            out.append(go(s))
    return out


def test_path_lex_is_total_order():
    rank = {"a": 0, "b": 1}
    ms = _decorated(4, "ab")
    keys = [T.path_lex_key(t, rank) for t in ms]
    assert len(set(keys)) == len(ms)
    for a, b in itertools.combinations(ms, 2):
        assert T.compare_path_lex(a, b, rank) == -T.compare_path_lex(b, a, rank) != 0


def test_path_lex_suitable_under_grafting():
    rank = {"a": 0, "b": 1}
    for n in (2, 3):
        ms = sorted(_decorated(n, "ab"), key=lambda t: T.path_lex_key(t, rank))
        for small, big in zip(ms, ms[1:]):
            for other in _decorated(2, "ab"):
                for i in range(1, n + 1):
                    a, b = T.graft(small, i, other), T.graft(big, i, other)
                    assert T.compare_path_lex(a, b, rank) == -1
                for i in range(1, 3):
                    a, b = T.graft(other, i, small), T.graft(other, i, big)
                    assert T.compare_path_lex(a, b, rank) == -1


@given(st.sampled_from(T.enumerate_planar_trees(5)))
def test_text_round_trip(t):
    assert T.parse_tree(T.to_text(t)) == t


def test_parse_errors():
    for bad in ("m(1,", "m(1 2)", "m(1,2))", ""):
        with pytest.raises(TreeError):
            T.parse_tree(bad)


def test_dot_export():
    dot = T.to_dot(T.parse_tree("m(m(1,2),3)"))
    assert dot.startswith("digraph") and dot.count("->") == 5
