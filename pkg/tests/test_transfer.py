from __future__ import annotations

import random
from fractions import Fraction

import pytest

from operadkit.htt import (AInfinityMorphism, AInfinityStructure, DgAlgebra, MasseyError,
                           StructureError, antisymmetrize_linfinity, build_iota_morphism,
                           check_ainfinity_relations, check_linfinity_relations,
                           check_morphism_relations, check_shuffle_vanishing, compose_morphisms,
                           formality_report, massey_triple, transfer_ainfinity,
                           transfer_with_morphism, tree_sum_transfer)
from operadkit.htt.examples import (ainfinity_with_cone, borromean_dga, free_tensor_truncation,
                                    heisenberg_cdga, random_commutative_dga, random_dga, random_dgas)
from operadkit.htt.linfinity import is_skew_symmetric
from operadkit.htt.multilinear import MultilinearMap, basis_vector
from operadkit.htt.structures import morphism_equal
from operadkit.linalg import ChainComplex, GradedSpace, LinearMap


def test_random_dgas_transfer_and_morphism():
    for alg in random_dgas(11, 12):
        assert alg.space.dim <= 6
        s, iota, _ = transfer_with_morphism(alg, max_arity=5)
        assert check_ainfinity_relations(s, 5).passed
        assert check_morphism_relations(iota, 4).passed


def test_tree_sum_matches_recursion():
    rng = random.Random(3)
    for _ in range(5):
        alg = random_dga(rng)
        rec = transfer_ainfinity(alg, max_arity=5)
        trees = tree_sum_transfer(alg, max_arity=5)
        for n in range(2, 6):
            assert rec.op(n) == trees.op(n)


def test_borromean_higher_product():
    s = transfer_ainfinity(borromean_dga(), max_arity=5)
    H = s.space
    x, y, z = (H.index(f"[{n}]") for n in "xyz")
    assert s.op(3)(basis_vector(x), basis_vector(y), basis_vector(z))
    assert formality_report(s).nonvanishing[0] == 3


def test_formal_input_stays_strict():
    alg = free_tensor_truncation()
    s = transfer_ainfinity(alg, max_arity=5)
    assert s.space.dim == alg.space.dim
    assert all(s.op(n).is_zero() for n in range(3, 6))
    assert formality_report(s).vanishes
    assert "formal through arity 5" in formality_report(s).summary()


def test_non_associative_product_fails_in_arity_three():
    sp = GradedSpace.from_dict({0: ["e", "f"]})
    c = ChainComplex(sp, LinearMap.zero(sp, sp, -1))
    e, f = sp.index("e"), sp.index("f")
    m = MultilinearMap(sp, sp, 2, 0, {(e, e): {f: Fraction(1)}, (e, f): {e: Fraction(1)}})
    report = check_ainfinity_relations(AInfinityStructure(c, {2: m}), 4)
    assert not report.passed and report.failed_arity == 3
    assert report.witness == ("e", "e", "e")
    with pytest.raises(StructureError, match="associative"):
        DgAlgebra(c, m)


def test_derivation_failure_is_reported():
    sp = GradedSpace.from_dict({0: ["e"], -1: ["t"]})
    d = LinearMap.from_images(sp, sp, -1, {"e": {"t": 1}})
    e = sp.index("e")
    unit_square = MultilinearMap(sp, sp, 2, 0, {(e, e): {e: Fraction(1)}})
    with pytest.raises(StructureError, match="derivation"):
        DgAlgebra(ChainComplex(sp, d), unit_square)


def test_morphism_composition_units_and_associativity():
    alg = random_dga(random.Random(8))
    s, iota, _ = transfer_with_morphism(alg, max_arity=4)
    ident_s = AInfinityMorphism.identity(s)
    ident_a = AInfinityMorphism.identity(iota.target)
    assert morphism_equal(compose_morphisms(iota, ident_s, 4), iota, 4)
    assert morphism_equal(compose_morphisms(ident_a, iota, 4), iota, 4)
    twice = compose_morphisms(ident_a, compose_morphisms(iota, ident_s, 4), 4)
    assert morphism_equal(twice, compose_morphisms(compose_morphisms(ident_a, iota, 4), ident_s, 4), 4)
    assert check_morphism_relations(compose_morphisms(ident_a, iota, 4), 4).passed


def test_broken_morphism_is_caught():
    alg = random_dga(random.Random(9))
    iota = build_iota_morphism(alg, max_arity=4)
    if 2 not in iota.components:
        pytest.skip("no second component to perturb")
    comps = dict(iota.components)
    comps[2] = comps[2].scale(2)
    assert not check_morphism_relations(AInfinityMorphism(iota.source, iota.target, comps), 4).passed


def test_cone_transfer_recovers_structure():
    rng = random.Random(12)
    base = transfer_ainfinity(borromean_dga(), max_arity=4)
    big = ainfinity_with_cone(base, rng)
    assert check_ainfinity_relations(big, 4).passed
    s = transfer_ainfinity(big, max_arity=4)
    assert check_ainfinity_relations(s, 4).passed
    assert s.space.dim == base.space.dim


def test_massey_borromean():
    res = massey_triple(borromean_dga(), "x", "y", "z")
    assert res.representative and res.mu3
    assert res.verdict
    assert res.indeterminacy == () and res.indeterminacy_dimension(5) == 0


def test_massey_precondition():
    with pytest.raises(MasseyError, match="nonzero in homology"):
        massey_triple(free_tensor_truncation(), "x", "y", "x")
    with pytest.raises(MasseyError, match="unknown homology class"):
        massey_triple(borromean_dga(), "x", "y", "q")


def test_shuffle_vanishing_on_commutative_inputs():
    rng = random.Random(21)
    for _ in range(4):
        s = transfer_ainfinity(random_commutative_dga(rng), max_arity=5)
        assert check_shuffle_vanishing(s, 5).passed
    assert check_shuffle_vanishing(transfer_ainfinity(heisenberg_cdga(), max_arity=5), 5).passed


def test_shuffle_vanishing_detects_noncommutative():
    report = check_shuffle_vanishing(transfer_ainfinity(free_tensor_truncation(), max_arity=3), 3)
    assert not report.passed and report.failed_arity == 2


def test_linfinity_from_transfer():
    rng = random.Random(31)
    for _ in range(3):
        lie = antisymmetrize_linfinity(transfer_ainfinity(random_dga(rng), max_arity=4))
        assert all(is_skew_symmetric(m) for m in lie.brackets.values())
        assert check_linfinity_relations(lie, 4).passed


def test_linfinity_detects_broken_bracket():
    rng = random.Random(5)
    sp = GradedSpace.from_dict({0: ["a", "b", "c"]})
    c = ChainComplex(sp, LinearMap.zero(sp, sp, -1))
    table = {(i, j): {k: Fraction(rng.randint(-2, 2)) for k in range(3)}
             for i in range(3) for j in range(3)}
    lie = antisymmetrize_linfinity(AInfinityStructure(c, {2: MultilinearMap(sp, sp, 2, 0, table)}))
    report = check_linfinity_relations(lie, 3)
    assert not report.passed and report.failed_arity == 3


def test_max_arity_bounds():
    with pytest.raises(StructureError):
        transfer_ainfinity(borromean_dga(), max_arity=9)


def test_dga_json_round_trip():
    alg = borromean_dga()
    assert DgAlgebra.from_json(alg.to_json()) == alg


def test_iota_first_component_is_i_and_quasi_isomorphism():
    from operadkit.htt.structures import induced_on_homology

    alg = random_dga(random.Random(41))
    s, iota, r = transfer_with_morphism(alg, max_arity=4)
    assert iota.component(1) == MultilinearMap.from_linear(r.i)
    assert induced_on_homology(iota.component(1), s.complex, alg.complex)


def test_formal_input_has_strict_iota():
    iota = build_iota_morphism(free_tensor_truncation(), max_arity=4)
    assert all(iota.component(n).is_zero() for n in range(2, 5))


def test_strict_morphisms_compose_strictly():
    alg = free_tensor_truncation()
    s = alg.as_ainfinity()
    sp = s.space
    swap = LinearMap.from_images(sp, sp, 0, {"x": {"y": 1}, "y": {"x": 1}})
    f = AInfinityMorphism.strict(s, s, LinearMap.identity(sp))
    g = AInfinityMorphism.strict(s, s, swap)
    gf = compose_morphisms(g, f, 4)
    assert gf.component(1) == MultilinearMap.from_linear(swap)
    assert all(gf.component(n).is_zero() for n in range(2, 5))


def test_massey_with_zero_products():
    sp = GradedSpace.from_dict({-1: ["x", "y", "z"]})
    alg = DgAlgebra(ChainComplex(sp, LinearMap.zero(sp, sp, -1)), MultilinearMap(sp, sp, 2, 0, {}))
    res = massey_triple(alg, "x", "y", "z")
    assert res.representative == {} and res.mu3 == {} and res.verdict


def test_antisymmetrization_small_cases():
    alg = free_tensor_truncation()
    lie = antisymmetrize_linfinity(alg.as_ainfinity())
    sp = lie.space
    x, y = sp.index("x"), sp.index("y")
    bracket = lie.bracket(2)(basis_vector(x), basis_vector(y))
    assert bracket == {sp.index("xy"): 1, sp.index("yx"): -1}
    com = antisymmetrize_linfinity(transfer_ainfinity(heisenberg_cdga(), max_arity=2))
    even = [k for k, d in enumerate(com.space.degrees) if d % 2 == 0]
    assert all(not com.bracket(2).on_basis((a, b)) for a in even for b in even)


def test_zero_structure_passes_shuffle_check():
    sp = GradedSpace.from_dict({0: ["a", "b"]})
    s = AInfinityStructure(ChainComplex(sp, LinearMap.zero(sp, sp, -1)), {})
    assert check_shuffle_vanishing(s, 5).passed
