from __future__ import annotations

import random
from fractions import Fraction

import pytest

from operadkit.htt import (Bicomplex, Multicomplex, StructureError, check_dinfinity_relations,
                           second_page_agrees, staircase_bicomplex, transfer_multicomplex, zigzag_d2)
from operadkit.htt.multicomplex import random_bicomplex, square, staircase, tensor
from operadkit.linalg import ChainComplex, GradedSpace, LinearMap


def transferred(b: Bicomplex) -> Multicomplex:
    return transfer_multicomplex(b.to_multicomplex())


def image(m: Multicomplex, n: int, name: str) -> dict[str, Fraction]:
    sp = m.space
    return {sp.basis[k]: c for k, c in m.op(n).apply({sp.index(name): Fraction(1)}).items()}


def test_zero_horizontal_differential():
    b = Bicomplex(("a", "b"), ((0, 0), (0, -1)), {"a": {"b": Fraction(1)}}, {})
    t = transferred(b)
    assert t.space.dim == 0 and t.ops == {}


def test_two_columns_only_first_page():
    t = transferred(staircase(1))
    assert image(t, 1, "[y0]") == {"[z]": 1}
    assert all(t.op(n).is_zero() for n in range(2, 6))


def test_staircase_second_differential():
    b = staircase_bicomplex()
    m = b.to_multicomplex()
    assert check_dinfinity_relations(m) == []
    t = transfer_multicomplex(m)
    assert set(t.space.basis) == {"[z]", "[x]"}
    assert t.op(1).is_zero()
    assert image(t, 2, "[x]") == {"[z]": -1}
    assert check_dinfinity_relations(t, 6) == []
    assert second_page_agrees(b, t)
    kernel, images, d1_image = zigzag_d2(b)
    assert d1_image == [] and len(kernel) == 2


@pytest.mark.parametrize("length", [1, 2, 3, 4, 5])
def test_long_staircase(length):
    t = transferred(staircase(length))
    want = -1 if (length * (length - 1) // 2) % 2 else 1
    assert image(t, length, "[y0]") == {"[z]": want}
    assert [n for n in range(1, 7) if not t.op(n).is_zero()] == [length]


def test_scaled_staircase_multiplies_coefficients():
    t = transferred(staircase(3, coeffs=(Fraction(2), Fraction(-3), Fraction(5))))
    assert image(t, 3, "[y0]") == {"[z]": Fraction(30)}


def test_random_bicomplexes():
    rng = random.Random(17)
    for _ in range(15):
        b = random_bicomplex(rng)
        m = b.to_multicomplex()
        t = transfer_multicomplex(m)
        assert check_dinfinity_relations(t, 8) == []
        assert second_page_agrees(b, t)


def test_tensor_of_staircases_has_composite_operators():
    t = transferred(tensor(staircase(2, tag="a"), staircase(3, tag="b")))
    assert check_dinfinity_relations(t, 8) == []
    assert not t.op(2).is_zero() and not t.op(3).is_zero()


def test_acyclic_square():
    t = transferred(square((1, 1), "s"))
    assert t.space.dim == 0


def test_failing_relation_is_located():
    sp = GradedSpace.from_dict({0: ["a"], 1: ["b"], 2: ["c"]})
    c = ChainComplex(sp, LinearMap.zero(sp, sp, -1))
    d2 = LinearMap.from_images(sp, sp, 1, {"a": {"b": 1}, "b": {"c": 1}})
    assert check_dinfinity_relations(Multicomplex(c, {2: d2})) == [4]
    half = LinearMap.from_images(sp, sp, 1, {"a": {"b": 1}})
    assert check_dinfinity_relations(Multicomplex(c, {2: half})) == []


def test_flipped_third_operator_is_detected():
    rng = random.Random(0)
    for _ in range(200):
        t = transfer_multicomplex(random_bicomplex(rng, 3).to_multicomplex())
        if 3 not in t.ops:
            continue
        flipped = Multicomplex(t.complex, {**t.ops, 3: t.op(3).scale(-1)})
        if check_dinfinity_relations(flipped, 8):
            assert check_dinfinity_relations(t, 8) == []
            return
    raise AssertionError("no instance with a detectable d_3 sign")


def test_input_violations():
    with pytest.raises(StructureError, match="bidegree"):
        Bicomplex(("a", "b"), ((0, 0), (0, 0)), {"a": {"b": Fraction(1)}}, {})
    bad = Bicomplex(("a", "b", "c"), ((1, 0), (0, 0), (-1, 0)), {},
                    {"a": {"b": Fraction(1)}, "b": {"c": Fraction(1)}})
    with pytest.raises(StructureError, match="square to zero"):
        bad.to_multicomplex()
    sp = GradedSpace.from_dict({0: ["a"]})
    zero = LinearMap.zero(sp, sp, -1)
    with pytest.raises(StructureError, match="d_0|start"):
        Multicomplex(ChainComplex(sp, zero), {0: zero})


def test_json_round_trip():
    b = staircase_bicomplex()
    assert Bicomplex.from_json(b.to_json()) == b
    assert transferred(b).to_json()["operators"] == {"2": {"[x]": {"[z]": "-1"}}}
