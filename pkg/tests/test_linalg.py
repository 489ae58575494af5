from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from operadkit.linalg import (ChainComplex, GradedSpace, LinearAlgebraError, LinearMap,
                              deformation_retract, fmt_rational, homology_decomposition, rank,
                              rational)

from conftest import random_complex


def test_rational_parsing_and_format():
    assert rational("3/6") == Fraction(1, 2)
    assert rational("-4") == -4
    assert fmt_rational(Fraction(-6, 4)) == "-3/2"
    assert fmt_rational(Fraction(5)) == "5"
    for bad in ("1/0", "x", 1.5):
        with pytest.raises(LinearAlgebraError):
            rational(bad)


def test_duplicate_names_rejected():
    with pytest.raises(LinearAlgebraError):
        GradedSpace.from_dict({0: ["a"], 1: ["a"]})


def test_d_squared_checked():
    sp = GradedSpace.from_dict({0: ["a"], 1: ["b"], 2: ["c"]})
    d = LinearMap.from_images(sp, sp, -1, {"c": {"b": 1}, "b": {"a": 1}})
    with pytest.raises(LinearAlgebraError):
        ChainComplex(sp, d)


def test_acyclic_two_term():
    sp = GradedSpace.from_dict({1: ["x"], 0: ["y"]})
    c = ChainComplex(sp, LinearMap.from_images(sp, sp, -1, {"x": {"y": 1}}))
    split = homology_decomposition(c)
    assert all(not s.homology for s in split.values())
    assert len(split[0].boundaries) == 1
    r = deformation_retract(c)
    assert r.small.space.dim == 0
    assert r.h.apply({sp.index("y"): Fraction(1)}) == {sp.index("x"): 1}


def test_zero_differential():
    sp = GradedSpace.from_dict({0: ["a", "b", "c"]})
    c = ChainComplex.zero_differential(sp)
    split = homology_decomposition(c)
    assert len(split[0].homology) == 3 and not split[0].boundaries
    r = deformation_retract(c)
    assert r.small.space.basis == ("[a]", "[b]", "[c]")
    assert (r.p @ r.i) == LinearMap.identity(r.small.space)
    assert r.h.is_zero()


def test_rank_one_four_dim():
    sp = GradedSpace.from_dict({0: ["a", "b"], 1: ["c", "d"]})
    c = ChainComplex(sp, LinearMap.from_images(sp, sp, -1, {"c": {"a": 2, "b": -1}}))
    r = deformation_retract(c)
    assert r.small.space.dim == 4 - 2 * 1


@given(st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_random_retract_identities(seed):
    rng = random.Random(seed)
    dims = {d: rng.randint(0, 3) for d in range(-1, 3)}
    c = random_complex(rng, dims)
    split = homology_decomposition(c)
    for deg, s in split.items():
        below = split.get(deg - 1)
        lifts_below = len(s.lifts)
        assert len(s.boundaries) + len(s.homology) + lifts_below == c.space.component_dim(deg)
        if below is not None:
            assert len(s.lifts) == len(below.boundaries)
    r = deformation_retract(c)
    assert r.failures() == []
    # dim H = dim A - 2 rank d (rank-nullity oracle)
    assert r.small.space.dim == c.space.dim - 2 * rank([list(row) for row in c.differential.matrix], c.space.dim)


def test_splitting_reassembles_differential(rng):
    c = random_complex(rng, {0: 3, 1: 3, 2: 2})
    split = homology_decomposition(c)
    for s in split.values():
        for lift, bnd in zip(s.lifts, split[s.degree - 1].boundaries if s.degree - 1 in split else []):
            img = c.differential.apply({k: x for k, x in enumerate(lift) if x})
            assert img == {k: x for k, x in enumerate(bnd) if x}


def test_json_round_trip(rng, tmp_path):
    c = random_complex(rng, {0: 2, 1: 2})
    path = tmp_path / "c.json"
    path.write_text(json.dumps(c.to_json()))
    from operadkit.linalg import load_complex

    assert load_complex(path) == c
