from __future__ import annotations

import itertools

import pytest

from bgdc.colour import (
    StructureConstants,
    abelian,
    builtin_su2,
    builtin_su3,
    check_gen_jacobi_colour,
    colour_factor,
    colour_factor_chain,
    random_algebra,
    sc_from_json,
    sc_to_json,
    validate_jacobi,
)
from bgdc.scalars import FLOAT, GaussianRational as G
from bgdc.words import Node, left_bracketing


def test_su2_levi_civita():
    sc = builtin_su2()
    assert sc(1, 2, 3) == 1
    assert sc(2, 1, 3) == -1
    assert all(sc(1, 1, c) == 0 for c in range(1, 4))


@pytest.mark.parametrize("sc", [builtin_su2(), builtin_su3(), abelian(1), random_algebra(0), random_algebra(7)], ids=lambda s: s.name)
def test_jacobi_holds(sc):
    assert validate_jacobi(sc).passed


def test_perturbed_su2_fails_with_quadruple():
    # f_12^3 := 2 with f_21^3 left at -1: at (a,b,c,d)=(1,1,2,2) the cyclic sum is
    # f_12^3 f_31^2 + f_21^3 f_31^2 = 2 - 1 = 1
    f = [[[sc for sc in row] for row in plane] for plane in builtin_su2().f]
    f[0][1][2] = G(2)
    rep = validate_jacobi(StructureConstants(3, f))
    assert not rep.passed
    assert rep.details["jacobi_violation"] == (1, 1, 2, 2)
    assert rep.details["antisymmetry_violation"] == (1, 2, 3)


def test_random_algebra_is_not_antisymmetric_in_upper_index():
    # non-semisimple, so lowering the index with a Killing form is not available
    sc = random_algebra(0)
    assert any(sc(a, b, c) != -sc(a, c, b) for a, b, c in itertools.product(range(1, 6), repeat=3))


def test_su2_colour_factors():
    sc = builtin_su2()
    assign = {1: 1, 2: 2, 3: 3}
    assert colour_factor(sc, assign, Node(1, 2)) == (0, 0, G(0, -2))
    assert colour_factor(sc, assign, Node(2, 1)) == (0, 0, G(0, 2))
    assert colour_factor(sc, assign, 1) == (1, 0, 0)
    with pytest.raises(KeyError):
        colour_factor(sc, {1: 1}, Node(1, 2))
    with pytest.raises(ValueError):
        colour_factor(sc, assign, Node(1, 1))


@pytest.mark.parametrize("seed", [0, 3])
def test_recursive_factor_matches_loop(seed):
    sc = random_algebra(seed)
    assign = {p: (p * 2) % 5 + 1 for p in range(1, 7)}
    for P in itertools.permutations(range(1, 6)):
        assert colour_factor(sc, assign, left_bracketing(P)) == colour_factor_chain(sc, assign, P)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_generalized_jacobi_on_colour_factors(k):
    sc = random_algebra(1)
    rep = check_gen_jacobi_colour(sc, lambda p: p % 5 + 1, k, range(1, k + 1))
    assert rep.passed and rep.checks > 0


def test_generalized_jacobi_detects_broken_algebra():
    f = [[[x for x in row] for row in plane] for plane in builtin_su2().f]
    f[0][1][2] = G(2)
    broken = StructureConstants(3, f)
    rep = check_gen_jacobi_colour(broken, {1: 1, 2: 2, 3: 1}, 2, [1, 2, 3])
    assert not rep.passed


def test_json_round_trip_and_float():
    sc = random_algebra(2)
    assert sc_from_json(sc_to_json(sc)).f == sc.f
    flt = sc_from_json(sc_to_json(sc), FLOAT)
    assert flt.field is FLOAT and abs(flt(1, 2, 3) - complex(sc(1, 2, 3))) < 1e-12
    assert builtin_su2(FLOAT).field is FLOAT


def test_basis_bounds():
    with pytest.raises(ValueError):
        builtin_su2().basis(4)
