"""Fock modules: creation/annihilation normalization, module axiom,
bimodule structure on correspondences."""

import random

import pytest

from cliffock.errors import InternalError, InvalidInput
from cliffock.fock import build_fock, fock_act, fock_bimodule
from cliffock.hilbert import (
    LagrangianSubspace,
    bilinear_form,
    correspondence,
    fix_c1,
    fix_c2,
    fix_lplus,
    identity_corr,
    random_correspondence,
    random_lagrangian,
    random_scalar,
    standard_space,
)
from cliffock.linalg import Matrix, Subspace
from cliffock.scalars import QI, Scalar
from cliffock.superalg import invertibility_check, validate_bimodule


I = Scalar.i()
ONE = Scalar.one(QI)
ZERO = Scalar.zero(QI)


def test_plus_line_creation_and_annihilation_values():
    fock = build_fock(fix_lplus())
    assert fock.dim == 2
    assert fock.y_rows == [[ONE, -I]]

    created = fock_act(fock, [ONE, -I], fock.vacuum)
    assert created == [ZERO, ONE]

    # a((1,i)) picks up b((1,i),(1,-i)) = 2, scaled by the normalization -2
    minus_four = Scalar.of(-4, QI)
    assert fock_act(fock, [ONE, I], created) == [minus_four, ZERO]

    # (1,i) spans L itself, so it only annihilates
    assert fock_act(fock, [ONE, I], fock.vacuum) == fock.zero_element()


def test_annihilation_kills_the_vacuum():
    space = standard_space(QI, 4)
    lag = random_lagrangian(space, 9)
    fock = build_fock(lag)
    assert fock.dim == 4
    rng = random.Random(31)
    for _ in range(10):
        v = [ZERO] * 4
        for r in range(lag.dim):
            c = random_scalar(rng, QI)
            v = [x + c * y for x, y in zip(v, lag.sub.rows[r])]
        out = fock_act(fock, v, fock.vacuum)
        assert out == fock.zero_element()


def test_creation_squares_to_zero_on_the_top_wedge():
    space = standard_space(QI, 4)
    fock = build_fock(random_lagrangian(space, 9))
    top = fock.zero_element()
    top[3] = ONE
    for y in fock.y_rows:
        assert fock_act(fock, y, top) == fock.zero_element()


def test_module_axiom_for_random_ambient_vectors():
    spaces_and_lags = [
        (fix_c2(), fix_lplus()),
        (standard_space(QI, 4), random_lagrangian(standard_space(QI, 4), 2)),
    ]
    for space, lag in spaces_and_lags:
        fock = build_fock(lag)
        ident = Matrix.identity(fock.dim, QI)
        rng = random.Random(77)
        for _ in range(50):
            v = [random_scalar(rng, QI) for _ in range(space.dim)]
            m = fock.rho(v)
            assert m @ m == ident.scale(-bilinear_form(space, v, v))


def test_zero_vector_acts_as_zero():
    fock = build_fock(fix_lplus())
    elem = [ONE, Scalar.of(3, QI)]
    assert fock_act(fock, [ZERO, ZERO], elem) == fock.zero_element()
    with pytest.raises(InvalidInput):
        fock_act(fock, [ONE], elem)


def test_wrong_normalization_is_caught():
    with pytest.raises(InternalError):
        build_fock(fix_lplus(), _kappa=1)
    fock = build_fock(fix_lplus(), _kappa=-2)
    assert fock.kappa == Scalar.of(-2, QI)


def test_non_lagrangian_input_is_rejected():
    bad = LagrangianSubspace(fix_c2(), Subspace(2, QI, [[ONE, ZERO]]))
    with pytest.raises(InvalidInput):
        build_fock(bad)


def test_ambient_clifford_module_validates():
    fock = build_fock(fix_lplus())
    assert validate_bimodule(fock.module).ok


def test_diagonal_bimodule_on_c1():
    mod = fock_bimodule(identity_corr(fix_c1()))
    assert mod.dim == 2
    assert validate_bimodule(mod).ok


def test_bimodule_on_random_correspondences():
    for seed in (3, 4):
        corr = random_correspondence(fix_c2(), fix_c2(), seed)
        mod = fock_bimodule(corr)
        assert mod.dim == 4
        assert validate_bimodule(mod).ok


def test_right_action_on_the_vacuum_sign():
    corr = random_correspondence(fix_c1(), fix_c1(), 5)
    mod = fock_bimodule(corr)
    fock = build_fock(corr.lag)
    u = [ONE, ZERO]  # source basis vector embedded as (u, 0)
    got = mod.right(1).apply(fock.vacuum)
    direct = fock.rho(u).apply(fock.vacuum)
    assert got == [-x for x in direct]


def test_bimodules_are_invertible():
    cases = [identity_corr(fix_c1()),
             random_correspondence(fix_c1(), fix_c1(), 8),
             random_correspondence(fix_c2(), fix_c2(), 11)]
    zero_space = standard_space(QI, 0)
    cases.append(correspondence(zero_space, fix_c2(), [[ONE, I]]))
    for corr in cases:
        rep = invertibility_check(fock_bimodule(corr))
        assert rep.invertible, rep.details


def test_wrong_normalization_breaks_invertibility_path_too():
    # the bimodule constructor itself trips on the bad Clifford relation
    with pytest.raises(InternalError):
        fock_bimodule(identity_corr(fix_c1()), _kappa=1)


def test_element_serialization_round_trip():
    space = standard_space(QI, 4)
    fock = build_fock(random_lagrangian(space, 2))
    vec = fock.zero_element()
    vec[0] = Scalar.of("3/2", QI)
    vec[3] = I
    assert fock.element_from_json(fock.element_to_json(vec)) == vec
    with pytest.raises(InvalidInput):
        fock.element_from_json([{"subset": [0, 0], "coeff": "1"}])
