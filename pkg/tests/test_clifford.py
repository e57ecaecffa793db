"""Clifford construction against the word-rewriting oracle, plus the
structural comparison isomorphisms."""

import itertools
import random

import pytest

from cliffock.clifford import (
    build_clifford,
    clifford_multiply,
    element_from_json,
    include_vector,
    iso_direct_sum,
    iso_opposite,
    oracle_multiply,
)
from cliffock.errors import InvalidInput
from cliffock.hilbert import (
    AntiinvolutiveSpace,
    bilinear_form,
    fix_c2,
    fix_r2,
    random_vector,
    standard_space,
)
from cliffock.linalg import Matrix
from cliffock.scalars import Q, QI, Scalar
from cliffock.superalg import validate_superalgebra


def qs(x):
    return Scalar.of(x, Q)


def swap_space():
    # valid involution with b(e0, e0) = 0 and b(e0, e1) = 1
    return AntiinvolutiveSpace(Q, Matrix([[qs(0), qs(1)], [qs(1), qs(0)]], 2, Q))


SPACES = [
    standard_space(Q, 2),
    fix_r2()[0],
    swap_space(),
    fix_c2(),
    standard_space(QI, 3),
]


def test_zero_dimensional_space_gives_the_ground_field():
    cl = build_clifford(standard_space(Q, 0))
    assert cl.dim == 1
    assert cl.algebra.generators == ()
    assert validate_superalgebra(cl.algebra).ok


def test_line_generator_squares_to_minus_one():
    cl = build_clifford(standard_space(Q, 1))
    assert cl.dim == 2
    e = cl.monomial([0])
    assert e * e == -cl.unit_element()
    assert validate_superalgebra(cl.algebra).ok


def test_orthonormal_plane_products():
    cl = build_clifford(fix_c2())
    assert cl.dim == 4
    e0, e1 = cl.monomial([0]), cl.monomial([1])
    assert e0 * e1 == -(e1 * e0)
    top = e0 * e1
    assert top * top == -cl.unit_element()


def test_structure_table_matches_word_oracle():
    for space in SPACES:
        cl = build_clifford(space)
        for a, b in itertools.product(range(cl.dim), repeat=2):
            assert cl.algebra.table[a][b] == oracle_multiply(cl, a, b)


def test_defining_and_polarized_relations_on_random_vectors():
    for space in SPACES:
        cl = build_clifford(space)
        rng = random.Random(2024 + space.dim)
        one = cl.unit_element()
        for _ in range(50):
            v = random_vector(rng, space.dim, space.field)
            w = random_vector(rng, space.dim, space.field)
            x = include_vector(cl, v)
            y = include_vector(cl, w)
            assert x * x == one.scale(-bilinear_form(space, v, v))
            b_vw = bilinear_form(space, v, w)
            assert x * y + y * x == one.scale(-(b_vw + b_vw))


def test_validator_accepts_built_algebras():
    assert validate_superalgebra(build_clifford(fix_c2()).algebra).ok
    assert validate_superalgebra(build_clifford(swap_space()).algebra).ok


def test_unit_acts_trivially_and_parents_must_match():
    cl = build_clifford(standard_space(Q, 2))
    x = cl.element({0: qs(2), 3: qs(-1)})
    assert cl.unit_element() * x == x
    other = build_clifford(fix_r2()[0])
    with pytest.raises(InvalidInput):
        clifford_multiply(x, other.unit_element())


def test_degree_one_embedding_matches_gamma():
    cl = build_clifford(fix_c2())
    rng = random.Random(5)
    v = random_vector(rng, 2, QI)
    assert cl.gamma.apply(v) == cl.coordinates(include_vector(cl, v))


def test_opposite_comparison_on_a_line():
    iso = iso_opposite(standard_space(Q, 1))
    assert iso.matrix == Matrix.identity(2, Q)
    # flipped involution turns e^2 = -1 into e^2 = +1
    assert iso.source.table[1][1][0] == qs(1)


def test_opposite_comparison_on_fixture_spaces():
    for space in [standard_space(Q, 0), fix_r2()[0], swap_space(), fix_c2()]:
        iso = iso_opposite(space)  # verified exhaustively inside
        assert iso.matrix.is_invertible()


def test_direct_sum_against_zero_factor_is_identity():
    iso = iso_direct_sum(fix_c2(), standard_space(QI, 0))
    assert iso.matrix == Matrix.identity(4, QI)


def test_direct_sum_comparison_and_koszul_cancellation():
    a = fix_c2()
    b = standard_space(QI, 1)
    iso = iso_direct_sum(a, b)
    assert iso.source.dim == 8
    assert iso.target.dim == 8
    cl_sum = build_clifford(
        AntiinvolutiveSpace(QI, Matrix.identity(3, QI)))
    i_qi = Scalar.one(QI)
    zero = Scalar.zero(QI)
    v = include_vector(cl_sum, [i_qi, zero, zero])
    w = include_vector(cl_sum, [zero, zero, i_qi])
    s = v + w
    two = i_qi + i_qi
    assert s * s == cl_sum.unit_element().scale(-two)


def test_direct_sum_requires_common_field():
    with pytest.raises(InvalidInput):
        iso_direct_sum(fix_c2(), standard_space(Q, 1))


def test_element_serialization_round_trip():
    cl = build_clifford(fix_c2())
    x = cl.element({0: Scalar.of(2, QI), 3: Scalar.i()})
    assert element_from_json(cl, x.to_json()) == x
    with pytest.raises(InvalidInput):
        cl.index([0, 0])
