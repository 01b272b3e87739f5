from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from rational_white_noise.errors import (
    BasisMismatchError,
    DomainError,
    ShapeMismatchError,
)
from rational_white_noise.fueter.general import (
    QPolynomial3,
    QPolynomial4,
    cauchy_fueter_system,
    ck_extend,
    ck_matrix_product,
    ck_product,
    ck_von_neumann_inv,
    dirac_apply,
    fueter_monomial,
    fueter_variable,
    from_fueter_series,
    is_hyperholomorphic,
    matrix_from_json,
    matrix_to_json,
    monomial_series_polynomial,
    restrict,
)
from rational_white_noise.fueter.quaternion import E0, E1, E2, E3, Quaternion
from rational_white_noise.realization.general import Realization, to_series
from rational_white_noise.series.general import Basis, relabel
from rational_white_noise.series.rings import QUATERNION

small = st.integers(min_value=-3, max_value=3)
quaternions = st.builds(Quaternion, small, small, small, small)
exponents = st.tuples(*(st.integers(min_value=0, max_value=2),) * 3)
polynomials = st.dictionaries(exponents, quaternions, max_size=6).map(QPolynomial3)
triples = st.tuples(*(st.integers(min_value=0, max_value=3),) * 3)


def test_polynomial_basics():
    p = QPolynomial3({(2, 1, 0): E1, (0, 0, 0): [1, 0, 0, 0]})
    assert p.degree == 3
    assert p.derivative(1) == QPolynomial3({(1, 1, 0): Quaternion(0, 2)})
    assert p.derivative(3).is_zero()
    assert QPolynomial3({(1, 0, 0): E1, (0, 1, 0): E0 * 0}).terms.keys() == {
        (1, 0, 0)
    }
    assert p.evaluate([1, 2, 5]) == Quaternion(1, 2)
    assert QPolynomial3.from_json(p.to_json()) == p
    with pytest.raises(DomainError):
        p.derivative(0)
    with pytest.raises(DomainError):
        QPolynomial3({(1, 0): E0})
    with pytest.raises(DomainError):
        p.evaluate([1, 2])
    with pytest.raises(ShapeMismatchError):
        p + QPolynomial4()


def test_fueter_variables():
    zeta = fueter_variable(1)
    assert zeta == QPolynomial4({(0, 1, 0, 0): E0, (1, 0, 0, 0): -E1})
    assert zeta.evaluate([1, 2, 0, 0]) == Quaternion(2, -1)
    assert is_hyperholomorphic(zeta)
    assert not is_hyperholomorphic(QPolynomial4.variable(1))
    with pytest.raises(DomainError):
        fueter_variable(0)


def test_cauchy_fueter_system():
    real, first, second, third = cauchy_fueter_system(QPolynomial4.variable(1))
    assert real == {} and second == {} and third == {}
    assert first == {(0, 0, 0, 0): 1}
    assert all(
        component == {} for component in cauchy_fueter_system(fueter_variable(2))
    )


@settings(max_examples=100, deadline=None)
@given(polynomials)
def test_extension_is_hyperholomorphic(p):
    extended = ck_extend(p)
    assert dirac_apply(extended).is_zero()
    assert restrict(extended) == p
    assert extended.degree == p.degree


def test_extension_takes_three_variables():
    with pytest.raises(ShapeMismatchError):
        ck_extend(QPolynomial4.variable(0))


def test_symmetrized_product():
    z1, z2 = fueter_variable(1), fueter_variable(2)
    symmetrized = (z1 * z2 + z2 * z1) * Fraction(1, 2)
    assert symmetrized == fueter_monomial((1, 1, 0))
    assert z1 * z2 != z2 * z1
    assert not is_hyperholomorphic(z1 * z2)
    assert z1 * z1 == fueter_monomial((2, 0, 0))


@settings(max_examples=50, deadline=None)
@given(triples, triples)
def test_monomials_multiply_under_ck_product(alpha, beta):
    total = tuple(a + b for a, b in zip(alpha, beta))
    assert ck_product(fueter_monomial(alpha), fueter_monomial(beta)) == (
        fueter_monomial(total)
    )


def test_fueter_monomial_rejects_bad_exponents():
    with pytest.raises(DomainError):
        fueter_monomial((1, 2))
    with pytest.raises(DomainError):
        fueter_monomial((1, -1, 0))


def test_ck_matrix_product():
    z1, z2 = fueter_variable(1), fueter_variable(2)
    one = QPolynomial4.constant(E0)
    product = ck_matrix_product([[z1, one]], [[z2], [z1]])
    assert product == [[fueter_monomial((1, 1, 0)) + z1]]
    assert ck_matrix_product(z1, z2) == [[fueter_monomial((1, 1, 0))]]
    with pytest.raises(ShapeMismatchError):
        ck_matrix_product([[z1, one]], [[z2, z1]])


@pytest.mark.parametrize('degree', [0, 1, 3, 5])
def test_von_neumann_inverse(degree):
    z1 = fueter_variable(1)
    one = QPolynomial4.constant(E0)
    inverse = ck_von_neumann_inv([[z1]], degree)
    assert inverse[0][0] == ck_extend(
        QPolynomial3({(n, 0, 0): E0 for n in range(degree + 1)})
    )
    product = ck_matrix_product([[one - z1]], inverse)
    assert product[0][0] == one - fueter_monomial((degree + 1, 0, 0))


def test_matrix_von_neumann_inverse():
    z1, z2 = fueter_variable(1), fueter_variable(2)
    zero = QPolynomial4()
    one = QPolynomial4.constant(E0)
    g = [[zero, z1], [z2 * E3, zero]]
    inverse = ck_von_neumann_inv(g, 4)
    identity_minus_g = [[one, -z1], [z2 * -E3, one]]
    product = ck_matrix_product(identity_minus_g, inverse)
    for i, row in enumerate(product):
        for j, entry in enumerate(row):
            assert restrict(entry).truncate(4) == (
                QPolynomial3.constant(E0) if i == j else QPolynomial3()
            )


def test_von_neumann_inverse_errors():
    with pytest.raises(DomainError):
        ck_von_neumann_inv([[QPolynomial4.constant(E1)]], 3)
    with pytest.raises(ShapeMismatchError):
        ck_von_neumann_inv([[fueter_variable(1), fueter_variable(2)]], 3)
    with pytest.raises(DomainError):
        ck_von_neumann_inv([[fueter_variable(1)]], -1)


def test_matrix_json():
    matrix = [
        [fueter_variable(1), QPolynomial4()],
        [fueter_monomial((0, 1, 1)), fueter_variable(3)],
    ]
    data = matrix_to_json(matrix)
    assert data[0][1] == []
    assert matrix_from_json(data) == matrix
    data = [[[{'exps': [1, 0, 0], 'value': 1}]]]
    assert matrix_from_json(data, QPolynomial3) == [[QPolynomial3.variable(1)]]


def quaternion_realization():
    return Realization(
        D=[[[1, 0, 0, 0]]],
        C=[[[0, 1, 0, 0], [0, 0, 0, 1]]],
        A=(
            [[[0, 0, 0.5, 0], [0, 0, 0, 0]], [[0, 0, 0, 0], [0.25, 0, 0, 0]]],
            [[[0, 0, 0, 0], [1, 0, 0, 0]], [[0, 0, 0, 0], [0, 0, 0, 0]]],
            [[[0, 0, 0, 0], [0, 0, 0, 0]], [[0, 0, 0, 0.5], [0, 0, 0, 0]]],
        ),
        B=(
            [[[1, 0, 0, 0]], [[0, 0, 0, 0]]],
            [[[0, 0, 0, 0]], [[0, 1, 0, 0]]],
            [[[0, 0, 1, 0]], [[0, 0, 0, 0]]],
        ),
        ring=QUATERNION,
    )


def test_fueter_series_of_a_realization():
    series = to_series(quaternion_realization(), 4, basis=Basis.FUETER)
    assert series.basis is Basis.FUETER
    polynomials = from_fueter_series(series)
    entry = polynomials[0][0]
    assert dirac_apply(entry).max_abs_difference(QPolynomial4()) <= 1e-12
    expected = monomial_series_polynomial(relabel(series, Basis.MONOMIAL))
    assert restrict(entry) == expected[0][0]
    assert entry.degree == 4


def test_fueter_series_checks_the_basis():
    series = to_series(quaternion_realization(), 2)
    with pytest.raises(BasisMismatchError):
        from_fueter_series(series)
    with pytest.raises(BasisMismatchError):
        monomial_series_polynomial(relabel(series, Basis.FUETER))


def test_units_in_monomials():
    value = fueter_monomial((0, 0, 1)) * E2
    assert value == QPolynomial4({(0, 0, 0, 1): E2, (1, 0, 0, 0): -(E3 * E2)})
    assert is_hyperholomorphic(value)
