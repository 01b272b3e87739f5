import math
import random
from fractions import Fraction

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given, settings
from structlog.testing import capture_logs

from rational_white_noise.errors import (
    BasisMismatchError,
    DomainError,
    ShapeMismatchError,
    SingularError,
)
from rational_white_noise.multiindex import ZERO, MultiIndex, enumerate_indices
from rational_white_noise.series.general import (
    Basis,
    Space,
    TruncatedSeries,
    add,
    constant_part,
    constant_series,
    distance,
    evaluate,
    gleason_residual,
    hermite_transform,
    identity_series,
    inner_product,
    inverse_hermite,
    kq_membership,
    leibenzon,
    max_coefficient,
    monomial_series,
    multiply_by_variable,
    norms,
    scale,
    sub,
    truncate,
    wick_inv,
    wick_mul,
    wick_pow,
)
from rational_white_noise.series.rings import COMPLEX, QUATERNION, RATIONAL, REAL

e1, e2 = MultiIndex.unit(1), MultiIndex.unit(2)


def exact(terms, degree=6, max_var=4, basis=Basis.MONOMIAL):
    """
    Scalar rational series from a mapping of index dicts to values.
    """
    return TruncatedSeries(
        basis,
        degree,
        max_var,
        (1, 1),
        RATIONAL,
        {MultiIndex.from_dense(alpha): [[value]] for alpha, value in terms.items()},
    )


def coefficient_map(series):
    return {
        alpha: series.ring.to_json(value) for alpha, value in series.coeffs.items()
    }


def random_exact(rng, degree, max_var, size, basis=Basis.MONOMIAL):
    candidates = enumerate_indices(degree, max_var)
    coeffs = {
        rng.choice(candidates): [[Fraction(rng.randint(-9, 9), rng.randint(1, 5))]]
        for _ in range(size)
    }
    return TruncatedSeries(basis, degree, max_var, (1, 1), RATIONAL, coeffs)


exact_series = st.dictionaries(
    st.sampled_from(enumerate_indices(5, 4)),
    st.fractions(min_value=-5, max_value=5, max_denominator=12),
    max_size=10,
).map(
    lambda coeffs: TruncatedSeries(
        Basis.MONOMIAL,
        5,
        4,
        (1, 1),
        RATIONAL,
        {alpha: [[value]] for alpha, value in coeffs.items()},
    )
)


def test_canonical_sparsity():
    series = exact({(): 0, (1,): 1}, degree=2, max_var=1)
    assert list(series.coeffs) == [e1]
    assert series.coefficient(e2)[0, 0] == 0
    with pytest.raises(TypeError):
        series.coeffs[ZERO] = 1


def test_truncation_is_enforced():
    with pytest.raises(DomainError):
        exact({(1,): 1}, degree=0)
    with pytest.raises(DomainError):
        exact({(0, 0, 0, 0, 1): 1}, max_var=4)
    with pytest.raises(DomainError):
        TruncatedSeries(Basis.CHAOS, -1, 2)


def test_json_round_trip_of_fixture():
    data = {
        'basis': 'chaos',
        'degree': 3,
        'max_var': 2,
        'shape': [1, 1],
        'ring': 'rational',
        'terms': [{'alpha': [], 'value': 1}, {'alpha': [[1, 1]], 'value': '-1/2'}],
    }
    series = TruncatedSeries.from_json(data)
    assert series.coefficient(e1)[0, 0] == Fraction(-1, 2)
    assert series.to_json() == {
        **data,
        'terms': [
            {'alpha': [], 'value': 1},
            {'alpha': [[1, 1]], 'value': Fraction(-1, 2)},
        ],
    }
    with pytest.raises(ValueError):
        TruncatedSeries.from_json({**data, 'colour': 'red'})
    with pytest.raises(ValueError):
        TruncatedSeries.from_json({**data, 'terms': data['terms'] * 2})


def test_add_and_scale():
    h1 = monomial_series(e1, basis=Basis.CHAOS, degree=3, max_var=2)
    doubled = add(h1, h1)
    assert coefficient_map(doubled) == {e1: 2.0}
    assert coefficient_map(scale(h1, 1)) == coefficient_map(h1)
    assert sub(h1, h1).is_zero()
    zero = TruncatedSeries(Basis.CHAOS, 5, 2)
    assert coefficient_map(h1 + zero) == coefficient_map(h1)
    assert (h1 + zero).degree == 3
    with pytest.raises(BasisMismatchError):
        add(h1, hermite_transform(h1))
    with pytest.raises(ShapeMismatchError):
        add(h1, identity_series(2, basis=Basis.CHAOS))
    with pytest.raises(ShapeMismatchError):
        scale(h1, 1j)


def test_wick_index_law():
    for alpha in enumerate_indices(6, 4):
        for beta in enumerate_indices(6 - alpha.weight, 4):
            options = dict(basis=Basis.CHAOS, degree=6, max_var=4, ring=RATIONAL)
            product = wick_mul(
                monomial_series(alpha, **options), monomial_series(beta, **options)
            )
            assert coefficient_map(product) == {alpha + beta: 1}


def test_wick_products_of_chaos():
    options = dict(basis=Basis.CHAOS, degree=4, max_var=2, ring=RATIONAL)
    one = constant_series(1, **options)
    h1 = monomial_series(e1, **options)
    left, right = one + h1, one - h1
    product = wick_mul(left, right)
    assert coefficient_map(product) == {ZERO: 1, MultiIndex.from_dict({1: 2}): -1}
    assert coefficient_map(wick_mul(left, one)) == coefficient_map(left)
    assert coefficient_map(wick_pow(h1, 3)) == {MultiIndex.from_dict({1: 3}): 1}
    assert coefficient_map(wick_pow(h1, 0)) == {ZERO: 1}
    assert coefficient_map(wick_mul(scale(one, 3), left)) == coefficient_map(
        scale(left, 3)
    )


def test_wick_truncates_to_smaller_degree():
    a = monomial_series(e1, degree=1, max_var=1)
    b = monomial_series(e2, degree=3, max_var=2)
    product = wick_mul(a, b)
    assert product.degree == 1
    assert product.max_var == 2
    assert product.is_zero()


@settings(max_examples=50, deadline=None)
@given(exact_series, exact_series, exact_series)
def test_wick_product_is_associative_and_commutative(f, g, h):
    left = wick_mul(wick_mul(f, g), h)
    right = wick_mul(f, wick_mul(g, h))
    assert coefficient_map(left) == coefficient_map(right)
    assert coefficient_map(wick_mul(f, g)) == coefficient_map(wick_mul(g, f))


def test_matrix_wick_product_keeps_order():
    a = monomial_series(e1, [[0, 1], [0, 0]], degree=2, max_var=1)
    b = monomial_series(e1, [[0, 0], [1, 0]], degree=2, max_var=1)
    assert wick_mul(a, b).coefficient(MultiIndex.from_dict({1: 2})).tolist() == [
        [1, 0],
        [0, 0],
    ]
    assert wick_mul(b, a).coefficient(MultiIndex.from_dict({1: 2})).tolist() == [
        [0, 0],
        [0, 1],
    ]
    with pytest.raises(ShapeMismatchError):
        wick_mul(a, monomial_series(e1, [[1, 2, 3]], degree=2, max_var=1))


def test_wick_inverse_geometric_series():
    series = exact({(): 1, (1,): -1}, degree=3, max_var=1, basis=Basis.CHAOS)
    inverse = wick_inv(series)
    assert coefficient_map(inverse) == {
        ZERO: 1,
        e1: 1,
        MultiIndex.from_dict({1: 2}): 1,
        MultiIndex.from_dict({1: 3}): 1,
    }
    identity = identity_series(2, degree=4, max_var=3)
    assert coefficient_map(wick_inv(identity)) == {ZERO: [[1.0, 0.0], [0.0, 1.0]]}


@pytest.mark.parametrize('seed', range(100))
def test_wick_inverse_of_random_series(seed):
    rng = np.random.default_rng(seed)
    size = 1 if seed % 2 else 3
    indices = enumerate_indices(6, 3)[1:]
    coeffs = {ZERO: np.eye(size)}
    for position in rng.choice(len(indices), size=5, replace=False):
        coeffs[indices[position]] = 0.4 * rng.standard_normal((size, size))
    series = TruncatedSeries(Basis.CHAOS, 6, 3, (size, size), REAL, coeffs)
    identity = identity_series(size, degree=6, max_var=3)
    inverse = wick_inv(series)
    assert max_coefficient(sub(wick_mul(series, inverse), identity)) <= 1e-10
    assert max_coefficient(sub(wick_mul(inverse, series), identity)) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(exact_series)
def test_exact_wick_inverse(f):
    options = dict(basis=Basis.MONOMIAL, degree=5, max_var=4, ring=RATIONAL)
    identity = identity_series(1, **options)
    series = f - constant_part(f) + identity
    product = wick_mul(series, wick_inv(series))
    assert sub(product, identity).is_zero()


def test_wick_inverse_of_singular_constant(logger):
    series = monomial_series(e1, degree=2, max_var=1)
    with capture_logs() as logs, pytest.raises(SingularError):
        wick_inv(series, logger)
    assert logs[0]['log_level'] == 'warning'


def test_quaternion_wick_inverse():
    coeffs = {ZERO: [[[1, 1, 0, 0]]], e1: [[[0, 0, 1, 0]]], e2: [[[0, 0, 0, 0.5]]]}
    series = TruncatedSeries(Basis.FUETER, 4, 2, (1, 1), QUATERNION, coeffs)
    identity = identity_series(
        1, basis=Basis.FUETER, degree=4, max_var=2, ring=QUATERNION
    )
    assert max_coefficient(sub(wick_mul(series, wick_inv(series)), identity)) <= 1e-12
    assert max_coefficient(sub(wick_mul(wick_inv(series), series), identity)) <= 1e-12


def test_hermite_transform():
    h1 = monomial_series(e1, basis=Basis.CHAOS, degree=2, max_var=1)
    transformed = hermite_transform(h1)
    assert transformed.basis is Basis.MONOMIAL
    assert coefficient_map(transformed) == coefficient_map(h1)
    assert inverse_hermite(transformed).basis is Basis.CHAOS
    with pytest.raises(BasisMismatchError):
        hermite_transform(transformed)
    with pytest.raises(BasisMismatchError):
        inverse_hermite(h1)


@pytest.mark.parametrize('seed', range(20))
def test_hermite_transform_is_multiplicative(seed):
    rng = random.Random(seed)
    f = truncate(random_exact(rng, 2, 3, 4, Basis.CHAOS), degree=5)
    g = truncate(random_exact(rng, 3, 3, 4, Basis.CHAOS), degree=5)
    product = hermite_transform(wick_mul(f, g))
    assert coefficient_map(product) == coefficient_map(
        wick_mul(hermite_transform(f), hermite_transform(g))
    )
    z = {1: Fraction(1, 2), 2: Fraction(-2, 3), 3: 3}
    assert evaluate(product, z)[0, 0] == (
        evaluate(hermite_transform(f), z)[0, 0]
        * evaluate(hermite_transform(g), z)[0, 0]
    )


def test_evaluate():
    f = exact({(1, 1): 1})
    assert evaluate(f, [2, 3])[0, 0] == 6
    g = exact({(): 1, (1,): 1, (2,): 1}, max_var=1)
    assert evaluate(g, [Fraction(1, 2)])[0, 0] == Fraction(7, 4)
    assert evaluate(g, [0.5])[0, 0] == pytest.approx(1.75)
    assert evaluate(g, {})[0, 0] == 1
    assert evaluate(g, [1, 5])[0, 0] == 3
    complex_series = TruncatedSeries(
        Basis.MONOMIAL, 2, 1, (1, 1), COMPLEX, {e1: [[1j]]}
    )
    assert evaluate(complex_series, [1j])[0, 0] == -1
    with pytest.raises(BasisMismatchError):
        evaluate(inverse_hermite(f), [1, 1])


def test_norm_values():
    f = TruncatedSeries(
        Basis.CHAOS, 2, 2, (1, 1), RATIONAL, {e1: [[1]], e2: [[2]]}
    )
    assert norms(f).white_noise == 5
    g = exact({(1, 1): 1})
    assert norms(g).arveson == Fraction(1, 2)
    h = TruncatedSeries(Basis.CHAOS, 1, 2, (1, 1), RATIONAL, {e2: [[1]]})
    assert norms(h, q=1).kondratiev == Fraction(1, 4)
    assert norms(h, q=1).hida == Fraction(1, 4)
    assert norms(h, q=0).kondratiev == 1
    report = norms(f).to_json()
    assert report['squared']['white_noise'] == 5
    assert report['norms']['white_noise'] == pytest.approx(math.sqrt(5))
    with pytest.raises(DomainError):
        norms(f, q=0.5)


def test_matrix_norms_use_frobenius():
    f = monomial_series(
        MultiIndex.from_dict({1: 2}), [[1, 2], [0, 2]], degree=2, max_var=1
    )
    assert norms(f).p_space == pytest.approx(9.0)
    assert norms(f).white_noise == pytest.approx(18.0)
    assert norms(f).fock == norms(f).white_noise


def test_inner_products():
    options = dict(degree=5, max_var=3, ring=RATIONAL, basis=Basis.MONOMIAL)
    for space in Space:
        assert inner_product(
            monomial_series(e1, **options), monomial_series(e2, **options), space
        ) == 0
    assert inner_product(
        monomial_series(e2, **options), monomial_series(e2, **options), Space.ARVESON
    ) == 1
    alpha = MultiIndex.from_dict({1: 2, 3: 1})
    assert inner_product(
        monomial_series(alpha, **options),
        monomial_series(alpha, **options),
        Space.WHITE_NOISE,
    ) == 2
    a = TruncatedSeries(Basis.MONOMIAL, 1, 1, (1, 1), COMPLEX, {e1: [[1j]]})
    assert inner_product(a, a) == pytest.approx(1.0)
    with pytest.raises(ShapeMismatchError):
        inner_product(identity_series(2), identity_series(2))


def test_leibenzon_values():
    f = exact({(1, 1): 1})
    assert coefficient_map(leibenzon(f, 1)) == {e2: Fraction(1, 2)}
    assert coefficient_map(leibenzon(f, 2)) == {e1: Fraction(1, 2)}
    assert leibenzon(f, 1).degree == 5
    assert leibenzon(exact({(): 3}), 1).is_zero()
    cube = exact({(3,): 1})
    assert coefficient_map(leibenzon(cube, 1)) == {MultiIndex.from_dict({1: 2}): 1}
    assert leibenzon(exact({(): 1}, degree=0), 1).degree == 0
    with pytest.raises(DomainError):
        leibenzon(f, 0)


def test_multiply_by_variable():
    f = exact({(): 1, (1,): 2}, degree=1, max_var=1)
    shifted = multiply_by_variable(f, 3)
    assert shifted.degree == 2
    assert shifted.max_var == 3
    assert coefficient_map(shifted) == {
        MultiIndex.from_dict({3: 1}): 1,
        MultiIndex.from_dict({1: 1, 3: 1}): 2,
    }


@settings(max_examples=200, deadline=None)
@given(exact_series)
def test_gleason_identity(f):
    assert gleason_residual(f).is_zero()


def test_gleason_identity_in_floating_point():
    rng = np.random.default_rng(3)
    coeffs = {alpha: float(rng.standard_normal()) for alpha in enumerate_indices(5, 4)}
    f = TruncatedSeries(Basis.MONOMIAL, 5, 4, coeffs=coeffs)
    assert max_coefficient(gleason_residual(f)) <= 1e-12
    with pytest.raises(BasisMismatchError):
        gleason_residual(inverse_hermite(f))


@settings(max_examples=100, deadline=None)
@given(exact_series)
def test_leibenzon_contracts(f):
    before = norms(f)
    for j in range(1, 6):
        after = norms(leibenzon(f, j))
        assert after.fock <= before.fock
        assert after.arveson <= before.arveson
        assert after.p_space <= before.p_space


def test_arveson_adjoint_identity():
    listed = enumerate_indices(5, 3)
    options = dict(basis=Basis.MONOMIAL, degree=6, max_var=3, ring=RATIONAL)
    for alpha in listed:
        f = monomial_series(alpha, **options)
        for beta in listed:
            g = monomial_series(beta, **options)
            for k in (1, 2, 3):
                assert inner_product(
                    multiply_by_variable(f, k), g, Space.ARVESON
                ) == inner_product(f, leibenzon(g, k), Space.ARVESON)


@pytest.mark.parametrize('seed', range(10))
def test_arveson_shift_decomposition(seed):
    rng = random.Random(seed)
    f = random_exact(rng, 5, 3, 6)
    g = random_exact(rng, 5, 3, 6)
    shifted = sum(
        inner_product(leibenzon(f, k), leibenzon(g, k), Space.ARVESON)
        for k in (1, 2, 3)
    )
    constant = f.constant()[0, 0] * g.constant()[0, 0]
    assert shifted == inner_product(f, g, Space.ARVESON) - constant


def test_distance_and_truncate():
    f = exact({(): 1, (1,): Fraction(1, 2)})
    g = exact({(): 1})
    assert distance(f, g) == Fraction(1, 2)
    assert truncate(f, degree=0).is_zero() is False
    assert coefficient_map(truncate(f, degree=0)) == {ZERO: 1}
    assert max_coefficient(TruncatedSeries(Basis.CHAOS, 2, 2)) == 0


def test_kq_membership_values():
    inside = kq_membership([0.1], 1, 1 / math.sqrt(2))
    assert inside.inside
    assert inside.value == pytest.approx(0.25)
    origin = kq_membership([], 1, 0.1)
    assert origin.inside and origin.value == 0
    outside = kq_membership([0.6], 1, 10)
    assert not outside.inside and outside.value == math.inf
    with pytest.raises(DomainError):
        kq_membership([0.1], 1, 0)


@pytest.mark.parametrize('seed', range(50))
def test_kq_closed_form_matches_partial_sums(seed):
    rng = np.random.default_rng(seed)
    q = float(rng.choice([0.5, 1.0, 2.0]))
    moduli = [
        rng.uniform(0, 0.15) / (2 * j) ** q for j in range(1, 4)
    ]
    closed = kq_membership(moduli, q, 1.0).value
    brute = sum(
        math.prod(
            (moduli[p - 1] * (2 * p) ** q) ** e for p, e in alpha.entries
        )
        for alpha in enumerate_indices(12, 3)[1:]
    )
    assert closed == pytest.approx(brute, abs=1e-8)
