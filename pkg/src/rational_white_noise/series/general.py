#
# Copyright The rational-white-noise Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import TYPE_CHECKING, Optional, Union

import numpy as np

from rational_white_noise.config import config
from rational_white_noise.errors import (
    BasisMismatchError,
    DomainError,
    ShapeMismatchError,
    SingularError,
)
from rational_white_noise.multiindex import (
    ZERO,
    MultiIndex,
    enumerate_indices,
    factorial,
    multinomial,
    two_n_pow,
)
from rational_white_noise.multiindex import sub as index_sub
from rational_white_noise.series.rings import REAL, CoefficientRing, get_ring
from rational_white_noise.utils import as_float, as_point, to_plain

if TYPE_CHECKING:
    from structlog.stdlib import BoundLogger

configuration = config.get_entry_point('series')


class Basis(str, Enum):
    """
    The basis a series is expanded in. Chaos coefficients multiply Hermite chaos
    elements, monomial coefficients multiply z^alpha and Fueter coefficients
    multiply the symmetrized Fueter monomials.
    """

    CHAOS = 'chaos'
    MONOMIAL = 'monomial'
    FUETER = 'fueter'


class Space(str, Enum):
    P = 'p'
    WHITE_NOISE = 'white_noise'
    ARVESON = 'arveson'
    FOCK = 'fock'


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """
    A finite family of matrix coefficients indexed by multi-indices of weight at most
    `degree` supported in the positions 1..`max_var`. Coefficients that are exactly
    zero are not stored.
    """

    basis: Basis
    degree: int
    max_var: int
    shape: tuple[int, int] = (1, 1)
    ring: CoefficientRing = REAL
    coeffs: Mapping[MultiIndex, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        basis = Basis(self.basis)
        if self.degree < 0 or self.max_var < 0:
            raise DomainError(
                f'Degree {self.degree} and number of variables {self.max_var} '
                'must be nonnegative.'
            )
        shape = tuple(int(n) for n in self.shape)
        if len(shape) != 2 or min(shape) < 0:
            raise ShapeMismatchError(f'{self.shape} is not a matrix shape.')
        coeffs = {}
        for alpha, value in self.coeffs.items():
            if not isinstance(alpha, MultiIndex):
                alpha = MultiIndex(alpha)
            if alpha.weight > self.degree or alpha.max_position > self.max_var:
                raise DomainError(
                    f'Index {alpha} lies outside the truncation of degree '
                    f'{self.degree} in {self.max_var} variables.'
                )
            value = self.ring.coerce(value, shape)
            if self.ring.is_zero(value):
                continue
            value.setflags(write=False)
            coeffs[alpha] = value
        object.__setattr__(self, 'basis', basis)
        object.__setattr__(self, 'shape', shape)
        object.__setattr__(self, 'coeffs', MappingProxyType(coeffs))

    @classmethod
    def from_terms(  # noqa: PLR0913
        cls,
        basis: Basis,
        degree: int,
        max_var: int,
        shape: tuple[int, int],
        ring: CoefficientRing,
        terms: Iterable[tuple[MultiIndex, np.ndarray]],
    ) -> 'TruncatedSeries':
        """
        Sums the given terms per index and drops everything outside the truncation.
        """
        coeffs: dict[MultiIndex, np.ndarray] = {}
        for alpha, value in terms:
            if alpha.weight > degree or alpha.max_position > max_var:
                continue
            if alpha in coeffs:
                coeffs[alpha] = ring.add(coeffs[alpha], value)
            else:
                coeffs[alpha] = value
        return cls(basis, degree, max_var, shape, ring, coeffs)

    @classmethod
    def from_json(cls, data: dict) -> 'TruncatedSeries':
        unknown = set(data) - {'basis', 'degree', 'max_var', 'shape', 'ring', 'terms'}
        if unknown:
            raise ValueError(f'Unknown series fields {sorted(unknown)}.')
        ring = get_ring(data.get('ring', 'real'))
        shape = tuple(data.get('shape', (1, 1)))
        coeffs = {}
        for term in data.get('terms', []):
            alpha = MultiIndex.from_json(term['alpha'])
            if alpha in coeffs:
                raise ValueError(f'Index {alpha} is listed twice.')
            coeffs[alpha] = ring.from_json(term['value'], shape)
        return cls(
            basis=Basis(data['basis']),
            degree=int(data['degree']),
            max_var=int(data['max_var']),
            shape=shape,
            ring=ring,
            coeffs=coeffs,
        )

    def to_json(self) -> dict:
        return {
            'basis': self.basis.value,
            'degree': self.degree,
            'max_var': self.max_var,
            'shape': list(self.shape),
            'ring': self.ring.name,
            'terms': [
                {'alpha': alpha.to_json(), 'value': self.ring.to_json(value)}
                for alpha, value in self.terms()
            ],
        }

    def terms(self) -> list[tuple[MultiIndex, np.ndarray]]:
        """
        Stored coefficients in graded order.
        """
        return sorted(self.coeffs.items(), key=lambda item: item[0].grlex_key())

    def coefficient(self, alpha: MultiIndex) -> np.ndarray:
        if alpha in self.coeffs:
            return self.coeffs[alpha]
        return self.ring.zeros(self.shape)

    def constant(self) -> np.ndarray:
        return self.coefficient(ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: 'TruncatedSeries') -> 'TruncatedSeries':
        return add(self, other)

    def __sub__(self, other: 'TruncatedSeries') -> 'TruncatedSeries':
        return sub(self, other)

    def __neg__(self) -> 'TruncatedSeries':
        return scale(self, -1)


@dataclass(frozen=True)
class SeriesNorms:
    """
    Squared norms of a series. Exact rings give exact fractions.
    """

    q: int
    white_noise: Union[Fraction, float]
    p_space: Union[Fraction, float]
    arveson: Union[Fraction, float]
    fock: Union[Fraction, float]
    kondratiev: Union[Fraction, float]
    hida: Union[Fraction, float]

    def squared(self) -> dict:
        return {
            'white_noise': self.white_noise,
            'p_space': self.p_space,
            'arveson': self.arveson,
            'fock': self.fock,
            'kondratiev': self.kondratiev,
            'hida': self.hida,
        }

    def roots(self) -> dict[str, float]:
        return {
            key: math.sqrt(as_float(value)) for key, value in self.squared().items()
        }

    def to_json(self) -> dict:
        return {'q': self.q, 'squared': self.squared(), 'norms': self.roots()}


@dataclass(frozen=True)
class KqMembership:
    inside: bool
    value: float

    def to_json(self) -> dict:
        return {'inside': self.inside, 'value': self.value}


def _check_compatible(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.basis != b.basis:
        raise BasisMismatchError(
            f'Cannot combine a {a.basis.value} series with a {b.basis.value} series.'
        )
    if a.ring != b.ring:
        raise ShapeMismatchError(
            f'Cannot combine coefficients in {a.ring.name} and {b.ring.name}.'
        )


def constant_series(  # noqa: PLR0913
    value,
    *,
    basis: Basis = Basis.CHAOS,
    degree: int = 0,
    max_var: int = 0,
    ring: CoefficientRing = REAL,
    shape: Optional[tuple[int, int]] = None,
) -> TruncatedSeries:
    coefficient = ring.coerce(value, shape)
    return TruncatedSeries(
        basis, degree, max_var, ring.shape(coefficient), ring, {ZERO: coefficient}
    )


def identity_series(
    n: int,
    *,
    basis: Basis = Basis.CHAOS,
    degree: int = 0,
    max_var: int = 0,
    ring: CoefficientRing = REAL,
) -> TruncatedSeries:
    return TruncatedSeries(
        basis, degree, max_var, (n, n), ring, {ZERO: ring.identity(n)}
    )


def monomial_series(  # noqa: PLR0913
    alpha: MultiIndex,
    value=1,
    *,
    basis: Basis = Basis.CHAOS,
    degree: Optional[int] = None,
    max_var: Optional[int] = None,
    ring: CoefficientRing = REAL,
    shape: Optional[tuple[int, int]] = None,
) -> TruncatedSeries:
    """
    The series with the single coefficient `value` at `alpha`.
    """
    coefficient = ring.coerce(value, shape)
    return TruncatedSeries(
        basis,
        alpha.weight if degree is None else degree,
        alpha.max_position if max_var is None else max_var,
        ring.shape(coefficient),
        ring,
        {alpha: coefficient},
    )


def relabel(series: TruncatedSeries, basis: Basis) -> TruncatedSeries:
    return TruncatedSeries(
        Basis(basis),
        series.degree,
        series.max_var,
        series.shape,
        series.ring,
        series.coeffs,
    )


def truncate(
    series: TruncatedSeries,
    degree: Optional[int] = None,
    max_var: Optional[int] = None,
) -> TruncatedSeries:
    """
    Re-truncates a series. Raising the degree or the number of variables asserts that
    the new coefficients vanish.
    """
    return TruncatedSeries.from_terms(
        series.basis,
        series.degree if degree is None else degree,
        series.max_var if max_var is None else max_var,
        series.shape,
        series.ring,
        series.coeffs.items(),
    )


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """
    Coefficientwise sum, truncated to the smaller degree.
    """
    _check_compatible(a, b)
    if a.shape != b.shape:
        raise ShapeMismatchError(f'Cannot add shapes {a.shape} and {b.shape}.')
    return TruncatedSeries.from_terms(
        a.basis,
        min(a.degree, b.degree),
        max(a.max_var, b.max_var),
        a.shape,
        a.ring,
        [*a.coeffs.items(), *b.coeffs.items()],
    )


def scale(series: TruncatedSeries, factor) -> TruncatedSeries:
    if isinstance(factor, complex) and series.ring.name != 'complex':
        raise ShapeMismatchError(
            f'A complex factor does not scale {series.ring.name} coefficients.'
        )
    return TruncatedSeries.from_terms(
        series.basis,
        series.degree,
        series.max_var,
        series.shape,
        series.ring,
        [(alpha, series.ring.scale(c, factor)) for alpha, c in series.coeffs.items()],
    )


def sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return add(a, scale(b, -1))


def wick_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """
    The Wick product: convolution of the coefficient families, with the coefficients
    of `a` on the left. In the monomial basis this is the Cauchy product of power
    series.
    """
    _check_compatible(a, b)
    (p, n), (m, q) = a.shape, b.shape
    if n != m:
        raise ShapeMismatchError(
            f'Cannot multiply {p}x{n} coefficients by {m}x{q} coefficients.'
        )
    degree = min(a.degree, b.degree)
    ring = a.ring
    terms = [
        (alpha + beta, ring.matmul(left, right))
        for alpha, left in a.coeffs.items()
        for beta, right in b.coeffs.items()
        if alpha.weight + beta.weight <= degree
    ]
    return TruncatedSeries.from_terms(
        a.basis, degree, max(a.max_var, b.max_var), (p, q), ring, terms
    )


def wick_pow(series: TruncatedSeries, n: int) -> TruncatedSeries:
    if n < 0:
        raise DomainError(f'Wick powers need a nonnegative exponent, got {n}.')
    p, q = series.shape
    if p != q:
        raise ShapeMismatchError(f'Only square series have powers, got {p}x{q}.')
    result = identity_series(
        p,
        basis=series.basis,
        degree=series.degree,
        max_var=series.max_var,
        ring=series.ring,
    )
    for _ in range(n):
        result = wick_mul(result, series)
    return result


def wick_inv(
    series: TruncatedSeries, logger: 'BoundLogger' = None
) -> TruncatedSeries:
    """
    The Wick inverse of a square series with invertible constant term, computed by
    recursion over the degree.

    Args:
        series (TruncatedSeries): The series to invert.
        logger (BoundLogger): A structlog logger.

    Raises:
        SingularError: If the constant term is not invertible.
    """
    p, q = series.shape
    if p != q:
        raise ShapeMismatchError(f'Only square series are invertible, got {p}x{q}.')
    ring = series.ring
    try:
        head_inverse = ring.inv(series.constant())
    except SingularError as exc:
        if logger:
            logger.warning(
                'The constant term of the series is not invertible.',
                degree=series.degree,
            )
        raise SingularError(
            'The constant term of the series is not invertible.'
        ) from exc
    tail = [(beta, c) for beta, c in series.coeffs.items() if beta != ZERO]
    solution = {ZERO: head_inverse}
    for alpha in enumerate_indices(series.degree, series.max_var)[1:]:
        accumulated = None
        for beta, coefficient in tail:
            gamma = index_sub(alpha, beta)
            if gamma is None or gamma not in solution:
                continue
            term = ring.matmul(coefficient, solution[gamma])
            accumulated = term if accumulated is None else ring.add(accumulated, term)
        if accumulated is None:
            continue
        value = ring.neg(ring.matmul(head_inverse, accumulated))
        if not ring.is_zero(value):
            solution[alpha] = value
    return TruncatedSeries(
        series.basis, series.degree, series.max_var, series.shape, ring, solution
    )


def hermite_transform(series: TruncatedSeries) -> TruncatedSeries:
    """
    Maps a chaos expansion to the power series with the same coefficients.
    """
    if series.basis is not Basis.CHAOS:
        raise BasisMismatchError(
            f'The Hermite transform takes a chaos series, got {series.basis.value}.'
        )
    return relabel(series, Basis.MONOMIAL)


def inverse_hermite(series: TruncatedSeries) -> TruncatedSeries:
    if series.basis is not Basis.MONOMIAL:
        raise BasisMismatchError(
            'The inverse Hermite transform takes a monomial series, '
            f'got {series.basis.value}.'
        )
    return relabel(series, Basis.CHAOS)


def _is_exact_number(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def evaluate(series: TruncatedSeries, z) -> np.ndarray:
    """
    Value of a monomial series at a finitely supported point. Coordinates beyond
    `max_var` do not enter any monomial.

    Args:
        series (TruncatedSeries): A series in the monomial basis.
        z: The point as a sequence (positions 1, 2, ...) or a mapping from positions
            to coordinates.
    """
    if series.basis is not Basis.MONOMIAL:
        raise BasisMismatchError(
            f'Only monomial series can be evaluated, got {series.basis.value}.'
        )
    point = as_point(z)
    ring = series.ring
    coeffs = series.coeffs
    if ring.exact and not all(_is_exact_number(v) for v in point.values()):
        is_complex = any(isinstance(v, complex) for v in point.values())
        numeric = complex if is_complex else float
        coeffs = {alpha: c.astype(numeric) for alpha, c in coeffs.items()}
    total = None
    for alpha, coefficient in coeffs.items():
        monomial = 1
        for position, exponent in alpha.entries:
            monomial = monomial * point.get(position, 0) ** exponent
        if monomial == 0:
            continue
        if coefficient.dtype == object:
            term = ring.scale(coefficient, monomial)
        else:
            if isinstance(monomial, Fraction):
                monomial = as_float(monomial)
            term = coefficient * monomial
        total = term if total is None else total + term
    if total is None:
        return ring.zeros(series.shape)
    return total


def value_to_json(value: np.ndarray):
    """
    JSON form of an evaluated matrix, 1 x 1 values written as a single entry.
    """
    if value.shape[:2] == (1, 1):
        return to_plain(value[0, 0])
    return to_plain(value)


def _weighted(size_squared, weight):
    if isinstance(size_squared, Fraction):
        return size_squared * weight
    return size_squared * as_float(weight)


def space_weight(alpha: MultiIndex, space: Space) -> Fraction:
    """
    Weight of |f_alpha|^2 in the squared norm of the given space.
    """
    space = Space(space)
    if space is Space.P:
        return Fraction(1)
    if space is Space.ARVESON:
        return 1 / multinomial(alpha)
    return Fraction(factorial(alpha))


def norms(series: TruncatedSeries, q: int = 1) -> SeriesNorms:
    """
    Squared norms of a series in the white noise space, the space of power series
    with square summable coefficients, the Arveson space, the Fock space, the
    Kondratiev space of index `q` and the Hida sup norm of index `q`.
    """
    if q < 0 or int(q) != q:
        raise DomainError(
            f'The Kondratiev index must be a nonnegative integer, got {q}.'
        )
    q = int(q)
    ring = series.ring
    zero = Fraction(0) if ring.exact else 0.0
    white_noise = p_space = arveson = kondratiev = hida = zero
    for alpha, coefficient in series.coeffs.items():
        size_squared = ring.size_squared(coefficient)
        p_space += size_squared
        white_noise += _weighted(size_squared, factorial(alpha))
        arveson += _weighted(size_squared, space_weight(alpha, Space.ARVESON))
        damped = _weighted(size_squared, two_n_pow(alpha, q, sign=-1))
        kondratiev += damped
        hida = max(hida, damped)
    return SeriesNorms(
        q=q,
        white_noise=white_noise,
        p_space=p_space,
        arveson=arveson,
        fock=white_noise,
        kondratiev=kondratiev,
        hida=hida,
    )


def inner_product(
    a: TruncatedSeries, b: TruncatedSeries, space: Space = Space.P
) -> Union[Fraction, float, complex]:
    """
    Weighted inner product of two scalar series, linear in `a` and conjugate linear
    in `b`.
    """
    _check_compatible(a, b)
    if a.shape != (1, 1) or b.shape != (1, 1):
        raise ShapeMismatchError(
            f'Inner products are defined for scalar series, got {a.shape} and '
            f'{b.shape}.'
        )
    ring = a.ring
    if not ring.commutative:
        raise ShapeMismatchError(
            f'Inner products need commutative coefficients, got {ring.name}.'
        )
    total = Fraction(0) if ring.exact else 0.0
    for alpha in a.coeffs.keys() & b.coeffs.keys():
        weight = space_weight(alpha, space)
        right = ring.scalar(b.coeffs[alpha])
        if not ring.exact:
            right = np.conj(right)
        product = ring.scalar(a.coeffs[alpha]) * right
        if ring.exact:
            total += weight * product
        else:
            total += as_float(weight) * product
    if ring.exact:
        return total
    return complex(total) if ring.name == 'complex' else float(np.real(total))


def leibenzon(series: TruncatedSeries, j: int) -> TruncatedSeries:
    """
    The backward shift in the variable `j`, weighting each coefficient by the share
    of its exponent in the total degree.
    """
    if j < 1:
        raise DomainError(f'Variables are numbered from 1, got {j}.')
    unit = MultiIndex.unit(j)
    ring = series.ring
    terms = []
    for alpha, coefficient in series.coeffs.items():
        exponent = alpha.exponent(j)
        if exponent == 0:
            continue
        shifted = index_sub(alpha, unit)
        terms.append(
            (shifted, ring.scale(coefficient, Fraction(exponent, alpha.weight)))
        )
    return TruncatedSeries.from_terms(
        series.basis,
        max(series.degree - 1, 0),
        series.max_var,
        series.shape,
        ring,
        terms,
    )


def multiply_by_variable(series: TruncatedSeries, k: int) -> TruncatedSeries:
    """
    Multiplies a series by the coordinate z_k, raising the degree by one.
    """
    if k < 1:
        raise DomainError(f'Variables are numbered from 1, got {k}.')
    unit = MultiIndex.unit(k)
    return TruncatedSeries.from_terms(
        series.basis,
        series.degree + 1,
        max(series.max_var, k),
        series.shape,
        series.ring,
        [(alpha + unit, c) for alpha, c in series.coeffs.items()],
    )


def constant_part(series: TruncatedSeries) -> TruncatedSeries:
    return TruncatedSeries(
        series.basis,
        series.degree,
        series.max_var,
        series.shape,
        series.ring,
        {ZERO: series.constant()},
    )


def gleason_residual(series: TruncatedSeries) -> TruncatedSeries:
    """
    The series F - F(0) - sum_j z_j R_j F, which vanishes for every polynomial F.
    """
    if series.basis is not Basis.MONOMIAL:
        raise BasisMismatchError(
            f'The Gleason decomposition takes a monomial series, got '
            f'{series.basis.value}.'
        )
    residual = sub(series, constant_part(series))
    for j in range(1, series.max_var + 1):
        residual = sub(residual, multiply_by_variable(leibenzon(series, j), j))
    return residual


def max_coefficient(series: TruncatedSeries) -> Union[Fraction, float]:
    """
    Largest entry modulus over all stored coefficients.
    """
    if not series.coeffs:
        return Fraction(0) if series.ring.exact else 0.0
    return max(series.ring.max_abs(c) for c in series.coeffs.values())


def distance(a: TruncatedSeries, b: TruncatedSeries) -> Union[Fraction, float]:
    """
    Largest entry modulus of a - b over the common truncation.
    """
    return max_coefficient(sub(a, b))


def kq_membership(z, q: float, delta: float) -> KqMembership:
    """
    Decides whether the point with coordinate moduli |z_j| lies in the set where
    sum over nonzero alpha of |z|^alpha (2N)^(q alpha) is below delta^2, using the
    closed form product of geometric series.
    """
    if delta <= 0:
        raise DomainError(f'delta must be positive, got {delta}.')
    log_value = 0.0
    for j, coordinate in as_point(z).items():
        ratio = (2 * j) ** q * abs(coordinate)
        if ratio >= 1:
            return KqMembership(inside=False, value=math.inf)
        log_value -= math.log1p(-ratio)
    value = math.expm1(log_value)
    return KqMembership(inside=value < delta**2, value=value)
