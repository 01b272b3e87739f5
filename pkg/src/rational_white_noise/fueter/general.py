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
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import ClassVar, Optional, Union

from rational_white_noise.config import config
from rational_white_noise.errors import (
    BasisMismatchError,
    DomainError,
    ShapeMismatchError,
)
from rational_white_noise.fueter.quaternion import E0, UNITS, Quaternion
from rational_white_noise.series.general import Basis, TruncatedSeries

configuration = config.get_entry_point('fueter')

Exponents = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class QPolynomial:
    """
    A polynomial in real variables with quaternionic coefficients written on the
    right of the monomials. Terms map exponent tuples to coefficients; zero
    coefficients are not stored.
    """

    terms: Mapping[Exponents, Quaternion] = field(default_factory=dict)

    n_vars: ClassVar[int]
    first_variable: ClassVar[int]

    def __post_init__(self):
        terms = {}
        for exponents, coefficient in self.terms.items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != self.n_vars or min(exponents, default=0) < 0:
                raise DomainError(
                    f'{exponents} is not an exponent tuple of {self.n_vars} '
                    'nonnegative integers.'
                )
            if not isinstance(coefficient, Quaternion):
                coefficient = Quaternion.from_json(coefficient)
            if coefficient.is_zero():
                continue
            if exponents in terms:
                coefficient = terms[exponents] + coefficient
            terms[exponents] = coefficient
        object.__setattr__(self, 'terms', MappingProxyType(terms))

    @classmethod
    def from_terms(cls, terms) -> 'QPolynomial':
        """
        Sums coefficients of repeated exponent tuples.
        """
        collected: dict[Exponents, Quaternion] = {}
        for exponents, coefficient in terms:
            exponents = tuple(exponents)
            if exponents in collected:
                collected[exponents] = collected[exponents] + coefficient
            else:
                collected[exponents] = coefficient
        return cls(collected)

    @classmethod
    def constant(cls, value: Quaternion) -> 'QPolynomial':
        return cls({(0,) * cls.n_vars: value})

    @classmethod
    def variable(cls, index: int) -> 'QPolynomial':
        """
        The coordinate x_index.
        """
        position = index - cls.first_variable
        if not 0 <= position < cls.n_vars:
            raise DomainError(f'x{index} is not a variable of {cls.__name__}.')
        exponents = [0] * cls.n_vars
        exponents[position] = 1
        return cls({tuple(exponents): E0})

    @classmethod
    def from_json(cls, data) -> 'QPolynomial':
        return cls.from_terms(
            (tuple(term['exps']), Quaternion.from_json(term['value'])) for term in data
        )

    def to_json(self) -> list[dict]:
        return [
            {'exps': list(exponents), 'value': coefficient.to_json()}
            for exponents, coefficient in self.sorted_terms()
        ]

    def sorted_terms(self) -> list[tuple[Exponents, Quaternion]]:
        return sorted(
            self.terms.items(),
            key=lambda item: (sum(item[0]), tuple(-e for e in item[0])),
        )

    @property
    def degree(self) -> int:
        return max((sum(exponents) for exponents in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if type(self) is not type(other):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    __hash__ = None

    def __add__(self, other: 'QPolynomial') -> 'QPolynomial':
        self._check_same(other)
        return type(self).from_terms([*self.terms.items(), *other.terms.items()])

    def __neg__(self) -> 'QPolynomial':
        return type(self)({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: 'QPolynomial') -> 'QPolynomial':
        return self + (-other)

    def __mul__(self, other):
        """
        Pointwise product; coefficients multiply in order since the variables are
        real.
        """
        if isinstance(other, QPolynomial):
            self._check_same(other)
            return type(self).from_terms(
                (tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
                for e1, c1 in self.terms.items()
                for e2, c2 in other.terms.items()
            )
        return type(self)({e: c * other for e, c in self.terms.items()})

    def left_multiply(self, value: Quaternion) -> 'QPolynomial':
        return type(self)({e: value * c for e, c in self.terms.items()})

    def derivative(self, index: int) -> 'QPolynomial':
        """
        Partial derivative with respect to x_index.
        """
        position = index - self.first_variable
        if not 0 <= position < self.n_vars:
            raise DomainError(f'x{index} is not a variable of {type(self).__name__}.')
        terms = []
        for exponents, coefficient in self.terms.items():
            exponent = exponents[position]
            if exponent == 0:
                continue
            lowered = list(exponents)
            lowered[position] -= 1
            terms.append((tuple(lowered), coefficient * exponent))
        return type(self).from_terms(terms)

    def truncate(self, degree: int) -> 'QPolynomial':
        return type(self)(
            {e: c for e, c in self.terms.items() if sum(e) <= degree}
        )

    def evaluate(self, x: Sequence) -> Quaternion:
        """
        Value at a real point given in the order of the variables.
        """
        if len(x) != self.n_vars:
            raise DomainError(f'Expected {self.n_vars} coordinates, got {len(x)}.')
        total = Quaternion()
        for exponents, coefficient in self.terms.items():
            monomial = math.prod(v**e for v, e in zip(x, exponents))
            total = total + monomial * coefficient
        return total

    def max_abs_difference(self, other: 'QPolynomial') -> float:
        difference = self - other
        return max((c.norm() for c in difference.terms.values()), default=0.0)

    def _check_same(self, other) -> None:
        if type(self) is not type(other):
            raise ShapeMismatchError(
                f'Cannot combine {type(self).__name__} with {type(other).__name__}.'
            )


class QPolynomial3(QPolynomial):
    """
    Polynomial in (x1, x2, x3).
    """

    n_vars = 3
    first_variable = 1


class QPolynomial4(QPolynomial):
    """
    Polynomial in (x0, x1, x2, x3).
    """

    n_vars = 4
    first_variable = 0


QMatrix = list[list[QPolynomial]]


def _vector_derivative(f: QPolynomial4) -> QPolynomial4:
    """
    sum_i e_i d/dx_i f with the units multiplied on the left.
    """
    result = QPolynomial4()
    for i in (1, 2, 3):
        result = result + f.derivative(i).left_multiply(UNITS[i])
    return result


def _lift(polynomial: QPolynomial3) -> QPolynomial4:
    return QPolynomial4(
        {(0, *exponents): c for exponents, c in polynomial.terms.items()}
    )


def ck_extend(polynomial: QPolynomial3) -> QPolynomial4:
    """
    The unique left hyperholomorphic polynomial restricting to `polynomial` on
    x0 = 0, given by the finite series sum_k (-x0)^k / k! L^k of the left acting
    operator L = sum_i e_i d/dx_i.
    """
    if not isinstance(polynomial, QPolynomial3):
        raise ShapeMismatchError(
            f'The extension takes a QPolynomial3, got {type(polynomial).__name__}.'
        )
    terms = []
    power = _lift(polynomial)
    k = 0
    while not power.is_zero():
        factor = Fraction((-1) ** k, math.factorial(k))
        for exponents, coefficient in power.terms.items():
            terms.append(((exponents[0] + k, *exponents[1:]), coefficient * factor))
        power = _vector_derivative(power)
        k += 1
    return QPolynomial4.from_terms(terms)


def restrict(polynomial: QPolynomial4) -> QPolynomial3:
    """
    Restriction to the hyperplane x0 = 0.
    """
    return QPolynomial3(
        {e[1:]: c for e, c in polynomial.terms.items() if e[0] == 0}
    )


def ck_product(f: QPolynomial4, g: QPolynomial4) -> QPolynomial4:
    """
    The CK product, the extension of the pointwise product of the restrictions.
    """
    return ck_extend(restrict(f) * restrict(g))


def fueter_variable(index: int) -> QPolynomial4:
    """
    The Fueter variable x_index - x0 e_index.
    """
    return ck_extend(QPolynomial3.variable(index))


def fueter_monomial(alpha: Sequence[int]) -> QPolynomial4:
    """
    The symmetrized product of Fueter variables with exponents `alpha`, obtained as
    the extension of x^alpha.
    """
    if len(alpha) != 3 or min(alpha) < 0:
        raise DomainError(f'{alpha} is not a triple of nonnegative exponents.')
    return ck_extend(QPolynomial3({tuple(alpha): E0}))


def dirac_apply(f: QPolynomial4) -> QPolynomial4:
    """
    The Cauchy-Fueter operator d/dx0 + sum_i e_i d/dx_i.
    """
    return f.derivative(0) + _vector_derivative(f)


def cauchy_fueter_system(f: QPolynomial4) -> tuple[dict, dict, dict, dict]:
    """
    The four real component equations of the Cauchy-Fueter operator applied to `f`,
    each a mapping from exponent tuples to real coefficients.
    """
    residual = dirac_apply(f)
    return tuple(
        {
            exponents: c.components[component]
            for exponents, c in residual.terms.items()
            if c.components[component] != 0
        }
        for component in range(4)
    )


def is_hyperholomorphic(f: QPolynomial4) -> bool:
    return dirac_apply(f).is_zero()


def _as_matrix(value: Union[QPolynomial, QMatrix]) -> QMatrix:
    if isinstance(value, QPolynomial):
        return [[value]]
    return [list(row) for row in value]


def _matrix_shape(matrix: QMatrix) -> tuple[int, int]:
    columns = {len(row) for row in matrix}
    if len(columns) > 1:
        raise ShapeMismatchError('Rows of the polynomial matrix differ in length.')
    return len(matrix), columns.pop() if columns else 0


def _matrix_product(left: QMatrix, right: QMatrix, kind: type) -> QMatrix:
    (p, n), (m, q) = _matrix_shape(left), _matrix_shape(right)
    if n != m:
        raise ShapeMismatchError(
            f'Cannot multiply a {p}x{n} polynomial matrix by a {m}x{q} one.'
        )
    product = []
    for i in range(p):
        row = []
        for j in range(q):
            entry = kind()
            for k in range(n):
                entry = entry + left[i][k] * right[k][j]
            row.append(entry)
        product.append(row)
    return product


def ck_matrix_product(
    left: Union[QPolynomial4, QMatrix], right: Union[QPolynomial4, QMatrix]
) -> QMatrix:
    """
    CK product of matrices of hyperholomorphic polynomials.
    """
    restricted = _matrix_product(
        [[restrict(f) for f in row] for row in _as_matrix(left)],
        [[restrict(g) for g in row] for row in _as_matrix(right)],
        QPolynomial3,
    )
    return [[ck_extend(entry) for entry in row] for row in restricted]


def ck_von_neumann_inv(
    g: Union[QPolynomial4, QMatrix], degree: Optional[int] = None
) -> QMatrix:
    """
    The CK inverse of I - G truncated at `degree`, computed on the restrictions as
    the geometric series sum_n G^n and extended entrywise.

    Raises:
        DomainError: If the restriction of G has a nonzero constant term.
    """
    degree = configuration.default_degree if degree is None else degree
    if degree < 0:
        raise DomainError(f'Degree {degree} is negative.')
    matrix = [[restrict(f) for f in row] for row in _as_matrix(g)]
    p, q = _matrix_shape(matrix)
    if p != q:
        raise ShapeMismatchError(f'Only square matrices are invertible, got {p}x{q}.')
    for row in matrix:
        for entry in row:
            if (0, 0, 0) in entry.terms:
                raise DomainError(
                    'The restriction of G has a nonzero constant term; the geometric '
                    'series does not terminate.'
                )
    identity = [
        [QPolynomial3.constant(E0) if i == j else QPolynomial3() for j in range(p)]
        for i in range(p)
    ]
    total = identity
    power = identity
    for _ in range(degree):
        power = [
            [entry.truncate(degree) for entry in row]
            for row in _matrix_product(power, matrix, QPolynomial3)
        ]
        total = [
            [a + b for a, b in zip(row_total, row_power)]
            for row_total, row_power in zip(total, power)
        ]
    return [[ck_extend(entry) for entry in row] for row in total]


def matrix_to_json(matrix: QMatrix) -> list:
    return [[entry.to_json() for entry in row] for row in matrix]


def matrix_from_json(data, kind: type = QPolynomial4) -> QMatrix:
    return [[kind.from_json(entry) for entry in row] for row in data]


def from_fueter_series(series: TruncatedSeries) -> QMatrix:
    """
    The matrix of hyperholomorphic polynomials sum_alpha zeta^alpha f_alpha of a
    series tagged with the Fueter basis, coefficients multiplied on the right.
    """
    if series.basis is not Basis.FUETER:
        raise BasisMismatchError(
            f'Expected a Fueter series, got a {series.basis.value} series.'
        )
    if series.max_var > 3:
        raise DomainError(
            f'Fueter monomials have three variables, the series has {series.max_var}.'
        )
    p, q = series.shape
    result = [[QPolynomial4() for _ in range(q)] for _ in range(p)]
    for alpha, coefficient in series.coeffs.items():
        monomial = fueter_monomial(alpha.dense(3))
        for i in range(p):
            for j in range(q):
                value = series.ring.to_quaternion(coefficient, i, j)
                if value.is_zero():
                    continue
                result[i][j] = result[i][j] + monomial * value
    return result


def monomial_series_polynomial(series: TruncatedSeries) -> list[list[QPolynomial3]]:
    """
    The matrix of polynomials sum_alpha x^alpha f_alpha of a monomial series in at
    most three variables.
    """
    if series.basis is not Basis.MONOMIAL:
        raise BasisMismatchError(
            f'Expected a monomial series, got a {series.basis.value} series.'
        )
    if series.max_var > 3:
        raise DomainError(
            f'Expected at most three variables, the series has {series.max_var}.'
        )
    p, q = series.shape
    result = [[QPolynomial3() for _ in range(q)] for _ in range(p)]
    for alpha, coefficient in series.coeffs.items():
        exponents = alpha.dense(3)
        for i in range(p):
            for j in range(q):
                value = series.ring.to_quaternion(coefficient, i, j)
                result[i][j] = result[i][j] + QPolynomial3({exponents: value})
    return result
