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
"""
Coefficient rings of truncated series and realizations.

Every coefficient is a numpy array holding a p x q matrix; scalars are 1 x 1
matrices. Quaternionic matrices carry a trailing axis of length 4 for the
components (w, x, y, z).
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Sequence
from fractions import Fraction
from typing import ClassVar

import numpy as np
import scipy.linalg
import sympy

from rational_white_noise.errors import (
    DomainError,
    ShapeMismatchError,
    SingularError,
)
from rational_white_noise.fueter.quaternion import CAYLEY, Quaternion, left_regular
from rational_white_noise.utils import as_float, parse_complex, parse_scalar


class CoefficientRing(ABC):
    """
    Arithmetic on matrices with entries in a fixed ring.
    """

    name: ClassVar[str]
    commutative: ClassVar[bool] = True
    exact: ClassVar[bool] = False

    def __repr__(self) -> str:
        return f'{type(self).__name__}()'

    def __eq__(self, other) -> bool:
        return type(self) is type(other)

    def __hash__(self) -> int:
        return hash(type(self))

    @abstractmethod
    def zeros(self, shape: tuple[int, int]) -> np.ndarray:
        pass

    @abstractmethod
    def identity(self, n: int) -> np.ndarray:
        pass

    @abstractmethod
    def coerce_entry(self, value):
        """Converts a python or JSON scalar into an entry of the ring."""

    @abstractmethod
    def entry_to_json(self, value):
        pass

    def shape(self, a: np.ndarray) -> tuple[int, int]:
        return (a.shape[0], a.shape[1])

    def coerce(self, value, shape: tuple[int, int] = None) -> np.ndarray:
        """
        Converts a matrix given as an array or nested lists of ring entries. A single
        entry becomes a 1 x 1 matrix.
        """
        if isinstance(value, np.ndarray) and value.ndim == self._ndim:
            if value.dtype == self._dtype:
                result = value.copy()
            else:
                p, q = self.shape(value)
                rows = [[value[i, j] for j in range(q)] for i in range(p)]
                result = self._from_entries(rows, (p, q))
        elif self._is_entry(value):
            result = self._from_entries([[value]], (1, 1))
        else:
            rows = [list(row) for row in value]
            if len({len(row) for row in rows}) > 1:
                raise ShapeMismatchError(f'Rows of {value!r} have different lengths.')
            columns = len(rows[0]) if rows else (shape[1] if shape else 0)
            result = self._from_entries(rows, (len(rows), columns))
        if shape is not None and self.shape(result) != tuple(shape):
            raise ShapeMismatchError(
                f'Expected a {shape[0]}x{shape[1]} matrix, got '
                f'{self.shape(result)[0]}x{self.shape(result)[1]}.'
            )
        return result

    def from_json(self, data, shape: tuple[int, int] = None) -> np.ndarray:
        return self.coerce(data, shape)

    def to_json(self, a: np.ndarray):
        """
        JSON form of a matrix; 1 x 1 matrices are written as a single entry.
        """
        p, q = self.shape(a)
        if (p, q) == (1, 1):
            return self.entry_to_json(a[0, 0])
        return [[self.entry_to_json(a[i, j]) for j in range(q)] for i in range(p)]

    _ndim: ClassVar[int] = 2
    _dtype: ClassVar[np.dtype] = np.dtype(float)

    def _is_entry(self, value) -> bool:
        return not isinstance(value, (list, tuple, np.ndarray))

    def _from_entries(self, rows: Sequence[Sequence], shape: tuple[int, int]):
        result = self.zeros(shape)
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                result[i, j] = self.coerce_entry(value)
        return result

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape != b.shape:
            raise ShapeMismatchError(f'Cannot add shapes {a.shape} and {b.shape}.')
        return a + b

    def neg(self, a: np.ndarray) -> np.ndarray:
        return -a

    def sub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.add(a, self.neg(b))

    def scale(self, a: np.ndarray, factor) -> np.ndarray:
        """
        Multiplies by a real, rational or complex scalar.
        """
        if isinstance(factor, Fraction):
            factor = as_float(factor)
        return a * factor

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        (p, n), (m, q) = self.shape(a), self.shape(b)
        if n != m:
            raise ShapeMismatchError(
                f'Cannot multiply a {p}x{n} matrix by a {m}x{q} matrix.'
            )
        if n == 0:
            return self.zeros((p, q))
        return self._matmul(a, b)

    def _matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a @ b

    def block(self, rows: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
        """
        Assembles a block matrix from a nested list of blocks.
        """
        return np.concatenate([np.concatenate(row, axis=1) for row in rows], axis=0)

    def is_zero(self, a: np.ndarray) -> bool:
        return not np.any(a != 0)

    def size_squared(self, a: np.ndarray):
        """
        Sum of the squared moduli of the entries.
        """
        return float(np.sum(np.abs(a) ** 2))

    def size(self, a: np.ndarray) -> float:
        return math.sqrt(as_float(self.size_squared(a)))

    def max_abs(self, a: np.ndarray) -> float:
        return float(np.max(np.abs(a))) if a.size else 0.0

    def allclose(self, a: np.ndarray, b: np.ndarray, tolerance: float) -> bool:
        if a.shape != b.shape:
            return False
        return self.max_abs(self.sub(a, b)) <= tolerance

    def conj(self, a: np.ndarray) -> np.ndarray:
        return np.conj(a)

    def scalar(self, a: np.ndarray):
        """
        The entry of a 1 x 1 matrix.
        """
        if self.shape(a) != (1, 1):
            raise ShapeMismatchError(f'{self.shape(a)} is not a scalar shape.')
        return a[0, 0]

    def inv(self, a: np.ndarray) -> np.ndarray:
        p, q = self.shape(a)
        if p != q:
            raise ShapeMismatchError(f'Cannot invert a non-square {p}x{q} matrix.')
        if p == 0:
            return self.zeros((0, 0))
        return self._inv(a)

    @abstractmethod
    def _inv(self, a: np.ndarray) -> np.ndarray:
        pass

    def solve(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """
        Returns the solution X of a X = b.
        """
        return self.matmul(self.inv(a), b)

    def condition_number(self, a: np.ndarray) -> float:
        if self.shape(a)[0] == 0:
            return 1.0
        return float(np.linalg.cond(np.asarray(a, dtype=complex)))

    def to_quaternion(self, a: np.ndarray, i: int, j: int) -> Quaternion:
        return Quaternion(a[i, j])


class RealRing(CoefficientRing):
    name = 'real'

    def zeros(self, shape):
        return np.zeros(shape, dtype=float)

    def identity(self, n):
        return np.eye(n, dtype=float)

    def coerce_entry(self, value):
        if isinstance(value, (complex, np.complexfloating)) and value.imag != 0:
            raise DomainError(f'{value!r} is not real.')
        if isinstance(value, complex):
            value = value.real
        return as_float(parse_scalar(value))

    def entry_to_json(self, value):
        return float(np.real(value)) if np.isrealobj(value) else complex(value)

    def coerce(self, value, shape=None):
        if isinstance(value, np.ndarray) and np.iscomplexobj(value):
            if np.any(np.imag(value) != 0):
                raise DomainError('A real matrix cannot hold complex entries.')
            value = np.real(value)
        return super().coerce(value, shape)

    def _inv(self, a):
        return _numeric_inverse(a)

    def solve(self, a, b):
        return _numeric_solve(a, b)


class ComplexRing(CoefficientRing):
    name = 'complex'
    _dtype = np.dtype(complex)

    def zeros(self, shape):
        return np.zeros(shape, dtype=complex)

    def identity(self, n):
        return np.eye(n, dtype=complex)

    def coerce_entry(self, value):
        if isinstance(value, (complex, np.complexfloating)):
            return complex(value)
        return parse_complex(value)

    def _is_entry(self, value) -> bool:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return not any(isinstance(v, (list, tuple)) for v in value)
        return super()._is_entry(value)

    def coerce(self, value, shape=None):
        if isinstance(value, np.ndarray) and value.ndim == 2:
            return np.array(value, dtype=complex)
        if shape is not None and tuple(shape) != (1, 1) and self._is_entry(value):
            # a row of two real numbers rather than [re, im]
            return super().coerce([value], shape)
        return super().coerce(value, shape)

    def entry_to_json(self, value):
        return complex(value)

    def _inv(self, a):
        return _numeric_inverse(a)

    def solve(self, a, b):
        return _numeric_solve(a, b)


class RationalRing(CoefficientRing):
    """
    Exact arithmetic with `fractions.Fraction` entries held in object arrays.
    """

    name = 'rational'
    exact = True
    _dtype = np.dtype(object)

    def zeros(self, shape):
        result = np.empty(shape, dtype=object)
        result[...] = Fraction(0)
        return result

    def identity(self, n):
        result = self.zeros((n, n))
        for i in range(n):
            result[i, i] = Fraction(1)
        return result

    def coerce_entry(self, value):
        value = parse_scalar(value)
        return Fraction(value)

    def entry_to_json(self, value):
        return Fraction(value)

    def coerce(self, value, shape=None):
        if isinstance(value, np.ndarray) and value.ndim == 2 and value.dtype != object:
            if np.iscomplexobj(value):
                raise ValueError('Complex matrices have no rational representation.')
        return super().coerce(value, shape)

    def scale(self, a, factor):
        if isinstance(factor, (int, Fraction)):
            return self._canonical(a * Fraction(factor))
        return a * factor

    def _matmul(self, a, b):
        return self._canonical(np.dot(a, b))

    def add(self, a, b):
        return self._canonical(super().add(a, b))

    def _canonical(self, a: np.ndarray) -> np.ndarray:
        if a.dtype != object:
            return a
        result = np.empty(a.shape, dtype=object)
        for index, value in np.ndenumerate(a):
            result[index] = Fraction(value) if isinstance(value, int) else value
        return result

    def size_squared(self, a):
        return sum((value * value for value in a.flat), Fraction(0))

    def max_abs(self, a):
        return max((abs(value) for value in a.flat), default=Fraction(0))

    def allclose(self, a, b, tolerance):
        if a.shape != b.shape:
            return False
        return self.max_abs(self.sub(a, b)) <= tolerance

    def conj(self, a):
        return a

    def _inv(self, a):
        matrix = sympy.Matrix(a.tolist())
        if matrix.det() == 0:
            raise SingularError(f'The rational matrix {a.tolist()} is singular.')
        inverse = matrix.inv()
        p = self.shape(a)[0]
        result = self.zeros((p, p))
        for i in range(p):
            for j in range(p):
                entry = sympy.Rational(inverse[i, j])
                result[i, j] = Fraction(int(entry.p), int(entry.q))
        return result

    def condition_number(self, a):
        if self.shape(a)[0] == 0:
            return 1.0
        return float(np.linalg.cond(a.astype(float)))


class QuaternionRing(CoefficientRing):
    """
    Matrices of quaternions stored as real arrays of shape (p, q, 4).
    """

    name = 'quaternion'
    commutative = False
    _ndim = 3

    def zeros(self, shape):
        return np.zeros((*shape, 4), dtype=float)

    def identity(self, n):
        result = self.zeros((n, n))
        for i in range(n):
            result[i, i, 0] = 1.0
        return result

    def coerce_entry(self, value):
        if isinstance(value, np.ndarray):
            return value.astype(float)
        if isinstance(value, Quaternion):
            return np.array([as_float(c) for c in value.components], dtype=float)
        quaternion = Quaternion.from_json(value)
        return np.array([as_float(c) for c in quaternion.components], dtype=float)

    def _is_entry(self, value) -> bool:
        if isinstance(value, Quaternion):
            return True
        if isinstance(value, (list, tuple)) and len(value) == 4:
            return not any(isinstance(v, (list, tuple)) for v in value)
        return super()._is_entry(value)

    def coerce(self, value, shape=None):
        if isinstance(value, np.ndarray) and value.ndim == 2:
            embedded = self.zeros(value.shape)
            embedded[..., 0] = np.real(value)
            return embedded
        if shape is not None and tuple(shape) != (1, 1) and self._is_entry(value):
            if not isinstance(value, Quaternion):
                return super().coerce([value], shape)
        return super().coerce(value, shape)

    def entry_to_json(self, value):
        return [float(c) for c in value]

    def _matmul(self, a, b):
        return np.einsum('ika,kjb,abc->ijc', a, b, CAYLEY)

    def scale(self, a, factor):
        return a * float(factor)

    def size_squared(self, a):
        return float(np.sum(a * a))

    def max_abs(self, a):
        if not a.size:
            return 0.0
        return float(np.max(np.sqrt(np.sum(a * a, axis=-1))))

    def conj(self, a):
        raise ShapeMismatchError(
            'Inner products need commutative scalar coefficients, not quaternions.'
        )

    def embed(self, a: np.ndarray) -> np.ndarray:
        """
        Real matrix of left multiplication by `a`, built from 4x4 blocks.
        """
        p, q = self.shape(a)
        result = np.zeros((4 * p, 4 * q))
        for i in range(p):
            for j in range(q):
                result[4 * i : 4 * i + 4, 4 * j : 4 * j + 4] = left_regular(a[i, j])
        return result

    def _inv(self, a):
        p = self.shape(a)[0]
        inverse = _numeric_inverse(self.embed(a))
        result = self.zeros((p, p))
        for i in range(p):
            for j in range(p):
                result[i, j] = inverse[4 * i : 4 * i + 4, 4 * j]
        return result

    def condition_number(self, a):
        if self.shape(a)[0] == 0:
            return 1.0
        return float(np.linalg.cond(self.embed(a)))

    def to_quaternion(self, a, i, j):
        return Quaternion(*(float(c) for c in a[i, j]))


def _numeric_inverse(a: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.inv(a)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularError(f'The matrix is singular: {exc}') from exc


def _numeric_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[0] != a.shape[1] or a.shape[1] != b.shape[0]:
        raise ShapeMismatchError(f'Cannot solve with shapes {a.shape} and {b.shape}.')
    if a.shape[0] == 0:
        return np.zeros(b.shape, dtype=np.result_type(a, b))
    try:
        return scipy.linalg.solve(a, b)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularError(f'The pencil is singular: {exc}') from exc


REAL = RealRing()
COMPLEX = ComplexRing()
RATIONAL = RationalRing()
QUATERNION = QuaternionRing()

RINGS = {ring.name: ring for ring in (REAL, COMPLEX, RATIONAL, QUATERNION)}


def get_ring(name: str) -> CoefficientRing:
    if name not in RINGS:
        raise ValueError(
            f'Unknown coefficient ring "{name}", expected one of {sorted(RINGS)}.'
        )
    return RINGS[name]
