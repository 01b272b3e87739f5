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
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from rational_white_noise.errors import SingularError
from rational_white_noise.utils import parse_scalar

# Products of the units (e0 = 1, e1, e2, e3): entry [i][j] is (k, sign) with
# e_i e_j = sign * e_k.
MULTIPLICATION_TABLE = (
    ((0, 1), (1, 1), (2, 1), (3, 1)),
    ((1, 1), (0, -1), (3, 1), (2, -1)),
    ((2, 1), (3, -1), (0, -1), (1, 1)),
    ((3, 1), (2, 1), (1, -1), (0, -1)),
)

CAYLEY = np.zeros((4, 4, 4), dtype=np.int64)
for _i, _row in enumerate(MULTIPLICATION_TABLE):
    for _j, (_k, _sign) in enumerate(_row):
        CAYLEY[_i, _j, _k] = _sign


def left_regular(components) -> np.ndarray:
    """
    Real 4x4 matrix of v -> q v in the coordinates (w, x, y, z).
    """
    return np.einsum('a,abc->cb', np.asarray(components, dtype=float), CAYLEY)


Real = Union[int, float, numbers.Rational]


@dataclass(frozen=True)
class Quaternion:
    """
    A quaternion w + x e1 + y e2 + z e3 with real components of any exact or
    floating type.
    """

    w: Real = 0
    x: Real = 0
    y: Real = 0
    z: Real = 0

    @classmethod
    def unit(cls, index: int) -> 'Quaternion':
        components = [0, 0, 0, 0]
        components[index] = 1
        return cls(*components)

    @classmethod
    def from_json(cls, data) -> 'Quaternion':
        if isinstance(data, (list, tuple)):
            if len(data) != 4:
                raise ValueError(f'{data!r} is not a quaternion [w, x, y, z].')
            return cls(*(parse_scalar(value) for value in data))
        return cls(parse_scalar(data))

    @property
    def components(self) -> tuple:
        return (self.w, self.x, self.y, self.z)

    def to_json(self) -> list:
        return list(self.components)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)

    def conjugate(self) -> 'Quaternion':
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_squared(self) -> Real:
        return sum(c * c for c in self.components)

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def inverse(self) -> 'Quaternion':
        norm_squared = self.norm_squared()
        if norm_squared == 0:
            raise SingularError('The zero quaternion has no inverse.')
        if isinstance(norm_squared, numbers.Rational):
            norm_squared = Fraction(norm_squared)
        return Quaternion(*(c / norm_squared for c in self.conjugate().components))

    def __add__(self, other):
        if isinstance(other, numbers.Real):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(*(a + b for a, b in zip(self.components, other.components)))

    __radd__ = __add__

    def __neg__(self) -> 'Quaternion':
        return Quaternion(*(-c for c in self.components))

    def __sub__(self, other):
        if isinstance(other, numbers.Real):
            other = Quaternion(other)
        if not isinstance(other, Quaternion):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return qmul(self, other)
        if isinstance(other, numbers.Real):
            return Quaternion(*(c * other for c in self.components))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return Quaternion(*(other * c for c in self.components))
        return NotImplemented

    def __str__(self) -> str:
        return f'({self.w}) + ({self.x})e1 + ({self.y})e2 + ({self.z})e3'


def qmul(a: Quaternion, b: Quaternion) -> Quaternion:
    """
    Hamilton product a b.
    """
    result = [0, 0, 0, 0]
    for i, left in enumerate(a.components):
        if left == 0:
            continue
        for j, right in enumerate(b.components):
            if right == 0:
                continue
            k, sign = MULTIPLICATION_TABLE[i][j]
            result[k] = result[k] + sign * left * right
    return Quaternion(*result)


E0 = Quaternion.unit(0)
E1 = Quaternion.unit(1)
E2 = Quaternion.unit(2)
E3 = Quaternion.unit(3)
UNITS = (E0, E1, E2, E3)
