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
import itertools
import math
from collections import Counter
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from scipy.special import comb

from rational_white_noise.errors import DomainError


@dataclass(frozen=True)
class MultiIndex:
    """
    A finitely supported sequence of nonnegative integers indexed by the positions
    1, 2, 3, ... and stored sparsely as sorted `(position, exponent)` pairs with
    strictly positive exponents.
    """

    entries: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        entries = tuple((int(p), int(e)) for p, e in self.entries)
        previous = 0
        for position, exponent in entries:
            if position <= previous:
                raise DomainError(
                    f'Positions of {entries} must be positive and strictly increasing.'
                )
            if exponent <= 0:
                raise DomainError(f'Stored exponents of {entries} must be positive.')
            previous = position
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_dict(cls, exponents: Mapping[int, int]) -> 'MultiIndex':
        for position, exponent in exponents.items():
            if exponent < 0:
                raise DomainError(
                    f'Exponent {exponent} at position {position} is negative.'
                )
        return cls(tuple(sorted((p, e) for p, e in exponents.items() if e != 0)))

    @classmethod
    def from_dense(cls, exponents: Sequence[int]) -> 'MultiIndex':
        """
        Builds a multi-index from exponents listed for positions 1, 2, ...
        """
        return cls.from_dict({p: e for p, e in enumerate(exponents, start=1)})

    @classmethod
    def unit(cls, position: int) -> 'MultiIndex':
        if position < 1:
            raise DomainError(f'Position {position} is not a positive integer.')
        return cls(((position, 1),))

    @classmethod
    def from_json(cls, data) -> 'MultiIndex':
        """
        Reads the sparse JSON form `[[position, exponent], ...]`.
        """
        exponents: dict[int, int] = {}
        for pair in data:
            position, exponent = pair
            if isinstance(position, bool) or not isinstance(position, int):
                raise ValueError(f'Position {position!r} is not an integer.')
            if isinstance(exponent, bool) or not isinstance(exponent, int):
                raise ValueError(f'Exponent {exponent!r} is not an integer.')
            if position in exponents:
                raise DomainError(f'Position {position} is listed twice.')
            if position < 1:
                raise DomainError(f'Position {position} is not a positive integer.')
            exponents[position] = exponent
        return cls.from_dict(exponents)

    def to_json(self) -> list[list[int]]:
        return [[p, e] for p, e in self.entries]

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def exponent(self, position: int) -> int:
        for p, e in self.entries:
            if p == position:
                return e
        return 0

    def dense(self, length: int) -> tuple[int, ...]:
        if self.max_position > length:
            raise DomainError(f'{self} has support beyond position {length}.')
        exponents = self.as_dict()
        return tuple(exponents.get(p, 0) for p in range(1, length + 1))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def max_position(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    @property
    def weight(self) -> int:
        return weight(self)

    def grlex_key(self) -> tuple:
        """
        Sort key of the graded order: lower weight first, then the index with the
        larger exponent at the smallest differing position.
        """
        return (self.weight, tuple((p, -e) for p, e in self.entries))

    def __lt__(self, other: 'MultiIndex') -> bool:
        return self.grlex_key() < other.grlex_key()

    def __add__(self, other: 'MultiIndex') -> 'MultiIndex':
        return add(self, other)

    def __str__(self) -> str:
        if not self.entries:
            return '0'
        return ' + '.join(f'{e}e{p}' if e > 1 else f'e{p}' for p, e in self.entries)


ZERO = MultiIndex()


def add(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    exponents = Counter(a.as_dict())
    exponents.update(b.as_dict())
    return MultiIndex.from_dict(exponents)


def sub(a: MultiIndex, b: MultiIndex) -> Optional[MultiIndex]:
    """
    Componentwise difference, or None if some component of `b` exceeds `a`.
    """
    exponents = a.as_dict()
    for position, exponent in b.entries:
        remaining = exponents.get(position, 0) - exponent
        if remaining < 0:
            return None
        exponents[position] = remaining
    return MultiIndex.from_dict(exponents)


def divides(a: MultiIndex, b: MultiIndex) -> bool:
    return sub(b, a) is not None


def weight(a: MultiIndex) -> int:
    return sum(e for _, e in a.entries)


def factorial(a: MultiIndex) -> int:
    """
    Exact value of the product of the factorials of the exponents.
    """
    return math.prod(math.factorial(e) for _, e in a.entries)


def multinomial(a: MultiIndex) -> Fraction:
    """
    The ratio |a|! / a! as an exact integer valued fraction.
    """
    return Fraction(math.factorial(weight(a)), factorial(a))


def two_n_pow(a: MultiIndex, q: int, sign: int = 1) -> Fraction:
    """
    Exact value of the product over positions j of (2j) to the power sign * q * a_j.
    """
    if sign not in (1, -1):
        raise DomainError(f'Sign must be 1 or -1, got {sign}.')
    value = math.prod((2 * p) ** (abs(q) * e) for p, e in a.entries)
    return Fraction(value) if sign * q >= 0 else Fraction(1, value)


def enumerate_indices(degree: int, max_var: int) -> list[MultiIndex]:
    """
    All multi-indices of weight at most `degree` supported in the first `max_var`
    positions, in graded order.
    """
    if degree < 0 or max_var < 0:
        raise DomainError(
            f'Degree {degree} and number of variables {max_var} must be nonnegative.'
        )
    indices = [
        MultiIndex.from_dict(Counter(combination))
        for total in range(degree + 1)
        for combination in itertools.combinations_with_replacement(
            range(1, max_var + 1), total
        )
    ]
    return sorted(indices, key=MultiIndex.grlex_key)


def count_indices(degree: int, max_var: int) -> int:
    if degree < 0 or max_var < 0:
        raise DomainError(
            f'Degree {degree} and number of variables {max_var} must be nonnegative.'
        )
    return int(comb(degree + max_var, max_var, exact=True))


def divisors(a: MultiIndex) -> Iterator[MultiIndex]:
    """
    All multi-indices b with b <= a componentwise.
    """
    positions = a.support
    for exponents in itertools.product(*(range(e + 1) for _, e in a.entries)):
        yield MultiIndex.from_dict(dict(zip(positions, exponents)))
