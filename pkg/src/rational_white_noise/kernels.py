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
import cmath
import math
import sys
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Optional

import numpy as np
import scipy.linalg
from pydantic import Field

from rational_white_noise.config import CalculusEntryPoint
from rational_white_noise.errors import DomainError, ShapeMismatchError
from rational_white_noise.multiindex import MultiIndex
from rational_white_noise.realization.general import Realization, evaluate
from rational_white_noise.series.rings import COMPLEX
from rational_white_noise.utils import as_point, parse_complex

if TYPE_CHECKING:
    from structlog.stdlib import BoundLogger


class KernelsEntryPoint(CalculusEntryPoint):
    psd_tolerance: float = Field(
        -1e-10, le=0, description='Smallest eigenvalue still accepted as PSD.'
    )
    hermitian_tolerance: float = Field(
        1e-12, gt=0, description='Largest accepted deviation of G from G^H.'
    )
    slice_radius: float = Field(
        0.3, gt=0, lt=1, description='Radius of the Cauchy integral circles.'
    )
    slice_grid: int = Field(
        32, ge=4, description='Number of nodes per circle of the Cauchy integral.'
    )

    def load(self):
        return sys.modules[__name__]


configuration = KernelsEntryPoint(
    name='Kernels',
    description="""Arveson, Fock, Blaschke and Schur kernels on the unit ball of
    l2, Gram positivity and Agler decompositions.""",
)

Kernel = Callable[['L2Point', 'L2Point'], complex]
Multiplier = Callable[['L2Point'], complex]


@dataclass(frozen=True)
class L2Point:
    """
    A finitely supported complex sequence, stored as sorted (position, value) pairs
    with nonzero values.
    """

    entries: tuple[tuple[int, complex], ...] = ()

    def __post_init__(self):
        point = as_point(dict(self.entries))
        entries = tuple(sorted((p, complex(v)) for p, v in point.items()))
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def of(cls, z) -> 'L2Point':
        """
        Builds a point from a sequence (positions 1, 2, ...) or a mapping.
        """
        if isinstance(z, L2Point):
            return z
        return cls(tuple(as_point(z).items()))

    @classmethod
    def from_json(cls, data) -> 'L2Point':
        """
        Reads the sparse form [[position, value], ...]; values are numbers or
        [re, im].
        """
        coordinates = {}
        for position, value in data:
            if position in coordinates:
                raise ValueError(f'Position {position} is listed twice.')
            coordinates[int(position)] = parse_complex(value)
        return cls.of(coordinates)

    def to_json(self) -> list:
        return [[p, [v.real, v.imag]] for p, v in self.entries]

    def as_dict(self) -> dict[int, complex]:
        return dict(self.entries)

    def coordinate(self, position: int) -> complex:
        return self.as_dict().get(position, 0j)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    @cached_property
    def norm_squared(self) -> float:
        return math.fsum(abs(v) ** 2 for _, v in self.entries)

    def dense(self, length: int) -> np.ndarray:
        values = np.zeros(length, dtype=complex)
        for position, value in self.entries:
            if position > length:
                raise DomainError(f'Position {position} exceeds length {length}.')
            values[position - 1] = value
        return values


def inner(z: L2Point, w: L2Point) -> complex:
    """
    The l2 inner product sum_k z_k conj(w_k).
    """
    coordinates = w.as_dict()
    return sum(
        (v * coordinates[p].conjugate() for p, v in z.entries if p in coordinates),
        0j,
    )


def arveson_kernel(z: L2Point, w: L2Point) -> complex:
    """
    The Drury-Arveson kernel 1 / (1 - <z, w>).
    """
    product = inner(z, w)
    if abs(product) >= 1:
        raise DomainError(
            f'<z, w> = {product} is not inside the unit disk; the kernel has a pole '
            'at 1.'
        )
    return 1 / (1 - product)


def fock_kernel(z: L2Point, w: L2Point) -> complex:
    return cmath.exp(inner(z, w))


def _check_in_ball(a: L2Point, name: str = 'a') -> None:
    if a.norm_squared >= 1:
        raise DomainError(f'{name} has norm {math.sqrt(a.norm_squared)} >= 1.')


def blaschke(a: L2Point, z: L2Point) -> L2Point:
    """
    The Blaschke factor b_a(z) = (1 - |a|^2)^(1/2) / (1 - <z, a>) (z - a)
    (I - a* a)^(-1/2), with z and a read as rows.
    """
    _check_in_ball(a)
    r = a.norm_squared
    product = inner(z, a)
    if product == 1:
        raise DomainError('b_a has a pole where <z, a> = 1.')
    # (I - a* a)^(-1/2) = I + gamma a* a
    gamma = ((1 - r) ** -0.5 - 1) / r if r > 0 else 0.0
    a_coordinates = a.as_dict()
    difference = z.as_dict()
    for position, value in a_coordinates.items():
        difference[position] = difference.get(position, 0j) - value
    # <z - a, a>
    projection = sum(
        (difference[p] * v.conjugate() for p, v in a_coordinates.items()), 0j
    )
    factor = math.sqrt(1 - r) / (1 - product)
    image = {
        p: factor * (v + gamma * projection * a_coordinates.get(p, 0j))
        for p, v in difference.items()
    }
    return L2Point.of(image)


def blaschke_kernel_residual(a: L2Point, z: L2Point, w: L2Point) -> float:
    """
    Relative error of (1 - <b_a(z), b_a(w)>) / (1 - <z, w>) against
    (1 - |a|^2) / ((1 - <z, a>) (1 - <a, w>)).
    """
    left = blaschke_kernel(a)(z, w)
    right = (1 - a.norm_squared) / ((1 - inner(z, a)) * (1 - inner(a, w)))
    return abs(left - right) / abs(right)


def blaschke_kernel(a: L2Point) -> Kernel:
    """
    The kernel (1 - <b_a(z), b_a(w)>) / (1 - <z, w>).
    """

    def kernel(z: L2Point, w: L2Point) -> complex:
        return (1 - inner(blaschke(a, z), blaschke(a, w))) / (1 - inner(z, w))

    return kernel


def blaschke_realization(a: L2Point, n_vars: Optional[int] = None) -> Realization:
    """
    A realization of the row valued function b_a with a one dimensional state
    space: A_k = conj(a_k), C = 1, D = -a and B_k = (1 - |a|^2)^(1/2) e_k
    (I - a* a)^(1/2).
    """
    _check_in_ball(a)
    length = max(a.support, default=0) if n_vars is None else n_vars
    if a.support and max(a.support) > length:
        raise ShapeMismatchError(f'a has support beyond {length} variables.')
    r = a.norm_squared
    row = a.dense(length)
    # (I - a* a)^(1/2) = I + eta a* a
    eta = (math.sqrt(1 - r) - 1) / r if r > 0 else 0.0
    c = math.sqrt(1 - r)
    inputs = []
    for k in range(length):
        unit = np.zeros(length, dtype=complex)
        unit[k] = 1
        inputs.append((c * (unit + eta * np.conj(row[k]) * row)).reshape(1, length))
    return Realization(
        D=(-row).reshape(1, length),
        C=np.ones((1, 1), dtype=complex),
        A=tuple(np.array([[np.conj(row[k])]]) for k in range(length)),
        B=tuple(inputs),
        ring=COMPLEX,
    )


@dataclass(frozen=True)
class KernelGram:
    """
    Gram matrix of a kernel on a point set with its smallest eigenvalue.
    """

    points: tuple[L2Point, ...]
    matrix: np.ndarray
    min_eig: float
    is_psd: bool
    residual: float = 0.0

    def to_json(self, with_matrix: bool = False) -> dict:
        report = {
            'points': [point.to_json() for point in self.points],
            'min_eig': self.min_eig,
            'is_psd': self.is_psd,
            'residual': self.residual,
        }
        if with_matrix:
            report['matrix'] = self.matrix.tolist()
        return report


def kernel_gram(
    kernel: Kernel,
    points: Sequence[L2Point],
    logger: 'BoundLogger' = None,
    workers: int = 1,
) -> KernelGram:
    """
    Assembles G_ij = K(z_i, z_j) and checks positivity with a Hermitian eigenvalue
    solver. Rows may be computed by a thread pool; the result does not depend on
    `workers`.

    Args:
        kernel: The kernel evaluator.
        points: The points of the Gram matrix.
        logger (BoundLogger): A structlog logger.
        workers (int): Number of threads assembling rows.
    """
    points = tuple(L2Point.of(point) for point in points)

    def row(i: int) -> list[complex]:
        return [kernel(points[i], w) for w in points]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(row, range(len(points))))
    else:
        rows = [row(i) for i in range(len(points))]
    matrix = np.array(rows, dtype=complex).reshape(len(points), len(points))
    asymmetry = float(np.max(np.abs(matrix - matrix.conj().T))) if rows else 0.0
    if asymmetry > configuration.hermitian_tolerance and logger:
        logger.warning(
            'The Gram matrix is not Hermitian within tolerance.', asymmetry=asymmetry
        )
    if rows:
        hermitian = (matrix + matrix.conj().T) / 2
        min_eig = float(scipy.linalg.eigvalsh(hermitian)[0])
    else:
        min_eig = 0.0
    is_psd = min_eig >= configuration.psd_tolerance
    if not is_psd and logger:
        logger.warning('The Gram matrix is not positive semidefinite.', min_eig=min_eig)
    return KernelGram(
        points=points,
        matrix=matrix,
        min_eig=min_eig,
        is_psd=is_psd,
        residual=asymmetry,
    )


def schur_kernel(s: Multiplier) -> Kernel:
    """
    The kernel (1 - s(z) conj(s(w))) / (1 - <z, w>) of a scalar multiplier.
    """

    def kernel(z: L2Point, w: L2Point) -> complex:
        product = inner(z, w)
        if product == 1:
            raise DomainError('The Schur kernel has a pole where <z, w> = 1.')
        return (1 - s(z) * complex(s(w)).conjugate()) / (1 - product)

    return kernel


def schur_gram(
    s: Multiplier,
    points: Sequence[L2Point],
    logger: 'BoundLogger' = None,
    workers: int = 1,
) -> KernelGram:
    points = tuple(L2Point.of(point) for point in points)
    for point in points:
        _check_in_ball(point, 'z')
    values = {point: complex(s(point)) for point in points}
    return kernel_gram(schur_kernel(values.__getitem__), points, logger, workers)


def realization_multiplier(
    realization: Realization, logger: 'BoundLogger' = None
) -> Multiplier:
    """
    Scalar multiplier evaluated through a realization with one output and one
    input.
    """
    if (realization.n_outputs, realization.n_inputs) != (1, 1):
        raise ShapeMismatchError(
            'Multipliers are scalar; the realization has shape '
            f'{realization.n_outputs}x{realization.n_inputs}.'
        )

    def multiplier(z: L2Point) -> complex:
        value = evaluate(realization, L2Point.of(z).as_dict(), logger)
        return complex(np.asarray(value).reshape(-1)[0])

    return multiplier


def polynomial_kernel(
    terms: Sequence[tuple[complex, MultiIndex, MultiIndex]],
) -> Kernel:
    """
    The kernel sum c z^alpha conj(w)^beta over the given (c, alpha, beta) terms.
    """
    terms = tuple(terms)

    def monomial(point: L2Point, alpha: MultiIndex) -> complex:
        coordinates = point.as_dict()
        return math.prod(
            (coordinates.get(p, 0j) ** e for p, e in alpha.entries), start=1 + 0j
        )

    def kernel(z: L2Point, w: L2Point) -> complex:
        return sum(
            (
                c * monomial(z, alpha) * monomial(w, beta).conjugate()
                for c, alpha, beta in terms
            ),
            0j,
        )

    return kernel


def agler_residual(
    s: Multiplier, kernels: Mapping[int, Kernel], points: Sequence[L2Point]
) -> float:
    """
    Largest modulus over point pairs of
    1 - s(z) conj(s(w)) - sum_l (1 - z_l conj(w_l)) k_l(z, w).
    """
    points = tuple(L2Point.of(point) for point in points)
    values = [complex(s(point)) for point in points]
    residual = 0.0
    for i, z in enumerate(points):
        for j, w in enumerate(points):
            total = 1 - values[i] * values[j].conjugate()
            for position, kernel in kernels.items():
                factor = 1 - z.coordinate(position) * w.coordinate(position).conjugate()
                total -= factor * kernel(z, w)
            residual = max(residual, abs(total))
    return residual


def slice_coefficients(
    function: Callable[[L2Point], complex],
    degree: int,
    radius: Optional[float] = None,
    grid: Optional[int] = None,
) -> dict[tuple[int, int], complex]:
    """
    Taylor coefficients of a function of (z1, z2) up to total degree `degree`,
    computed by a discrete Cauchy integral over a torus of the given radius.
    """
    radius = configuration.slice_radius if radius is None else radius
    grid = configuration.slice_grid if grid is None else grid
    if degree < 0 or degree >= grid:
        raise DomainError(f'Degree {degree} must lie in [0, {grid}).')
    nodes = radius * np.exp(2j * np.pi * np.arange(grid) / grid)
    values = np.array(
        [[function(L2Point.of([z1, z2])) for z2 in nodes] for z1 in nodes],
        dtype=complex,
    )
    transform = np.fft.fft2(values) / grid**2
    return {
        (a, b): complex(transform[a, b] / radius ** (a + b))
        for a in range(degree + 1)
        for b in range(degree + 1 - a)
    }
