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
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, ClassVar, Optional, Union

import numpy as np
from numpy.polynomial import hermite_e

from rational_white_noise.config import config
from rational_white_noise.errors import (
    BasisMismatchError,
    DomainError,
    ShapeMismatchError,
)
from rational_white_noise.multiindex import MultiIndex
from rational_white_noise.series.general import Basis, TruncatedSeries
from rational_white_noise.utils import as_float

if TYPE_CHECKING:
    from structlog.stdlib import BoundLogger

configuration = config.get_entry_point('whitenoise')


@dataclass(frozen=True)
class HermitePoly:
    """
    The probabilists' Hermite polynomial h_n with exact integer coefficients in
    ascending powers.
    """

    degree: int
    coefficients: tuple[int, ...]

    def __call__(self, x):
        """
        Horner evaluation; works elementwise on arrays.
        """
        result = 0.0
        for coefficient in reversed(self.coefficients):
            result = result * x + as_float(coefficient)
        return result

    def to_json(self) -> dict:
        return {'degree': self.degree, 'coefficients': list(self.coefficients)}


@lru_cache(maxsize=None)
def hermite(n: int) -> HermitePoly:
    """
    h_n from the recurrence h_(n+1) = x h_n - n h_(n-1), h_0 = 1, h_1 = x.
    """
    if n < 0:
        raise DomainError(f'Hermite polynomials have nonnegative degree, got {n}.')
    if n == 0:
        return HermitePoly(0, (1,))
    if n == 1:
        return HermitePoly(1, (0, 1))
    current, previous = hermite(n - 1).coefficients, hermite(n - 2).coefficients
    shifted = (0, *current)
    lowered = previous + (0,) * (len(shifted) - len(previous))
    return HermitePoly(
        n, tuple(a - (n - 1) * b for a, b in zip(shifted, lowered))
    )


def hermite_eval(n: int, x):
    return hermite(n)(x)


def chaos_eval(alpha: MultiIndex, x):
    """
    The chaos element prod_k h_(alpha_k)(x_k) at samples `x` whose last axis holds
    the coordinates 1, 2, ...
    """
    x = np.asarray(x, dtype=float)
    if alpha.max_position > x.shape[-1]:
        raise DomainError(
            f'{alpha} needs {alpha.max_position} coordinates, samples have '
            f'{x.shape[-1]}.'
        )
    result = np.ones(x.shape[:-1])
    for position, exponent in alpha.entries:
        result = result * hermite_eval(exponent, x[..., position - 1])
    return result


@dataclass(frozen=True)
class GaussianSampler:
    """
    Standard normal samples from a Philox 4x64 counter based generator keyed by the
    seed. Block `i` of the stream starts at counter word 2 equal to `counter + i`,
    so blocks never overlap and do not depend on the order they are drawn in.
    Normals are produced by the ziggurat method of `numpy.random.Generator`.
    """

    seed: int
    counter: int = 0

    algorithm: ClassVar[str] = 'philox4x64-ziggurat'

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise DomainError(f'Seed {self.seed} is not a 64 bit unsigned integer.')
        if not 0 <= self.counter < 2**64:
            raise DomainError(f'Counter {self.counter} is not a 64 bit integer.')

    def generator(self, block: int) -> np.random.Generator:
        counter = np.array([0, 0, self.counter + block, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=self.seed, counter=counter))

    def normals(self, block: int, rows: int, dim: int) -> np.ndarray:
        return self.generator(block).standard_normal((rows, dim))


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    std_error: float
    n: int
    seed: int

    def to_json(self) -> dict:
        return {
            'estimate': self.estimate,
            'std_error': self.std_error,
            'n': self.n,
            'seed': self.seed,
        }


def _chunk_statistics(values: np.ndarray) -> tuple[int, float, float]:
    mean = float(np.mean(values))
    return values.size, mean, float(np.sum((values - mean) ** 2))


def monte_carlo(  # noqa: PLR0913
    function: Callable[[np.ndarray], np.ndarray],
    dim: int,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    logger: 'BoundLogger' = None,
) -> MonteCarloEstimate:
    """
    Sample mean and standard error of `function` over iid standard normal vectors
    of length `dim`. Samples are drawn in fixed size chunks and the chunk statistics
    are merged in chunk order, so the result only depends on the seed and the
    sample count.

    Args:
        function: Maps an array of samples (rows x dim) to one value per row.
        dim (int): Number of coordinates per sample.
        n_samples (int): Sample count, at least the configured minimum.
        seed (int): Seed of the sampler.
        workers (int): Threads evaluating chunks.
        logger (BoundLogger): A structlog logger.
    """
    n_samples = configuration.samples if n_samples is None else n_samples
    seed = configuration.seed if seed is None else seed
    workers = configuration.workers if workers is None else workers
    if n_samples < configuration.min_samples:
        raise DomainError(
            f'At least {configuration.min_samples} samples are needed, got '
            f'{n_samples}.'
        )
    sampler = GaussianSampler(seed)
    chunk_size = configuration.chunk_size
    chunks = [
        (block, min(chunk_size, n_samples - block * chunk_size))
        for block in range(math.ceil(n_samples / chunk_size))
    ]
    if logger:
        logger.debug(
            'Drawing Monte Carlo samples.',
            samples=n_samples,
            chunks=len(chunks),
            algorithm=sampler.algorithm,
        )

    def run(chunk: tuple[int, int]) -> tuple[int, float, float]:
        block, rows = chunk
        values = np.asarray(function(sampler.normals(block, rows, dim)), dtype=float)
        return _chunk_statistics(values.reshape(rows))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            statistics = list(executor.map(run, chunks))
    else:
        statistics = [run(chunk) for chunk in chunks]
    count, mean, m2 = statistics[0]
    for other_count, other_mean, other_m2 in statistics[1:]:
        total = count + other_count
        delta = other_mean - mean
        mean += delta * other_count / total
        m2 += other_m2 + delta * delta * count * other_count / total
        count = total
    variance = max(m2 / (count - 1), 0.0) if count > 1 else 0.0
    return MonteCarloEstimate(
        estimate=mean,
        std_error=math.sqrt(variance / count),
        n=count,
        seed=seed,
    )


def mc_inner(  # noqa: PLR0913
    alpha: MultiIndex,
    beta: MultiIndex,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    dim: Optional[int] = None,
    workers: Optional[int] = None,
    logger: 'BoundLogger' = None,
) -> MonteCarloEstimate:
    """
    Estimates E[H_alpha H_beta], which is alpha! when alpha = beta and 0 otherwise.
    """
    needed = max(alpha.max_position, beta.max_position, 1)
    dim = needed if dim is None else dim
    if dim < needed:
        raise DomainError(f'{dim} coordinates cannot hold {alpha} and {beta}.')
    return monte_carlo(
        lambda x: chaos_eval(alpha, x) * chaos_eval(beta, x),
        dim,
        n_samples,
        seed,
        workers,
        logger,
    )


def _scalar_chaos_terms(series: TruncatedSeries) -> list[tuple[MultiIndex, float]]:
    if series.basis is not Basis.CHAOS:
        raise BasisMismatchError(
            f'Moments are taken of chaos series, got a {series.basis.value} series.'
        )
    if series.shape != (1, 1) or series.ring.name not in ('real', 'rational'):
        raise ShapeMismatchError(
            'Moments are taken of real scalar series, got '
            f'{series.shape} over {series.ring.name}.'
        )
    return [
        (alpha, as_float(series.ring.scalar(value)))
        for alpha, value in series.terms()
    ]


def _series_function(terms: list[tuple[MultiIndex, float]]):
    def function(x: np.ndarray) -> np.ndarray:
        total = np.zeros(x.shape[:-1])
        for alpha, coefficient in terms:
            total = total + coefficient * chaos_eval(alpha, x)
        return total

    return function


def mc_series_moment(
    series: TruncatedSeries,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    logger: 'BoundLogger' = None,
) -> MonteCarloEstimate:
    """
    Estimates the expectation of a chaos series, whose exact value is its constant
    coefficient.
    """
    function = _series_function(_scalar_chaos_terms(series))
    return monte_carlo(
        function, max(series.max_var, 1), n_samples, seed, workers, logger
    )


def mc_product_moment(
    left: TruncatedSeries,
    right: TruncatedSeries,
    n_samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: Optional[int] = None,
    logger: 'BoundLogger' = None,
) -> MonteCarloEstimate:
    """
    Estimates the expectation of the pointwise product of two chaos series.
    """
    f = _series_function(_scalar_chaos_terms(left))
    g = _series_function(_scalar_chaos_terms(right))
    return monte_carlo(
        lambda x: f(x) * g(x),
        max(left.max_var, right.max_var, 1),
        n_samples,
        seed,
        workers,
        logger,
    )


def quadrature_inner(m: int, n: int, points: Optional[int] = None) -> float:
    """
    E[h_m(X) h_n(X)] for X standard normal by Gauss-Hermite quadrature with the
    weight exp(-x^2 / 2).
    """
    points = configuration.quadrature_points if points is None else points
    nodes, weights = hermite_e.hermegauss(points)
    values = hermite_eval(m, nodes) * hermite_eval(n, nodes)
    return float(np.sum(weights * values) / math.sqrt(2 * math.pi))


def hermite_values(n: int, x: Union[float, list]) -> Union[float, list]:
    values = hermite_eval(n, np.asarray(x, dtype=float))
    return values.tolist() if np.ndim(values) else float(values)
