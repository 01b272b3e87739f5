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
Command line interface. Every subcommand reads its inputs as JSON, given either as
a file path or inline, and writes one JSON document to standard output or to the
file named by `--output`. Failures are reported as
{"error": <exception class>, "message": ...} with exit code 2 for invalid input and
3 for numeric failures.
"""

import functools
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Optional

import click
import structlog
from pydantic import BaseModel, ConfigDict, Field

from rational_white_noise import configuration as general_configuration
from rational_white_noise import kernels
from rational_white_noise.config import config
from rational_white_noise.errors import CalculusError, DomainError
from rational_white_noise.fueter import general as fueter
from rational_white_noise.multiindex import MultiIndex
from rational_white_noise.realization import general as realization
from rational_white_noise.series import general as series
from rational_white_noise.utils import (
    format_json,
    parse_complex,
    parse_scalar,
    read_json,
)
from rational_white_noise.whitenoise import configuration as whitenoise_configuration
from rational_white_noise.whitenoise import general as whitenoise

logger = structlog.get_logger()

# subcommand name -> library operations it exposes
OPERATIONS: dict[str, tuple[Callable, ...]] = {}


class Command(BaseModel):
    """
    Validated options shared by the subcommands. Defaults are read from the
    configuration when a command runs.
    """

    model_config = ConfigDict(extra='forbid', frozen=True)

    name: str
    degree: int = Field(
        default_factory=lambda: general_configuration.degree, ge=0
    )
    max_var: int = Field(
        default_factory=lambda: general_configuration.max_var, ge=0
    )
    q: float = Field(1, ge=0)
    delta: Optional[float] = Field(None, gt=0)
    seed: int = Field(
        default_factory=lambda: whitenoise_configuration.seed, ge=0, lt=2**64
    )
    samples: int = Field(
        default_factory=lambda: whitenoise_configuration.samples, ge=1
    )
    tolerance: float = Field(
        default_factory=lambda: general_configuration.tolerance, gt=0
    )
    workers: int = Field(1, ge=1)
    output: Optional[Path] = None


def configure_logging(level: int = logging.WARNING) -> None:
    """
    Renders log events to standard error so standard output only carries JSON.
    """
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.KeyValueRenderer(
                key_order=['level', 'event'], sort_keys=True
            ),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(sys.stderr),
        cache_logger_on_first_use=False,
    )


def _fail(exc: Exception, code: int) -> None:
    click.echo(
        format_json({'error': type(exc).__name__, 'message': str(exc)}), nl=False
    )
    raise click.exceptions.Exit(code) from exc


def _emit(command: Command, result) -> None:
    text = format_json(result)
    if command.output is None:
        click.echo(text, nl=False)
        return
    with open(command.output, 'w', encoding='utf-8', newline='\n') as file:
        file.write(text)


def operation(name: str, *operations: Callable):
    """
    Registers a subcommand that returns a JSON-ready result. Options named like the
    fields of `Command` are validated by it; the remaining ones are passed through.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(**kwargs):
            options = {
                key: kwargs.pop(key)
                for key in list(kwargs)
                if key in Command.model_fields
            }
            given = {key: value for key, value in options.items() if value is not None}
            try:
                command = Command(name=name, **given)
                result = func(command, **kwargs)
            except ArithmeticError as exc:
                _fail(exc, 3)
            except (CalculusError, ValueError, KeyError, TypeError) as exc:
                _fail(exc, 2)
            _emit(command, result)

        OPERATIONS[name] = operations
        return cli.command(name)(wrapper)

    return decorator


def output_option(func):
    return click.option(
        '-o',
        '--output',
        type=click.Path(dir_okay=False, path_type=Path),
        help='Write the result to this file instead of standard output.',
    )(func)


def _number(value):
    if isinstance(value, list):
        return parse_complex(value)
    return parse_scalar(value)


def _read_point(source: str) -> dict:
    """
    Reads a sparse point [[position, value], ...] keeping exact values exact.
    """
    data = read_json(source)
    if not isinstance(data, list):
        raise ValueError('A point is a list [[position, value], ...].')
    point = {}
    for position, value in data:
        if position in point:
            raise ValueError(f'Position {position} is listed twice.')
        point[int(position)] = _number(value)
    return point


def _read_points(source: str) -> list[kernels.L2Point]:
    return [kernels.L2Point.from_json(point) for point in read_json(source)]


def _read_series(source: str) -> series.TruncatedSeries:
    return series.TruncatedSeries.from_json(read_json(source))


def _read_realization(source: str) -> realization.Realization:
    return realization.Realization.from_json(read_json(source))


def _read_polynomial(source: str, kind: type):
    """
    Reads a polynomial or, when given as a list of rows, a polynomial matrix.
    """
    data = read_json(source)
    if data and isinstance(data[0], list):
        return fueter.matrix_from_json(data, kind)
    return kind.from_json(data)


def _read_kernels(source: str) -> dict[int, kernels.Kernel]:
    """
    Reads [{"var": l, "terms": [{"coeff": c, "z": alpha, "w": beta}, ...]}, ...].
    """
    result = {}
    for entry in read_json(source):
        position = int(entry['var'])
        if position in result:
            raise ValueError(f'Variable {position} has two kernels.')
        result[position] = kernels.polynomial_kernel(
            [
                (
                    parse_complex(term['coeff']),
                    MultiIndex.from_json(term['z']),
                    MultiIndex.from_json(term['w']),
                )
                for term in entry['terms']
            ]
        )
    return result


@click.group()
@click.option(
    '--config',
    'config_path',
    type=click.Path(exists=True, dir_okay=False),
    help='YAML file overriding configuration fields per calculus.',
)
@click.option('-v', '--verbose', is_flag=True, help='Log debug events.')
def cli(config_path: Optional[str], verbose: bool):
    """
    Truncated Wick, realization, Fueter and kernel calculi on JSON inputs.
    """
    configure_logging(logging.DEBUG if verbose else logging.WARNING)
    if config_path:
        try:
            config.load_yaml(config_path)
        except (ValueError, KeyError) as exc:
            _fail(exc, 2)


@operation('wick-mul', series.wick_mul)
@click.argument('left')
@click.argument('right')
@output_option
def wick_mul(command: Command, left: str, right: str):
    """Wick product of two series."""
    return series.wick_mul(_read_series(left), _read_series(right)).to_json()


@operation('wick-inv', series.wick_inv, series.truncate)
@click.argument('source')
@click.option('-d', '--degree', type=int, help='Re-truncate to this degree first.')
@click.option('-m', '--max-var', type=int, help='Re-truncate to these variables first.')
@output_option
def wick_inv(command: Command, source: str):
    """Wick inverse of a square series with invertible constant term."""
    value = _read_series(source)
    options = command.model_fields_set
    value = series.truncate(
        value,
        command.degree if 'degree' in options else None,
        command.max_var if 'max_var' in options else None,
    )
    return series.wick_inv(value, logger).to_json()


@operation('hermite', series.hermite_transform, series.inverse_hermite)
@click.argument('source')
@click.option('--inverse', is_flag=True, help='Map a monomial series back to chaos.')
@output_option
def hermite(command: Command, source: str, inverse: bool):
    """Hermite transform of a chaos series."""
    value = _read_series(source)
    if inverse:
        return series.inverse_hermite(value).to_json()
    return series.hermite_transform(value).to_json()


@operation('evaluate', series.evaluate)
@click.argument('source')
@click.argument('point')
@output_option
def evaluate(command: Command, source: str, point: str):
    """Value of a monomial series at a sparse point."""
    value = series.evaluate(_read_series(source), _read_point(point))
    return {'value': series.value_to_json(value)}


@operation('norms', series.norms)
@click.argument('source')
@click.option('-q', '--q', type=float, help='Kondratiev and Hida index.')
@output_option
def norms(command: Command, source: str):
    """Squared norms of a series in all supported spaces."""
    return series.norms(_read_series(source), command.q).to_json()


@operation('leibenzon', series.leibenzon)
@click.argument('source')
@click.option('-j', '--variable', type=int, required=True, help='Shifted variable.')
@output_option
def leibenzon(command: Command, source: str, variable: int):
    """Backward shift R_j of a series."""
    return series.leibenzon(_read_series(source), variable).to_json()


@operation(
    'gleason-check',
    series.gleason_residual,
    series.multiply_by_variable,
    series.constant_part,
)
@click.argument('source')
@output_option
def gleason_check(command: Command, source: str):
    """Largest coefficient of F - F(0) - sum_j z_j R_j F."""
    residual = series.gleason_residual(_read_series(source))
    return {'max_residual': series.max_coefficient(residual)}


@operation('kq-member', series.kq_membership)
@click.argument('point')
@click.option('-q', '--q', type=float, help='Index of the weights (2N)^q.')
@click.option('--delta', type=float, required=True, help='Radius of the set.')
@output_option
def kq_member(command: Command, point: str):
    """Membership of a point in the set K_q(delta)."""
    membership = series.kq_membership(_read_point(point), command.q, command.delta)
    if not membership.inside:
        logger.debug('Point lies outside K_q.', value=membership.value)
    return membership.to_json()


@operation('realize-series', realization.to_series)
@click.argument('source')
@click.option('-d', '--degree', type=int, help='Truncation degree.')
@click.option(
    '--basis',
    type=click.Choice([basis.value for basis in series.Basis]),
    default=series.Basis.MONOMIAL.value,
    show_default=True,
)
@output_option
def realize_series(command: Command, source: str, basis: str):
    """Expansion of a realization as a truncated series."""
    value = realization.to_series(
        _read_realization(source), command.degree, series.Basis(basis), logger
    )
    return value.to_json()


@operation('realize-eval', realization.evaluate, realization.pencil_condition)
@click.argument('source')
@click.argument('point')
@output_option
def realize_eval(command: Command, source: str, point: str):
    """Value of a realization at a sparse point."""
    value = _read_realization(source)
    z = _read_point(point)
    return {
        'value': series.value_to_json(realization.evaluate(value, z, logger)),
        'condition_number': realization.pencil_condition(value, z),
    }


@operation('realize-product', realization.product)
@click.argument('left')
@click.argument('right')
@output_option
def realize_product(command: Command, left: str, right: str):
    """Realization of the product of two realized functions."""
    value = realization.product(
        _read_realization(left), _read_realization(right), logger
    )
    return value.to_json()


@operation(
    'realize-sum',
    realization.add,
    realization.sum_via_product,
    realization.hstack,
    realization.vstack,
)
@click.argument('left')
@click.argument('right')
@click.option(
    '--via-product', is_flag=True, help='Build the sum as [F, I] [I; G].'
)
@output_option
def realize_sum(command: Command, left: str, right: str, via_product: bool):
    """Realization of the sum of two realized functions."""
    combine = realization.sum_via_product if via_product else realization.add
    return combine(_read_realization(left), _read_realization(right), logger).to_json()


@operation('realize-inverse', realization.inverse)
@click.argument('source')
@output_option
def realize_inverse(command: Command, source: str):
    """Realization of the inverse of a realized function with invertible D."""
    return realization.inverse(_read_realization(source)).to_json()


@operation(
    'realize-identity',
    realization.leibenzon_realization_identity,
    realization.commutes,
)
@click.argument('source')
@click.option('-k', '--variable', type=int, required=True, help='Shifted variable.')
@click.option('-d', '--degree', type=int, help='Truncation degree.')
@click.option('--state', help='N x q matrix f; the identity when omitted.')
@output_option
def realize_identity(
    command: Command, source: str, variable: int, state: Optional[str]
):
    """Residual of R_k C (I - zA)^-1 f = C (I - zA)^-1 A_k f."""
    value = _read_realization(source)
    residual = realization.leibenzon_realization_identity(
        value,
        variable,
        command.degree,
        None if state is None else value.ring.from_json(read_json(state)),
        logger,
    )
    return {
        'max_residual': series.max_coefficient(residual),
        'commutes': realization.commutes(value),
    }


@operation('rational-witness', realization.is_rational_witness, series.distance)
@click.argument('source')
@click.argument('witness')
@click.option('--tolerance', type=float, help='Largest accepted coefficient error.')
@output_option
def rational_witness(command: Command, source: str, witness: str):
    """Whether a realization reproduces the coefficients of a series."""
    value = _read_series(source)
    candidate = _read_realization(witness)
    expansion = realization.to_series(candidate, value.degree, value.basis)
    return {
        'witness': realization.is_rational_witness(
            value, candidate, command.tolerance
        ),
        'distance': series.distance(value, expansion),
    }


@operation('ck-extend', fueter.ck_extend)
@click.argument('source')
@output_option
def ck_extend(command: Command, source: str):
    """Cauchy-Kovalevskaya extension of a polynomial in (x1, x2, x3)."""
    return fueter.ck_extend(fueter.QPolynomial3.from_json(read_json(source))).to_json()


@operation('ck-product', fueter.ck_product, fueter.ck_matrix_product)
@click.argument('left')
@click.argument('right')
@click.option('--check', is_flag=True, help='Reject factors that are not monogenic.')
@output_option
def ck_product(command: Command, left: str, right: str, check: bool):
    """CK product of two hyperholomorphic polynomials or polynomial matrices."""
    factors = [
        _read_polynomial(left, fueter.QPolynomial4),
        _read_polynomial(right, fueter.QPolynomial4),
    ]
    if check:
        for factor in factors:
            if isinstance(factor, fueter.QPolynomial):
                entries = [factor]
            else:
                entries = [entry for row in factor for entry in row]
            if not all(fueter.is_hyperholomorphic(entry) for entry in entries):
                raise DomainError('A factor of the CK product is not monogenic.')
    if all(isinstance(factor, fueter.QPolynomial) for factor in factors):
        return fueter.ck_product(*factors).to_json()
    return fueter.matrix_to_json(fueter.ck_matrix_product(*factors))


@operation('ck-inverse', fueter.ck_von_neumann_inv)
@click.argument('source')
@click.option('-d', '--degree', type=int, help='Truncation degree.')
@output_option
def ck_inverse(command: Command, source: str):
    """CK inverse of I - G by the truncated geometric series."""
    value = _read_polynomial(source, fueter.QPolynomial4)
    return fueter.matrix_to_json(fueter.ck_von_neumann_inv(value, command.degree))


@operation(
    'dirac-check',
    fueter.dirac_apply,
    fueter.cauchy_fueter_system,
    fueter.is_hyperholomorphic,
)
@click.argument('source')
@click.option(
    '--extend', is_flag=True, help='Read a polynomial in (x1, x2, x3) and extend it.'
)
@output_option
def dirac_check(command: Command, source: str, extend: bool):
    """Cauchy-Fueter operator applied to a polynomial in (x0, x1, x2, x3)."""
    data = read_json(source)
    if extend:
        value = fueter.ck_extend(fueter.QPolynomial3.from_json(data))
    else:
        value = fueter.QPolynomial4.from_json(data)
    residual = fueter.dirac_apply(value)
    return {
        'hyperholomorphic': fueter.is_hyperholomorphic(value),
        'max_residual': residual.max_abs_difference(fueter.QPolynomial4()),
        'component_residuals': [
            max((abs(v) for v in equation.values()), default=0)
            for equation in fueter.cauchy_fueter_system(value)
        ],
        'residual': residual.to_json(),
    }


@operation('fueter-monomial', fueter.fueter_monomial, fueter.from_fueter_series)
@click.argument('alpha')
@output_option
def fueter_monomial(command: Command, alpha: str):
    """
    Fueter monomial of a dense exponent triple such as [1, 0, 2], or the polynomial
    matrix of a Fueter series.
    """
    data = read_json(alpha)
    if isinstance(data, dict):
        value = series.TruncatedSeries.from_json(data)
        return fueter.matrix_to_json(fueter.from_fueter_series(value))
    return fueter.fueter_monomial(data).to_json()


@operation('kernel-gram', kernels.kernel_gram, kernels.fock_kernel)
@click.argument('points')
@click.option(
    '--kernel',
    type=click.Choice(['arveson', 'fock']),
    default='arveson',
    show_default=True,
)
@click.option('--with-matrix', is_flag=True, help='Include the Gram matrix.')
@click.option('--workers', type=int, help='Threads assembling the Gram matrix.')
@output_option
def kernel_gram(command: Command, points: str, kernel: str, with_matrix: bool):
    """Gram matrix of the Arveson or Fock kernel with a positivity report."""
    function = kernels.arveson_kernel if kernel == 'arveson' else kernels.fock_kernel
    gram = kernels.kernel_gram(
        function, _read_points(points), logger, command.workers
    )
    return gram.to_json(with_matrix)


@operation(
    'kernel-coefficients', kernels.slice_coefficients, kernels.arveson_kernel
)
@click.option(
    '--kernel',
    type=click.Choice(['arveson', 'fock']),
    default='arveson',
    show_default=True,
)
@click.option('-d', '--degree', type=int, help='Largest total degree.')
@click.option('--radius', type=float, help='Radius of the Cauchy integral.')
@click.option('--grid', type=int, help='Nodes per circle.')
@output_option
def kernel_coefficients(
    command: Command, kernel: str, radius: Optional[float], grid: Optional[int]
):
    """
    Taylor coefficients of z -> K(z, (1, 1)) in two variables, |alpha|! / alpha!
    for the Arveson kernel and 1 / alpha! for the Fock kernel.
    """
    function = kernels.arveson_kernel if kernel == 'arveson' else kernels.fock_kernel
    anchor = kernels.L2Point.of([1, 1])
    coefficients = kernels.slice_coefficients(
        lambda z: function(z, anchor), command.degree, radius, grid
    )
    return {
        'kernel': kernel,
        'coefficients': [
            {'alpha': MultiIndex.from_dense(alpha).to_json(), 'value': value}
            for alpha, value in coefficients.items()
        ],
    }


@operation(
    'blaschke-check',
    kernels.blaschke,
    kernels.blaschke_kernel,
    kernels.blaschke_kernel_residual,
)
@click.argument('center')
@click.argument('points')
@output_option
def blaschke_check(command: Command, center: str, points: str):
    """Kernel identity of the Blaschke factor b_a on a point set."""
    a = kernels.L2Point.from_json(read_json(center))
    values = _read_points(points)
    residual = max(
        (kernels.blaschke_kernel_residual(a, z, w) for z in values for w in values),
        default=0.0,
    )
    gram = kernels.kernel_gram(kernels.blaschke_kernel(a), values, logger)
    return {
        'max_residual': residual,
        'within_tolerance': residual <= command.tolerance,
        'images': [kernels.blaschke(a, z).to_json() for z in values],
        'gram': gram.to_json(),
    }


@operation('blaschke-realize', kernels.blaschke_realization)
@click.argument('center')
@click.option('--n-vars', type=int, help='Number of variables of the realization.')
@output_option
def blaschke_realize(command: Command, center: str, n_vars: Optional[int]):
    """Realization of the Blaschke factor b_a."""
    a = kernels.L2Point.from_json(read_json(center))
    return kernels.blaschke_realization(a, n_vars).to_json()


@operation(
    'agler-check',
    kernels.agler_residual,
    kernels.schur_gram,
    kernels.schur_kernel,
    kernels.realization_multiplier,
    kernels.polynomial_kernel,
)
@click.argument('multiplier')
@click.argument('decomposition')
@click.argument('points')
@output_option
def agler_check(command: Command, multiplier: str, decomposition: str, points: str):
    """
    Residual of an Agler decomposition of a scalar multiplier given by a
    realization, with the Schur kernel positivity report.
    """
    s = kernels.realization_multiplier(_read_realization(multiplier), logger)
    values = _read_points(points)
    residual = kernels.agler_residual(s, _read_kernels(decomposition), values)
    return {
        'max_residual': residual,
        'within_tolerance': residual <= command.tolerance,
        'schur': kernels.schur_gram(s, values, logger, command.workers).to_json(),
    }


@operation('mc-inner', whitenoise.mc_inner)
@click.argument('alpha')
@click.argument('beta')
@click.option('--samples', type=int, help='Number of samples.')
@click.option('--seed', type=int, help='Seed of the sampler.')
@click.option('--workers', type=int, help='Threads drawing sample chunks.')
@output_option
def mc_inner(command: Command, alpha: str, beta: str):
    """Monte Carlo estimate of E[H_alpha H_beta]."""
    estimate = whitenoise.mc_inner(
        MultiIndex.from_json(read_json(alpha)),
        MultiIndex.from_json(read_json(beta)),
        command.samples,
        command.seed,
        workers=command.workers,
        logger=logger,
    )
    return estimate.to_json()


@operation('mc-moment', whitenoise.mc_series_moment, whitenoise.mc_product_moment)
@click.argument('source')
@click.option('--product', help='Second series; estimates E[F G] pointwise.')
@click.option('--samples', type=int, help='Number of samples.')
@click.option('--seed', type=int, help='Seed of the sampler.')
@click.option('--workers', type=int, help='Threads drawing sample chunks.')
@output_option
def mc_moment(command: Command, source: str, product: Optional[str]):
    """Monte Carlo estimate of E[F] or of E[F G] for chaos series."""
    options = dict(
        n_samples=command.samples,
        seed=command.seed,
        workers=command.workers,
        logger=logger,
    )
    value = _read_series(source)
    if product is None:
        return whitenoise.mc_series_moment(value, **options).to_json()
    return whitenoise.mc_product_moment(
        value, _read_series(product), **options
    ).to_json()


@operation('hermite-poly', whitenoise.hermite, whitenoise.hermite_values)
@click.argument('n', type=int)
@click.option('--at', 'points', help='A number or list of numbers to evaluate at.')
@output_option
def hermite_poly(command: Command, n: int, points: Optional[str]):
    """Coefficients of the Hermite polynomial h_n, optionally its values."""
    result = whitenoise.hermite(n).to_json()
    if points is not None:
        result['values'] = whitenoise.hermite_values(n, read_json(points))
    return result


@operation('quadrature-inner', whitenoise.quadrature_inner)
@click.argument('m', type=int)
@click.argument('n', type=int)
@click.option('--points', type=int, help='Number of Gauss-Hermite nodes.')
@output_option
def quadrature_inner(command: Command, m: int, n: int, points: Optional[int]):
    """Gauss-Hermite value of E[h_m(X) h_n(X)]."""
    return {'value': whitenoise.quadrature_inner(m, n, points)}
