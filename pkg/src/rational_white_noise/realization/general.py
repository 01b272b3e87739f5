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
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Optional

import numpy as np

from rational_white_noise.config import config
from rational_white_noise.errors import ShapeMismatchError, SingularError
from rational_white_noise.multiindex import MultiIndex
from rational_white_noise.series.general import (
    Basis,
    TruncatedSeries,
    add as series_add,
    constant_series,
    distance,
    identity_series,
    leibenzon,
    sub as series_sub,
    wick_inv,
    wick_mul,
)
from rational_white_noise.series.rings import (
    COMPLEX,
    REAL,
    CoefficientRing,
    get_ring,
)
from rational_white_noise.utils import as_point

if TYPE_CHECKING:
    from structlog.stdlib import BoundLogger

configuration = config.get_entry_point('realization')


@dataclass(frozen=True, eq=False)
class Realization:
    """
    The matrix valued function D + C (I - sum_k z_k A_k)^-1 sum_k z_k B_k.

    Attributes:
        D: Feedthrough matrix of shape p x q.
        C: Output matrix of shape p x N.
        A: One N x N state matrix per variable.
        B: One N x q input matrix per variable.
        ring: Coefficient ring of all matrices.
    """

    D: np.ndarray
    C: np.ndarray
    A: tuple[np.ndarray, ...] = ()
    B: tuple[np.ndarray, ...] = ()
    ring: CoefficientRing = REAL

    def __post_init__(self):
        ring = self.ring
        D = ring.coerce(self.D)
        p, q = ring.shape(D)
        C = ring.zeros((p, 0)) if self.C is None else ring.coerce(self.C)
        if ring.shape(C)[0] != p:
            raise ShapeMismatchError(
                f'C has {ring.shape(C)[0]} rows but D has {p} rows.'
            )
        n = ring.shape(C)[1]
        if len(self.A) != len(self.B):
            raise ShapeMismatchError(
                f'Got {len(self.A)} state matrices but {len(self.B)} input matrices.'
            )
        A = tuple(ring.coerce(a, (n, n)) for a in self.A)
        B = tuple(ring.coerce(b, (n, q)) for b in self.B)
        for matrix in (D, C, *A, *B):
            matrix.setflags(write=False)
        object.__setattr__(self, 'D', D)
        object.__setattr__(self, 'C', C)
        object.__setattr__(self, 'A', A)
        object.__setattr__(self, 'B', B)

    @property
    def n_outputs(self) -> int:
        return self.ring.shape(self.D)[0]

    @property
    def n_inputs(self) -> int:
        return self.ring.shape(self.D)[1]

    @property
    def state_dim(self) -> int:
        return self.ring.shape(self.C)[1]

    @property
    def n_vars(self) -> int:
        return len(self.A)

    @classmethod
    def from_json(cls, data: dict) -> 'Realization':
        unknown = set(data) - {'D', 'C', 'A', 'B', 'ring'}
        if unknown:
            raise ValueError(f'Unknown realization fields {sorted(unknown)}.')
        ring = get_ring(data.get('ring', 'real'))
        D = ring.from_json(data['D'])
        p, q = ring.shape(D)
        C = ring.from_json(data['C'])
        if ring.shape(C)[0] != p and ring.shape(C) == (0, 0):
            C = ring.zeros((p, 0))
        n = ring.shape(C)[1]
        return cls(
            D=D,
            C=C,
            A=tuple(ring.from_json(a, (n, n)) for a in data.get('A', [])),
            B=tuple(ring.from_json(b, (n, q)) for b in data.get('B', [])),
            ring=ring,
        )

    def to_json(self) -> dict:
        ring = self.ring
        return {
            'ring': ring.name,
            'D': ring.to_json(self.D),
            'C': _matrix_to_json(ring, self.C),
            'A': [_matrix_to_json(ring, a) for a in self.A],
            'B': [_matrix_to_json(ring, b) for b in self.B],
        }


def _matrix_to_json(ring: CoefficientRing, a: np.ndarray):
    p, q = ring.shape(a)
    if p * q == 0:
        return [[] for _ in range(p)]
    return ring.to_json(a)


def constant_realization(
    D, n_vars: int = 0, ring: CoefficientRing = REAL
) -> Realization:
    """
    Realization of a constant matrix with an empty state space.
    """
    D = ring.coerce(D)
    p, q = ring.shape(D)
    return Realization(
        D=D,
        C=ring.zeros((p, 0)),
        A=tuple(ring.zeros((0, 0)) for _ in range(n_vars)),
        B=tuple(ring.zeros((0, q)) for _ in range(n_vars)),
        ring=ring,
    )


def pad_variables(realization: Realization, n_vars: int) -> Realization:
    """
    Appends zero state and input matrices up to `n_vars` variables.
    """
    if n_vars < realization.n_vars:
        raise ShapeMismatchError(
            f'Cannot pad {realization.n_vars} variables down to {n_vars}.'
        )
    ring = realization.ring
    n, q = realization.state_dim, realization.n_inputs
    missing = n_vars - realization.n_vars
    return Realization(
        D=realization.D,
        C=realization.C,
        A=realization.A + tuple(ring.zeros((n, n)) for _ in range(missing)),
        B=realization.B + tuple(ring.zeros((n, q)) for _ in range(missing)),
        ring=ring,
    )


def _common_variables(
    left: Realization, right: Realization, logger: 'BoundLogger' = None
) -> tuple[Realization, Realization]:
    if left.ring != right.ring:
        raise ShapeMismatchError(
            f'Cannot combine realizations over {left.ring.name} and '
            f'{right.ring.name}.'
        )
    if left.n_vars == right.n_vars:
        return left, right
    n_vars = max(left.n_vars, right.n_vars)
    if logger:
        logger.warning(
            'Realizations have different numbers of variables, padding with zeros.',
            left=left.n_vars,
            right=right.n_vars,
        )
    return pad_variables(left, n_vars), pad_variables(right, n_vars)


def _block_diagonal(ring: CoefficientRing, a: np.ndarray, b: np.ndarray):
    (p1, q1), (p2, q2) = ring.shape(a), ring.shape(b)
    return ring.block([[a, ring.zeros((p1, q2))], [ring.zeros((p2, q1)), b]])


def to_series(
    realization: Realization,
    degree: int,
    basis: Basis = Basis.MONOMIAL,
    logger: 'BoundLogger' = None,
) -> TruncatedSeries:
    """
    Expands a realization up to `degree` by Wick inversion of I - z A.

    Args:
        realization (Realization): The realization to expand.
        degree (int): Truncation degree of the expansion.
        basis (Basis): The basis tag of the result; the coefficients do not
            depend on it.
        logger (BoundLogger): A structlog logger.
    """
    ring = realization.ring
    n, n_vars = realization.state_dim, realization.n_vars
    options = dict(basis=Basis(basis), degree=degree, max_var=n_vars, ring=ring)
    result = constant_series(realization.D, **options)
    if n == 0 or n_vars == 0:
        return result
    pencil = TruncatedSeries.from_terms(
        options['basis'],
        degree,
        n_vars,
        (n, n),
        ring,
        [(MultiIndex.unit(k), ring.neg(a)) for k, a in enumerate(realization.A, 1)],
    )
    resolvent = wick_inv(series_add(identity_series(n, **options), pencil), logger)
    inputs = TruncatedSeries.from_terms(
        options['basis'],
        degree,
        n_vars,
        (n, realization.n_inputs),
        ring,
        [(MultiIndex.unit(k), b) for k, b in enumerate(realization.B, 1)],
    )
    output = constant_series(
        realization.C, shape=(realization.n_outputs, n), **options
    )
    return series_add(result, wick_mul(wick_mul(output, resolvent), inputs))


def _is_exact_number(value) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def _pencil(realization: Realization, z):
    point = as_point(z)
    ring = realization.ring
    matrices = (realization.D, realization.C, realization.A, realization.B)
    if ring.exact and not all(_is_exact_number(v) for v in point.values()):
        is_complex = any(isinstance(v, complex) for v in point.values())
        ring = COMPLEX if is_complex else REAL
        D, C, A, B = matrices
        matrices = (
            D.astype(float),
            C.astype(float),
            tuple(a.astype(float) for a in A),
            tuple(b.astype(float) for b in B),
        )
    D, C, A, B = matrices
    n, q = realization.state_dim, realization.n_inputs
    pencil = ring.identity(n)
    inputs = ring.zeros((n, q))
    for k, value in point.items():
        if k > realization.n_vars:
            continue
        pencil = ring.sub(pencil, ring.scale(A[k - 1], value))
        inputs = ring.add(inputs, ring.scale(B[k - 1], value))
    return ring, pencil, inputs, C, D


def pencil_condition(realization: Realization, z) -> float:
    """
    Condition number of I - sum_k z_k A_k.
    """
    ring, pencil, _, _, _ = _pencil(realization, z)
    return ring.condition_number(pencil)


def evaluate(
    realization: Realization, z, logger: 'BoundLogger' = None
) -> np.ndarray:
    """
    Value of a realization at a finitely supported point by solving the pencil
    equation. Variables beyond `n_vars` have zero state matrices.

    Raises:
        SingularError: If the pencil I - sum_k z_k A_k is singular.
    """
    ring, pencil, inputs, C, D = _pencil(realization, z)
    condition = ring.condition_number(pencil)
    if not math.isfinite(condition):
        raise SingularError('The pencil I - z A is singular at the given point.')
    if condition > configuration.condition_warning and logger:
        logger.warning(
            'The pencil I - z A is ill conditioned.', condition_number=condition
        )
    state = ring.solve(pencil, inputs)
    return ring.add(D, ring.matmul(C, state))


def product(
    left: Realization, right: Realization, logger: 'BoundLogger' = None
) -> Realization:
    """
    Realization of the pointwise product of two realized functions, left times
    right.
    """
    if left.n_inputs != right.n_outputs:
        raise ShapeMismatchError(
            f'Cannot multiply a function with {left.n_inputs} inputs by a function '
            f'with {right.n_outputs} outputs.'
        )
    left, right = _common_variables(left, right, logger)
    ring = left.ring
    n1, n2 = left.state_dim, right.state_dim
    A = tuple(
        ring.block(
            [[a1, ring.matmul(b1, right.C)], [ring.zeros((n2, n1)), a2]]
        )
        for a1, b1, a2 in zip(left.A, left.B, right.A)
    )
    B = tuple(
        ring.block([[ring.matmul(b1, right.D)], [b2]])
        for b1, b2 in zip(left.B, right.B)
    )
    return Realization(
        D=ring.matmul(left.D, right.D),
        C=ring.block([[left.C, ring.matmul(left.D, right.C)]]),
        A=A,
        B=B,
        ring=ring,
    )


def add(
    left: Realization, right: Realization, logger: 'BoundLogger' = None
) -> Realization:
    """
    Realization of the sum of two realized functions of equal shape, with block
    diagonal state matrices.
    """
    if (left.n_outputs, left.n_inputs) != (right.n_outputs, right.n_inputs):
        raise ShapeMismatchError(
            f'Cannot add a {left.n_outputs}x{left.n_inputs} function to a '
            f'{right.n_outputs}x{right.n_inputs} function.'
        )
    left, right = _common_variables(left, right, logger)
    ring = left.ring
    return Realization(
        D=ring.add(left.D, right.D),
        C=ring.block([[left.C, right.C]]),
        A=tuple(_block_diagonal(ring, a1, a2) for a1, a2 in zip(left.A, right.A)),
        B=tuple(ring.block([[b1], [b2]]) for b1, b2 in zip(left.B, right.B)),
        ring=ring,
    )


def hstack(
    left: Realization, right: Realization, logger: 'BoundLogger' = None
) -> Realization:
    """
    Realization of the row [left, right].
    """
    if left.n_outputs != right.n_outputs:
        raise ShapeMismatchError(
            f'Cannot place {left.n_outputs} rows next to {right.n_outputs} rows.'
        )
    left, right = _common_variables(left, right, logger)
    ring = left.ring
    return Realization(
        D=ring.block([[left.D, right.D]]),
        C=ring.block([[left.C, right.C]]),
        A=tuple(_block_diagonal(ring, a1, a2) for a1, a2 in zip(left.A, right.A)),
        B=tuple(_block_diagonal(ring, b1, b2) for b1, b2 in zip(left.B, right.B)),
        ring=ring,
    )


def vstack(
    top: Realization, bottom: Realization, logger: 'BoundLogger' = None
) -> Realization:
    """
    Realization of the column [top; bottom].
    """
    if top.n_inputs != bottom.n_inputs:
        raise ShapeMismatchError(
            f'Cannot stack {top.n_inputs} columns over {bottom.n_inputs} columns.'
        )
    top, bottom = _common_variables(top, bottom, logger)
    ring = top.ring
    return Realization(
        D=ring.block([[top.D], [bottom.D]]),
        C=_block_diagonal(ring, top.C, bottom.C),
        A=tuple(_block_diagonal(ring, a1, a2) for a1, a2 in zip(top.A, bottom.A)),
        B=tuple(ring.block([[b1], [b2]]) for b1, b2 in zip(top.B, bottom.B)),
        ring=ring,
    )


def sum_via_product(
    left: Realization, right: Realization, logger: 'BoundLogger' = None
) -> Realization:
    """
    Realization of left + right written as the product [left, I] [I; right].
    """
    if (left.n_outputs, left.n_inputs) != (right.n_outputs, right.n_inputs):
        raise ShapeMismatchError(
            f'Cannot add a {left.n_outputs}x{left.n_inputs} function to a '
            f'{right.n_outputs}x{right.n_inputs} function.'
        )
    left, right = _common_variables(left, right, logger)
    ring = left.ring
    row = hstack(
        left,
        constant_realization(ring.identity(left.n_outputs), left.n_vars, ring),
    )
    column = vstack(
        constant_realization(ring.identity(right.n_inputs), right.n_vars, ring),
        right,
    )
    return product(row, column)


def inverse(realization: Realization) -> Realization:
    """
    Realization of the pointwise inverse of a square realized function with
    invertible feedthrough.

    Raises:
        SingularError: If D is not invertible.
    """
    ring = realization.ring
    p, q = realization.n_outputs, realization.n_inputs
    if p != q:
        raise ShapeMismatchError(f'Only square functions are invertible, got {p}x{q}.')
    try:
        d_inverse = ring.inv(realization.D)
    except SingularError as exc:
        raise SingularError('The feedthrough matrix D is singular.') from exc
    inputs = tuple(ring.matmul(b, d_inverse) for b in realization.B)
    return Realization(
        D=d_inverse,
        C=ring.neg(ring.matmul(d_inverse, realization.C)),
        A=tuple(
            ring.sub(a, ring.matmul(b, realization.C))
            for a, b in zip(realization.A, inputs)
        ),
        B=inputs,
        ring=ring,
    )


def commutes(realization: Realization, tolerance: Optional[float] = None) -> bool:
    """
    Whether the state matrices commute pairwise.
    """
    tolerance = configuration.tolerance if tolerance is None else tolerance
    ring = realization.ring
    for i, a in enumerate(realization.A):
        for b in realization.A[i + 1 :]:
            if not ring.allclose(ring.matmul(a, b), ring.matmul(b, a), tolerance):
                return False
    return True


def _state_function(realization: Realization, state: np.ndarray) -> Realization:
    """
    Realization of z -> C (I - z A)^-1 state.
    """
    ring = realization.ring
    return Realization(
        D=ring.matmul(realization.C, state),
        C=realization.C,
        A=realization.A,
        B=tuple(ring.matmul(a, state) for a in realization.A),
        ring=ring,
    )


def leibenzon_realization_identity(  # noqa: PLR0913
    realization: Realization,
    k: int,
    degree: int,
    f: Optional[Sequence] = None,
    logger: 'BoundLogger' = None,
) -> TruncatedSeries:
    """
    Residual of the identity R_k C (I - z A)^-1 f = C (I - z A)^-1 A_k f between
    truncated expansions. It vanishes when the state matrices commute.

    Args:
        realization (Realization): Supplies C and the state matrices A.
        k (int): The variable of the backward shift.
        degree (int): Truncation degree of the left hand side.
        f: An N x q matrix; the N x N identity when omitted, which covers every
            f by linearity.
        logger (BoundLogger): A structlog logger.
    """
    ring = realization.ring
    n = realization.state_dim
    state = ring.identity(n) if f is None else ring.coerce(f)
    if ring.shape(state)[0] != n:
        raise ShapeMismatchError(
            f'f has {ring.shape(state)[0]} rows, the state dimension is {n}.'
        )
    if logger and not commutes(realization):
        logger.warning(
            'The state matrices do not commute; the backward shift identity only '
            'holds for commuting state matrices.'
        )
    if 1 <= k <= realization.n_vars:
        a_k = realization.A[k - 1]
    else:
        a_k = ring.zeros((n, n))
    left = leibenzon(to_series(_state_function(realization, state), degree), k)
    right = to_series(
        _state_function(realization, ring.matmul(a_k, state)), max(degree - 1, 0)
    )
    return series_sub(left, right)


def is_rational_witness(
    series: TruncatedSeries,
    realization: Realization,
    tolerance: Optional[float] = None,
) -> bool:
    """
    Whether the expansion of `realization` reproduces every coefficient of `series`
    up to its degree.
    """
    if series.shape != (realization.n_outputs, realization.n_inputs):
        raise ShapeMismatchError(
            f'The series has shape {series.shape}, the realization '
            f'{realization.n_outputs}x{realization.n_inputs}.'
        )
    tolerance = configuration.tolerance if tolerance is None else tolerance
    expansion = to_series(realization, series.degree, series.basis)
    return distance(series, expansion) <= tolerance
