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
import json
import math
import numbers
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any, Union

import numpy as np

from rational_white_noise.errors import DomainError, NumericOverflowError


def as_float(value) -> float:
    """
    Converts an exact integer or fraction to a float.

    Raises:
        NumericOverflowError: If the value does not fit into a double.
    """
    try:
        return float(value)
    except OverflowError as exc:
        raise NumericOverflowError(
            f'{value!r:.40} does not fit into a floating point number.'
        ) from exc


def parse_scalar(value) -> Union[int, Fraction, float]:
    """
    Reads a real JSON scalar. Strings of the form "p/q" are exact rationals.
    """
    if isinstance(value, bool):
        raise ValueError('Booleans are not numbers.')
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError as exc:
            raise ValueError(f'"{value}" is not a rational number.') from exc
    if isinstance(value, numbers.Real):
        return float(value)
    raise ValueError(f'{value!r} is not a real number.')


def parse_complex(value) -> complex:
    """
    Reads a complex JSON scalar written as a number or as [re, im].
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError(f'{value!r} is not a complex number [re, im].')
        return complex(float(parse_scalar(value[0])), float(parse_scalar(value[1])))
    return complex(float(parse_scalar(value)))


def to_plain(value) -> Any:
    """
    Converts numbers, arrays and containers into JSON-ready python objects.
    """
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_plain(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return int(value.numerator)
        return f'{value.numerator}/{value.denominator}'
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def _format_float(value: float) -> str:
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, '.17g')


def _encode(value):
    if isinstance(value, dict):
        yield '{'
        for position, (key, item) in enumerate(value.items()):
            if position:
                yield ', '
            yield json.dumps(key)
            yield ': '
            yield from _encode(item)
        yield '}'
    elif isinstance(value, list):
        yield '['
        for position, item in enumerate(value):
            if position:
                yield ', '
            yield from _encode(item)
        yield ']'
    elif isinstance(value, float):
        yield _format_float(value)
    else:
        yield json.dumps(value)


def format_json(value) -> str:
    """
    Serializes `value` deterministically. Floats carry 17 significant digits, exact
    rationals are integers or "p/q" strings, non finite floats become strings.
    """
    return ''.join(_encode(to_plain(value))) + '\n'


def read_json(source: Union[str, Path]) -> Any:
    """
    Reads JSON from a file path or, if no such file exists, from the string itself.
    """
    path = Path(source)
    try:
        is_file = path.is_file()
    except OSError:
        is_file = False
    if is_file:
        with open(path, encoding='utf-8') as file:
            return json.load(file)
    return json.loads(str(source))


def close_equal(a, b, tolerance: float = 0.0) -> bool:
    """
    Compares two JSON-like structures, numbers within an absolute tolerance and NaN
    equal to NaN.
    """
    if isinstance(a, dict) and isinstance(b, dict):
        if set(a) != set(b):
            return False
        return all(close_equal(a[key], b[key], tolerance) for key in a)
    if isinstance(a, (list, tuple)) and isinstance(b, (list, tuple)):
        if len(a) != len(b):
            return False
        return all(close_equal(x, y, tolerance) for x, y in zip(a, b))
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    numeric = (numbers.Number, str)
    if isinstance(a, numeric) and isinstance(b, numeric):
        try:
            x, y = parse_scalar(a), parse_scalar(b)
        except ValueError:
            return a == b
        if isinstance(x, float) and isinstance(y, float):
            if math.isnan(x) and math.isnan(y):
                return True
        if x == y:
            return True
        return abs(float(x) - float(y)) <= tolerance
    return a == b


def as_point(z) -> dict[int, Any]:
    """
    Normalizes a point given as a sequence (positions 1, 2, ...) or as a mapping from
    positions to coordinates. Zero coordinates are dropped.
    """
    if isinstance(z, Mapping):
        items = z.items()
    else:
        items = enumerate(z, start=1)
    point = {}
    for position, value in items:
        position = int(position)
        if position < 1:
            raise DomainError(f'Position {position} is not a positive integer.')
        if value != 0:
            point[position] = value
    return point
