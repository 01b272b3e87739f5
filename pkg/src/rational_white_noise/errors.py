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


class CalculusError(Exception):
    """
    Base class of every error raised by the calculi of this package.
    """


class ShapeMismatchError(CalculusError, ValueError):
    """
    Coefficient shapes, state dimensions or coefficient rings do not fit together.
    """


class BasisMismatchError(CalculusError, ValueError):
    """
    Series tagged with different bases were combined, or an operation received a
    series in the wrong basis.
    """


class DomainError(CalculusError, ValueError):
    """
    An argument lies outside the domain of an operation (poles, points outside the
    ball, negative degrees, nonzero constant terms where none are allowed).
    """


class SingularError(CalculusError, ArithmeticError):
    """
    A constant term, a feedthrough matrix or a pencil could not be inverted.
    """


class NumericOverflowError(CalculusError, OverflowError):
    """
    An exact integer weight does not fit into a floating point number.
    """
