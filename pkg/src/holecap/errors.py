# holecap: capacities of small holes and Dirichlet eigenvalue shifts
# Copyright 2025-eternity holecap contributors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.

# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <https://www.gnu.org/licenses/>.
'''
Exception hierarchy shared by every holecap module.

Each concrete error carries a short machine readable ``code`` and the exit
status the command line front-end maps it to:

* ``UsageError``            -> 2 (bad flags, malformed curve or polynomial specs)
* ``NumericValidityError``  -> 3 (solver, series and oracle failures)
* ``GeometryError``         -> 4 (invalid or conflicting curves)

Usage and geometry errors are also ``ValueError`` and numeric failures are
also ``RuntimeError`` so plain ``except ValueError`` callers keep working.

'''


class HoleCapError(Exception):
    code: str = 'error'
    exit_status: int = 1


class UsageError(HoleCapError, ValueError):
    code = 'usage'
    exit_status = 2


class NumericValidityError(HoleCapError, RuntimeError):
    code = 'numeric-validity'
    exit_status = 3


class GeometryError(HoleCapError, ValueError):
    code = 'geometry'
    exit_status = 4


# geometry

class InvalidGeometryError(GeometryError):
    code = 'invalid-geometry'


class OnBoundaryError(GeometryError):
    code = 'on-boundary'


class GeometryConflictError(GeometryError):
    code = 'geometry-conflict'


class ContainmentError(GeometryError):
    code = 'containment'


# numerics

class SingularPointError(NumericValidityError):
    code = 'singular-point'


class NearBoundaryError(NumericValidityError):
    code = 'near-boundary'


class IllPosedError(NumericValidityError):
    code = 'ill-posed'


class DegenerateContourError(NumericValidityError):
    code = 'degenerate-contour'


class ResolutionError(NumericValidityError):
    code = 'resolution'


class ValidityError(NumericValidityError):
    code = 'validity'


class ComplexityGuardError(NumericValidityError):
    code = 'complexity-guard'


class ZeroFunctionError(NumericValidityError):
    code = 'zero-function'


class NotHarmonicError(NumericValidityError):
    code = 'not-harmonic'


class DegreeError(NumericValidityError):
    code = 'degree'


class DataError(NumericValidityError):
    code = 'data'


class DomainError(NumericValidityError):
    code = 'domain'


class CircleDegenerateError(NumericValidityError):
    code = 'circle-degenerate'
