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
import hashlib
from pathlib import Path

from .coefficients import (
    DensityCoefficients as DensityCoefficients,
    rho_coefficients as rho_coefficients,
    theta_coefficients as theta_coefficients,
    density_coefficients as density_coefficients
)
from .ladder import (
    LadderCoefficients as LadderCoefficients,
    ladder_coefficients as ladder_coefficients,
    compositions as compositions
)
from .capacity import (
    CapacitySeries as CapacitySeries,
    LeadingEnergy as LeadingEnergy,
    capacity_series as capacity_series,
    eval_capacity_series as eval_capacity_series,
    leading_energy as leading_energy,
    leading_capacity as leading_capacity,
    condenser_leading as condenser_leading
)

import holecap.bem as _bem
import holecap.harmonic as _harmonic
import holecap.taylor as _taylor
import holecap.series.coefficients as _coefficients
import holecap.series.ladder as _ladder
import holecap.series.capacity as _capacity


def hash_engine(as_bytes: bool = True) -> bytes | str:
    '''
    Return a sha256 hash of every source file that affects computed series
    coefficients.

    '''
    hasher = hashlib.sha256()
    for mod in (_bem, _harmonic, _taylor, _coefficients, _ladder, _capacity):
        hasher.update(Path(mod.__file__).read_bytes())

    return (
        hasher.digest() if as_bytes
        else hasher.hexdigest()
    )
