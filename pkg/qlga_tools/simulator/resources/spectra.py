#    Licensed under the Apache License, Version 2.0 (the "License"); you may
#    not use this file except in compliance with the License. You may obtain
#    a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
#    WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
#    License for the specific language governing permissions and limitations
#    under the License.

from qlga_tools.simulator import constants
from qlga_tools.simulator import memoize
from qlga_tools.simulator.resources import base
from qlga_tools.simulator import spectral


class SpectrumDriver(base.DriverBase):
    """Eigen-decompositions of evolution operators, cached.

    The cache lives in memory unless `QLGA_TOOLS_STATE_DIR` is configured,
    in which case decompositions persist across runs in a sqlite file.
    """

    def __init__(self, config, logger):
        super().__init__(config, logger)

        self.tolerances = memoize.Tolerances(
            self._config.get('QLGA_TOOLS_UNITARITY_TOLERANCE',
                             constants.UNITARITY_TOLERANCE),
            self._config.get('QLGA_TOOLS_RESIDUAL_TOLERANCE',
                             constants.RESIDUAL_TOLERANCE),
            self._config.get('QLGA_TOOLS_DEGENERACY_TOLERANCE',
                             constants.DEGENERACY_TOLERANCE))

        self._spectra = {}

        state_dir = self._config.get('QLGA_TOOLS_STATE_DIR')
        if state_dir:
            self._spectra = memoize.SpectrumStore(self.tolerances)
            dropped = self._spectra.make_permanent(state_dir, 'spectra')
            if dropped:
                self._logger.info(
                    'Dropped %s cached spectra computed under other '
                    'tolerances', dropped)

    def spectrum(self, U):
        """Return the `spectral.Spectrum` of `U`, computing it at most once

        :raises: `error.SpectrumError` on a non-unitary operator or large
            eigenpair residuals
        """
        key = memoize.spectrum_key(U)
        try:
            return self._spectra[key]

        except KeyError:
            pass

        self._logger.debug(
            'Diagonalizing %s operator on %d sites, theta %.6g',
            U.lattice.topology.kind, U.lattice.size, U.theta)

        result = spectral.spectrum(
            U, unitarity_tolerance=self.tolerances.unitarity,
            residual_tolerance=self.tolerances.residual,
            degeneracy_tolerance=self.tolerances.degeneracy)

        self._spectra[key] = result
        return result

    def __len__(self):
        return len(self._spectra)
