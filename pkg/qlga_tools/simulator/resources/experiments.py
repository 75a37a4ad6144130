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

import numpy as np

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import experiment
from qlga_tools.simulator import gauge
from qlga_tools.simulator import lattice as lattice_state
from qlga_tools.simulator.resources import base
from qlga_tools.simulator import spectral


class ExperimentDriver(base.DriverBase):
    """Runs the simulator experiments against a shared spectrum cache"""

    def __init__(self, config, logger, spectra):
        super().__init__(config, logger)
        self._spectra = spectra

    @property
    def spectrum_fn(self):
        return self._spectra.spectrum

    def spectral_flow(self, lattice, theta, n_delta):
        """Sweep the holonomy and count eigenphase crossings

        :returns: `spectral.SpectralFlowResult`
        """
        if not lattice_state.is_periodic(lattice):
            self._logger.warning(
                'Spectral flow on a lattice with boundaries is identically '
                'zero, every vector potential is pure gauge there')

        result = spectral.spectral_flow(lattice, theta, n_delta,
                                        spectrum_fn=self.spectrum_fn)

        self._logger.info(
            'Spectral flow on %d %s sites, theta %.6g: %s', lattice.size,
            lattice.topology.kind, theta,
            sorted(set(result.flow_count.values())))

        return result

    def dispersion(self, lattice, theta, deltas):
        """Analytic against numeric eigenphases for every holonomy given

        :returns: list of (delta, n, branch, analytic, numeric) tuples
        """
        rows = []
        for delta in deltas:
            table = spectral.dispersion_table(
                lattice, theta, delta, spectrum_fn=self.spectrum_fn)
            worst = max(abs(spectral.wrap_phase(analytic - numeric))
                        for _, _, analytic, numeric in table)
            self._logger.debug('Dispersion at delta %.6g deviates by %.3g',
                               delta, worst)
            rows.extend((delta,) + row for row in table)

        return rows

    def calibration_trials(self, default=constants.CALIBRATION_TRIALS):
        return self._config.get('QLGA_TOOLS_CALIBRATION_TRIALS') or default

    def detect(self, config, topology):
        """Run the detection protocol once

        A config without a sample count gets one from `calibrate_samples`
        for its own epsilon and seed.

        :returns: `experiment.ExperimentReport`
        """
        if config.n_samples is None:
            n_samples = experiment.calibrate_samples(
                config, self.calibration_trials(), seed=config.seed,
                spectrum_fn=self.spectrum_fn)
            self._logger.info(
                'Calibrated %d samples for error rate %g on %d sites',
                n_samples, config.epsilon, config.lattice_size)
            config = config._replace(n_samples=n_samples)

        report = experiment.run_detection(config, topology,
                                          spectrum_fn=self.spectrum_fn)

        self._logger.info(
            'Detection on %d sites (%s): mean %.6g against threshold %.6g, '
            'decided %s', config.lattice_size, topology.kind,
            report.sample_mean, report.threshold, report.decision)

        return report

    def classical(self, lattice, trials=1, seed=None, start=None,
                  direction=None, exhaustive=False):
        """Classical detection runs with random or pinned initial data

        :param exhaustive: run every (start, direction) pair once
        :returns: list of `experiment.ClassicalRun`
        """
        if exhaustive:
            pairs = [(site, way) for site in range(lattice.size)
                     for way in (-1, 1)]

        else:
            if trials < 1:
                raise error.InvalidParameter(
                    'At least one trial is required')

            if seed is None and (start is None or direction is None):
                raise error.InvalidParameter(
                    'Random classical runs need an explicit seed')

            rng = np.random.default_rng(seed)
            pairs = []
            for _ in range(trials):
                site = rng.integers(lattice.size)
                way = rng.choice((-1, 1))
                pairs.append((
                    int(site) if start is None else start,
                    int(way) if direction is None else direction))

        runs = [experiment.classical_baseline(lattice, site, way)
                for site, way in pairs]

        self._logger.info(
            'Classical runs on %d %s sites: %d trials, mean %.6g steps',
            lattice.size, lattice.topology.kind, len(runs),
            np.mean([run.steps_to_detect for run in runs]))

        return runs

    def gauge_check(self, lattice, theta, seed, inject_fault=False):
        """Randomized gauge covariance checks

        :returns: list of `gauge.GaugeCheck`
        """
        checks = gauge.run_checks(lattice, theta, np.random.default_rng(seed),
                                  spectrum_fn=self.spectrum_fn,
                                  inject_fault=inject_fault)

        for check in checks:
            log = self._logger.debug if check.passed else self._logger.error
            log('Gauge check %s: residual %.3g, tolerance %.3g',
                check.name, check.residual, check.tolerance)

        return checks

    def scaling(self, sizes, trials, seed, **kwargs):
        """Quantum against classical detection cost over lattice sizes

        :returns: `experiment.ScalingStudy`
        """
        study = experiment.scaling_study(
            sizes, trials, seed,
            calibration_trials=self.calibration_trials(default=None),
            spectrum_fn=self.spectrum_fn, **kwargs)

        for row in study.rows:
            self._logger.info(
                'Size %d: %d samples, error rates %.4g (periodic) %.4g '
                '(bounded), simulation took %.2fs', row.size, row.n_samples,
                row.periodic_error, row.bounded_error, row.wall_time)

        return study
