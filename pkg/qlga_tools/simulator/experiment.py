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

"""Topology detection by frequency measurement and its classical baseline.

The quantum protocol prepares the same packet on either lattice, applies a
uniform vector potential and measures the eigenphase a fixed number of
times. The field acts through the canonical representative of its gauge
class, so it shifts the measured frequencies on a ring and vanishes with
boundaries.
"""

import collections
import math
import time

import numpy as np
from scipy import stats

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import evolution
from qlga_tools.simulator import gauge
from qlga_tools.simulator import lattice as lattice_state
from qlga_tools.simulator import spectral
from qlga_tools.simulator import wavepacket


DetectionConfig = collections.namedtuple(
    'DetectionConfig',
    ['lattice_size', 'theta', 'A_uniform', 'packet', 'n_samples', 'epsilon',
     'seed'])
ExperimentReport = collections.namedtuple(
    'ExperimentReport',
    ['decision', 'sample_mean', 'baseline_mean', 'threshold', 'samples_used',
     'ground_truth', 'correct'])
ClassicalRun = collections.namedtuple(
    'ClassicalRun',
    ['start_site', 'direction', 'steps_to_detect', 'cutoff_reached',
     'decision'])
ScalingRow = collections.namedtuple(
    'ScalingRow',
    ['size', 'n_samples', 'periodic_error', 'bounded_error',
     'frequency_std', 'classical_mean_steps', 'wall_time'])
ScalingStudy = collections.namedtuple(
    'ScalingStudy',
    ['rows', 'n_samples', 'classical_slope', 'classical_intercept',
     'classical_r_squared'])

MAX_CALIBRATED_SAMPLES = 1 << 16


def make_detection_config(lattice_size, theta, A_uniform, k0=math.pi / 2,
                          x0=None, sigma=None, n_samples=25, epsilon=0.05,
                          seed=0):
    """Build a validated `DetectionConfig`.

    :param n_samples: measurements per run; `None` leaves the count to
        `calibrate_samples`
    :raises: `error.InvalidParameter` when A * |L| is a multiple of 2pi,
        which makes both topologies look alike
    """
    lattice = lattice_state.make_lattice(lattice_size)
    theta = lattice_state.mass_angle(theta)

    A_uniform = float(A_uniform)
    if not A_uniform > 0:
        raise error.InvalidParameter(
            'Vector potential must be positive, got %r' % A_uniform)

    winding = A_uniform * lattice.size / (2 * math.pi)
    if abs(winding - round(winding)) < 1e-9:
        raise error.InvalidParameter(
            'A * |L| = %g is a multiple of 2pi, topologies are '
            'indistinguishable' % (A_uniform * lattice.size))

    if n_samples is not None:
        n_samples = int(n_samples)
        if n_samples < 1:
            raise error.InvalidParameter('At least one sample is required')

    if not 0 < epsilon < 1:
        raise error.InvalidParameter(
            'Target error probability must lie in (0, 1), got %r' % epsilon)

    packet = wavepacket.make_packet_spec(lattice, k0=k0, x0=x0, sigma=sigma)

    return DetectionConfig(lattice.size, theta, A_uniform, packet,
                           n_samples, float(epsilon), int(seed))


def baseline_mean(config):
    """Frequency of the packet carrier without any vector potential"""
    return spectral.dispersion(config.theta, config.packet.k0).plus


def decision_threshold(config):
    return baseline_mean(config) + config.A_uniform / 2


def detection_operator(config, topology):
    lattice = lattice_state.make_lattice(config.lattice_size, topology)
    fields = gauge.canonical_fields(
        lattice_state.uniform_fields(lattice, config.A_uniform), lattice)
    return evolution.build_evolution(lattice, config.theta, fields)


def detection_distribution(config, topology, evolve_steps=0,
                           spectrum_fn=spectral.spectrum):
    """Frequency distribution seen by every trial on `topology`.

    :param evolve_steps: timesteps to evolve the packet before measuring;
        the distribution does not depend on it
    :raises: `error.MarginError` if the packet touches a boundary
    """
    U = detection_operator(config, topology)
    psi = wavepacket.prepare_packet(U.lattice, config.theta, config.packet)
    psi = evolution.evolve(U, psi, evolve_steps)
    return wavepacket.frequency_distribution(psi, spectrum_fn(U))


def _decide(sample_mean, threshold):
    if sample_mean > threshold:
        return constants.TOPOLOGY_PERIODIC

    return constants.TOPOLOGY_BOUNDED


def run_detection(config, ground_truth, stream=0, distribution=None,
                  spectrum_fn=spectral.spectrum):
    """Run the protocol once against a lattice of known topology.

    :param ground_truth: `lattice.Topology` of the lattice measured
    :param stream: sampling stream, distinct per trial
    :param distribution: precomputed `detection_distribution`, if any
    :returns: `ExperimentReport`
    """
    if config.n_samples is None:
        raise error.InvalidParameter(
            'Sample count is not set, calibrate it first')

    if distribution is None:
        distribution = detection_distribution(
            config, ground_truth, spectrum_fn=spectrum_fn)

    samples = wavepacket.sample_frequencies(
        distribution, config.n_samples, config.seed, stream)
    sample_mean, _ = wavepacket.summarize(samples)

    threshold = decision_threshold(config)
    decision = _decide(sample_mean, threshold)

    return ExperimentReport(
        decision=decision,
        sample_mean=sample_mean,
        baseline_mean=baseline_mean(config),
        threshold=threshold,
        samples_used=config.n_samples,
        ground_truth=ground_truth.kind,
        correct=decision == ground_truth.kind)


def required_samples(sigma_omega, shift, epsilon):
    """Normal approximation of the sample count telling two means apart.

    n = ceil((2 z(1 - epsilon) sigma_omega / shift)^2), at least 1. This is
    a heuristic; `calibrate_samples` checks it by simulation.
    """
    if not shift > 0:
        raise error.InvalidParameter(
            'Frequency shift must be positive, got %r' % shift)

    if sigma_omega < 0:
        raise error.InvalidParameter(
            'Frequency spread must be non-negative, got %r' % sigma_omega)

    if not 0 < epsilon < 1:
        raise error.InvalidParameter(
            'Target error probability must lie in (0, 1), got %r' % epsilon)

    quantile = stats.norm.ppf(1 - epsilon)
    return max(1, math.ceil((2 * quantile * sigma_omega / shift) ** 2))


def _topologies():
    return lattice_state.periodic(), lattice_state.bounded()


def error_rate(config, trials, seed=None, distributions=None,
               spectrum_fn=spectral.spectrum):
    """Empirical error rate per topology over `trials` seeded runs.

    Trial i samples stream i of `seed`; the distributions are computed
    once per topology.

    :returns: dict mapping topology kind to the fraction of wrong decisions
    """
    if trials < 1:
        raise error.InvalidParameter('At least one trial is required')

    if seed is not None:
        config = config._replace(seed=int(seed))

    rates = {}
    for topology in _topologies():
        if distributions and topology.kind in distributions:
            distribution = distributions[topology.kind]
        else:
            distribution = detection_distribution(
                config, topology, spectrum_fn=spectrum_fn)

        wrong = sum(
            not run_detection(config, topology, stream,
                              distribution=distribution).correct
            for stream in range(trials))
        rates[topology.kind] = wrong / trials

    return rates


def calibrate_samples(config, trials, seed=None,
                      spectrum_fn=spectral.spectrum):
    """Smallest power-of-two multiple of the normal estimate that works.

    Starts from `required_samples` for the periodic spread and twice the
    smaller distance of either exact mean to the threshold, then doubles
    until the simulated error rate is at most epsilon / 2 on both lattices.

    :raises: `error.ToleranceError` if the means straddle the threshold the
        wrong way or no sample count up to 65536 is good enough
    """
    distributions = {
        topology.kind: detection_distribution(
            config, topology, spectrum_fn=spectrum_fn)
        for topology in _topologies()}

    threshold = decision_threshold(config)
    periodic_mean, periodic_std = wavepacket.distribution_moments(
        distributions[constants.TOPOLOGY_PERIODIC])
    bounded_mean, _ = wavepacket.distribution_moments(
        distributions[constants.TOPOLOGY_BOUNDED])

    margin = min(periodic_mean - threshold, threshold - bounded_mean)
    if not margin > 0:
        raise error.ToleranceError(
            'Exact means %.6g (periodic) and %.6g (bounded) are not '
            'separated by the threshold %.6g' % (
                periodic_mean, bounded_mean, threshold))

    n_samples = required_samples(periodic_std, 2 * margin, config.epsilon)
    while n_samples <= MAX_CALIBRATED_SAMPLES:
        rates = error_rate(config._replace(n_samples=n_samples), trials,
                           seed=seed, distributions=distributions)
        if max(rates.values()) <= config.epsilon / 2:
            return n_samples

        n_samples *= 2

    raise error.ToleranceError(
        'No sample count up to %d reaches error rate %g' % (
            MAX_CALIBRATED_SAMPLES, config.epsilon / 2))


def classical_baseline(lattice, start, direction, cutoff=None):
    """Stream one classical particle until it reflects or the cutoff fires.

    The particle moves one site per step in `direction`. With boundaries
    it reverses once the next site would leave the lattice, so the steps
    to detect equal the distance to the boundary ahead.

    :param cutoff: step limit, 2|L| when omitted
    :returns: `ClassicalRun`
    """
    if direction not in (-1, 1):
        raise error.InvalidParameter(
            'Direction must be -1 or +1, got %r' % direction)

    if not 0 <= start < lattice.size:
        raise error.InvalidParameter(
            'Start site %r lies outside the lattice' % start)

    if cutoff is None:
        cutoff = 2 * lattice.size

    if cutoff < 2 * lattice.size:
        raise error.InvalidParameter(
            'Cutoff must be at least 2|L| = %d' % (2 * lattice.size))

    position = start
    for steps in range(cutoff):
        ahead = position + direction
        if not lattice_state.is_periodic(lattice):
            if not 0 <= ahead < lattice.size:
                return ClassicalRun(start, direction, steps, False,
                                    constants.TOPOLOGY_BOUNDED)

        position = ahead % lattice.size

    return ClassicalRun(start, direction, cutoff, True,
                        constants.TOPOLOGY_PERIODIC)


def expected_classical_steps(size):
    """Mean bounded detection time over every start and direction.

    Enumerates all 2|L| runs; the closed form is (|L| - 1) / 2.
    """
    lattice = lattice_state.make_lattice(size, lattice_state.bounded())
    steps = [classical_baseline(lattice, start, direction).steps_to_detect
             for start in range(lattice.size) for direction in (-1, 1)]
    return float(np.mean(steps))


def scaling_study(sizes, trials, seed, theta=math.pi / 6, A_uniform=0.2,
                  epsilon=0.05, k0=math.pi / 2, calibration_trials=None,
                  spectrum_fn=spectral.spectrum):
    """Quantum error rates and classical detection times against |L|.

    The sample count is calibrated once at the smallest size and then held
    fixed; packet widths scale as |L| / 8. `wall_time` measures simulation
    cost only and is unrelated to the number of measurements.

    :returns: `ScalingStudy`
    """
    sizes = sorted(int(size) for size in sizes)
    if len(sizes) < 2:
        raise error.InvalidParameter(
            'Scaling study needs at least two lattice sizes')

    def config_for(size, n_samples=1):
        return make_detection_config(size, theta, A_uniform, k0=k0,
                                     n_samples=n_samples, epsilon=epsilon,
                                     seed=seed)

    n_samples = calibrate_samples(config_for(sizes[0]),
                                  calibration_trials or trials, seed=seed,
                                  spectrum_fn=spectrum_fn)

    rows = []
    for size in sizes:
        started = time.monotonic()
        config = config_for(size, n_samples)
        distributions = {
            topology.kind: detection_distribution(
                config, topology, spectrum_fn=spectrum_fn)
            for topology in _topologies()}
        rates = error_rate(config, trials, distributions=distributions)
        _, frequency_std = wavepacket.distribution_moments(
            distributions[constants.TOPOLOGY_PERIODIC])

        rows.append(ScalingRow(
            size=size,
            n_samples=n_samples,
            periodic_error=rates[constants.TOPOLOGY_PERIODIC],
            bounded_error=rates[constants.TOPOLOGY_BOUNDED],
            frequency_std=frequency_std,
            classical_mean_steps=expected_classical_steps(size),
            wall_time=time.monotonic() - started))

    fit = stats.linregress([row.size for row in rows],
                           [row.classical_mean_steps for row in rows])

    return ScalingStudy(rows, n_samples, float(fit.slope),
                        float(fit.intercept), float(fit.rvalue ** 2))
