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

import collections
import math

import numpy as np

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import lattice as lattice_state
from qlga_tools.simulator import spectral


PacketSpec = collections.namedtuple(
    'PacketSpec', ['k0', 'x0', 'sigma', 'branch'])
FrequencyDistribution = collections.namedtuple(
    'FrequencyDistribution', ['support', 'probabilities'])


def make_packet_spec(lattice, k0=math.pi / 2, x0=None, sigma=None,
                     branch=constants.BRANCH_POSITIVE):
    """Packet parameters with lattice dependent defaults.

    The center defaults to |L| // 2 and the width to |L| / 8 sites.
    `sigma` may be `math.inf` for a plane wave. A plane wave touches
    every site, so on a bounded lattice `check_margin` always rejects it
    with `error.MarginError`; plane wave detection runs on rings only.
    """
    if x0 is None:
        x0 = lattice.size // 2

    if sigma is None:
        sigma = lattice.size / 8

    if branch not in (constants.BRANCH_POSITIVE, constants.BRANCH_NEGATIVE):
        raise error.InvalidParameter('Unknown frequency branch %r' % branch)

    return PacketSpec(float(k0), int(x0), float(sigma), branch)


def check_margin(lattice, spec):
    if not spec.sigma > 0:
        raise error.InvalidParameter(
            'Packet width must be positive, got %r' % spec.sigma)

    if not 0 <= spec.x0 < lattice.size:
        raise error.InvalidParameter(
            'Packet center %d lies outside the lattice' % spec.x0)

    if lattice_state.is_periodic(lattice):
        return

    margin = min(spec.x0, lattice.size - 1 - spec.x0)
    if margin < 3 * spec.sigma:
        raise error.MarginError(
            'Packet centered at %d with width %g comes within %d sites of '
            'a boundary; at least 3 sigma = %g are required' % (
                spec.x0, spec.sigma, margin, 3 * spec.sigma))


def prepare_packet(lattice, theta, spec):
    """Gaussian packet on one frequency branch of the unperturbed operator.

    psi(x) = N exp(-d(x, x0)^2 / (4 sigma^2)) exp(i k0 x) chi(k0)

    d is the distance around the ring on a periodic lattice and the plain
    distance otherwise; chi(k0) is the branch eigenvector of M(k0) at A = 0.
    """
    check_margin(lattice, spec)

    sites = np.arange(lattice.size)
    distance = np.abs(sites - spec.x0)
    if lattice_state.is_periodic(lattice):
        distance = np.minimum(distance, lattice.size - distance)

    envelope = np.exp(-distance ** 2 / (4 * spec.sigma ** 2))
    carrier = envelope * np.exp(1j * spec.k0 * sites)
    chi = spectral.branch_eigenvector(theta, spec.k0, spec.branch)

    return lattice_state.normalize(
        lattice_state.wavefunction(carrier[:, None] * chi[None, :]))


def frequency_distribution(psi, spectrum):
    """Outcome distribution of a projective measurement of the eigenphase.

    :param psi: normalized `lattice.WaveFunction`
    :param spectrum: `spectral.Spectrum` of the operator that evolves psi
    :returns: `FrequencyDistribution` over degeneracy-grouped eigenphases
    """
    vector = lattice_state.as_vector(psi)
    if len(vector) != len(spectrum.eigenphases):
        raise error.SizeMismatch(
            'State has %d amplitudes, spectrum has %d eigenphases' % (
                len(vector), len(spectrum.eigenphases)))

    if abs(np.linalg.norm(vector) - 1) > 1e-10:
        raise error.InvalidParameter('State must be normalized')

    weights = np.abs(spectrum.eigenvectors.conj().T @ vector) ** 2
    support = []
    probabilities = []
    for group in spectrum.groups:
        phases = spectrum.eigenphases[group]
        if np.ptp(phases) > math.pi:
            # group straddles the branch cut
            support.append(math.pi)
        else:
            support.append(float(np.mean(phases)))
        probabilities.append(float(np.sum(weights[group])))

    probabilities = np.array(probabilities)
    total = float(np.sum(probabilities))
    if abs(total - 1) > 1e-10:
        raise error.ToleranceError(
            'Frequency distribution sums to %.15g' % total)

    return FrequencyDistribution(np.array(support), probabilities / total)


def frequency_stream(seed, stream=0):
    """Counter-based generator fully determined by (seed, stream)"""
    sequence = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(sequence))


def sample_frequencies(dist, n, seed, stream=0):
    """Draw `n` measurement outcomes by inverse CDF.

    Identical (dist, n, seed, stream) give bit-identical samples.
    """
    if n < 1:
        raise error.InvalidParameter('At least one sample is required')

    cdf = np.cumsum(dist.probabilities)
    cdf /= cdf[-1]
    uniforms = frequency_stream(seed, stream).random(int(n))
    indices = np.minimum(np.searchsorted(cdf, uniforms, side='right'),
                         len(cdf) - 1)
    return dist.support[indices]


def summarize(samples):
    """Return (mean, sample std) of measured eigenphases.

    :raises: `error.WraparoundError` when a sample lies within 0.1 of the
        branch cut, where an arithmetic mean is meaningless
    """
    samples = np.asarray(samples, dtype=float)
    if not len(samples):
        raise error.InvalidParameter('No samples to summarize')

    limit = math.pi - constants.WRAPAROUND_GUARD
    if np.any(np.abs(samples) >= limit):
        raise error.WraparoundError(
            'Samples reach within %g of the branch cut at +/-pi' % (
                constants.WRAPAROUND_GUARD))

    std = float(np.std(samples, ddof=1)) if len(samples) > 1 else 0.0
    return float(np.mean(samples)), std


def distribution_moments(dist):
    mean = float(np.dot(dist.probabilities, dist.support))
    variance = float(np.dot(dist.probabilities, (dist.support - mean) ** 2))
    return mean, math.sqrt(max(variance, 0.0))


def band_weight(dist, branch=constants.BRANCH_POSITIVE):
    """Total probability of the positive or negative frequency band"""
    if branch == constants.BRANCH_POSITIVE:
        mask = dist.support > 0
    else:
        mask = dist.support < 0
    return float(np.sum(dist.probabilities[mask]))
