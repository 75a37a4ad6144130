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

import math

import numpy as np

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import evolution
from qlga_tools.simulator import lattice
from qlga_tools.simulator import spectral
from qlga_tools.simulator import wavepacket
from qlga_tools.tests.unit import base


class PacketSpecTestCase(base.TestCase):

    def test_defaults(self):
        spec = wavepacket.make_packet_spec(lattice.make_lattice(64))
        self.assertEqual(32, spec.x0)
        self.assertEqual(8.0, spec.sigma)
        self.assertEqual(math.pi / 2, spec.k0)
        self.assertEqual(constants.BRANCH_POSITIVE, spec.branch)

    def test_unknown_branch(self):
        self.assertRaises(error.InvalidParameter, wavepacket.make_packet_spec,
                          lattice.make_lattice(64), branch='0')

    def test_margin_ok(self):
        lat = lattice.make_lattice(64, lattice.bounded())
        wavepacket.check_margin(lat, wavepacket.make_packet_spec(lat))

    def test_margin_too_small(self):
        lat = lattice.make_lattice(64, lattice.bounded())
        spec = wavepacket.make_packet_spec(lat, sigma=11)
        self.assertRaises(error.MarginError, wavepacket.check_margin,
                          lat, spec)

    def test_plane_wave_rejected_with_boundaries(self):
        lat = lattice.make_lattice(64, lattice.bounded())
        spec = wavepacket.make_packet_spec(lat, sigma=math.inf)
        self.assertRaises(error.MarginError, wavepacket.check_margin,
                          lat, spec)
        wavepacket.check_margin(lattice.make_lattice(64), spec)

    def test_margin_ignored_on_ring(self):
        lat = lattice.make_lattice(64)
        wavepacket.check_margin(lat, wavepacket.make_packet_spec(lat, x0=0))

    def test_invalid_width_and_center(self):
        lat = lattice.make_lattice(16)
        self.assertRaises(error.InvalidParameter, wavepacket.check_margin,
                          lat, wavepacket.make_packet_spec(lat, sigma=0))
        self.assertRaises(error.InvalidParameter, wavepacket.check_margin,
                          lat, wavepacket.make_packet_spec(lat, x0=16))


class PreparePacketTestCase(base.TestCase):

    def test_normalized(self):
        lat = lattice.make_lattice(32)
        psi = wavepacket.prepare_packet(
            lat, math.pi / 6, wavepacket.make_packet_spec(lat))
        self.assertAlmostEqual(1.0, lattice.norm(psi), delta=1e-12)

    def test_same_state_on_both_topologies(self):
        spec = wavepacket.make_packet_spec(lattice.make_lattice(64))
        ring = wavepacket.prepare_packet(
            lattice.make_lattice(64), math.pi / 6, spec)
        segment = wavepacket.prepare_packet(
            lattice.make_lattice(64, lattice.bounded()), math.pi / 6, spec)
        self.assertAllClose(ring.amplitudes, segment.amplitudes, atol=0)

    def test_centered(self):
        lat = lattice.make_lattice(64)
        psi = wavepacket.prepare_packet(
            lat, 0.3, wavepacket.make_packet_spec(lat, x0=20))
        density = np.sum(np.abs(psi.amplitudes) ** 2, axis=1)
        self.assertEqual(20, int(np.argmax(density)))

    def test_margin_enforced(self):
        lat = lattice.make_lattice(64, lattice.bounded())
        self.assertRaises(
            error.MarginError, wavepacket.prepare_packet, lat, 0.3,
            wavepacket.make_packet_spec(lat, x0=4))


class FrequencyDistributionTestCase(base.TestCase):

    def setUp(self):
        super().setUp()
        self.theta = math.pi / 6
        self.lattice = lattice.make_lattice(16)
        self.U = evolution.build_evolution(
            self.lattice, self.theta, lattice.make_fields(self.lattice))
        self.spectrum = spectral.spectrum(self.U)

    def test_plane_wave_is_eigenstate(self):
        spec = wavepacket.make_packet_spec(self.lattice, sigma=math.inf)
        psi = wavepacket.prepare_packet(self.lattice, self.theta, spec)
        dist = wavepacket.frequency_distribution(psi, self.spectrum)

        mean, std = wavepacket.distribution_moments(dist)
        self.assertAlmostEqual(math.pi / 2, mean, delta=1e-10)
        self.assertLess(std, 1e-6)
        self.assertAlmostEqual(
            1.0, wavepacket.band_weight(dist, constants.BRANCH_POSITIVE),
            delta=1e-10)

    def test_negative_branch(self):
        spec = wavepacket.make_packet_spec(
            self.lattice, sigma=math.inf, branch=constants.BRANCH_NEGATIVE)
        psi = wavepacket.prepare_packet(self.lattice, self.theta, spec)
        dist = wavepacket.frequency_distribution(psi, self.spectrum)
        self.assertAlmostEqual(
            -math.pi / 2, wavepacket.distribution_moments(dist)[0],
            delta=1e-10)

    def test_probabilities_sum_to_one(self):
        spec = wavepacket.make_packet_spec(self.lattice, k0=0.7)
        psi = wavepacket.prepare_packet(self.lattice, self.theta, spec)
        dist = wavepacket.frequency_distribution(psi, self.spectrum)
        self.assertAlmostEqual(1.0, float(np.sum(dist.probabilities)),
                               delta=1e-12)
        self.assertEqual(len(self.spectrum.groups), len(dist.support))
        self.assertTrue(np.all(dist.probabilities >= 0))

    def test_stationary_under_evolution(self):
        spec = wavepacket.make_packet_spec(self.lattice, k0=0.7)
        psi = wavepacket.prepare_packet(self.lattice, self.theta, spec)
        before = wavepacket.frequency_distribution(psi, self.spectrum)
        after = wavepacket.frequency_distribution(
            evolution.evolve(self.U, psi, 37), self.spectrum)
        self.assertAllClose(before.probabilities, after.probabilities,
                            atol=1e-10)

    def test_not_normalized(self):
        psi = lattice.wavefunction(2 * np.ones(32) / math.sqrt(32))
        self.assertRaises(error.InvalidParameter,
                          wavepacket.frequency_distribution,
                          psi, self.spectrum)

    def test_size_mismatch(self):
        psi = lattice.localized_state(lattice.make_lattice(8), 0, 0)
        self.assertRaises(error.SizeMismatch,
                          wavepacket.frequency_distribution,
                          psi, self.spectrum)


class SamplingTestCase(base.TestCase):

    def setUp(self):
        super().setUp()
        self.dist = wavepacket.FrequencyDistribution(
            np.array([-1.0, 1.0]), np.array([0.25, 0.75]))

    def test_reproducible(self):
        first = wavepacket.sample_frequencies(self.dist, 50, 11, stream=3)
        second = wavepacket.sample_frequencies(self.dist, 50, 11, stream=3)
        self.assertTrue(np.array_equal(first, second))

    def test_streams_independent(self):
        first = wavepacket.sample_frequencies(self.dist, 50, 11, stream=0)
        second = wavepacket.sample_frequencies(self.dist, 50, 11, stream=1)
        self.assertFalse(np.array_equal(first, second))

    def test_follows_distribution(self):
        samples = wavepacket.sample_frequencies(self.dist, 20000, 5)
        self.assertEqual({-1.0, 1.0}, set(samples.tolist()))
        self.assertAlmostEqual(0.75, float(np.mean(samples == 1.0)),
                               delta=0.02)

    def test_point_mass(self):
        dist = wavepacket.FrequencyDistribution(
            np.array([0.5, 1.0]), np.array([0.0, 1.0]))
        samples = wavepacket.sample_frequencies(dist, 100, 0)
        self.assertTrue(np.all(samples == 1.0))

    def test_no_samples(self):
        self.assertRaises(error.InvalidParameter,
                          wavepacket.sample_frequencies, self.dist, 0, 1)


class SummarizeTestCase(base.TestCase):

    def test_mean_and_std(self):
        mean, std = wavepacket.summarize([1.0, 2.0, 3.0])
        self.assertAlmostEqual(2.0, mean)
        self.assertAlmostEqual(1.0, std)

    def test_single_sample(self):
        self.assertEqual((0.5, 0.0), wavepacket.summarize([0.5]))

    def test_empty(self):
        self.assertRaises(error.InvalidParameter, wavepacket.summarize, [])

    def test_wraparound(self):
        self.assertRaises(error.WraparoundError, wavepacket.summarize,
                          [1.0, -3.1])

    def test_band_weight(self):
        dist = wavepacket.FrequencyDistribution(
            np.array([-1.0, 0.0, 1.0]), np.array([0.2, 0.3, 0.5]))
        self.assertAlmostEqual(0.5, wavepacket.band_weight(dist))
        self.assertAlmostEqual(
            0.2, wavepacket.band_weight(dist, constants.BRANCH_NEGATIVE))
