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
import testscenarios

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import evolution
from qlga_tools.simulator import gauge
from qlga_tools.simulator import lattice
from qlga_tools.simulator import spectral
from qlga_tools.tests.unit import base


class WrapPhaseTestCase(base.TestCase):

    def test_half_open_interval(self):
        self.assertAlmostEqual(math.pi, float(spectral.wrap_phase(math.pi)))
        self.assertAlmostEqual(math.pi, float(spectral.wrap_phase(-math.pi)))
        self.assertAlmostEqual(
            0.5, float(spectral.wrap_phase(0.5 + 4 * math.pi)))

    def test_degenerate_groups(self):
        groups = spectral.degenerate_groups(
            np.array([-1.0, -1.0 + 1e-10, 0.5, 1.0]))
        self.assertEqual([[0, 1], [2], [3]], [list(g) for g in groups])

    def test_degenerate_groups_across_cut(self):
        groups = spectral.degenerate_groups(
            np.array([-math.pi + 1e-10, 0.0, math.pi]))
        self.assertEqual([[2, 0], [1]], [list(g) for g in groups])


class SpectrumTestCase(testscenarios.WithScenarios, base.TestCase):

    scenarios = [
        ('periodic', {'topology': lattice.periodic()}),
        ('bounded', {'topology': lattice.bounded(0.7, 0.1)}),
    ]

    def setUp(self):
        super().setUp()
        self.lattice = lattice.make_lattice(9, self.topology)
        self.U = evolution.build_evolution(
            self.lattice, math.pi / 5,
            gauge.random_fields(self.lattice, self.rng))

    def test_eigenpairs(self):
        result = spectral.spectrum(self.U)
        self.assertEqual(18, len(result.eigenphases))
        self.assertLessEqual(float(np.max(result.residuals)), 1e-9)
        self.assertTrue(np.all(np.diff(result.eigenphases) >= 0))
        self.assertTrue(np.all(result.eigenphases > -math.pi))
        self.assertTrue(np.all(result.eigenphases <= math.pi))

    def test_eigenvectors_orthonormal(self):
        vectors = spectral.spectrum(self.U).eigenvectors
        self.assertAllClose(np.eye(18), vectors.conj().T @ vectors,
                            atol=1e-10)

    def test_not_unitary(self):
        dense = np.array(self.U.dense)
        dense[0, 0] += 0.1
        self.assertRaises(error.SpectrumError, spectral.spectrum, dense)


class DegenerateSpectrumTestCase(base.TestCase):

    def test_massless_degenerate_basis(self):
        lat = lattice.make_lattice(8)
        U = evolution.build_evolution(lat, 0.0, lattice.make_fields(lat))
        result = spectral.spectrum(U)
        self.assertLess(len(result.groups), 16)
        self.assertAllClose(np.eye(16),
                            result.eigenvectors.conj().T @ result.eigenvectors,
                            atol=1e-10)


class DispersionTestCase(base.TestCase):

    def test_massless_is_linear(self):
        branches = spectral.dispersion(0.0, 0.3)
        self.assertAlmostEqual(0.3, branches.plus)
        self.assertAlmostEqual(-0.3, branches.minus)

    def test_gap_at_zero_momentum(self):
        self.assertAlmostEqual(0.4, spectral.dispersion(0.4, 0.0).plus)

    def test_vector_potential_shifts_momentum(self):
        self.assertAlmostEqual(spectral.dispersion(0.4, 1.2).plus,
                               spectral.dispersion(0.4, 1.0, 0.2).plus)

    def test_group_velocity(self):
        theta, k = math.pi / 6, 1.1
        step = 1e-6
        numeric = (spectral.dispersion(theta, k + step).plus
                   - spectral.dispersion(theta, k - step).plus) / (2 * step)
        self.assertAlmostEqual(numeric, spectral.group_velocity(theta, k),
                               places=6)

    def test_group_velocity_massless(self):
        self.assertEqual(1.0, spectral.group_velocity(0.0, 0.0))

    def test_branch_eigenvector(self):
        theta, q = math.pi / 6, 0.9
        for branch in (constants.BRANCH_POSITIVE, constants.BRANCH_NEGATIVE):
            chi = spectral.branch_eigenvector(theta, q, branch)
            branches = spectral.dispersion(theta, q)
            omega = (branches.plus if branch == constants.BRANCH_POSITIVE
                     else branches.minus)
            self.assertAlmostEqual(1.0, float(np.linalg.norm(chi)))
            self.assertAllClose(np.exp(-1j * omega) * chi,
                                spectral.reduced_block(theta, q) @ chi)

    def test_homogeneous_phases_match_numeric(self):
        lat = lattice.make_lattice(12)
        delta = 1.3
        U = evolution.build_evolution(
            lat, math.pi / 6, lattice.uniform_fields(lat, delta / 12))
        self.assertLessEqual(
            spectral.phase_distance(
                spectral.homogeneous_phases(lat, math.pi / 6, delta),
                spectral.spectrum(U).eigenphases),
            1e-9)

    def test_dispersion_table(self):
        lat = lattice.make_lattice(10)
        table = spectral.dispersion_table(lat, math.pi / 6, 0.7)
        self.assertEqual(20, len(table))
        self.assertEqual((0, constants.BRANCH_POSITIVE), table[0][:2])
        for _, _, analytic, numeric in table:
            self.assertLessEqual(
                abs(float(spectral.wrap_phase(analytic - numeric))), 1e-9)

    def test_dispersion_table_bounded(self):
        lat = lattice.make_lattice(10, lattice.bounded())
        self.assertRaises(error.NotSupportedError, spectral.dispersion_table,
                          lat, 0.1, 0.0)


class MatchPhasesTestCase(base.TestCase):

    def test_match_across_cut(self):
        matched, distance = spectral.match_phases(
            np.array([math.pi - 1e-3, 0.0]), np.array([0.0, -math.pi + 1e-3]))
        self.assertAllClose([-math.pi + 1e-3, 0.0], matched)
        self.assertAlmostEqual(2e-3, distance)

    def test_size_mismatch(self):
        self.assertRaises(error.SizeMismatch, spectral.match_phases,
                          np.zeros(3), np.zeros(4))


class SpectralFlowTestCase(base.TestCase):

    def test_massive_ring(self):
        lat = lattice.make_lattice(8)
        result = spectral.spectral_flow(lat, math.pi / 6, 64)
        self.assertEqual(constants.TOPOLOGY_PERIODIC, result.topology)
        self.assertEqual((64, 16), result.phases.shape)
        self.assertEqual(2, max(result.flow_count.values()))

        # the level inside the mass gap around zero is never crossed
        gap_level = min(result.flow_count, key=abs)
        self.assertEqual(0, result.flow_count[gap_level])

    def test_massless_ring(self):
        lat = lattice.make_lattice(8)
        result = spectral.spectral_flow(lat, 0.0, 64)
        self.assertTrue(result.flow_count)
        self.assertEqual({2}, set(result.flow_count.values()))

    def test_full_period_returns_spectrum(self):
        lat = lattice.make_lattice(8)
        result = spectral.spectral_flow(lat, math.pi / 6, 32)
        self.assertLessEqual(
            spectral.phase_distance(result.phases[0], result.phases[-1]),
            1e-9)

    def test_bounded_is_zero(self):
        lat = lattice.make_lattice(8, lattice.bounded())
        result = spectral.spectral_flow(lat, math.pi / 6, 16)
        self.assertEqual({0}, set(result.flow_count.values()))
        self.assertAllClose(result.branches[0], result.branches[-1],
                            atol=1e-9)

    def test_too_few_points(self):
        self.assertRaises(error.InvalidParameter, spectral.spectral_flow,
                          lattice.make_lattice(8), 0.1, 1)

    def test_coarse_grid(self):
        self.assertRaises(error.TrackingError, spectral.spectral_flow,
                          lattice.make_lattice(24), math.pi / 6, 3)

    def test_level_at_eigenphase(self):
        lat = lattice.make_lattice(8)
        result = spectral.spectral_flow(lat, math.pi / 6, 32)
        self.assertRaises(error.InvalidParameter, spectral.flow_count,
                          result, float(result.phases[0][3]))

    def test_generic_levels_skip_degenerate(self):
        self.assertEqual(
            [0.5], spectral.generic_levels([0.0, 1.0, 1.0 + 1e-9]))

    def test_sixteen_site_sweep(self):
        result = spectral.spectral_flow(lattice.make_lattice(16),
                                        math.pi / 6, 64)
        self.assertEqual((64, 32), result.branches.shape)

        steps = np.diff(result.branches, axis=0)
        rising = np.all(steps >= -1e-9, axis=0)
        falling = np.all(steps <= 1e-9, axis=0)
        self.assertEqual(16, int(np.sum(rising)))
        self.assertEqual(16, int(np.sum(falling)))
        self.assertFalse(np.any(rising & falling))

        self.assertTrue(result.flow_count)
        self.assertLessEqual(set(result.flow_count.values()), {0, 2})
        self.assertLessEqual(
            spectral.phase_distance(result.phases[0], result.phases[-1]),
            1e-9)


class GaugeClassSpectrumTestCase(base.TestCase):

    def setUp(self):
        super().setUp()
        self.theta = math.pi / 6

    def _phases(self, lat, A):
        fields = lattice.make_fields(lat, A=A)
        U = evolution.build_evolution(lat, self.theta, fields)
        return spectral.spectrum(U).eigenphases

    def test_bounded_spectrum_ignores_vector_potential(self):
        lat = lattice.make_lattice(16, lattice.bounded())
        reference = self._phases(lat, np.zeros(16))
        for _ in range(20):
            A = self.rng.uniform(-math.pi, math.pi, 16)
            self.assertLessEqual(
                spectral.phase_distance(reference, self._phases(lat, A)),
                constants.SPECTRUM_MATCH_TOLERANCE)

    def test_ring_spectrum_follows_holonomy(self):
        lat = lattice.make_lattice(16)
        # delta and 2 pi - delta give the same spectrum, none of these pair up
        deltas = [0.0, 0.3, 0.8, 1.5, 2.5]
        phases = [self._phases(lat, np.full(16, delta / 16))
                  for delta in deltas]
        for i in range(len(deltas)):
            for j in range(i + 1, len(deltas)):
                self.assertGreater(
                    spectral.phase_distance(phases[i], phases[j]), 1e-4,
                    'delta %r against %r' % (deltas[i], deltas[j]))

    def test_ring_spectrum_depends_on_loop_only(self):
        lat = lattice.make_lattice(16)
        A = self.rng.uniform(-1, 1, 16)
        uniform = np.full(16, float(np.sum(A)) / 16)
        self.assertLessEqual(
            spectral.phase_distance(self._phases(lat, A),
                                    self._phases(lat, uniform)),
            constants.SPECTRUM_MATCH_TOLERANCE)


class ContinuumLimitTestCase(base.TestCase):

    def test_relativistic_dispersion(self):
        for theta in np.linspace(0.01, 0.1, 10):
            for k in np.linspace(0.0, 0.1, 11):
                energy = math.hypot(theta, k)
                omega = spectral.dispersion(theta, k)
                self.assertLessEqual(abs(omega.plus - energy),
                                     0.5 * energy ** 3)
                self.assertEqual(-omega.plus, omega.minus)
