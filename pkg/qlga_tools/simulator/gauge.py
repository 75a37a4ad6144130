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

"""Local U(1) gauge transformations of states, operators and potentials."""

import collections
import math

import numpy as np

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import evolution
from qlga_tools.simulator import lattice as lattice_state
from qlga_tools.simulator import spectral


WilsonLoop = collections.namedtuple('WilsonLoop', ['delta', 'unit_complex'])
GaugeCheck = collections.namedtuple(
    'GaugeCheck', ['name', 'residual', 'tolerance', 'passed'])


def _check_gauge(size, g):
    for name, values in zip(g._fields, g):
        if len(values) != size:
            raise error.SizeMismatch(
                '%s has %d entries, lattice has %d' % (
                    name, len(values), size))


def transform_operator(U, g):
    """Return D[exp(-i alpha(t+1))] U D[exp(i alpha(t))] as a dense matrix"""
    _check_gauge(U.lattice.size, g)
    left = np.repeat(np.exp(-1j * np.asarray(g.alpha_tplus1)), 2)
    right = np.repeat(np.exp(1j * np.asarray(g.alpha_t)), 2)
    return left[:, None] * U.dense * right[None, :]


def transform_fields(fields, g):
    """Potentials seen after the gauge transformation `g`.

    phi'(x) = phi(x) + alpha(t+1, x) - alpha(t, x)
    A'(x) = A(x) + alpha(t+1, x) - alpha(t+1, x-1)

    with x-1 taken mod |L|; on bounded lattices A'(0) is computed the same
    way but, like A(0), never enters the evolution.
    """
    size = len(fields.phi)
    _check_gauge(size, g)
    alpha_t = np.asarray(g.alpha_t)
    alpha_tplus1 = np.asarray(g.alpha_tplus1)

    phi = fields.phi + alpha_tplus1 - alpha_t
    A = fields.A + alpha_tplus1 - np.roll(alpha_tplus1, 1)
    return lattice_state.FieldConfig(phi, A)


def gauge_fix(fields, lattice, static=False):
    """Gauge that removes A from every column but x = 0.

    alpha(t+1, x) = -sum(A(y) for y <= x) and alpha(t, x) = 0, or the same
    as alpha(t+1, x) when `static` is set, which leaves phi untouched.
    """
    alpha_tplus1 = -np.cumsum(fields.A)
    alpha_t = alpha_tplus1 if static else np.zeros(lattice.size)
    return lattice_state.make_gauge(lattice, alpha_t, alpha_tplus1)


def canonical_fields(fields, lattice):
    """Translation invariant representative of the gauge class of `fields`.

    With boundaries every vector potential is pure gauge and A becomes
    zero on every link. On a ring the total sum(A) survives any single
    valued gauge and is spread evenly over the links. `phi` is static
    here and kept as given.
    """
    if lattice_state.is_periodic(lattice):
        mean = math.fsum(fields.A) / lattice.size
        return lattice_state.make_fields(lattice, phi=fields.phi, A=mean)

    transformed = transform_fields(
        fields, gauge_fix(fields, lattice, static=True))
    A = np.array(transformed.A)
    A[1:] = 0.0
    return lattice_state.make_fields(lattice, phi=transformed.phi, A=A)


def wilson_loop(fields, lattice):
    """Return the holonomy exp(i sum A) of a periodic lattice.

    :raises: `error.NotSupportedError` on bounded lattices, where every
        vector potential is gauge equivalent to zero
    """
    if not lattice_state.is_periodic(lattice):
        raise error.NotSupportedError(
            'Wilson loop is undefined on a lattice with boundaries')

    unit_complex = complex(np.exp(1j * math.fsum(fields.A)))
    delta = math.atan2(unit_complex.imag, unit_complex.real) % (2 * math.pi)
    if delta >= 2 * math.pi:
        delta = 0.0

    return WilsonLoop(delta, unit_complex)


def _circular_distance(a, b):
    return abs((a - b + math.pi) % (2 * math.pi) - math.pi)


def gauge_equivalent(first, second, lattice,
                     tolerance=constants.WILSON_LOOP_TOLERANCE):
    """Decide whether two static field configurations are gauge equivalent.

    Scalar potentials must agree; on a periodic lattice the Wilson loops
    must in addition agree mod 2pi.
    """
    if not np.allclose(first.phi, second.phi, rtol=0, atol=tolerance):
        return False

    if not lattice_state.is_periodic(lattice):
        return True

    return _circular_distance(wilson_loop(first, lattice).delta,
                              wilson_loop(second, lattice).delta) <= tolerance


def expected_blocks(U, g):
    """Closed forms of the transformed blocks of every link.

    Block (x-1, x) picks up exp(-i dt_alpha(x) + i dx_alpha(x)) and block
    (x, x-1) picks up exp(-i dt_alpha(x-1) - i dx_alpha(x)), on top of the
    potential phases of `U`.

    :returns: dict mapping (row, col) block positions to 2x2 matrices
    """
    lattice = U.lattice
    size = lattice.size
    alpha_t = np.asarray(g.alpha_t)
    alpha_tplus1 = np.asarray(g.alpha_tplus1)
    dt_alpha = alpha_tplus1 - alpha_t
    dx_alpha = alpha_tplus1 - np.roll(alpha_tplus1, 1)

    blocks = {}
    for x in evolution.links(lattice):
        left = (x - 1) % size
        upper, lower = evolution.link_blocks(lattice, U.theta, x)
        upper_phase, lower_phase = evolution.link_phases(U.fields, x)
        blocks[(left, x)] = np.exp(
            -1j * dt_alpha[x] + 1j * dx_alpha[x]) * upper_phase * upper
        blocks[(x, left)] = np.exp(
            -1j * dt_alpha[left] - 1j * dx_alpha[x]) * lower_phase * lower

    return blocks


def verify_block_formulas(U, g):
    """Max deviation of transform_operator(U, g) from its closed form"""
    transformed = transform_operator(U, g)
    expected = np.zeros_like(transformed)

    for (row, col), value in expected_blocks(U, g).items():
        expected[2 * row:2 * row + 2, 2 * col:2 * col + 2] = value

    dt_alpha = np.asarray(g.alpha_tplus1) - np.asarray(g.alpha_t)
    for index, value in evolution.parked_entries(U.lattice, U.fields):
        expected[index, index] = np.exp(-1j * dt_alpha[index // 2]) * value

    return float(np.max(np.abs(transformed - expected)))


def covariance_residual(U, g, psi):
    """Check U' D[e^{-i alpha(t)}] psi = D[e^{-i alpha(t+1)}] U psi"""
    transformed = transform_operator(U, g)
    lhs = transformed @ lattice_state.as_vector(
        lattice_state.apply_site_phase(psi, g.alpha_t))
    rhs = lattice_state.as_vector(
        lattice_state.apply_site_phase(evolution.step(U, psi), g.alpha_tplus1))
    return float(np.max(np.abs(lhs - rhs)))


def random_fields(lattice, rng, scale=math.pi):
    return lattice_state.make_fields(
        lattice,
        phi=rng.uniform(-scale, scale, lattice.size),
        A=rng.uniform(-scale, scale, lattice.size))


def random_gauge(lattice, rng, scale=math.pi, static=True):
    alpha_t = rng.uniform(-scale, scale, lattice.size)
    alpha_tplus1 = (None if static
                    else rng.uniform(-scale, scale, lattice.size))
    return lattice_state.make_gauge(lattice, alpha_t, alpha_tplus1)


def _gauge_check(name, residual, tolerance):
    residual = float(residual)
    return GaugeCheck(name, residual, tolerance, residual <= tolerance)


def run_checks(lattice, theta, rng, spectrum_fn=spectral.spectrum,
               inject_fault=False):
    """Verify gauge covariance on randomized fields and gauges.

    Covers the commuting diagram for static and time dependent gauges,
    the closed forms of the transformed blocks, gauge fixing, Wilson loop
    invariance on a ring and removability of A with boundaries.

    :param inject_fault: transform the potentials with a slightly wrong
        gauge so that the covariance checks must fail
    :returns: list of `GaugeCheck`
    """
    fields = random_fields(lattice, rng)
    U = evolution.build_evolution(lattice, theta, fields)
    psi = lattice_state.normalize(lattice_state.wavefunction(
        rng.normal(size=(lattice.size, 2))
        + 1j * rng.normal(size=(lattice.size, 2))))

    checks = []
    for name, static in (('covariance static', True),
                         ('covariance time dependent', False)):
        g = random_gauge(lattice, rng, static=static)
        g_fields = g
        if inject_fault:
            g_fields = g._replace(alpha_tplus1=g.alpha_tplus1 + 1e-3)

        transformed = evolution.build_evolution(
            lattice, theta, transform_fields(fields, g_fields))
        rhs = lattice_state.apply_site_phase(
            evolution.step(U, psi), g.alpha_tplus1)
        lhs = evolution.step(
            transformed, lattice_state.apply_site_phase(psi, g.alpha_t))
        checks.append(_gauge_check(
            name,
            np.max(np.abs(lattice_state.as_vector(lhs)
                          - lattice_state.as_vector(rhs))),
            constants.UNITARITY_TOLERANCE))

        checks.append(_gauge_check(
            'operator %s' % name,
            np.max(np.abs(transform_operator(U, g) - transformed.dense)),
            constants.UNITARITY_TOLERANCE))

    g = random_gauge(lattice, rng, static=False)
    checks.append(_gauge_check('block formulas', verify_block_formulas(U, g),
                               constants.UNITARITY_TOLERANCE))

    fixed = transform_fields(fields, gauge_fix(fields, lattice))
    checks.append(_gauge_check('gauge fixing', np.max(np.abs(fixed.A[1:])),
                               constants.UNITARITY_TOLERANCE))

    if lattice_state.is_periodic(lattice):
        before = wilson_loop(fields, lattice).unit_complex
        after = wilson_loop(
            transform_fields(fields, random_gauge(lattice, rng)),
            lattice).unit_complex
        checks.append(_gauge_check('wilson loop invariance',
                                   abs(after - before),
                                   constants.WILSON_LOOP_TOLERANCE))

    else:
        removed = evolution.build_evolution(
            lattice, theta, canonical_fields(fields, lattice))
        checks.append(_gauge_check(
            'A gauge-removable: spectrum match',
            spectral.phase_distance(spectrum_fn(U).eigenphases,
                                    spectrum_fn(removed).eigenphases),
            constants.SPECTRUM_MATCH_TOLERANCE))

    return checks
