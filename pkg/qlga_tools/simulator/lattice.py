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

"""Lattices, wave functions and field configurations.

All values are immutable: array members are marked read-only when the
value is built, so they can be shared between threads freely.
"""

import collections
import math

import numpy as np

from qlga_tools import error
from qlga_tools.simulator import constants


Topology = collections.namedtuple(
    'Topology', ['kind', 'zeta_left', 'zeta_right'])
Lattice = collections.namedtuple('Lattice', ['size', 'topology'])
# amplitudes has shape (size, 2), columns ordered (psi_-1, psi_+1)
WaveFunction = collections.namedtuple('WaveFunction', ['amplitudes'])
FieldConfig = collections.namedtuple('FieldConfig', ['phi', 'A'])
GaugeFunction = collections.namedtuple(
    'GaugeFunction', ['alpha_t', 'alpha_tplus1'])


def _frozen(array, dtype):
    array = np.array(array, dtype=dtype)
    array.setflags(write=False)
    return array


def _reduce_angle(angle):
    angle = float(angle)
    if not math.isfinite(angle):
        raise error.InvalidParameter(
            'Boundary phase must be finite, got %r' % angle)
    angle %= 2 * math.pi
    return 0.0 if angle >= 2 * math.pi else angle


def periodic():
    return Topology(constants.TOPOLOGY_PERIODIC, 0.0, 0.0)


def bounded(zeta_left=0.0, zeta_right=0.0):
    """Type II boundary topology with independent boundary phases"""
    return Topology(constants.TOPOLOGY_BOUNDED,
                    _reduce_angle(zeta_left), _reduce_angle(zeta_right))


def topology_from_name(name, zeta_left=0.0, zeta_right=0.0):
    if name == constants.TOPOLOGY_PERIODIC:
        return periodic()

    if name == constants.TOPOLOGY_BOUNDED:
        return bounded(zeta_left, zeta_right)

    raise error.InvalidParameter('Unknown topology %s' % name)


def is_periodic(lattice):
    return lattice.topology.kind == constants.TOPOLOGY_PERIODIC


def make_lattice(size, topology=None):
    """Build a validated lattice.

    :param size: number of sites, at least three
    :param topology: `Topology`, periodic when omitted
    :raises: `error.InvalidParameter` on a too small lattice
    """
    if isinstance(size, bool) or int(size) != size:
        raise error.InvalidParameter('Lattice size must be an integer')

    size = int(size)
    if size < constants.MIN_LATTICE_SIZE:
        raise error.InvalidParameter(
            'Lattice size must be at least %d, got %d' % (
                constants.MIN_LATTICE_SIZE, size))

    return Lattice(size, topology or periodic())


def mass_angle(theta):
    """Validate a mass angle, returning it as `float`"""
    theta = float(theta)
    if not 0.0 <= theta <= math.pi / 2:
        raise error.InvalidParameter(
            'Mass angle must lie in [0, pi/2], got %r' % theta)
    return theta


def zero_wavefunction(lattice):
    return WaveFunction(_frozen(np.zeros((lattice.size, 2)), complex))


def wavefunction(amplitudes, lattice=None):
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.ndim == 1:
        amplitudes = amplitudes.reshape(-1, 2)

    if amplitudes.ndim != 2 or amplitudes.shape[1] != 2:
        raise error.SizeMismatch(
            'Amplitudes must be a (size, 2) array, got shape %s' % (
                amplitudes.shape,))

    if lattice is not None and len(amplitudes) != lattice.size:
        raise error.SizeMismatch(
            'Wave function has %d sites, lattice has %d' % (
                len(amplitudes), lattice.size))

    return WaveFunction(_frozen(amplitudes, complex))


def localized_state(lattice, site, component):
    amplitudes = np.zeros((lattice.size, 2), dtype=complex)
    amplitudes[site % lattice.size, component] = 1.0
    return WaveFunction(_frozen(amplitudes, complex))


def as_vector(psi):
    """Flatten to the 2|L| vector U acts on, site-major"""
    return psi.amplitudes.reshape(-1)


def from_vector(vector):
    return wavefunction(np.asarray(vector).reshape(-1, 2))


def _check_same_size(a, b):
    if len(a.amplitudes) != len(b.amplitudes):
        raise error.SizeMismatch(
            'Wave functions have %d and %d sites' % (
                len(a.amplitudes), len(b.amplitudes)))


def inner_product(a, b):
    """Return <a|b>, conjugate-linear in `a`"""
    _check_same_size(a, b)
    return complex(np.vdot(as_vector(a), as_vector(b)))


def norm(psi):
    return float(np.linalg.norm(as_vector(psi)))


def normalize(psi):
    value = norm(psi)
    if value == 0.0:
        raise error.InvalidParameter('Can not normalize the zero state')

    return WaveFunction(_frozen(psi.amplitudes / value, complex))


def _site_array(values, size, name):
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        values = np.full(size, float(values))

    if values.shape != (size,):
        raise error.SizeMismatch(
            '%s must have %d entries, got shape %s' % (
                name, size, values.shape))

    if not np.all(np.isfinite(values)):
        raise error.InvalidParameter('%s has non-finite entries' % name)

    return _frozen(values, float)


def apply_site_phase(psi, alpha):
    """Multiply both spin components at site x by exp(-i alpha(x))"""
    alpha = _site_array(alpha, len(psi.amplitudes), 'alpha')
    phases = np.exp(-1j * alpha)
    return WaveFunction(_frozen(psi.amplitudes * phases[:, None], complex))


def make_fields(lattice, phi=None, A=None):
    """Build a field configuration for one timestep.

    :param phi: scalar potential per site, zero when omitted
    :param A: vector potential per column index, zero when omitted.
        On bounded lattices entry 0 is kept but never read.
    :raises: `error.SizeMismatch`, `error.InvalidParameter`
    """
    size = lattice.size
    phi = np.zeros(size) if phi is None else phi
    A = np.zeros(size) if A is None else A
    return FieldConfig(_site_array(phi, size, 'phi'),
                       _site_array(A, size, 'A'))


def uniform_fields(lattice, A, phi=0.0):
    return make_fields(lattice, phi=phi, A=A)


def make_gauge(lattice, alpha_t, alpha_tplus1=None):
    """Gauge function over two time slices; static if the second is omitted"""
    alpha_t = _site_array(alpha_t, lattice.size, 'alpha_t')
    if alpha_tplus1 is None:
        alpha_tplus1 = alpha_t

    return GaugeFunction(
        alpha_t, _site_array(alpha_tplus1, lattice.size, 'alpha_tplus1'))


def check_fields(lattice, fields):
    for name, values in zip(fields._fields, fields):
        _site_array(values, lattice.size, name)
