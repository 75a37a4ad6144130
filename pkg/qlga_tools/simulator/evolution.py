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

"""Global evolution operator of the one particle lattice gas.

Block (r, c) of the 2|L| x 2|L| operator maps the amplitude pair at site c
to site r. The scalar potential of a block is taken from its column, the
vector potential from the link between x-1 and x:

    U[x-1, x] = exp(-i phi(x)   + i A(x)) w_+1
    U[x, x-1] = exp(-i phi(x-1) - i A(x)) w_-1

On a bounded lattice x runs over 1..|L|-1, the blocks U[0, 1] and
U[|L|-1, |L|-2] are replaced by the reflecting boundary blocks, and the two
components the boundary rule never populates (left mover at site 0, right
mover at site |L|-1) are parked on the diagonal with their site phase.
"""

import collections

import numpy as np

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import lattice as lattice_state


Weights = collections.namedtuple('Weights', ['w_minus', 'w_plus'])
EvolutionOperator = collections.namedtuple(
    'EvolutionOperator', ['dense', 'lattice', 'theta', 'fields'])


def weights(theta):
    """Return the parity invariant homogeneous weights for mass angle theta"""
    cos, sin = np.cos(theta), np.sin(theta)
    return Weights(
        w_minus=np.array([[0, 1j * sin], [0, cos]], dtype=complex),
        w_plus=np.array([[cos, 0], [1j * sin, 0]], dtype=complex))


def boundary_block_left(zeta):
    return np.array([[0, 0], [1j * np.exp(1j * zeta), 0]], dtype=complex)


def boundary_block_right(zeta):
    return np.array([[0, 1j * np.exp(1j * zeta)], [0, 0]], dtype=complex)


def parity_matrix():
    """Swap of the two spin components"""
    return np.array([[0, 1], [1, 0]], dtype=complex)


def links(lattice):
    """Link indices x whose blocks (x-1, x) and (x, x-1) enter U"""
    if lattice_state.is_periodic(lattice):
        return range(lattice.size)

    return range(1, lattice.size)


def link_blocks(lattice, theta, x):
    """Base blocks of link x, before potential phases.

    :returns: pair of 2x2 matrices for positions (x-1, x) and (x, x-1)
    """
    w = weights(theta)
    upper, lower = w.w_plus, w.w_minus

    if not lattice_state.is_periodic(lattice):
        if x == 1:
            upper = boundary_block_left(lattice.topology.zeta_left)

        if x == lattice.size - 1:
            lower = boundary_block_right(lattice.topology.zeta_right)

    return upper, lower


def link_phases(fields, x):
    """Potential phases of link x for positions (x-1, x) and (x, x-1)"""
    phi, A = fields
    upper = np.exp(-1j * phi[x] + 1j * A[x])
    lower = np.exp(-1j * phi[x - 1] - 1j * A[x])
    return upper, lower


def parked_entries(lattice, fields):
    """Diagonal entries of the components a bounded lattice never fills.

    :returns: list of (flat index, value) pairs, empty when periodic
    """
    if lattice_state.is_periodic(lattice):
        return []

    last = lattice.size - 1
    return [
        (2 * 0 + constants.LEFT_MOVER, np.exp(-1j * fields.phi[0])),
        (2 * last + constants.RIGHT_MOVER, np.exp(-1j * fields.phi[last])),
    ]


def block(matrix, row, col):
    if isinstance(matrix, EvolutionOperator):
        matrix = matrix.dense

    return matrix[2 * row:2 * row + 2, 2 * col:2 * col + 2]


def build_evolution(lattice, theta, fields):
    """Assemble the dense evolution operator.

    :param lattice: `lattice.Lattice`
    :param theta: mass angle in radians
    :param fields: `lattice.FieldConfig` sized for the lattice
    :returns: `EvolutionOperator`
    :raises: `error.SizeMismatch` or `error.InvalidParameter` on bad fields
    """
    lattice_state.check_fields(lattice, fields)
    size = lattice.size
    dense = np.zeros((2 * size, 2 * size), dtype=complex)

    for x in links(lattice):
        upper, lower = link_blocks(lattice, theta, x)
        upper_phase, lower_phase = link_phases(fields, x)
        left = (x - 1) % size
        dense[2 * left:2 * left + 2, 2 * x:2 * x + 2] = upper_phase * upper
        dense[2 * x:2 * x + 2, 2 * left:2 * left + 2] = lower_phase * lower

    for index, value in parked_entries(lattice, fields):
        dense[index, index] = value

    dense.setflags(write=False)
    return EvolutionOperator(dense, lattice, float(theta), fields)


def _check_state(U, psi):
    if len(psi.amplitudes) != U.lattice.size:
        raise error.SizeMismatch(
            'Wave function has %d sites, operator acts on %d' % (
                len(psi.amplitudes), U.lattice.size))


def step(U, psi):
    """Advance one timestep without touching the dense matrix.

    psi(t+1, x) = U[x, x-1] psi(t, x-1) + U[x, x+1] psi(t, x+1)
    """
    _check_state(U, psi)
    lattice, fields = U.lattice, U.fields
    amps = psi.amplitudes
    w = weights(U.theta)

    upper_phase = np.exp(-1j * fields.phi + 1j * fields.A)
    lower_phase = np.exp(-1j * np.roll(fields.phi, 1) - 1j * fields.A)

    # row x of from_right is the amplitude site x sends to x-1, row x of
    # from_left is what site x-1 sends to x
    from_right = (amps @ w.w_plus.T) * upper_phase[:, None]
    from_left = (np.roll(amps, 1, axis=0) @ w.w_minus.T) * lower_phase[:, None]

    if lattice_state.is_periodic(lattice):
        result = np.roll(from_right, -1, axis=0) + from_left

    else:
        last = lattice.size - 1
        from_right[1] = upper_phase[1] * (
            boundary_block_left(lattice.topology.zeta_left) @ amps[1])
        from_left[last] = lower_phase[last] * (
            boundary_block_right(lattice.topology.zeta_right) @ amps[last - 1])

        result = np.zeros_like(amps)
        result[:-1] += from_right[1:]
        result[1:] += from_left[1:]

        flat = result.reshape(-1)
        source = amps.reshape(-1)
        for index, value in parked_entries(lattice, fields):
            flat[index] += value * source[index]

    return lattice_state.wavefunction(result)


def dense_step(U, psi):
    _check_state(U, psi)
    return lattice_state.from_vector(U.dense @ lattice_state.as_vector(psi))


def evolve(U, psi, steps):
    if steps < 0:
        raise error.InvalidParameter('Number of steps must be non-negative')

    for _ in range(steps):
        psi = step(U, psi)

    return psi


def evolve_history(lattice, theta, field_history, psi):
    """Evolve under time-dependent fields, one `FieldConfig` per timestep"""
    for fields in field_history:
        psi = step(build_evolution(lattice, theta, fields), psi)

    return psi


def check_unitarity(U):
    """Return max |U^dagger U - 1| over all entries"""
    dense = U.dense if isinstance(U, EvolutionOperator) else np.asarray(U)
    residual = dense.conj().T @ dense - np.eye(len(dense))
    return float(np.max(np.abs(residual)))
