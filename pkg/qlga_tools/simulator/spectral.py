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

"""Eigenphases of the evolution operator and their flow with the holonomy.

Eigenvalues are written lambda = exp(-i omega) with omega in (-pi, pi].
"""

import collections
import math

import numpy as np
from scipy import linalg
from scipy import optimize

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import evolution
from qlga_tools.simulator import lattice as lattice_state


Spectrum = collections.namedtuple(
    'Spectrum', ['eigenphases', 'eigenvectors', 'residuals', 'groups'])
SpectralFlowResult = collections.namedtuple(
    'SpectralFlowResult',
    ['delta_grid', 'phases', 'branches', 'flow_count', 'topology'])
Dispersion = collections.namedtuple('Dispersion', ['plus', 'minus'])


def wrap_phase(omega):
    """Map angles into (-pi, pi]"""
    return math.pi - np.mod(math.pi - np.asarray(omega, dtype=float),
                            2 * math.pi)


def degenerate_groups(phases, tolerance=constants.DEGENERACY_TOLERANCE):
    """Group sorted eigenphases that agree within `tolerance`.

    The first and last groups are merged when they meet across the
    branch cut at +/-pi.

    :returns: list of index arrays into `phases`
    """
    if not len(phases):
        return []

    groups = [[0]]
    for index in range(1, len(phases)):
        if phases[index] - phases[index - 1] <= tolerance:
            groups[-1].append(index)
        else:
            groups.append([index])

    if (len(groups) > 1
            and phases[0] + 2 * math.pi - phases[-1] <= tolerance):
        groups[0] = groups.pop() + groups[0]

    return [np.array(group) for group in groups]


def spectrum(U, unitarity_tolerance=1e-10,
             residual_tolerance=constants.RESIDUAL_TOLERANCE,
             degeneracy_tolerance=constants.DEGENERACY_TOLERANCE):
    """Full eigen-decomposition of a unitary evolution operator.

    The complex Schur form of a normal matrix is diagonal, so the Schur
    vectors are an orthonormal eigenbasis even inside degenerate
    eigenspaces.

    :returns: `Spectrum` sorted by eigenphase
    :raises: `error.SpectrumError` when the operator is not unitary or the
        eigenpair residuals exceed `residual_tolerance`
    """
    dense = U.dense if isinstance(U, evolution.EvolutionOperator) else U
    dense = np.asarray(dense, dtype=complex)

    unitarity = evolution.check_unitarity(dense)
    if unitarity > unitarity_tolerance:
        raise error.SpectrumError(
            'Operator is not unitary, residual %.3g' % unitarity)

    schur_form, schur_vectors = linalg.schur(dense, output='complex')
    phases = wrap_phase(-np.angle(np.diag(schur_form)))

    order = np.argsort(phases, kind='stable')
    phases = phases[order]
    vectors = schur_vectors[:, order]

    groups = degenerate_groups(phases, degeneracy_tolerance)
    for group in groups:
        if len(group) > 1:
            vectors[:, group], _ = np.linalg.qr(vectors[:, group])

    residuals = np.linalg.norm(
        dense @ vectors - vectors * np.exp(-1j * phases)[None, :], axis=0)
    worst = float(np.max(residuals))
    if worst > residual_tolerance:
        raise error.SpectrumError(
            'Eigenpair residual %.3g exceeds %.3g' % (
                worst, residual_tolerance))

    phases.setflags(write=False)
    vectors.setflags(write=False)
    return Spectrum(phases, vectors, residuals, groups)


def reduced_block(theta, q):
    """M(q) = exp(-iq) w_-1 + exp(iq) w_+1, the action of U on plane waves"""
    w = evolution.weights(theta)
    return np.exp(-1j * q) * w.w_minus + np.exp(1j * q) * w.w_plus


def dispersion(theta, k, A_uniform=0.0):
    """Eigenphases of the reduced block at q = k + A.

    cos(omega) = cos(theta) cos(q); `plus` is the non-negative branch.
    """
    cosine = np.clip(np.cos(theta) * np.cos(k + A_uniform), -1.0, 1.0)
    omega = float(np.arccos(cosine))
    return Dispersion(omega, -omega)


def group_velocity(theta, k, A_uniform=0.0):
    """d omega_+ / dk of the positive frequency branch"""
    q = k + A_uniform
    omega = dispersion(theta, k, A_uniform).plus
    if abs(math.sin(omega)) < 1e-12:
        return 1.0 if theta == 0 else 0.0

    return math.cos(theta) * math.sin(q) / math.sin(omega)


def branch_eigenvector(theta, q, branch=constants.BRANCH_POSITIVE):
    """Unit eigenvector of M(q) for the requested frequency branch.

    The phase is fixed so that the larger component is real and positive.
    """
    branches = dispersion(theta, q)
    omega = (branches.plus if branch == constants.BRANCH_POSITIVE
             else branches.minus)
    eigenvalue = np.exp(-1j * omega)
    cos, sin = math.cos(theta), math.sin(theta)

    candidates = [
        np.array([1j * sin * np.exp(-1j * q),
                  eigenvalue - cos * np.exp(1j * q)]),
        np.array([eigenvalue - cos * np.exp(-1j * q),
                  1j * sin * np.exp(1j * q)]),
    ]
    chi = max(candidates, key=np.linalg.norm)

    if np.linalg.norm(chi) < 1e-12:
        # M(q) is a multiple of the identity, any basis will do
        chi = np.zeros(2, dtype=complex)
        if branch == constants.BRANCH_POSITIVE:
            chi[constants.RIGHT_MOVER] = 1.0
        else:
            chi[constants.LEFT_MOVER] = 1.0
        return chi

    chi = chi / np.linalg.norm(chi)
    pivot = chi[np.argmax(np.abs(chi))]
    return chi * (abs(pivot) / pivot)


def homogeneous_phases(lattice, theta, delta):
    """Closed form eigenphase multiset of the periodic homogeneous operator"""
    size = lattice.size
    k = 2 * math.pi * np.arange(size) / size
    cosine = np.clip(math.cos(theta) * np.cos(k + delta / size), -1.0, 1.0)
    omega = np.arccos(cosine)
    return np.sort(wrap_phase(np.concatenate([omega, -omega])))


def match_phases(first, second):
    """Pair two eigenphase multisets by minimal circular distance.

    :returns: tuple of `second` reordered to line up with `first` and the
        largest circular distance of a matched pair
    """
    first = np.asarray(first)
    second = np.asarray(second)
    if first.shape != second.shape:
        raise error.SizeMismatch(
            'Can not match %d eigenphases against %d' % (
                len(first), len(second)))

    cost = np.abs(wrap_phase(first[:, None] - second[None, :]))
    rows, cols = optimize.linear_sum_assignment(cost)
    return second[cols], float(np.max(cost[rows, cols]))


def phase_distance(first, second):
    return match_phases(first, second)[1]


def dispersion_table(lattice, theta, delta, spectrum_fn=spectrum):
    """Analytic against numeric eigenphases for uniform A = delta / |L|.

    :returns: list of (n, branch, analytic, numeric) tuples, one per wave
        number k = 2 pi n / |L| and frequency branch, numeric values
        matched to the analytic ones by circular distance
    :raises: `error.NotSupportedError` on bounded lattices, which have no
        plane wave eigenstates
    """
    if not lattice_state.is_periodic(lattice):
        raise error.NotSupportedError(
            'Dispersion relation holds for periodic lattices only')

    A = delta / lattice.size
    keys = []
    analytic = []
    for n in range(lattice.size):
        branches = dispersion(theta, 2 * math.pi * n / lattice.size, A)
        keys.append((n, constants.BRANCH_POSITIVE))
        analytic.append(branches.plus)
        keys.append((n, constants.BRANCH_NEGATIVE))
        analytic.append(branches.minus)

    analytic = wrap_phase(analytic)
    fields = lattice_state.uniform_fields(lattice, A)
    numeric = spectrum_fn(
        evolution.build_evolution(lattice, theta, fields)).eigenphases
    numeric, _ = match_phases(analytic, numeric)

    return [(n, branch, float(a), float(b))
            for (n, branch), a, b in zip(keys, analytic, numeric)]


def _level_spacing(phases, groups):
    levels = np.sort([phases[group].mean() for group in groups])
    if len(levels) < 2:
        return math.inf

    gaps = np.diff(levels)
    wrap_gap = levels[0] + 2 * math.pi - levels[-1]
    return float(min(gaps.min(), wrap_gap))


def _track(phases, spacing):
    """Continue eigenphase branches across the grid.

    Each branch is extrapolated linearly from its last two points and the
    new eigenphases are assigned by minimal total circular distance.
    Branches are returned unwrapped.
    """
    branches = np.empty_like(phases)
    branches[0] = phases[0]
    max_motion = 0.0

    for index in range(1, len(phases)):
        previous = branches[index - 1]
        predicted = previous
        if index > 1:
            predicted = previous + (previous - branches[index - 2])

        cost = np.abs(wrap_phase(
            phases[index][None, :] - predicted[:, None]))
        rows, cols = optimize.linear_sum_assignment(cost)
        motion = wrap_phase(phases[index][cols] - previous[rows])
        branches[index][rows] = previous[rows] + motion
        max_motion = max(max_motion, float(np.max(np.abs(motion))))

    if max_motion >= 0.5 * spacing:
        raise error.TrackingError(
            'Eigenphases move by up to %.3g per grid step, more than half '
            'the level spacing %.3g; refine the holonomy grid' % (
                max_motion, spacing))

    return branches


def crossings(branches, level):
    """Crossings of `level` per branch, each counted with its net sign"""
    start = np.floor((branches[0] - level) / (2 * math.pi))
    end = np.floor((branches[-1] - level) / (2 * math.pi))
    return (end - start).astype(int)


def flow_count(result, level):
    """Number of eigenphase branches crossing `level` over one period.

    Every branch contributes the magnitude of its net signed crossing
    count, so the rising and the falling families both add up.

    :raises: `error.InvalidParameter` if `level` is within 1e-6 of an
        eigenphase at either end of the sweep
    """
    for endpoint in (result.phases[0], result.phases[-1]):
        distance = np.abs(wrap_phase(np.asarray(endpoint) - level))
        if np.min(distance) < constants.GENERIC_LEVEL_TOLERANCE:
            raise error.InvalidParameter(
                'Level %r is an eigenphase at the ends of the sweep' % level)

    return int(np.sum(np.abs(crossings(result.branches, level))))


def generic_levels(phases):
    """Generic levels halfway between neighbouring distinct eigenphases"""
    levels = np.unique(np.round(np.asarray(phases), 8))
    if len(levels) < 2:
        return []

    wide = np.diff(levels) > 4 * constants.GENERIC_LEVEL_TOLERANCE
    midpoints = (levels[:-1] + levels[1:]) / 2
    return [float(level) for level in midpoints[wide]]


def spectral_flow(lattice, theta, n_delta, spectrum_fn=spectrum):
    """Sweep the holonomy delta over [0, 2pi] with A(x) = delta / |L|.

    On a bounded lattice the sweep runs, but the flow is zero by gauge
    invariance; callers are expected to flag that.

    :param spectrum_fn: eigen-solver, `spectrum` or a caching equivalent
    :returns: `SpectralFlowResult`
    :raises: `error.InvalidParameter` if n_delta < 2,
        `error.TrackingError` if the grid is too coarse
    """
    if n_delta < 2:
        raise error.InvalidParameter(
            'Spectral flow needs at least two grid points')

    delta_grid = np.linspace(0.0, 2 * math.pi, n_delta)
    spectra = []
    for delta in delta_grid:
        fields = lattice_state.uniform_fields(lattice, delta / lattice.size)
        spectra.append(
            spectrum_fn(evolution.build_evolution(lattice, theta, fields)))

    phases = np.array([s.eigenphases for s in spectra])
    branches = _track(
        phases, _level_spacing(spectra[0].eigenphases, spectra[0].groups))

    result = SpectralFlowResult(delta_grid, phases, branches, {},
                                lattice.topology.kind)
    for level in generic_levels(phases[0]):
        result.flow_count[level] = flow_count(result, level)

    return result
