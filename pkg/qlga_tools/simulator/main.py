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

import argparse
import contextlib
import csv
import json
import logging
import math
import re
import sys

import flask

from qlga_tools import error
from qlga_tools.simulator import constants
from qlga_tools.simulator import experiment
from qlga_tools.simulator import lattice as lattice_state
from qlga_tools.simulator import memoize
from qlga_tools.simulator.resources import experiments as expdriver
from qlga_tools.simulator.resources import spectra as spcdriver
from qlga_tools.simulator import spectral


FORMAT_CSV = 'csv'
FORMAT_JSON = 'json'

_PI_MULTIPLE = re.compile(
    r'([+-]?[0-9]*\.?[0-9]*)\*?pi(?:/([0-9]*\.?[0-9]+))?')


class Application(flask.Flask):
    """Holds configuration, logging and drivers; serves no routes"""

    def __init__(self):
        super().__init__(__name__)

    def configure(self, config_file=None, extra_config=None):
        if config_file:
            self.config.from_pyfile(config_file)
        if extra_config:
            self.config.update(extra_config)

        # drivers read the configuration once, rebuild them on change
        self.__dict__.pop('_cache', None)

    @property
    @memoize.memoize()
    def spectra(self):
        result = spcdriver.SpectrumDriver(self.config, self.logger)
        self.logger.debug('Initialized spectrum cache backed by %s',
                          'sqlite' if self.config.get('QLGA_TOOLS_STATE_DIR')
                          else 'memory')
        return result

    @property
    @memoize.memoize()
    def experiments(self):
        return expdriver.ExperimentDriver(self.config, self.logger,
                                          self.spectra)


app = Application()


def angle(value):
    """Parse radians, accepting exact multiples of pi such as "pi/6"

    :raises: `argparse.ArgumentTypeError` on anything else
    """
    text = value.strip().lower().replace(' ', '')
    match = _PI_MULTIPLE.fullmatch(text)
    if match:
        factor, divisor = match.groups()
        if factor in ('', '+'):
            factor = 1.0
        elif factor == '-':
            factor = -1.0
        else:
            factor = float(factor)

        return factor * math.pi / float(divisor or 1)

    try:
        return float(text)

    except ValueError:
        raise argparse.ArgumentTypeError('Invalid angle %r' % value)


def size_list(value):
    try:
        return [int(item) for item in value.split(',') if item]

    except ValueError:
        raise argparse.ArgumentTypeError('Invalid size list %r' % value)


def _format_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'

    if isinstance(value, float):
        return '%.17g' % value

    return str(value)


def _plain(value):
    """Convert numpy scalars and arrays into JSON serializable values"""
    if isinstance(value, dict):
        return {str(key): _plain(item) for key, item in value.items()}

    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]

    if hasattr(value, 'tolist'):
        return _plain(value.tolist())

    return value


@contextlib.contextmanager
def _output(path):
    if not path:
        yield sys.stdout
        return

    with open(path, 'w', newline='') as stream:
        yield stream


def write_table(args, header, rows, document=None):
    """Write rows as CSV, or `document` (rows by default) as JSON"""
    with _output(args.out) as stream:
        if args.format == FORMAT_JSON:
            if document is None:
                document = [dict(zip(header, row)) for row in rows]

            stream.write(json.dumps(_plain(document), indent=2) + '\n')
            return

        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_value(_plain(item)) for item in row])


def _topology(args):
    return lattice_state.topology_from_name(
        args.topology, getattr(args, 'zeta_left', 0.0),
        getattr(args, 'zeta_right', 0.0))


def _lattice(args):
    return lattice_state.make_lattice(args.size, _topology(args))


def cmd_spectral_flow(args):
    lattice = _lattice(args)
    result = app.experiments.spectral_flow(
        lattice, lattice_state.mass_angle(args.theta), args.n_delta)

    omegas = spectral.wrap_phase(result.branches)
    rows = [(float(delta), index, float(omega))
            for delta, branch in zip(result.delta_grid, omegas)
            for index, omega in enumerate(branch)]

    document = {
        'topology': result.topology,
        'delta_grid': result.delta_grid,
        'phases': result.phases,
        'branches': result.branches,
        'flow_count': [{'level': level, 'count': count}
                       for level, count in sorted(result.flow_count.items())],
    }

    write_table(args, ('delta', 'branch_index', 'omega'), rows, document)

    if not lattice_state.is_periodic(lattice):
        print('flow = %d on a lattice with boundaries' % max(
            result.flow_count.values(), default=0), file=sys.stderr)

    return 0


def cmd_detect(args):
    config = experiment.make_detection_config(
        args.size, args.theta, args.vector_potential, k0=args.k0, x0=args.x0,
        sigma=args.sigma, n_samples=args.n_samples, epsilon=args.epsilon,
        seed=args.seed)

    report = app.experiments.detect(config, _topology(args))
    write_table(args, report._fields, [report], report._asdict())
    return 0


def cmd_classical(args):
    lattice = _lattice(args)
    runs = app.experiments.classical(
        lattice, trials=args.trials, seed=args.seed, start=args.start,
        direction=args.direction, exhaustive=args.exhaustive)

    mean_steps = math.fsum(run.steps_to_detect for run in runs) / len(runs)
    document = {
        'cutoff': 2 * lattice.size,
        'mean_steps': mean_steps,
        'runs': [run._asdict() for run in runs],
    }

    write_table(args, experiment.ClassicalRun._fields + ('mean_steps',),
                [run + (mean_steps,) for run in runs], document)
    return 0


def cmd_gauge_check(args):
    checks = app.experiments.gauge_check(
        _lattice(args), lattice_state.mass_angle(args.theta), args.seed,
        inject_fault=args.inject_fault)

    write_table(args, ('check', 'residual', 'tolerance', 'passed'), checks,
                [check._asdict() for check in checks])

    failed = [check.name for check in checks if not check.passed]
    if failed:
        raise error.ToleranceError(
            'Gauge checks failed: %s' % ', '.join(failed))

    return 0


def cmd_scaling(args):
    study = app.experiments.scaling(
        args.sizes, args.trials, args.seed, theta=args.theta,
        A_uniform=args.vector_potential, epsilon=args.epsilon, k0=args.k0)

    header = ('size', 'quantum_n_samples', 'quantum_error_rate',
              'periodic_error_rate', 'bounded_error_rate', 'frequency_std',
              'classical_mean_steps')
    rows = [(row.size, row.n_samples,
             max(row.periodic_error, row.bounded_error),
             row.periodic_error, row.bounded_error, row.frequency_std,
             row.classical_mean_steps) for row in study.rows]

    document = {
        'quantum_n_samples': study.n_samples,
        'classical_slope': study.classical_slope,
        'classical_intercept': study.classical_intercept,
        'classical_r_squared': study.classical_r_squared,
        'rows': [dict(zip(header, row)) for row in rows],
        # simulation cost, not a measurement count
        'simulation_wall_time_s': {
            row.size: row.wall_time for row in study.rows},
    }

    write_table(args, header, rows, document)
    return 0


def cmd_dispersion(args):
    rows = app.experiments.dispersion(
        _lattice(args), lattice_state.mass_angle(args.theta), args.delta)

    write_table(args, ('delta', 'n', 'branch', 'analytic', 'numeric'), rows)
    return 0


def _add_lattice_args(parser, size, topology=constants.TOPOLOGY_PERIODIC):
    parser.add_argument('--size', type=int, default=size,
                        help='Number of lattice sites. Default is %d.' % size)
    parser.add_argument('--topology', choices=constants.TOPOLOGIES,
                        default=topology,
                        help='Lattice topology. Default is %s.' % topology)
    parser.add_argument('--zeta-left', type=angle, default=0.0,
                        help='Left boundary phase of a bounded lattice.')
    parser.add_argument('--zeta-right', type=angle, default=0.0,
                        help='Right boundary phase of a bounded lattice.')


def _add_theta_arg(parser):
    parser.add_argument('--theta', type=angle, default=math.pi / 6,
                        help='Mass angle in radians, "pi/6" style values '
                             'are accepted. Default is pi/6.')


def _add_detection_args(parser):
    parser.add_argument('-A', '--vector-potential', type=float, default=0.2,
                        help='Uniform external vector potential. '
                             'Default is 0.2.')
    parser.add_argument('--k0', type=angle, default=math.pi / 2,
                        help='Packet carrier wave number. Default is pi/2.')
    parser.add_argument('--epsilon', type=float, default=0.05,
                        help='Target error probability. Default is 0.05.')


def parse_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config',
                        type=str,
                        help='Config file path.')
    common.add_argument('--debug', action='store_true',
                        help='Enables debug logging.')
    common.add_argument('--format', choices=(FORMAT_CSV, FORMAT_JSON),
                        default=FORMAT_CSV,
                        help='Output format. Default is csv.')
    common.add_argument('--out', type=str,
                        help='Output file. Default is standard output.')

    parser = argparse.ArgumentParser('qlga-tools')
    subparsers = parser.add_subparsers(dest='command', required=True)

    flow = subparsers.add_parser(
        'spectral-flow', parents=[common],
        help='Eigenphases of U against the holonomy delta.')
    _add_lattice_args(flow, 16)
    _add_theta_arg(flow)
    flow.add_argument('--n-delta', type=int, default=64,
                      help='Points of the holonomy grid. Default is 64.')
    flow.set_defaults(func=cmd_spectral_flow)

    detect = subparsers.add_parser(
        'detect', parents=[common],
        help='Decide the lattice topology by frequency measurement.')
    _add_lattice_args(detect, 64)
    _add_theta_arg(detect)
    _add_detection_args(detect)
    detect.add_argument('--x0', type=int,
                        help='Packet center. Default is size // 2.')
    detect.add_argument('--sigma', type=float,
                        help='Packet width, "inf" for a plane wave, which '
                             'only fits a periodic lattice. Default is '
                             'size / 8.')
    detect.add_argument('--n-samples', type=int,
                        help='Frequency measurements. By default the '
                             'count is calibrated by simulation to reach '
                             '--epsilon.')
    detect.add_argument('--seed', type=int, required=True,
                        help='Sampling seed.')
    detect.set_defaults(func=cmd_detect)

    classical = subparsers.add_parser(
        'classical', parents=[common],
        help='Deterministic single particle baseline.')
    _add_lattice_args(classical, 16, topology=constants.TOPOLOGY_BOUNDED)
    classical.add_argument('--trials', type=int, default=1,
                           help='Number of runs. Default is 1.')
    classical.add_argument('--seed', type=int,
                           help='Seed of random starts and directions.')
    classical.add_argument('--start', type=int,
                           help='Pin the start site of every run.')
    classical.add_argument('--direction', type=int, choices=(-1, 1),
                           help='Pin the direction of every run.')
    classical.add_argument('--exhaustive', action='store_true',
                           help='Run every start and direction once.')
    classical.set_defaults(func=cmd_classical)

    check = subparsers.add_parser(
        'gauge-check', parents=[common],
        help='Verify gauge covariance on randomized fields.')
    _add_lattice_args(check, 16)
    _add_theta_arg(check)
    check.add_argument('--seed', type=int, required=True,
                       help='Seed of the random fields and gauges.')
    check.add_argument('--inject-fault', action='store_true',
                       help=argparse.SUPPRESS)
    check.set_defaults(func=cmd_gauge_check)

    scaling = subparsers.add_parser(
        'scaling', parents=[common],
        help='Quantum against classical cost over lattice sizes.')
    scaling.add_argument('--sizes', type=size_list,
                         default=[32, 64, 128, 256],
                         help='Comma separated lattice sizes. '
                              'Default is 32,64,128,256.')
    scaling.add_argument('--trials', type=int, default=500,
                         help='Trials per topology. Default is 500.')
    scaling.add_argument('--seed', type=int, required=True,
                         help='Sampling seed.')
    _add_theta_arg(scaling)
    _add_detection_args(scaling)
    scaling.set_defaults(func=cmd_scaling)

    dispersion = subparsers.add_parser(
        'dispersion', parents=[common],
        help='Analytic against numeric eigenphases.')
    _add_lattice_args(dispersion, 16)
    _add_theta_arg(dispersion)
    dispersion.add_argument('--delta', type=angle, action='append',
                            help='Holonomy, may be repeated. Default is 0.')
    dispersion.set_defaults(func=cmd_dispersion)

    args = parser.parse_args(argv)
    if args.command == 'dispersion' and not args.delta:
        args.delta = [0.0]

    return args


def main(argv=None):

    args = parse_args(argv)

    app.debug = args.debug
    app.logger.setLevel(logging.DEBUG if args.debug else logging.INFO)

    try:
        app.configure(config_file=args.config)
        return args.func(args)

    except error.QlgaError as exc:
        app.logger.debug('Command failed with %s: %s',
                         exc.__class__.__name__, exc)
        print('qlga-tools: %s' % exc, file=sys.stderr)
        return exc.code

    except Exception:
        app.logger.exception('Unexpected failure')
        return 1


if __name__ == '__main__':
    sys.exit(main())
