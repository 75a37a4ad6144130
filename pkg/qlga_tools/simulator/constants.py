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
#

TOPOLOGY_PERIODIC = 'periodic'
TOPOLOGY_BOUNDED = 'bounded'
TOPOLOGIES = (TOPOLOGY_PERIODIC, TOPOLOGY_BOUNDED)

# spin component columns of WaveFunction.amplitudes
LEFT_MOVER = 0
RIGHT_MOVER = 1

BRANCH_POSITIVE = '+'
BRANCH_NEGATIVE = '-'

MIN_LATTICE_SIZE = 3

UNITARITY_TOLERANCE = 1e-12
NORM_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-9
DEGENERACY_TOLERANCE = 1e-8
SPECTRUM_MATCH_TOLERANCE = 1e-9
WILSON_LOOP_TOLERANCE = 1e-10
GENERIC_LEVEL_TOLERANCE = 1e-6

# Monte Carlo trials per topology when calibrating a sample count
CALIBRATION_TRIALS = 500

# samples must stay this far from the +/-pi branch cut to be averaged
WRAPAROUND_GUARD = 0.1
