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


class QlgaError(Exception):
    """Create generic qlga-tools exception object

    The `code` attribute doubles as the process exit status reported by
    the command line front end.
    """

    def __init__(self, msg='Unknown error', code=1):
        super().__init__(msg)
        self.code = code


class InvalidParameter(QlgaError):
    """Argument outside of its documented domain."""

    def __init__(self, msg, code=2):
        super().__init__(msg, code)


class SizeMismatch(InvalidParameter):
    """Array sized for a different lattice."""


class NotSupportedError(QlgaError):
    """Operation is not defined for the lattice topology"""

    def __init__(self, msg, code=2):
        super().__init__(msg, code)


class MarginError(InvalidParameter):
    """Wave packet support reaches too close to a boundary."""

    def __init__(self, msg, code=3):
        super().__init__(msg, code)


class WraparoundError(InvalidParameter):
    """Frequency samples straddle the branch cut at +/-pi."""


class ToleranceError(QlgaError):
    """A numerical invariant failed at runtime."""

    def __init__(self, msg, code=4):
        super().__init__(msg, code)


class SpectrumError(ToleranceError):
    """Eigen-decomposition does not meet the residual contract."""


class TrackingError(ToleranceError):
    """Eigenphase branches can not be continued on the given grid."""
