"""Exception hierarchy shared by all bellsim modules.

Every error raised by this package derives from :class:`BellSimError` so
callers can catch one type at the boundary.  Parse errors for the circuit
language live in :mod:`bellsim.dsl` (they carry source locations) but they
subclass :class:`BellSimError` as well.
"""


class BellSimError(Exception):
    """Base class for all errors raised by bellsim."""


class NormalizationError(BellSimError):
    """A state (or state factor) is not normalized within tolerance."""


class DimensionError(BellSimError):
    """An array has the wrong shape or two objects have mismatched sizes."""


class QubitIndexError(BellSimError):
    """A qubit index is out of range or repeated where it must be distinct."""


class ProjectionError(BellSimError):
    """Projection onto a measurement outcome of (near) zero probability."""


class ObservableError(BellSimError):
    """An observable matrix is not Hermitian within tolerance."""


class SizeError(BellSimError):
    """A qubit count exceeds the supported limit for the requested engine."""


class NonCliffordGate(BellSimError):
    """A non-Clifford operation was requested from the stabilizer engine."""


class ModelError(BellSimError):
    """A local hidden variable model violates its own invariants."""


class InputError(BellSimError):
    """A caller-supplied value is outside the documented domain."""


class ConfigError(BellSimError):
    """An invalid configuration value (resolution, grid size, engine name)."""


class IoError(BellSimError):
    """A file could not be read or written."""
