"""bellsim: small-n quantum simulation and CHSH analysis toolkit.

Two execution engines (dense statevector, stabilizer tableau), a CHSH
S-factor analyzer with scan and maximization, local hidden variable
model fitting over the correlation polytope, protocol drivers
(teleportation, superdense coding, BB84), and a line-oriented circuit
language with a Clifford classifier.
"""

from . import chsh, dsl, lhv, protocols, stabilizer, statevector
from .errors import (
    BellSimError,
    ConfigError,
    DimensionError,
    InputError,
    IoError,
    ModelError,
    NonCliffordGate,
    NormalizationError,
    ObservableError,
    ProjectionError,
    QubitIndexError,
    SizeError,
)

__version__ = "0.1.0"

__all__ = [
    "BellSimError",
    "ConfigError",
    "DimensionError",
    "InputError",
    "IoError",
    "ModelError",
    "NonCliffordGate",
    "NormalizationError",
    "ObservableError",
    "ProjectionError",
    "QubitIndexError",
    "SizeError",
    "__version__",
    "chsh",
    "dsl",
    "lhv",
    "protocols",
    "stabilizer",
    "statevector",
]
