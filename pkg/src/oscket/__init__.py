"""Discrete-time oscillating-eigenket hidden-variable model.

Spin kinematics, EPRB probability laws, Bell/CHSH checks, the cat
shooting process and the bounded-translation position model.
"""

__version__ = "0.1.0"

from oscket.errors import DomainError, InsufficientDataError, ModelError, NumericalError

__all__ = [
    "__version__",
    "DomainError",
    "InsufficientDataError",
    "ModelError",
    "NumericalError",
]
