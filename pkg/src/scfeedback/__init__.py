"""Superimposed-coding CSI feedback with 1-bit compressed sensing.

A link-level simulator for feeding sparse downlink channel vectors back to a
massive-MIMO base station as sign measurements spread and superimposed on the
user's uplink data, with support-aided BIHT reconstruction at the receiver.
"""

from .errors import (
    ContractViolationError,
    InvalidConfigurationError,
    InvalidParameterError,
)

__version__ = "0.1.0"

__all__ = [
    "ContractViolationError",
    "InvalidConfigurationError",
    "InvalidParameterError",
    "__version__",
]
