"""Clock-mesh timing analysis toolkit.

Generates synthetic clock-mesh designs, labels them with an RC transient
oracle, converts them to feature-annotated graphs, and trains a
graph-attention model that predicts per-sink delay and slew.
"""

__version__ = "0.1.0"

SCHEMA_VERSION = 1

UNITS = {
    "length": "um",
    "area": "um^2",
    "resistance": "ohm",
    "capacitance": "fF",
    "time": "ps",
}


class ClockMeshError(Exception):
    """Base class for toolkit errors."""


class DataError(ClockMeshError):
    """Malformed or inconsistent input data (CLI exit code 2)."""


class NumericalError(ClockMeshError):
    """Numerical failure: divergence, non-settling net, NaN loss (CLI exit code 3)."""
