"""spinbus: simulator and compiler toolkit for a dual-lattice architecture
where stationary atomic spins store qubits and a movable header atom of a
second species carries quantum state between them.
"""

from . import gates, interactions, operators, scheduler, transport, traps, units
from .errors import (
    CircuitParseError,
    ConfigError,
    DomainError,
    NumericalError,
    PlanningError,
    SpinBusError,
)

__version__ = "0.1.0"

__all__ = [
    "units",
    "operators",
    "interactions",
    "traps",
    "gates",
    "transport",
    "scheduler",
    "SpinBusError",
    "DomainError",
    "NumericalError",
    "PlanningError",
    "CircuitParseError",
    "ConfigError",
    "__version__",
]
