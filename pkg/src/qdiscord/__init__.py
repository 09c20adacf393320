"""Quantum discord, entanglement of formation and steering ellipsoids for two qubits.

The routing entry point is ``qdiscord.discord.discord``; it is not re-exported
here because the name would shadow the submodule.
"""

from .discord import (
    CorrelationReport,
    Ensemble,
    Povm,
    PovmElement,
    average_entropy,
    discord_bounds,
    discord_exact_rank2,
    measure,
    minimize_povm3,
    minimize_von_neumann,
    mutual_information,
)
from .entanglement import eof_from_concurrence, wootters_concurrence
from .states import TwoQubitState, validate

__version__ = "0.1.0"
