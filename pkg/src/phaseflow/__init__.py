"""Phase-space description of negative probability flow for a free Gaussian
wave packet, with a classical Monte Carlo counterpart."""

from .errors import BoundaryCase, ConfigurationError, OutOfDomain, UndefinedAngle, UndefinedArrival
from .flow import FlowRates, FlowScenario, flow_rates, probability_beyond, scan_flow
from .packet import PacketParams
from .wigner import DimensionlessPacket, PhasePoint, omega, rescale, to_physical

__version__ = "0.1.0"

__all__ = [
    "BoundaryCase",
    "ConfigurationError",
    "DimensionlessPacket",
    "FlowRates",
    "FlowScenario",
    "OutOfDomain",
    "PacketParams",
    "PhasePoint",
    "UndefinedAngle",
    "UndefinedArrival",
    "flow_rates",
    "omega",
    "probability_beyond",
    "rescale",
    "scan_flow",
    "to_physical",
]
