"""Discrete Zak transform toolkit for OTFS modulation."""

from .channel import ChannelSpec, CyclicPrefixError, FrameConfig, Scatterer, TdlParams, tdl_e_scenario
from .modem import dd_response, dd_spread_map, receive, transmit
from .pulses import PulseSpec
from .zak import DimensionError, GridShape, dzt, idzt

__all__ = [
    "ChannelSpec",
    "CyclicPrefixError",
    "DimensionError",
    "FrameConfig",
    "GridShape",
    "PulseSpec",
    "Scatterer",
    "TdlParams",
    "dd_response",
    "dd_spread_map",
    "dzt",
    "idzt",
    "receive",
    "tdl_e_scenario",
    "transmit",
]

__version__ = "0.1.0"
