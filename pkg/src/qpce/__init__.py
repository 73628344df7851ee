"""Simulation and analysis of quantum private comparison of equality with asymmetric W states."""

from .protocol import ProtocolConfig, run_protocol
from .qsim import DensityMatrix, StateVector, fidelity, helstrom, partial_trace

__version__ = "0.1.0"

__all__ = ["ProtocolConfig", "run_protocol", "StateVector", "DensityMatrix",
           "fidelity", "helstrom", "partial_trace"]
