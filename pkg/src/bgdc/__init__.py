"""Berends-Giele currents, colour-kinematics duality and KLT relations in exact arithmetic."""

from .scalars import EXACT, FLOAT, GaussianRational
from .kinematics import KinConfig, Particle, random_kinematics, k3_fixture, validate
from .colour import StructureConstants, builtin_su2, random_algebra
from .currents import CurrentTable, current, double_current, mc_residual
from .amplitudes import partial_amplitude, full_amplitude, tensor_amplitude, tensor_amplitudes, momentum_kernel

__version__ = "0.1.0"

__all__ = [
    "EXACT",
    "FLOAT",
    "GaussianRational",
    "KinConfig",
    "Particle",
    "random_kinematics",
    "k3_fixture",
    "validate",
    "StructureConstants",
    "builtin_su2",
    "random_algebra",
    "CurrentTable",
    "current",
    "double_current",
    "mc_residual",
    "partial_amplitude",
    "full_amplitude",
    "tensor_amplitude",
    "tensor_amplitudes",
    "momentum_kernel",
]
