"""Deterministic longitudinal tail-sitter simulator with learned force estimates.

Pipeline: aerodynamic oracle -> labeled dataset -> backprop-trained MLP
-> scripted hover/transition/cruise mission logging true vs. estimated
specific forces.
"""

from ._backend import available_backends, backend_name
from .aero import (
    AeroParams,
    CoefficientTable,
    ForcePair,
    angle_of_attack,
    airspeed,
    coefficients,
    flat_plate_table,
    lift_drag,
    specific_body_forces,
)
from .dynamics import (
    AttitudeGains,
    BodyState,
    ControlInput,
    attitude_torque,
    derivatives,
    step_rk4,
)
from .mlp import (
    DEFAULT_TOPOLOGY,
    Network,
    Topology,
    forward,
    init_network,
    load_weights,
    param_count,
    save_weights,
)

__version__ = "0.1.0"

__all__ = [
    "AeroParams",
    "AttitudeGains",
    "BodyState",
    "CoefficientTable",
    "ControlInput",
    "DEFAULT_TOPOLOGY",
    "ForcePair",
    "Network",
    "Topology",
    "angle_of_attack",
    "airspeed",
    "attitude_torque",
    "available_backends",
    "backend_name",
    "coefficients",
    "derivatives",
    "flat_plate_table",
    "forward",
    "init_network",
    "lift_drag",
    "load_weights",
    "param_count",
    "save_weights",
    "specific_body_forces",
    "step_rk4",
    "__version__",
]
