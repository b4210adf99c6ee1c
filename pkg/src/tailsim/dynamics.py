"""Longitudinal rigid-body dynamics and attitude stabilization.

State is (u, w, theta, q): body velocities, pitch angle, pitch rate.
Translational and rotational subsystems:

    udot = (T - D*cos(a) + L*sin(a)) / m - g*sin(theta) - q*w
    wdot = (-D*sin(a) - L*cos(a)) / m + g*cos(theta) + q*u
    thetadot = q
    qdot = tau / J

Thrust T acts along body x; tau is the pitch torque.  Integration is
classical fixed-step RK4 with the input held constant over the step.
A PD law on pitch stands in for the stabilized attitude loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .aero import AeroParams, CoefficientTable, angle_of_attack, airspeed

DEFAULT_DT = 0.004  # s, 250 Hz autopilot-rate stepping


@dataclass(frozen=True)
class BodyState:
    """Longitudinal body state: u, w in m/s, theta in (-pi, pi], q in rad/s."""

    u: float
    w: float
    theta: float
    q: float

    def __post_init__(self) -> None:
        for name in ("u", "w", "theta", "q"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def is_finite(self) -> bool:
        return (
            math.isfinite(self.u)
            and math.isfinite(self.w)
            and math.isfinite(self.theta)
            and math.isfinite(self.q)
        )


@dataclass(frozen=True)
class ControlInput:
    """Thrust (N, >= 0) and pitch torque (N m)."""

    thrust: float
    pitch_torque: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.thrust) and math.isfinite(self.pitch_torque)):
            raise ValueError("control input must be finite")
        if self.thrust < 0.0:
            raise ValueError(f"thrust must be non-negative, got {self.thrust!r}")


@dataclass(frozen=True)
class AttitudeGains:
    """PD pitch loop gains with torque saturation.

    Defaults hold the default airframe to within 0.01 rad of the
    setpoint in under 5 s from any initial pitch.
    """

    kp: float = 0.4    # N m / rad
    kd: float = 0.15   # N m s / rad
    tau_max: float = 0.5  # N m

    def __post_init__(self) -> None:
        if self.kp <= 0.0 or self.kd <= 0.0 or self.tau_max <= 0.0:
            raise ValueError("gains and saturation must be positive")


def wrap_angle(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.remainder(angle, 2.0 * math.pi)
    if a <= -math.pi:
        a = math.pi
    return a


def derivatives(
    state: BodyState,
    control: ControlInput,
    params: AeroParams,
    table: CoefficientTable,
) -> tuple[float, float, float, float]:
    """State rate (udot, wdot, thetadot, qdot)."""
    return _rates(
        state.u, state.w, state.theta, state.q,
        control.thrust, control.pitch_torque, params, table,
    )


def _rates(u, w, theta, q, thrust, torque, params, table):
    alpha = angle_of_attack(u, w)
    v = airspeed(u, w)
    cl, cd = table.evaluate(alpha)
    pressure_area = 0.5 * v * v * params.air_density * params.wing_area
    lift = cl * pressure_area
    drag = cd * pressure_area
    cos_a = math.cos(alpha)
    sin_a = math.sin(alpha)
    m = params.mass
    g = params.gravity
    udot = (thrust - drag * cos_a + lift * sin_a) / m - g * math.sin(theta) - q * w
    wdot = (-drag * sin_a - lift * cos_a) / m + g * math.cos(theta) + q * u
    return udot, wdot, q, torque / params.inertia_y


def step_rk4(
    state: BodyState,
    control: ControlInput,
    params: AeroParams,
    table: CoefficientTable,
    dt: float,
) -> BodyState:
    """One classical RK4 step of length ``dt`` with the input held constant.

    The returned pitch angle is wrapped to (-pi, pi]; intermediate
    stages use the unwrapped angle (the dynamics are periodic in it).
    """
    if not (math.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be positive and finite, got {dt!r}")
    u, w, th, q = state.u, state.w, state.theta, state.q
    T, tau = control.thrust, control.pitch_torque

    k1 = _rates(u, w, th, q, T, tau, params, table)
    h2 = 0.5 * dt
    k2 = _rates(u + h2 * k1[0], w + h2 * k1[1], th + h2 * k1[2], q + h2 * k1[3],
                T, tau, params, table)
    k3 = _rates(u + h2 * k2[0], w + h2 * k2[1], th + h2 * k2[2], q + h2 * k2[3],
                T, tau, params, table)
    k4 = _rates(u + dt * k3[0], w + dt * k3[1], th + dt * k3[2], q + dt * k3[3],
                T, tau, params, table)

    sixth = dt / 6.0
    return BodyState(
        u + sixth * (k1[0] + 2.0 * (k2[0] + k3[0]) + k4[0]),
        w + sixth * (k1[1] + 2.0 * (k2[1] + k3[1]) + k4[1]),
        wrap_angle(th + sixth * (k1[2] + 2.0 * (k2[2] + k3[2]) + k4[2])),
        q + sixth * (k1[3] + 2.0 * (k2[3] + k3[3]) + k4[3]),
    )


def attitude_torque(
    theta: float, q: float, theta_ref: float, gains: AttitudeGains
) -> float:
    """PD pitch torque, saturated to +-tau_max; angle error wrapped to (-pi, pi]."""
    error = wrap_angle(theta_ref - theta)
    tau = gains.kp * error - gains.kd * q
    if tau > gains.tau_max:
        return gains.tau_max
    if tau < -gains.tau_max:
        return -gains.tau_max
    return tau
