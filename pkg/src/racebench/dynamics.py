"""Single-track vehicle dynamics at 100 Hz.

The vehicle state is 7-dimensional (position, steering angle, speed, yaw,
yaw rate, slip angle).  Above a small switch speed the state advances with
the linear-tire single-track model; below it, with the slip-free kinematic
bicycle model whose equations do not divide by speed.  Integration is
explicit Euler at ``DT_CONTROL`` to match the simulator's 100 Hz internal
update; planning commands arrive every ``SUBSTEPS_PER_PLAN`` substeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

GRAVITY = 9.81
DT_CONTROL = 0.01
SUBSTEPS_PER_PLAN = 10

# Below this speed the slip-angle derivative (which divides by v) is
# ill-conditioned; the kinematic model takes over.
V_SWITCH = 0.5

# Stiff proportional speed-tracking gain; approximates a fast low-level
# speed controller without modeling the drivetrain.
SPEED_GAIN = 10.0


class DynamicsError(RuntimeError):
    """Non-finite state produced by an integration step (parameter blow-up)."""


@dataclass(frozen=True)
class VehicleParams:
    """Physical and actuation limits of an F1Tenth-scale car."""

    mass: float = 3.74
    lf: float = 0.15875
    lr: float = 0.17145
    h_cg: float = 0.074
    C_sf: float = 4.718
    C_sr: float = 5.4562
    mu: float = 1.0489
    I_z: float = 0.04712
    steer_max: float = 0.4189
    steer_rate_max: float = 3.2
    a_max: float = 9.51
    v_max: float = 8.0
    v_min: float = 1.0

    @property
    def wheelbase(self) -> float:
        return self.lf + self.lr

    def validate(self) -> None:
        positive = ("mass", "lf", "lr", "h_cg", "C_sf", "C_sr", "mu", "I_z",
                    "steer_max", "steer_rate_max", "a_max", "v_max")
        for name in positive:
            if getattr(self, name) <= 0:
                raise ValueError(f"vehicle parameter {name} must be positive")
        if self.v_min < 0 or self.v_min >= self.v_max:
            raise ValueError("require 0 <= v_min < v_max")


@dataclass(frozen=True)
class VehicleState:
    """7-dimensional single-track state."""

    x: float = 0.0
    y: float = 0.0
    steer_angle: float = 0.0
    speed: float = 0.0
    yaw: float = 0.0
    yaw_rate: float = 0.0
    slip_angle: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in
                   (self.x, self.y, self.steer_angle, self.speed,
                    self.yaw, self.yaw_rate, self.slip_angle))


@dataclass(frozen=True)
class ControlAction:
    """Planning-rate command pair: steering-angle and speed references."""

    steer_ref: float
    speed_ref: float


def _wrap_pi(angle: float) -> float:
    wrapped = -((-angle + math.pi) % (2.0 * math.pi) - math.pi)
    return wrapped


def actuator_inputs(state: VehicleState, action: ControlAction,
                    params: VehicleParams) -> tuple[float, float]:
    """Map (steer_ref, speed_ref) to the model's native (steer rate, accel).

    Steering rate drives the angle error to zero within one control period,
    saturated at the steering-rate limit; acceleration is a proportional
    speed-error law saturated symmetrically at ``a_max``.
    """
    steer_rate = (action.steer_ref - state.steer_angle) / DT_CONTROL
    steer_rate = max(-params.steer_rate_max, min(params.steer_rate_max, steer_rate))
    accel = SPEED_GAIN * (action.speed_ref - state.speed)
    accel = max(-params.a_max, min(params.a_max, accel))
    return steer_rate, accel


def step_kinematic(state: VehicleState, steer_rate: float, accel: float,
                   params: VehicleParams, dt: float = DT_CONTROL) -> VehicleState:
    """Slip-free kinematic bicycle update (low-speed regime)."""
    x = state.x + state.speed * math.cos(state.yaw) * dt
    y = state.y + state.speed * math.sin(state.yaw) * dt
    steer = state.steer_angle + steer_rate * dt
    steer = max(-params.steer_max, min(params.steer_max, steer))
    speed = max(0.0, state.speed + accel * dt)
    yaw_rate = state.speed * math.tan(state.steer_angle) / params.wheelbase
    yaw = _wrap_pi(state.yaw + yaw_rate * dt)
    return VehicleState(x=x, y=y, steer_angle=steer, speed=speed, yaw=yaw,
                        yaw_rate=speed * math.tan(steer) / params.wheelbase,
                        slip_angle=0.0)


def step_single_track(state: VehicleState, steer_rate: float, accel: float,
                      params: VehicleParams, dt: float = DT_CONTROL) -> VehicleState:
    """Linear-tire single-track update (normal driving regime).

    Lateral dynamics follow the standard linear single-track formulation
    with load transfer through the center-of-gravity height; valid for
    small slip angles and it is the caller's job to keep v above V_SWITCH.
    """
    p = params
    v = state.speed
    delta = state.steer_angle
    beta = state.slip_angle
    yaw_rate = state.yaw_rate
    lwb = p.wheelbase
    glr = GRAVITY * p.lr - accel * p.h_cg
    glf = GRAVITY * p.lf + accel * p.h_cg

    d_yaw_rate = (p.mu * p.mass / (p.I_z * lwb)) * (
        p.lf * p.C_sf * glr * delta
        + (p.lr * p.C_sr * glf - p.lf * p.C_sf * glr) * beta
        - (p.lf ** 2 * p.C_sf * glr + p.lr ** 2 * p.C_sr * glf) * yaw_rate / v)
    d_beta = (p.mu / (v * lwb)) * (
        p.C_sf * glr * delta - (p.C_sr * glf + p.C_sf * glr) * beta) \
        + ((p.mu / (v ** 2 * lwb)) * (p.C_sr * glf * p.lr - p.C_sf * glr * p.lf) - 1.0) * yaw_rate

    x = state.x + v * math.cos(state.yaw + beta) * dt
    y = state.y + v * math.sin(state.yaw + beta) * dt
    steer = delta + steer_rate * dt
    steer = max(-p.steer_max, min(p.steer_max, steer))
    speed = max(0.0, v + accel * dt)
    yaw = _wrap_pi(state.yaw + yaw_rate * dt)
    new = VehicleState(x=x, y=y, steer_angle=steer, speed=speed, yaw=yaw,
                       yaw_rate=yaw_rate + d_yaw_rate * dt,
                       slip_angle=beta + d_beta * dt)
    if not new.is_finite():
        raise DynamicsError(
            f"single-track step produced a non-finite state from v={v:.3f}, "
            f"delta={delta:.3f}, beta={beta:.3f}")
    return new


def step(state: VehicleState, steer_rate: float, accel: float,
         params: VehicleParams, dt: float = DT_CONTROL) -> VehicleState:
    """One dynamics substep with the regime chosen from the current speed."""
    if state.speed <= V_SWITCH:
        return step_kinematic(state, steer_rate, accel, params, dt)
    return step_single_track(state, steer_rate, accel, params, dt)


def advance(state: VehicleState, action: ControlAction, params: VehicleParams,
            n_substeps: int = SUBSTEPS_PER_PLAN) -> VehicleState:
    """Advance one planning period: n substeps at 100 Hz under a fixed command.

    Actuator inputs and the kinematic/single-track selection are
    re-evaluated at every substep.
    """
    for _ in range(n_substeps):
        steer_rate, accel = actuator_inputs(state, action, params)
        state = step(state, steer_rate, accel, params)
    return state


def clamp_action(action: ControlAction, params: VehicleParams) -> ControlAction:
    steer = max(-params.steer_max, min(params.steer_max, action.steer_ref))
    speed = max(params.v_min, min(params.v_max, action.speed_ref))
    return replace(action, steer_ref=steer, speed_ref=speed)
