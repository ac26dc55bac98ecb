"""Classical optimal-trajectory computation.

The racing line is the lateral-offset path that minimizes summed squared
curvature inside the track bounds (a linearized quadratic program,
re-linearized a few times), combined with a minimum-time speed profile:
curvature speed caps tightened by forward/backward passes that respect the
friction circle's coupling of lateral and longitudinal acceleration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.interpolate import splev, splprep
from scipy.optimize import lsq_linear

from .dynamics import GRAVITY, VehicleParams
from .track import Centerline

RACELINE_CSV_HEADER = "s_m,x_m,y_m,psi_rad,kappa_radpm,vx_mps"


class RacelineError(ValueError):
    """Raceline optimization failure (infeasible bounds, bad inputs)."""


@dataclass(frozen=True)
class RacelineConfig:
    vehicle_width: float = 0.32
    margin: float = 0.1
    qp_spacing: float = 0.2
    output_spacing: float = 0.1
    max_qp_iterations: int = 5
    qp_tolerance: float = 1e-3


class RaceTrajectory:
    """Optimized waypoints: position, heading, curvature, speed reference."""

    def __init__(self, points, heading, curvature, v_ref, closed: bool = True):
        self.line = Centerline(points, 0.0, 0.0, closed=closed)
        self.heading = np.asarray(heading, dtype=np.float64)
        self.curvature = np.asarray(curvature, dtype=np.float64)
        self.v_ref = np.asarray(v_ref, dtype=np.float64)
        n = len(self.line)
        if not (len(self.heading) == len(self.curvature) == len(self.v_ref) == n):
            raise RacelineError("trajectory field lengths disagree")
        for arr in (self.heading, self.curvature, self.v_ref):
            arr.setflags(write=False)

    @property
    def points(self) -> np.ndarray:
        return self.line.points

    @property
    def cum_s(self) -> np.ndarray:
        return self.line.cum_s

    @property
    def closed(self) -> bool:
        return self.line.closed

    @property
    def total_length(self) -> float:
        return self.line.total_length

    def __len__(self) -> int:
        return len(self.line)

    def sample_at(self, s: float):
        return self.line.sample_at(s)

    def project(self, x, y, yaw, hint_s=None):
        return self.line.project(x, y, yaw, hint_s=hint_s)

    def speed_at_index(self, index: int) -> float:
        return float(self.v_ref[index % len(self.v_ref)])

    def lap_time_estimate(self) -> float:
        """Ideal lap time: sum of segment length over segment mean speed."""
        v = self.v_ref
        if self.closed:
            ds = np.diff(np.concatenate([self.cum_s, [self.total_length]]))
            v_pair = 0.5 * (v + np.roll(v, -1))
        else:
            ds = np.diff(self.cum_s)
            v_pair = 0.5 * (v[:-1] + v[1:])
        return float(np.sum(ds / np.maximum(v_pair, 1e-9)))


def path_curvature(points: np.ndarray, closed: bool = True) -> np.ndarray:
    """Signed discrete curvature per point (left turn positive).

    Uses the circumscribed-circle formula on each consecutive point triple;
    endpoints of open paths copy their neighbors.
    """
    points = np.asarray(points, dtype=np.float64)
    n = len(points)
    if n < 3:
        raise RacelineError("need at least 3 points for curvature")
    if closed:
        prev_pts = np.roll(points, 1, axis=0)
        next_pts = np.roll(points, -1, axis=0)
        a = points - prev_pts
        b = next_pts - points
        c = next_pts - prev_pts
    else:
        a = points[1:-1] - points[:-2]
        b = points[2:] - points[1:-1]
        c = points[2:] - points[:-2]
    la = np.hypot(a[:, 0], a[:, 1])
    lb = np.hypot(b[:, 0], b[:, 1])
    lc = np.hypot(c[:, 0], c[:, 1])
    if np.any(la == 0) or np.any(lb == 0):
        raise RacelineError("repeated consecutive points")
    cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = np.where(lc > 0, 2.0 * cross / (la * lb * lc), 0.0)
    if not closed:
        kappa = np.concatenate([kappa[:1], kappa, kappa[-1:]])
    return kappa


def _offset_path(centerline: Centerline, alpha: np.ndarray) -> np.ndarray:
    return centerline.points + alpha[:, None] * centerline.normals


def _curvature_objective(centerline: Centerline, alpha: np.ndarray) -> tuple[np.ndarray, float]:
    kappa = path_curvature(_offset_path(centerline, alpha), centerline.closed)
    return kappa, float(np.sum(kappa ** 2))


def _curvature_jacobian(centerline: Centerline, alpha: np.ndarray,
                        kappa: np.ndarray, h: float = 1e-6) -> sparse.csr_matrix:
    """Banded numeric Jacobian d kappa / d alpha (each offset moves 3 rows)."""
    n = len(alpha)
    closed = centerline.closed
    rows, cols, vals = [], [], []
    for k in range(n):
        a_plus = alpha.copy()
        a_plus[k] += h
        a_minus = alpha.copy()
        a_minus[k] -= h
        if closed:
            touched = [(k - 1) % n, k, (k + 1) % n]
        else:
            touched = [i for i in (k - 1, k, k + 1) if 0 <= i < n]
        kp = path_curvature(_offset_path(centerline, a_plus), closed)
        km = path_curvature(_offset_path(centerline, a_minus), closed)
        for i in touched:
            rows.append(i)
            cols.append(k)
            vals.append((kp[i] - km[i]) / (2.0 * h))
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def min_curvature_path(centerline: Centerline, vehicle_width: float, margin: float,
                       max_iterations: int = 5, tolerance: float = 1e-3) -> np.ndarray:
    """Lateral offsets along the left normals minimizing summed squared curvature.

    Solves the box-constrained linearized least-squares problem and
    re-linearizes around the new path until offsets stop moving or the
    iteration cap is reached; backtracking keeps the true objective
    non-increasing across iterations.
    """
    half = vehicle_width / 2.0 + margin
    ub = centerline.width_left - half
    lb = -(centerline.width_right - half)
    if np.any(lb >= ub):
        worst = int(np.argmin(ub - lb))
        raise RacelineError(
            f"track too narrow for the vehicle at point {worst}: "
            f"bounds [{lb[worst]:.3f}, {ub[worst]:.3f}]")

    alpha = np.zeros(len(centerline))
    kappa, objective = _curvature_objective(centerline, alpha)
    for _ in range(max_iterations):
        jac = _curvature_jacobian(centerline, alpha, kappa)
        damping = 1e-4
        a_mat = sparse.vstack([jac, damping * sparse.identity(len(alpha))]).tocsr()
        b_vec = np.concatenate([jac @ alpha - kappa, damping * alpha])
        result = lsq_linear(a_mat, b_vec, bounds=(lb, ub), method="trf",
                            lsmr_tol="auto", max_iter=200)
        proposed = result.x
        step = 1.0
        accepted = None
        while step >= 1.0 / 32.0:
            candidate = alpha + step * (proposed - alpha)
            kappa_c, objective_c = _curvature_objective(centerline, candidate)
            if objective_c <= objective + 1e-12:
                accepted = (candidate, kappa_c, objective_c)
                break
            step /= 2.0
        if accepted is None:
            break
        moved = float(np.max(np.abs(accepted[0] - alpha)))
        alpha, kappa, objective = accepted
        if moved < tolerance:
            break
    return alpha


def _friction_limited_accel(kappa: float, speed: float, params: VehicleParams) -> float:
    """Available longitudinal acceleration under the friction circle."""
    lateral_fraction = kappa * speed * speed / (params.mu * GRAVITY)
    return params.a_max * math.sqrt(max(0.0, 1.0 - lateral_fraction ** 2))


def speed_profile(kappa: np.ndarray, cum_s: np.ndarray, params: VehicleParams,
                  closed: bool = True, total_length: float | None = None) -> np.ndarray:
    """Minimum-time speed profile under lateral and longitudinal limits.

    Starts from the curvature speed caps, then alternates forward
    (acceleration) and backward (braking) passes until a fixed point; for
    closed paths the passes wrap around the lap boundary.  Floored at
    ``v_min`` afterwards.
    """
    kappa = np.abs(np.asarray(kappa, dtype=np.float64))
    cum_s = np.asarray(cum_s, dtype=np.float64)
    n = len(kappa)
    if len(cum_s) != n:
        raise RacelineError("kappa and cum_s lengths disagree")
    ds = np.diff(cum_s)
    if closed:
        if total_length is None:
            raise RacelineError("closed speed profile needs total_length")
        ds = np.concatenate([ds, [total_length - cum_s[-1]]])
    if np.any(ds <= 0):
        raise RacelineError("cum_s must be strictly increasing")

    mu_g = params.mu * GRAVITY
    with np.errstate(divide="ignore"):
        caps = np.where(kappa > 0, np.sqrt(mu_g / np.maximum(kappa, 1e-12)), np.inf)
    v = np.minimum(params.v_max, caps)

    n_pairs = n if closed else n - 1
    for _ in range(200):
        changed = False
        for i in range(n_pairs):
            j = (i + 1) % n
            limit = math.sqrt(v[i] ** 2 + 2.0 * _friction_limited_accel(kappa[i], v[i], params) * ds[i])
            if v[j] > limit + 1e-12:
                v[j] = limit
                changed = True
        for i in range(n_pairs - 1, -1, -1):
            j = (i + 1) % n
            limit = math.sqrt(v[j] ** 2 + 2.0 * _friction_limited_accel(kappa[j], v[j], params) * ds[i])
            if v[i] > limit + 1e-12:
                v[i] = limit
                changed = True
        if not changed:
            break
    return np.maximum(v, params.v_min)


def _spline_resample_with_heading(points: np.ndarray, closed: bool, spacing: float,
                                  smoothing: float):
    pts = np.vstack([points, points[:1]]) if closed else points
    tck, _ = splprep([pts[:, 0], pts[:, 1]], s=smoothing, per=1 if closed else 0)
    u_dense = np.linspace(0.0, 1.0, 25 * len(points))
    dense = np.column_stack(splev(u_dense, tck))
    seg = np.hypot(*np.diff(dense, axis=0).T)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    total = cum[-1]
    if closed:
        count = max(8, int(round(total / spacing)))
        s_new = np.linspace(0.0, total, count, endpoint=False)
    else:
        count = max(3, int(round(total / spacing)) + 1)
        s_new = np.linspace(0.0, total, count)
    u_new = np.interp(s_new, cum, u_dense)
    out = np.column_stack(splev(u_new, tck))
    dx, dy = splev(u_new, tck, der=1)
    heading = np.arctan2(dy, dx)
    return out, heading


def generate_raceline(centerline: Centerline, params: VehicleParams,
                      config: RacelineConfig = RacelineConfig()) -> RaceTrajectory:
    """Full classical pipeline: offset QP, resample, curvature, speed profile."""
    working = centerline.resampled(config.qp_spacing)
    alpha = min_curvature_path(working, config.vehicle_width, config.margin,
                               config.max_qp_iterations, config.qp_tolerance)
    rough = _offset_path(working, alpha)
    points, heading = _spline_resample_with_heading(
        rough, working.closed, config.output_spacing,
        smoothing=len(rough) * 1e-4)
    kappa = path_curvature(points, working.closed)
    line = Centerline(points, 0.0, 0.0, closed=working.closed)
    v_ref = speed_profile(kappa, line.cum_s, params, closed=working.closed,
                          total_length=line.total_length)
    return RaceTrajectory(points, heading, kappa, v_ref, closed=working.closed)


def save_raceline_csv(trajectory: RaceTrajectory) -> bytes:
    lines = [RACELINE_CSV_HEADER]
    for s, (x, y), psi, kap, v in zip(trajectory.cum_s, trajectory.points,
                                      trajectory.heading, trajectory.curvature,
                                      trajectory.v_ref):
        lines.append(f"{s!r},{x!r},{y!r},{psi!r},{kap!r},{v!r}")
    return ("\n".join(lines) + "\n").encode()


def load_raceline_csv(data: bytes, closed: bool = True) -> RaceTrajectory:
    text = data.decode() if isinstance(data, (bytes, bytearray)) else str(data)
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise RacelineError("empty raceline CSV")
    header = [c.strip() for c in lines[0].split(",")]
    required = RACELINE_CSV_HEADER.split(",")
    if header != required:
        raise RacelineError(f"raceline CSV header must be {required}, got {header}")
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    if rows.shape[0] < 3 or not np.isfinite(rows).all():
        raise RacelineError("raceline CSV needs >= 3 finite rows")
    return RaceTrajectory(rows[:, 1:3], rows[:, 3], rows[:, 4], rows[:, 5], closed=closed)
