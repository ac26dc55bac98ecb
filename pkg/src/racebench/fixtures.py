"""Procedurally generated desk-scale track maps.

Four bundled tracks cover the test and experiment needs without external
assets: a plain annulus, a rounded rectangle with two long straights, and
two harmonic loops sized to match real circuit lengths (93.7 m and
236.8 m).  Each generator rasterizes a closed generating curve into an
occupancy grid by carving a constant-halfwidth corridor around it.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .track import Centerline, TrackMap

FIXTURE_RESOLUTION = 0.05

# Amplitudes of the radial harmonics r(theta) = 1 + sum a_k cos/sin(k theta),
# scaled so the loop length hits the target.  Chosen for corner radii that
# force braking below 6-8 m/s while staying drivable at corridor width.
_AUTLIKE_HARMONICS = (("cos", 1, 0.10), ("cos", 2, 0.26), ("sin", 3, 0.12), ("cos", 5, 0.04))
_AUTLIKE_LENGTH = 93.7
_ESPLIKE_HARMONICS = (
    ("cos", 1, 0.06), ("cos", 2, 0.15), ("sin", 3, 0.13), ("cos", 5, 0.06), ("sin", 6, 0.03))
_ESPLIKE_LENGTH = 236.8


def _loop_length(points: np.ndarray) -> float:
    d = np.diff(np.vstack([points, points[:1]]), axis=0)
    return float(np.hypot(d[:, 0], d[:, 1]).sum())


def carve_corridor(curve: np.ndarray, halfwidth: float, resolution: float,
                   padding: float = 0.6) -> TrackMap:
    """Rasterize a free corridor of the given halfwidth around a closed curve.

    Cells whose centers lie within ``halfwidth`` of the densified curve are
    free; everything else, including a padding ring, stays occupied.
    """
    from scipy import ndimage

    # Densify so consecutive samples are under half a cell apart.
    closed = np.vstack([curve, curve[:1]])
    seg = np.diff(closed, axis=0)
    seg_len = np.hypot(seg[:, 0], seg[:, 1])
    cum = np.concatenate(([0.0], np.cumsum(seg_len)))
    n_dense = int(math.ceil(cum[-1] / (resolution / 2.0)))
    s_dense = np.linspace(0.0, cum[-1], n_dense, endpoint=False)
    xd = np.interp(s_dense, cum, closed[:, 0])
    yd = np.interp(s_dense, cum, closed[:, 1])

    pad = halfwidth + padding
    x0 = xd.min() - pad
    y0 = yd.min() - pad
    width = int(math.ceil((xd.max() + pad - x0) / resolution))
    height = int(math.ceil((yd.max() + pad - y0) / resolution))

    on_curve = np.zeros((height, width), dtype=bool)
    ix = np.clip(((xd - x0) / resolution).astype(int), 0, width - 1)
    iy = np.clip(((yd - y0) / resolution).astype(int), 0, height - 1)
    on_curve[iy, ix] = True
    dist_cells = ndimage.distance_transform_edt(~on_curve)
    occupied = dist_cells * resolution > halfwidth
    return TrackMap(occupied, resolution, origin=(x0, y0, 0.0))


def circle_curve(radius: float, n_points: int = 720) -> np.ndarray:
    theta = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])


def rounded_rectangle_curve(width: float, height: float, corner_radius: float,
                            spacing: float = 0.05) -> np.ndarray:
    """Closed rectangle outline with quarter-circle corners, CCW from +x side."""
    if corner_radius * 2 >= min(width, height):
        raise ValueError("corner radius too large for the rectangle")
    hx = width / 2.0 - corner_radius
    hy = height / 2.0 - corner_radius
    r = corner_radius
    pieces = []

    def straight(p0, p1):
        n = max(2, int(math.ceil(math.hypot(p1[0] - p0[0], p1[1] - p0[1]) / spacing)))
        t = np.linspace(0.0, 1.0, n, endpoint=False)
        pieces.append(np.column_stack([p0[0] + t * (p1[0] - p0[0]), p0[1] + t * (p1[1] - p0[1])]))

    def arc(center, a0, a1):
        n = max(2, int(math.ceil(abs(a1 - a0) * r / spacing)))
        a = np.linspace(a0, a1, n, endpoint=False)
        pieces.append(np.column_stack([center[0] + r * np.cos(a), center[1] + r * np.sin(a)]))

    straight((hx + r, -hy), (hx + r, hy))
    arc((hx, hy), 0.0, math.pi / 2)
    straight((hx, hy + r), (-hx, hy + r))
    arc((-hx, hy), math.pi / 2, math.pi)
    straight((-hx - r, hy), (-hx - r, -hy))
    arc((-hx, -hy), math.pi, 3 * math.pi / 2)
    straight((-hx, -hy - r), (hx, -hy - r))
    arc((hx, -hy), 3 * math.pi / 2, 2 * math.pi)
    return np.vstack(pieces)


def harmonic_loop_curve(harmonics, target_length: float, n_points: int = 3000) -> np.ndarray:
    """Closed polar-harmonic loop rescaled to an exact arc length."""
    theta = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    radius = np.ones_like(theta)
    for kind, k, amplitude in harmonics:
        radius = radius + amplitude * (np.cos(k * theta) if kind == "cos" else np.sin(k * theta))
    pts = np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
    return pts * (target_length / _loop_length(pts))


def curve_centerline(curve: np.ndarray, halfwidth: float, spacing: float = 0.2) -> Centerline:
    """Centerline straight from a generating curve with uniform widths."""
    return Centerline(curve, halfwidth, halfwidth, closed=True).resampled(spacing)


@functools.lru_cache(maxsize=None)
def build_fixture(name: str) -> TrackMap:
    """Build one of the bundled fixture maps by name."""
    if name == "annulus":
        return carve_corridor(circle_curve(4.6), halfwidth=1.1, resolution=FIXTURE_RESOLUTION)
    if name == "rounded_rect":
        curve = rounded_rectangle_curve(14.0, 8.0, corner_radius=1.7)
        return carve_corridor(curve, halfwidth=1.1, resolution=FIXTURE_RESOLUTION)
    if name == "autlike":
        curve = harmonic_loop_curve(_AUTLIKE_HARMONICS, _AUTLIKE_LENGTH)
        return carve_corridor(curve, halfwidth=1.0, resolution=FIXTURE_RESOLUTION)
    if name == "esplike":
        curve = harmonic_loop_curve(_ESPLIKE_HARMONICS, _ESPLIKE_LENGTH)
        return carve_corridor(curve, halfwidth=1.1, resolution=0.08)
    raise KeyError(f"unknown fixture {name!r}; available: {fixture_names()}")


def fixture_names() -> list[str]:
    return ["annulus", "rounded_rect", "autlike", "esplike"]


def fixture_generating_curve(name: str) -> np.ndarray:
    """The exact curve each fixture corridor was carved around."""
    if name == "annulus":
        return circle_curve(4.6)
    if name == "rounded_rect":
        return rounded_rectangle_curve(14.0, 8.0, corner_radius=1.7)
    if name == "autlike":
        return harmonic_loop_curve(_AUTLIKE_HARMONICS, _AUTLIKE_LENGTH)
    if name == "esplike":
        return harmonic_loop_curve(_ESPLIKE_HARMONICS, _ESPLIKE_LENGTH)
    raise KeyError(f"unknown fixture {name!r}; available: {fixture_names()}")
