"""Planar LiDAR simulation by grid ray casting.

Rays traverse the occupancy grid cell-by-cell (DDA) and report the
distance at which they enter the first occupied cell, capped at the
maximum range.  Scans fan ``n_beams`` rays across a field of view centered
on the vehicle heading and add per-beam Gaussian range noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .track import TrackMap

DEFAULT_N_BEAMS = 20
DEFAULT_FOV = math.pi
DEFAULT_MAX_RANGE = 10.0
DEFAULT_NOISE_SIGMA = 0.01


@dataclass(frozen=True)
class LidarConfig:
    n_beams: int = DEFAULT_N_BEAMS
    fov: float = DEFAULT_FOV
    max_range: float = DEFAULT_MAX_RANGE
    noise_sigma: float = DEFAULT_NOISE_SIGMA


@dataclass(frozen=True)
class LidarScan:
    beams: np.ndarray
    beam_angles: np.ndarray
    fov: float
    max_range: float


@njit(cache=True)
def _march_rays(grid, gx0, gy0, angles, max_range_cells):  # pragma: no cover - jit
    height, width = grid.shape
    n = angles.shape[0]
    out = np.empty(n)
    for k in range(n):
        dx = math.cos(angles[k])
        dy = math.sin(angles[k])
        ix = int(math.floor(gx0))
        iy = int(math.floor(gy0))
        step_x = 1 if dx > 0 else -1
        step_y = 1 if dy > 0 else -1
        inv_dx = abs(1.0 / dx) if dx != 0.0 else 1e30
        inv_dy = abs(1.0 / dy) if dy != 0.0 else 1e30
        if dx > 0:
            t_max_x = (ix + 1 - gx0) * inv_dx
        elif dx < 0:
            t_max_x = (gx0 - ix) * inv_dx
        else:
            t_max_x = 1e30
        if dy > 0:
            t_max_y = (iy + 1 - gy0) * inv_dy
        elif dy < 0:
            t_max_y = (gy0 - iy) * inv_dy
        else:
            t_max_y = 1e30
        dist = max_range_cells
        while True:
            if t_max_x < t_max_y:
                t = t_max_x
                t_max_x += inv_dx
                ix += step_x
            else:
                t = t_max_y
                t_max_y += inv_dy
                iy += step_y
            if t >= max_range_cells:
                break
            if ix < 0 or ix >= width or iy < 0 or iy >= height:
                break
            if grid[iy, ix]:
                dist = t
                break
        out[k] = min(dist, max_range_cells)
    return out


def cast_rays(track_map: TrackMap, x: float, y: float, angles: np.ndarray,
              max_range: float = DEFAULT_MAX_RANGE) -> np.ndarray:
    """Distances to the first wall along world-frame ray angles."""
    if track_map.occupied_at(x, y):
        raise ValueError(f"ray origin ({x:.3f}, {y:.3f}) is inside an occupied cell")
    gx, gy = track_map.world_to_grid(x, y)
    grid_angles = np.asarray(angles, dtype=np.float64) - track_map.origin[2]
    dist_cells = _march_rays(track_map.grid, gx, gy, grid_angles,
                             max_range / track_map.resolution)
    return dist_cells * track_map.resolution


def cast_ray(track_map: TrackMap, origin, angle: float,
             max_range: float = DEFAULT_MAX_RANGE) -> float:
    """Distance from a free-space origin to the first occupied cell."""
    return float(cast_rays(track_map, origin[0], origin[1],
                           np.array([angle]), max_range)[0])


def beam_angles(n_beams: int, fov: float = DEFAULT_FOV) -> np.ndarray:
    """Relative beam angles, evenly spaced and endpoint-inclusive."""
    if n_beams < 2:
        raise ValueError("need at least 2 beams")
    return np.linspace(-fov / 2.0, fov / 2.0, n_beams)


def scan(track_map: TrackMap, x: float, y: float, yaw: float,
         n_beams: int = DEFAULT_N_BEAMS, noise_sigma: float = DEFAULT_NOISE_SIGMA,
         rng: np.random.Generator | None = None, fov: float = DEFAULT_FOV,
         max_range: float = DEFAULT_MAX_RANGE) -> LidarScan:
    """Noisy fan scan centered on the vehicle heading.

    Gaussian range noise of the given sigma (meters) is added per beam when
    a generator is supplied; results are clamped to [0, max_range].
    """
    rel = beam_angles(n_beams, fov)
    beams = cast_rays(track_map, x, y, yaw + rel, max_range)
    if rng is not None and noise_sigma > 0:
        beams = beams + rng.normal(0.0, noise_sigma, n_beams)
    beams = np.clip(beams, 0.0, max_range)
    return LidarScan(beams=beams, beam_angles=rel, fov=fov, max_range=max_range)
