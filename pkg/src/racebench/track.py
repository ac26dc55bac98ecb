"""Occupancy-grid race maps, centerlines and pose queries.

A :class:`TrackMap` wraps a boolean occupancy grid (``True`` = occupied) with
its resolution, world origin and a Euclidean distance field, and answers
collision queries.  A :class:`Centerline` is an arc-length-parameterized
polyline with per-point track widths; it supports projection of a vehicle
pose onto the line (arc length, signed cross-track distance, heading error).

Both types are immutable after construction and safe to share across
concurrent workers.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml
from PIL import Image, UnidentifiedImageError
from scipy import ndimage
from skimage.morphology import skeletonize

# Poses farther than this from the centerline indicate a teleport or a
# logic bug upstream, not a normal off-track excursion.
PROJECTION_MAX_DIST = 5.0

# Arc-length half-window used when a projection hint is available.
PROJECTION_HINT_WINDOW = 5.0

MIN_LOOP_LENGTH = 10.0

CENTERLINE_CSV_HEADER = "x_m,y_m,w_tr_left_m,w_tr_right_m"


class MapError(ValueError):
    """Malformed map input (image, metadata or degenerate occupancy)."""


class CenterlineError(ValueError):
    """Centerline extraction or ingestion failure."""


class OffTrackError(ValueError):
    """Pose too far from the centerline for a meaningful projection."""


def wrap_angle(angle):
    """Wrap an angle (scalar or array) to (-pi, pi]."""
    wrapped = np.mod(-np.asarray(angle) + np.pi, 2.0 * np.pi)
    return -(wrapped - np.pi)


@dataclass(frozen=True)
class PoseProjection:
    """Projection of a vehicle pose onto a centerline or trajectory.

    ``s`` is arc length along the line, ``d_c`` the signed cross-track
    distance (positive to the left of the tangent), ``psi`` the heading
    error in (-pi, pi] and ``progress`` the lap fraction ``s / total``.
    """

    s: float
    d_c: float
    psi: float
    progress: float


def distance_field(grid: np.ndarray, resolution: float) -> np.ndarray:
    """Exact Euclidean distance transform of an occupancy grid, in meters.

    Occupied cells map to 0.  With no occupied cell at all, every entry is
    the +inf sentinel.
    """
    grid = np.asarray(grid, dtype=bool)
    if resolution <= 0:
        raise MapError(f"resolution must be positive, got {resolution}")
    if not grid.any():
        return np.full(grid.shape, np.inf)
    return ndimage.distance_transform_edt(~grid) * resolution


class TrackMap:
    """Immutable occupancy grid with distance field and world transform.

    ``grid[iy, ix]`` is True where occupied; cell (0, 0) has its corner at
    ``origin`` and the +x grid axis points along the origin yaw.
    """

    def __init__(self, grid, resolution: float, origin=(0.0, 0.0, 0.0)):
        grid = np.asarray(grid, dtype=bool)
        if grid.ndim != 2 or grid.size == 0:
            raise MapError("grid must be a non-empty 2D array")
        if resolution <= 0:
            raise MapError(f"resolution must be positive, got {resolution}")
        if grid.all():
            raise MapError("map has no free cells")
        self.grid = grid
        self.grid.setflags(write=False)
        self.resolution = float(resolution)
        self.origin = (float(origin[0]), float(origin[1]), float(origin[2]))
        self._cos = math.cos(self.origin[2])
        self._sin = math.sin(self.origin[2])
        self.distance_field = distance_field(grid, self.resolution)
        self.distance_field.setflags(write=False)

    @property
    def height(self) -> int:
        return self.grid.shape[0]

    @property
    def width(self) -> int:
        return self.grid.shape[1]

    def world_to_grid(self, x: float, y: float) -> tuple[float, float]:
        """World point -> continuous grid coordinates in cell units."""
        dx = x - self.origin[0]
        dy = y - self.origin[1]
        gx = (self._cos * dx + self._sin * dy) / self.resolution
        gy = (-self._sin * dx + self._cos * dy) / self.resolution
        return gx, gy

    def grid_to_world(self, gx: float, gy: float) -> tuple[float, float]:
        """Continuous grid coordinates (cell units) -> world point."""
        px = gx * self.resolution
        py = gy * self.resolution
        x = self.origin[0] + self._cos * px - self._sin * py
        y = self.origin[1] + self._sin * px + self._cos * py
        return x, y

    def cell_index(self, x: float, y: float):
        """Integer cell containing a world point, or None if outside."""
        gx, gy = self.world_to_grid(x, y)
        ix = int(math.floor(gx))
        iy = int(math.floor(gy))
        if 0 <= ix < self.width and 0 <= iy < self.height:
            return ix, iy
        return None

    def distance_at(self, x: float, y: float) -> float:
        """Distance-field sample at a world point; 0.0 outside the grid."""
        cell = self.cell_index(x, y)
        if cell is None:
            return 0.0
        return float(self.distance_field[cell[1], cell[0]])

    def occupied_at(self, x: float, y: float) -> bool:
        cell = self.cell_index(x, y)
        if cell is None:
            return True
        return bool(self.grid[cell[1], cell[0]])

    def occupied_at_many(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Vectorized occupancy lookup; points outside the grid read occupied."""
        dx = np.asarray(xs, dtype=np.float64) - self.origin[0]
        dy = np.asarray(ys, dtype=np.float64) - self.origin[1]
        ix = np.floor((self._cos * dx + self._sin * dy) / self.resolution).astype(np.int64)
        iy = np.floor((-self._sin * dx + self._cos * dy) / self.resolution).astype(np.int64)
        inside = (ix >= 0) & (ix < self.width) & (iy >= 0) & (iy < self.height)
        out = np.ones(ix.shape, dtype=bool)
        out[inside] = self.grid[iy[inside], ix[inside]]
        return out


def collision(track_map: TrackMap, x: float, y: float, vehicle_halfwidth: float) -> bool:
    """Crash test: disc footprint of the given halfwidth touches a wall.

    True iff the distance field at (x, y) is at most ``vehicle_halfwidth``,
    or the point lies outside the grid.
    """
    cell = track_map.cell_index(x, y)
    if cell is None:
        return True
    return bool(track_map.distance_field[cell[1], cell[0]] <= vehicle_halfwidth)


def load_map(image_bytes: bytes, metadata: dict) -> TrackMap:
    """Build a TrackMap from a grayscale image plus metadata.

    Metadata keys: ``resolution`` (m/px), ``origin`` ([x, y, yaw] of the
    lower-left pixel corner) and ``occupied_thresh`` (luminance fraction
    below which a pixel counts as occupied).  Image row 0 is the top of the
    map, so rows are flipped to make grid +y point up.
    """
    try:
        image = Image.open(io.BytesIO(image_bytes))
        image.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise MapError(f"cannot decode map image: {exc}") from exc
    resolution = float(metadata["resolution"])
    if resolution <= 0:
        raise MapError(f"resolution must be positive, got {resolution}")
    origin = tuple(float(v) for v in metadata.get("origin", (0.0, 0.0, 0.0)))
    thresh = float(metadata.get("occupied_thresh", 0.45))
    lum = np.asarray(image.convert("L"), dtype=np.float64) / 255.0
    occupied = np.flipud(lum < thresh)
    return TrackMap(occupied, resolution, origin)


def load_map_files(metadata_path) -> TrackMap:
    """Load a map from a metadata YAML file referencing its image."""
    metadata_path = Path(metadata_path)
    with open(metadata_path) as fh:
        metadata = yaml.safe_load(fh)
    if not isinstance(metadata, dict) or "image" not in metadata:
        raise MapError(f"map metadata {metadata_path} must define an image key")
    image_path = metadata_path.parent / metadata["image"]
    return load_map(image_path.read_bytes(), metadata)


def save_map_files(track_map: TrackMap, metadata_path, occupied_thresh: float = 0.45) -> None:
    """Write a TrackMap as a PNG plus metadata YAML next to it."""
    metadata_path = Path(metadata_path)
    image_path = metadata_path.with_suffix(".png")
    lum = np.where(np.flipud(track_map.grid), 0, 255).astype(np.uint8)
    Image.fromarray(lum, mode="L").save(image_path)
    metadata = {
        "image": image_path.name,
        "resolution": track_map.resolution,
        "origin": list(track_map.origin),
        "occupied_thresh": occupied_thresh,
    }
    with open(metadata_path, "w") as fh:
        yaml.safe_dump(metadata, fh, sort_keys=True)


class Centerline:
    """Arc-length-parameterized reference line with per-point track widths."""

    def __init__(self, points, width_left, width_right, closed: bool = True):
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != 2 or len(points) < 2:
            raise CenterlineError("centerline needs at least 2 (x, y) points")
        if not np.isfinite(points).all():
            raise CenterlineError("centerline points must be finite")
        self.points = points
        self.width_left = np.broadcast_to(np.asarray(width_left, dtype=np.float64), (len(points),)).copy()
        self.width_right = np.broadcast_to(np.asarray(width_right, dtype=np.float64), (len(points),)).copy()
        if not (np.isfinite(self.width_left).all() and np.isfinite(self.width_right).all()):
            raise CenterlineError("track widths must be finite")
        self.closed = bool(closed)

        seg = np.diff(points, axis=0)
        seg_len = np.hypot(seg[:, 0], seg[:, 1])
        if np.any(seg_len <= 0):
            raise CenterlineError("repeated consecutive centerline points")
        self.cum_s = np.concatenate(([0.0], np.cumsum(seg_len)))
        if self.closed:
            closing = float(np.hypot(*(points[0] - points[-1])))
            if closing <= 0:
                raise CenterlineError("closed centerline must not duplicate its first point")
            self.total_length = float(self.cum_s[-1] + closing)
        else:
            self.total_length = float(self.cum_s[-1])

        # Per-segment geometry; closed lines get the wrap-around segment.
        starts = points
        ends = np.vstack([points[1:], points[:1]]) if self.closed else points[1:]
        if not self.closed:
            starts = points[:-1]
        d = ends - starts
        self._seg_start = starts
        self._seg_vec = d
        self._seg_len = np.hypot(d[:, 0], d[:, 1])
        self._seg_s0 = self.cum_s if self.closed else self.cum_s[:-1]
        self._seg_heading = np.arctan2(d[:, 1], d[:, 0])

        for arr in (self.points, self.width_left, self.width_right, self.cum_s):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def headings(self) -> np.ndarray:
        """Tangent heading at each point (direction of the outgoing segment)."""
        if self.closed:
            return self._seg_heading
        return np.concatenate([self._seg_heading, self._seg_heading[-1:]])

    @property
    def normals(self) -> np.ndarray:
        """Unit left normals at each point."""
        h = self.headings
        return np.column_stack([-np.sin(h), np.cos(h)])

    def wrap_s(self, s: float) -> float:
        if self.closed:
            return float(np.mod(s, self.total_length))
        return float(np.clip(s, 0.0, self.total_length))

    def sample_at(self, s: float) -> tuple[np.ndarray, float]:
        """Point and tangent heading at arc length ``s`` (wrapping if closed)."""
        s = self.wrap_s(s)
        i = int(np.searchsorted(self._seg_s0, s, side="right") - 1)
        i = max(0, min(i, len(self._seg_len) - 1))
        t = (s - self._seg_s0[i]) / self._seg_len[i]
        point = self._seg_start[i] + t * self._seg_vec[i]
        return point, float(self._seg_heading[i])

    def _candidate_segments(self, hint_s: float | None, window: float) -> np.ndarray:
        n = len(self._seg_len)
        if hint_s is None:
            return np.arange(n)
        hint = self.wrap_s(hint_s)
        ds = self._seg_s0 - hint
        if self.closed:
            ds = (ds + self.total_length / 2.0) % self.total_length - self.total_length / 2.0
        mask = (ds > -(window + self._seg_len)) & (ds < window)
        if not mask.any():
            return np.arange(n)
        return np.nonzero(mask)[0]

    def project(self, x: float, y: float, yaw: float, hint_s: float | None = None,
                window: float = PROJECTION_HINT_WINDOW,
                max_dist: float = PROJECTION_MAX_DIST) -> PoseProjection:
        """Project a pose onto the line.

        Finds the closest point over candidate segments (all of them, or an
        arc-length window of ``window`` meters around ``hint_s``), returning
        arc length, signed cross-track distance (left of tangent positive)
        and heading error.  Raises OffTrackError beyond ``max_dist``.
        """
        idx = self._candidate_segments(hint_s, window)
        q = np.array([x, y])
        rel = q - self._seg_start[idx]
        seg = self._seg_vec[idx]
        t = np.clip((rel * seg).sum(axis=1) / self._seg_len[idx] ** 2, 0.0, 1.0)
        proj = self._seg_start[idx] + t[:, None] * seg
        diff = q - proj
        dist2 = (diff ** 2).sum(axis=1)
        # Tie-break towards t=0 so a pose exactly on a waypoint projects onto
        # its outgoing segment.
        best = np.lexsort((t, np.round(dist2 / 1e-18)))[0]
        dist = math.sqrt(dist2[best])
        if dist > max_dist:
            raise OffTrackError(
                f"pose ({x:.2f}, {y:.2f}) is {dist:.2f} m from the centerline")
        i = idx[best]
        s = float(self._seg_s0[i] + t[best] * self._seg_len[i])
        if self.closed and s >= self.total_length:
            s -= self.total_length
        heading = self._seg_heading[i]
        normal = np.array([-math.sin(heading), math.cos(heading)])
        d_c = float(diff[best] @ normal)
        psi = float(wrap_angle(yaw - heading))
        return PoseProjection(s=s, d_c=d_c, psi=psi, progress=s / self.total_length)

    def resampled(self, spacing: float) -> "Centerline":
        """Uniform arc-length resampling (linear interpolation)."""
        if spacing <= 0:
            raise CenterlineError("spacing must be positive")
        if self.closed:
            pts = np.vstack([self.points, self.points[:1]])
            wl = np.concatenate([self.width_left, self.width_left[:1]])
            wr = np.concatenate([self.width_right, self.width_right[:1]])
            s_nodes = np.concatenate([self.cum_s, [self.total_length]])
            n = max(8, int(round(self.total_length / spacing)))
            s_new = np.linspace(0.0, self.total_length, n, endpoint=False)
        else:
            pts, wl, wr, s_nodes = self.points, self.width_left, self.width_right, self.cum_s
            n = max(2, int(round(self.total_length / spacing)) + 1)
            s_new = np.linspace(0.0, self.total_length, n)
        x = np.interp(s_new, s_nodes, pts[:, 0])
        y = np.interp(s_new, s_nodes, pts[:, 1])
        wl_new = np.interp(s_new, s_nodes, wl)
        wr_new = np.interp(s_new, s_nodes, wr)
        return Centerline(np.column_stack([x, y]), wl_new, wr_new, closed=self.closed)


def project_pose(centerline: Centerline, x: float, y: float, yaw: float,
                 hint_s: float | None = None) -> PoseProjection:
    """Functional wrapper around :meth:`Centerline.project`."""
    return centerline.project(x, y, yaw, hint_s=hint_s)


def save_centerline_csv(centerline: Centerline) -> bytes:
    """Serialize a centerline to the x/y/width CSV wire format."""
    lines = [CENTERLINE_CSV_HEADER]
    for (x, y), wl, wr in zip(centerline.points, centerline.width_left, centerline.width_right):
        lines.append(f"{x!r},{y!r},{wl!r},{wr!r}")
    return ("\n".join(lines) + "\n").encode()


def load_centerline_csv(data: bytes, closed: bool = True) -> Centerline:
    """Parse the x/y/width CSV wire format into a Centerline."""
    text = data.decode() if isinstance(data, (bytes, bytearray)) else str(data)
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise CenterlineError("empty centerline CSV")
    header = [c.strip() for c in lines[0].split(",")]
    required = ["x_m", "y_m", "w_tr_left_m", "w_tr_right_m"]
    if any(col not in header for col in required):
        raise CenterlineError(f"centerline CSV must have columns {required}, got {header}")
    cols = {name: header.index(name) for name in required}
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        try:
            rows.append([float(parts[cols[c]]) for c in required])
        except (ValueError, IndexError) as exc:
            raise CenterlineError(f"bad centerline CSV row {ln!r}: {exc}") from exc
    if len(rows) < 4:
        raise CenterlineError(f"centerline CSV needs at least 4 points, got {len(rows)}")
    arr = np.asarray(rows)
    if not np.isfinite(arr).all():
        raise CenterlineError("centerline CSV contains non-finite values")
    return Centerline(arr[:, :2], arr[:, 2], arr[:, 3], closed=closed)


# ---------------------------------------------------------------------------
# Centerline extraction from the occupancy grid


_NEIGHBORS8 = [(-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1)]


def _neighbor_counts(skel: np.ndarray) -> np.ndarray:
    padded = np.pad(skel.astype(np.int32), 1)
    counts = np.zeros_like(padded)
    for dy, dx in _NEIGHBORS8:
        counts += np.roll(np.roll(padded, dy, axis=0), dx, axis=1)
    return counts[1:-1, 1:-1]


def _prune_skeleton(skel: np.ndarray, max_rounds: int | None) -> np.ndarray:
    """Strip spur branches by repeatedly removing endpoint pixels."""
    skel = skel.copy()
    rounds = 0
    while True:
        endpoints = skel & (_neighbor_counts(skel) <= 1)
        if not endpoints.any():
            return skel
        skel &= ~endpoints
        rounds += 1
        if max_rounds is not None and rounds >= max_rounds:
            return skel


def _trace_pixels(pixels: set, closed: bool) -> list:
    """Order skeleton pixels into a path by greedy direction-following."""
    if closed:
        start = min(pixels)
    else:
        by_degree = sorted(
            pixels,
            key=lambda p: sum((p[0] + dy, p[1] + dx) in pixels for dy, dx in _NEIGHBORS8),
        )
        start = by_degree[0]
    path = [start]
    visited = {start}
    direction = None
    current = start
    while True:
        options = []
        for dy, dx in _NEIGHBORS8:
            cand = (current[0] + dy, current[1] + dx)
            if cand in pixels and cand not in visited:
                norm = math.hypot(dy, dx)
                options.append(((dy / norm, dx / norm), cand))
        if not options:
            break
        if direction is None:
            step, current = options[0]
        else:
            step, current = max(
                options, key=lambda o: o[0][0] * direction[0] + o[0][1] * direction[1])
        direction = step
        path.append(current)
        visited.add(current)
    if len(visited) < 0.8 * len(pixels):
        raise CenterlineError("could not trace a single centerline path through the map")
    if closed:
        dy = path[-1][0] - start[0]
        dx = path[-1][1] - start[1]
        if max(abs(dy), abs(dx)) > 2:
            raise CenterlineError("centerline loop does not close; is the track open?")
    return path


def measure_widths(track_map: TrackMap, points: np.ndarray, headings: np.ndarray,
                   side: int, max_width: float = 8.0) -> np.ndarray:
    """Distances from points to the wall along their left (+1)/right (-1) normals."""
    angles = headings + side * math.pi / 2.0
    dir_x = np.cos(angles)
    dir_y = np.sin(angles)
    step = track_map.resolution / 8.0
    r = np.arange(1, int(max_width / step) + 1) * step
    px = points[:, 0, None] + r[None, :] * dir_x[:, None]
    py = points[:, 1, None] + r[None, :] * dir_y[:, None]
    occ = track_map.occupied_at_many(px, py)
    hit = occ.any(axis=1)
    first = occ.argmax(axis=1)
    widths = np.where(hit, r[first] - step / 2.0, max_width)
    return widths


def _path_headings(points: np.ndarray, closed: bool) -> np.ndarray:
    """Tangent headings from central differences of the polyline."""
    if closed:
        d = np.roll(points, -1, axis=0) - np.roll(points, 1, axis=0)
    else:
        d = np.empty_like(points)
        d[1:-1] = points[2:] - points[:-2]
        d[0] = points[1] - points[0]
        d[-1] = points[-1] - points[-2]
    return np.arctan2(d[:, 1], d[:, 0])


def _recentre(track_map: TrackMap, points: np.ndarray, closed: bool, spacing: float,
              iterations: int = 3) -> np.ndarray:
    """Nudge ridge points sideways until both walls are equidistant."""
    sigma = 3.0 * track_map.resolution
    for _ in range(iterations):
        headings = _path_headings(points, closed)
        wl = measure_widths(track_map, points, headings, +1)
        wr = measure_widths(track_map, points, headings, -1)
        shift = np.clip(0.5 * (wl - wr), -0.25, 0.25)
        normals = np.column_stack([-np.sin(headings), np.cos(headings)])
        points = points + shift[:, None] * normals
        points = smooth_resample_polyline(points, closed, spacing, sigma)
    return points


def _polyline_length(points: np.ndarray, closed: bool) -> float:
    d = np.diff(points, axis=0)
    total = float(np.hypot(d[:, 0], d[:, 1]).sum())
    if closed:
        total += float(np.hypot(*(points[0] - points[-1])))
    return total


def _resample_polyline(points: np.ndarray, closed: bool, spacing: float) -> np.ndarray:
    """Uniform arc-length resampling by linear interpolation."""
    pts = np.vstack([points, points[:1]]) if closed else points
    seg = np.hypot(*np.diff(pts, axis=0).T)
    cum = np.concatenate(([0.0], np.cumsum(seg)))
    total = cum[-1]
    if closed:
        n = max(8, int(round(total / spacing)))
        s_new = np.linspace(0.0, total, n, endpoint=False)
    else:
        n = max(2, int(round(total / spacing)) + 1)
        s_new = np.linspace(0.0, total, n)
    x = np.interp(s_new, cum, pts[:, 0])
    y = np.interp(s_new, cum, pts[:, 1])
    return np.column_stack([x, y])


def smooth_resample_polyline(points: np.ndarray, closed: bool, spacing: float,
                             smooth_sigma: float) -> np.ndarray:
    """Gaussian low-pass over arc length followed by uniform resampling.

    A predictable alternative to smoothing splines: resample finely, blur
    x(s) and y(s) with a Gaussian of the given arc-length sigma (circular
    for closed curves), then resample at the requested spacing.
    """
    fine = min(spacing, max(smooth_sigma / 4.0, 1e-3))
    dense = _resample_polyline(points, closed, fine)
    if smooth_sigma > 0:
        mode = "wrap" if closed else "nearest"
        dense = ndimage.gaussian_filter1d(dense, sigma=smooth_sigma / fine,
                                          axis=0, mode=mode)
    return _resample_polyline(dense, closed, spacing)


def extract_centerline(track_map: TrackMap, closed: bool = True,
                       spacing: float = 0.2) -> Centerline:
    """Extract the track centerline as the ridge of the free-space skeleton.

    The free space is skeletonized, spur branches pruned, the remaining
    loop (or path, for open corridors) traced into an ordered polyline,
    smoothed with a spline and resampled at ``spacing`` meters.  Widths on
    each side are measured along the local normals against the grid.
    Closed centerlines are oriented counter-clockwise.
    """
    free = ~track_map.grid
    _, n_free = ndimage.label(free, structure=np.ones((3, 3)))
    if n_free != 1:
        raise CenterlineError(f"free space must be a single region, found {n_free}")
    skel = skeletonize(free)
    if closed:
        skel = _prune_skeleton(skel, max_rounds=None)
    else:
        skel = _prune_skeleton(skel, max_rounds=max(2, int(0.5 / track_map.resolution)))
    if not skel.any():
        raise CenterlineError("skeleton vanished during pruning; no closed loop in the map")

    labels, n_comp = ndimage.label(skel, structure=np.ones((3, 3)))
    if n_comp > 1:
        sizes = ndimage.sum_labels(skel, labels, index=np.arange(1, n_comp + 1))
        skel = labels == (1 + int(np.argmax(sizes)))
    pixels = {(int(iy), int(ix)) for iy, ix in np.argwhere(skel)}
    path = _trace_pixels(pixels, closed)
    raw = np.array([track_map.grid_to_world(ix + 0.5, iy + 0.5) for iy, ix in path])

    if closed and _polyline_length(raw, closed=True) < MIN_LOOP_LENGTH:
        raise CenterlineError("centerline loop shorter than 10 m")

    points = smooth_resample_polyline(raw, closed, spacing, 3.0 * track_map.resolution)
    points = _recentre(track_map, points, closed, spacing)

    if closed:
        x, y = points[:, 0], points[:, 1]
        area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
        if area < 0:
            points = points[::-1]

    headings = _path_headings(points, closed)
    width_left = measure_widths(track_map, points, headings, +1)
    width_right = measure_widths(track_map, points, headings, -1)
    return Centerline(points, width_left, width_right, closed=closed)
