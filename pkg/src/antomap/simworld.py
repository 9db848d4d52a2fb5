"""Deterministic 2-D sonar simulator.

Environments are flat lists of wall segments with a material flag; sonar
readings are produced by a fan of rays across each transducer's aperture.
Smooth (specular) walls at grazing incidence either lose the echo or return
it after one bounce (a rebound, longer than the true distance); detectable
hits at the cone edge can undercut the axis distance (a short echo). Every
reading is tagged with its ground-truth class in a sidecar channel that the
mappers never see.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, Pose, ScalarGrid, SensorRing, TraceRecord, normalize_angle

MATERIALS = ("specular", "diffuse")

TAG_CLEAN = "clean"
TAG_REBOUND = "rebound"
TAG_SHORT_ECHO = "short-echo"
TAG_MAX_RANGE = "max-range"


@dataclass(frozen=True)
class WallSegment:
    x1: float
    y1: float
    x2: float
    y2: float
    material: str = "specular"

    def __post_init__(self):
        if self.material not in MATERIALS:
            raise ValueError(f"unknown material {self.material!r}")
        if self.length == 0.0:
            raise ValueError("degenerate wall segment")

    @property
    def length(self) -> float:
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)


@dataclass
class Environment:
    """Wall segments plus the free-space region used for reference maps.

    ``free_outer`` is the polygon of navigable space; ``free_holes`` are
    obstacle footprints carved out of it. Both default to the bounds box.
    """

    name: str
    walls: list[WallSegment]
    bounds: tuple[float, float, float, float]     # xmin, ymin, xmax, ymax
    free_outer: list[tuple[float, float]] | None = None
    free_holes: list[list[tuple[float, float]]] = field(default_factory=list)

    def __post_init__(self):
        xmin, ymin, xmax, ymax = self.bounds
        for w in self.walls:
            if not (xmin <= w.x1 <= xmax and xmin <= w.x2 <= xmax
                    and ymin <= w.y1 <= ymax and ymin <= w.y2 <= ymax):
                raise ValueError("wall outside environment bounds")
        if self.free_outer is None:
            self.free_outer = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)]

    def contains(self, x: float, y: float) -> bool:
        xmin, ymin, xmax, ymax = self.bounds
        return xmin <= x <= xmax and ymin <= y <= ymax

    def grid_spec(self, cell_size: float) -> GridSpec:
        xmin, ymin, xmax, ymax = self.bounds
        return GridSpec.from_bounds(xmin, ymin, xmax, ymax, cell_size)


@dataclass(frozen=True)
class SonarNoise:
    """Noise/artifact model of the simulated transducers."""

    quantization: float = 4.0      # cm range resolution
    range_sigma: float = 2.0       # cm additive noise
    rebound_max_prob: float = 0.6  # rebound probability at fully grazing incidence
    short_echo: bool = True        # cone-edge (side lobe) detection enabled
    max_range: float = 600.0
    seed: int = 0
    n_rays: int = 9
    people_rate: float = 0.0       # fraction of records with a transient obstacle

    def __post_init__(self):
        if self.quantization <= 0:
            raise ValueError("quantization must be > 0")
        if not 0.0 <= self.rebound_max_prob <= 1.0:
            raise ValueError("rebound_max_prob must be in [0, 1]")
        if not 0.0 <= self.people_rate <= 1.0:
            raise ValueError("people_rate must be in [0, 1]")
        if self.n_rays < 1 or self.n_rays % 2 == 0:
            raise ValueError("n_rays must be odd (a central ray is required)")
        if self.range_sigma < 0 or self.max_range <= 0:
            raise ValueError("range_sigma >= 0 and max_range > 0 required")


_JITTER_XY_LIMIT = 25.0
_JITTER_HEADING_LIMIT = math.radians(15.0)


@dataclass(frozen=True)
class Trajectory:
    """Waypoint polyline sampled every ``step`` cm, with bounded pose jitter.

    The jitter models the difference between the recorded (odometric) pose
    and the true one: readings are cast from the true pose, the record keeps
    the jittered pose.
    """

    waypoints: tuple[tuple[float, float], ...]
    step: float = 50.0
    jitter_xy: float = 10.0                       # cm, radial bound
    jitter_heading: float = math.radians(5.0)     # rad

    def __post_init__(self):
        object.__setattr__(self, "waypoints",
                           tuple((float(x), float(y)) for x, y in self.waypoints))
        if not self.waypoints:
            raise ValueError("trajectory needs at least one waypoint")
        if self.step <= 0:
            raise ValueError("step must be > 0")
        if self.jitter_xy < 0 or self.jitter_xy > _JITTER_XY_LIMIT:
            raise ValueError(f"jitter_xy must be in [0, {_JITTER_XY_LIMIT}] cm")
        if self.jitter_heading < 0 or self.jitter_heading > _JITTER_HEADING_LIMIT:
            raise ValueError("jitter_heading must be in [0, 15 degrees]")

    def path_length(self) -> float:
        pts = self.waypoints
        return sum(math.hypot(pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])
                   for i in range(len(pts) - 1))

    def sample_poses(self) -> list[Pose]:
        """True poses every ``step`` cm along the polyline, heading along it."""
        pts = self.waypoints
        segs = []
        for i in range(len(pts) - 1):
            dx = pts[i + 1][0] - pts[i][0]
            dy = pts[i + 1][1] - pts[i][1]
            length = math.hypot(dx, dy)
            if length > 0:
                segs.append((pts[i][0], pts[i][1], dx, dy, length,
                             math.atan2(dy, dx)))
        if not segs:
            return [Pose(pts[0][0], pts[0][1], 0.0)]
        total = sum(s[4] for s in segs)
        count = int(math.floor(total / self.step)) + 1
        poses = []
        for n in range(count):
            s = n * self.step
            acc = 0.0
            px, py, dx, dy, length, heading = segs[-1]
            t = 1.0
            for seg in segs:
                if s <= acc + seg[4]:
                    px, py, dx, dy, length, heading = seg
                    t = (s - acc) / length
                    break
                acc += seg[4]
            poses.append(Pose(px + t * dx, py + t * dy, heading))
        return poses


# ---------------------------------------------------------------------------
# Ray casting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Hit:
    t: float             # distance along the ray, cm
    incidence: float     # rad from the surface normal: 0 head-on, pi/2 grazing
    specular: bool
    px: float
    py: float
    nx: float            # unit normal facing the ray
    ny: float


def _wall_arrays(walls: list[WallSegment]) -> dict:
    n = len(walls)
    a = {
        "x1": np.empty(n), "y1": np.empty(n),
        "ex": np.empty(n), "ey": np.empty(n),
        "nx": np.empty(n), "ny": np.empty(n),
        "specular": np.empty(n, dtype=bool),
    }
    for i, w in enumerate(walls):
        ex = w.x2 - w.x1
        ey = w.y2 - w.y1
        length = math.hypot(ex, ey)
        a["x1"][i] = w.x1
        a["y1"][i] = w.y1
        a["ex"][i] = ex
        a["ey"][i] = ey
        a["nx"][i] = -ey / length
        a["ny"][i] = ex / length
        a["specular"][i] = w.material == "specular"
    return a


def _ray_hit(arr: dict, ox: float, oy: float, dx: float, dy: float,
             max_range: float):
    """Nearest wall hit of one ray, or None."""
    qx = arr["x1"] - ox
    qy = arr["y1"] - oy
    denom = dx * arr["ey"] - dy * arr["ex"]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qx * arr["ey"] - qy * arr["ex"]) / denom
        u = (qx * dy - qy * dx) / denom
    ok = (np.abs(denom) > 1e-12) & (t > 1e-9) & (u >= 0.0) & (u <= 1.0) \
        & (t <= max_range)
    if not ok.any():
        return None
    i = int(np.argmin(np.where(ok, t, np.inf)))
    ti = float(t[i])
    nx = float(arr["nx"][i])
    ny = float(arr["ny"][i])
    if dx * nx + dy * ny > 0:          # make the normal face the ray
        nx, ny = -nx, -ny
    cos_inc = min(1.0, abs(dx * nx + dy * ny))
    return _Hit(ti, math.acos(cos_inc), bool(arr["specular"][i]),
                ox + ti * dx, oy + ti * dy, nx, ny)


def cast_sonar(env: Environment, pose: Pose, sensor_index: int,
               ring: SensorRing, noise: SonarNoise, rng,
               walls_cache: dict | None = None) -> tuple[float, str]:
    """One simulated reading and its ground-truth tag.

    A fan of ``noise.n_rays`` rays spans the main lobe (+- aperture/2); the
    nominal reading is the shortest detectable hit among the active rays (the
    whole fan with side-lobe detection on, only the central rays with it
    off), so an edge-of-cone hit can undercut the axis distance (a short
    echo). Hits on smooth walls beyond grazing incidence (half the aperture
    on specular material) are unreliable: one draw per pulse sets how much
    grazing this pulse tolerates, with loss probability growing toward
    ``rebound_max_prob`` at fully grazing incidence. If every hit of the
    pulse is lost, the echo may still come back over a one-bounce specular
    path (a rebound, longer than the true distance) or saturate at
    max_range. Gaussian noise and the range quantization are applied last.
    """
    if not env.contains(pose.x, pose.y):
        raise ValueError(f"pose ({pose.x}, {pose.y}) outside environment bounds")
    arr = walls_cache if walls_cache is not None else _wall_arrays(env.walls)
    axis = pose.heading + ring.bearing_offset(sensor_index)
    half_ap = ring.aperture / 2.0
    grazing_span = math.pi / 2.0 - half_ap
    n = noise.n_rays
    central = n // 2
    if n == 1:
        offsets = [0.0]
    else:
        offsets = [-half_ap + i * (2.0 * half_ap) / (n - 1) for i in range(n)]

    hits: list[_Hit | None] = []
    for off in offsets:
        ang = axis + off
        hits.append(_ray_hit(arr, pose.x, pose.y, math.cos(ang), math.sin(ang),
                             noise.max_range))
    axis_hit = hits[central]
    axis_true = axis_hit.t if axis_hit is not None else noise.max_range

    if noise.short_echo:
        candidates = range(n)
    else:
        candidates = range(max(0, central - 1), min(n, central + 2))

    # one draw per pulse: rays whose grazing-loss probability exceeds the
    # drawn tolerance lose their echo (the whole wavefront fails together)
    loss_tolerance = 1.0 - rng.random() if noise.rebound_max_prob > 0.0 else 1.1

    best: _Hit | None = None
    best_i = central
    grazing: _Hit | None = None
    grazing_i = central
    for i in candidates:
        h = hits[i]
        if h is None:
            continue
        if h.specular and h.incidence > half_ap:
            frac = min(1.0, (h.incidence - half_ap) / grazing_span)
            if noise.rebound_max_prob * frac >= loss_tolerance:
                if grazing is None or h.t < grazing.t:
                    grazing = h
                    grazing_i = i
                continue
        if best is None or h.t < best.t:
            best = h
            best_i = i

    mechanism = TAG_CLEAN
    if best is not None:
        nominal = best.t
        if best_i != central and nominal < axis_true - noise.quantization:
            mechanism = TAG_SHORT_ECHO
    else:
        nominal = noise.max_range
        mechanism = TAG_MAX_RANGE
        if grazing is not None:
            ang = axis + offsets[grazing_i]
            dx, dy = math.cos(ang), math.sin(ang)
            dot = dx * grazing.nx + dy * grazing.ny
            rx = dx - 2.0 * dot * grazing.nx
            ry = dy - 2.0 * dot * grazing.ny
            second = _ray_hit(arr, grazing.px, grazing.py, rx, ry,
                              noise.max_range - grazing.t)
            if second is not None:
                nominal = grazing.t + second.t
                mechanism = TAG_REBOUND

    if mechanism != TAG_MAX_RANGE and noise.range_sigma > 0.0:
        nominal += rng.normal(0.0, noise.range_sigma)
    nominal = min(max(nominal, 0.0), noise.max_range)
    reading = round(nominal / noise.quantization) * noise.quantization
    reading = min(reading, noise.max_range)

    if reading >= noise.max_range:
        tag = TAG_MAX_RANGE
    elif mechanism == TAG_REBOUND and reading > axis_true:
        tag = TAG_REBOUND
    elif reading < axis_true and mechanism == TAG_SHORT_ECHO:
        tag = TAG_SHORT_ECHO
    else:
        tag = TAG_CLEAN
    return reading, tag


def _person_obstacle(env: Environment, pose: Pose, rng) -> list[WallSegment]:
    """Transient 30x30 cm diffuse obstacle somewhere ahead of the robot."""
    dist = rng.uniform(100.0, 250.0)
    ang = pose.heading + rng.uniform(-math.pi / 2.0, math.pi / 2.0)
    xmin, ymin, xmax, ymax = env.bounds
    cx = min(max(pose.x + dist * math.cos(ang), xmin + 20.0), xmax - 20.0)
    cy = min(max(pose.y + dist * math.sin(ang), ymin + 20.0), ymax - 20.0)
    h = 15.0
    corners = [(cx - h, cy - h), (cx + h, cy - h), (cx + h, cy + h), (cx - h, cy + h)]
    return [WallSegment(corners[i][0], corners[i][1],
                        corners[(i + 1) % 4][0], corners[(i + 1) % 4][1],
                        "diffuse") for i in range(4)]


def generate_trace_tagged(env: Environment, traj: Trajectory, ring: SensorRing,
                          noise: SonarNoise, seed: int | None = None):
    """(records, tags): the trace plus the per-reading ground-truth sidecar.

    Fully deterministic for a given seed and configuration. Readings are cast
    from the true pose on the polyline; the recorded pose carries the jitter.
    """
    rng = np.random.default_rng(noise.seed if seed is None else seed)
    base_arr = _wall_arrays(env.walls)
    records: list[TraceRecord] = []
    tags: list[tuple[str, ...]] = []
    for i, true_pose in enumerate(traj.sample_poses()):
        arr = base_arr
        if noise.people_rate > 0.0 and rng.random() < noise.people_rate:
            arr = _wall_arrays(env.walls + _person_obstacle(env, true_pose, rng))
        rad = rng.uniform(0.0, traj.jitter_xy)
        ang = rng.uniform(0.0, 2.0 * math.pi)
        dh = rng.uniform(-traj.jitter_heading, traj.jitter_heading)
        recorded = Pose(true_pose.x + rad * math.cos(ang),
                        true_pose.y + rad * math.sin(ang),
                        true_pose.heading + dh)
        ranges = []
        rtags = []
        for k in range(ring.count):
            reading, tag = cast_sonar(env, true_pose, k, ring, noise, rng,
                                      walls_cache=arr)
            ranges.append(reading)
            rtags.append(tag)
        records.append(TraceRecord(recorded, tuple(ranges), i))
        tags.append(tuple(rtags))
    return records, tags


def generate_trace(env: Environment, traj: Trajectory, ring: SensorRing,
                   noise: SonarNoise, seed: int | None = None) -> list[TraceRecord]:
    return generate_trace_tagged(env, traj, ring, noise, seed)[0]


# ---------------------------------------------------------------------------
# Reference maps
# ---------------------------------------------------------------------------

def _segment_distance_grid(xs: np.ndarray, ys: np.ndarray,
                           walls: list[WallSegment]) -> np.ndarray:
    """Min distance from every cell center to any wall segment."""
    px = xs[None, :]
    py = ys[:, None]
    out = np.full((ys.size, xs.size), np.inf)
    for w in walls:
        ex = w.x2 - w.x1
        ey = w.y2 - w.y1
        ll = ex * ex + ey * ey
        t = np.clip(((px - w.x1) * ex + (py - w.y1) * ey) / ll, 0.0, 1.0)
        dx = px - (w.x1 + t * ex)
        dy = py - (w.y1 + t * ey)
        np.minimum(out, np.sqrt(dx * dx + dy * dy), out=out)
    return out


def _points_in_polygon(xs: np.ndarray, ys: np.ndarray,
                       poly: list[tuple[float, float]]) -> np.ndarray:
    """Even-odd point-in-polygon test for the full cell-center lattice."""
    px = xs[None, :]
    py = ys[:, None]
    inside = np.zeros((ys.size, xs.size), dtype=bool)
    n = len(poly)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        crosses = ((y1 > py) != (y2 > py))
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (px < xi)
    return inside


def reference_map(env: Environment, spec: GridSpec,
                  wall_halfwidth: float | None = None) -> ScalarGrid:
    """Ground-truth ternary grid: 1 wall band, -1 free space, 0 outside."""
    if wall_halfwidth is None:
        wall_halfwidth = spec.cell_size
    xs, ys = spec.cell_centers()
    wall = _segment_distance_grid(xs, ys, env.walls) <= wall_halfwidth
    free = _points_in_polygon(xs, ys, env.free_outer)
    for hole in env.free_holes:
        free &= ~_points_in_polygon(xs, ys, hole)
    vals = np.zeros(spec.shape)
    vals[free] = -1.0
    vals[wall] = 1.0
    return ScalarGrid(spec, vals, "ternary")


# ---------------------------------------------------------------------------
# Built-in environments and trajectories
# ---------------------------------------------------------------------------

def _rect_walls(x0, y0, x1, y1, material) -> list[WallSegment]:
    corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    return [WallSegment(corners[i][0], corners[i][1],
                        corners[(i + 1) % 4][0], corners[(i + 1) % 4][1],
                        material if isinstance(material, str) else material[i])
            for i in range(4)]


def _rect(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


def builtin_environment(name: str) -> Environment:
    """The three reference places: office, hall, corridor."""
    if name == "office":
        # 2 x 2.5 m navigable area; polished surfaces except the top line
        walls = _rect_walls(0, 0, 200, 250,
                            ("specular", "specular", "diffuse", "specular"))
        return Environment("office", walls, (-20, -20, 220, 270),
                           free_outer=_rect(0, 0, 200, 250))
    if name == "hall":
        # 6 x 8 m central zone, smooth plastic panels all around
        walls = _rect_walls(0, 0, 600, 800, "specular")
        return Environment("hall", walls, (-20, -20, 620, 820),
                           free_outer=_rect(0, 0, 600, 800))
    if name == "corridor":
        # 10 x 30 m, smooth panels; a colonnade and wall benches occupy the
        # right side
        walls = _rect_walls(0, 0, 1000, 3000, "specular")
        holes = []
        for k in range(10):                            # columns, 50 x 50
            cy = 150.0 + k * 300.0
            rect = (675.0, cy - 25.0, 725.0, cy + 25.0)
            walls += _rect_walls(*rect, "specular")
            holes.append(_rect(*rect))
        for by in (800.0, 1600.0, 2400.0):             # benches, 70 x 250
            rect = (930.0, by, 1000.0, by + 250.0)
            walls += _rect_walls(*rect, "diffuse")
            holes.append(_rect(*rect))
        return Environment("corridor", walls, (-20, -20, 1020, 3020),
                           free_outer=_rect(0, 0, 1000, 3000),
                           free_holes=holes)
    raise ValueError(f"unknown environment {name!r}")


def builtin_trajectory(name: str) -> tuple[tuple[float, float], ...]:
    """Default waypoint set visiting the main zones of each built-in place,
    passing near the walls and corners so they are seen from close and far."""
    if name == "office":
        return ((50, 50), (150, 50), (150, 200), (50, 200), (50, 50),
                (150, 200), (150, 50), (50, 200))
    if name == "hall":
        # perimeter loop, an 8-like figure through the diagonals, center cross
        return ((80, 80), (520, 80), (520, 720), (80, 720), (80, 80),
                (520, 720), (520, 80), (80, 720), (80, 80),
                (300, 80), (300, 720), (520, 400), (80, 400), (80, 80))
    if name == "corridor":
        # serpentine lanes: along the left wall, through the colonnade gap,
        # and between the columns and the benches
        return ((150, 120), (150, 2880), (450, 2880), (450, 120),
                (850, 120), (850, 2880), (150, 2880), (150, 120))
    raise ValueError(f"unknown environment {name!r}")


def load_environment(path: str) -> Environment:
    """Environment from a plain-text segment list: x1 y1 x2 y2 material."""
    walls = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 5:
                raise ValueError(f"{path}:{lineno}: expected 'x1 y1 x2 y2 material'")
            try:
                x1, y1, x2, y2 = (float(v) for v in parts[:4])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad coordinate") from None
            walls.append(WallSegment(x1, y1, x2, y2, parts[4]))
    if not walls:
        raise ValueError(f"{path}: no wall segments")
    xs = [v for w in walls for v in (w.x1, w.x2)]
    ys = [v for w in walls for v in (w.y1, w.y2)]
    pad = 20.0
    bounds = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
    name = path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
    return Environment(name, walls, bounds,
                       free_outer=_rect(min(xs), min(ys), max(xs), max(ys)))
