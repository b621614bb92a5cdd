"""World specifications and the benchmark presets."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..core import VoxelWorld, derive_seed, seeded_rng
from ..curriculum.planner import Planner
from .obstacles import ObstacleKind, ObstacleSpec, clearance_levels, place_obstacles, stamp_all
from .raster import rasterize
from .tiles import Tileset, default_tileset, terrain_tileset
from .wfc import WorldGenError, wfc_collapse

MAX_WORLD_RETRIES = 8
WALL_T = 0.2


class Preset(str, Enum):
    CORRIDOR = "Corridor"
    ROOM = "Room"
    COMPLEX1 = "Complex1"
    COMPLEX2 = "Complex2"
    RANDOM = "Random"

    @classmethod
    def parse(cls, name: str) -> Preset:
        key = name.replace("-", "").replace("_", "").lower()
        for p in cls:
            if p.value.lower() == key:
                return p
        raise ValueError(f"unknown preset {name!r}")


# per-kind (min, max) obstacle counts
PRESET_COUNTS = {
    Preset.CORRIDOR: {},
    Preset.ROOM: {ObstacleKind.TABLE: (1, 2), ObstacleKind.FLOATING_BOX: (1, 2)},
    Preset.COMPLEX1: {ObstacleKind.WALL: (10, 12), ObstacleKind.TABLE: (8, 10), ObstacleKind.FLOATING_BOX: (8, 10)},
    Preset.COMPLEX2: {ObstacleKind.WALL: (14, 16), ObstacleKind.TABLE: (12, 14), ObstacleKind.FLOATING_BOX: (12, 14)},
    Preset.RANDOM: {ObstacleKind.WALL: (2, 6), ObstacleKind.TABLE: (2, 6), ObstacleKind.FLOATING_BOX: (2, 6)},
}


@dataclass
class WorldSpec:
    seed: int = 0
    extent: tuple[float, float] = (20.0, 20.0)
    tileset: Tileset = field(default_factory=default_tileset)
    obstacle_counts: dict = field(default_factory=lambda: dict(PRESET_COUNTS[Preset.RANDOM]))
    preset: Preset | None = None
    height: float = 2.0

    def __post_init__(self):
        te = self.tileset.tile_edge
        for v in self.extent:
            if abs(v / te - round(v / te)) > 1e-9:
                raise ValueError(f"extent {self.extent} is not a multiple of tile edge {te}")

    @property
    def tile_shape(self) -> tuple[int, int]:
        te = self.tileset.tile_edge
        return int(round(self.extent[0] / te)), int(round(self.extent[1] / te))


# ----------------------------------------------------------------------------
# hand-structured layouts


def _hwall(x0, x1, y, h=1.2):
    return ObstacleSpec(ObstacleKind.WALL, round(x0, 6), round(y - WALL_T / 2, 6), round(x1, 6),
                        round(y + WALL_T / 2, 6), h)


def _vwall(x, y0, y1, h=1.2):
    return ObstacleSpec(ObstacleKind.WALL, round(x - WALL_T / 2, 6), round(y0, 6), round(x + WALL_T / 2, 6),
                        round(y1, 6), h)


def _snap(v, res=0.1):
    return round(round(v / res) * res, 6)


def corridor_layout(extent, rng):
    """Staggered free-standing walls across the direct route.

    The middle wall carries a dead-end alcove opening toward the start,
    straddling the straight start-goal line.
    """
    W, D = extent
    walls = []
    for k in (1, 2, 3):
        y = _snap(D * k / 4 + rng.uniform(-0.8, 0.8))
        c = W / 2 + rng.uniform(-2.5, 2.5)
        L = rng.uniform(9.0, 13.0)
        x0, x1 = _snap(max(c - L / 2, 1.5)), _snap(min(c + L / 2, W - 1.5))
        walls.append(_hwall(x0, x1, y))
        if k == 2:
            ax = _snap(W / 2 + rng.uniform(-0.6, 0.6))
            depth = _snap(rng.uniform(2.0, 3.0))
            walls.append(_vwall(ax - 1.0, y - depth, y))
            walls.append(_vwall(ax + 1.0, y - depth, y))
    start = (W / 2, 1.5)
    goal = (W / 2, D - 1.5)
    return walls, start, goal


def room_layout(extent, rng, world: VoxelWorld):
    """A one-exit chamber in a random corner plus a central overhang slab."""
    W, D = extent
    obs = []
    size = _snap(rng.uniform(5.5, 6.5))
    corner = int(rng.integers(4))
    cx0 = 1.5 if corner in (0, 3) else W - 1.5 - size
    cy0 = 1.5 if corner in (0, 1) else D - 1.5 - size
    cx1, cy1 = cx0 + size, cy0 + size
    # exit faces away from the map centre
    exit_side = ("S" if cy0 < D / 2 else "N") if rng.random() < 0.5 else ("W" if cx0 < W / 2 else "E")
    gap = 1.6
    mid = _snap((cx0 + cx1) / 2 if exit_side in "NS" else (cy0 + cy1) / 2)
    for s, (a0, a1, fixed, horiz) in {
        "S": (cx0, cx1, cy0, True), "N": (cx0, cx1, cy1, True),
        "W": (cy0, cy1, cx0, False), "E": (cy0, cy1, cx1, False),
    }.items():
        a0e, a1e = a0 - WALL_T / 2, a1 + WALL_T / 2
        spans = [(a0e, mid - gap / 2), (mid + gap / 2, a1e)] if s == exit_side else [(a0e, a1e)]
        for lo, hi in spans:
            obs.append(_hwall(lo, hi, fixed) if horiz else _vwall(fixed, lo, hi))
    # central overhang: long slab across the middle of the map
    long_, short = _snap(rng.uniform(8.0, 10.0)), _snap(rng.uniform(2.5, 3.5))
    w, d = (long_, short) if rng.random() < 0.5 else (short, long_)
    clearance = float(rng.choice([c for c in clearance_levels(world) if c < 0.4]))
    x0, y0 = _snap(W / 2 - w / 2), _snap(D / 2 - d / 2)
    obs.append(ObstacleSpec(ObstacleKind.FLOATING_BOX, x0, y0, _snap(x0 + w), _snap(y0 + d), 0.3, clearance))
    start = ((cx0 + cx1) / 2, (cy0 + cy1) / 2)
    goal = (W - start[0], D - start[1])
    return obs, start, goal, (cx0, cy0, cx1, cy1)


# ----------------------------------------------------------------------------
# generation


def _spawn_near(planner: Planner, target, label_mask=None):
    """Free (nominal posture) cell centre closest to ``target``."""
    free = planner.free_space(allow_posture=False)
    if label_mask is not None:
        free = free & label_mask
    idx = np.argwhere(free)
    if len(idx) == 0:
        return None
    x, y = planner.world.cell_center(idx[:, 0], idx[:, 1])
    k = int(np.argmin((x - target[0]) ** 2 + (y - target[1]) ** 2))
    return float(round(x[k], 6)), float(round(y[k], 6))


def _counts(spec_counts: dict, rng) -> dict:
    out = {}
    for kind in ObstacleKind:
        lo, hi = spec_counts.get(kind, (0, 0))
        out[kind] = int(rng.integers(lo, hi + 1))
    return out


def _generate_once(spec: WorldSpec, seed: int) -> VoxelWorld:
    preset = spec.preset or Preset.RANDOM
    rng = seeded_rng(seed, "layout")
    tileset = spec.tileset
    if preset in (Preset.CORRIDOR, Preset.ROOM):
        tileset = terrain_tileset(tileset.tile_edge, tileset.resolution)
    grid = wfc_collapse(tileset, spec.tile_shape, derive_seed(seed, "wfc"))
    world = rasterize(grid, tileset, spec.height)
    structures: list[ObstacleSpec] = []
    room_box = None
    if preset is Preset.CORRIDOR:
        structures, start, goal = corridor_layout(spec.extent, rng)
    elif preset is Preset.ROOM:
        structures, start, goal, room_box = room_layout(spec.extent, rng, world)
    world = stamp_all(world, structures)
    planner = Planner(world)
    if preset in (Preset.CORRIDOR, Preset.ROOM):
        start, goal = _spawn_near(planner, start), _spawn_near(planner, goal)
    else:
        W, D = spec.extent
        lab = planner.components(allow_posture=True)
        sizes = np.bincount(lab.ravel())
        sizes[0] = 0
        if sizes.max() == 0:
            raise WorldGenError("no free space after rasterization")
        big = lab == int(np.argmax(sizes))
        start = _spawn_near(planner, (2.0, 2.0), big)
        goal = _spawn_near(planner, (W - 2.0, D - 2.0), big)
    if start is None or goal is None:
        raise WorldGenError("no free spawn cell")

    def keep_connected(candidate: VoxelWorld) -> bool:
        p = Planner(candidate)
        return p.connected(start, goal, allow_posture=True) and p.is_free(start, False) and p.is_free(goal, False)

    counts = _counts(spec.obstacle_counts, seeded_rng(seed, "counts"))
    world, placed = place_obstacles(world, counts, seeded_rng(seed, "obstacles"), keep_connected,
                                    keep_clear=((*start, 0.8), (*goal, 0.8)))
    planner = Planner(world)
    # verified with the planner before returning
    planner.plan(start, goal, allow_posture=True)
    meta = {
        "preset": preset.value,
        "seed": int(spec.seed),
        "attempt_seed": int(seed),
        "structures": [o.to_dict() for o in structures],
        "obstacles": [o.to_dict() for o in placed],
        "canonical_start": list(start),
        "canonical_goal": list(goal),
        "tile_grid": grid.tolist(),
    }
    if room_box is not None:
        meta["room_box"] = [float(v) for v in room_box]
    return VoxelWorld(world.occupancy, world.ground_elevation, world.resolution, world.origin, meta)


def generate_world(spec: WorldSpec) -> VoxelWorld:
    """WFC terrain, preset structures and random obstacles, connectivity-verified.

    Failed attempts are retried with derived seeds.
    """
    last = None
    for r in range(MAX_WORLD_RETRIES):
        seed = derive_seed(spec.seed, (spec.preset or Preset.RANDOM).value, r)
        try:
            return _generate_once(spec, seed)
        except (WorldGenError, RuntimeError) as e:
            last = e
    raise WorldGenError(f"world generation failed after {MAX_WORLD_RETRIES} attempts: {last}")


def preset_spec(preset: Preset | str, seed: int) -> WorldSpec:
    preset = Preset.parse(preset) if isinstance(preset, str) else preset
    return WorldSpec(seed=seed, preset=preset, obstacle_counts=dict(PRESET_COUNTS[preset]))


def preset_world(preset: Preset | str, seed: int) -> VoxelWorld:
    return generate_world(preset_spec(preset, seed))
