"""Walls, tables and floating boxes stamped into a voxel world."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from ..core import VoxelWorld
from .wfc import WorldGenError

CLEARANCE_RANGE = (0.18, 0.45)
MAX_CONSECUTIVE_REJECTIONS = 200


class ObstacleKind(str, Enum):
    WALL = "Wall"
    TABLE = "Table"
    FLOATING_BOX = "FloatingBox"


@dataclass(frozen=True)
class ObstacleSpec:
    """Axis-aligned obstacle. ``height`` is the wall height or slab/box thickness."""

    kind: ObstacleKind
    xmin: float
    ymin: float
    xmax: float
    ymax: float
    height: float
    clearance: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ObstacleSpec:
        return cls(ObstacleKind(d["kind"]), *(float(d[k]) for k in ("xmin", "ymin", "xmax", "ymax", "height")),
                   float(d.get("clearance", 0.0)))


def clearance_levels(world: VoxelWorld, lo: float = CLEARANCE_RANGE[0], hi: float = CLEARANCE_RANGE[1]):
    """Slab clearances representable on the lattice above level ground, within [lo, hi]."""
    res = world.resolution
    oz = world.origin[2]
    first = oz + res  # bottom of the first non-terrain voxel above ground 0
    vals = [round(first + k * res, 6) for k in range(int(hi / res) + 2)]
    return [v for v in vals if lo - 1e-9 <= v <= hi + 1e-9]


def _footprint(world: VoxelWorld, o: ObstacleSpec):
    res = world.resolution
    ox, oy, _ = world.origin
    nx, ny, _ = world.dims
    i0 = max(int(np.floor((o.xmin - ox) / res + 1e-9)), 0)
    j0 = max(int(np.floor((o.ymin - oy) / res + 1e-9)), 0)
    i1 = min(int(np.ceil((o.xmax - ox) / res - 1e-9)), nx)
    j1 = min(int(np.ceil((o.ymax - oy) / res - 1e-9)), ny)
    return i0, i1, j0, j1


def stamp(world: VoxelWorld, o: ObstacleSpec) -> VoxelWorld:
    """Return a copy of ``world`` with the obstacle's voxels set."""
    occ = world.occupancy.copy()
    stamp_into(occ, world, o)
    return world.with_occupancy(occ)


def stamp_into(occ: np.ndarray, world: VoxelWorld, o: ObstacleSpec) -> None:
    res = world.resolution
    oz = world.origin[2]
    nz = world.dims[2]
    i0, i1, j0, j1 = _footprint(world, o)
    if i1 <= i0 or j1 <= j0:
        return
    g = world.ground_cells[i0:i1, j0:j1]
    if o.kind is ObstacleKind.WALL:
        base = world.ground_elevation[i0:i1, j0:j1].max()
        top = int(round((base + o.height - oz) / res))
        k = np.arange(nz)[None, None, :]
        occ[i0:i1, j0:j1, :] |= (k >= g[:, :, None]) & (k < min(top, nz))
        return
    base = world.ground_elevation[i0:i1, j0:j1].max()
    k0 = int(round((base + o.clearance - oz) / res))
    k1 = min(k0 + max(int(round(o.height / res)), 1), nz)
    occ[i0:i1, j0:j1, k0:k1] = True
    if o.kind is ObstacleKind.TABLE:
        # one-cell legs at the four corners
        for i in (i0, i1 - 1):
            for j in (j0, j1 - 1):
                occ[i, j, world.ground_cells[i, j]:k0] = True


def stamp_all(world: VoxelWorld, obstacles) -> VoxelWorld:
    occ = world.occupancy.copy()
    for o in obstacles:
        stamp_into(occ, world, o)
    return world.with_occupancy(occ)


def realized_clearance(world: VoxelWorld, o: ObstacleSpec) -> float:
    """Free height under the slab above the footprint's highest ground."""
    i0, i1, j0, j1 = _footprint(world, o)
    base = world.ground_elevation[i0:i1, j0:j1].max()
    k0 = int(round((base + o.clearance - world.origin[2]) / world.resolution))
    return world.origin[2] + k0 * world.resolution - base


# ----------------------------------------------------------------------------
# random placement


def sample_obstacle(kind: ObstacleKind, world: VoxelWorld, rng: np.random.Generator) -> ObstacleSpec:
    xmin_w, xmax_w, ymin_w, ymax_w = world.bounds
    res = world.resolution

    def snap(v):
        return round(round(v / res) * res, 6)

    if kind is ObstacleKind.WALL:
        length = rng.uniform(1.5, 4.0)
        thick = 0.2
        horizontal = rng.random() < 0.5
        w, d = (length, thick) if horizontal else (thick, length)
        height = snap(rng.uniform(1.0, 1.5))
        clearance = 0.0
    elif kind is ObstacleKind.TABLE:
        w, d = rng.uniform(1.0, 2.0), rng.uniform(0.6, 1.2)
        if rng.random() < 0.5:
            w, d = d, w
        height = 0.1
        clearance = float(rng.choice(clearance_levels(world)))
    else:
        w, d = rng.uniform(0.6, 1.5), rng.uniform(0.6, 1.5)
        height = snap(rng.uniform(0.3, 0.6))
        clearance = float(rng.choice(clearance_levels(world)))
    w, d = min(w, xmax_w - xmin_w), min(d, ymax_w - ymin_w)
    x = rng.uniform(xmin_w, xmax_w - w)
    y = rng.uniform(ymin_w, ymax_w - d)
    return ObstacleSpec(kind, snap(x), snap(y), snap(x + w), snap(y + d), height, clearance)


def place_obstacles(world: VoxelWorld, counts: dict, rng: np.random.Generator,
                    keep_connected=None, keep_clear=()) -> tuple[VoxelWorld, list[ObstacleSpec]]:
    """Rejection-sample obstacles into ``world``.

    ``counts`` maps each :class:`ObstacleKind` to the number to place.
    ``keep_connected(world) -> bool`` vetoes placements that disconnect the
    spawn regions; ``keep_clear`` lists ``(x, y, radius)`` discs that no
    obstacle footprint may touch. Raises :class:`WorldGenError` after
    ``MAX_CONSECUTIVE_REJECTIONS`` consecutive rejections.
    """
    placed: list[ObstacleSpec] = []
    for kind in ObstacleKind:
        for _ in range(int(counts.get(kind, 0))):
            for attempt in range(MAX_CONSECUTIVE_REJECTIONS):
                o = sample_obstacle(kind, world, rng)
                if any(_disc_hits(o, c) for c in keep_clear):
                    continue
                candidate = stamp(world, o)
                if keep_connected is not None and not keep_connected(candidate):
                    continue
                world = candidate
                placed.append(o)
                break
            else:
                raise WorldGenError(
                    f"could not place {kind.value} #{len(placed) + 1}: "
                    f"{MAX_CONSECUTIVE_REJECTIONS} consecutive rejections")
    return world, placed


def _disc_hits(o: ObstacleSpec, disc) -> bool:
    x, y, r = disc
    cx = min(max(x, o.xmin), o.xmax)
    cy = min(max(y, o.ymin), o.ymax)
    return (cx - x) ** 2 + (cy - y) ** 2 < r * r
