"""Small hand-built worlds for unit tests."""

from __future__ import annotations

from posturenav.core import VoxelWorld
from posturenav.worldgen.obstacles import ObstacleKind, ObstacleSpec, stamp_all


def flat(width=5.0, depth=5.0, height=2.0) -> VoxelWorld:
    return VoxelWorld.flat(width, depth, height)


def wall(x0, y0, x1, y1, height=1.2) -> ObstacleSpec:
    return ObstacleSpec(ObstacleKind.WALL, x0, y0, x1, y1, height)


def slab(x0, y0, x1, y1, clearance, thickness=0.3) -> ObstacleSpec:
    return ObstacleSpec(ObstacleKind.FLOATING_BOX, x0, y0, x1, y1, thickness, clearance)


def with_obstacles(world: VoxelWorld, *obstacles) -> VoxelWorld:
    return stamp_all(world, obstacles)


def wall_ahead(distance=0.5, width=5.0, depth=5.0) -> VoxelWorld:
    """A full-width wall whose near face is ``distance`` ahead of x = 1.0."""
    x0 = 1.0 + distance
    return with_obstacles(flat(width, depth), wall(x0, 0.0, x0 + 0.2, depth))
