"""Body box geometry and box-vs-voxel collision."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import NOMINAL_H, Pose, VoxelWorld

_EPS = 1e-9


@dataclass(frozen=True)
class BodyGeometry:
    length: float = 0.60
    width: float = 0.30
    thickness: float = 0.12
    nominal_h: float = NOMINAL_H

    def __post_init__(self):
        if min(self.length, self.width, self.thickness, self.nominal_h) <= 0:
            raise ValueError("body dimensions must be positive")

    @property
    def half_extents(self) -> np.ndarray:
        return np.array([self.length, self.width, self.thickness]) / 2


def body_rotation(yaw: float, roll: float) -> np.ndarray:
    """Body-to-world rotation: yaw about z, then roll about the body x axis."""
    cy, sy = math.cos(yaw), math.sin(yaw)
    cr, sr = math.cos(roll), math.sin(roll)
    rz = np.array([[cy, -sy, 0.0], [sy, cy, 0.0], [0.0, 0.0, 1.0]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cr, -sr], [0.0, sr, cr]])
    return rz @ rx


def body_center(world: VoxelWorld, pose: Pose, h: float) -> np.ndarray:
    return np.array([pose.x, pose.y, world.ground_at(pose.x, pose.y) + h])


def _candidate_voxels(world: VoxelWorld, center: np.ndarray, R: np.ndarray, half: np.ndarray):
    """Centres of obstacle voxels whose cells meet the box's axis-aligned hull."""
    reach = np.abs(R) @ half
    lo = center - reach
    hi = center + reach
    o = np.asarray(world.origin)
    res = world.resolution
    i0 = np.maximum(np.floor((lo - o) / res + _EPS).astype(int), 0)
    i1 = np.minimum(np.ceil((hi - o) / res - _EPS).astype(int), world.dims)
    if (i1 <= i0).any():
        return np.empty((0, 3))
    sub = world.obstacles[i0[0]:i1[0], i0[1]:i1[1], i0[2]:i1[2]]
    idx = np.argwhere(sub)
    if len(idx) == 0:
        return np.empty((0, 3))
    return o + (idx + i0 + 0.5) * res


def _sat_axes(R: np.ndarray) -> np.ndarray:
    """Face normals of both boxes plus the non-degenerate edge cross products."""
    ax, ay, az = R  # rows: world components of the three body axes
    zero = np.zeros(3)
    # body axis a crossed with world x, y, z
    cross = np.concatenate([
        np.stack([zero, az, -ay], axis=1),
        np.stack([-az, zero, ax], axis=1),
        np.stack([ay, -ax, zero], axis=1),
    ])
    n = np.sqrt((cross * cross).sum(axis=1))
    keep = n > 1e-9
    return np.concatenate([R.T, np.eye(3), cross[keep] / n[keep, None]])


def box_hits_voxels(center: np.ndarray, R: np.ndarray, half: np.ndarray, voxels: np.ndarray,
                    voxel_half: float) -> bool:
    """Separating-axis test of one oriented box against many axis-aligned cubes.

    Boxes that only touch are not in collision.
    """
    if len(voxels) == 0:
        return False
    L = _sat_axes(R)  # (A, 3)
    ra = np.abs(L @ R) @ half  # (A,)
    rb = voxel_half * np.abs(L).sum(axis=1)
    proj = np.abs((voxels - center) @ L.T)  # (N, A)
    overlap = (proj < ra + rb - _EPS).all(axis=1)
    return bool(overlap.any())


def check_collision(world: VoxelWorld, pose: Pose, h: float, roll: float,
                    geom: BodyGeometry = BodyGeometry(), inflate: float = 0.0) -> bool:
    """True iff the body box overlaps an occupied voxel above local ground.

    The box is centred at ``(x, y, ground + h)`` and rotated by yaw about z
    then ``roll`` about the body x axis. ``inflate`` grows (or, negative,
    shrinks) every half extent.
    """
    half = np.maximum(geom.half_extents + inflate, 0.0)
    R = body_rotation(pose.yaw, roll)
    c = body_center(world, pose, h)
    vox = _candidate_voxels(world, c, R, half)
    return box_hits_voxels(c, R, half, vox, world.resolution / 2)
