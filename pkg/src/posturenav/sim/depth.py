"""Depth images by voxel-DDA ray casting."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import Pose, VoxelWorld
from .geometry import body_rotation

MAX_RANGE = 4.0


@dataclass(frozen=True)
class CameraConfig:
    height: int = 32
    width: int = 48
    hfov_deg: float = 87.0
    mount: tuple = (0.25, 0.0, 0.12)  # body frame
    max_range: float = MAX_RANGE

    @property
    def focal(self) -> float:
        return (self.width / 2) / math.tan(math.radians(self.hfov_deg) / 2)


def camera_rays(cam: CameraConfig) -> np.ndarray:
    """Unit ray directions in the body frame (x forward, y left, z up), shape (H, W, 3)."""
    f = cam.focal
    u = np.arange(cam.width) - (cam.width - 1) / 2
    v = np.arange(cam.height) - (cam.height - 1) / 2
    U, V = np.meshgrid(u, v)
    d = np.stack([np.full_like(U, f), -U, -V], axis=-1)
    return d / np.linalg.norm(d, axis=-1, keepdims=True)


def camera_origin(world: VoxelWorld, pose: Pose, cam: CameraConfig):
    R = body_rotation(pose.yaw, pose.roll)
    o = np.array([pose.x, pose.y, pose.z]) + R @ np.asarray(cam.mount, dtype=float)
    return o, R


def cast(world: VoxelWorld, origin: np.ndarray, dirs: np.ndarray, max_range: float) -> np.ndarray:
    """Distance to the first occupied voxel along each ray (``inf`` if none in range).

    Amanatides-Woo traversal, all rays advanced together.
    """
    o = np.asarray(world.origin, dtype=float)
    res = world.resolution
    dims = np.array(world.dims)
    n = len(dirs)
    p = (origin - o) / res  # grid units
    cell = np.floor(p).astype(np.int64)
    cell = np.broadcast_to(cell, (n, 3)).copy()
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(dirs != 0, 1.0 / dirs, np.inf)
        stepv = np.where(dirs > 0, 1, -1).astype(np.int64)
        nxt = np.where(dirs > 0, cell + 1, cell)
        t_max = np.where(dirs != 0, (nxt - p) * res * inv, np.inf)
    t_max = np.where(t_max < 0, 0.0, t_max)
    t_delta = np.abs(res * inv)
    dist = np.full(n, np.inf)
    t = np.zeros(n)
    active = np.ones(n, dtype=bool)
    occ = world.occupancy
    while active.any():
        inside = ((cell >= 0) & (cell < dims)).all(axis=1)
        # a ray that starts outside never hits; one that leaves is done
        active &= inside
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        c = cell[idx]
        hit = occ[c[:, 0], c[:, 1], c[:, 2]]
        dist[idx[hit]] = t[idx[hit]]
        active[idx[hit]] = False
        active &= t <= max_range
        idx = np.flatnonzero(active)
        if len(idx) == 0:
            break
        tm = t_max[idx]
        ax = np.argmin(tm, axis=1)
        r = np.arange(len(idx))
        t[idx] = tm[r, ax]
        cell[idx, ax] += stepv[idx, ax]
        t_max[idx, ax] += t_delta[idx, ax]
    return dist


def raycast_depth(world: VoxelWorld, pose: Pose, cam: CameraConfig = CameraConfig()) -> np.ndarray:
    """Normalized depth image: hit distance clipped to the max range then scaled to [0, 1]."""
    origin, R = camera_origin(world, pose, cam)
    dirs = camera_rays(cam).reshape(-1, 3) @ R.T
    d = cast(world, origin, dirs, cam.max_range)
    d = np.minimum(d, cam.max_range) / cam.max_range
    return d.reshape(cam.height, cam.width)
