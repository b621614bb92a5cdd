"""Robot-centred local maps and the observation bundle."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..core import AgentState, Command, Pose, VoxelWorld

M3D_SHAPE = (14, 11, 11)  # z, x, y
M25D_SHAPE = (31, 21)  # forward, lateral
MAP_RES = 0.1
M3D_Z0 = 6  # index of the ground-level slice
M25D_REAR = 10  # forward index of the robot cell


def _body_offsets_to_world(pose: Pose, fx: np.ndarray, fy: np.ndarray):
    c, s = math.cos(pose.yaw), math.sin(pose.yaw)
    return pose.x + c * fx - s * fy, pose.y + s * fx + c * fy


def local_3d(world: VoxelWorld, pose: Pose) -> np.ndarray:
    """Occupancy sampled on a yaw-aligned 14x11x11 lattice around the ground point.

    Slice ``iz`` sits ``(iz - 6) * 0.1`` m above the ground under the robot.
    Samples outside the world read as occupied.
    """
    nz, nx, ny = M3D_SHAPE
    fx = (np.arange(nx) - nx // 2) * MAP_RES
    fy = (np.arange(ny) - ny // 2) * MAP_RES
    FX, FY = np.meshgrid(fx, fy, indexing="ij")
    wx, wy = _body_offsets_to_world(pose, FX, FY)
    g = world.ground_at(pose.x, pose.y)
    wz = g + (np.arange(nz) - M3D_Z0) * MAP_RES
    ox, oy, oz = world.origin
    res = world.resolution
    i = np.floor((wx - ox) / res + 1e-9).astype(np.int64)
    j = np.floor((wy - oy) / res + 1e-9).astype(np.int64)
    k = np.floor((wz - oz) / res + 1e-9).astype(np.int64)
    Nx, Ny, Nz = world.dims
    inside_xy = (i >= 0) & (i < Nx) & (j >= 0) & (j < Ny)
    inside_z = (k >= 0) & (k < Nz)
    out = np.ones((nz, nx, ny), dtype=bool)
    ii = np.clip(i, 0, Nx - 1)
    jj = np.clip(j, 0, Ny - 1)
    kk = np.clip(k, 0, Nz - 1)
    vals = world.occupancy[ii[None, :, :], jj[None, :, :], kk[:, None, None]]
    mask = inside_xy[None, :, :] & inside_z[:, None, None]
    out[mask] = vals[mask]
    return out


def local_25d(world: VoxelWorld, pose: Pose) -> np.ndarray:
    """Top elevation relative to the robot's ground on a 31x21 yaw-aligned window.

    Rows run from 1.0 m behind to 2.0 m ahead; columns from 1.0 m right to
    1.0 m left. Samples outside the world read as the world's top.
    """
    nf, nl = M25D_SHAPE
    fx = (np.arange(nf) - M25D_REAR) * MAP_RES
    fy = (np.arange(nl) - nl // 2) * MAP_RES
    FX, FY = np.meshgrid(fx, fy, indexing="ij")
    wx, wy = _body_offsets_to_world(pose, FX, FY)
    i, j = world.cell_of(wx + 1e-9, wy + 1e-9)
    Nx, Ny, Nz = world.dims
    inside = (i >= 0) & (i < Nx) & (j >= 0) & (j < Ny)
    z_max = world.origin[2] + Nz * world.resolution
    top = np.full((nf, nl), z_max)
    top[inside] = world.top_elevation[i[inside], j[inside]]
    return top - world.ground_at(pose.x, pose.y)


def extract_local_maps(world: VoxelWorld, pose: Pose):
    return local_3d(world, pose), local_25d(world, pose)


def body_frame(pose: Pose, point) -> np.ndarray:
    """World point expressed relative to the body, rotated by -yaw."""
    p = np.asarray(point, dtype=float)
    d = np.array([p[0] - pose.x, p[1] - pose.y, (p[2] if len(p) > 2 else pose.z) - pose.z])
    c, s = math.cos(pose.yaw), math.sin(pose.yaw)
    return np.array([c * d[0] + s * d[1], -s * d[0] + c * d[1], d[2]])


@dataclass
class ObservationBundle:
    """Everything a policy may observe at one tick.

    Maps and depth are computed on first access. ``pose`` is odometry, which
    the classical baselines need for their line and heading bookkeeping.
    """

    world: VoxelWorld = field(repr=False)
    state: AgentState
    prev_cmd: Command
    goal: np.ndarray  # world frame, 3 values
    visit_count: int = 0

    @property
    def pose(self) -> Pose:
        return self.state.pose

    @cached_property
    def goal_rel(self) -> np.ndarray:
        return body_frame(self.state.pose, self.goal)

    @cached_property
    def m3d(self) -> np.ndarray:
        return local_3d(self.world, self.state.pose)

    @cached_property
    def m25d(self) -> np.ndarray:
        return local_25d(self.world, self.state.pose)

    @cached_property
    def proprio(self) -> np.ndarray:
        s = self.state
        return np.concatenate([s.achieved.as_array(), self.prev_cmd.as_array(), [s.vz], s.omega_xy])

    def depth(self, cam=None) -> np.ndarray:
        from .depth import CameraConfig, raycast_depth
        return raycast_depth(self.world, self.state.pose, cam or CameraConfig())
