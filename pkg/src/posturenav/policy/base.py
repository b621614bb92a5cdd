"""Policy interface and shared steering helpers."""

from __future__ import annotations

import math

import numpy as np

from ..core import STAND, Command, clamp_command
from ..sim.observe import M25D_REAR, MAP_RES

OBSTACLE_ELEVATION = 0.3  # m above the robot's ground
TURN_GAIN = 2.0


class Policy:
    """``reset`` once per episode, then ``act`` once per tick."""

    name = "policy"

    def reset(self, seed: int = 0) -> None:
        pass

    def act(self, obs) -> Command:
        return clamp_command(self._act(obs))

    def _act(self, obs) -> Command:
        raise NotImplementedError


class StationaryPolicy(Policy):
    name = "stationary"

    def _act(self, obs) -> Command:
        return STAND


def m25d_points(m25d: np.ndarray, threshold: float = OBSTACLE_ELEVATION) -> np.ndarray:
    """Body-frame (forward, left) centres of cells higher than ``threshold``."""
    i, j = np.nonzero(m25d > threshold)
    nl = m25d.shape[1]
    return np.stack([(i - M25D_REAR) * MAP_RES, (j - nl // 2) * MAP_RES], axis=1).astype(float)


def sector_blocked(points: np.ndarray, direction: float, reach: float, half_width: float) -> bool:
    """Whether any point lies in the strip of ``half_width`` along ``direction`` up to ``reach``."""
    if len(points) == 0:
        return False
    c, s = math.cos(direction), math.sin(direction)
    along = points[:, 0] * c + points[:, 1] * s
    across = -points[:, 0] * s + points[:, 1] * c
    return bool(((along > 0) & (along <= reach) & (np.abs(across) <= half_width)).any())


def steer(bearing: float, speed: float, h: float = STAND.h, roll: float = 0.0,
          turn_in_place: float = math.radians(60)) -> Command:
    """Unicycle-style command toward a body-frame bearing; turns on the spot when far off."""
    wz = TURN_GAIN * bearing
    vx = speed * max(math.cos(bearing), 0.0) if abs(bearing) < turn_in_place else 0.0
    return Command(vx, 0.0, wz, h, roll)


def follow_direction(points: np.ndarray, side: int, standoff: float, gain: float = 2.5, blend: float = 0.15,
                     front_guard: float = 0.45):
    """Bearing that keeps the obstacle boundary on ``side`` (+1 left, -1 right) at ``standoff``.

    The boundary normal averages the directions of all points within
    ``blend`` of the nearest one, so concave corners turn the follower away.
    Returns ``(bearing, nearest distance, normal)`` or ``None`` when there are no points.
    """
    if len(points) == 0:
        return None
    d = np.hypot(points[:, 0], points[:, 1])
    dmin = max(float(d.min()), 1e-6)
    near = d <= dmin + blend
    u = points[near] / np.maximum(d[near], 1e-6)[:, None]
    wts = 1.0 / np.maximum(d[near], 1e-3)
    n = (u * wts[:, None]).sum(axis=0)
    nn = math.hypot(n[0], n[1])
    n = n / nn if nn > 1e-9 else u[0]
    t = np.array([side * n[1], -side * n[0]])  # tangent with the obstacle on ``side``
    v = t + gain * (dmin - standoff) * n
    bearing = math.atan2(v[1], v[0])
    if sector_blocked(points, 0.0, front_guard, 0.2) and abs(bearing) < math.pi / 4:
        bearing = -side * math.pi / 2  # wall dead ahead: turn away from the followed side
    return bearing, dmin, n


TOO_CLOSE = 0.36  # just beyond the footprint's turning radius plus half a cell


def push_off(points: np.ndarray, cmd: Command, too_close: float = TOO_CLOSE) -> Command:
    """Replace the translation of ``cmd`` with a back-off when an obstacle is inside ``too_close``."""
    if len(points) == 0:
        return cmd
    d = np.hypot(points[:, 0], points[:, 1])
    near = d < too_close
    if not near.any():
        return cmd
    n = (points[near] / np.maximum(d[near], 1e-6)[:, None]).sum(axis=0)
    nn = math.hypot(n[0], n[1])
    if nn < 1e-9:
        return cmd
    return Command(-0.3 * n[0] / nn, -0.3 * n[1] / nn, cmd.wz, cmd.h, cmd.roll)


def follow_command(points: np.ndarray, side: int, standoff: float, cruise: float, too_close: float = TOO_CLOSE):
    """Boundary-following command, or ``None`` when no boundary is in view.

    Inside ``too_close`` the body backs off along the boundary normal while
    turning, which frees it from corners it cannot rotate in.
    """
    fd = follow_direction(points, side, standoff)
    if fd is None:
        return None, math.inf
    bearing, dmin, n = fd
    if dmin < too_close:
        vx, vy = -0.3 * n
        return Command(vx, vy, TURN_GAIN * bearing), dmin
    return steer(bearing, cruise), dmin
