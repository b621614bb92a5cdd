"""Six-parameter potential-field controller with crouch and roll rules."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np

from ..core import COMMAND_RANGES, NOMINAL_H, Command
from ..sim.observe import M3D_Z0, MAP_RES
from .base import Policy, TURN_GAIN, m25d_points

H_MIN = COMMAND_RANGES[3][0]
BODY_HALF_THICKNESS = 0.06
BODY_WIDTH = 0.30
BODY_RADIUS = 0.3
CROUCH_FLOOR = H_MIN + BODY_HALF_THICKNESS  # lowest overhang the body can get under
NOMINAL_TOP = NOMINAL_H + BODY_HALF_THICKNESS + 0.02


@dataclass(frozen=True)
class ReactiveParams:
    attraction: float = 1.0
    repulsion: float = 0.5
    falloff: float = 0.3  # m
    crouch_trigger: float = 0.3  # m of overhead clearance
    roll_trigger: float = 0.25  # m of lateral gap
    cruise: float = 0.6  # m/s

    BOUNDS = ((0.0, 10.0), (0.0, 10.0), (0.05, 2.0), (0.0, 0.6), (0.0, 0.6), (0.3, 1.2))

    def as_vector(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_vector(cls, v) -> ReactiveParams:
        """Build from a raw vector, clipping every entry to its bound."""
        v = [min(max(float(x), lo), hi) for x, (lo, hi) in zip(v, cls.BOUNDS)]
        return cls(*v)

    def to_dict(self) -> dict:
        return dict(zip(("attraction", "repulsion", "falloff", "crouch_trigger", "roll_trigger", "cruise"),
                        astuple(self)))


def overhead_profile(m3d: np.ndarray) -> np.ndarray:
    """Per (x, y) column of the 3D map: free height above the robot's ground (m).

    The slice at the ground index is terrain; the first occupied slice above it
    bounds the clearance. Columns with no occupied slice above read ``inf``.
    """
    above = m3d[M3D_Z0 + 1:]
    has = above.any(axis=0)
    first = np.argmax(above, axis=0)
    return np.where(has, (first + 0.5) * MAP_RES, np.inf)


def forward_clearance(clear: np.ndarray) -> float:
    """Lowest crouchable overhang in the strip just ahead of the body."""
    nx, ny = clear.shape
    cx, cy = nx // 2, ny // 2
    strip = clear[cx:, cy - 2:cy + 3]
    ok = strip[strip >= CROUCH_FLOOR]
    return float(ok.min()) if ok.size else math.inf


def forward_gap(m25d: np.ndarray, threshold: float = 0.3):
    """Lateral free width and roll sign across the rows 0.3 to 0.6 m ahead."""
    nl = m25d.shape[1]
    c = nl // 2
    best, sign = math.inf, 1.0
    for r in range(13, 17):
        row = m25d[r]
        left = next((k for k in range(c, nl) if row[k] > threshold), None)
        right = next((k for k in range(c, -1, -1) if row[k] > threshold), None)
        if left is None or right is None:
            continue
        g = (left - right - 1) * MAP_RES
        if g < best:
            best = g
            sign = 1.0 if row[left] <= row[right] else -1.0
    return best, sign


def reactive_step(obs, params: ReactiveParams) -> Command:
    gr = obs.goal_rel
    dist = math.hypot(gr[0], gr[1])
    g_hat = np.array([gr[0], gr[1]]) / max(dist, 1e-9)
    m25d = obs.m25d
    pts = m25d_points(m25d)
    clear = overhead_profile(obs.m3d)
    c_fwd = forward_clearance(clear)
    crouching = c_fwd < params.crouch_trigger
    if len(pts):
        # overhangs the controller will duck under are not obstacles
        nx, ny = clear.shape
        ix = np.rint(pts[:, 0] / MAP_RES).astype(int) + nx // 2
        iy = np.rint(pts[:, 1] / MAP_RES).astype(int) + ny // 2
        inside = (ix >= 0) & (ix < nx) & (iy >= 0) & (iy < ny)
        cv = np.full(len(pts), -np.inf)
        cv[inside] = clear[ix[inside], iy[inside]]
        passable = (cv >= NOMINAL_TOP) | ((cv >= CROUCH_FLOOR) & (cv < params.crouch_trigger))
        pts = pts[~passable]
    force = params.attraction * g_hat
    if len(pts):
        r = np.hypot(pts[:, 0], pts[:, 1])
        mag = params.repulsion * np.exp(-np.maximum(r - BODY_RADIUS, 0.0) / params.falloff) * MAP_RES
        force = force - (pts * (mag / np.maximum(r, 1e-6))[:, None]).sum(axis=0)
    norm = math.hypot(force[0], force[1])
    direction = force / norm if norm > 1e-9 else np.zeros(2)
    speed = params.cruise * min(1.0, dist / 0.6)
    vx, vy = speed * direction
    wz = TURN_GAIN * math.atan2(direction[1], direction[0]) if norm > 1e-9 else 0.0
    h, roll = NOMINAL_H, 0.0
    gap, sign = forward_gap(m25d)
    if BODY_HALF_THICKNESS * 2 < gap < params.roll_trigger:
        roll = sign * 1.0
    elif crouching:
        h = c_fwd - BODY_HALF_THICKNESS - 0.02
    return Command(vx, vy, wz, h, roll)


class ReactivePolicy(Policy):
    name = "reactive"

    def __init__(self, params: ReactiveParams = ReactiveParams()):
        self.params = params

    def _act(self, obs) -> Command:
        return reactive_step(obs, self.params)
