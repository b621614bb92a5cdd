"""Pure-pursuit path follower with posture adaptation from privileged clearance queries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import COMMAND_RANGES, NOMINAL_H, Command
from ..curriculum.planner import GlobalPath, Planner, PlannerConfig
from ..sim.geometry import BodyGeometry
from .base import Policy, steer

H_MIN, H_MAX = COMMAND_RANGES[3]
ROLL_CAP = COMMAND_RANGES[4][1]


@dataclass(frozen=True)
class OracleConfig:
    lookahead: float = 0.8
    min_lookahead: float = 0.2
    cruise: float = 0.8
    allow_posture: bool = True
    margin: float = 0.02
    window_behind: float = 0.35
    window_ahead: float = 1.0
    strip_half_width: float = 0.2
    gap_scan: float = 0.5


def _bearing_to(pose, q) -> float:
    return math.atan2(q[1] - pose.y, q[0] - pose.x) - pose.yaw


def _wrap(a: float) -> float:
    return math.remainder(a, 2 * math.pi)


class OraclePolicy(Policy):
    """Tracks the planner's path; crouches under overhangs and rolls through slanted slots.

    The path is planned on first use (or whenever the observed goal moves)
    unless one is supplied. With ``allow_posture`` off it plans at nominal
    posture and never leaves it.
    """

    name = "oracle"

    def __init__(self, config: OracleConfig = OracleConfig(), geom: BodyGeometry = BodyGeometry(),
                 path: GlobalPath | None = None, planner_config: PlannerConfig | None = None):
        self.cfg = config
        self.geom = geom
        self.fixed_path = path
        self.planner_config = planner_config
        if not config.allow_posture:
            self.name = "oracle_no_posture"
        self.reset(0)

    def reset(self, seed: int = 0) -> None:
        self.path = self.fixed_path
        self.s = 0.0
        self._goal = None
        self._planner = None
        self._world = None
        self.last_clearance = math.inf
        self.last_gap = math.inf

    # -- privileged queries ---------------------------------------------------

    def _ensure(self, obs):
        if self._world is not obs.world:
            self._world = obs.world
            self._planner = Planner(obs.world, self.planner_config)
        goal = np.asarray(obs.goal, dtype=float)[:2]
        if self.path is None or (self.fixed_path is None and not np.allclose(goal, self._goal)):
            self.path = self._planner.plan((obs.pose.x, obs.pose.y), goal, allow_posture=self.cfg.allow_posture)
            self.s = 0.0
        self._goal = goal

    def _frames(self):
        """Window sample points along the path with their unit normals."""
        w = self._world
        step = w.resolution / 2
        s0 = max(self.s - self.cfg.window_behind, 0.0)
        s1 = min(self.s + self.cfg.window_ahead, self.path.total_length)
        ss = np.arange(s0, s1 + 1e-9, step) if s1 > s0 else np.array([s0])
        q = np.array([self.path.point_at(v) for v in ss])
        a = np.array([self.path.point_at(max(v - 0.05, 0.0)) for v in ss])
        b = np.array([self.path.point_at(min(v + 0.05, self.path.total_length)) for v in ss])
        t = b - a
        nrm = np.hypot(t[:, 0], t[:, 1])
        t = np.where(nrm[:, None] > 1e-9, t / np.maximum(nrm, 1e-12)[:, None], np.array([1.0, 0.0]))
        return q, np.stack([-t[:, 1], t[:, 0]], axis=1)

    def _lookup(self, pts, arr, fill):
        w = self._world
        i, j = w.cell_of(pts[..., 0], pts[..., 1])
        nx, ny = w.dims[:2]
        ok = (i >= 0) & (i < nx) & (j >= 0) & (j < ny)
        out = np.full(i.shape, fill, dtype=float)
        out[ok] = arr[i[ok], j[ok]]
        return out

    def overhead_ahead(self) -> float:
        """Lowest crouchable overhang over the body's strip along the path window."""
        w = self._world
        floor = H_MIN + self.geom.thickness / 2
        q, n = self._frames()
        offs = np.arange(-self.cfg.strip_half_width, self.cfg.strip_half_width + 1e-9, w.resolution / 2)
        pts = q[:, None, :] + offs[None, :, None] * n[:, None, :]
        c = self._lookup(pts, w.overhead_clearance, np.inf)
        c = c[c >= floor]
        return float(c.min()) if c.size else math.inf

    def gap_ahead(self):
        """Narrowest lateral opening across the path window and the roll sign it calls for."""
        w = self._world
        nominal_top = self.geom.nominal_h + self.geom.thickness / 2 + self.cfg.margin
        q, n = self._frames()
        offs = np.arange(0.0, self.cfg.gap_scan + 1e-9, w.resolution / 2)
        rel_top = w.top_elevation - w.ground_elevation
        ext, tops = [], []
        for side in (1.0, -1.0):
            pts = q[:, None, :] + side * offs[None, :, None] * n[:, None, :]
            blocked = self._lookup(pts, w.overhead_clearance, -np.inf) < nominal_top
            top = self._lookup(pts, rel_top, np.inf)
            first = np.where(blocked.any(axis=1), blocked.argmax(axis=1), len(offs))
            ext.append(np.append(offs, self.cfg.gap_scan)[first])
            tops.append(np.where(first < len(offs), top[np.arange(len(q)), np.minimum(first, len(offs) - 1)], np.inf))
        gap = ext[0] + ext[1]
        k = int(np.argmin(gap))
        # lift the side over the lower obstacle
        sign = 1.0 if tops[0][k] <= tops[1][k] else -1.0
        return float(gap[k]), sign

    # -- control --------------------------------------------------------------

    def posture(self):
        if not self.cfg.allow_posture:
            return NOMINAL_H, 0.0
        g = self.geom
        gap, sign = self.gap_ahead()
        self.last_gap = gap
        if g.thickness < gap < g.width:
            return NOMINAL_H, sign * ROLL_CAP
        c = self.overhead_ahead()
        self.last_clearance = c
        if c < g.nominal_h + g.thickness / 2 + self.cfg.margin:
            return min(max(c - g.thickness / 2 - self.cfg.margin, H_MIN), H_MAX), 0.0
        return NOMINAL_H, 0.0

    def _lookahead_point(self, pose):
        p = np.array([pose.x, pose.y])
        free = self._planner.free_space(self.cfg.allow_posture, self._planner.cfg.min_inflation)
        L = self.cfg.lookahead
        while L > self.cfg.min_lookahead:
            q = self.path.point_at(self.s + L)
            if self._planner.line_of_sight(p, q, free):
                return q
            L -= 0.1
        return self.path.point_at(self.s + self.cfg.min_lookahead)

    def _act(self, obs) -> Command:
        self._ensure(obs)
        pose = obs.pose
        p = np.array([pose.x, pose.y])
        self.s = max(self.s, self.path.project(p, self.s, window=1.0))
        end = self.path.waypoints[-1]
        dist_end = math.hypot(*(end - p))
        if self.s >= self.path.total_length - 1e-6 and dist_end < 0.05:
            h, roll = self.posture()
            return Command(0.0, 0.0, 0.0, h, roll)
        q = self._lookahead_point(pose)
        h, roll = self.posture()
        bearing = _wrap(_bearing_to(pose, q))
        speed = self.cfg.cruise * min(1.0, dist_end / 0.8 + 0.1)
        ach = obs.state.achieved
        if abs(ach.h - h) > 0.04 or abs(ach.roll - roll) > 0.15:
            speed = min(speed, 0.15)
        return steer(bearing, speed, h, roll)
