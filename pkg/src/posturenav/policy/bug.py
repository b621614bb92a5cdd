"""Bug-2: head for the goal, follow obstacle boundaries, leave on the start-goal line."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import Command
from ..core import seeded_rng
from .base import Policy, follow_command, m25d_points, push_off, sector_blocked, steer

GO_TO_GOAL = "go"
FOLLOW = "follow"


@dataclass(frozen=True)
class BugConfig:
    cruise: float = 1.0
    standoff: float = 0.4
    reach: float = 0.6  # forward-sector depth for blockage
    sector_half_width: float = 0.2
    line_tol: float = 0.1  # how close to the start-goal line counts as on it
    leave_margin: float = 0.1  # required improvement over the hit distance
    lost_range: float = 1.5
    side: int = 0  # +1 left, -1 right, 0 = seeded per episode


def approach_speed(cruise: float, dist: float) -> float:
    return cruise * min(1.0, dist / 0.8)


class BugPolicy(Policy):
    name = "bug"

    def __init__(self, config: BugConfig = BugConfig()):
        self.cfg = config
        self.reset(0)

    def reset(self, seed: int = 0) -> None:
        side = self.cfg.side or (1 if seeded_rng(seed, "bug/side").random() < 0.5 else -1)
        self.side = side
        self.mode = GO_TO_GOAL
        self.start = None
        self.line_goal = None
        self.hit_point = None
        self.hit_dist = math.inf
        self.hit_dists: list[float] = []
        self._line_sign = 0.0

    def _line_offset(self, p) -> float:
        a, b = self.start, self.line_goal
        d = b - a
        n = np.hypot(*d)
        if n < 1e-9:
            return 0.0
        return float((d[0] * (p[1] - a[1]) - d[1] * (p[0] - a[0])) / n)

    def _act(self, obs) -> Command:
        cfg = self.cfg
        p = np.array([obs.pose.x, obs.pose.y])
        goal = np.asarray(obs.goal, dtype=float)[:2]
        if self.start is None or self.line_goal is None or not np.allclose(goal, self.line_goal):
            self.start, self.line_goal = p.copy(), goal.copy()
            self.mode = GO_TO_GOAL
        gr = obs.goal_rel
        bearing = math.atan2(gr[1], gr[0])
        dist = math.hypot(gr[0], gr[1])
        pts = m25d_points(obs.m25d)
        blocked = sector_blocked(pts, bearing, cfg.reach, cfg.sector_half_width)
        offset = self._line_offset(p)

        if self.mode == FOLLOW:
            crossed = abs(offset) < cfg.line_tol or (offset * self._line_sign < 0)
            if crossed and dist < self.hit_dist - cfg.leave_margin and not blocked:
                self.mode = GO_TO_GOAL
        self._line_sign = offset if abs(offset) > 1e-9 else self._line_sign

        if self.mode == GO_TO_GOAL:
            if not blocked:
                return push_off(pts, steer(bearing, approach_speed(cfg.cruise, dist)))
            self.mode = FOLLOW
            self.hit_point = p.copy()
            self.hit_dist = dist
            self.hit_dists.append(dist)
        cmd, dmin = follow_command(pts, self.side, cfg.standoff, cfg.cruise)
        if cmd is None or dmin > cfg.lost_range:
            # lost the boundary: arc toward the followed side
            return Command(0.5 * cfg.cruise, 0.0, self.side * 1.0)
        return cmd
