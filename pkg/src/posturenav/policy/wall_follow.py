"""Wall-following: keep the nearest surface on one side, spiral outward when none is near."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import Command, DT
from .base import Policy, follow_command, m25d_points


@dataclass(frozen=True)
class WallFollowConfig:
    side: int = 1  # +1 keeps the wall on the left
    standoff: float = 0.4
    acquire_range: float = 1.5
    cruise: float = 0.6
    spiral_r0: float = 0.5  # m
    spiral_growth: float = 0.1  # m of radius per second


class WallFollowPolicy(Policy):
    name = "wall_follow"

    def __init__(self, config: WallFollowConfig = WallFollowConfig()):
        self.cfg = config
        self.reset(0)

    def reset(self, seed: int = 0) -> None:
        self.spiral_time = 0.0

    def _act(self, obs) -> Command:
        cfg = self.cfg
        cmd, dmin = follow_command(m25d_points(obs.m25d), cfg.side, cfg.standoff, cfg.cruise)
        if cmd is None or dmin > cfg.acquire_range:
            r = cfg.spiral_r0 + cfg.spiral_growth * self.spiral_time
            self.spiral_time += DT
            return Command(cfg.cruise, 0.0, cfg.side * cfg.cruise / r)
        self.spiral_time = 0.0
        return cmd
