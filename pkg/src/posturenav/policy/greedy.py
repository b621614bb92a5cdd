"""Straight-to-goal steering with no obstacle handling and fixed posture."""

from __future__ import annotations

import math

from ..core import Command
from .base import Policy, steer
from .bug import approach_speed


class GreedyPolicy(Policy):
    name = "greedy"

    def __init__(self, cruise: float = 0.6):
        self.cruise = cruise

    def _act(self, obs) -> Command:
        gr = obs.goal_rel
        return steer(math.atan2(gr[1], gr[0]), approach_speed(self.cruise, math.hypot(gr[0], gr[1])))
