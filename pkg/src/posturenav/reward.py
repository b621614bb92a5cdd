"""High-level reward: task terms plus regularizers, with a visitation counter."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from .core import NOMINAL_H, command_in_range

ARRIVAL_RADIUS = 0.1
SPEED_SCALE = 0.3
V_DES_RANGE = (0.3, 1.2)


@dataclass(frozen=True)
class RewardWeights:
    w1: float = 5.0  # goal arrival
    w2: float = 0.5  # state count
    w3: float = 0.25  # desired speed
    w4: float = -0.1  # command rate
    w5: float = -0.1  # smooth command
    w6: float = -0.2  # tracking error
    w7: float = -0.1  # body velocity
    w8: float = -0.04  # nominal posture
    w9: float = -2.5  # command limit
    w10: float = -2.5  # collision

    def scaled(self, k: float) -> RewardWeights:
        return RewardWeights(*(k * getattr(self, f.name) for f in fields(self)))


@dataclass
class VisitCounter:
    """Visits per planar cell; owned by one task and cleared when the task changes."""

    cell_size: float = 0.5
    counts: dict = field(default_factory=dict)

    def cell(self, position) -> tuple[int, int]:
        return int(math.floor(position[0] / self.cell_size)), int(math.floor(position[1] / self.cell_size))

    def get(self, position) -> int:
        return self.counts.get(self.cell(position), 0)

    def visit(self, position) -> int:
        c = self.cell(position)
        n = self.counts.get(c, 0) + 1
        self.counts[c] = n
        return n

    def reset(self) -> None:
        self.counts.clear()


@dataclass(frozen=True)
class RewardBreakdown:
    r1: float = 0.0
    r2: float = 0.0
    r3: float = 0.0
    r4: float = 0.0
    r5: float = 0.0
    r6: float = 0.0
    r7: float = 0.0
    r8: float = 0.0
    r9: float = 0.0
    r10: float = 0.0

    @property
    def terms(self) -> tuple:
        return (self.r1, self.r2, self.r3, self.r4, self.r5, self.r6, self.r7, self.r8, self.r9, self.r10)

    @property
    def total(self) -> float:
        t = 0.0
        for r in self.terms:
            t += r
        return t

    def as_dict(self) -> dict:
        d = {f"r{i + 1}": v for i, v in enumerate(self.terms)}
        d["total"] = self.total
        return d


def goal_arrival(dist_to_subgoal: float, w1: float = 5.0) -> float:
    return w1 if dist_to_subgoal < ARRIVAL_RADIUS else 0.0


def state_count(counter: VisitCounter, position, w2: float = 0.5) -> float:
    """Increment the cell under ``position`` and return ``w2 / sqrt(count)``."""
    return w2 / math.sqrt(counter.visit(position))


def desired_speed(v_des: float, planar_speed: float, w3: float = 0.25) -> float:
    return w3 * math.exp(-abs(v_des - planar_speed) / SPEED_SCALE)


def sample_v_des(rng: np.random.Generator) -> float:
    return float(rng.uniform(*V_DES_RANGE))


def posture_deviation(h: float, roll: float, nominal_h: float = NOMINAL_H) -> float:
    """Stand-in for joint deviation from the default stance."""
    return (h - nominal_h) ** 2 + roll ** 2


def _floats(v) -> tuple:
    return tuple(float(x) for x in v)


def regularizers(cmd_t, cmd_t1, cmd_t2, achieved, vz: float, omega_xy, posture_dev: float,
                 colliding: bool, weights: RewardWeights = RewardWeights()) -> tuple:
    """Terms r4..r10 in order."""
    c0, c1, c2, a = _floats(cmd_t), _floats(cmd_t1), _floats(cmd_t2), _floats(achieved)
    w = weights
    r4 = w.w4 * sum((x - y) * (x - y) for x, y in zip(c0, c1))
    r5 = w.w5 * sum((x - 2.0 * y + z) * (x - 2.0 * y + z) for x, y, z in zip(c0, c1, c2))
    r6 = w.w6 * math.sqrt(sum((x - y) * (x - y) for x, y in zip(c0, a)))
    r7 = w.w7 * (vz * vz + sum(float(o) * float(o) for o in omega_xy))
    r8 = w.w8 * posture_dev
    r9 = w.w9 * (0.0 if command_in_range(c0) else 1.0)
    r10 = w.w10 * (1.0 if colliding else 0.0)
    return r4, r5, r6, r7, r8, r9, r10


def total(state, cmd_history, counter: VisitCounter, v_des: float, colliding: bool,
          weights: RewardWeights = RewardWeights(), dist_to_subgoal: float = math.inf,
          use_posture_term: bool = True, planar_speed: float | None = None) -> RewardBreakdown:
    """All ten terms for one tick.

    ``cmd_history`` is ``(c_t, c_{t-1}, c_{t-2})``. ``state`` is the
    post-step :class:`AgentState`; its position increments ``counter``.
    ``planar_speed`` defaults to the achieved planar velocity norm.
    """
    c0, c1, c2 = cmd_history
    ach = state.achieved
    w = weights
    r1 = goal_arrival(dist_to_subgoal, w.w1)
    r2 = state_count(counter, (state.pose.x, state.pose.y), w.w2)
    speed = math.hypot(ach.vx, ach.vy) if planar_speed is None else planar_speed
    r3 = desired_speed(v_des, speed, w.w3)
    dev = posture_deviation(ach.h, ach.roll) if use_posture_term else 0.0
    rest = regularizers(c0, c1, c2, ach, state.vz, state.omega_xy, dev, colliding, w)
    return RewardBreakdown(r1, r2, r3, *rest)
