"""Path-guided curriculum: sub-goal sets, the level state machine and segment returns."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..core import VoxelWorld
from .planner import GlobalPath

ARRIVAL_RADIUS = 0.1
DEFAULT_GAMMA = 0.99
DEFAULT_M = 3
SEGMENT_TIMEOUT = 60.0  # s
_TOL = 1e-9


@dataclass(frozen=True)
class SubGoalSet:
    k: int
    d: float
    goals: np.ndarray  # (N, 3), last row is the task goal

    def __len__(self) -> int:
        return len(self.goals)

    def to_dict(self) -> dict:
        return {"k": self.k, "d": self.d, "goals": np.round(self.goals, 6).tolist()}


def subgoal_arclengths(total_length: float, d: float) -> list[float]:
    """Arclengths d, 2d, ... strictly below ``total_length``."""
    if d <= 0:
        raise ValueError("spacing must be positive")
    out = []
    n = 1
    while n * d < total_length - _TOL:
        out.append(n * d)
        n += 1
    return out


def sample_subgoals(path: GlobalPath, d: float, goal, k: int = 1, world: VoxelWorld | None = None) -> SubGoalSet:
    """Points every ``d`` m along ``path`` with the goal appended.

    Intermediate sub-goals sit on the ground (z from ``world`` if given).
    """
    pts = []
    for s in subgoal_arclengths(path.total_length, d):
        x, y = path.point_at(s)
        z = world.ground_at(x, y) if world is not None else 0.0
        pts.append((x, y, z))
    g = np.asarray(goal, dtype=float)
    if len(g) == 2:
        g = np.array([g[0], g[1], world.ground_at(*g) if world is not None else 0.0])
    pts.append(tuple(g))
    return SubGoalSet(k, float(d), np.array(pts, dtype=float))


def final_level(total_length: float, d0: float = 1.0, step: float = 1.0) -> int:
    """Smallest level whose spacing exceeds the path length."""
    k = 1
    while d0 + (k - 1) * step <= total_length + _TOL:
        k += 1
    return k


@dataclass
class CurriculumState:
    """Curriculum progress on one task. ``next_index`` is 1-based."""

    path: GlobalPath
    goal: np.ndarray
    k: int = 1
    d: float = 1.0
    d0: float = 1.0
    step: float = 1.0
    M: int = DEFAULT_M
    next_index: int = 1
    successes_at_K: int = 0
    new_task: bool = False
    complete: bool = False
    last_advanced: int = 0
    world: VoxelWorld | None = field(default=None, repr=False)
    goals: SubGoalSet = None

    def __post_init__(self):
        self.goal = np.asarray(self.goal, dtype=float)
        if self.goals is None:
            self.goals = sample_subgoals(self.path, self.d, self.goal, self.k, self.world)

    @classmethod
    def start(cls, path: GlobalPath, goal, world: VoxelWorld | None = None, d0: float = 1.0,
              step: float = 1.0, M: int = DEFAULT_M) -> CurriculumState:
        return cls(path=path, goal=goal, k=1, d=d0, d0=d0, step=step, M=M, world=world)

    @property
    def K(self) -> int:
        return final_level(self.path.total_length, self.d0, self.step)

    @property
    def N(self) -> int:
        return len(self.goals)

    @property
    def at_final_level(self) -> bool:
        return self.k >= self.K

    def current(self) -> np.ndarray:
        return self.goals.goals[min(self.next_index, self.N) - 1]

    def reset_episode(self) -> None:
        self.next_index = 1
        self.complete = False


def _planar(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def observe_goal(cs: CurriculumState, position, radius: float = ARRIVAL_RADIUS) -> np.ndarray:
    """Next unreached sub-goal, advancing past any the agent is already within ``radius`` of.

    Distances are planar. Reaching the last sub-goal raises ``cs.complete``;
    the number passed in this call is left in ``cs.last_advanced``.
    """
    advanced = 0
    while not cs.complete and _planar(position, cs.current()) < radius:
        advanced += 1
        if cs.next_index >= cs.N:
            cs.complete = True
        else:
            cs.next_index += 1
    cs.last_advanced = advanced
    return cs.current()


def advance_level(cs: CurriculumState, success: bool) -> CurriculumState:
    """Update the curriculum after an episode on the current task."""
    cs.new_task = False
    if success:
        if cs.at_final_level:
            cs.successes_at_K += 1
            if cs.successes_at_K >= cs.M:
                cs.new_task = True
        else:
            cs.k += 1
            cs.d += cs.step
            cs.goals = sample_subgoals(cs.path, cs.d, cs.goal, cs.k, cs.world)
    else:
        cs.successes_at_K = 0
    cs.reset_episode()
    return cs


@dataclass(frozen=True)
class SegmentReturn:
    k: int
    i: int
    J: float
    arrival_tick: int | None  # None on timeout

    def to_dict(self) -> dict:
        return {"k": self.k, "i": self.i, "J": self.J, "arrival_tick": self.arrival_tick}


def segment_return(rewards, gamma: float = DEFAULT_GAMMA, arrival_tick: int | None = None,
                   k: int = 0, i: int = 0) -> SegmentReturn:
    """Discounted sum from the segment's first tick through ``arrival_tick`` inclusive."""
    r = np.asarray(rewards, dtype=float)
    if arrival_tick is not None:
        r = r[:arrival_tick + 1]
    J = 0.0
    g = 1.0
    for v in r:
        J += g * v
        g *= gamma
    return SegmentReturn(k, i, J, arrival_tick)
