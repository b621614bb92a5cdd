"""Closed-loop episodes: observe, act, step, reward."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from ..core import STAND, DT, VoxelWorld, derive_seed, seeded_rng
from ..curriculum.pgcl import CurriculumState, SegmentReturn, observe_goal, segment_return
from ..reward import VisitCounter, sample_v_des, total
from ..sim.executor import initial_state, step
from ..sim.observe import ObservationBundle
from .config import RunConfig
from .tasks import Task

TRAJECTORY_COLUMNS = (
    ["t", "x", "y", "z", "yaw", "roll"]
    + [f"ach_{c}" for c in ("vx", "vy", "wz", "h", "roll")]
    + [f"cmd_{c}" for c in ("vx", "vy", "wz", "h", "roll")]
    + ["colliding"] + [f"r{i}" for i in range(1, 11)] + ["reward"]
)


@dataclass
class EpisodeResult:
    success: bool
    path_length: float  # p_i
    shortest: float  # l_i
    collisions: int  # colliding ticks
    ticks: int
    timeout: bool
    final_distance: float
    segment_returns: list = field(default_factory=list)
    trajectory: list | None = field(default=None, repr=False)

    @property
    def total_return(self) -> float:
        return float(sum(s.J for s in self.segment_returns))

    def to_dict(self) -> dict:
        return {
            "success": self.success, "path_length": self.path_length, "shortest": self.shortest,
            "collisions": self.collisions, "ticks": self.ticks, "timeout": self.timeout,
            "final_distance": self.final_distance,
            "segment_returns": [s.to_dict() for s in self.segment_returns],
        }


def _planar(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def run_episode(world: VoxelWorld, task: Task, policy, config: RunConfig = RunConfig(), seed: int = 0,
                curriculum: CurriculumState | None = None, goal_radius: float | None = None,
                record: bool = False, timeout: float | None = None) -> EpisodeResult:
    """Run one episode at 10 Hz.

    With ``curriculum`` the policy observes the next unreached sub-goal and
    the episode succeeds once the whole sequence is reached; each sub-goal
    opens a return segment that closes on arrival or after the segment
    timeout. Without it the goal is the only target and the episode succeeds
    within ``goal_radius`` of it.
    """
    ep = config.episode
    cc = config.curriculum
    radius = ep.goal_radius if goal_radius is None else goal_radius
    max_ticks = int(round((ep.timeout if timeout is None else timeout) / DT))
    seg_ticks = int(round(cc.segment_timeout / DT))
    params = config.executor.randomized(seeded_rng(seed, "executor/params"))
    rng = seeded_rng(seed, "executor/noise")
    v_des = sample_v_des(seeded_rng(seed, "v_des"))
    policy.reset(derive_seed(seed, "policy"))
    counter = VisitCounter(ep.visit_cell)
    goal = np.asarray(task.goal, dtype=float)
    state = initial_state(world, task.start[0], task.start[1], task.start[2], params)
    c1 = c2 = STAND
    segs: list[SegmentReturn] = []
    seg_rewards: list[float] = []
    seg_index = 1
    rows = [] if record else None
    collisions = 0
    success = False
    t = 0
    if curriculum is not None:
        curriculum.reset_episode()
    pos = (state.pose.x, state.pose.y)
    while t < max_ticks:
        target = observe_goal(curriculum, pos, cc.arrival_radius) if curriculum is not None else goal
        obs = ObservationBundle(world, state, c1, target, counter.get(pos))
        cmd = policy.act(obs)
        state = step(world, state, cmd, params, rng, config.geometry)
        pos = (state.pose.x, state.pose.y)
        rb = total(state, (cmd, c1, c2), counter, v_des, state.colliding, config.reward,
                   dist_to_subgoal=_planar(pos, target), use_posture_term=ep.posture_term)
        c2, c1 = c1, cmd
        collisions += int(state.colliding)
        seg_rewards.append(rb.total)
        t += 1
        if rows is not None:
            p = state.pose
            rows.append([round(t * DT, 6), p.x, p.y, p.z, p.yaw, p.roll, *state.achieved, *cmd,
                         int(state.colliding), *rb.terms, rb.total])
        if curriculum is not None:
            observe_goal(curriculum, pos, cc.arrival_radius)
            for _ in range(curriculum.last_advanced):
                segs.append(segment_return(seg_rewards, cc.gamma, len(seg_rewards) - 1, curriculum.k, seg_index))
                seg_rewards = []
                seg_index += 1
            if curriculum.complete:
                success = True
                break
            if len(seg_rewards) >= seg_ticks:
                break
        elif _planar(pos, goal) < radius:
            segs.append(segment_return(seg_rewards, cc.gamma, len(seg_rewards) - 1, 0, 1))
            seg_rewards = []
            success = True
            break
    if seg_rewards:
        segs.append(segment_return(seg_rewards, cc.gamma, None, curriculum.k if curriculum else 0, seg_index))
    return EpisodeResult(
        success=success,
        path_length=state.cumulative_path_length,
        shortest=task.shortest,
        collisions=collisions,
        ticks=t,
        timeout=not success,
        final_distance=_planar(pos, goal),
        segment_returns=segs,
        trajectory=rows,
    )


def write_trajectory(rows, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(TRAJECTORY_COLUMNS)
        for r in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
