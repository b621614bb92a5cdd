"""Command-tracking executor standing in for the low-level controller."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..core import DT, STAND, AgentState, Command, Pose, VoxelWorld, wrap_angle
from .geometry import BodyGeometry, check_collision

ROLL_LIMIT = math.pi / 2


@dataclass(frozen=True)
class ExecutorParams:
    """First-order lag, Gaussian tracking noise and a fixed command latency.

    The ``*_range`` fields bound per-episode randomization (see
    :meth:`randomized`); ``None`` disables it for that quantity.
    """

    tau: tuple = (0.25, 0.25, 0.20, 0.30, 0.30)
    noise_std: tuple = (0.05, 0.05, 0.05, 0.01, 0.02)
    delay_steps: int = 1
    tau_range: tuple | None = None  # (lo_scale, hi_scale)
    noise_range: tuple | None = None
    delay_range: tuple | None = None  # (lo, hi) inclusive

    def __post_init__(self):
        if len(self.tau) != 5 or len(self.noise_std) != 5:
            raise ValueError("tau and noise_std need one value per command channel")
        if min(self.tau) <= 0:
            raise ValueError("tau must be positive")
        if min(self.noise_std) < 0:
            raise ValueError("noise_std must be non-negative")
        if self.delay_steps < 0:
            raise ValueError("delay_steps must be non-negative")

    @classmethod
    def ideal(cls, delay_steps: int = 0) -> ExecutorParams:
        """Zero-noise executor (lag kept)."""
        return cls(noise_std=(0.0,) * 5, delay_steps=delay_steps)

    def randomized(self, rng: np.random.Generator) -> ExecutorParams:
        tau, noise, delay = np.array(self.tau), np.array(self.noise_std), self.delay_steps
        if self.tau_range is not None:
            tau = tau * rng.uniform(*self.tau_range, size=5)
        if self.noise_range is not None:
            noise = noise * rng.uniform(*self.noise_range, size=5)
        if self.delay_range is not None:
            delay = int(rng.integers(self.delay_range[0], self.delay_range[1] + 1))
        return replace(self, tau=tuple(float(v) for v in tau), noise_std=tuple(float(v) for v in noise),
                       delay_steps=delay)


def initial_state(world: VoxelWorld, x: float, y: float, yaw: float = 0.0,
                  params: ExecutorParams = ExecutorParams()) -> AgentState:
    """Agent standing still at nominal posture."""
    pose = Pose(float(x), float(y), world.ground_at(x, y) + STAND.h, wrap_angle(yaw), 0.0)
    return AgentState(pose=pose, achieved=STAND, pending=(STAND,) * params.delay_steps)


def _feasible(world, x, y, yaw, h, roll, geom) -> bool:
    return not check_collision(world, Pose(x, y, 0.0, yaw, roll), h, roll, geom)


def step(world: VoxelWorld, state: AgentState, cmd: Command, params: ExecutorParams,
         rng: np.random.Generator, geom: BodyGeometry = BodyGeometry()) -> AgentState:
    """Advance the agent by one high-level tick."""
    # 1. latency queue
    queue = list(state.pending)
    n = params.delay_steps
    if len(queue) < n:
        queue = [STAND] * (n - len(queue)) + queue
    elif len(queue) > n:
        queue = queue[len(queue) - n:]
    queue.append(Command(*cmd))
    active = queue.pop(0)

    # 2. first-order tracking with noise (draws made even when std is zero)
    a = state.achieved.as_array()
    c = active.as_array()
    alpha = 1.0 - np.exp(-DT / np.asarray(params.tau, dtype=float))
    eps = rng.standard_normal(5) * np.asarray(params.noise_std, dtype=float) * math.sqrt(DT)
    a_new = a + (c - a) * alpha + eps
    a_new[3] = max(a_new[3], 0.0)
    a_new[4] = min(max(a_new[4], -ROLL_LIMIT), ROLL_LIMIT)

    # 3. integrate with the pre-step heading
    p = state.pose
    cy, sy = math.cos(p.yaw), math.sin(p.yaw)
    vx, vy, wz, h, roll = (float(v) for v in a_new)
    x1 = p.x + (cy * vx - sy * vy) * DT
    y1 = p.y + (sy * vx + cy * vy) * DT
    yaw1 = wrap_angle(p.yaw + wz * DT)

    colliding = False
    xmin, xmax, ymin, ymax = world.bounds
    margin = 1e-6
    if not (xmin <= x1 < xmax and ymin <= y1 < ymax):
        x1 = min(max(x1, xmin + margin), xmax - margin)
        y1 = min(max(y1, ymin + margin), ymax - margin)
        colliding = True

    h0, roll0 = state.achieved.h, state.achieved.roll
    if _feasible(world, x1, y1, yaw1, h, roll, geom):
        x, y, yaw = x1, y1, yaw1
    else:
        # 4. roll back x, then y, then posture
        colliding = True
        x, y, yaw = p.x, p.y, p.yaw
        if _feasible(world, x1, y, yaw, h0, roll0, geom):
            x = x1
        if _feasible(world, x, y1, yaw, h0, roll0, geom):
            y = y1
        if _feasible(world, x, y, yaw1, h, roll, geom):
            yaw = yaw1
        else:
            h, roll = h0, roll0
        # realized rates replace the tracked ones
        dx, dy = x - p.x, y - p.y
        vx = (cy * dx + sy * dy) / DT
        vy = (-sy * dx + cy * dy) / DT
        wz = wrap_angle(yaw - p.yaw) / DT

    z = world.ground_at(x, y) + h
    pose = Pose(x, y, z, yaw, roll)
    return AgentState(
        pose=pose,
        achieved=Command(vx, vy, wz, h, roll),
        vz=(z - p.z) / DT,
        omega_xy=((roll - p.roll) / DT, 0.0),
        colliding=colliding,
        cumulative_path_length=state.cumulative_path_length + math.hypot(x - p.x, y - p.y),
        pending=tuple(queue),
    )
