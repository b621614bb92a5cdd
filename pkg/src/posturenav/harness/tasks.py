"""Start-goal task suites sampled per distance band."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ..core import Pose, VoxelWorld, seeded_rng
from ..curriculum.planner import Planner, PlannerConfig, PlanningError
from ..sim.geometry import BodyGeometry, check_collision

DEFAULT_BANDS = ((5.0, 10.0), (10.0, 20.0), (20.0, 30.0))


class SuiteError(RuntimeError):
    pass


@dataclass(frozen=True)
class Task:
    start: tuple  # (x, y, yaw)
    goal: tuple  # (x, y, z)
    band: tuple  # (lo, hi) m
    shortest: float  # shortest feasible length l_i

    @property
    def planar_distance(self) -> float:
        return math.hypot(self.goal[0] - self.start[0], self.goal[1] - self.start[1])

    def to_dict(self) -> dict:
        return {"start": list(self.start), "goal": list(self.goal), "band": list(self.band),
                "shortest": self.shortest}

    @classmethod
    def from_dict(cls, d: dict) -> Task:
        return cls(tuple(d["start"]), tuple(d["goal"]), tuple(d["band"]), float(d["shortest"]))


@dataclass
class TaskSuite:
    tasks: list
    world_digest: str = ""
    seed: int = 0
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.tasks)

    def to_dict(self) -> dict:
        return {"format": "posturenav-suite", "version": 1, "world_digest": self.world_digest,
                "seed": self.seed, "meta": self.meta, "tasks": [t.to_dict() for t in self.tasks]}

    @classmethod
    def from_dict(cls, d: dict) -> TaskSuite:
        return cls([Task.from_dict(t) for t in d["tasks"]], d.get("world_digest", ""), int(d.get("seed", 0)),
                   d.get("meta", {}))

    def save(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_dict(), f, indent=1, sort_keys=True)

    @classmethod
    def load(cls, path) -> TaskSuite:
        with open(path) as f:
            return cls.from_dict(json.load(f))


def band_label(band) -> str:
    return f"[{band[0]:g},{band[1]:g}]"


def generate_tasks(world: VoxelWorld, counts, seed: int, bands=DEFAULT_BANDS, max_samples: int = 10_000,
                   planner_config: PlannerConfig | None = None, geom: BodyGeometry = BodyGeometry()) -> TaskSuite:
    """Rejection-sample collision-free, planner-feasible start-goal pairs per band.

    A sample draws a start among free columns, then a goal among free columns
    whose planar distance lies in the band. Raises :class:`SuiteError` naming
    the band if its quota is not met within ``max_samples`` samples.
    """
    planner = Planner(world, planner_config)
    free = planner.free_space(allow_posture=False)
    reach = planner.components(allow_posture=True)
    idx = np.argwhere(free)
    if len(idx) == 0:
        raise SuiteError("world has no free space for spawning")
    cx, cy = world.cell_center(idx[:, 0], idx[:, 1])
    tasks = []
    for b, (band, n) in enumerate(zip(bands, counts)):
        rng = seeded_rng(seed, f"tasks/{b}")
        got = 0
        for _ in range(max_samples):
            if got >= n:
                break
            k = int(rng.integers(len(idx)))
            sx, sy = float(cx[k]), float(cy[k])
            yaw = float(rng.uniform(-math.pi, math.pi))
            d = np.hypot(cx - sx, cy - sy)
            lab = reach[idx[k, 0], idx[k, 1]]
            cand = np.flatnonzero((d >= band[0]) & (d <= band[1]) & (reach[idx[:, 0], idx[:, 1]] == lab))
            if len(cand) == 0 or lab == 0:
                continue
            m = int(cand[rng.integers(len(cand))])
            gx, gy = float(cx[m]), float(cy[m])
            if check_collision(world, Pose(sx, sy, 0.0, yaw), geom.nominal_h, 0.0, geom):
                continue
            try:
                length = planner.shortest_length((sx, sy), (gx, gy), allow_posture=True)
            except PlanningError:
                continue
            tasks.append(Task((round(sx, 6), round(sy, 6), round(yaw, 9)),
                              (round(gx, 6), round(gy, 6), world.ground_at(gx, gy)), tuple(band),
                              round(length, 9)))
            got += 1
        if got < n:
            raise SuiteError(f"band {band_label(band)}: only {got} of {n} tasks after {max_samples} samples")
    return TaskSuite(tasks, world.digest(), int(seed), {"bands": [list(b) for b in bands], "counts": list(counts)})
