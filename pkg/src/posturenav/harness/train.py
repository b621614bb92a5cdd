"""CEM training of the reactive controller, with or without the path-guided curriculum."""

from __future__ import annotations

import copy
from dataclasses import dataclass, field

import numpy as np

from ..core import derive_seed
from ..curriculum.pgcl import CurriculumState, advance_level
from ..curriculum.planner import plan_global_path
from ..policy.cem import CEMConfig, CEMResult, cem_optimize
from ..policy.reactive import ReactiveParams, ReactivePolicy
from .config import RunConfig
from .episode import run_episode


@dataclass
class TrainResult:
    params: ReactiveParams
    pgcl: bool
    cem: CEMResult
    levels: list = field(default_factory=list)  # curriculum level per training task at the end

    def to_dict(self) -> dict:
        return {"params": self.params.to_dict(), "pgcl": self.pgcl, "cem": self.cem.to_dict(),
                "levels": list(self.levels)}


class _Curricula:
    """One curriculum per training task, advanced by the iteration's best candidate."""

    def __init__(self, envs, config: RunConfig):
        cc = config.curriculum
        self.states = []
        for world, task in envs:
            path = plan_global_path(world, task.start[:2], task.goal[:2], True, config.planner)
            self.states.append(CurriculumState.start(path, task.goal, world, cc.d0, cc.step, cc.M))

    def snapshot(self, idx: int) -> CurriculumState:
        return copy.copy(self.states[idx])


def cem_train(envs, pgcl: bool, cfg: CEMConfig | None = None, seed: int = 0,
              config: RunConfig = RunConfig(), progress=None) -> TrainResult:
    """Fit :class:`ReactiveParams` by CEM on ``envs``, a list of ``(world, task)`` pairs.

    Iteration ``it`` trains on ``envs[it % len(envs)]``; every candidate of an
    iteration sees the same task and episode seeds. A candidate's fitness is
    its summed segment returns. With ``pgcl`` the targets are the task's
    current sub-goal sequence and the episode ends after a segment timeout;
    without it the final goal is the only target, under the same time limit.
    """
    cfg = cfg or config.cem
    if not envs:
        raise ValueError("no training tasks")
    curricula = _Curricula(envs, config) if pgcl else None
    seg_timeout = config.curriculum.segment_timeout
    outcomes: dict = {}

    def evaluate(theta, it, c, cand_seed):
        idx = it % len(envs)
        world, task = envs[idx]
        policy = ReactivePolicy(ReactiveParams.from_vector(theta))
        score = 0.0
        wins = 0
        for e in range(cfg.episodes_per_candidate):
            ep_seed = derive_seed(seed, "train", it, e)  # shared across candidates
            if pgcl:
                r = run_episode(world, task, policy, config, ep_seed, curriculum=curricula.snapshot(idx))
            else:
                r = run_episode(world, task, policy, config, ep_seed,
                                goal_radius=config.episode.train_goal_radius, timeout=seg_timeout)
            score += r.total_return
            wins += int(r.success)
        outcomes[(it, c)] = (score, wins == cfg.episodes_per_candidate)
        if c == cfg.population - 1:
            _end_iteration(it)
        return score

    def _end_iteration(it):
        scores = [outcomes[(it, c)] for c in range(cfg.population)]
        best = max(range(cfg.population), key=lambda c: (scores[c][0], -c))
        if curricula is not None:
            advance_level(curricula.states[it % len(envs)], scores[best][1])
        if progress is not None:
            progress(it, float(np.mean([s for s, _ in scores])), scores[best][0])

    result = cem_optimize(evaluate, cfg, derive_seed(seed, "cem", int(pgcl)),
                          transform=lambda v: ReactiveParams.from_vector(v).as_vector())
    levels = [cs.k for cs in curricula.states] if curricula is not None else []
    return TrainResult(ReactiveParams.from_vector(result.best), pgcl, result, levels)
