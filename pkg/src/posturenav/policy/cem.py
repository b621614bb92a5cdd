"""Cross-entropy method over a parameter vector."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import derive_seed, seeded_rng


@dataclass(frozen=True)
class CEMConfig:
    population: int = 16
    elite_frac: float = 0.25
    iterations: int = 40
    init_mean: tuple = (1.0, 0.5, 0.3, 0.3, 0.25, 0.6)
    init_std: tuple = (1.0, 0.5, 0.2, 0.15, 0.15, 0.3)
    min_std: float = 0.0
    std_smoothing: float = 0.3  # weight of the elite std in the refit
    episodes_per_candidate: int = 1
    elitism: bool = True

    def __post_init__(self):
        if not 0.0 < self.elite_frac < 1.0:
            raise ValueError("elite_frac must lie in (0, 1)")
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if not 0.0 < self.std_smoothing <= 1.0:
            raise ValueError("std_smoothing must lie in (0, 1]")
        if len(self.init_mean) != len(self.init_std):
            raise ValueError("init_mean and init_std differ in length")

    @property
    def n_elite(self) -> int:
        return max(1, int(round(self.population * self.elite_frac)))


@dataclass
class CEMResult:
    best: np.ndarray
    best_score: float
    mean: np.ndarray
    curve: list = field(default_factory=list)  # per-iteration population mean score
    best_curve: list = field(default_factory=list)  # per-iteration best score

    def to_dict(self) -> dict:
        return {"best": self.best.tolist(), "best_score": self.best_score, "mean": self.mean.tolist(),
                "curve": list(self.curve), "best_curve": list(self.best_curve)}


def cem_optimize(evaluate, cfg: CEMConfig, seed: int, transform=None) -> CEMResult:
    """Maximize ``evaluate(theta, iteration, index, cand_seed)``.

    Candidates are drawn from a diagonal Gaussian. The mean is refit to the
    elite; the std moves toward the elite std by ``std_smoothing``, which keeps
    it from collapsing before the mean has settled. With ``elitism`` the best candidate so far is re-entered in
    every population. ``transform`` maps raw samples into the feasible set
    before evaluation (e.g. clipping to bounds).
    """
    rng = seeded_rng(seed, "cem/sample")
    mean = np.asarray(cfg.init_mean, dtype=float)
    std = np.asarray(cfg.init_std, dtype=float)
    best, best_score = None, -np.inf
    result = CEMResult(mean.copy(), -np.inf, mean.copy())
    for it in range(cfg.iterations):
        pop = mean + std * rng.standard_normal((cfg.population, len(mean)))
        if transform is not None:
            pop = np.array([transform(p) for p in pop])
        if cfg.elitism and best is not None:
            pop[-1] = best
        scores = np.array([evaluate(pop[c], it, c, derive_seed(seed, "cem", it, c)) for c in range(cfg.population)])
        order = np.argsort(-scores, kind="stable")
        elite = pop[order[:cfg.n_elite]]
        mean = elite.mean(axis=0)
        a = cfg.std_smoothing
        std = np.maximum(a * elite.std(axis=0) + (1.0 - a) * std, cfg.min_std)
        if scores[order[0]] > best_score or best is None:
            best, best_score = pop[order[0]].copy(), float(scores[order[0]])
        result.curve.append(float(scores.mean()))
        result.best_curve.append(float(scores[order[0]]))
    result.best, result.best_score, result.mean = best, best_score, mean
    return result
