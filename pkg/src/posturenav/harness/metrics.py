"""SR / SPL metrics and multi-seed evaluation reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..core import derive_seed
from .config import RunConfig
from .episode import EpisodeResult, run_episode
from .tasks import TaskSuite, band_label

SCHEMA_VERSION = 1


class MetricError(ValueError):
    pass


def compute_sr(results) -> float:
    if len(results) == 0:
        raise MetricError("success rate of an empty result set is undefined")
    return 100.0 * sum(1.0 for r in results if r.success) / len(results)


def compute_spl(results) -> float:
    """100 * mean of S_i * l_i / max(p_i, l_i)."""
    if len(results) == 0:
        raise MetricError("SPL of an empty result set is undefined")
    acc = 0.0
    for r in results:
        if r.success:
            denom = max(r.path_length, r.shortest)
            acc += r.shortest / denom if denom > 0 else 1.0
    return 100.0 * acc / len(results)


def collision_summary(counts) -> dict:
    c = np.asarray(counts, dtype=float)
    if c.size == 0:
        return {"n": 0}
    return {
        "n": int(c.size), "mean": float(c.mean()), "median": float(np.median(c)),
        "p90": float(np.percentile(c, 90)), "max": float(c.max()),
        "zero_fraction": float((c == 0).mean()),
    }


def _mean_std(v) -> dict:
    a = np.asarray(v, dtype=float)
    return {"mean": float(a.mean()), "std": float(a.std())}


@dataclass
class MetricsReport:
    policies: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "meta": self.meta, "policies": self.policies}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.to_json() + "\n")

    def cells(self):
        """Yield (policy, band, SR, SPL) for every per-seed cell."""
        for name, rep in self.policies.items():
            for s in rep["per_seed"]:
                for band, m in s["bands"].items():
                    yield name, band, m["SR"], m["SPL"]
                yield name, "all", s["SR"], s["SPL"]


def summarize(results_by_seed: dict, suite: TaskSuite) -> dict:
    """Per-seed and across-seed SR/SPL overall and per band, plus collisions."""
    per_seed = []
    bands = sorted({tuple(t.band) for t in suite.tasks})
    for seed, results in results_by_seed.items():
        entry = {"seed": seed, "SR": compute_sr(results), "SPL": compute_spl(results), "bands": {}}
        for b in bands:
            sub = [r for r, t in zip(results, suite.tasks) if tuple(t.band) == b]
            entry["bands"][band_label(b)] = {"SR": compute_sr(sub), "SPL": compute_spl(sub), "n": len(sub)}
        per_seed.append(entry)
    out = {
        "SR": _mean_std([e["SR"] for e in per_seed]),
        "SPL": _mean_std([e["SPL"] for e in per_seed]),
        "bands": {},
        "collisions": collision_summary([r.collisions for rs in results_by_seed.values() for r in rs]),
        "per_seed": per_seed,
    }
    for b in bands:
        lab = band_label(b)
        out["bands"][lab] = {"SR": _mean_std([e["bands"][lab]["SR"] for e in per_seed]),
                             "SPL": _mean_std([e["bands"][lab]["SPL"] for e in per_seed])}
    return out


def _job(args):
    world, task, factory, config, seed = args
    return run_episode(world, task, factory(), config, seed)


def run_suite(world, suite: TaskSuite, factory, seed: int, config: RunConfig = RunConfig(),
              workers: int = 1) -> list[EpisodeResult]:
    """All tasks of ``suite`` under one evaluation seed, in suite order."""
    jobs = [(world, t, factory, config, derive_seed(seed, "episode", i)) for i, t in enumerate(suite.tasks)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            return list(ex.map(_job, jobs))
    return [_job(j) for j in jobs]


def evaluate(world, suite: TaskSuite, policies: dict, seeds, config: RunConfig = RunConfig(),
             workers: int = 1) -> MetricsReport:
    """Cross product of policies and seeds over the suite.

    ``policies`` maps a name to a zero-argument factory returning a fresh policy.
    """
    report = MetricsReport(meta={"world_digest": suite.world_digest, "suite_seed": suite.seed,
                                 "n_tasks": len(suite), "seeds": [int(s) for s in seeds]})
    for name in sorted(policies):
        by_seed = {int(s): run_suite(world, suite, policies[name], int(s), config, workers) for s in seeds}
        report.policies[name] = summarize(by_seed, suite)
    return report
