"""Command line: gen, tasks, run, train, eval, export."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace

from ..curriculum.pgcl import CurriculumState, sample_subgoals
from ..curriculum.planner import PlanningError, plan_global_path
from ..policy import (BugPolicy, GreedyPolicy, OracleConfig, OraclePolicy, ReactiveParams, ReactivePolicy,
                      StationaryPolicy, WallFollowPolicy)
from ..worldgen.presets import Preset, preset_world
from ..worldgen.wfc import WorldGenError
from .config import ConfigError, RunConfig, dump_config, load_config
from .episode import run_episode, write_trajectory
from .io import WorldFileError, export_world_summary, load_json, load_world, save_json, save_world
from .metrics import evaluate
from .tasks import SuiteError, TaskSuite, generate_tasks
from .train import cem_train

EXIT_OK = 0
EXIT_GENERATION = 2
EXIT_CONFIG = 3

log = logging.getLogger("posturenav")


def policy_factory(name: str, params_path: str | None = None):
    """Zero-argument factory for a named policy."""
    if name == "reactive":
        params = ReactiveParams()
        if params_path:
            doc = load_json(params_path)
            params = ReactiveParams(**doc.get("params", doc))
        return lambda: ReactivePolicy(params)
    table = {
        "oracle": OraclePolicy,
        "oracle-noposture": lambda: OraclePolicy(OracleConfig(allow_posture=False)),
        "bug": BugPolicy,
        "wall-follow": WallFollowPolicy,
        "greedy": GreedyPolicy,
        "stationary": StationaryPolicy,
    }
    if name not in table:
        raise ConfigError(f"unknown policy {name!r}; choose from {sorted(table) + ['reactive']}")
    return table[name]


def _config(args) -> RunConfig:
    return load_config(args.config) if getattr(args, "config", None) else RunConfig()


def cmd_gen(args) -> int:
    world = preset_world(Preset.parse(args.preset), args.seed)
    save_world(world, args.out)
    print(f"{args.out}: {world.dims} digest {world.digest()[:12]}")
    return EXIT_OK


def cmd_tasks(args) -> int:
    cfg = _config(args)
    world = load_world(args.world)
    counts = tuple(args.counts) if args.counts else cfg.tasks.counts
    suite = generate_tasks(world, counts, args.seed, cfg.tasks.bands, cfg.tasks.max_samples, cfg.planner,
                           cfg.geometry)
    suite.save(args.out)
    print(f"{args.out}: {len(suite)} tasks")
    return EXIT_OK


def _curriculum(world, task, cfg: RunConfig) -> CurriculumState:
    cc = cfg.curriculum
    path = plan_global_path(world, task.start[:2], task.goal[:2], True, cfg.planner)
    return CurriculumState.start(path, task.goal, world, cc.d0, cc.step, cc.M)


def cmd_run(args) -> int:
    cfg = _config(args)
    world = load_world(args.world)
    suite = TaskSuite.load(args.suite)
    task = suite.tasks[args.index]
    policy = policy_factory(args.policy, args.params)()
    cs = _curriculum(world, task, cfg) if args.pgcl else None
    r = run_episode(world, task, policy, cfg, args.seed, curriculum=cs, record=bool(args.trajectory))
    if args.trajectory:
        write_trajectory(r.trajectory, args.trajectory)
    print(json.dumps(r.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _config(args)
    if args.policy != "cem":
        raise ConfigError("only --policy cem is trainable")
    cem = cfg.cem
    if args.iterations is not None or args.population is not None:
        cem = replace(cem, iterations=args.iterations or cem.iterations,
                      population=args.population or cem.population)
    envs = []
    for k in range(args.worlds):
        world = preset_world(Preset.parse(args.preset), args.world_seed + k)
        suite = generate_tasks(world, (args.tasks_per_world, 0, 0), args.seed + k, planner_config=cfg.planner)
        envs += [(world, t) for t in suite.tasks]

    def progress(it, mean, best):
        log.info("iteration %d mean %.3f best %.3f", it, mean, best)

    result = cem_train(envs, args.pgcl == "on", cem, args.seed, cfg, progress)
    save_json(result.to_dict(), args.out)
    print(f"{args.out}: {result.params}")
    return EXIT_OK


def cmd_eval(args) -> int:
    cfg = _config(args)
    world = load_world(args.world)
    suite = TaskSuite.load(args.suite)
    params = dict(p.split("=", 1) for p in args.params or [])
    policies = {}
    for name in args.policies:
        policies[name] = policy_factory(name.split(":")[0], params.get(name))
    report = evaluate(world, suite, policies, args.seeds, cfg, args.workers)
    if args.out:
        report.save(args.out)
    else:
        print(report.to_json())
    if args.dump_curriculum:
        dumps = []
        for i, task in enumerate(suite.tasks):
            cs = _curriculum(world, task, cfg)
            levels = []
            while True:
                levels.append(cs.goals.to_dict())
                if cs.at_final_level:
                    break
                cs.k += 1
                cs.d += cs.step
                cs.goals = sample_subgoals(cs.path, cs.d, cs.goal, cs.k, world)
            dumps.append({"task": i, "path": cs.path.to_dict(), "K": cs.K, "levels": levels})
        save_json(dumps, args.dump_curriculum)
    return EXIT_OK


def cmd_export(args) -> int:
    world = load_world(args.world)
    if args.suite is None:
        save_json(export_world_summary(world), args.out)
    else:
        cfg = _config(args)
        suite = TaskSuite.load(args.suite)
        r = run_episode(world, suite.tasks[args.index], policy_factory(args.policy)(), cfg, args.seed, record=True)
        write_trajectory(r.trajectory, args.out)
    print(args.out)
    return EXIT_OK


def cmd_config(args) -> int:
    sys.stdout.write(dump_config())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="posturenav", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a preset world")
    g.add_argument("--preset", required=True, choices=[x.value for x in Preset])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("tasks", help="sample a task suite for a world")
    t.add_argument("--world", required=True)
    t.add_argument("--counts", type=int, nargs=3, metavar=("N5_10", "N10_20", "N20_30"))
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--config")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_tasks)

    r = sub.add_parser("run", help="run one episode")
    r.add_argument("--world", required=True)
    r.add_argument("--suite", required=True)
    r.add_argument("--index", type=int, default=0)
    r.add_argument("--policy", default="oracle")
    r.add_argument("--params", help="learned reactive parameters (JSON)")
    r.add_argument("--pgcl", action="store_true", help="follow the level-1 sub-goal sequence")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--trajectory", help="CSV trajectory output")
    r.add_argument("--config")
    r.set_defaults(func=cmd_run)

    tr = sub.add_parser("train", help="CEM-train the reactive controller")
    tr.add_argument("--policy", default="cem")
    tr.add_argument("--pgcl", choices=["on", "off"], default="on")
    tr.add_argument("--seed", type=int, default=0)
    tr.add_argument("--preset", default="Room", choices=[x.value for x in Preset])
    tr.add_argument("--worlds", type=int, default=4)
    tr.add_argument("--world-seed", type=int, default=100)
    tr.add_argument("--tasks-per-world", type=int, default=5)
    tr.add_argument("--iterations", type=int)
    tr.add_argument("--population", type=int)
    tr.add_argument("--config")
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=cmd_train)

    e = sub.add_parser("eval", help="evaluate policies over a suite and seeds")
    e.add_argument("--world", required=True)
    e.add_argument("--suite", required=True)
    e.add_argument("--policies", nargs="+", default=["oracle"])
    e.add_argument("--params", nargs="*", metavar="POLICY=PATH")
    e.add_argument("--seeds", type=int, nargs="+", default=[0])
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--dump-curriculum", metavar="PATH")
    e.add_argument("--config")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    x = sub.add_parser("export", help="world layers as JSON, or with --suite a trajectory as CSV")
    x.add_argument("--world", required=True)
    x.add_argument("--suite")
    x.add_argument("--index", type=int, default=0)
    x.add_argument("--policy", default="oracle")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--config")
    x.add_argument("--out", required=True)
    x.set_defaults(func=cmd_export)

    c = sub.add_parser("config", help="print the default configuration as TOML")
    c.set_defaults(func=cmd_config)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (WorldGenError, PlanningError, SuiteError, WorldFileError) as e:
        print(f"generation error: {e}", file=sys.stderr)
        return EXIT_GENERATION


if __name__ == "__main__":
    sys.exit(main())
