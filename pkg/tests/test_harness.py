import json
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from posturenav.core import VoxelWorld
from posturenav.harness.cli import EXIT_CONFIG, EXIT_GENERATION, EXIT_OK, main
from posturenav.harness.config import ConfigError, RunConfig, config_from_dict, dump_config, load_config
from posturenav.harness.episode import TRAJECTORY_COLUMNS, run_episode, write_trajectory
from posturenav.harness.io import WorldFileError, load_world, save_world, world_from_dict, world_to_dict
from posturenav.harness.metrics import MetricError, compute_spl, compute_sr, evaluate
from posturenav.harness.tasks import SuiteError, Task, TaskSuite, generate_tasks
from posturenav.policy import OraclePolicy, StationaryPolicy
from posturenav.worldgen.presets import Preset

from worlds import flat, wall, with_obstacles


def R(success, p, l):
    return SimpleNamespace(success=success, path_length=p, shortest=l)


class TestMetrics:
    def test_spl_examples(self):
        assert compute_spl([R(True, 10, 10)]) == 100.0
        assert compute_spl([R(True, 10, 10), R(False, 3, 10)]) == 50.0
        assert compute_spl([R(True, 10, 8)]) == pytest.approx(80.0)

    def test_empty(self):
        with pytest.raises(MetricError):
            compute_spl([])
        with pytest.raises(MetricError):
            compute_sr([])

    @given(st.lists(st.tuples(st.booleans(), st.floats(0, 50), st.floats(0.1, 50)), min_size=1, max_size=50))
    def test_spl_bounded_by_sr(self, rows):
        rs = [R(*r) for r in rows]
        assert 0 <= compute_spl(rs) <= compute_sr(rs) + 1e-9 <= 100 + 1e-9


class TestTasks:
    def test_band_integrity(self):
        w = flat(20, 20)
        suite = generate_tasks(w, (0, 0, 10), seed=1)
        assert len(suite) == 10
        for t in suite.tasks:
            assert 20 <= t.planar_distance <= 30 and t.shortest >= t.planar_distance - 1e-6

    def test_deterministic(self, preset_worlds):
        w = preset_worlds[Preset.ROOM]
        assert generate_tasks(w, (3, 3, 3), 5).to_dict() == generate_tasks(w, (3, 3, 3), 5).to_dict()

    def test_sealed_world(self):
        occ = np.ones((30, 30, 20), dtype=bool)
        w = VoxelWorld(occ, np.zeros((30, 30)))
        with pytest.raises(SuiteError):
            generate_tasks(w, (1, 0, 0), 0)

    def test_unreachable_band_names_it(self):
        with pytest.raises(SuiteError, match=r"\[20,30\]"):
            generate_tasks(flat(10, 10), (0, 0, 1), 0, max_samples=50)

    def test_roundtrip(self, tmp_path, preset_worlds):
        suite = generate_tasks(preset_worlds[Preset.ROOM], (2, 1, 0), 3)
        suite.save(tmp_path / "s.json")
        assert TaskSuite.load(tmp_path / "s.json").to_dict() == suite.to_dict()


def empty_task():
    return Task((1.0, 2.5, 0.0), (6.0, 2.5, 0.0), (5.0, 10.0), 5.0)


class TestEpisode:
    def test_oracle_empty(self):
        r = run_episode(flat(8, 5), empty_task(), OraclePolicy(), seed=0)
        assert r.success and r.final_distance < 0.2
        assert r.path_length / r.shortest <= 1.1 and r.collisions == 0
        assert r.path_length >= r.shortest - 0.2

    def test_stationary_times_out(self):
        r = run_episode(flat(8, 5), empty_task(), StationaryPolicy(), seed=0, timeout=5.0)
        assert not r.success and r.timeout and r.ticks == 50

    def test_deterministic(self):
        w = with_obstacles(flat(8, 5), wall(3.0, 1.5, 3.2, 3.5))
        a = run_episode(w, empty_task(), OraclePolicy(), seed=4)
        b = run_episode(w, empty_task(), OraclePolicy(), seed=4)
        assert a.to_dict() == b.to_dict()

    def test_trajectory_csv(self, tmp_path):
        r = run_episode(flat(8, 5), empty_task(), OraclePolicy(), seed=0, record=True)
        write_trajectory(r.trajectory, tmp_path / "t.csv")
        lines = (tmp_path / "t.csv").read_text().splitlines()
        assert lines[0].split(",") == list(TRAJECTORY_COLUMNS) and len(lines) == r.ticks + 1


class TestEvaluate:
    def test_report(self):
        w = flat(8, 5)
        suite = TaskSuite([empty_task(), Task((1.0, 1.0, 0.0), (7.0, 4.0, 0.0), (5.0, 10.0), 6.708204)])
        rep = evaluate(w, suite, {"oracle": OraclePolicy, "stay": StationaryPolicy}, [0, 1],
                       RunConfig())
        o, s = rep.policies["oracle"], rep.policies["stay"]
        assert o["SR"]["mean"] == 100 and o["SPL"]["mean"] >= 90
        assert s["SR"]["mean"] == 0 and s["SPL"]["mean"] == 0
        for _, _, sr, spl in rep.cells():
            assert spl <= sr
        again = evaluate(w, suite, {"oracle": OraclePolicy, "stay": StationaryPolicy}, [0, 1])
        assert again.to_json() == rep.to_json()


class TestConfig:
    def test_roundtrip(self, tmp_path):
        p = tmp_path / "c.toml"
        p.write_text(dump_config())
        assert load_config(p) == RunConfig()

    def test_override(self):
        cfg = config_from_dict({"reward": {"w1": 7.0}, "curriculum": {"M": 5}})
        assert cfg.reward.w1 == 7.0 and cfg.curriculum.M == 5

    @pytest.mark.parametrize("doc", [{"nope": {}}, {"reward": {"w99": 1.0}}, {"curriculum": {"M": "x"}},
                                     {"executor": {"delay_steps": -1}}])
    def test_invalid(self, doc):
        with pytest.raises(ConfigError):
            config_from_dict(doc)


class TestWorldIO:
    def test_roundtrip(self, tmp_path, preset_worlds):
        w = preset_worlds[Preset.COMPLEX1]
        save_world(w, tmp_path / "w.json")
        back = load_world(tmp_path / "w.json")
        assert back.digest() == w.digest() and back.meta == json.loads(json.dumps(w.meta))

    def test_tamper(self):
        d = world_to_dict(flat())
        d["digest"] = "0" * 64
        with pytest.raises(WorldFileError):
            world_from_dict(d)
        with pytest.raises(WorldFileError):
            world_from_dict({"format": "other"})


class TestCLI:
    def test_pipeline(self, tmp_path, capsys):
        w, s, m = (str(tmp_path / n) for n in ("w.json", "s.json", "m.json"))
        assert main(["gen", "--preset", "Room", "--seed", "2", "--out", w]) == EXIT_OK
        assert main(["tasks", "--world", w, "--counts", "2", "0", "0", "--seed", "1", "--out", s]) == EXIT_OK
        assert main(["run", "--world", w, "--suite", s, "--policy", "greedy", "--pgcl",
                     "--trajectory", str(tmp_path / "t.csv")]) == EXIT_OK
        assert main(["eval", "--world", w, "--suite", s, "--policies", "oracle", "bug", "--out", m,
                     "--dump-curriculum", str(tmp_path / "c.json")]) == EXIT_OK
        rep = json.loads(open(m).read())
        assert set(rep["policies"]) == {"oracle", "bug"}
        dump = json.loads((tmp_path / "c.json").read_text())
        assert len(dump) == 2 and len(dump[0]["levels"][-1]["goals"]) == 1
        assert main(["export", "--world", w, "--out", str(tmp_path / "e.json")]) == EXIT_OK
        assert main(["config"]) == EXIT_OK

    def test_exit_codes(self, tmp_path):
        bad = tmp_path / "bad.toml"
        bad.write_text("[reward]\nw1 = 'x'\n")
        w = str(tmp_path / "w.json")
        save_world(flat(10, 10), w)
        assert main(["tasks", "--world", w, "--config", str(bad), "--out", str(tmp_path / "s")]) == EXIT_CONFIG
        assert main(["tasks", "--world", w, "--counts", "0", "0", "1", "--out", str(tmp_path / "s")]) \
            == EXIT_GENERATION
        (tmp_path / "junk.json").write_text("{}")
        assert main(["tasks", "--world", str(tmp_path / "junk.json"), "--out", str(tmp_path / "s")]) \
            == EXIT_GENERATION
