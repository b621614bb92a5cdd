import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posturenav.curriculum.planner import Planner, PlanningError, grid_astar, path_cost, plan_global_path

from oracles import dijkstra_cost
from worlds import flat, slab, wall, with_obstacles


def test_empty_world_diagonal():
    p = plan_global_path(flat(), (0.5, 0.5), (4.5, 4.5))
    assert p.total_length == pytest.approx(4 * math.sqrt(2), rel=0.05)
    assert np.all(np.diff(p.cumulative_arclength) > 0)
    assert np.allclose(p.waypoints[0], (0.5, 0.5)) and np.allclose(p.waypoints[-1], (4.5, 4.5))


def test_start_equals_goal():
    p = plan_global_path(flat(), (2.0, 2.0), (2.0, 2.0))
    assert len(p.waypoints) == 1 and p.total_length == 0.0


def test_door():
    w = with_obstacles(flat(), wall(2.4, 0.0, 2.6, 2.0), wall(2.4, 3.0, 2.6, 5.0))
    pl = Planner(w)
    p = pl.plan((1.0, 1.0), (4.0, 1.0))
    # crosses the wall line inside the door
    xs = np.linspace(0, p.total_length, 2000)
    crossing = [pt for pt in (p.point_at(s) for s in xs) if 2.4 <= pt[0] <= 2.6]
    assert crossing and all(2.0 <= pt[1] <= 3.0 for pt in crossing)
    cells, counts = pl.grid_route((1.0, 1.0), (4.0, 1.0))
    free = pl.free_space()
    assert path_cost(counts) == pytest.approx(dijkstra_cost(free, cells[0], cells[-1]), abs=1e-9)


def test_blocked_raises():
    w = with_obstacles(flat(), wall(2.4, 0.0, 2.6, 5.0))
    with pytest.raises(PlanningError):
        plan_global_path(w, (1.0, 1.0), (4.0, 1.0))


def test_low_overhang_needs_posture():
    # a slab across the whole width that only a crouched body fits under
    w = with_obstacles(flat(), slab(2.0, 0.0, 3.0, 5.0, 0.25))
    pl = Planner(w)
    p = pl.plan((1.0, 2.5), (4.0, 2.5), allow_posture=True)
    assert "crouch" in p.postures
    with pytest.raises(PlanningError):
        pl.plan((1.0, 2.5), (4.0, 2.5), allow_posture=False)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_astar_matches_dijkstra(seed):
    rng = np.random.default_rng(seed)
    free = rng.random((20, 20)) > 0.3
    free[0, 0] = free[19, 19] = True
    res = grid_astar(free, (0, 0), (19, 19))
    ref = dijkstra_cost(free, (0, 0), (19, 19))
    if res is None:
        assert math.isinf(ref)
    else:
        cells, counts = res
        assert path_cost(counts) == pytest.approx(ref, abs=1e-9)
        for (a, b), (c, d) in zip(cells[:-1], cells[1:]):
            assert max(abs(a - c), abs(b - d)) == 1 and free[c, d]
