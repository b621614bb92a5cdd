"""Global path planning on privileged maps.

The planar free space is derived from per-column overhead clearance: a column
is passable at nominal posture when the standing body fits under the lowest
obstacle above it, and passable crouched when the lowest body height does.
Blocked columns are inflated by a body half-extent. Routes are found by A*
over the skeleton of that free space (its generalized Voronoi diagram), with
8-connected grid A* as the fallback, then tightened by line-of-sight
shortcutting.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from skimage.morphology import skeletonize

from ..core import NOMINAL_H, VoxelWorld

SQRT2 = math.sqrt(2.0)
_NEIGHBORS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))


class PlanningError(RuntimeError):
    pass


@dataclass(frozen=True)
class PlannerConfig:
    inflation: float = 0.25  # body half-width 0.15 + 0.10 tracking margin
    min_inflation: float = 0.15  # body half-width
    body_thickness: float = 0.12
    nominal_h: float = NOMINAL_H
    h_min: float = 0.1
    clearance_margin: float = 0.02
    posture_radius: float = 0.35  # half-diagonal of the body footprint

    @property
    def nominal_clearance(self) -> float:
        return self.nominal_h + self.body_thickness / 2 + self.clearance_margin

    @property
    def crouch_clearance(self) -> float:
        return self.h_min + self.body_thickness / 2 + self.clearance_margin


@dataclass
class GlobalPath:
    waypoints: np.ndarray  # (N, 2)
    cumulative_arclength: np.ndarray  # (N,)
    postures: list = field(default_factory=list)  # per edge: nominal / crouch / roll
    clearance: np.ndarray = None  # min overhead clearance near each waypoint
    route: str = "gvd"

    @property
    def total_length(self) -> float:
        return float(self.cumulative_arclength[-1])

    def point_at(self, s: float) -> np.ndarray:
        """Planar point at arclength ``s`` (clamped to the path)."""
        s = min(max(s, 0.0), self.total_length)
        w, a = self.waypoints, self.cumulative_arclength
        if len(w) == 1:
            return w[0].copy()
        i = int(np.searchsorted(a, s, side="right")) - 1
        i = min(max(i, 0), len(w) - 2)
        seg = a[i + 1] - a[i]
        t = 0.0 if seg <= 0 else (s - a[i]) / seg
        return w[i] + t * (w[i + 1] - w[i])

    def project(self, p, s_hint: float | None = None, window: float = 2.0) -> float:
        """Arclength of the closest path point, searched near ``s_hint`` if given."""
        w, a = self.waypoints, self.cumulative_arclength
        if len(w) == 1:
            return 0.0
        p = np.asarray(p, dtype=float)
        d = w[1:] - w[:-1]
        L2 = np.maximum((d * d).sum(axis=1), 1e-12)
        t = np.clip(((p - w[:-1]) * d).sum(axis=1) / L2, 0.0, 1.0)
        q = w[:-1] + t[:, None] * d
        dist = np.hypot(*(q - p).T)
        s = a[:-1] + t * np.sqrt(L2)
        if s_hint is not None:
            dist = np.where(np.abs(s - s_hint) <= window, dist, np.inf)
            if not np.isfinite(dist).any():
                return float(s_hint)
        return float(s[int(np.argmin(dist))])

    def to_dict(self) -> dict:
        return {
            "waypoints": np.round(self.waypoints, 6).tolist(),
            "arclength": np.round(self.cumulative_arclength, 6).tolist(),
            "total_length": round(self.total_length, 6),
            "postures": list(self.postures),
            "route": self.route,
        }


def _arclength(w: np.ndarray) -> np.ndarray:
    if len(w) < 2:
        return np.zeros(len(w))
    return np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(w, axis=0).T))])


# ----------------------------------------------------------------------------
# grid search


def grid_astar(free: np.ndarray, start: tuple[int, int], goal: tuple[int, int],
               corner_mask: np.ndarray | None = None):
    """8-connected A* on a boolean grid; diagonal moves may not cut corners.

    Returns ``(cells, (n_straight, n_diagonal))`` or ``None`` if unreachable.
    Step costs are 1 and sqrt(2) cells. ``corner_mask`` (default ``free``)
    is the grid the two cells flanking a diagonal step must be free in.
    """
    corner = free if corner_mask is None else corner_mask
    nx, ny = free.shape
    sx, sy = start
    gx, gy = goal
    if not (free[sx, sy] and free[gx, gy]):
        return None
    if start == goal:
        return [start], (0, 0)
    g = np.full(nx * ny, np.inf)
    parent = np.full(nx * ny, -1, dtype=np.int64)
    closed = np.zeros(nx * ny, dtype=bool)
    s0 = sx * ny + sy
    g[s0] = 0.0

    def h(x, y):
        dx, dy = abs(x - gx), abs(y - gy)
        return (dx + dy) + (SQRT2 - 2.0) * min(dx, dy)

    heap = [(h(sx, sy), 0.0, s0)]
    goal_idx = gx * ny + gy
    while heap:
        _, gc, idx = heapq.heappop(heap)
        if closed[idx]:
            continue
        closed[idx] = True
        if idx == goal_idx:
            break
        x, y = divmod(idx, ny)
        for dx, dy in _NEIGHBORS:
            u, v = x + dx, y + dy
            if u < 0 or v < 0 or u >= nx or v >= ny or not free[u, v]:
                continue
            if dx and dy:
                if not (corner[x + dx, y] and corner[x, y + dy]):
                    continue
                step = SQRT2
            else:
                step = 1.0
            j = u * ny + v
            ng = gc + step
            if ng < g[j] - 1e-12:
                g[j] = ng
                parent[j] = idx
                heapq.heappush(heap, (ng + h(u, v), ng, j))
    if not closed[goal_idx]:
        return None
    cells = []
    idx = goal_idx
    while idx != -1:
        cells.append(divmod(int(idx), ny))
        idx = parent[idx]
    cells.reverse()
    n_s = n_d = 0
    for (a, b), (c, d) in zip(cells[:-1], cells[1:]):
        if a != c and b != d:
            n_d += 1
        else:
            n_s += 1
    return cells, (n_s, n_d)


def path_cost(counts: tuple[int, int], resolution: float = 1.0) -> float:
    n_s, n_d = counts
    return (n_s + n_d * SQRT2) * resolution


def _nearest_in_mask(free: np.ndarray, start: tuple[int, int], target: np.ndarray):
    """Weighted BFS from ``start`` over ``free`` until a ``target`` cell is popped."""
    nx, ny = free.shape
    dist = {start: 0.0}
    parent = {start: None}
    heap = [(0.0, start)]
    while heap:
        d, (x, y) = heapq.heappop(heap)
        if d > dist[(x, y)]:
            continue
        if target[x, y]:
            cells = []
            c = (x, y)
            while c is not None:
                cells.append(c)
                c = parent[c]
            return cells[::-1]
        for dx, dy in _NEIGHBORS:
            u, v = x + dx, y + dy
            if u < 0 or v < 0 or u >= nx or v >= ny or not free[u, v]:
                continue
            if dx and dy and not (free[x + dx, y] and free[x, y + dy]):
                continue
            nd = d + (SQRT2 if dx and dy else 1.0)
            if nd < dist.get((u, v), np.inf):
                dist[(u, v)] = nd
                parent[(u, v)] = (x, y)
                heapq.heappush(heap, (nd, (u, v)))
    return None


# ----------------------------------------------------------------------------
# planner


class Planner:
    """Privileged planner bound to one world; caches free spaces and skeletons."""

    def __init__(self, world: VoxelWorld, config: PlannerConfig | None = None):
        self.world = world
        self.cfg = config or PlannerConfig()
        self._cache: dict = {}

    # -- free space ------------------------------------------------------------

    def blocked_columns(self, allow_posture: bool = True) -> np.ndarray:
        thr = self.cfg.crouch_clearance if allow_posture else self.cfg.nominal_clearance
        return self.world.overhead_clearance < thr - 1e-9

    def clearance_distance(self, allow_posture: bool = True) -> np.ndarray:
        """Distance (m) from each column centre to the nearest blocked column edge.

        The world boundary counts as blocked.
        """
        key = ("edt", allow_posture)
        if key not in self._cache:
            blocked = np.pad(self.blocked_columns(allow_posture), 1, constant_values=True)
            d = ndimage.distance_transform_edt(~blocked)[1:-1, 1:-1] * self.world.resolution
            self._cache[key] = d - self.world.resolution / 2
        return self._cache[key]

    def free_space(self, allow_posture: bool = True, inflation: float | None = None) -> np.ndarray:
        infl = self.cfg.inflation if inflation is None else inflation
        key = ("free", allow_posture, round(infl, 6))
        if key not in self._cache:
            self._cache[key] = self.clearance_distance(allow_posture) >= infl - 1e-9
        return self._cache[key]

    def components(self, allow_posture: bool = True, inflation: float | None = None) -> np.ndarray:
        key = ("cc", allow_posture, inflation)
        if key not in self._cache:
            labels, _ = ndimage.label(self.free_space(allow_posture, inflation), structure=np.ones((3, 3)))
            self._cache[key] = labels
        return self._cache[key]

    def skeleton(self, allow_posture: bool = True, inflation: float | None = None) -> np.ndarray:
        key = ("skel", allow_posture, inflation)
        if key not in self._cache:
            self._cache[key] = skeletonize(self.free_space(allow_posture, inflation))
        return self._cache[key]

    def is_free(self, p, allow_posture: bool = True, inflation: float | None = None) -> bool:
        i, j = self.world.cell_of(p[0], p[1])
        nx, ny = self.world.dims[:2]
        return 0 <= i < nx and 0 <= j < ny and bool(self.free_space(allow_posture, inflation)[i, j])

    def connected(self, a, b, allow_posture: bool = True, inflation: float | None = None) -> bool:
        if not (self.is_free(a, allow_posture, inflation) and self.is_free(b, allow_posture, inflation)):
            return False
        lab = self.components(allow_posture, inflation)
        ia, ja = self.world.cell_of(a[0], a[1])
        ib, jb = self.world.cell_of(b[0], b[1])
        return lab[ia, ja] == lab[ib, jb]

    def gvd_vertices(self, allow_posture: bool = True, inflation: float | None = None) -> np.ndarray:
        """Skeleton cells with three or more skeleton neighbours (branch points)."""
        sk = self.skeleton(allow_posture, inflation)
        nb = ndimage.convolve(sk.astype(np.int64), np.ones((3, 3), dtype=np.int64), mode="constant") - sk
        return np.argwhere(sk & (nb >= 3))

    # -- queries ------------------------------------------------------------------

    def line_of_sight(self, a, b, free: np.ndarray) -> bool:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        n = max(2, int(np.ceil(np.hypot(*(b - a)) / (self.world.resolution * 0.25))) + 1)
        t = np.linspace(0.0, 1.0, n)
        pts = a + t[:, None] * (b - a)
        i, j = self.world.cell_of(pts[:, 0], pts[:, 1])
        nx, ny = free.shape
        if (i < 0).any() or (j < 0).any() or (i >= nx).any() or (j >= ny).any():
            return False
        return bool(free[i, j].all())

    def shortcut(self, pts: np.ndarray, free: np.ndarray) -> np.ndarray:
        """Greedy line-of-sight shortcutting (keeps first and last points)."""
        if len(pts) <= 2:
            return pts
        out = [pts[0]]
        i = 0
        while i < len(pts) - 1:
            j = len(pts) - 1
            while j > i + 1 and not self.line_of_sight(pts[i], pts[j], free):
                j -= 1
            out.append(pts[j])
            i = j
        return np.array(out)

    def min_clearance_near(self, p, radius: float | None = None) -> float:
        r = self.cfg.posture_radius if radius is None else radius
        w = self.world
        i0, j0 = w.cell_of(p[0] - r, p[1] - r)
        i1, j1 = w.cell_of(p[0] + r, p[1] + r)
        nx, ny = w.dims[:2]
        i0, j0 = max(int(i0), 0), max(int(j0), 0)
        i1, j1 = min(int(i1), nx - 1), min(int(j1), ny - 1)
        if i1 < i0 or j1 < j0:
            return 0.0
        ci, cj = w.cell_center(np.arange(i0, i1 + 1), np.arange(j0, j1 + 1))
        mask = (ci[:, None] - p[0]) ** 2 + (cj[None, :] - p[1]) ** 2 <= r * r
        sub = w.overhead_clearance[i0:i1 + 1, j0:j1 + 1]
        return float(sub[mask].min()) if mask.any() else float("inf")

    def annotate(self, waypoints: np.ndarray):
        """Per-edge posture labels and per-waypoint clearance along a polyline."""
        clear = []
        labels = []
        for a, b in zip(waypoints[:-1], waypoints[1:]):
            n = max(2, int(np.ceil(np.hypot(*(b - a)) / self.world.resolution)) + 1)
            c = min(self.min_clearance_near(a + t * (b - a)) for t in np.linspace(0, 1, n))
            labels.append("nominal" if c >= self.cfg.nominal_clearance else "crouch")
        for p in waypoints:
            clear.append(self.min_clearance_near(p))
        return labels, np.array(clear)

    # -- planning -------------------------------------------------------------------

    def _cells_to_points(self, cells) -> np.ndarray:
        c = np.asarray(cells)
        x, y = self.world.cell_center(c[:, 0], c[:, 1])
        return np.stack([x, y], axis=1)

    def _tiers(self):
        return (self.cfg.inflation, self.cfg.min_inflation) if self.cfg.min_inflation < self.cfg.inflation \
            else (self.cfg.inflation,)

    def grid_route(self, start, goal, allow_posture: bool = True, inflation: float | None = None):
        free = self.free_space(allow_posture, inflation)
        s = tuple(int(v) for v in self.world.cell_of(start[0], start[1]))
        g = tuple(int(v) for v in self.world.cell_of(goal[0], goal[1]))
        return grid_astar(free, s, g)

    def _gvd_cells(self, s, g, free, skel):
        if not skel.any():
            return None
        head = _nearest_in_mask(free, s, skel)
        tail = _nearest_in_mask(free, g, skel)
        if head is None or tail is None:
            return None
        mid = grid_astar(skel, head[-1], tail[-1], corner_mask=free) if head[-1] != tail[-1] \
            else ([head[-1]], (0, 0))
        if mid is None:
            return None
        return head[:-1] + mid[0] + tail[::-1][1:]

    def plan(self, start, goal, allow_posture: bool = True, use_gvd: bool = True) -> GlobalPath:
        start = np.asarray(start, dtype=float)[:2]
        goal = np.asarray(goal, dtype=float)[:2]
        if np.allclose(start, goal):
            w = start[None, :].copy()
            return GlobalPath(w, np.zeros(1), [], np.array([self.min_clearance_near(start)]), "trivial")
        for infl in self._tiers():
            free = self.free_space(allow_posture, infl)
            if not self.connected(start, goal, allow_posture, infl):
                continue
            s = tuple(int(v) for v in self.world.cell_of(*start))
            g = tuple(int(v) for v in self.world.cell_of(*goal))
            cells, route = None, "grid"
            if use_gvd:
                cells = self._gvd_cells(s, g, free, self.skeleton(allow_posture, infl))
                route = "gvd"
            if cells is None:
                res = grid_astar(free, s, g)
                if res is None:
                    continue
                cells, route = res[0], "grid"
            pts = self._cells_to_points(cells)
            pts = np.vstack([start, pts[1:-1], goal]) if len(pts) > 2 else np.vstack([start, goal])
            pts = self.shortcut(pts, free)
            labels, clear = self.annotate(pts)
            return GlobalPath(pts, _arclength(pts), labels, clear, route)
        raise PlanningError(f"no path from {tuple(start)} to {tuple(goal)} at any feasible posture")

    def shortest_length(self, start, goal, allow_posture: bool = True) -> float:
        """Length of the tightened shortest grid route (the task's shortest feasible length)."""
        for infl in self._tiers():
            if not self.connected(start, goal, allow_posture, infl):
                continue
            res = self.grid_route(start, goal, allow_posture, infl)
            if res is None:
                continue
            pts = self._cells_to_points(res[0])
            pts = np.vstack([np.asarray(start)[:2], pts[1:-1], np.asarray(goal)[:2]]) if len(pts) > 2 \
                else np.vstack([np.asarray(start)[:2], np.asarray(goal)[:2]])
            pts = self.shortcut(pts, self.free_space(allow_posture, infl))
            return float(_arclength(pts)[-1])
        raise PlanningError(f"no path from {tuple(start)} to {tuple(goal)}")


def plan_global_path(world: VoxelWorld, start, goal, allow_posture: bool = True,
                     config: PlannerConfig | None = None) -> GlobalPath:
    return Planner(world, config).plan(start, goal, allow_posture)
