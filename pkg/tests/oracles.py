"""Independent reference implementations used to cross-check the package.

None of these import the code they check: the Dijkstra oracle runs on a
scipy sparse graph, the collision oracle samples the body volume on a 5 mm
lattice, the curriculum reference walks a straight path with plain floats,
and the reward reference restates every term with ``math`` only.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit
from scipy.ndimage import distance_transform_edt
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

# ----------------------------------------------------------------------------
# shortest paths


def dijkstra_cost(free: np.ndarray, start, goal) -> float:
    """8-connected shortest path (no corner cutting) in cell units; inf if unreachable."""
    nx, ny = free.shape
    rows, cols, wts = [], [], []
    for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
        w = math.sqrt(2.0) if dx and dy else 1.0
        for x in range(nx):
            for y in range(ny):
                u, v = x + dx, y + dy
                if not (0 <= u < nx and 0 <= v < ny) or not (free[x, y] and free[u, v]):
                    continue
                if dx and dy and not (free[x + dx, y] and free[x, y + dy]):
                    continue
                rows.append(x * ny + y)
                cols.append(u * ny + v)
                wts.append(w)
    g = coo_matrix((wts, (rows, cols)), shape=(nx * ny, nx * ny)).tocsr()
    d = dijkstra(g, directed=False, indices=start[0] * ny + start[1])
    return float(d[goal[0] * ny + goal[1]])


# ----------------------------------------------------------------------------
# dense point-sampling collision oracle

SAMPLE_SPACING = 0.005


def _rotation(yaw: float, roll: float) -> np.ndarray:
    # columns are the body axes in world coordinates
    cy, sy, cr, sr = math.cos(yaw), math.sin(yaw), math.cos(roll), math.sin(roll)
    fwd = np.array([cy, sy, 0.0])
    left = np.array([-sy * cr, cy * cr, sr])
    up = np.array([sy * sr, -cy * sr, cr])
    return np.stack([fwd, left, up], axis=1)


def _lattice(half_extent: float, spacing: float) -> np.ndarray:
    n = max(int(math.ceil(2 * half_extent / spacing)), 0)
    if n == 0:
        return np.zeros(1)
    # cell-centred samples strictly inside the box
    return -half_extent + (np.arange(n) + 0.5) * (2 * half_extent / n)


@njit(cache=True)
def _point_hits(px, py, pz, obstacles, origin, res):
    nx, ny, nz = obstacles.shape
    i = int(math.floor((px - origin[0]) / res))
    j = int(math.floor((py - origin[1]) / res))
    k = int(math.floor((pz - origin[2]) / res))
    return 0 <= i < nx and 0 <= j < ny and 0 <= k < nz and obstacles[i, j, k]


@njit(cache=True)
def _index_range(lat, lo, hi):
    # lattice indices whose coordinate lies in [lo, hi]; lat is uniform and increasing
    n = lat.shape[0]
    if n == 1:
        return (0, 1) if lo <= lat[0] <= hi else (0, 0)
    step = lat[1] - lat[0]
    a = max(int(math.ceil((lo - lat[0]) / step - 1e-9)), 0)
    b = min(int(math.floor((hi - lat[0]) / step + 1e-9)) + 1, n)
    return a, b


@njit(cache=True)
def _any_point_inside(center, R, xs, ys, zs, obstacles, origin, res):
    """True if any lattice point of the box falls in an obstacle voxel.

    Only points inside the body-frame bounds of some obstacle voxel that meets
    the box's world bounding box are visited; the rest cannot hit.
    """
    nx, ny, nz = obstacles.shape
    hb = np.array([abs(xs[0]), abs(ys[0]), abs(zs[0])])
    lo = np.empty(3, np.int64)
    hi = np.empty(3, np.int64)
    for d in range(3):
        ext = abs(R[d, 0]) * hb[0] + abs(R[d, 1]) * hb[1] + abs(R[d, 2]) * hb[2]
        lo[d] = int(math.floor((center[d] - ext - origin[d]) / res))
        hi[d] = int(math.floor((center[d] + ext - origin[d]) / res))
    vext = np.empty(3)
    for d in range(3):
        vext[d] = 0.5 * res * (abs(R[0, d]) + abs(R[1, d]) + abs(R[2, d]))
    for i in range(max(lo[0], 0), min(hi[0], nx - 1) + 1):
        for j in range(max(lo[1], 0), min(hi[1], ny - 1) + 1):
            for k in range(max(lo[2], 0), min(hi[2], nz - 1) + 1):
                if not obstacles[i, j, k]:
                    continue
                vx = origin[0] + (i + 0.5) * res - center[0]
                vy = origin[1] + (j + 0.5) * res - center[1]
                vz = origin[2] + (k + 0.5) * res - center[2]
                q0 = R[0, 0] * vx + R[1, 0] * vy + R[2, 0] * vz
                q1 = R[0, 1] * vx + R[1, 1] * vy + R[2, 1] * vz
                q2 = R[0, 2] * vx + R[1, 2] * vy + R[2, 2] * vz
                a0, a1 = _index_range(xs, q0 - vext[0], q0 + vext[0])
                b0, b1 = _index_range(ys, q1 - vext[1], q1 + vext[1])
                c0, c1 = _index_range(zs, q2 - vext[2], q2 + vext[2])
                for a in range(a0, a1):
                    for b in range(b0, b1):
                        for c in range(c0, c1):
                            px = center[0] + R[0, 0] * xs[a] + R[0, 1] * ys[b] + R[0, 2] * zs[c]
                            py = center[1] + R[1, 0] * xs[a] + R[1, 1] * ys[b] + R[1, 2] * zs[c]
                            pz = center[2] + R[2, 0] * xs[a] + R[2, 1] * ys[b] + R[2, 2] * zs[c]
                            if _point_hits(px, py, pz, obstacles, origin, res):
                                return True
    return False


@njit(cache=True)
def _any_point_inside_dense(center, R, xs, ys, zs, obstacles, origin, res):
    for a in range(xs.shape[0]):
        for b in range(ys.shape[0]):
            for c in range(zs.shape[0]):
                px = center[0] + R[0, 0] * xs[a] + R[0, 1] * ys[b] + R[0, 2] * zs[c]
                py = center[1] + R[1, 0] * xs[a] + R[1, 1] * ys[b] + R[1, 2] * zs[c]
                pz = center[2] + R[2, 0] * xs[a] + R[2, 1] * ys[b] + R[2, 2] * zs[c]
                if _point_hits(px, py, pz, obstacles, origin, res):
                    return True
    return False


class PointOracle:
    """Collision by sampling the body box on a lattice and looking up voxels.

    A Euclidean distance transform of the obstacle voxels lets configurations
    whose bounding sphere is provably clear skip the sampling.
    """

    def __init__(self, world, half_extents=(0.30, 0.15, 0.06), spacing: float = SAMPLE_SPACING):
        self.world = world
        occ = np.asarray(world.occupancy, dtype=bool)
        ground = np.asarray(world.ground_cells)
        k = np.arange(occ.shape[2])[None, None, :]
        self.obstacles = occ & (k >= ground[:, :, None])
        self.origin = np.asarray(world.origin, dtype=float)
        self.res = float(world.resolution)
        self.half = np.asarray(half_extents, dtype=float)
        self.spacing = spacing
        # metres from each voxel centre to the nearest obstacle voxel centre
        self.edt = distance_transform_edt(~self.obstacles) * self.res

    def ground(self, x: float, y: float) -> float:
        i = min(max(int(math.floor((x - self.origin[0]) / self.res)), 0), self.obstacles.shape[0] - 1)
        j = min(max(int(math.floor((y - self.origin[1]) / self.res)), 0), self.obstacles.shape[1] - 1)
        return float(self.world.ground_elevation[i, j])

    def collides(self, x, y, yaw, h, roll, grow: float = 0.0, dense: bool = False) -> bool:
        """``dense`` visits every lattice point instead of the culled subset."""
        half = np.maximum(self.half + grow, 0.0)
        center = np.array([x, y, self.ground(x, y) + h])
        radius = float(np.linalg.norm(half))
        idx = np.floor((center - self.origin) / self.res).astype(int)
        if np.all(idx >= 0) and np.all(idx < self.obstacles.shape):
            # sphere around the box vs the nearest obstacle cube (centre distance minus half diagonal)
            if self.edt[tuple(idx)] - self.res * math.sqrt(3) > radius + self.res * math.sqrt(3):
                return False
        R = _rotation(yaw, roll)
        xs, ys, zs = (_lattice(v, self.spacing) for v in half)
        f = _any_point_inside_dense if dense else _any_point_inside
        return bool(f(center, R, xs, ys, zs, self.obstacles, self.origin, self.res))


# ----------------------------------------------------------------------------
# first-order executor


def lag_closed_form(a0: float, c: float, tau: float, n: int, dt: float = 0.1) -> float:
    return c + (a0 - c) * math.exp(-n * dt / tau)


# ----------------------------------------------------------------------------
# curriculum on a straight path


def ref_subgoal_count(length: float, d: float) -> int:
    """Points at d, 2d, ... strictly below ``length`` plus the goal."""
    n = 0
    while (n + 1) * d < length - 1e-9:
        n += 1
    return n + 1


def ref_final_level(length: float) -> int:
    k = 1
    while k <= length + 1e-9:
        k += 1
    return k


def ref_curriculum_trace(length: float, reached_counts, M: int = 3):
    """Level machine on a straight path of ``length`` with unit spacing growth.

    ``reached_counts[e]`` is how many sub-goals episode ``e`` stands on in
    order (clipped to the set size). Returns, per episode, the tuple
    ``(k, d, N, next_index_at_end, new_task)`` recorded after the update.
    """
    k, d = 1, 1.0
    K = ref_final_level(length)
    streak = 0
    trace = []
    for r in reached_counts:
        N = ref_subgoal_count(length, d)
        r = min(r, N)
        # standing on sub-goal r also reaches the goal when it lies within 0.1 m
        if 0 < r == N - 1 and length - r * d < 0.1:
            r = N
        complete = r == N
        next_index = N if complete else r + 1
        new_task = False
        if complete:
            if k >= K:
                streak += 1
                new_task = streak >= M
            else:
                k += 1
                d += 1.0
        else:
            streak = 0
        trace.append((k, d, ref_subgoal_count(length, d), next_index, new_task))
    return trace


# ----------------------------------------------------------------------------
# reward terms


REF_WEIGHTS = (5.0, 0.5, 0.25, -0.1, -0.1, -0.2, -0.1, -0.04, -2.5, -2.5)
RANGES = ((-1.5, 1.5), (-1.0, 1.0), (-1.5, 1.5), (0.1, 0.4), (-1.0, 1.0))


def ref_reward_terms(dist, count_after, v_des, speed, c0, c1, c2, ach, vz, wxy, colliding, h, roll):
    w = REF_WEIGHTS
    r1 = w[0] if dist < 0.1 else 0.0
    r2 = w[1] / math.sqrt(count_after)
    r3 = w[2] * math.exp(-abs(v_des - speed) / 0.3)
    r4 = w[3] * sum((a - b) ** 2 for a, b in zip(c0, c1))
    r5 = w[4] * sum((a - 2 * b + c) ** 2 for a, b, c in zip(c0, c1, c2))
    r6 = w[5] * math.sqrt(sum((a - b) ** 2 for a, b in zip(c0, ach)))
    r7 = w[6] * (vz ** 2 + wxy[0] ** 2 + wxy[1] ** 2)
    r8 = w[7] * ((h - 0.3) ** 2 + roll ** 2)
    out_of_range = any(not (lo <= v <= hi) for v, (lo, hi) in zip(c0, RANGES))
    r9 = w[8] * (1.0 if out_of_range else 0.0)
    r10 = w[9] * (1.0 if colliding else 0.0)
    return (r1, r2, r3, r4, r5, r6, r7, r8, r9, r10)
