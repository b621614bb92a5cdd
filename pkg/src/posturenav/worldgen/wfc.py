"""Wave Function Collapse over a 2D tile grid."""

from __future__ import annotations

import numpy as np

from ..core import seeded_rng
from .tiles import SIDE_OFFSET, SIDES, Tileset

MAX_RESTARTS = 32


class WorldGenError(RuntimeError):
    def __init__(self, message: str, cell=None):
        super().__init__(message)
        self.cell = cell


class _Contradiction(Exception):
    def __init__(self, cell):
        self.cell = cell


def _propagate(wave: np.ndarray, compat: dict, stack: list) -> None:
    nx, ny, _ = wave.shape
    while stack:
        x, y = stack.pop()
        here = wave[x, y]
        for side in SIDES:
            dx, dy = SIDE_OFFSET[side]
            u, v = x + dx, y + dy
            if not (0 <= u < nx and 0 <= v < ny):
                continue
            support = compat[side][here].any(axis=0)
            new = wave[u, v] & support
            if not new.any():
                raise _Contradiction((u, v))
            if (new != wave[u, v]).any():
                wave[u, v] = new
                stack.append((u, v))


def _attempt(tileset: Tileset, shape: tuple[int, int], rng: np.random.Generator) -> np.ndarray:
    nx, ny = shape
    T = len(tileset.tiles)
    weights = tileset.weights
    logw = np.log(weights)
    compat = tileset.compat()
    wave = np.ones((nx, ny, T), dtype=bool)
    _propagate(wave, compat, [(x, y) for x in range(nx) for y in range(ny)])
    while True:
        counts = wave.sum(axis=2)
        open_cells = counts > 1
        if not open_cells.any():
            break
        w = wave * weights
        sw = w.sum(axis=2)
        # Shannon entropy of the weighted distribution over remaining tiles
        ent = np.log(sw) - (w * logw).sum(axis=2) / sw
        ent = ent + rng.random((nx, ny)) * 1e-6
        ent[~open_cells] = np.inf
        x, y = np.unravel_index(int(np.argmin(ent)), (nx, ny))
        p = w[x, y] / sw[x, y]
        choice = rng.choice(T, p=p)
        wave[x, y] = False
        wave[x, y, choice] = True
        _propagate(wave, compat, [(x, y)])
    return np.argmax(wave, axis=2)


def wfc_collapse(tileset: Tileset, shape: tuple[int, int], seed: int,
                 max_restarts: int = MAX_RESTARTS) -> np.ndarray:
    """Collapse a ``shape`` grid of tile ids obeying the tileset's rules.

    Each attempt picks the open cell of least weighted entropy, samples a tile
    by weight and propagates arc consistency. A contradiction restarts from
    scratch with the next derived stream; after ``max_restarts`` restarts a
    :class:`WorldGenError` names the first contradicted cell.
    """
    if not tileset.tiles:
        raise WorldGenError("empty tileset")
    if not tileset.is_symmetric():
        raise WorldGenError("adjacency rules are not symmetric")
    first_cell = None
    for attempt in range(max_restarts + 1):
        rng = seeded_rng(seed, f"wfc/{attempt}")
        try:
            return _attempt(tileset, shape, rng)
        except _Contradiction as c:
            if first_cell is None:
                first_cell = tuple(int(v) for v in c.cell)
    raise WorldGenError(
        f"tileset unsatisfiable on {shape[0]}x{shape[1]} grid after {max_restarts} restarts; "
        f"first contradiction at cell {first_cell}", first_cell)


def adjacency_violations(grid: np.ndarray, tileset: Tileset) -> list[tuple]:
    """Brute-force scan of all neighbouring pairs against the rule set."""
    rules = {(r.a, r.side, r.b) for r in tileset.rules}
    bad = []
    nx, ny = grid.shape
    for x in range(nx):
        for y in range(ny):
            if x + 1 < nx and (int(grid[x, y]), "E", int(grid[x + 1, y])) not in rules:
                bad.append(((x, y), "E"))
            if y + 1 < ny and (int(grid[x, y]), "N", int(grid[x, y + 1])) not in rules:
                bad.append(((x, y), "N"))
    return bad
