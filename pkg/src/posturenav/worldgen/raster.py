from __future__ import annotations

import numpy as np

from ..core import VoxelWorld
from .tiles import Tileset

DEFAULT_HEIGHT = 2.0


def rasterize(tile_grid: np.ndarray, tileset: Tileset, height: float = DEFAULT_HEIGHT) -> VoxelWorld:
    """Stamp tile templates into a voxel world at the tileset resolution.

    Terrain fills each column up to its ground elevation; obstructed template
    cells are occupied from just above ground to their blocked height.
    """
    res = tileset.resolution
    n = tileset.cells_per_tile
    tx, ty = tile_grid.shape
    nz = int(round(height / res))
    elev = np.zeros((tx * n, ty * n))
    blocked = np.zeros((tx * n, ty * n))
    for i in range(tx):
        for j in range(ty):
            t = tileset.tiles[int(tile_grid[i, j])]
            elev[i * n:(i + 1) * n, j * n:(j + 1) * n] = t.elevation
            blocked[i * n:(i + 1) * n, j * n:(j + 1) * n] = t.blocked
    world = VoxelWorld(np.zeros((tx * n, ty * n, nz), dtype=bool), elev, res, (0.0, 0.0, -res / 2))
    g = world.ground_cells
    top = g + np.round(blocked / res).astype(np.int64)
    k = np.arange(nz)[None, None, :]
    occ = k < np.minimum(top, nz)[:, :, None]
    return VoxelWorld(occ, elev, res, world.origin, {"tile_grid": tile_grid.tolist()})
