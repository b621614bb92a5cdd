"""Tile templates, adjacency rules and the default tileset."""

from __future__ import annotations

import json
from itertools import combinations
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

SIDES = ("N", "E", "S", "W")
OPPOSITE = {"N": "S", "S": "N", "E": "W", "W": "E"}
# (dx, dy) in tile-grid coordinates; x east, y north
SIDE_OFFSET = {"N": (0, 1), "E": (1, 0), "S": (0, -1), "W": (-1, 0)}

TILESET_VERSION = 1


class SurfaceClass(str, Enum):
    FLAT = "Flat"
    ROUGH = "Rough"
    OBSTRUCTED = "Obstructed"


@dataclass(frozen=True, eq=False)
class Tile:
    id: int
    name: str
    surface_class: SurfaceClass
    elevation: np.ndarray  # (n, n) offsets in meters, indexed [x, y]
    blocked: np.ndarray  # (n, n) obstruction height above ground, 0 = free
    edge_profiles: dict  # side -> descriptor
    weight: float = 1.0


@dataclass(frozen=True)
class AdjacencyRule:
    a: int
    side: str
    b: int


@dataclass(eq=False)
class Tileset:
    tiles: list[Tile]
    rules: set[AdjacencyRule]
    tile_edge: float = 2.0
    resolution: float = 0.1
    name: str = "custom"
    _compat: dict = field(default=None, repr=False)

    def __post_init__(self):
        n = self.cells_per_tile
        for t in self.tiles:
            if t.elevation.shape != (n, n) or t.blocked.shape != (n, n):
                raise ValueError(f"tile {t.name!r} template is not {n}x{n}")
        ids = [t.id for t in self.tiles]
        if ids != list(range(len(ids))):
            raise ValueError("tile ids must be 0..T-1 in order")

    @property
    def cells_per_tile(self) -> int:
        return int(round(self.tile_edge / self.resolution))

    @property
    def weights(self) -> np.ndarray:
        return np.array([t.weight for t in self.tiles], dtype=float)

    def is_symmetric(self) -> bool:
        return all(AdjacencyRule(r.b, OPPOSITE[r.side], r.a) in self.rules for r in self.rules)

    def compat(self) -> dict[str, np.ndarray]:
        """side -> (T, T) bool; ``[a, b]`` true if b may sit on ``side`` of a."""
        if self._compat is None:
            T = len(self.tiles)
            c = {s: np.zeros((T, T), dtype=bool) for s in SIDES}
            for r in self.rules:
                c[r.side][r.a, r.b] = True
            self._compat = c
        return self._compat

    def subset(self, names) -> Tileset:
        """Tileset restricted to the named tiles, renumbered, with rules kept."""
        keep = [t for t in self.tiles if t.name in set(names)]
        remap = {t.id: i for i, t in enumerate(keep)}
        tiles = [Tile(remap[t.id], t.name, t.surface_class, t.elevation, t.blocked,
                      t.edge_profiles, t.weight) for t in keep]
        rules = {AdjacencyRule(remap[r.a], r.side, remap[r.b]) for r in self.rules
                 if r.a in remap and r.b in remap}
        return Tileset(tiles, rules, self.tile_edge, self.resolution, self.name + "-subset")

    def reweighted(self, weights: dict[str, float]) -> Tileset:
        tiles = [Tile(t.id, t.name, t.surface_class, t.elevation, t.blocked, t.edge_profiles,
                      weights.get(t.name, t.weight)) for t in self.tiles]
        return Tileset(tiles, set(self.rules), self.tile_edge, self.resolution, self.name)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "version": TILESET_VERSION,
            "name": self.name,
            "tile_edge": self.tile_edge,
            "resolution": self.resolution,
            "tiles": [
                {
                    "id": t.id,
                    "name": t.name,
                    "surface_class": t.surface_class.value,
                    "weight": t.weight,
                    "edges": dict(t.edge_profiles),
                    "elevation": np.round(t.elevation, 6).tolist(),
                    "blocked": np.round(t.blocked, 6).tolist(),
                }
                for t in self.tiles
            ],
            "rules": sorted([r.a, r.side, r.b] for r in self.rules),
        }

    @classmethod
    def from_dict(cls, d: dict) -> Tileset:
        if d.get("version") != TILESET_VERSION:
            raise ValueError(f"unsupported tileset version {d.get('version')!r}")
        tiles = [
            Tile(t["id"], t["name"], SurfaceClass(t["surface_class"]),
                 np.asarray(t["elevation"], dtype=float), np.asarray(t["blocked"], dtype=float),
                 dict(t["edges"]), float(t["weight"]))
            for t in d["tiles"]
        ]
        rules = {AdjacencyRule(int(a), s, int(b)) for a, s, b in d["rules"]}
        return cls(tiles, rules, float(d["tile_edge"]), float(d["resolution"]), d.get("name", "custom"))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> Tileset:
        return cls.from_dict(json.loads(Path(path).read_text()))


def rules_from_edges(tiles: list[Tile]) -> set[AdjacencyRule]:
    """Two tiles may touch on a side when their facing edge descriptors match."""
    rules = set()
    for a in tiles:
        for b in tiles:
            for s in SIDES:
                if a.edge_profiles[s] == b.edge_profiles[OPPOSITE[s]]:
                    rules.add(AdjacencyRule(a.id, s, b.id))
    return rules


# ----------------------------------------------------------------------------
# default tileset

WALL_HEIGHT = 1.0
PILLAR_HEIGHT = 1.0


def _rough_template(n: int, phase: int) -> np.ndarray:
    # fixed bump pattern on a 0.1 m lattice, 0 on the rim so seams stay level
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    wave = np.sin((i + 3 * phase) * 0.7) * np.cos((j - 2 * phase) * 0.55) + 0.4 * np.sin((i + j + phase) * 0.9)
    elev = np.clip(np.round((wave + 0.6) * 1.2), 0, 2) * 0.1
    rim = (i == 0) | (j == 0) | (i == n - 1) | (j == n - 1)
    elev[rim] = 0.0
    return np.round(elev, 6)


def _wall_template(n: int, arms: str, height: float = WALL_HEIGHT) -> np.ndarray:
    blocked = np.zeros((n, n))
    lo, hi = n // 2 - 1, n // 2 + 1  # 2 cells = 0.2 m thick, centred
    blocked[lo:hi, lo:hi] = height
    if "N" in arms:
        blocked[lo:hi, lo:] = height
    if "S" in arms:
        blocked[lo:hi, :hi] = height
    if "E" in arms:
        blocked[lo:, lo:hi] = height
    if "W" in arms:
        blocked[:hi, lo:hi] = height
    return blocked


def default_tileset(tile_edge: float = 2.0, resolution: float = 0.1) -> Tileset:
    """Flat, two rough variants, a pillar, and wall pieces for every arm subset.

    Wall pieces carry a ``wall`` descriptor on each side with an arm, so walls
    run continuously across tile seams and end in caps.
    """
    n = int(round(tile_edge / resolution))
    zeros = np.zeros((n, n))
    open4 = {s: "open" for s in SIDES}
    specs = [
        ("flat", SurfaceClass.FLAT, zeros, zeros, open4, 6.0),
        ("rough_a", SurfaceClass.ROUGH, _rough_template(n, 0), zeros, open4, 2.0),
        ("rough_b", SurfaceClass.ROUGH, _rough_template(n, 1), zeros, open4, 2.0),
    ]
    pillar = np.zeros((n, n))
    pillar[n // 2 - 2:n // 2 + 2, n // 2 - 2:n // 2 + 2] = PILLAR_HEIGHT
    specs.append(("pillar", SurfaceClass.OBSTRUCTED, zeros, pillar, open4, 0.4))
    for k in range(1, 5):
        for arms in combinations(SIDES, k):
            arms = "".join(arms)
            edges = {s: ("wall" if s in arms else "open") for s in SIDES}
            # straight runs are likelier than branches, which keeps walls long
            w = {1: 0.12, 2: 0.2 if arms in ("NS", "EW") else 0.08, 3: 0.03, 4: 0.01}[k]
            specs.append((f"wall_{arms}", SurfaceClass.OBSTRUCTED, zeros, _wall_template(n, arms), edges, w))
    tiles = [Tile(i, name, sc, el.copy(), bl.copy(), ed, w) for i, (name, sc, el, bl, ed, w) in enumerate(specs)]
    return Tileset(tiles, rules_from_edges(tiles), tile_edge, resolution, "default")


def terrain_tileset(tile_edge: float = 2.0, resolution: float = 0.1) -> Tileset:
    """Flat and rough tiles only; used under hand-structured presets."""
    return default_tileset(tile_edge, resolution).subset(["flat", "rough_a", "rough_b"])
