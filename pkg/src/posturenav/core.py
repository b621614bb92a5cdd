"""Shared value types, geometry helpers and the seeded random source."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

DT = 0.1  # high-level tick (10 Hz)
NOMINAL_H = 0.30

# (low, high) per command channel, inclusive
COMMAND_RANGES = (
    (-1.5, 1.5),  # vx
    (-1.0, 1.0),  # vy
    (-1.5, 1.5),  # wz
    (0.1, 0.4),  # h
    (-1.0, 1.0),  # roll
)


class DomainError(ValueError):
    pass


class Command(NamedTuple):
    vx: float = 0.0
    vy: float = 0.0
    wz: float = 0.0
    h: float = NOMINAL_H
    roll: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=float)


STAND = Command()


class Pose(NamedTuple):
    x: float
    y: float
    z: float = NOMINAL_H
    yaw: float = 0.0
    roll: float = 0.0


def wrap_angle(theta: float) -> float:
    """Map ``theta`` into (-pi, pi]."""
    if not math.isfinite(theta):
        raise DomainError(f"cannot wrap non-finite angle {theta!r}")
    r = math.remainder(theta, 2.0 * math.pi)  # [-pi, pi]
    if r <= -math.pi:
        r += 2.0 * math.pi
    return r


def command_in_range(c: Command) -> bool:
    return all(lo <= v <= hi for v, (lo, hi) in zip(c, COMMAND_RANGES))


def clamp_command(c) -> Command:
    return Command(*(min(max(float(v), lo), hi) for v, (lo, hi) in zip(c, COMMAND_RANGES)))


@dataclass(frozen=True)
class AgentState:
    pose: Pose
    achieved: Command = STAND
    vz: float = 0.0
    omega_xy: tuple[float, float] = (0.0, 0.0)
    colliding: bool = False
    cumulative_path_length: float = 0.0
    # commands issued but not yet released to the executor, oldest first
    pending: tuple[Command, ...] = ()


# ----------------------------------------------------------------------------
# random source


def _key(seed: int, label: str) -> int:
    h = hashlib.blake2b(digest_size=16)
    h.update(int(seed & 0xFFFFFFFFFFFFFFFF).to_bytes(8, "little"))
    h.update(label.encode("utf-8"))
    return int.from_bytes(h.digest(), "little")


def derive_seed(seed: int, *labels) -> int:
    """Deterministic 64-bit sub-seed from a seed and any number of labels."""
    label = "/".join(str(x) for x in labels)
    return _key(seed, label) & 0xFFFFFFFFFFFFFFFF


def seeded_rng(seed: int, stream_label: str) -> np.random.Generator:
    """Counter-based (Philox) stream keyed by ``(seed, stream_label)``.

    Draw ``i`` of the stream depends only on the key and ``i``, so streams are
    independent of execution order and of each other.
    """
    return np.random.Generator(np.random.Philox(key=_key(seed, stream_label)))


# ----------------------------------------------------------------------------
# voxel world


@dataclass(frozen=True, eq=False)
class VoxelWorld:
    """Dense occupancy lattice indexed ``[ix, iy, iz]`` plus per-column ground.

    Cell ``(i, j, k)`` spans ``origin + (i, j, k) * resolution`` to one cell
    further. The default vertical origin is ``-resolution / 2`` so that voxel
    centres sit on multiples of the resolution and a column with ground
    elevation ``e`` has its first free voxel bottom at ``e + resolution / 2``.
    """

    occupancy: np.ndarray
    ground_elevation: np.ndarray
    resolution: float = 0.1
    origin: tuple[float, float, float] = (0.0, 0.0, -0.05)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be positive")
        if self.occupancy.ndim != 3 or min(self.occupancy.shape) < 1:
            raise ValueError(f"bad occupancy shape {self.occupancy.shape}")
        if self.ground_elevation.shape != self.occupancy.shape[:2]:
            raise ValueError("ground_elevation shape does not match occupancy columns")

    @classmethod
    def flat(cls, width: float, depth: float, height: float = 2.0, resolution: float = 0.1,
             floor: bool = True) -> VoxelWorld:
        nx, ny, nz = (int(round(v / resolution)) for v in (width, depth, height))
        occ = np.zeros((nx, ny, nz), dtype=bool)
        if floor:
            occ[:, :, 0] = True
        return cls(occ, np.zeros((nx, ny)), resolution, (0.0, 0.0, -resolution / 2))

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.occupancy.shape

    @property
    def extent(self) -> tuple[float, float]:
        return self.dims[0] * self.resolution, self.dims[1] * self.resolution

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        """(xmin, xmax, ymin, ymax) in meters."""
        ox, oy, _ = self.origin
        w, d = self.extent
        return ox, ox + w, oy, oy + d

    @cached_property
    def ground_cells(self) -> np.ndarray:
        """Number of terrain voxels at the bottom of each column."""
        oz = self.origin[2]
        g = np.floor((self.ground_elevation - oz) / self.resolution + 1e-9).astype(np.int64) + 1
        return np.clip(g, 0, self.dims[2])

    @cached_property
    def obstacles(self) -> np.ndarray:
        """Occupied voxels strictly above each column's terrain."""
        k = np.arange(self.dims[2])
        return self.occupancy & (k[None, None, :] >= self.ground_cells[:, :, None])

    @cached_property
    def overhead_clearance(self) -> np.ndarray:
        """Free height above ground before the first obstacle voxel (inf if none)."""
        obs = self.obstacles
        has = obs.any(axis=2)
        first = np.argmax(obs, axis=2)
        bottom = self.origin[2] + first * self.resolution
        return np.where(has, bottom - self.ground_elevation, np.inf)

    @cached_property
    def top_elevation(self) -> np.ndarray:
        """Ground elevation, or the top of the highest obstacle voxel if any."""
        occ = self.obstacles
        nz = self.dims[2]
        has = occ.any(axis=2)
        last = nz - 1 - np.argmax(occ[:, :, ::-1], axis=2)
        top = self.origin[2] + (last + 1) * self.resolution
        return np.where(has, top, self.ground_elevation)

    def cell_of(self, x, y):
        ox, oy, _ = self.origin
        i = np.floor((np.asarray(x) - ox) / self.resolution).astype(np.int64)
        j = np.floor((np.asarray(y) - oy) / self.resolution).astype(np.int64)
        return i, j

    def cell_center(self, i, j):
        ox, oy, _ = self.origin
        return ox + (np.asarray(i) + 0.5) * self.resolution, oy + (np.asarray(j) + 0.5) * self.resolution

    def in_bounds(self, x: float, y: float) -> bool:
        xmin, xmax, ymin, ymax = self.bounds
        return xmin <= x < xmax and ymin <= y < ymax

    def ground_at(self, x: float, y: float) -> float:
        i, j = self.cell_of(x, y)
        i = min(max(int(i), 0), self.dims[0] - 1)
        j = min(max(int(j), 0), self.dims[1] - 1)
        return float(self.ground_elevation[i, j])

    def with_occupancy(self, occupancy: np.ndarray, **meta) -> VoxelWorld:
        return VoxelWorld(occupancy, self.ground_elevation, self.resolution, self.origin,
                          {**self.meta, **meta})

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.packbits(self.occupancy).tobytes())
        h.update(self.ground_elevation.astype("<f8").tobytes())
        h.update(repr((self.resolution, self.origin, self.dims)).encode())
        return h.hexdigest()
