"""World files and JSON helpers.

A world file is one JSON document: a header (dims, resolution, origin,
meta, digest) plus base64 payloads for the packed occupancy bits and the
float64 ground elevation.
"""

from __future__ import annotations

import base64
import json

import numpy as np

from ..core import VoxelWorld

WORLD_FORMAT = "posturenav-world"
WORLD_VERSION = 1


class WorldFileError(ValueError):
    pass


def _b64(a: bytes) -> str:
    return base64.b64encode(a).decode("ascii")


def world_to_dict(world: VoxelWorld) -> dict:
    occ = np.ascontiguousarray(world.occupancy, dtype=bool)
    elev = np.ascontiguousarray(world.ground_elevation, dtype="<f8")
    return {
        "format": WORLD_FORMAT,
        "version": WORLD_VERSION,
        "dims": [int(v) for v in occ.shape],
        "resolution": float(world.resolution),
        "origin": [float(v) for v in world.origin],
        "meta": world.meta,
        "digest": world.digest(),
        "occupancy": _b64(np.packbits(occ.ravel(order="C")).tobytes()),
        "ground_elevation": _b64(elev.tobytes(order="C")),
    }


def world_from_dict(d: dict) -> VoxelWorld:
    if d.get("format") != WORLD_FORMAT:
        raise WorldFileError("not a world file")
    if int(d.get("version", -1)) != WORLD_VERSION:
        raise WorldFileError(f"unsupported world file version {d.get('version')}")
    try:
        dims = tuple(int(v) for v in d["dims"])
        n = int(np.prod(dims))
        bits = np.unpackbits(np.frombuffer(base64.b64decode(d["occupancy"]), dtype=np.uint8), count=n)
        occ = bits.astype(bool).reshape(dims)
        elev = np.frombuffer(base64.b64decode(d["ground_elevation"]), dtype="<f8").reshape(dims[:2]).copy()
        world = VoxelWorld(occ, elev, float(d["resolution"]), tuple(d["origin"]), d.get("meta", {}))
    except (KeyError, ValueError, TypeError) as e:
        raise WorldFileError(f"malformed world file: {e}") from e
    if d.get("digest") and world.digest() != d["digest"]:
        raise WorldFileError("world digest mismatch")
    return world


def save_world(world: VoxelWorld, path) -> None:
    with open(path, "w") as f:
        json.dump(world_to_dict(world), f, sort_keys=True)


def load_world(path) -> VoxelWorld:
    try:
        with open(path) as f:
            return world_from_dict(json.load(f))
    except json.JSONDecodeError as e:
        raise WorldFileError(f"{path}: {e}") from e


def save_json(obj, path) -> None:
    with open(path, "w") as f:
        json.dump(obj, f, indent=2, sort_keys=True)
        f.write("\n")


def load_json(path):
    with open(path) as f:
        return json.load(f)


def export_world_summary(world: VoxelWorld) -> dict:
    """Plot-friendly 2D layers: ground elevation, top elevation, overhead clearance."""
    def grid(a):
        a = np.where(np.isfinite(a), a, -1.0)
        return np.round(a, 6).tolist()

    return {
        "resolution": world.resolution,
        "origin": list(world.origin),
        "ground_elevation": grid(world.ground_elevation),
        "top_elevation": grid(world.top_elevation),
        "overhead_clearance": grid(world.overhead_clearance),
        "meta": world.meta,
    }
