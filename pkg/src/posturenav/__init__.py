"""Posture-adaptive navigation in procedurally generated voxel worlds."""

__version__ = "0.1.0"
