from .executor import ExecutorParams, initial_state, step
from .geometry import BodyGeometry, check_collision
from .observe import ObservationBundle, extract_local_maps

__all__ = ["BodyGeometry", "ExecutorParams", "ObservationBundle", "check_collision", "extract_local_maps",
           "initial_state", "step"]
