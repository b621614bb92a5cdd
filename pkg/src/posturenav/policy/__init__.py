from .base import Policy, StationaryPolicy
from .bug import BugConfig, BugPolicy
from .cem import CEMConfig, CEMResult, cem_optimize
from .greedy import GreedyPolicy
from .oracle import OracleConfig, OraclePolicy
from .reactive import ReactiveParams, ReactivePolicy, reactive_step
from .wall_follow import WallFollowConfig, WallFollowPolicy

__all__ = ["BugConfig", "BugPolicy", "CEMConfig", "CEMResult", "GreedyPolicy", "OracleConfig", "OraclePolicy",
           "Policy", "ReactiveParams", "ReactivePolicy", "StationaryPolicy", "WallFollowConfig",
           "WallFollowPolicy", "cem_optimize", "reactive_step"]
