from .pgcl import CurriculumState, SegmentReturn, SubGoalSet, advance_level, observe_goal, sample_subgoals, \
    segment_return
from .planner import GlobalPath, PlanningError, plan_global_path

__all__ = ["CurriculumState", "GlobalPath", "PlanningError", "SegmentReturn", "SubGoalSet", "advance_level",
           "observe_goal", "plan_global_path", "sample_subgoals", "segment_return"]
