"""Task suites, episodes, metrics, training, persistence and the CLI."""

from .config import (ConfigError, CurriculumSettings, EpisodeSettings, RunConfig, TaskSettings, config_from_dict,
                     dump_config, load_config)
from .episode import TRAJECTORY_COLUMNS, EpisodeResult, run_episode, write_trajectory
from .io import WorldFileError, load_world, save_world, world_from_dict, world_to_dict
from .metrics import MetricError, MetricsReport, collision_summary, compute_spl, compute_sr, evaluate, run_suite
from .tasks import SuiteError, Task, TaskSuite, band_label, generate_tasks
from .train import TrainResult, cem_train

__all__ = [
    "ConfigError", "CurriculumSettings", "EpisodeSettings", "RunConfig", "TaskSettings", "config_from_dict",
    "dump_config", "load_config", "TRAJECTORY_COLUMNS", "EpisodeResult", "run_episode", "write_trajectory",
    "WorldFileError", "load_world", "save_world", "world_from_dict", "world_to_dict", "MetricError",
    "MetricsReport", "collision_summary", "compute_spl", "compute_sr", "evaluate", "run_suite", "SuiteError",
    "Task", "TaskSuite", "band_label", "generate_tasks", "TrainResult", "cem_train",
]
