"""Deterministic CAMSA run scoring from 33-keypoint pose trajectories.

Pipeline: parse and clean two-view trajectories, validate the course
layout, segment the run into the seven action phases, evaluate the 14
skill criteria plus the banded time score, and aggregate cohort means.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .config import CleaningConfig, ScoringConfig
from .scoring import ScoreReport, aggregate_cohort, score_run, time_score_from_seconds
from .segmenter import segment
from .synth import RunScript, generate_run
from .trajectory import RunBundle, Trajectory, clean_trajectory, parse_trajectory, write_trajectory

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "CleaningConfig",
    "ScoringConfig",
    "ScoreReport",
    "RunBundle",
    "RunScript",
    "Trajectory",
    "aggregate_cohort",
    "clean_trajectory",
    "generate_run",
    "parse_trajectory",
    "score_run",
    "segment",
    "time_score_from_seconds",
    "write_trajectory",
]
