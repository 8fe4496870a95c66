"""Tunable thresholds for cleaning, segmentation, and criterion evaluation.

Spatial tolerances are body- or landmark-relative fractions so that
uniformly rescaling a recording leaves every criterion outcome unchanged;
only the cleaning limits are tied to the nominal image size.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path


@dataclass(frozen=True)
class CleaningConfig:
    window: int = 5                 # samples in the conditional median window
    max_step_frac: float = 0.15     # spike limit, fraction of image diagonal per frame
    deviation_frac: float = 0.02    # outlier limit vs window median, fraction of diagonal
    min_visibility: float = 0.3     # below this a keypoint counts as missing
    image_width: float = 1920.0
    image_height: float = 1080.0

    @property
    def image_diagonal(self) -> float:
        return math.hypot(self.image_width, self.image_height)

    @property
    def max_step(self) -> float:
        return self.max_step_frac * self.image_diagonal

    @property
    def max_deviation(self) -> float:
        return self.deviation_frac * self.image_diagonal


@dataclass(frozen=True)
class ScoringConfig:
    cleaning: CleaningConfig = CleaningConfig()

    # jump-event detection
    jump_scale: float = 0.5         # threshold = jump_scale * median shank length
    min_jump_frames: int = 3
    baseline_window: int = 15

    # segmentation
    dwell_min_frames: int = 3
    ball_launch_scale: float = 0.15  # launch speed = scale * shank px/frame

    # landmark interaction
    touch_scale: float = 1.5        # cone touch disk = scale * base circumradius
    touch_window: int = 10          # frames around a slide end to look for the touch
    boundary_band_frac: float = 0.05  # hoop-rim touch band, fraction of hoop radius

    # ball interaction
    ball_radius_frac: float = 0.18  # default ball radius = frac * median shank
    ball_radius_px: float | None = None  # explicit override (breaks scale-freeness)
    contact_scale: float = 1.2      # contact radius = scale * ball radius
    hold_scale: float = 2.0         # post-catch hold radius = scale * ball radius
    hold_frames: int = 5

    # one-foot hop check
    split_scale: float = 0.4        # ankle separation threshold = scale * shank

    # kick form check
    kick_window: int = 10           # frames around contact for the leg-swing test

    # ball recovery from grids
    diff_threshold: int = 25
    min_area: int = 4

    def with_overrides(self, overrides: dict) -> "ScoringConfig":
        """Apply a flat dict of overrides; cleaning.* keys reach the sub-config."""
        clean_fields = {f.name for f in fields(CleaningConfig)}
        own_fields = {f.name for f in fields(ScoringConfig)}
        clean_kv = {}
        own_kv = {}
        for key, value in overrides.items():
            name = key.removeprefix("cleaning.")
            if key.startswith("cleaning.") or (key in clean_fields and key not in own_fields):
                clean_kv[name] = value
            elif key in own_fields:
                own_kv[key] = value
            else:
                raise KeyError(f"unknown config key: {key}")
        cfg = self
        if clean_kv:
            cfg = replace(cfg, cleaning=replace(cfg.cleaning, **clean_kv))
        if own_kv:
            cfg = replace(cfg, **own_kv)
        return cfg

    @classmethod
    def from_file(cls, path: str | Path) -> "ScoringConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls().with_overrides(json.load(fh))
