"""Run configuration: defaults, key=value config files, and CLI overrides.

Defaults follow the published parameter values where one exists (delta_r,
delta_alpha, rho_v, p_occ, k_occ, k_emp, 4 cm quantization, 50 cm step,
alpha = 1/3). A config file is plain text, one ``key=value`` per line, '#'
comments; flags override the file; the ANTOMAP_SEED environment variable
overrides the file's seed (but not an explicit flag).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields

from .grid import GridSpec, SensorRing
from .sensor_models import AS_PRINTED, REPAIRED, AntonymParams, FuzzyParams, ProbParams
from .simworld import (Environment, SonarNoise, Trajectory, builtin_environment,
                       builtin_trajectory, load_environment)

METHODS = ("prob", "fuzzy", "antonym")

SEED_ENV_VAR = "ANTOMAP_SEED"


class ConfigError(ValueError):
    """Invalid configuration value or file."""


@dataclass
class RunConfig:
    # pipeline
    environment: str = "office"        # builtin name or segment-list file
    cell_size: float = 10.0
    method: str = "antonym"
    correction: bool = True
    alpha: float = 1.0 / 3.0
    seed: int = 1
    # simulated sensor
    max_range: float = 600.0
    quantization: float = 4.0
    range_sigma: float = 2.0
    rebound_max_prob: float = 0.6
    short_echo: bool = True
    n_rays: int = 9
    people_rate: float = 0.0
    aperture: float = 0.2618
    # trajectory
    step: float = 50.0
    jitter_xy: float = 10.0
    jitter_heading_deg: float = 5.0
    waypoints: str = ""                # "x1,y1;x2,y2;..." (builtin when empty)
    # antonym model
    delta_r: float = 15.0
    delta_alpha: float = 0.2618
    near_mid: float = 200.0
    near_slope: float = 30.0
    far_mid: float = 300.0
    far_slope: float = 30.0
    smaller_slope: float = 50.0
    near_threshold: float = 150.0
    contra_threshold: float = 0.0
    # probabilistic model (meters)
    rho_v: float = 1.2
    prob_delta_r: float = 0.15
    p_occ: float = 0.6
    p_emp: float = 0.4
    formula_mode: str = REPAIRED
    # fuzzy model
    k_occ: float = 0.65
    k_emp: float = 0.45
    # reference map
    wall_halfwidth: float = 0.0        # 0 -> one cell size

    def validate(self) -> "RunConfig":
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        if self.formula_mode not in (REPAIRED, AS_PRINTED):
            raise ConfigError("formula_mode must be 'repaired' or 'as-printed'")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must be in (0, 1)")
        if self.cell_size <= 0:
            raise ConfigError("cell_size must be > 0")
        try:
            self.antonym_params()
            self.prob_params()
            self.fuzzy_params()
            self.noise()
            self.ring()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return self

    # ---- parameter structs -------------------------------------------------

    def antonym_params(self) -> AntonymParams:
        return AntonymParams(self.delta_r, self.delta_alpha,
                             self.near_mid, self.near_slope,
                             self.far_mid, self.far_slope, self.smaller_slope)

    def prob_params(self) -> ProbParams:
        return ProbParams(self.rho_v, self.prob_delta_r, self.p_occ, self.p_emp,
                          self.formula_mode)

    def fuzzy_params(self) -> FuzzyParams:
        return FuzzyParams(self.k_occ, self.k_emp, self.delta_r,
                           self.formula_mode)

    def noise(self) -> SonarNoise:
        return SonarNoise(self.quantization, self.range_sigma,
                          self.rebound_max_prob, self.short_echo,
                          self.max_range, self.seed, self.n_rays,
                          self.people_rate)

    def ring(self) -> SensorRing:
        return SensorRing(12, self.aperture, self.max_range)

    def environment_obj(self) -> Environment:
        if self.environment in ("office", "hall", "corridor"):
            return builtin_environment(self.environment)
        if os.path.exists(self.environment):
            return load_environment(self.environment)
        raise ConfigError(f"unknown environment {self.environment!r} "
                          "(not a builtin name or file)")

    def trajectory(self) -> Trajectory:
        if self.waypoints:
            try:
                pts = tuple(tuple(float(v) for v in pair.split(","))
                            for pair in self.waypoints.split(";") if pair)
            except ValueError:
                raise ConfigError("waypoints must be 'x1,y1;x2,y2;...'") from None
            if any(len(p) != 2 for p in pts):
                raise ConfigError("waypoints must be 'x1,y1;x2,y2;...'")
        else:
            pts = builtin_trajectory(self.environment)
        return Trajectory(pts, self.step, self.jitter_xy,
                          math.radians(self.jitter_heading_deg))

    def grid_spec(self, env: Environment) -> GridSpec:
        return env.grid_spec(self.cell_size)

    def reference_halfwidth(self) -> float:
        return self.wall_halfwidth if self.wall_halfwidth > 0 else self.cell_size


_BOOL_KEYS = {"correction", "short_echo"}
_INT_KEYS = {"seed", "n_rays"}
_STR_KEYS = {"environment", "method", "formula_mode", "waypoints"}
_ALL_KEYS = {f.name for f in fields(RunConfig)}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in _STR_KEYS:
        return raw
    if key in _BOOL_KEYS:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"bad boolean for {key}: {raw!r}")
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None


def load_config(path: str | None = None, overrides: dict | None = None,
                use_env_seed: bool = True) -> RunConfig:
    """Config from defaults, then file, then ANTOMAP_SEED, then overrides."""
    cfg = RunConfig()
    if path is not None:
        with open(path) as f:
            for lineno, raw in enumerate(f, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                key = key.strip()
                if key not in _ALL_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                setattr(cfg, key, _parse_value(key, value))
    if use_env_seed and os.environ.get(SEED_ENV_VAR):
        try:
            cfg.seed = int(os.environ[SEED_ENV_VAR])
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer") from None
    for key, value in (overrides or {}).items():
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        setattr(cfg, key, value)
    return cfg.validate()
