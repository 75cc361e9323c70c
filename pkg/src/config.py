# src/config.py
import os
from pathlib import Path

import yaml
from pydantic import BaseModel, Field

PROJECT_ROOT = Path(__file__).resolve().parent.parent


class NumericsConfig(BaseModel):
    seed: int = 42
    starts: int = Field(64, ge=1)
    max_iters: int = Field(2000, ge=1)
    opt_tol: float = Field(1e-10, gt=0)
    armijo_c: float = Field(1e-4, gt=0, lt=1)
    armijo_shrink: float = Field(0.5, gt=0, lt=1)
    slice_starts: int = Field(16, ge=1)
    # exclusion band near the argmin set, scaled by (1 + |f_star|)
    eps_excl: float = Field(1e-9, ge=0)
    ratio_tol: float = Field(1e-9, ge=0)
    # clustering radius as a fraction of the box diameter
    cluster_fraction: float = Field(1e-3, gt=0)


class GridConfig(BaseModel):
    default_resolution: int = Field(201, ge=2)
    envelope: bool = True


class MountainPassConfig(BaseModel):
    nodes: int = Field(33, ge=3)
    step_fraction: float = Field(1e-2, gt=0)
    iters: int = Field(5000, ge=1)
    tol: float = Field(1e-6, gt=0)


class MinimaxConfig(BaseModel):
    deviations: int = Field(32, ge=1)
    tol_val: float = Field(1e-9, ge=0)
    tol_grad: float = Field(1e-6, ge=0)


class GamesConfig(BaseModel):
    budget: int = Field(20_000_000, ge=1)
    refine: int = Field(8, ge=1)
    br_tol: float = Field(1e-9, ge=0)
    nash_tol: float = Field(5e-3, ge=0)
    subsample: bool = False


class LoggingConfig(BaseModel):
    level: str = "INFO"
    json_format: bool = False
    progress: bool = False


class AppConfig(BaseModel):
    numerics: NumericsConfig = NumericsConfig()
    grid: GridConfig = GridConfig()
    mountain_pass: MountainPassConfig = MountainPassConfig()
    minimax: MinimaxConfig = MinimaxConfig()
    games: GamesConfig = GamesConfig()
    logging: LoggingConfig = LoggingConfig()


def load_config(path=None) -> AppConfig:
    config_path = Path(
        path or os.environ.get("INVEX_TOPO_CONFIG")
        or PROJECT_ROOT / "config/config.yaml")
    if not config_path.exists():
        return AppConfig()
    with open(config_path, "r") as f:
        config_dict = yaml.safe_load(f) or {}
    return AppConfig(**config_dict)


config = load_config()
