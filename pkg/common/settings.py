from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, fields
from functools import lru_cache
import logging
import os
from typing import Iterator, Optional

from dotenv import load_dotenv

CONVENTION_FIXED_FACE = "fixed-face"
CONVENTION_INFINITY = "infinity"
CONVENTIONS = (CONVENTION_FIXED_FACE, CONVENTION_INFINITY)

ENV_TOL_GEOM = "TOL_GEOM"
ENV_TOL_AGREE = "TOL_AGREE"
ENV_TOL_COINCIDE = "TOL_COINCIDE"
ENV_FLIP_MARGIN = "FLIP_MARGIN"
ENV_FD_STEP = "FD_STEP"
ENV_MAX_TREE_VERTICES = "MAX_TREE_VERTICES"
ENV_MAX_PFAFFIAN_VERTICES = "MAX_PFAFFIAN_VERTICES"
ENV_CONVENTION = "CONVENTION"

DEFAULT_TOL_GEOM = 1e-12
DEFAULT_TOL_AGREE = 1e-9
DEFAULT_TOL_COINCIDE = 1e-9
DEFAULT_FLIP_MARGIN = 1e-9
DEFAULT_FD_STEP = 1e-4
DEFAULT_MAX_TREE_VERTICES = 8
DEFAULT_MAX_PFAFFIAN_VERTICES = 6
DEFAULT_CONVENTION = CONVENTION_FIXED_FACE

ENV_SAMPLER_SEED = "SAMPLER_SEED"
ENV_SAMPLER_AUDIT_INTERVAL = "SAMPLER_AUDIT_INTERVAL"
ENV_SAMPLER_THIN = "SAMPLER_THIN"
ENV_SAMPLER_WORKERS = "SAMPLER_WORKERS"

DEFAULT_SAMPLER_SEED = 0
DEFAULT_SAMPLER_AUDIT_INTERVAL = 10_000
DEFAULT_SAMPLER_THIN = 1
DEFAULT_SAMPLER_WORKERS = 1

DEFAULT_LOGS_DIR = "logs"
DEFAULT_LOG_LEVEL = logging.INFO
DEFAULT_LOG_FORMAT = "%(asctime)s | %(levelname)s | %(name)s | %(message)s"
DEFAULT_LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
DEFAULT_LOG_TO_FILE = True
COLOR_RESET = "\x1b[0m"
LEVEL_COLORS = {
    logging.DEBUG: "\x1b[36m",
    logging.INFO: "\x1b[32m",
    logging.WARNING: "\x1b[33m",
    logging.ERROR: "\x1b[31m",
    logging.CRITICAL: "\x1b[35m",
}

ENV_LOG_LEVEL = "LOG_LEVEL"
ENV_LOGS_DIR = "LOGS_DIR"
ENV_LOG_FORMAT = "LOG_FORMAT"
ENV_LOG_DATE_FORMAT = "LOG_DATE_FORMAT"
ENV_LOG_TO_FILE = "LOG_TO_FILE"


def _parse_log_level(value: Optional[str], default: int) -> int:
    if not value:
        return default

    if value.isdigit():
        return int(value)

    level = logging.getLevelName(value.upper())
    if isinstance(level, int):
        return level

    return default


def _parse_float(value: Optional[str], default: float) -> float:
    if not value:
        return default
    try:
        parsed = float(value)
    except ValueError:
        return default
    return parsed if parsed > 0 else default


def _parse_int(value: Optional[str], default: int) -> int:
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        return default


def _parse_bool(value: Optional[str], default: bool) -> bool:
    if value is None or not value.strip():
        return default
    return value.strip().lower() not in ("0", "false", "no", "off")


def _parse_convention(value: Optional[str], default: str) -> str:
    if value and value.strip().lower() in CONVENTIONS:
        return value.strip().lower()
    return default


@dataclass(frozen=True)
class LogSettings:
    logs_dir: str
    level: int
    fmt: str
    datefmt: str
    to_file: bool = DEFAULT_LOG_TO_FILE


@dataclass(frozen=True)
class NumericSettings:
    tol_geom: float  # predicate tolerance, relative to the bounding box
    tol_agree: float  # relative agreement between measure routes
    tol_coincide: float  # minimum pairwise distance, relative to the bounding box
    flip_margin: float  # incircle margin reported as a flip boundary
    fd_step: float  # finite-difference step, relative to local edge length
    max_tree_vertices: int  # N guard for 3-tree enumeration
    max_pfaffian_vertices: int  # N guard for exact Pfaffians
    convention: str = DEFAULT_CONVENTION


@dataclass(frozen=True)
class SamplerSettings:
    seed: int
    audit_interval: int
    thin: int
    workers: int


@lru_cache(maxsize=1)
def get_numeric_settings() -> NumericSettings:
    load_dotenv()

    return NumericSettings(
        tol_geom=_parse_float(os.getenv(ENV_TOL_GEOM), DEFAULT_TOL_GEOM),
        tol_agree=_parse_float(os.getenv(ENV_TOL_AGREE), DEFAULT_TOL_AGREE),
        tol_coincide=_parse_float(os.getenv(ENV_TOL_COINCIDE), DEFAULT_TOL_COINCIDE),
        flip_margin=_parse_float(os.getenv(ENV_FLIP_MARGIN), DEFAULT_FLIP_MARGIN),
        fd_step=_parse_float(os.getenv(ENV_FD_STEP), DEFAULT_FD_STEP),
        max_tree_vertices=_parse_int(
            os.getenv(ENV_MAX_TREE_VERTICES), DEFAULT_MAX_TREE_VERTICES
        ),
        max_pfaffian_vertices=_parse_int(
            os.getenv(ENV_MAX_PFAFFIAN_VERTICES), DEFAULT_MAX_PFAFFIAN_VERTICES
        ),
        convention=_parse_convention(os.getenv(ENV_CONVENTION), DEFAULT_CONVENTION),
    )


_NUMERIC_ENV = {
    "tol_geom": ENV_TOL_GEOM,
    "tol_agree": ENV_TOL_AGREE,
    "tol_coincide": ENV_TOL_COINCIDE,
    "flip_margin": ENV_FLIP_MARGIN,
    "fd_step": ENV_FD_STEP,
    "max_tree_vertices": ENV_MAX_TREE_VERTICES,
    "max_pfaffian_vertices": ENV_MAX_PFAFFIAN_VERTICES,
    "convention": ENV_CONVENTION,
}


@contextmanager
def numeric_overrides(**values) -> Iterator[NumericSettings]:
    """
    Scoped NumericSettings, e.g. from command-line flags. None values are
    ignored. The environment and the cached settings are restored on exit.
    """
    unknown = set(values) - {f.name for f in fields(NumericSettings)}
    if unknown:
        raise TypeError(f"unknown numeric settings: {sorted(unknown)}")
    changes = {_NUMERIC_ENV[name]: str(value) for name, value in values.items() if value is not None}
    saved = {key: os.environ.get(key) for key in changes}
    os.environ.update(changes)
    get_numeric_settings.cache_clear()
    try:
        yield get_numeric_settings()
    finally:
        for key, previous in saved.items():
            if previous is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = previous
        get_numeric_settings.cache_clear()


@lru_cache(maxsize=1)
def get_sampler_settings() -> SamplerSettings:
    load_dotenv()

    return SamplerSettings(
        seed=_parse_int(os.getenv(ENV_SAMPLER_SEED), DEFAULT_SAMPLER_SEED),
        audit_interval=max(
            1,
            _parse_int(
                os.getenv(ENV_SAMPLER_AUDIT_INTERVAL), DEFAULT_SAMPLER_AUDIT_INTERVAL
            ),
        ),
        thin=max(1, _parse_int(os.getenv(ENV_SAMPLER_THIN), DEFAULT_SAMPLER_THIN)),
        workers=max(1, _parse_int(os.getenv(ENV_SAMPLER_WORKERS), DEFAULT_SAMPLER_WORKERS)),
    )


@lru_cache(maxsize=1)
def get_log_settings() -> LogSettings:
    load_dotenv()

    logs_dir = os.getenv(ENV_LOGS_DIR, DEFAULT_LOGS_DIR)
    level = _parse_log_level(os.getenv(ENV_LOG_LEVEL), DEFAULT_LOG_LEVEL)
    fmt = os.getenv(ENV_LOG_FORMAT, DEFAULT_LOG_FORMAT)
    datefmt = os.getenv(ENV_LOG_DATE_FORMAT, DEFAULT_LOG_DATE_FORMAT)
    to_file = _parse_bool(os.getenv(ENV_LOG_TO_FILE), DEFAULT_LOG_TO_FILE)

    return LogSettings(
        logs_dir=logs_dir,
        level=level,
        fmt=fmt,
        datefmt=datefmt,
        to_file=to_file,
    )
