"""Experiment configuration: declarative key = value sections plus overrides.

The file format is INI-style (configparser): sections [grid], [mass],
[quadrature], [run]. Every value has a default, so an empty or missing file
is valid; unknown sections or keys are rejected rather than ignored so that
typos surface as configuration errors (exit code 2 at the CLI).
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from pathlib import Path


class ConfigError(ValueError):
    """Invalid configuration file or parameter combination."""


_SCHEMA: dict[str, dict[str, type]] = {
    "grid": {"n": int, "l": float},
    "mass": {"m": float, "m_lo": float, "m_hi": float, "half_width": float},
    "quadrature": {
        "mass_nodes": int,
        "dt": float,
        "t_max": float,
        "tol": float,
        "t_ceiling": float,
    },
    "run": {
        "seed": int,
        "trials": int,
        "families": int,
        "time": float,
        "samples": int,
        "window": float,
        "wick_order": int,
    },
}


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 16
    l: float = 10.0
    m: float = 1.5
    m_lo: float = 1.0
    m_hi: float = 2.0
    half_width: float = 0.05
    mass_nodes: int = 200
    dt: float = 0.05
    t_max: float = 200.0
    tol: float = 1e-6
    t_ceiling: float = 51200.0
    seed: int = 0
    trials: int = 20
    families: int = 5
    time: float = 100.0
    samples: int = 11
    window: float = 6.0
    wick_order: int = 2

    def as_dict(self) -> dict[str, object]:
        return {
            section: {key: getattr(self, key) for key in keys}
            for section, keys in _SCHEMA.items()
        }


def load_config(path: str | Path | None) -> ExperimentConfig:
    if path is None:
        return ExperimentConfig()
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    text = Path(path).read_text()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from exc
    values: dict[str, object] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"unknown key '{key}' in section [{section}]")
            caster = _SCHEMA[section][key]
            try:
                values[key] = caster(raw)
            except ValueError as exc:
                raise ConfigError(
                    f"key '{key}' in [{section}] expects {caster.__name__}: {raw!r}"
                ) from exc
    return ExperimentConfig(**values)


def apply_overrides(
    config: ExperimentConfig,
    seed: int | None = None,
    tol: float | None = None,
) -> ExperimentConfig:
    out = config
    if seed is not None:
        out = replace(out, seed=seed)
    if tol is not None:
        out = replace(out, tol=tol)
    return out


def validate_config(config: ExperimentConfig, command: str) -> None:
    if config.n < 1:
        raise ConfigError("grid needs at least one interior point")
    if config.l <= 0.0:
        raise ConfigError("grid length must be positive")
    if config.m < 0.0:
        raise ConfigError("mass must be nonnegative")
    for name in ("dt", "tol", "t_max", "t_ceiling", "half_width"):
        if getattr(config, name) <= 0.0:
            raise ConfigError(f"{name} must be positive")
    if config.mass_nodes < 2:
        raise ConfigError("mass quadrature needs at least two nodes")
    if command in ("massdecomp", "reconstruct"):
        if not config.m_lo > 0.0:
            raise ConfigError(
                "mass interval must satisfy 0 ∉ Ī (need m_lo > 0)"
            )
        if not config.m_hi > config.m_lo:
            raise ConfigError("mass interval needs m_lo < m_hi")
    if command == "reconstruct":
        if not (
            config.m_lo < config.m - config.half_width
            and config.m + config.half_width < config.m_hi
        ):
            raise ConfigError(
                "weight window [m - half_width, m + half_width] must lie "
                "inside the open mass interval"
            )
    if command == "wick" and not 1 <= config.wick_order <= 4:
        raise ConfigError("wick_order must be between 1 and 4")
    if command in ("state", "massdecomp") and config.trials < 1:
        raise ConfigError("trials must be positive")
