"""Experiment configuration: a flat key = value text format that round-trips.

Floats are serialized with repr so a written file parses back to bit-equal
values; a manifest produced by the CLI is itself a valid config file.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .led import LedModel
from .ofdm import Constellation
from .rates import AUTO


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


@dataclass(frozen=True)
class ExperimentConfig:
    """Every knob a simulation run needs, with desk-scale defaults."""

    n_subcarriers: int = 64
    constellation: Constellation = Constellation.QPSK
    symbol_count: int = 10000
    oversample_factor: int = 4
    seed: int = 12345
    i_low: float = 0.0
    i_high: float = 1.0
    o_high: float = 1.0
    lambdas: tuple[float, ...] = (0.05, 0.2, 0.35)
    gammas: tuple[float, ...] | str = AUTO
    dnr_db_start: float = 0.0
    dnr_db_stop: float = 60.0
    dnr_db_step: float = 2.0
    zeta_step: float = 0.01
    gamma_step: float = 0.005
    output_dir: str = "vlcsim-out"
    n_list: tuple[int, ...] | None = None

    def validate(self) -> "ExperimentConfig":
        if self.n_subcarriers % 2 != 0 or self.n_subcarriers < 4:
            raise ConfigError("n_subcarriers", f"must be even and >= 4, got {self.n_subcarriers}")
        if self.symbol_count < 1:
            raise ConfigError("symbol_count", f"must be >= 1, got {self.symbol_count}")
        if self.oversample_factor < 1:
            raise ConfigError("oversample_factor", f"must be >= 1, got {self.oversample_factor}")
        if self.seed < 0:
            raise ConfigError("seed", f"must be >= 0, got {self.seed}")
        if not self.i_high > self.i_low:
            raise ConfigError("i_high", f"must exceed i_low, got [{self.i_low}, {self.i_high}]")
        if not self.o_high > 0:
            raise ConfigError("o_high", f"must be positive, got {self.o_high}")
        if not self.lambdas:
            raise ConfigError("lambdas", "must list at least one brightness factor")
        for lam in self.lambdas:
            if not 0.0 < lam < 1.0:
                raise ConfigError("lambdas", f"brightness factors must be in (0, 1), got {lam}")
        if isinstance(self.gammas, str):
            if self.gammas != AUTO:
                raise ConfigError("gammas", f"must be a ratio list or '{AUTO}', got {self.gammas!r}")
        else:
            for gamma in self.gammas:
                if not 0.0 < gamma < 1.0:
                    raise ConfigError("gammas", f"forward ratios must be in (0, 1), got {gamma}")
        if not self.dnr_db_step > 0:
            raise ConfigError("dnr_db_step", f"must be positive, got {self.dnr_db_step}")
        if self.dnr_db_stop < self.dnr_db_start:
            raise ConfigError("dnr_db_stop", f"must be >= dnr_db_start, got {self.dnr_db_stop}")
        if not 0.0 < self.zeta_step <= 0.5:
            raise ConfigError("zeta_step", f"must be in (0, 0.5], got {self.zeta_step}")
        if not self.gamma_step > 0:
            raise ConfigError("gamma_step", f"must be positive, got {self.gamma_step}")
        if self.n_list is not None:
            for n in self.n_list:
                if n % 2 != 0 or n < 4:
                    raise ConfigError("n_list", f"entries must be even and >= 4, got {n}")
        return self

    def led(self) -> LedModel:
        return LedModel(i_low=self.i_low, i_high=self.i_high, o_high=self.o_high)

    def dnr_db_grid(self) -> np.ndarray:
        count = int(np.floor((self.dnr_db_stop - self.dnr_db_start) / self.dnr_db_step + 1e-9)) + 1
        return self.dnr_db_start + self.dnr_db_step * np.arange(count)

    def subcarrier_counts(self) -> tuple[int, ...]:
        return self.n_list if self.n_list else (self.n_subcarriers,)

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "n_list" and value is None:
                continue
            lines.append(f"{f.name} = {_format_value(value)}")
        return "\n".join(lines) + "\n"

    def save(self, path):
        Path(path).write_text(self.to_text())


def _format_value(value) -> str:
    if isinstance(value, Constellation):
        return value.value
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    return str(value)


_PARSERS = {
    "n_subcarriers": int,
    "constellation": Constellation,
    "symbol_count": int,
    "oversample_factor": int,
    "seed": int,
    "i_low": float,
    "i_high": float,
    "o_high": float,
    "lambdas": _parse_float_list,
    "gammas": lambda text: AUTO if text.strip() == AUTO else _parse_float_list(text),
    "dnr_db_start": float,
    "dnr_db_stop": float,
    "dnr_db_step": float,
    "zeta_step": float,
    "gamma_step": float,
    "output_dir": str,
    "n_list": _parse_int_list,
}


def parse_config(text: str, base: ExperimentConfig | None = None) -> ExperimentConfig:
    """Parse key = value lines ('#' starts a comment) over a base config."""
    cfg = base or ExperimentConfig()
    overrides = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", f"expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        parser = _PARSERS.get(key)
        if parser is None:
            raise ConfigError(key, "unknown configuration key")
        try:
            overrides[key] = parser(value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(key, f"cannot parse {value!r}: {exc}") from exc
    return replace(cfg, **overrides)


def load_config(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from exc
    return parse_config(text, base)
