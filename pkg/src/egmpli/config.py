"""Benchmark configuration and its ``key = value`` file format.

Sections map onto the parameter dataclasses::

    [bench]     n_records, sir_levels_db, master_seed, sample_rate, output_dir,
                workers, records_per_sir
    [egm]       EgmSynthParams fields
    [pli]       PliParams fields
    [denoise]   DenoiseConfig fields
    [sci]       SciConfig fields

Sequences are comma separated; ``inf`` is accepted as an SIR level.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path

from .denoise import DenoiseConfig
from .metrics import SciConfig
from .signal import DEFAULT_SAMPLE_RATE, ParameterError
from .synthesis import EgmSynthParams, PliParams


class ConfigError(ValueError):
    """Unreadable or invalid configuration."""


@dataclass(frozen=True)
class BenchConfig:
    n_records: int = 100
    sir_levels_db: tuple[float, ...] = (25.0, 20.0, 15.0, 10.0, 5.0)
    master_seed: int = 20190901
    sample_rate: float = DEFAULT_SAMPLE_RATE
    egm: EgmSynthParams = field(default_factory=EgmSynthParams)
    pli: PliParams = field(default_factory=PliParams)
    denoise: DenoiseConfig = field(default_factory=DenoiseConfig)
    sci: SciConfig = field(default_factory=SciConfig)
    output_dir: str = "bench_out"
    workers: int = 1
    # False: every clean record is mixed at all SIR levels.
    # True: each SIR level gets its own n_records clean records.
    records_per_sir: bool = False

    def __post_init__(self):
        if self.n_records < 1:
            raise ParameterError("n_records must be >= 1")
        if not self.sir_levels_db:
            raise ParameterError("at least one SIR level is required")
        for s in self.sir_levels_db:
            if math.isnan(s) or s == -math.inf:
                raise ParameterError(f"invalid SIR level {s}")
        if not 0 <= self.master_seed < 2**64:
            raise ParameterError("master_seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")


_SECTIONS = {"egm": EgmSynthParams, "pli": PliParams, "denoise": DenoiseConfig, "sci": SciConfig}
_BENCH_KEYS = ("n_records", "sir_levels_db", "master_seed", "sample_rate", "output_dir", "workers", "records_per_sir")


def _convert(raw: str, default):
    raw = raw.strip()
    if isinstance(default, bool):
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, tuple):
        items = [v for v in (p.strip() for p in raw.split(",")) if v]
        return tuple(float(v) for v in items)
    return raw


def _update(obj, values: dict[str, str], section: str):
    known = {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
    changes = {}
    for key, raw in values.items():
        if key not in known:
            raise ConfigError(f"[{section}] unknown key {key!r}")
        try:
            changes[key] = _convert(raw, known[key])
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key}: {exc}") from exc
    try:
        return dataclasses.replace(obj, **changes)
    except ParameterError as exc:
        raise ConfigError(f"[{section}] {exc}") from exc


def parse_config(text: str, base: BenchConfig | None = None) -> BenchConfig:
    """Apply the settings in ``text`` on top of ``base`` (defaults if None)."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    cfg = base or BenchConfig()
    for section in parser.sections():
        values = dict(parser.items(section))
        if section == "bench":
            extra = set(values) - set(_BENCH_KEYS)
            if extra:
                raise ConfigError(f"[bench] unknown keys {sorted(extra)}")
            cfg = _update(cfg, values, section)
        elif section in _SECTIONS:
            sub = _update(getattr(cfg, section), values, section)
            cfg = dataclasses.replace(cfg, **{section: sub})
        else:
            raise ConfigError(f"unknown section [{section}]")
    return cfg


def load_config(path: str | Path | None, seed: int | None = None) -> BenchConfig:
    cfg = BenchConfig()
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        cfg = parse_config(text, cfg)
    if seed is not None:
        try:
            cfg = dataclasses.replace(cfg, master_seed=seed)
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc
    return cfg


def dump_config(cfg: BenchConfig) -> str:
    """Inverse of :func:`parse_config`."""

    def fmt(v):
        if isinstance(v, tuple):
            return ", ".join(repr(float(x)) for x in v)
        return str(v)

    lines = ["[bench]"]
    lines += [f"{k} = {fmt(getattr(cfg, k))}" for k in _BENCH_KEYS]
    for section in _SECTIONS:
        obj = getattr(cfg, section)
        lines += ["", f"[{section}]"]
        lines += [f"{f.name} = {fmt(getattr(obj, f.name))}" for f in dataclasses.fields(obj)]
    return "\n".join(lines) + "\n"
