"""Experiment configuration: a flat ``key = value`` TOML file."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction

import tomli

EXPERIMENTS = ("thm31a", "thm31b", "cor32", "lemma34", "thm41", "thm42", "bench")
RATIONAL_KEYS = ("rho", "eps", "gamma", "delta", "min_witness_fraction",
                 "min_full_rank_fraction", "min_list_fraction")


class ConfigError(ValueError):
    """Bad or inconsistent configuration; the CLI maps it to exit status 2."""


def to_fraction(value, key="value"):
    if value is None:
        return None
    if isinstance(value, bool):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10 ** 9)
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"{key}: cannot read {value!r} as a rational") from None


@dataclass
class ExperimentConfig:
    experiment: str
    # code
    q: int | None = None
    p: int | None = None
    m: int | None = None
    n: int | None = None
    k: int | None = None
    N: int | None = None
    K: int | None = None
    s: int = 1
    # noise
    rho: Fraction | None = None
    eps: Fraction | None = None
    gamma: Fraction | None = None
    delta: Fraction | None = None
    weight: int | None = None
    radius: int | None = None
    preset: str = "random"
    s_mode: str = "fixed"
    # run
    trials: int = 1000
    seed: int = 0
    decoder: str = "auto"
    bound: str = "require"
    patterns: int = 500
    candidates: int = 8
    crosscheck: int | None = None
    max_list: int = 16
    min_witness_fraction: Fraction = Fraction(4, 5)
    min_full_rank_fraction: Fraction = Fraction(9, 10)
    min_list_fraction: Fraction = Fraction(19, 20)
    grid: list | None = None
    enum_cap: int = 1 << 24
    list_cap: int = 1 << 16
    out: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; "
                              f"choose from {', '.join(EXPERIMENTS)}")
        for key in RATIONAL_KEYS:
            setattr(self, key, to_fraction(getattr(self, key), key))
        for f in dataclasses.fields(self):
            val = getattr(self, f.name)
            if f.type.startswith("int") and val is not None and (
                    isinstance(val, bool) or not isinstance(val, int)):
                raise ConfigError(f"{f.name}: expected an integer, got {val!r}")
        if self.q is None and self.p is not None:
            self.q = self.p ** (self.m or 1)
        if self.p is not None and self.q != self.p ** (self.m or 1):
            raise ConfigError(f"q = {self.q} disagrees with p^m = {self.p}^{self.m or 1}")
        if self.trials < 0:
            raise ConfigError("trials must be nonnegative")
        if self.preset not in ("random", "prefix", "segment"):
            raise ConfigError(f"unknown preset {self.preset!r}")
        if self.s_mode not in ("fixed", "average"):
            raise ConfigError(f"s_mode must be fixed or average, not {self.s_mode!r}")
        if self.decoder not in ("auto", "ball", "neighbor"):
            raise ConfigError(f"unknown decoder {self.decoder!r}")
        if self.bound not in ("require", "report"):
            raise ConfigError(f"bound must be require or report, not {self.bound!r}")

    @classmethod
    def from_dict(cls, d):
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(d) - names)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        if "experiment" not in d:
            raise ConfigError("config needs an 'experiment' key")
        return cls(**d)

    @classmethod
    def from_toml(cls, text: str) -> "ExperimentConfig":
        try:
            d = tomli.loads(text)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"config parse error: {exc}") from None
        nested = [key for key, val in d.items() if isinstance(val, dict)]
        if nested:
            raise ConfigError(f"config must be flat; found tables {nested}")
        return cls.from_dict(d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                return cls.from_toml(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_toml(self) -> str:
        """Round-trips through ``from_toml``; rationals are written as strings."""
        lines = []
        for f in dataclasses.fields(self):
            val = getattr(self, f.name)
            if val is None or f.name == "out":
                continue
            lines.append(f"{f.name} = {_toml_value(val)}")
        return "\n".join(lines) + "\n"


def _toml_value(val):
    if isinstance(val, Fraction):
        return f'"{val}"'
    if isinstance(val, str):
        return '"' + val.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(val, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in val) + "]"
    return str(val)
