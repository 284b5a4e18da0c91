"""Experiment configuration: one plain JSON document drives every command.

All lengths are dimensionless and time carries squared-length units, so a
tube of half-width R relaxes on the scale t ~ R^2.  Every default is
serialized back out with the results, which is what makes a published run
reproducible from its own report.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from .content import default_fit_times
from .heat.problems import PROBLEM_NAMES

KNOWN_SURFACES = ("plane", "sphere", "cylinder", "torus", "helicoid", "graph")
KNOWN_ASSERTIONS = ("bound", "consistency", "trace")


class ConfigError(ValueError):
    """Raised for malformed or contradictory experiment settings."""


@dataclass
class ExperimentConfig:
    surface: str = "sphere"
    params: dict = field(default_factory=lambda: {"rho": 2.0})
    radius: float = 1.0
    problem: str = "cauchy_sum"
    family: str = "cauchy"
    times: tuple = field(default_factory=default_fit_times)
    seed: int = 1729
    samples: int = 65536
    batches: int = 16
    grid_nu: int = 96
    grid_nv: int = 96
    region: tuple = None
    centers: tuple = None
    probes: tuple = None
    out_dir: str = "out"
    workers: int = 1
    tolerances: dict = field(default_factory=dict)
    assertions: tuple = ("bound", "consistency")

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.surface not in KNOWN_SURFACES:
            raise ConfigError(f"unknown surface {self.surface!r}")
        if not isinstance(self.params, dict):
            raise ConfigError("params must be a mapping")
        if not self.radius > 0.0:
            raise ConfigError("radius must be positive")
        if self.problem not in PROBLEM_NAMES:
            raise ConfigError(f"unknown problem {self.problem!r}")
        if self.family not in ("cauchy", "ibvp"):
            raise ConfigError(f"unknown family {self.family!r}")
        times = tuple(float(t) for t in self.times)
        if not times or any(t <= 0.0 for t in times):
            raise ConfigError("times must be positive")
        if len(set(times)) != len(times):
            raise ConfigError("times must be distinct")
        self.times = tuple(sorted(times, reverse=True))
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2 ** 64):
            raise ConfigError("seed must fit an unsigned 64-bit integer")
        if self.samples < 4 * self.batches or self.batches < 2:
            raise ConfigError("quadrature budget too small")
        if min(self.grid_nu, self.grid_nv) < 8:
            raise ConfigError("curvature grid too coarse")
        if self.region is not None:
            (u0, u1), (v0, v1) = self.region
            if not (u0 < u1 and v0 < v1):
                raise ConfigError("region bounds must be increasing")
            self.region = ((float(u0), float(u1)), (float(v0), float(v1)))
        if self.centers is not None:
            self.centers = tuple((float(u), float(v)) for u, v in self.centers)
        if self.probes is not None:
            self.probes = tuple(tuple(map(float, p)) for p in self.probes)
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if not isinstance(self.tolerances, dict):
            raise ConfigError("tolerances must be a mapping")
        self.assertions = tuple(self.assertions)
        unknown = set(self.assertions) - set(KNOWN_ASSERTIONS)
        if unknown:
            raise ConfigError(f"unknown assertions: {sorted(unknown)}")

    def tolerance(self, name, default):
        return float(self.tolerances.get(name, default))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["times"] = list(self.times)
        d["region"] = [list(b) for b in self.region] if self.region else None
        d["centers"] = [list(c) for c in self.centers] if self.centers else None
        d["probes"] = [list(p) for p in self.probes] if self.probes else None
        d["assertions"] = list(self.assertions)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read())
