"""Experiment configuration: a flat JSON document plus ``key=value`` overrides."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..circuits import Family
from ..errors import ValidationError

DEFAULT_C_GRID = (1e-3, 10**1.5, 40)
DEFAULT_REG_GRID = [32.0, 64.0, 128.0, 512.0, 1024.0]


def default_c_grid(c_min=DEFAULT_C_GRID[0], c_max=DEFAULT_C_GRID[1], num=DEFAULT_C_GRID[2]) -> list[float]:
    """Log-uniform bandwidths, 40 points over ``[1e-3, 10**1.5]`` by default."""
    return [float(c) for c in np.logspace(np.log10(c_min), np.log10(c_max), int(num))]


@dataclass
class ExperimentConfig:
    # "synthetic:hidden_manifold", "synthetic:uniform" or a CSV path
    dataset: str = "synthetic:hidden_manifold"
    label_column: str | None = "label"
    dataset_name: str | None = None
    sample_size: int | None = 400
    data_seed: int = 0
    # hidden-manifold generator
    synth_d: int = 16
    synth_manifold_dim: int = 6
    dims: list[int] = field(default_factory=lambda: [4])
    circuits: list[str] = field(default_factory=lambda: ["SeparableRX"])
    kernels: list[str] = field(default_factory=lambda: ["FQK", "PQK", "RBF", "Poly2"])
    references: list[str] = field(default_factory=lambda: ["RBF", "Poly2"])
    layers: int = 2
    gamma: float = 1.0
    param_seed: int = 1
    C_grid: list[float] = field(default_factory=lambda: list(DEFAULT_REG_GRID))
    c_grid: list[float] = field(default_factory=default_c_grid)
    seeds: list[int] = field(default_factory=lambda: [0, 1, 2, 3, 4, 5])
    # "1/(2C)" or a fixed non-negative number
    lambda_rule: str | float = "1/(2C)"
    train_fraction: float = 0.8
    standardize: bool = True
    fit_on: str = "train"
    svm_tol: float = 1e-3
    svm_max_iter: int = 100_000
    output_dir: str = "results"

    def __post_init__(self):
        self.validate()

    def validate(self):
        for name in ("dims", "circuits", "kernels", "C_grid", "c_grid", "seeds"):
            if not getattr(self, name):
                raise ValidationError(f"{name} must be non-empty")
        if any(not c > 0 for c in self.c_grid):
            raise ValidationError("bandwidths must be > 0")
        if any(not C > 0 for C in self.C_grid):
            raise ValidationError("regularisation values must be > 0")
        for fam in self.circuits:
            Family(fam)
        for k in list(self.kernels) + list(self.references):
            parse_kernel_name(k)
        if self.fit_on not in ("train", "all"):
            raise ValidationError(f"fit_on must be 'train' or 'all', got {self.fit_on!r}")
        self.lam(1.0)

    def lam(self, C: float) -> float:
        rule = self.lambda_rule
        if isinstance(rule, str):
            if rule.replace(" ", "") == "1/(2C)":
                return 1.0 / (2.0 * C)
            try:
                rule = float(rule)
            except ValueError:
                raise ValidationError(f"unknown lambda rule {self.lambda_rule!r}") from None
        if rule < 0:
            raise ValidationError("lambda must be >= 0")
        return float(rule)

    def to_dict(self) -> dict:
        return asdict(self)

    def dump(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        if isinstance(d.get("c_grid"), dict):
            g = d["c_grid"]
            d["c_grid"] = default_c_grid(g.get("min", DEFAULT_C_GRID[0]), g.get("max", DEFAULT_C_GRID[1]), g.get("num", DEFAULT_C_GRID[2]))
        return cls(**d)

    @classmethod
    def load(cls, path, overrides=None) -> "ExperimentConfig":
        d = {}
        if path:
            with open(path) as fh:
                d = json.load(fh)
        for item in overrides or []:
            key, value = parse_override(item)
            d[key] = value
        return cls.from_dict(d)


def parse_override(item: str):
    """``key=value`` where value is parsed as JSON when possible."""
    if "=" not in item:
        raise ValidationError(f"override {item!r} is not of the form key=value")
    key, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key.strip(), value


def parse_kernel_name(name: str) -> tuple[str, int]:
    """``"FQK" -> ("FQK", 0)``, ``"Poly2" -> ("Poly", 2)``."""
    if name in ("FQK", "PQK", "RBF"):
        return name, 0
    if name.startswith("Poly") and name[4:].isdigit() and int(name[4:]) >= 1:
        return "Poly", int(name[4:])
    raise ValidationError(f"unknown kernel {name!r}")
