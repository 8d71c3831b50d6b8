"""Run configuration: INI-style ``key = value`` text with [section] headers."""

from __future__ import annotations

import configparser
from dataclasses import asdict, dataclass, field

from .curves import Curve, parse_curve
from .errors import ConfigError
from .goursat import BiharmonicField
from .testgen import BoundaryCase

CONFIG_HELP = """\
config keys (all optional):
  [run]        curve = line | circle:a=<f> | implicit:poly=i:j:c,...|ref=x,y
               case = i..v | all          seed = <u64>
  [family]     kind = closed_form | collocation | custom
               basis_size = 40   sample_size = 100
               records = slot:kind:n:re:im; ...   (custom field, e.g. phi:power:1:0.5:0)
  [points]     count = 100   dist_min = 0.05   dist_max = 0.3
  [quadrature] tol = 1e-10   nodes = 16   max_refinement = 12
  [series]     k_max = 64   tol = 1e-13
  [gates]      point = 1e-10   quadrature = 1e-8   implicit = 1e-6
  [grid]       x_min x_max nx y_min y_max ny   field = <member index>
  [kernel]     z = <complex>   w = <complex>   source = <complex>
  [output]     dir = out
"""


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"not a complex number: {text!r}") from exc


def parse_records(text: str):
    """``slot:kind:n:re:im; ...`` → record tuples for BiharmonicField."""
    recs = []
    for item in filter(None, (s.strip() for s in text.replace("\n", ";").split(";"))):
        parts = item.split(":")
        if len(parts) != 5:
            raise ConfigError(f"field record needs slot:kind:n:re:im, got {item!r}")
        slot, kind, n, re_, im = parts
        try:
            recs.append((slot.strip(), kind.strip(), int(n), float(re_), float(im)))
        except ValueError as exc:
            raise ConfigError(f"bad number in record {item!r}") from exc
    return recs


@dataclass
class RunConfig:
    curve: str = "line"
    case: str = "ii"
    seed: int = 0
    family: str = "closed_form"
    basis_size: int = 40
    sample_size: int = 100
    records: str = ""
    count: int = 100
    dist_min: float = 0.05
    dist_max: float = 0.3
    quad_tol: float = 1e-10
    quad_nodes: int = 16
    quad_max_refinement: int = 12
    k_max: int = 64
    series_tol: float = 1e-13
    gate_point: float = 1e-10
    gate_quadrature: float = 1e-8
    gate_implicit: float = 1e-6
    grid: dict = field(default_factory=lambda: {
        "x_min": -1.0, "x_max": 1.0, "nx": 5, "y_min": -0.5, "y_max": -0.05, "ny": 4, "field": 0})
    kernel_z: complex | None = None
    kernel_w: complex | None = None
    kernel_source: complex | None = None
    out_dir: str = "out"

    def validate(self):
        for name in ("quad_tol", "series_tol", "gate_point", "gate_quadrature", "gate_implicit"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.count <= 0:
            raise ConfigError("empty point sample (points.count must be positive)")
        if not 0 < self.dist_min <= self.dist_max:
            raise ConfigError("need 0 < dist_min <= dist_max")
        if self.family not in ("closed_form", "collocation", "custom"):
            raise ConfigError(f"unknown family kind {self.family!r}")
        if self.family == "custom" and not self.records.strip():
            raise ConfigError("family.kind = custom needs family.records")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if self.k_max < 1:
            raise ConfigError("series.k_max must be positive")
        self.cases()
        self.make_curve()
        return self

    def make_curve(self) -> Curve:
        try:
            return parse_curve(self.curve)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def cases(self) -> list[BoundaryCase]:
        if self.case.strip().lower() == "all":
            return list(BoundaryCase)
        try:
            return [BoundaryCase.parse(c) for c in self.case.split(",")]
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def custom_field(self) -> BiharmonicField:
        try:
            return BiharmonicField.from_records(parse_records(self.records), name="custom")
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def as_dict(self):
        """Run parameters for reports; the output location is left out so
        reports written to different directories stay byte-identical."""
        d = asdict(self)
        d.pop("out_dir")
        for k in ("kernel_z", "kernel_w", "kernel_source"):
            if d[k] is not None:
                d[k] = [d[k].real, d[k].imag]
        return d


_KEYS = {
    ("run", "curve"): ("curve", str), ("run", "case"): ("case", str), ("run", "seed"): ("seed", int),
    ("family", "kind"): ("family", str), ("family", "basis_size"): ("basis_size", int),
    ("family", "sample_size"): ("sample_size", int), ("family", "records"): ("records", str),
    ("points", "count"): ("count", int), ("points", "dist_min"): ("dist_min", float),
    ("points", "dist_max"): ("dist_max", float),
    ("quadrature", "tol"): ("quad_tol", float), ("quadrature", "nodes"): ("quad_nodes", int),
    ("quadrature", "max_refinement"): ("quad_max_refinement", int),
    ("series", "k_max"): ("k_max", int), ("series", "tol"): ("series_tol", float),
    ("gates", "point"): ("gate_point", float), ("gates", "quadrature"): ("gate_quadrature", float),
    ("gates", "implicit"): ("gate_implicit", float),
    ("kernel", "z"): ("kernel_z", _complex), ("kernel", "w"): ("kernel_w", _complex),
    ("kernel", "source"): ("kernel_source", _complex),
    ("output", "dir"): ("out_dir", str),
}
_GRID = {"x_min": float, "x_max": float, "nx": int, "y_min": float, "y_max": float, "ny": int, "field": int}


def load_config(text: str | None = None) -> RunConfig:
    cfg = RunConfig()
    if not text:
        return cfg
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from exc
    for section in cp.sections():
        for key, raw in cp.items(section):
            if section == "grid":
                if key not in _GRID:
                    raise ConfigError(f"unknown key [grid] {key}")
                conv = _GRID[key]
                try:
                    cfg.grid[key] = conv(raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for [grid] {key}: {raw!r}") from exc
                continue
            if (section, key) not in _KEYS:
                raise ConfigError(f"unknown key [{section}] {key}")
            attr, conv = _KEYS[(section, key)]
            try:
                setattr(cfg, attr, conv(raw))
            except ValueError as exc:
                raise ConfigError(f"bad value for [{section}] {key}: {raw!r}") from exc
    return cfg
