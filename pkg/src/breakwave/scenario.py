"""JSON scenario documents: one experiment per file.

    {
      "name": "tanh-steep",
      "kernel":  {"kind": "WhithamExp", "params": {"a": 0.785..., "b": 1.570...}},
      "flux":    {"kind": "RevertedWhithamDrift", "params": {}},
      "profile": {"kind": "TanhFront", "params": {"A": 0.2, "s": 20, "x0": 0, "w": 0.5}},
      "solver":  {"L": 16, "N": 4096, "horizon": 1.0, ...},
      "threshold": {"mu": "auto", "grid_points": 128},
      "seed": 0
    }

Every problem is reported as a ConfigError naming the offending field path.
"""
from __future__ import annotations

import copy
import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError, KernelError
from .flux import FLUXES, FluxModel
from .kernel import KERNELS, Kernel
from .profiles import PROFILES, Profile
from .solver import SolverParams

SOLVER_DEFAULTS = {
    "L": 20.0, "N": 2048, "horizon": 1.0, "cfl": 0.4, "G_max": None, "theta": 0.15,
    "record_every": 10, "snapshot_times": [], "boundary_tol": 1e-8,
    "reconstruction": "muscl", "dt_min": 1e-10,
}
THRESHOLD_DEFAULTS = {"mu": "auto", "grid_points": 128}
RICCATI_DEFAULTS = {"dt": 1e-3, "horizon": None}
TOP_KEYS = {"name", "kernel", "flux", "profile", "solver", "threshold", "riccati",
            "sweep", "seed", "description"}


@dataclass
class Scenario:
    name: str
    kernel: Kernel
    flux: FluxModel
    profile: Profile
    solver: dict
    threshold: dict
    riccati: dict
    sweep: dict | None
    seed: int
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def horizon(self) -> float:
        return float(self.solver["horizon"])

    @property
    def record_every(self) -> int:
        return int(self.solver["record_every"])

    def solver_params(self) -> SolverParams:
        s = self.solver
        return SolverParams(
            cfl=s["cfl"], G_max=s["G_max"], theta=s["theta"], dt_min=s["dt_min"],
            boundary_tol=s["boundary_tol"], reconstruction=s["reconstruction"],
            snapshot_times=tuple(s["snapshot_times"]),
        )

    def with_overrides(self, overrides: dict) -> "Scenario":
        """Re-parse with dotted-path overrides, e.g. {"profile.params.A": 0.3}."""
        doc = copy.deepcopy(self.raw)
        for path, value in overrides.items():
            set_path(doc, path, value)
        return parse(doc)


def set_path(doc: dict, path: str, value) -> None:
    keys = path.split(".")
    node = doc
    for i, key in enumerate(keys[:-1]):
        if not isinstance(node.get(key), dict):
            raise ConfigError(f"{'.'.join(keys[:i + 1])}: cannot set {path!r}, no such section")
        node = node[key]
    node[keys[-1]] = value


def _require(doc: dict, key: str, where: str, kind=dict):
    if key not in doc:
        raise ConfigError(f"{where}{key}: missing required field")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise ConfigError(f"{where}{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _number(val, path: str, allow_none: bool = False):
    if val is None and allow_none:
        return None
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {val!r}")
    return val


def _config_fields(cls, skip=()):
    """(name, required) for numeric dataclass fields; None defaults are optional."""
    out = []
    for f in dataclasses.fields(cls):
        if f.name in skip or f.type in ("Callable",):
            continue
        out.append((f.name, f.default is not None))
    return out


def _build(section: dict, registry: dict, path: str, extra: dict | None = None, skip=()):
    kind = _require(section, "kind", f"{path}.", str)
    if kind not in registry:
        raise ConfigError(f"{path}.kind: unknown {path} {kind!r}; choose from {sorted(registry)}")
    unknown = set(section) - {"kind", "params"}
    if unknown:
        raise ConfigError(f"{path}.{sorted(unknown)[0]}: unknown field")
    params = _require(section, "params", f"{path}.", dict)
    cls = registry[kind]
    fields = _config_fields(cls, skip)
    names = {n for n, _ in fields}
    for key in params:
        if key not in names:
            raise ConfigError(f"{path}.params.{key}: unknown parameter for {kind}; "
                              f"expected {sorted(names)}")
    for name, required in fields:
        if required and name not in params:
            raise ConfigError(f"{path}.params.{name}: missing required parameter for {kind}")
        if name in params:
            _number(params[name], f"{path}.params.{name}", allow_none=not required)
    try:
        return cls(**params, **(extra or {}))
    except (ValueError, KernelError) as exc:
        raise ConfigError(f"{path}.params: {exc}") from None


def _merge(section, defaults: dict, path: str) -> dict:
    if section is None:
        section = {}
    if not isinstance(section, dict):
        raise ConfigError(f"{path}: expected an object")
    for key in section:
        if key not in defaults:
            raise ConfigError(f"{path}.{key}: unknown field")
    return {**defaults, **section}


def _check_solver(s: dict) -> None:
    for key in ("L", "horizon", "cfl", "theta", "dt_min"):
        if _number(s[key], f"solver.{key}") <= 0:
            raise ConfigError(f"solver.{key}: must be positive, got {s[key]}")
    for key in ("N", "record_every"):
        if not isinstance(s[key], int) or isinstance(s[key], bool) or s[key] < 1:
            raise ConfigError(f"solver.{key}: expected a positive integer, got {s[key]!r}")
    if s["N"] & (s["N"] - 1):
        raise ConfigError(f"solver.N: grid size {s['N']} is not a power of two")
    _number(s["G_max"], "solver.G_max", allow_none=True)
    _number(s["boundary_tol"], "solver.boundary_tol", allow_none=True)
    if s["reconstruction"] not in ("muscl", "constant"):
        raise ConfigError("solver.reconstruction: expected 'muscl' or 'constant'")
    if not isinstance(s["snapshot_times"], list):
        raise ConfigError("solver.snapshot_times: expected a list of times")
    for i, t in enumerate(s["snapshot_times"]):
        _number(t, f"solver.snapshot_times[{i}]")


def _check_threshold(th: dict) -> None:
    mu = th["mu"]
    if mu != "auto":
        if _number(mu, "threshold.mu") >= 0:
            raise ConfigError(f"threshold.mu: must be negative or 'auto', got {mu}")
    gp = th["grid_points"]
    if not isinstance(gp, int) or isinstance(gp, bool) or gp < 2:
        raise ConfigError(f"threshold.grid_points: expected an integer >= 2, got {gp!r}")


def _check_sweep(sw) -> dict | None:
    if sw is None:
        return None
    if not isinstance(sw, dict):
        raise ConfigError("sweep: expected an object")
    axes = _require(sw, "axes", "sweep.", list)
    if not 1 <= len(axes) <= 2:
        raise ConfigError(f"sweep.axes: expected 1 or 2 axes, got {len(axes)}")
    for i, ax in enumerate(axes):
        where = f"sweep.axes[{i}]."
        if not isinstance(ax, dict):
            raise ConfigError(f"sweep.axes[{i}]: expected an object")
        _require(ax, "path", where, str)
        if "values" in ax:
            vals = _require(ax, "values", where, list)
            if not vals:
                raise ConfigError(f"{where}values: must be non-empty")
            for j, v in enumerate(vals):
                _number(v, f"{where}values[{j}]")
        else:
            _number(_require(ax, "start", where, None), f"{where}start")
            _number(_require(ax, "stop", where, None), f"{where}stop")
            count = _require(ax, "count", where, int)
            if count < 1:
                raise ConfigError(f"{where}count: must be >= 1")
    for key in sw:
        if key not in ("axes", "simulate"):
            raise ConfigError(f"sweep.{key}: unknown field")
    return {"axes": axes, "simulate": bool(sw.get("simulate", False))}


def parse(doc) -> Scenario:
    if not isinstance(doc, dict):
        raise ConfigError("scenario: top level must be a JSON object")
    for key in doc:
        if key not in TOP_KEYS:
            raise ConfigError(f"{key}: unknown top-level field")
    name = _require(doc, "name", "", str)
    solver = _merge(doc.get("solver"), SOLVER_DEFAULTS, "solver")
    _check_solver(solver)
    threshold = _merge(doc.get("threshold"), THRESHOLD_DEFAULTS, "threshold")
    _check_threshold(threshold)
    riccati = _merge(doc.get("riccati"), RICCATI_DEFAULTS, "riccati")
    _number(riccati["dt"], "riccati.dt")
    _number(riccati["horizon"], "riccati.horizon", allow_none=True)
    kernel = _build(_require(doc, "kernel", ""), KERNELS, "kernel")
    flux = _build(_require(doc, "flux", ""), FLUXES, "flux", skip=("lower",))
    profile = _build(_require(doc, "profile", ""), PROFILES, "profile",
                     extra={"L": float(solver["L"]), "N": solver["N"]}, skip=("L", "N"))
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigError(f"seed: expected an unsigned 64-bit integer, got {seed!r}")
    return Scenario(name=name, kernel=kernel, flux=flux, profile=profile, solver=solver,
                    threshold=threshold, riccati=riccati, sweep=_check_sweep(doc.get("sweep")),
                    seed=seed, raw=copy.deepcopy(doc))


def load(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    try:
        return parse(doc)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
