"""Run configuration: JSON ingestion with strict validation.

Schema (all sections optional unless a task needs them):

    {
      "model": {
        "alphabet_size": 2,
        "transition": [1, 1, 1, 0],          # row-major 0/1
        "potential": {
          "H": {"depth": 1, "values": {"0": 2.0, "1": 3.0}},
          "p": {"depth": 0, "values": {"": 0.5}}
        },
        "beta": 1.0,
        "depth": 4
      },
      "task": "rpf",
      "output": {"path": "out.json", "format": "json"},
      "numeric": {"tol": 1e-12, "max_iter": 10000, "seed": 0,
                  "starts": 5, "N": 4},
      "renewal": {"gamma": 3.0, "K": 100000, "beta_grid": [0.5, 0.8, 1.0]}
    }

Unknown keys anywhere are rejected.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .shiftspace import CylinderFunction, ShiftModel, ShiftSpaceError, admissible_words

TASKS = ("rpf", "kms", "monomial-check", "optimize", "subaction", "ground",
         "renewal", "verify-all")


class ConfigError(ValueError):
    """Invalid or incomplete run configuration."""


def _reject_unknown(section: dict, allowed, where: str):
    extra = set(section) - set(allowed)
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")


def _parse_potential(model: ShiftModel, spec: dict, name: str) -> CylinderFunction:
    _reject_unknown(spec, {"depth", "values"}, f"model.potential.{name}")
    if "depth" not in spec or "values" not in spec:
        raise ConfigError(f"model.potential.{name} needs 'depth' and 'values'")
    depth = spec["depth"]
    if not isinstance(depth, int) or depth < 0:
        raise ConfigError(f"model.potential.{name}.depth must be an integer >= 0")
    table = {}
    for key, val in spec["values"].items():
        try:
            word = tuple(int(c) for c in key)
        except ValueError:
            raise ConfigError(
                f"model.potential.{name}: bad word key {key!r}") from None
        if len(word) != depth or not model.is_admissible(word):
            raise ConfigError(
                f"model.potential.{name}: word {key!r} not admissible at depth {depth}")
        table[word] = float(val)
    try:
        return CylinderFunction.from_dict(model, depth, table)
    except ShiftSpaceError as exc:
        raise ConfigError(f"model.potential.{name}: {exc}") from None


@dataclass(frozen=True)
class NumericSection:
    tol: float = 1e-12
    max_iter: int = 10_000
    seed: int = 0
    depth: int | None = None
    starts: int = 5
    N: int = 4


@dataclass(frozen=True)
class RunConfig:
    task: str
    model: ShiftModel | None
    H: CylinderFunction | None
    p: CylinderFunction | None
    beta: float
    numeric: NumericSection
    out_path: str | None
    out_format: str
    renewal_gamma: float
    renewal_K: int
    renewal_beta_grid: tuple[float, ...]
    raw: dict = field(repr=False, default_factory=dict)

    def digest(self) -> str:
        """Hash of the run parameters; output destination excluded so the
        same computation gets the same digest wherever it is written."""
        import hashlib

        body = {k: v for k, v in self.raw.items() if k != "output"}
        return hashlib.sha256(
            json.dumps(body, sort_keys=True).encode()).hexdigest()[:16]


def load_config(path: str) -> RunConfig:
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(raw)


def parse_config(raw: dict) -> RunConfig:
    _reject_unknown(raw, {"model", "task", "output", "numeric", "renewal"}, "config")
    task = raw.get("task")
    if task not in TASKS:
        raise ConfigError(f"task must be one of {TASKS}, got {task!r}")

    model = H = p = None
    beta = 1.0
    depth_override = None
    if "model" in raw:
        msec = raw["model"]
        _reject_unknown(msec, {"alphabet_size", "transition", "potential",
                               "beta", "depth"}, "model")
        k = msec.get("alphabet_size")
        if not isinstance(k, int) or k < 2:
            raise ConfigError("model.alphabet_size must be an integer >= 2")
        flat = msec.get("transition")
        if not isinstance(flat, list) or len(flat) != k * k or \
                any(x not in (0, 1) for x in flat):
            raise ConfigError(
                f"model.transition must be a row-major 0/1 list of length {k * k}")
        rows = tuple(tuple(flat[i * k:(i + 1) * k]) for i in range(k))
        try:
            model = ShiftModel(k, rows)
        except ShiftSpaceError as exc:
            raise ConfigError(f"model.transition: {exc}") from None
        pot = msec.get("potential", {})
        _reject_unknown(pot, {"H", "p"}, "model.potential")
        if "H" in pot:
            H = _parse_potential(model, pot["H"], "H")
            if (H.values <= 0).any():
                raise ConfigError("model.potential.H must be strictly positive")
        if "p" in pot:
            p = _parse_potential(model, pot["p"], "p")
        beta = float(msec.get("beta", 1.0))
        depth_override = msec.get("depth")
        if depth_override is not None and (
                not isinstance(depth_override, int) or depth_override < 1):
            raise ConfigError("model.depth must be an integer >= 1")

    out = raw.get("output", {})
    _reject_unknown(out, {"path", "format"}, "output")
    fmt = out.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError("output.format must be 'json' or 'csv'")

    num = raw.get("numeric", {})
    _reject_unknown(num, {"tol", "max_iter", "seed", "depth", "starts", "N"},
                    "numeric")
    numeric = NumericSection(
        tol=float(num.get("tol", 1e-12)),
        max_iter=int(num.get("max_iter", 10_000)),
        seed=int(num.get("seed", 0)),
        depth=depth_override if depth_override is not None else num.get("depth"),
        starts=int(num.get("starts", 5)),
        N=int(num.get("N", 4)),
    )

    ren = raw.get("renewal", {})
    _reject_unknown(ren, {"gamma", "K", "beta_grid"}, "renewal")
    grid = tuple(float(b) for b in ren.get("beta_grid",
                                           (0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.2)))

    if task == "renewal":
        if "gamma" in ren and float(ren["gamma"]) <= 2:
            raise ConfigError("renewal.gamma must be > 2")
    elif task != "verify-all" or "model" in raw:
        if model is None:
            raise ConfigError(f"task {task!r} requires a model section")
        if H is None and task != "rpf":
            raise ConfigError(f"task {task!r} requires model.potential.H")

    return RunConfig(
        task=task,
        model=model,
        H=H,
        p=p,
        beta=beta,
        numeric=numeric,
        out_path=out.get("path"),
        out_format=fmt,
        renewal_gamma=float(ren.get("gamma", 3.0)),
        renewal_K=int(ren.get("K", 10_000)),
        renewal_beta_grid=grid,
        raw=raw,
    )


def default_p(model: ShiftModel) -> CylinderFunction:
    """p(z) = 1 / #preimages(T z): the weight making the transfer operator
    normalized.  The preimage count of T z is the column sum at the second
    symbol of z, so this is a depth-2 cylinder function (depth 0 on full
    shifts, where every column sums to the alphabet size)."""
    cols = model.matrix.sum(axis=0)
    if (cols == cols[0]).all():
        return CylinderFunction.constant(model, 1.0 / cols[0])
    vals = np.array([1.0 / cols[w[1]] for w in admissible_words(model, 2)])
    return CylinderFunction(model, 2, vals)
