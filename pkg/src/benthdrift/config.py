"""Run configuration: a small, closed INI schema.

Four sections — ``[model]``, ``[grid]``, ``[run]`` and the optional
``[sweep]`` — with a fixed key set each.  Unknown sections or keys are
rejected (:class:`~benthdrift.errors.SchemaError` naming the key), malformed
INI syntax is reported with its line number
(:class:`~benthdrift.errors.ParseError`).  Every value has a default, so the
empty string parses to the canonical configuration.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from collections.abc import Iterable, Mapping

import numpy as np

from .discretize import FieldPair, Grid
from .errors import ParseError, SchemaError
from .model import (
    ModelSpec,
    logistic,
    sine_pair_geometry,
    strong_allee_cubic,
    uniform_geometry,
)
from .stepping import IntegratorConfig

__all__ = [
    "RunConfig",
    "SweepConfig",
    "BC_PROFILES",
    "PRESET_BASELINES",
    "parse_config",
    "load_config",
    "realize_initial",
]

# Named boundary profiles: (b_u, b_d).  "nf" keeps both ends no-flux, "ff"
# adds free outflow downstream, "h" makes the downstream end effectively
# absorbing.
BC_PROFILES: Mapping[str, tuple[float, float]] = {
    "nf": (0.0, 0.0),
    "ff": (0.0, 1.0),
    "h": (0.0, 1e6),
}

_MODEL_KEYS = {
    "d", "q", "mu", "sigma", "m1", "m2", "b_u", "b_d", "L",
    "growth", "rate", "r", "h", "areas",
}
_GRID_KEYS = {"n"}
_RUN_KEYS = {
    "dt", "t_max", "conv_tol", "extinct_tol",
    "u0", "v0", "stride", "energy", "seed", "preset",
}
_SWEEP_KEYS = {"variable", "start", "stop", "count", "bcs"}
_SECTIONS = {
    "model": _MODEL_KEYS,
    "grid": _GRID_KEYS,
    "run": _RUN_KEYS,
    "sweep": _SWEEP_KEYS,
}

_DEFAULTS: Mapping[str, Mapping[str, str]] = {
    "model": {
        "d": "0.02", "q": "0", "mu": "0.1", "sigma": "0.2",
        "m1": "0.02", "m2": "0.02", "b_u": "0", "b_d": "0", "L": "10",
        "growth": "strong_allee_cubic", "rate": "0.09", "r": "1", "h": "0.4",
        "areas": "uniform",
    },
    "grid": {"n": "400"},
    "run": {
        "dt": "0.05", "t_max": "5000", "conv_tol": "1e-9",
        "extinct_tol": "1e-6", "u0": "zero", "v0": "zero",
        "stride": "20", "energy": "false", "seed": "0", "preset": "",
    },
    "sweep": {
        "variable": "mu", "start": "0.01", "stop": "0.4", "count": "14",
        "bcs": "nf,ff,h",
    },
}

# Model-parameter baselines installed by ``run.preset``.  Explicit keys in
# the file or on the command line still win over the baseline.
PRESET_BASELINES: Mapping[str, Mapping[str, str]] = {
    "fig_biomass_vs_mu": {"q": "0.2"},
    "fig_profiles_vs_mu": {"q": "0.2"},
    "fig_profiles_vs_q": {"mu": "0.04"},
    "fig_bistable_ff": {"q": "0.11", "mu": "0.04", "b_u": "0", "b_d": "1"},
    "fig_bistable_nfnf": {"q": "0.025", "mu": "0.1", "b_u": "0", "b_d": "0"},
    "fig_bistable_hetero": {"q": "0.025", "mu": "0.1", "areas": "sine_pair"},
}


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    """One-parameter sweep: which knob, which values, which boundary sets."""

    variable: str
    values: tuple[float, ...]
    bcs: tuple[str, ...]


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration for one run (or one sweep).

    ``u0``/``v0`` keep their token form so the same configuration can be
    realized on different grids or seeds; ``echo`` is the canonical
    ``section.key=value`` listing embedded in output files.
    """

    spec: ModelSpec
    grid: Grid
    integrator: IntegratorConfig
    u0: str
    v0: str
    stride: int
    energy: bool
    seed: int
    preset: str
    sweep: SweepConfig | None
    echo: tuple[str, ...]


def _float(section: str, key: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise SchemaError(f"expected a number, got {raw!r}", key=f"{section}.{key}") from None
    if not math.isfinite(value):
        raise SchemaError(f"expected a finite number, got {raw!r}", key=f"{section}.{key}")
    return value


def _int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise SchemaError(f"expected an integer, got {raw!r}", key=f"{section}.{key}") from None


def _bool(section: str, key: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise SchemaError(f"expected a boolean, got {raw!r}", key=f"{section}.{key}")


def _validate_ic_token(section: str, key: str, token: str) -> str:
    token = token.strip()
    if token == "zero":
        return token
    for prefix in ("upper_half:", "random:"):
        if token.startswith(prefix):
            tail = token[len(prefix):]
            _float(section, key, tail)
            return token
    _float(section, key, token)  # plain constant
    return token


def realize_initial(config: RunConfig, seed: int | None = None) -> FieldPair:
    """Build the initial fields described by the configuration's IC tokens.

    ``random:AMP`` tokens draw uniformly from ``[0, AMP)`` with a generator
    seeded by ``seed`` (defaulting to the configured seed); the drift
    component consumes the stream first, so a pair of random tokens is
    reproducible as a pair.
    """
    if seed is None:
        seed = config.seed
    rng = np.random.default_rng(seed)
    grid = config.grid

    def build(token: str) -> np.ndarray:
        if token == "zero":
            return np.zeros(grid.n)
        if token.startswith("upper_half:"):
            level = float(token.split(":", 1)[1])
            return np.where(grid.centers >= 0.5 * grid.L, level, 0.0)
        if token.startswith("random:"):
            amp = float(token.split(":", 1)[1])
            return amp * rng.random(grid.n)
        return np.full(grid.n, float(token))

    u = build(config.u0)
    v = build(config.v0)
    return FieldPair(u, v)


def _read_sections(text: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";")
    )
    parser.optionxform = str  # keys are case-sensitive ("L", "b_u")
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ParseError(f"duplicate key {exc.option!r}", lineno=exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ParseError(f"duplicate section {exc.section!r}", lineno=exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ParseError("value before any [section] header", lineno=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else 0
        raise ParseError("malformed line", lineno=lineno) from None
    return {section: dict(parser[section]) for section in parser.sections()}


def _apply_overrides(
    sections: dict[str, dict[str, str]], overrides: Iterable[tuple[str, str]]
) -> None:
    for dotted, value in overrides:
        if "." not in dotted:
            raise SchemaError("override keys look like section.key", key=dotted)
        section, key = dotted.split(".", 1)
        if section not in _SECTIONS or key not in _SECTIONS[section]:
            raise SchemaError("unknown override target", key=dotted)
        sections.setdefault(section, {})[key] = value


def parse_config(
    text: str, overrides: Iterable[tuple[str, str]] | None = None
) -> RunConfig:
    """Parse an INI configuration (possibly empty) into a :class:`RunConfig`.

    ``overrides`` are ``("section.key", "value")`` pairs applied after the
    file, before validation — the CLI's ``--model.q=0.2`` flags end up here.
    """
    sections = _read_sections(text)
    for section, keys in sections.items():
        if section not in _SECTIONS:
            raise SchemaError("unknown section", key=section)
        for key in keys:
            if key not in _SECTIONS[section]:
                raise SchemaError("unknown key", key=f"{section}.{key}")
    if overrides:
        _apply_overrides(sections, overrides)

    has_sweep = "sweep" in sections
    preset_name = sections.get("run", {}).get("preset", "").strip()
    if preset_name and preset_name not in PRESET_BASELINES:
        raise SchemaError(f"unknown preset {preset_name!r}", key="run.preset")
    merged: dict[str, dict[str, str]] = {}
    for section in ("model", "grid", "run", "sweep"):
        merged[section] = dict(_DEFAULTS[section])
        if section == "model" and preset_name:
            merged[section].update(PRESET_BASELINES[preset_name])
        merged[section].update(sections.get(section, {}))

    m = merged["model"]
    length = _float("model", "L", m["L"])
    growth_token = m["growth"].strip()
    if growth_token == "strong_allee_cubic":
        growth = strong_allee_cubic(
            r=_float("model", "r", m["r"]), h=_float("model", "h", m["h"])
        )
    elif growth_token == "logistic":
        growth = logistic(
            rate=_float("model", "rate", m["rate"]), r=_float("model", "r", m["r"])
        )
    else:
        raise SchemaError(f"unknown growth law {growth_token!r}", key="model.growth")
    areas_token = m["areas"].strip()
    if areas_token == "uniform":
        geometry = uniform_geometry(length)
    elif areas_token == "sine_pair":
        geometry = sine_pair_geometry(length)
    else:
        raise SchemaError(f"unknown area pair {areas_token!r}", key="model.areas")
    try:
        spec = ModelSpec(
            geometry=geometry,
            growth=growth,
            d=_float("model", "d", m["d"]),
            q=_float("model", "q", m["q"]),
            mu=_float("model", "mu", m["mu"]),
            sigma=_float("model", "sigma", m["sigma"]),
            m1=_float("model", "m1", m["m1"]),
            m2=_float("model", "m2", m["m2"]),
            b_u=_float("model", "b_u", m["b_u"]),
            b_d=_float("model", "b_d", m["b_d"]),
        )
    except ValueError as exc:
        raise SchemaError(str(exc), key="model") from None

    n = _int("grid", "n", merged["grid"]["n"])
    try:
        grid = Grid(n=n, L=length)
    except ValueError as exc:
        raise SchemaError(str(exc), key="grid.n") from None

    r = merged["run"]
    try:
        integrator = IntegratorConfig(
            dt=_float("run", "dt", r["dt"]),
            t_max=_float("run", "t_max", r["t_max"]),
            conv_tol=_float("run", "conv_tol", r["conv_tol"]),
            extinct_tol=_float("run", "extinct_tol", r["extinct_tol"]),
        )
    except ValueError as exc:
        raise SchemaError(str(exc), key="run") from None
    u0 = _validate_ic_token("run", "u0", r["u0"])
    v0 = _validate_ic_token("run", "v0", r["v0"])
    stride = _int("run", "stride", r["stride"])
    if stride < 1:
        raise SchemaError("stride must be at least 1", key="run.stride")
    energy_flag = _bool("run", "energy", r["energy"])
    seed = _int("run", "seed", r["seed"])

    sweep: SweepConfig | None = None
    if has_sweep:
        s = merged["sweep"]
        variable = s["variable"].strip()
        if variable not in ("mu", "q", "m2"):
            raise SchemaError(
                f"sweep variable must be mu, q or m2, got {variable!r}",
                key="sweep.variable",
            )
        count = _int("sweep", "count", s["count"])
        if count < 1:
            raise SchemaError("count must be at least 1", key="sweep.count")
        start = _float("sweep", "start", s["start"])
        stop = _float("sweep", "stop", s["stop"])
        bcs = tuple(token.strip() for token in s["bcs"].split(","))
        for token in bcs:
            if token not in BC_PROFILES:
                raise SchemaError(f"unknown boundary profile {token!r}", key="sweep.bcs")
        values = tuple(float(x) for x in np.linspace(start, stop, count))
        sweep = SweepConfig(variable=variable, values=values, bcs=bcs)

    echo: list[str] = []
    for section in ("model", "grid", "run", "sweep"):
        if section == "sweep" and not has_sweep:
            continue
        for key in sorted(_SECTIONS[section]):
            echo.append(f"{section}.{key}={merged[section][key]}")

    return RunConfig(
        spec=spec,
        grid=grid,
        integrator=integrator,
        u0=u0,
        v0=v0,
        stride=stride,
        energy=energy_flag,
        seed=seed,
        preset=preset_name,
        sweep=sweep,
        echo=tuple(echo),
    )


def load_config(
    path: str, overrides: Iterable[tuple[str, str]] | None = None
) -> RunConfig:
    """Read and parse a configuration file."""
    with open(path, encoding="utf-8") as handle:
        return parse_config(handle.read(), overrides=overrides)
