"""Canned experiments: the six figure suites, reproduced as CSV artifacts.

Each preset expands to a list of independent runs described purely by
configuration override strings (so the fan-out across a process pool ships
no callables), executes them in a deterministic order, and writes one
trajectory/profile/summary CSV per panel with the effective configuration
echoed in the comment block.

The summary and profile suites report the maximal steady state per
parameter value (the bistable system makes any single initial condition an
arbitrary choice; the maximal state is the canonical persistent branch).
The bistability suites forward-simulate their caption initial data.
"""

from __future__ import annotations

import concurrent.futures
from collections.abc import Callable, Iterable, Sequence

import numpy as np

from . import config as configmod
from .csvio import emit_csv
from .discretize import assemble_transport
from .equilibria import Provenance, max_steady_state
from .errors import UnknownPreset
from .stepping import Outcome, simulate

__all__ = ["PRESET_NAMES", "run_preset"]

PRESET_NAMES: tuple[str, ...] = tuple(sorted(configmod.PRESET_BASELINES))

# Values swept by the profile suites (the summary suite uses a [sweep]
# grid instead).
_PROFILE_MU_VALUES = (0.01, 0.02, 0.04, 0.06)
_PROFILE_Q_VALUES = (0.05, 0.1, 0.2, 0.4)
_BIOMASS_MU_VALUES = tuple(float(x) for x in np.linspace(0.01, 0.4, 14))
_BC_ORDER = ("nf", "ff", "h")

# Initial data of the three bistability suites, as (u0, v0) token pairs in
# panel order.
_BISTABLE_INITIALS: dict[str, tuple[tuple[str, str], ...]] = {
    "fig_bistable_ff": (
        ("zero", "upper_half:0.04"),
        ("zero", "upper_half:0.1"),
        ("0.1", "upper_half:0.1"),
        ("0.1", "0.4"),
    ),
    "fig_bistable_nfnf": (
        ("zero", "upper_half:0.08"),
        ("0.1", "upper_half:0.4"),
        ("0.1", "0.4"),
    ),
    "fig_bistable_hetero": (
        ("zero", "upper_half:0.1"),
        ("0.08", "upper_half:0.4"),
        ("0.1", "0.4"),
    ),
}


def _simulate_payload(payload: tuple[tuple[str, str], ...]) -> dict:
    """Worker: one simulation described entirely by override pairs."""
    cfg = configmod.parse_config("", overrides=payload)
    initial = configmod.realize_initial(cfg)
    operator = assemble_transport(cfg.grid, cfg.spec)
    record = simulate(
        initial, cfg.spec, cfg.integrator, cfg.grid, operator,
        sample_stride=cfg.stride,
    )
    return {
        "echo": cfg.echo,
        "x": cfg.grid.centers,
        "times": record.times,
        "biomass_u": record.biomass_u,
        "biomass_v": record.biomass_v,
        "final_u": record.final.u,
        "final_v": record.final.v,
        "outcome": record.outcome.value,
    }


def _steady_payload(payload: tuple[tuple[str, str], ...]) -> dict:
    """Worker: one maximal-steady-state solve described by override pairs."""
    cfg = configmod.parse_config("", overrides=payload)
    state = max_steady_state(cfg.spec, cfg.grid, cfg.integrator)
    outcome = (
        Outcome.EXTINCT if state.provenance is Provenance.ZERO
        else Outcome.CONVERGED_POSITIVE
    )
    dx = cfg.grid.dx
    return {
        "echo": cfg.echo,
        "x": cfg.grid.centers,
        "final_u": state.fields.u,
        "final_v": state.fields.v,
        "biomass_u": dx * float(np.sum(state.fields.u)),
        "biomass_v": dx * float(np.sum(state.fields.v)),
        "outcome": outcome.value,
        "provenance": state.provenance.value,
        "residual": state.residual,
    }


def _run_all(
    worker: Callable[[tuple[tuple[str, str], ...]], dict],
    payloads: Sequence[tuple[tuple[str, str], ...]],
    jobs: int,
) -> list[dict]:
    if jobs <= 1 or len(payloads) <= 1:
        return [worker(payload) for payload in payloads]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, payloads))


def _base_overrides(
    name: str, grid_n: int | None, extra: Iterable[tuple[str, str]] = ()
) -> tuple[tuple[str, str], ...]:
    pairs: list[tuple[str, str]] = [("run.preset", name)]
    if grid_n is not None:
        pairs.append(("grid.n", str(grid_n)))
    pairs.extend(extra)
    return tuple(pairs)


def _profile_rows(x: np.ndarray, u: np.ndarray, v: np.ndarray):
    return [(float(xs), float(us), float(vs)) for xs, us, vs in zip(x, u, v)]


def _trajectory_rows(result: dict):
    return [
        (float(t), float(bu), float(bv))
        for t, bu, bv in zip(result["times"], result["biomass_u"], result["biomass_v"])
    ]


def run_preset(
    name: str,
    out_dir: str,
    jobs: int = 1,
    grid_n: int | None = None,
    seed: int = 0,
) -> list[str]:
    """Execute one named figure suite and write its CSV artifacts.

    Returns the list of file paths written, in a deterministic order.
    ``jobs`` sizes the worker pool for the independent runs; the output is
    byte-identical regardless of ``jobs``.

    Raises
    ------
    UnknownPreset
        If ``name`` is not one of :data:`PRESET_NAMES`.
    """
    if name not in configmod.PRESET_BASELINES:
        raise UnknownPreset(f"unknown preset {name!r}; choose one of {PRESET_NAMES}")
    seed_pair = ("run.seed", str(seed))

    written: list[str] = []
    if name == "fig_biomass_vs_mu":
        payloads = []
        labels = []
        for bc in _BC_ORDER:
            b_u, b_d = configmod.BC_PROFILES[bc]
            for mu in _BIOMASS_MU_VALUES:
                payloads.append(_base_overrides(name, grid_n, (
                    ("model.mu", repr(mu)),
                    ("model.b_u", repr(b_u)),
                    ("model.b_d", repr(b_d)),
                )))
                labels.append((mu, bc))
        results = _run_all(_steady_payload, payloads, jobs)
        rows = []
        for (mu, bc), result in zip(labels, results):
            rows.append((
                mu, bc,
                result["biomass_u"],
                result["biomass_v"],
                result["outcome"],
            ))
        path = f"{out_dir}/fig_biomass_vs_mu.csv"
        emit_csv(
            path,
            ("mu", "bc_type", "biomass_u", "biomass_v", "outcome"),
            rows,
            comments=results[0]["echo"],
        )
        written.append(path)
        return written

    if name in ("fig_profiles_vs_mu", "fig_profiles_vs_q"):
        if name == "fig_profiles_vs_mu":
            key, values = "mu", _PROFILE_MU_VALUES
        else:
            key, values = "q", _PROFILE_Q_VALUES
        payloads = []
        labels = []
        for bc in _BC_ORDER:
            b_u, b_d = configmod.BC_PROFILES[bc]
            for value in values:
                payloads.append(_base_overrides(name, grid_n, (
                    (f"model.{key}", repr(value)),
                    ("model.b_u", repr(b_u)),
                    ("model.b_d", repr(b_d)),
                )))
                labels.append((bc, value))
        results = _run_all(_steady_payload, payloads, jobs)
        for (bc, value), result in zip(labels, results):
            path = f"{out_dir}/{name}_{bc}_{key}{value:g}.csv"
            emit_csv(
                path,
                ("x", "u", "v"),
                _profile_rows(result["x"], result["final_u"], result["final_v"]),
                comments=(
                    *result["echo"],
                    f"outcome={result['outcome']}",
                    f"provenance={result['provenance']}",
                    f"residual={result['residual']:.3e}",
                ),
            )
            written.append(path)
        return written

    initials = _BISTABLE_INITIALS[name]
    payloads = [
        _base_overrides(name, grid_n, (
            ("run.u0", u0),
            ("run.v0", v0),
            seed_pair,
        ))
        for u0, v0 in initials
    ]
    results = _run_all(_simulate_payload, payloads, jobs)
    for index, ((u0, v0), result) in enumerate(zip(initials, results), start=1):
        notes = (f"u0={u0}", f"v0={v0}", f"outcome={result['outcome']}")
        traj_path = f"{out_dir}/{name}_ic{index}_trajectory.csv"
        emit_csv(
            traj_path,
            ("t", "biomass_u", "biomass_v"),
            _trajectory_rows(result),
            comments=(*result["echo"], *notes),
        )
        written.append(traj_path)
        profile_path = f"{out_dir}/{name}_ic{index}_profile.csv"
        emit_csv(
            profile_path,
            ("x", "u", "v"),
            _profile_rows(result["x"], result["final_u"], result["final_v"]),
            comments=(*result["echo"], *notes),
        )
        written.append(profile_path)
    return written
