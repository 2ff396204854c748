"""Command-line driver.

Subcommands cover one-off simulation, steady-state continuation, spectral
analysis, parameter sweeps, regime classification, the critical-mortality
root, and the canned figure suites.  Every output is a CSV with the
effective configuration echoed as comments; exit codes separate
configuration problems (2), numerical failures (3), and I/O errors (4).
"""

from __future__ import annotations

import argparse
import re
import sys

import numpy as np

from . import presets as presetsmod
from .config import BC_PROFILES, RunConfig, load_config, parse_config, realize_initial
from .csvio import emit_csv
from .discretize import FieldPair, assemble_transport
from .equilibria import max_steady_state
from .errors import (
    BenthdriftError,
    ParseError,
    SchemaError,
    UnknownPreset,
)
from .model import GrowthKind, classify_regime
from .spectral import (
    assemble_linearization,
    classify_stability,
    critical_m2,
    principal_eigenvalue,
)
from .stepping import simulate

__all__ = ["main"]

_OVERRIDE_RE = re.compile(r"^--(model|grid|run|sweep)\.([A-Za-z_][A-Za-z0-9_]*)=(.*)$")

_CONFIG_ERRORS = (ParseError, SchemaError, UnknownPreset)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="benthdrift",
        description="Benthic-drift population model: simulation and analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", help="INI configuration file")
        p.add_argument("--out", metavar="DIR", default=".", help="output directory")
        p.add_argument("--jobs", metavar="N", type=int, default=1,
                       help="worker processes for independent runs")
        p.add_argument("--seed", metavar="N", type=int, help="override run.seed")
        p.add_argument("--grid-n", metavar="N", type=int, help="override grid.n")

    common(sub.add_parser("simulate", help="integrate one initial condition"))
    common(sub.add_parser("steady", help="continue to the maximal steady state"))
    common(sub.add_parser("eigen", help="principal eigenvalue about the zero state"))
    common(sub.add_parser("sweep", help="summary table over a parameter sweep"))
    common(sub.add_parser("regime", help="classify the exchange-rate regime"))
    common(sub.add_parser("critical-m2", help="benthic mortality where the zero state turns"))
    preset = sub.add_parser("preset", help="run one canned figure suite")
    preset.add_argument("name", choices=presetsmod.PRESET_NAMES)
    common(preset)
    return parser


def _collect_overrides(leftovers: list[str], args: argparse.Namespace) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    for token in leftovers:
        match = _OVERRIDE_RE.match(token)
        if match is None:
            raise SchemaError(f"unrecognized argument {token!r}", key=token)
        pairs.append((f"{match.group(1)}.{match.group(2)}", match.group(3)))
    if args.seed is not None:
        pairs.append(("run.seed", str(args.seed)))
    if args.grid_n is not None:
        pairs.append(("grid.n", str(args.grid_n)))
    return pairs


def _load(args: argparse.Namespace, overrides: list[tuple[str, str]]) -> RunConfig:
    if args.config:
        return load_config(args.config, overrides=overrides)
    return parse_config("", overrides=overrides)


def _cmd_simulate(cfg: RunConfig, out: str) -> None:
    initial = realize_initial(cfg)
    operator = assemble_transport(cfg.grid, cfg.spec)
    record = simulate(
        initial, cfg.spec, cfg.integrator, cfg.grid, operator,
        record_energy=cfg.energy, sample_stride=cfg.stride,
    )
    header: list[str] = ["t", "biomass_u", "biomass_v"]
    columns = [record.times, record.biomass_u, record.biomass_v]
    if cfg.energy:
        header.append("energy")
        columns.append(record.energies)
    rows = list(zip(*[np.asarray(col) for col in columns]))
    emit_csv(f"{out}/simulate_trajectory.csv", header, rows, comments=cfg.echo)
    profile = zip(cfg.grid.centers, record.final.u, record.final.v)
    emit_csv(
        f"{out}/simulate_profile.csv", ("x", "u", "v"), profile,
        comments=(*cfg.echo, f"outcome={record.outcome.value}"),
    )
    print(
        f"outcome={record.outcome.value} t={record.final.t:g} "
        f"biomass_u={record.biomass_u[-1]:.9g} biomass_v={record.biomass_v[-1]:.9g}"
    )


def _cmd_steady(cfg: RunConfig, out: str) -> None:
    state = max_steady_state(cfg.spec, cfg.grid)
    profile = zip(cfg.grid.centers, state.fields.u, state.fields.v)
    emit_csv(
        f"{out}/steady_profile.csv", ("x", "u", "v"), profile,
        comments=(
            *cfg.echo,
            f"provenance={state.provenance.value}",
            f"residual={state.residual:.3e}",
        ),
    )
    dx = cfg.grid.dx
    print(
        f"provenance={state.provenance.value} residual={state.residual:.3e} "
        f"biomass_u={dx * float(np.sum(state.fields.u)):.9g} "
        f"biomass_v={dx * float(np.sum(state.fields.v)):.9g}"
    )


def _cmd_eigen(cfg: RunConfig, out: str) -> None:
    zero = FieldPair(np.zeros(cfg.grid.n), np.zeros(cfg.grid.n))
    blocks = assemble_linearization(zero, cfg.spec, cfg.grid)
    report = principal_eigenvalue(blocks)
    verdict = classify_stability(report, blocks)
    emit_csv(
        f"{out}/eigen_summary.csv",
        ("lam1", "gap", "band_lo", "band_hi", "rayleigh_residual", "verdict"),
        [(
            report.lam1, report.gap, report.band[0], report.band[1],
            report.rayleigh_residual, verdict.value,
        )],
        comments=cfg.echo,
    )
    mode = zip(cfg.grid.centers, report.phi_u, report.phi_v)
    emit_csv(f"{out}/eigen_mode.csv", ("x", "phi_u", "phi_v"), mode, comments=cfg.echo)
    print(
        f"lam1={report.lam1:.9g} band=[{report.band[0]:.9g},{report.band[1]:.9g}] "
        f"verdict={verdict.value}"
    )


def _cmd_sweep(cfg: RunConfig, out: str, jobs: int) -> None:
    sweep = cfg.sweep
    if sweep is None:
        raise SchemaError("the sweep subcommand needs a [sweep] section", key="sweep")
    payloads = []
    labels = []
    # The echo lines are exactly "section.key=value", so they replay the
    # effective configuration into each worker as override pairs.
    base_pairs = [
        tuple(line.split("=", 1)) for line in cfg.echo if not line.startswith("sweep.")
    ]
    for bc in sweep.bcs:
        b_u, b_d = BC_PROFILES[bc]
        for value in sweep.values:
            pairs = dict(base_pairs)
            pairs[f"model.{sweep.variable}"] = repr(value)
            pairs["model.b_u"] = repr(b_u)
            pairs["model.b_d"] = repr(b_d)
            payloads.append(tuple(pairs.items()))
            labels.append((value, bc))
    results = presetsmod._run_all(presetsmod._simulate_payload, payloads, jobs)
    rows = [
        (value, bc, float(r["biomass_u"][-1]), float(r["biomass_v"][-1]), r["outcome"])
        for (value, bc), r in zip(labels, results)
    ]
    emit_csv(
        f"{out}/sweep_{sweep.variable}.csv",
        (sweep.variable, "bc_type", "biomass_u", "biomass_v", "outcome"),
        rows,
        comments=cfg.echo,
    )
    print(f"sweep variable={sweep.variable} points={len(rows)}")


def _cmd_regime(cfg: RunConfig, out: str) -> None:
    report = classify_regime(cfg.spec)
    emit_csv(
        f"{out}/regime.csv",
        ("regime", "mu1", "mu2", "mu3", "compactness_ok"),
        [(
            report.regime.value, report.mu1, report.mu2, report.mu3,
            report.compactness_ok,
        )],
        comments=cfg.echo,
    )
    print(
        f"regime={report.regime.value} mu1={report.mu1:.9g} mu3={report.mu3:.9g} "
        f"compactness_ok={report.compactness_ok}"
    )


def _cmd_critical_m2(cfg: RunConfig, out: str) -> None:
    if cfg.spec.growth.kind not in (GrowthKind.LOGISTIC, GrowthKind.WEAK_ALLEE):
        raise SchemaError(
            "critical-m2 needs logistic growth (set model.growth=logistic)",
            key="model.growth",
        )
    m2_star = critical_m2(cfg.spec, cfg.grid)
    zero = FieldPair(np.zeros(cfg.grid.n), np.zeros(cfg.grid.n))
    blocks = assemble_linearization(zero, cfg.spec.replace(m2=m2_star), cfg.grid)
    residual = principal_eigenvalue(blocks).lam1
    emit_csv(
        f"{out}/critical_m2.csv",
        ("m2_star", "lam1_at_root", "q"),
        [(m2_star, residual, cfg.spec.q)],
        comments=cfg.echo,
    )
    print(f"m2_star={m2_star:.9g} lam1_at_root={residual:.3e}")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args, leftovers = parser.parse_known_args(argv)
    try:
        overrides = _collect_overrides(leftovers, args)
        if args.command == "preset":
            written = presetsmod.run_preset(
                args.name, args.out, jobs=args.jobs,
                grid_n=args.grid_n, seed=args.seed if args.seed is not None else 0,
            )
            print(f"wrote {len(written)} files")
            return 0
        cfg = _load(args, overrides)
        if args.command == "simulate":
            _cmd_simulate(cfg, args.out)
        elif args.command == "steady":
            _cmd_steady(cfg, args.out)
        elif args.command == "eigen":
            _cmd_eigen(cfg, args.out)
        elif args.command == "sweep":
            _cmd_sweep(cfg, args.out, args.jobs)
        elif args.command == "regime":
            _cmd_regime(cfg, args.out)
        elif args.command == "critical-m2":
            _cmd_critical_m2(cfg, args.out)
        else:  # pragma: no cover - argparse enforces the choices
            parser.error(f"unknown command {args.command!r}")
        return 0
    except _CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except BenthdriftError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
