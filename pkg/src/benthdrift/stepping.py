"""Time integration of the coupled drift/benthic system.

One step treats transport, settling, mortality and the implicit part of the
exchange with a backward-Euler solve, and the benthic growth explicitly.
Eliminating the benthic update pointwise leaves a single tridiagonal system
per step, whose matrix is an M-matrix for every step size — the update is
therefore monotone (order-preserving) and positivity requires no limiter
beyond a measured clip of rounding-level negatives.

The explicit growth term caps the usable step at ``0.5 / Lip`` where ``Lip``
bounds the reaction slope over the currently occupied range; ``simulate``
shrinks its step to that cap automatically, which lets it march down from
enormous super-solution data without losing monotonicity.

The inner loop lives in a compiled extension when available; set the
environment variable ``BENTHDRIFT_PURE_PYTHON=1`` to force the NumPy
fallback.  Both backends implement the same contract.
"""

from __future__ import annotations

import dataclasses
import enum
import math
import os

import numpy as np

from .discretize import FieldPair, Grid, TransportOperator, assemble_transport
from .errors import RegimeMismatch, StepRejected
from .model import GrowthKind, ModelSpec, _scan_extremum

if os.environ.get("BENTHDRIFT_PURE_PYTHON"):
    from . import _stepcore_py as _stepcore

    _BACKEND = "python"
else:
    try:
        from . import _stepcore  # type: ignore[attr-defined]

        _BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _stepcore_py as _stepcore

        _BACKEND = "python"

__all__ = [
    "IntegratorConfig",
    "Outcome",
    "TrajectoryRecord",
    "BasinProbe",
    "stepper_backend",
    "step",
    "simulate",
    "extinction_cone",
    "basin_probe",
]

# Relative clip budget: a step that removes more negative mass than this
# fraction of the state magnitude is rejected rather than silently fixed.
CLIP_TOLERANCE = 1.0e-8

# Upper-solution marches cap their initial data here; capping a drift profile
# with a constant preserves the super-solution property, and it keeps the
# cubic reaction far away from floating-point overflow.
STATE_CEILING = 1.0e60


def stepper_backend() -> str:
    """Name of the active inner-loop backend: ``"compiled"`` or ``"python"``."""
    return _BACKEND


@dataclasses.dataclass(frozen=True)
class IntegratorConfig:
    """Step size and stopping rules for :func:`simulate`.

    ``conv_tol`` is a relative change-per-unit-time threshold for steady-state
    detection; ``extinct_tol`` separates the extinct from the persistent
    verdict once the state has settled.
    """

    dt: float = 0.05
    t_max: float = 5000.0
    conv_tol: float = 1.0e-9
    extinct_tol: float = 1.0e-6

    def __post_init__(self) -> None:
        if self.dt <= 0.0 or self.t_max <= 0.0:
            raise ValueError("dt and t_max must be positive")
        if self.conv_tol <= 0.0 or self.extinct_tol <= 0.0:
            raise ValueError("tolerances must be positive")


class Outcome(str, enum.Enum):
    """How a simulation ended."""

    EXTINCT = "Extinct"
    CONVERGED_POSITIVE = "ConvergedPositive"
    HIT_HORIZON = "HitHorizon"


@dataclasses.dataclass
class TrajectoryRecord:
    """Sampled history of one simulation.

    ``biomass_u``/``biomass_v`` are the sampled integrals ``dx * sum(u)`` and
    ``dx * sum(v)``; ``energies`` is filled only when energy recording was
    requested, ``states`` only when state recording was requested.
    ``max_clip_ratio`` is the largest clip magnitude of any accepted step
    relative to the state magnitude at that step.
    """

    times: np.ndarray
    biomass_u: np.ndarray
    biomass_v: np.ndarray
    final: FieldPair
    outcome: Outcome
    n_steps: int
    max_clip_ratio: float
    energies: np.ndarray | None = None
    states: list[FieldPair] | None = None


@dataclasses.dataclass(frozen=True)
class BasinProbe:
    """Outcomes of simulations started just below and just above a threshold
    profile that separates extinction from persistence."""

    threshold: FieldPair
    below_outcome: Outcome
    above_outcome: Outcome
    below_final: FieldPair
    above_final: FieldPair


class _Workspace:
    """Preallocated buffers shared by all steps of one integration."""

    def __init__(self, spec: ModelSpec, operator: TransportOperator) -> None:
        x = operator.grid.centers
        self.x = x
        self.ratio_bd = np.ascontiguousarray(spec.geometry.ratio_bd(x), dtype=float)
        self.ratio_db = 1.0 / self.ratio_bd
        n = operator.grid.n
        self.u_out = np.empty(n)
        self.v_out = np.empty(n)
        self.work = np.empty(2 * n)
        self.lower = np.ascontiguousarray(operator.lower)
        self.diag = np.ascontiguousarray(operator.diag)
        self.upper = np.ascontiguousarray(operator.upper)


def _advance(
    spec: ModelSpec,
    ws: _Workspace,
    u: np.ndarray,
    v: np.ndarray,
    dt: float,
) -> tuple[np.ndarray, np.ndarray, float]:
    """One raw step; returns new arrays and the clip magnitude."""
    f_old = np.ascontiguousarray(v * spec.growth.g(ws.x, v))
    try:
        clip = _stepcore.imex_step(
            ws.lower, ws.diag, ws.upper,
            np.ascontiguousarray(u), np.ascontiguousarray(v), f_old,
            ws.ratio_bd, ws.ratio_db,
            dt, spec.mu, spec.sigma, spec.m1, spec.m2,
            ws.u_out, ws.v_out, ws.work,
        )
    except FloatingPointError as exc:
        from .errors import LinearSolveFailure

        raise LinearSolveFailure(str(exc)) from exc
    return ws.u_out.copy(), ws.v_out.copy(), float(clip)


def step(
    fields: FieldPair,
    spec: ModelSpec,
    operator: TransportOperator,
    dt: float,
) -> FieldPair:
    """Advance one step of size ``dt`` and return the new state.

    The caller is responsible for honoring the explicit stability cap
    ``dt * Lip <= 1/2`` on the reaction slope; within it the update is
    monotone and preserves non-negativity.

    Raises
    ------
    StepRejected
        If the clip magnitude exceeds ``CLIP_TOLERANCE`` times the state
        magnitude (a symptom of a step far beyond the stability cap).
    LinearSolveFailure
        If the tridiagonal solve breaks down.
    """
    ws = _Workspace(spec, operator)
    u_new, v_new, clip = _advance(spec, ws, fields.u, fields.v, dt)
    scale = fields.sup()
    if clip > CLIP_TOLERANCE * scale:
        raise StepRejected(
            f"step removed negative mass {clip:.3e}, above "
            f"{CLIP_TOLERANCE:.0e} of the state magnitude {scale:.3e}"
        )
    return FieldPair(u_new, v_new, fields.t + dt)


def simulate(
    initial: FieldPair,
    spec: ModelSpec,
    config: IntegratorConfig,
    grid: Grid,
    operator: TransportOperator | None = None,
    *,
    record_energy: bool = False,
    record_states: bool = False,
    sample_stride: int = 20,
) -> TrajectoryRecord:
    """Integrate until the state settles, dies out, or the horizon is hit.

    The nominal step ``config.dt`` is shrunk whenever the reaction slope over
    the occupied range demands it, so arbitrarily large non-negative initial
    data is admissible.  Sampling happens every ``sample_stride`` accepted
    steps plus at the first and last step.

    Returns
    -------
    TrajectoryRecord
        With ``outcome`` set to ``Extinct`` or ``ConvergedPositive`` when the
        relative change per unit time fell below ``config.conv_tol``, and to
        ``HitHorizon`` otherwise.
    """
    if operator is None:
        operator = assemble_transport(grid, spec)
    if sample_stride < 1:
        raise ValueError("sample_stride must be at least 1")
    ws = _Workspace(spec, operator)
    u = np.array(initial.u, dtype=float)
    v = np.array(initial.v, dtype=float)
    if np.min(u) < 0.0 or np.min(v) < 0.0:
        raise ValueError("initial data must be non-negative")
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
        raise ValueError("initial data must be finite")

    from . import lyapunov  # local import: lyapunov only needs the state

    dx = grid.dx
    times = [0.0]
    bio_u = [dx * float(np.sum(u))]
    bio_v = [dx * float(np.sum(v))]
    energies = []
    states: list[FieldPair] | None = [] if record_states else None
    if record_energy:
        energies.append(lyapunov.energy(FieldPair(u, v), spec, grid, operator))
    if record_states:
        states.append(FieldPair(u.copy(), v.copy(), 0.0))

    t = 0.0
    n_steps = 0
    max_clip_ratio = 0.0
    outcome = Outcome.HIT_HORIZON
    horizon_slack = 1e-12 * config.t_max

    def sample() -> None:
        times.append(t)
        bio_u.append(dx * float(np.sum(u)))
        bio_v.append(dx * float(np.sum(v)))
        if record_energy:
            energies.append(lyapunov.energy(FieldPair(u, v), spec, grid, operator))
        if states is not None:
            states.append(FieldPair(u.copy(), v.copy(), t))

    while t < config.t_max - horizon_slack:
        v_top = float(np.max(v)) if v.size else 0.0
        lip = spec.growth.slope_bound(v_top, ws.x) + spec.m2 + spec.mu
        dt_eff = min(config.dt, 0.5 / lip, config.t_max - t)
        u_new, v_new, clip = _advance(spec, ws, u, v, dt_eff)
        scale = max(float(np.max(u)), v_top)
        if clip > CLIP_TOLERANCE * scale:
            raise StepRejected(
                f"step at t={t:.6g} removed negative mass {clip:.3e}, above "
                f"{CLIP_TOLERANCE:.0e} of the state magnitude {scale:.3e}"
            )
        if scale > 0.0:
            max_clip_ratio = max(max_clip_ratio, clip / scale)
        delta = max(
            float(np.max(np.abs(u_new - u))), float(np.max(np.abs(v_new - v)))
        )
        u, v = u_new, v_new
        t += dt_eff
        n_steps += 1
        new_scale = max(float(np.max(u)), float(np.max(v)))
        settled = delta <= config.conv_tol * dt_eff * (1.0 + new_scale)
        if settled or n_steps % sample_stride == 0 or t >= config.t_max - horizon_slack:
            sample()
        if settled:
            outcome = (
                Outcome.EXTINCT
                if new_scale < config.extinct_tol
                else Outcome.CONVERGED_POSITIVE
            )
            break

    return TrajectoryRecord(
        times=np.array(times),
        biomass_u=np.array(bio_u),
        biomass_v=np.array(bio_v),
        final=FieldPair(u, v, t),
        outcome=outcome,
        n_steps=n_steps,
        max_clip_ratio=max_clip_ratio,
        energies=np.array(energies) if record_energy else None,
        states=states,
    )


def extinction_cone(spec: ModelSpec, grid: Grid) -> FieldPair:
    """Profile pair below which every trajectory collapses to extinction.

    For a channel with a downstream loss factor ``b_d >= 1`` the pair is the
    constant ``(theta1 * min h, min h)``; otherwise it is the drift-shaped
    pair ``theta1 * C e^{alpha x}, C e^{alpha x}`` with
    ``C = min_y e^{-alpha y} h(y)``.  Requires a strong-Allee law and a
    homogeneous channel.
    """
    growth = spec.growth
    if growth.kind is not GrowthKind.STRONG_ALLEE or growth.h is None:
        raise RegimeMismatch("the extinction cone needs a strong-Allee law")
    if not spec.geometry.homogeneous:
        raise RegimeMismatch("the extinction cone needs uniform cross sections")
    L = spec.geometry.L
    x = grid.centers
    if spec.b_d >= 1.0:
        _, h_min = _scan_extremum(
            lambda y: float(growth.h(y)), 0.0, L, 1024, maximize=False
        )
        v_prof = np.full(grid.n, h_min)
    else:
        alpha = spec.alpha
        _, c_min = _scan_extremum(
            lambda y: math.exp(-alpha * y) * float(growth.h(y)),
            0.0,
            L,
            1024,
            maximize=False,
        )
        v_prof = c_min * np.exp(alpha * x)
    return FieldPair(spec.theta1 * v_prof, v_prof)


def basin_probe(
    spec: ModelSpec,
    config: IntegratorConfig,
    grid: Grid,
    operator: TransportOperator | None = None,
) -> BasinProbe:
    """Bracket the extinction threshold with two simulations.

    Starts once at ``0.99`` times the extinction cone (which must collapse)
    and once at ``1.01`` times it (whose fate is reported, not asserted).
    """
    cone = extinction_cone(spec, grid)
    if operator is None:
        operator = assemble_transport(grid, spec)
    below = simulate(
        FieldPair(0.99 * cone.u, 0.99 * cone.v), spec, config, grid, operator
    )
    above = simulate(
        FieldPair(1.01 * cone.u, 1.01 * cone.v), spec, config, grid, operator
    )
    return BasinProbe(
        threshold=cone,
        below_outcome=below.outcome,
        above_outcome=above.outcome,
        below_final=below.final,
        above_final=above.final,
    )
