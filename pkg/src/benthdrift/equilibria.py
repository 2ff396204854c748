"""Steady states of the coupled drift/benthic system.

The maximal steady state is reached by marching down, in flow-adjusted
variables, from constant super-solution data whose physical counterpart is
shaped like the pure-drift profile; a strict sub-solution built from a
linear boundary-value solve gives a lower coexistence state in the
low-exchange regime; and in the bistable regime a second (intermediate)
coexistence state is pinned by Newton iteration from level-root data.  Every
positive candidate is polished by a Newton solve on the full nonlinear
residual before it is returned.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
from scipy.linalg import solve_banded

from .discretize import FieldPair, Grid, TransportOperator, assemble_transport
from .errors import (
    BadResolution,
    ConvergenceFailure,
    GapConditionFailed,
    HitHorizon,
    RegimeMismatch,
    SingularSystem,
)
from .model import (
    GrowthKind,
    ModelSpec,
    Regime,
    _scan_extremum,
    bistability_gap_condition,
    classify_regime,
    level_roots,
)
from .stepping import STATE_CEILING, IntegratorConfig, Outcome, simulate

__all__ = [
    "Provenance",
    "SteadyState",
    "solve_linear_bvp",
    "steady_residual",
    "newton_refine",
    "max_steady_state",
    "lower_state_H3",
    "multiplicity_H2",
    "check_profile_monotone",
]

NEWTON_TOL = 1.0e-12
RESIDUAL_REQUIRED = 1.0e-11
DISTINCT_GAP = 1.0e-4


class Provenance(str, enum.Enum):
    """How a steady state was obtained."""

    ZERO = "Zero"
    MAX_FROM_UPPER = "MaxFromUpper"
    FROM_LOWER_H3 = "FromLowerH3"
    FROM_LOWER_H2 = "FromLowerH2"


@dataclasses.dataclass(frozen=True)
class SteadyState:
    """A steady state with its residual norm and construction provenance."""

    fields: FieldPair
    residual: float
    provenance: Provenance


def solve_linear_bvp(
    load: np.ndarray,
    spec: ModelSpec,
    grid: Grid,
    operator: TransportOperator | None = None,
) -> np.ndarray:
    """Solve the flow-adjusted linear drift balance with source ``load``.

    In the flow-adjusted variable ``w = e^{-alpha x} u`` the drift equation
    with frozen benthic forcing reads
    ``d w'' + q w' - (sigma + m1) w + load = 0`` with reflecting-type Robin
    conditions; its discrete form shares the transport operator's stencil
    with the off-diagonals swapped (the similarity transform maps one onto
    the other exactly), so no exponential weights are ever formed.

    Parameters
    ----------
    load:
        Non-negative source per cell, already carrying any cross-section and
        flow-adjustment factors.

    Returns
    -------
    numpy.ndarray
        The cell values of ``w``; strictly positive whenever ``load`` is
        non-negative and not identically zero.

    Raises
    ------
    SingularSystem
        If the banded solve fails.
    """
    if operator is None:
        operator = assemble_transport(grid, spec)
    n = grid.n
    load = np.asarray(load, dtype=float)
    if load.shape != (n,):
        raise ValueError("load must have one value per cell")
    ab = np.zeros((3, n))
    # adjoint-shaped bands: upper row takes the transport lower coefficient
    ab[0, 1:] = operator.lower[1:]
    ab[1, :] = operator.diag - (spec.sigma + spec.m1)
    ab[2, :-1] = operator.upper[:-1]
    try:
        w = solve_banded((1, 1), ab, -load)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"linear drift balance is singular: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise SingularSystem("linear drift balance produced non-finite values")
    return w


def steady_residual(
    fields: FieldPair,
    spec: ModelSpec,
    operator: TransportOperator,
) -> tuple[np.ndarray, np.ndarray]:
    """Residual pair of the time-independent system at ``fields``."""
    x = operator.grid.centers
    u, v = fields.u, fields.v
    ratio = np.asarray(spec.geometry.ratio_bd(x), dtype=float)
    res_u = operator.apply(u) + spec.mu * ratio * v - (spec.sigma + spec.m1) * u
    res_v = (
        v * np.asarray(spec.growth.g(x, v), dtype=float)
        - (spec.m2 + spec.mu) * v
        + spec.sigma * u / ratio
    )
    return res_u, res_v


def newton_refine(
    fields: FieldPair,
    spec: ModelSpec,
    operator: TransportOperator,
    tol: float = NEWTON_TOL,
    max_iter: int = 50,
) -> tuple[FieldPair, float]:
    """Polish a near-steady state by Newton iteration on the full residual.

    The benthic block of the Jacobian is diagonal, so each iteration reduces
    to one tridiagonal solve for the drift correction.  A backtracking line
    search on the residual norm keeps distant seeds from overshooting; full
    steps are accepted near the root, preserving quadratic convergence.

    Returns
    -------
    tuple
        The refined state and its final residual sup-norm.

    Raises
    ------
    SingularSystem
        If the benthic diagonal degenerates or the banded solve fails.
    ConvergenceFailure
        If the iteration does not reach ``tol`` within ``max_iter`` steps.
    """
    grid = operator.grid
    x = grid.centers
    ratio = np.asarray(spec.geometry.ratio_bd(x), dtype=float)
    u = fields.u.copy()
    v = fields.v.copy()
    res = math.inf
    res_u, res_v = steady_residual(FieldPair(u, v), spec, operator)
    for _ in range(max_iter):
        res = max(float(np.max(np.abs(res_u))), float(np.max(np.abs(res_v))))
        if res < tol:
            return FieldPair(u, v, fields.t), res
        j22 = np.asarray(spec.growth.f_v(x, v), dtype=float) - (spec.m2 + spec.mu)
        if np.min(np.abs(j22)) < 1e-14:
            raise SingularSystem("benthic Jacobian block degenerates")
        ab = np.zeros((3, grid.n))
        ab[0, 1:] = operator.upper[:-1]
        ab[1, :] = (
            operator.diag
            - (spec.sigma + spec.m1)
            - spec.mu * spec.sigma / j22
        )
        ab[2, :-1] = operator.lower[1:]
        rhs = -res_u + spec.mu * ratio * res_v / j22
        try:
            du = solve_banded((1, 1), ab, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"Newton system is singular: {exc}") from exc
        dv = (-res_v - spec.sigma * du / ratio) / j22
        norm_old = math.hypot(float(np.linalg.norm(res_u)), float(np.linalg.norm(res_v)))
        step = 1.0
        while True:
            trial_u = u + step * du
            trial_v = v + step * dv
            res_u, res_v = steady_residual(FieldPair(trial_u, trial_v), spec, operator)
            norm_new = math.hypot(
                float(np.linalg.norm(res_u)), float(np.linalg.norm(res_v))
            )
            if norm_new <= (1.0 - 1e-4 * step) * norm_old or step <= 1.0 / 1024.0:
                break
            step *= 0.5
        u, v = trial_u, trial_v
    # accept a stall at the rounding floor rather than demanding the exact tol
    res_u, res_v = steady_residual(FieldPair(u, v), spec, operator)
    res = max(float(np.max(np.abs(res_u))), float(np.max(np.abs(res_v))))
    if res < RESIDUAL_REQUIRED:
        return FieldPair(u, v, fields.t), res
    raise ConvergenceFailure(f"Newton stalled at residual {res:.3e}")


def _march_to_steady(
    start: FieldPair,
    spec: ModelSpec,
    grid: Grid,
    operator: TransportOperator,
    config: IntegratorConfig,
    context: str,
) -> FieldPair | None:
    """Run the integrator; return the settled state or ``None`` if extinct."""
    record = simulate(start, spec, config, grid, operator)
    if record.outcome is Outcome.HIT_HORIZON:
        raise HitHorizon(
            f"{context}: no steady state within t_max = {config.t_max:g}"
        )
    if record.outcome is Outcome.EXTINCT:
        return None
    return record.final


def _reject_buried_state(fields: FieldPair, spec: ModelSpec, x: np.ndarray) -> None:
    """A positive settled state cannot sit entirely below the Allee threshold."""
    if spec.growth.kind is not GrowthKind.STRONG_ALLEE or spec.growth.h is None:
        return
    h = np.asarray(spec.growth.h(x), dtype=float)
    if np.all(fields.v < h):
        raise ConvergenceFailure(
            "settled on a positive state strictly below the survival threshold"
        )


# Stop the downward sweep once every cell's physical relative change per
# sweep is below this; the Newton polish recovers the tight residual.
DESCENT_TOL = 1.0e-13
MAX_SWEEPS = 200_000


def _descend_from_upper(
    spec: ModelSpec,
    grid: Grid,
    operator: TransportOperator,
    extinct_tol: float,
    c_top: float,
) -> FieldPair | None:
    """Monotone descent from constant upper data in flow-adjusted variables.

    In the variables ``(w, z) = e^{-alpha x} (u, v)`` the upper data is the
    constant pair ``(theta1 R c_top, c_top)`` — a strict super-solution — so
    no exponentially large state is ever stored.  Each sweep solves the
    drift balance exactly for ``w`` (the linear boundary-value solve) and
    relaxes the benthic equation with the Lipschitz shift
    ``K = sup |f_v|`` over the occupied range:

        ((sigma + m1) - T_w) w' = mu R z
        z' = (K z + z g(x, e^{alpha x} z) + sigma w' / R) / (K + m2 + mu)

    Both substeps are order-preserving (M-matrix inverse; ``K v + f(v)``
    nondecreasing), so the sweep sequence decreases pointwise from the
    super-solution and its limit dominates every steady state.  The descent
    is enforced, not assumed.  The benthic reaction argument is clamped at
    the state ceiling, which only weakens the decay of cells far above
    every steady state and so preserves the ordering.

    Returns the settled state in physical variables, or ``None`` when the
    sweeps collapsed below ``extinct_tol``.
    """
    x = grid.centers
    alpha = spec.alpha
    if alpha * grid.L > 690.0:
        raise BadResolution(
            f"drift ratio spans e^{{{alpha * grid.L:.3g}}}, beyond the range "
            "representable in double precision"
        )
    exp_ax = np.exp(alpha * x)
    # Physical relative convergence |du_i| <= tol*(1 + |u_i|) rewritten in
    # the flow-adjusted variables, so no exponential amplitude is formed.
    floor = np.exp(-alpha * x)
    ratio = np.asarray(spec.geometry.ratio_bd(x), dtype=float)
    r_const = float(ratio[0])

    w = np.full(grid.n, spec.theta1 * r_const * c_top)
    z = np.full(grid.n, c_top)
    for _ in range(MAX_SWEEPS):
        w_new = solve_linear_bvp(spec.mu * ratio * z, spec, grid, operator)
        v_phys = np.minimum(exp_ax * z, STATE_CEILING)
        shift = spec.growth.slope_bound(float(np.max(v_phys)), x)
        z_new = (
            shift * z + z * spec.growth.g(x, v_phys)
            + spec.sigma * w_new / ratio
        ) / (shift + spec.m2 + spec.mu)
        scale = max(float(np.max(w)), float(np.max(z)))
        rise = max(float(np.max(w_new - w)), float(np.max(z_new - z)))
        if rise > 1e-10 * (1.0 + scale):
            raise ConvergenceFailure(
                f"downward sweep left its monotone cone (pointwise rise {rise:.3e})"
            )
        settled = bool(
            np.all(np.abs(w_new - w) <= DESCENT_TOL * (floor + w_new))
            and np.all(np.abs(z_new - z) <= DESCENT_TOL * (floor + z_new))
        )
        w, z = w_new, z_new
        if settled:
            with np.errstate(over="ignore"):
                sup_phys = max(
                    float(np.max(exp_ax * w)), float(np.max(exp_ax * z))
                )
            if sup_phys < extinct_tol:
                return None
            return FieldPair(exp_ax * w, exp_ax * z)
    raise HitHorizon(
        f"maximal-state descent: no steady state within {MAX_SWEEPS} sweeps"
    )


def max_steady_state(
    spec: ModelSpec,
    grid: Grid,
    config: IntegratorConfig | None = None,
    n_scan: int = 1024,
) -> SteadyState:
    """Maximal steady state, reached by marching down from above.

    The descent runs in the flow-adjusted variables, starting from the
    constant pair ``(theta1 R C, C)`` with ``C = max_y e^{-alpha y} r(y)``
    and ``R`` the (constant) cross-section ratio, whose physical counterpart
    dominates every steady state.  The sweep trajectory is monotone
    non-increasing and its limit dominates every other steady state; a
    Newton polish on the physical residual finishes the job.

    Raises
    ------
    RegimeMismatch
        If the channel cross sections are not uniform (the ordering argument
        needs the slaving factor to be constant).
    HitHorizon
        If the descent does not settle within the sweep budget.
    """
    if not spec.geometry.homogeneous:
        raise RegimeMismatch("the maximal-state march needs uniform cross sections")
    if config is None:
        config = IntegratorConfig()
    operator = assemble_transport(grid, spec)
    alpha = spec.alpha
    L = spec.geometry.L
    _, c_top = _scan_extremum(
        lambda y: math.exp(-alpha * y) * float(spec.growth.r(y)),
        0.0,
        L,
        n_scan,
        maximize=True,
    )
    settled = _descend_from_upper(spec, grid, operator, config.extinct_tol, c_top)
    if settled is None:
        n = grid.n
        return SteadyState(
            FieldPair(np.zeros(n), np.zeros(n)), 0.0, Provenance.ZERO
        )
    refined, res = newton_refine(settled, spec, operator)
    _reject_buried_state(refined, spec, grid.centers)
    return SteadyState(refined, res, Provenance.MAX_FROM_UPPER)


def lower_state_H3(
    spec: ModelSpec,
    grid: Grid,
    config: IntegratorConfig | None = None,
) -> SteadyState:
    """Coexistence state reached from below in the low-exchange regime.

    The starting pair ``(e^{alpha x} w1, v1)`` — with ``v1`` the lower level
    root of ``g`` at height ``m2 + mu`` and ``w1`` the flow-adjusted linear
    drift balance under the benthic forcing ``mu (A_b/A_d) e^{-alpha x} v1``
    — is a sub-solution of the discrete system: the march from it is
    monotone non-decreasing, and the sampled trajectory is checked to never
    drop below the start.

    Raises
    ------
    RegimeMismatch
        Outside the low-exchange regime.
    HitHorizon
        If the march does not settle.
    ConvergenceFailure
        If the march collapses or drops below its sub-solution start.
    """
    report = classify_regime(spec)
    if report.regime is not Regime.H3:
        raise RegimeMismatch(
            f"the from-below march needs the low-exchange regime, got {report.regime.value}"
        )
    if config is None:
        config = IntegratorConfig()
    operator = assemble_transport(grid, spec)
    x = grid.centers
    level = spec.m2 + spec.mu
    if spec.growth.poly is not None:
        v1 = np.full(grid.n, level_roots(spec.growth, level, 0.0)[0])
    else:
        v1 = np.array([level_roots(spec.growth, level, float(xi))[0] for xi in x])
    ratio = np.asarray(spec.geometry.ratio_bd(x), dtype=float)
    load = spec.mu * ratio * np.exp(-spec.alpha * x) * v1
    w1 = solve_linear_bvp(load, spec, grid, operator)
    u1 = np.exp(spec.alpha * x) * w1
    start = FieldPair(u1, v1)

    record = simulate(
        start, spec, config, grid, operator, record_states=True, sample_stride=20
    )
    if record.outcome is Outcome.HIT_HORIZON:
        raise HitHorizon("from-below march: no steady state within the horizon")
    if record.outcome is Outcome.EXTINCT:
        raise ConvergenceFailure("from-below march collapsed from a sub-solution")
    slack = 1e-9 * (1.0 + record.final.sup())
    assert record.states is not None
    for snap in record.states:
        if (
            float(np.min(snap.u - u1)) < -slack
            or float(np.min(snap.v - v1)) < -slack
        ):
            raise ConvergenceFailure(
                "from-below march dropped below its sub-solution start"
            )
    refined, res = newton_refine(record.final, spec, operator)
    _reject_buried_state(refined, spec, x)
    return SteadyState(refined, res, Provenance.FROM_LOWER_H3)


def multiplicity_H2(
    spec: ModelSpec,
    grid: Grid,
    config: IntegratorConfig | None = None,
) -> tuple[SteadyState, SteadyState]:
    """Two distinct coexistence states in the bistable regime.

    Requires a closed homogeneous channel in the bistable regime whose drift
    bound holds.  The upper state is the maximal steady state, marched down
    from above.  The lower one is the in-between (threshold) state: at zero
    flow it is exactly the level-root pair ``(theta1 R v3, v3)``, and for
    positive flow it is pinned by Newton continuation in the flow rate from
    that constant profile — monotone marches cannot reach it, since it
    repels from both sides, but it is a regular root of the steady residual
    and the continuation steps keep every Newton seed inside its basin.

    Returns
    -------
    tuple
        ``(lower, maximal)``, both positive with residuals below the
        steady-state requirement and separated in sup norm.

    Raises
    ------
    RegimeMismatch
        Outside the bistable regime, for lossy boundaries, or for
        non-uniform cross sections.
    GapConditionFailed
        If the drift bound for bistability fails.
    ConvergenceFailure
        If either state is missing or the two are not distinct.
    """
    report = classify_regime(spec)
    if report.regime is not Regime.H2:
        raise RegimeMismatch(
            f"the bistable construction needs the bistable regime, got {report.regime.value}"
        )
    if spec.b_u != 0.0 or spec.b_d != 0.0:
        raise RegimeMismatch("the bistable construction needs a closed channel")
    if not spec.geometry.homogeneous:
        raise RegimeMismatch("the bistable construction needs uniform cross sections")
    gap = bistability_gap_condition(spec)
    if not gap.satisfied:
        raise GapConditionFailed(
            f"drift too strong for the bistable pair: weighted low root "
            f"{gap.weighted_max_low:.6g} is not below weighted high root "
            f"{gap.weighted_min_high:.6g} (sufficient bound q/d < {gap.bound:.6g})"
        )
    upper = max_steady_state(spec, grid, config)
    if upper.provenance is Provenance.ZERO:
        raise ConvergenceFailure(
            "maximal state vanished although the bistable bound holds"
        )
    level = spec.m2 + spec.m1 * spec.mu / (spec.sigma + spec.m1)
    x = grid.centers
    if spec.growth.poly is not None:
        v3_profile = np.full(grid.n, level_roots(spec.growth, level, 0.0)[0])
    else:
        v3_profile = np.array(
            [level_roots(spec.growth, level, float(xi))[0] for xi in x]
        )
    r_const = float(np.asarray(spec.geometry.ratio_bd(x))[0])
    # Continuation in the flow rate: the level-root profile solves the zero-
    # flow problem exactly, and each step deforms the drift weight e^{alpha x}
    # by at most ~10%, keeping the Newton seed inside the root's basin.
    fields = FieldPair(spec.theta1 * r_const * v3_profile, v3_profile)
    n_steps = max(1, math.ceil(spec.alpha * spec.geometry.L / 0.1))
    res = math.inf
    for k in range(1, n_steps + 1):
        spec_k = dataclasses.replace(spec, q=spec.q * k / n_steps)
        operator_k = assemble_transport(grid, spec_k)
        fields, res = newton_refine(fields, spec_k, operator_k)
    if float(np.min(fields.v)) <= 0.0 or float(np.min(fields.u)) <= 0.0:
        raise ConvergenceFailure("lower bistable state lost positivity")
    _reject_buried_state(fields, spec, x)
    intermediate = SteadyState(fields, res, Provenance.FROM_LOWER_H2)
    gap_sup = max(
        float(np.max(np.abs(upper.fields.u - intermediate.fields.u))),
        float(np.max(np.abs(upper.fields.v - intermediate.fields.v))),
    )
    if gap_sup <= DISTINCT_GAP:
        raise ConvergenceFailure(
            f"the two coexistence states are not distinct (sup gap {gap_sup:.3e})"
        )
    return intermediate, upper


def check_profile_monotone(state: SteadyState | FieldPair) -> bool:
    """True when both profiles increase downstream (differences above -1e-12)."""
    fields = state.fields if isinstance(state, SteadyState) else state
    return bool(
        np.all(np.diff(fields.u) > -1e-12) and np.all(np.diff(fields.v) > -1e-12)
    )
