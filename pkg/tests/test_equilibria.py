"""Steady states: linear balance, maximal state, bistable pair, monotonicity."""

from __future__ import annotations

import numpy as np
import pytest

from benthdrift.discretize import FieldPair, Grid, assemble_transport
from benthdrift.equilibria import (
    Provenance,
    check_profile_monotone,
    lower_state_H3,
    max_steady_state,
    multiplicity_H2,
    newton_refine,
    solve_linear_bvp,
    steady_residual,
)
from benthdrift.errors import (
    BadResolution,
    GapConditionFailed,
    RegimeMismatch,
    SingularSystem,
)

from conftest import make_cubic_spec

# closed-form constant states (quadratic formula, 30-digit arithmetic)
U4_MU004 = 0.174111164679  # theta1 * v4 at mu = 0.04
V4_MU004 = 0.957611405733
V3_MU01 = 0.453202327991  # level roots at mu = 0.1
V4_MU01 = 0.946797672009

# continuous solution of (sigma+m1) w - (d w'' + q w') = mu v1 e^{-alpha x}
# with no-flux upstream / unit-loss downstream, mu = 0.04, q = 0.11:
# w(x) = P e^{-alpha x} + A e^{beta+ x} + B e^{beta- x}
BVP_P = 0.0957808944078  # theta1 * v1, v1 = 0.526794919243
BVP_A = -6.22921801624e-40
BVP_B = -0.0746335257894
BVP_BETA_PLUS = 1.5584219849
BVP_BETA_MINUS = -7.0584219849


def bvp_exact(x: np.ndarray) -> np.ndarray:
    return (
        BVP_P * np.exp(-5.5 * x)
        + BVP_A * np.exp(BVP_BETA_PLUS * x)
        + BVP_B * np.exp(BVP_BETA_MINUS * x)
    )


class TestLinearBvp:
    def test_matches_continuous_solution(self):
        spec = make_cubic_spec(mu=0.04, q=0.11, b_u=0.0, b_d=1.0)
        errors = []
        for n in (64, 128, 256, 400):
            grid = Grid(n=n, L=10.0)
            operator = assemble_transport(grid, spec)
            x = grid.centers
            v1 = 0.526794919243
            load = spec.mu * v1 * np.exp(-spec.alpha * x)
            w = solve_linear_bvp(load, spec, grid, operator)
            errors.append(float(np.max(np.abs(w - bvp_exact(x)))))
        assert errors[-1] < 1e-4
        assert all(a > b for a, b in zip(errors, errors[1:]))
        assert errors[-1] < errors[0] / 15.0

    def test_constant_load_closed_channel(self, grid):
        # q = 0, no boundary loss: w = load / (sigma + m1) exactly
        spec = make_cubic_spec(q=0.0)
        operator = assemble_transport(grid, spec)
        load = np.full(grid.n, 0.05)
        w = solve_linear_bvp(load, spec, grid, operator)
        assert np.allclose(w, 0.05 / 0.22, atol=1e-13)


class TestMaxSteadyState:
    def test_canonical_constant_state(self, grid):
        spec = make_cubic_spec(mu=0.04)
        state = max_steady_state(spec, grid)
        assert state.provenance is Provenance.MAX_FROM_UPPER
        assert float(np.max(np.abs(state.fields.u - U4_MU004))) < 1e-10
        assert float(np.max(np.abs(state.fields.v - V4_MU004))) < 1e-10
        assert state.residual < 1e-11

    def test_high_exchange_collapses_to_zero(self, grid):
        state = max_steady_state(make_cubic_spec(mu=0.8, q=0.2), grid)
        assert state.provenance is Provenance.ZERO
        assert state.fields.sup() == 0.0

    def test_bistable_with_strong_drift_collapses(self, grid):
        state = max_steady_state(make_cubic_spec(mu=0.2, q=0.2), grid)
        assert state.provenance is Provenance.ZERO

    @pytest.mark.parametrize("b_d", [0.0, 1.0, 1e6])
    def test_low_exchange_positive_state(self, b_d):
        grid = Grid(n=200, L=10.0)
        spec = make_cubic_spec(mu=0.04, q=0.2, b_d=b_d)
        state = max_steady_state(spec, grid)
        assert state.provenance is Provenance.MAX_FROM_UPPER
        assert float(np.min(state.fields.v)) > 0.0
        assert state.residual < 1e-11

    def test_residuals_small_across_flows(self):
        grid = Grid(n=200, L=10.0)
        for q in (0.2, 0.4):
            for b_d in (0.0, 1.0):
                spec = make_cubic_spec(mu=0.04, q=q, b_d=b_d)
                state = max_steady_state(spec, grid)
                res_u, res_v = steady_residual(state.fields, spec,
                                               assemble_transport(grid, spec))
                res = max(float(np.max(np.abs(res_u))),
                          float(np.max(np.abs(res_v))))
                assert res < 1e-11

    def test_extreme_drift_ratio_rejected(self, grid):
        # alpha * L = 700 exceeds double-precision range
        with pytest.raises(BadResolution):
            max_steady_state(make_cubic_spec(mu=0.04, q=1.4), grid)

    def test_heterogeneous_channel_rejected(self, grid):
        from benthdrift.model import sine_pair_geometry

        spec = make_cubic_spec(mu=0.04, geometry=sine_pair_geometry())
        with pytest.raises(RegimeMismatch):
            max_steady_state(spec, grid)


class TestNewtonRefine:
    def test_polishes_a_perturbed_state(self, grid):
        spec = make_cubic_spec(mu=0.04)
        operator = assemble_transport(grid, spec)
        fields = FieldPair(
            np.full(grid.n, U4_MU004 * 1.02),
            np.full(grid.n, V4_MU004 * 0.98),
        )
        refined, residual = newton_refine(fields, spec, operator)
        assert residual < 1e-12
        assert float(np.max(np.abs(refined.v - V4_MU004))) < 1e-10

    def test_singular_benthic_slope_detected(self, grid):
        # f_v(v) = m2 + mu kills the benthic diagonal of the Jacobian
        spec = make_cubic_spec(mu=0.1)
        operator = assemble_transport(grid, spec)
        v_flat = (2.8 + np.sqrt(7.84 - 6.24)) / 6.0  # f_v(v) = 0.12
        fields = FieldPair(np.zeros(grid.n), np.full(grid.n, v_flat))
        with pytest.raises(SingularSystem):
            newton_refine(fields, spec, operator)


class TestMultiplicity:
    def test_zero_flow_pair_is_exact(self, grid):
        spec = make_cubic_spec(mu=0.1, q=0.0)
        lower, upper = multiplicity_H2(spec, grid)
        assert lower.provenance is Provenance.FROM_LOWER_H2
        assert upper.provenance is Provenance.MAX_FROM_UPPER
        assert float(np.max(np.abs(lower.fields.v - V3_MU01))) < 1e-9
        assert float(np.max(np.abs(upper.fields.v - V4_MU01))) < 1e-9
        gap = float(np.max(np.abs(upper.fields.v - lower.fields.v)))
        assert gap == pytest.approx(V4_MU01 - V3_MU01, abs=1e-8)

    def test_slow_flow_pair_stays_separated(self, grid):
        spec = make_cubic_spec(mu=0.1, q=0.001)
        lower, upper = multiplicity_H2(spec, grid)
        assert lower.residual < 1e-11
        assert upper.residual < 1e-11
        assert float(np.min(lower.fields.v)) > 0.0
        gap = max(
            float(np.max(np.abs(upper.fields.u - lower.fields.u))),
            float(np.max(np.abs(upper.fields.v - lower.fields.v))),
        )
        assert gap > 1e-4

    def test_wrong_regime_rejected(self, grid):
        with pytest.raises(RegimeMismatch):
            multiplicity_H2(make_cubic_spec(mu=0.04), grid)

    def test_open_channel_rejected(self, grid):
        with pytest.raises(RegimeMismatch):
            multiplicity_H2(make_cubic_spec(mu=0.1, b_d=1.0), grid)

    def test_strong_drift_rejected(self, grid):
        with pytest.raises(GapConditionFailed):
            multiplicity_H2(make_cubic_spec(mu=0.1, q=0.2), grid)


class TestLowerH3:
    def test_coincides_with_maximal_at_zero_flow(self, grid):
        spec = make_cubic_spec(mu=0.04, q=0.0)
        from_below = lower_state_H3(spec, grid)
        from_above = max_steady_state(spec, grid)
        assert from_below.provenance is Provenance.FROM_LOWER_H3
        gap = max(
            float(np.max(np.abs(from_below.fields.u - from_above.fields.u))),
            float(np.max(np.abs(from_below.fields.v - from_above.fields.v))),
        )
        assert gap < 1e-8

    def test_wrong_regime_rejected(self, grid):
        with pytest.raises(RegimeMismatch):
            lower_state_H3(make_cubic_spec(mu=0.1), grid)


class TestProfileMonotone:
    def test_maximal_states_rise_downstream(self):
        grid = Grid(n=200, L=10.0)
        for b_d in (0.0, 1.0):
            spec = make_cubic_spec(mu=0.04, q=0.2, b_d=b_d)
            state = max_steady_state(spec, grid)
            assert check_profile_monotone(state.fields)

    def test_hostile_end_breaks_monotonicity(self):
        grid = Grid(n=200, L=10.0)
        spec = make_cubic_spec(mu=0.04, q=0.2, b_d=1e6)
        state = max_steady_state(spec, grid)
        assert not check_profile_monotone(state.fields)

    def test_flat_profile_counts_as_monotone(self, grid):
        fields = FieldPair(np.ones(grid.n), np.ones(grid.n))
        assert check_profile_monotone(fields)

    def test_decreasing_profile_fails(self, grid):
        fields = FieldPair(
            np.linspace(1.0, 0.5, grid.n), np.ones(grid.n)
        )
        assert not check_profile_monotone(fields)
