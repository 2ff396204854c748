"""Grid, transport operator assembly, fitting weights and mass budgets."""

from __future__ import annotations

import math

import numpy as np
import pytest

from benthdrift.discretize import (
    MAX_CELL_PECLET,
    FieldPair,
    Grid,
    assemble_transport,
    bernoulli_ratio,
    exp_transform,
    mass_balance,
)
from benthdrift.errors import BadResolution

from conftest import make_cubic_spec


class TestGrid:
    def test_centers_are_cell_midpoints(self):
        grid = Grid(n=5, L=10.0)
        assert grid.dx == pytest.approx(2.0)
        assert np.allclose(grid.centers, [1.0, 3.0, 5.0, 7.0, 9.0])

    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            Grid(n=1, L=10.0)
        with pytest.raises(ValueError):
            Grid(n=100, L=0.0)


class TestBernoulliRatio:
    def test_zero_limit(self):
        bp, bm = bernoulli_ratio(0.0)
        assert bp == pytest.approx(1.0, abs=1e-15)
        assert bm == pytest.approx(1.0, abs=1e-15)

    def test_matches_definition(self, rng):
        # B(z) = z/(e^z - 1), B(-z) = z e^{... } checked against direct formula
        for _ in range(40):
            z = float(rng.uniform(1e-6, 50.0))
            bp, bm = bernoulli_ratio(z)
            assert bp == pytest.approx(z / math.expm1(z), rel=1e-13)
            assert bm == pytest.approx(-z / math.expm1(-z), rel=1e-13)

    def test_large_argument_stays_finite(self):
        bp, bm = bernoulli_ratio(700.0)
        assert bp == pytest.approx(0.0, abs=1e-300)
        assert bm == pytest.approx(700.0, rel=1e-12)

    def test_identity_bm_minus_bp_is_z(self, rng):
        for _ in range(20):
            z = float(rng.uniform(0.0, 30.0))
            bp, bm = bernoulli_ratio(z)
            assert bm - bp == pytest.approx(z, abs=1e-12)


class TestTransportOperator:
    def test_constant_in_kernel_when_closed(self, grid):
        # no flow, no boundary loss: T 1 = 0 exactly
        spec = make_cubic_spec(q=0.0)
        operator = assemble_transport(grid, spec)
        assert np.max(np.abs(operator.apply(np.ones(grid.n)))) < 1e-14

    def test_drift_profile_in_kernel_with_flow(self, grid):
        # exponential fitting reproduces e^{alpha x} exactly under no-flux
        spec = make_cubic_spec(q=0.11)
        operator = assemble_transport(grid, spec)
        profile = np.exp(spec.alpha * grid.centers)
        residual = operator.apply(profile)
        assert np.max(np.abs(residual)) <= 1e-12 * np.max(profile)

    def test_row_sums_nonpositive(self, grid, rng):
        # the operator is weakly diagonally dominant with nonpositive row
        # sums for any admissible boundary factors
        for _ in range(10):
            spec = make_cubic_spec(
                q=float(rng.uniform(0.0, 0.4)),
                b_u=float(rng.choice([0.0, 1.0])),
                b_d=float(rng.choice([0.0, 1.0, 1e6])),
            )
            operator = assemble_transport(grid, spec)
            row_sums = operator.apply(np.ones(grid.n))
            assert np.all(row_sums <= 1e-13)

    def test_offdiagonals_positive(self, grid):
        operator = assemble_transport(grid, make_cubic_spec(q=0.3))
        assert np.all(operator.upper[:-1] > 0.0)
        assert np.all(operator.lower[1:] > 0.0)

    def test_peclet_guard(self):
        # cell Peclet q dx / d beyond the representable range must raise
        grid = Grid(n=4, L=10.0)
        spec = make_cubic_spec(q=30.0)
        with pytest.raises(BadResolution):
            assemble_transport(grid, spec)
        assert MAX_CELL_PECLET == pytest.approx(1e3)

    def test_banded_layout_matches_apply(self, grid, rng):
        spec = make_cubic_spec(q=0.2, b_d=1.0)
        operator = assemble_transport(grid, spec)
        ab = operator.as_banded()
        u = rng.random(grid.n)
        dense = np.zeros((grid.n, grid.n))
        for i in range(grid.n):
            dense[i, i] = ab[1, i]
            if i + 1 < grid.n:
                dense[i, i + 1] = ab[0, i + 1]
                dense[i + 1, i] = ab[2, i]
        assert np.allclose(dense @ u, operator.apply(u), atol=1e-14)

    def test_face_fluxes_telescope(self, grid, rng):
        # sum of cell divergences telescopes to the boundary fluxes
        spec = make_cubic_spec(q=0.15, b_u=0.0, b_d=1.0)
        operator = assemble_transport(grid, spec)
        u = rng.random(grid.n)
        flux = operator.face_fluxes(u)
        divergence = -(flux[1:] - flux[:-1]) / grid.dx
        assert np.allclose(divergence, operator.apply(u), atol=1e-12)

    def test_hostile_end_reconstructs_small_boundary_value(self, grid):
        spec = make_cubic_spec(q=0.1, b_d=1e6)
        operator = assemble_transport(grid, spec)
        u = np.ones(grid.n)
        _, uL = operator.boundary_values(u)
        assert abs(uL) < 1e-2


class TestExpTransform:
    def test_round_trip(self, grid, rng):
        fields = FieldPair(rng.random(grid.n), rng.random(grid.n))
        stripped = exp_transform(fields, grid, 0.7, "strip")
        restored = exp_transform(stripped, grid, 0.7, "restore")
        assert np.allclose(restored.u, fields.u, rtol=1e-14)
        assert np.allclose(restored.v, fields.v, rtol=1e-14)

    def test_bad_direction(self, grid):
        fields = FieldPair(np.zeros(grid.n), np.zeros(grid.n))
        with pytest.raises(ValueError):
            exp_transform(fields, grid, 0.7, "sideways")


class TestMassBalance:
    def test_budget_identity(self, grid, rng):
        # the interior transport telescopes away, so the total rate is the
        # boundary inflow plus the net reaction for any state
        spec = make_cubic_spec(q=0.2, b_u=0.0, b_d=1.0, mu=0.1)
        operator = assemble_transport(grid, spec)
        for _ in range(10):
            fields = FieldPair(rng.random(grid.n), rng.random(grid.n))
            budget = mass_balance(fields, spec, operator)
            assert budget.total_rate == pytest.approx(
                budget.reaction_rate + budget.boundary_rate, abs=1e-12
            )

    def test_closed_channel_is_conservative(self, grid):
        spec = make_cubic_spec(q=0.3, m1=0.0, m2=0.0, b_u=0.0, b_d=0.0)
        operator = assemble_transport(grid, spec)
        assert operator.conservative
        assert operator.c0 == pytest.approx(0.0, abs=1e-15)
        assert operator.cL == pytest.approx(0.0, abs=1e-15)

    def test_open_end_loses_mass(self, grid):
        spec = make_cubic_spec(q=0.3, b_d=1.0)
        operator = assemble_transport(grid, spec)
        budget = mass_balance(
            FieldPair(np.ones(grid.n), np.zeros(grid.n)), spec, operator
        )
        # boundary_rate is the net inflow; an open downstream end drains
        assert budget.boundary_rate < 0.0
