"""Linearization assembly, principal eigenvalue, verdicts, sensitivities."""

from __future__ import annotations

import numpy as np
import pytest

from benthdrift.discretize import FieldPair, Grid
from benthdrift.errors import BracketFailure
from benthdrift.spectral import (
    Verdict,
    assemble_linearization,
    classify_stability,
    critical_m2,
    eigen_sensitivity,
    principal_eigenvalue,
)

from conftest import make_cubic_spec, make_logistic_spec

# frozen 2x2 constant-mode eigenvalues (larger root of the characteristic
# quadratic lambda^2 - tr lambda + det = 0 of [[-0.22, mu], [0.2, c]])
LAM1_ZERO_MU004 = -0.190333704529
LAM1_ZERO_MU08 = -0.0796875762567
LAM1_CONST_STATE_MU004 = -0.196027745373
U4 = 0.174111164679
V4 = 0.957611405733
# critical mortality of the 0.09-logistic at mu = 0.04, b_d = 1 (bisection
# on the assembled eigenvalue, cross-checked by the sign flips around it)
M2_STAR_Q02 = 0.061093081620
M2_STAR_Q01 = 0.073077927593
M2_STAR_Q03 = 0.055954254108


def zero_state(grid: Grid) -> FieldPair:
    return FieldPair(np.zeros(grid.n), np.zeros(grid.n))


class TestAssembly:
    def test_zero_state_benthic_diagonal(self, grid):
        spec = make_cubic_spec(mu=0.04)
        blocks = assemble_linearization(zero_state(grid), spec, grid)
        # c = g(x, 0) - m2 - mu = -0.4 - 0.06
        assert np.allclose(blocks.c, -0.46, atol=1e-14)

    def test_symmetrized_is_symmetric_and_similar(self, coarse_grid):
        spec = make_cubic_spec(mu=0.04, q=0.11, b_d=1.0)
        blocks = assemble_linearization(zero_state(coarse_grid), spec, coarse_grid)
        s = blocks.symmetrized()
        assert float(np.max(np.abs(s - s.T))) < 1e-12
        # the similarity scaling spans a huge dynamic range, so eigenvalues
        # of the raw nonsymmetric matrix are poorly conditioned — that is
        # the reason the solver iterates on the symmetric form at all; the
        # honest cross-check is the eigenpair residual in physical variables
        dense_eigs = np.sort(np.linalg.eigvals(blocks.dense()).real)
        sym_eigs = np.sort(np.linalg.eigvalsh(s))
        assert np.allclose(dense_eigs, sym_eigs, atol=1e-4)
        report = principal_eigenvalue(blocks)
        phi = np.concatenate([report.phi_u, report.phi_v])
        residual = blocks.dense() @ phi - report.lam1 * phi
        assert float(np.max(np.abs(residual))) < 1e-9 * float(np.max(np.abs(phi)))


class TestPrincipalEigenvalue:
    def test_zero_state_constant_mode(self, grid):
        spec = make_cubic_spec(mu=0.04)
        report = principal_eigenvalue(assemble_linearization(zero_state(grid), spec, grid))
        assert report.lam1 == pytest.approx(LAM1_ZERO_MU004, abs=1e-12)

    def test_constant_mode_is_grid_independent(self):
        spec = make_cubic_spec(mu=0.04)
        for n in (50, 100, 200):
            grid = Grid(n=n, L=10.0)
            report = principal_eigenvalue(
                assemble_linearization(zero_state(grid), spec, grid)
            )
            assert report.lam1 == pytest.approx(LAM1_ZERO_MU004, abs=1e-11)

    def test_high_exchange_zero_state(self, grid):
        spec = make_cubic_spec(mu=0.8)
        report = principal_eigenvalue(assemble_linearization(zero_state(grid), spec, grid))
        assert report.lam1 == pytest.approx(LAM1_ZERO_MU08, abs=1e-12)

    def test_eigenfunction_positive_and_rayleigh_consistent(self, grid):
        spec = make_cubic_spec(mu=0.04, q=0.2, b_d=1.0)
        report = principal_eigenvalue(assemble_linearization(zero_state(grid), spec, grid))
        assert float(np.min(report.phi_u)) > 0.0
        assert float(np.min(report.phi_v)) > 0.0
        assert report.rayleigh_residual < 1e-8
        assert report.gap > 0.0

    def test_band_population_counts_benthic_cluster(self, grid):
        # a spatially varying benthic slope spreads the band; at least a
        # quarter of the eigenvalues must sit inside the widened band
        spec = make_cubic_spec(mu=0.3)
        x = grid.centers
        v = 0.9 - 0.2 * np.exp(-((x - 5.0) ** 2))
        state = FieldPair((spec.mu / 0.22) * v, v)
        report = principal_eigenvalue(assemble_linearization(state, spec, grid))
        assert report.band_population is not None
        assert report.band_population >= (grid.n + 3) // 4

    def test_band_matches_benthic_slope_range(self, grid):
        spec = make_cubic_spec(mu=0.04)
        report = principal_eigenvalue(assemble_linearization(zero_state(grid), spec, grid))
        assert report.band[0] == pytest.approx(-0.46, abs=1e-12)
        assert report.band[1] == pytest.approx(-0.46, abs=1e-12)


class TestVerdicts:
    def test_zero_state_of_strong_allee_is_stable(self, grid, rng):
        for _ in range(10):
            spec = make_cubic_spec(
                mu=float(rng.uniform(0.01, 0.8)),
                q=float(rng.uniform(0.0, 0.4)),
                b_d=float(rng.choice([0.0, 1.0])),
            )
            blocks = assemble_linearization(zero_state(grid), spec, grid)
            report = principal_eigenvalue(blocks)
            assert report.lam1 < 0.0
            assert classify_stability(report, blocks) is Verdict.LINEARLY_STABLE

    def test_constant_coexistence_state_is_stable(self, grid):
        spec = make_cubic_spec(mu=0.04)
        state = FieldPair(np.full(grid.n, U4), np.full(grid.n, V4))
        blocks = assemble_linearization(state, spec, grid)
        report = principal_eigenvalue(blocks)
        assert report.lam1 == pytest.approx(LAM1_CONST_STATE_MU004, abs=1e-12)
        assert classify_stability(report, blocks) is Verdict.LINEARLY_STABLE

    def test_steep_benthic_slope_is_unstable(self, grid):
        # max f_v = f_v(0.7) = 0.09 > m2 + mu = 0.06: conclusive instability
        spec = make_cubic_spec(mu=0.04)
        state = FieldPair(np.zeros(grid.n), np.full(grid.n, 0.7))
        blocks = assemble_linearization(state, spec, grid)
        report = principal_eigenvalue(blocks)
        assert classify_stability(report, blocks) is Verdict.UNSTABLE

    def test_criteria_gap_is_exposed(self, grid):
        # benthic slope peaks between the two certificates while the
        # principal eigenvalue stays negative: neither test concludes
        spec = make_cubic_spec(mu=0.3)
        x = grid.centers
        v = 0.9 - 0.2 * np.exp(-((x - 5.0) ** 2))
        state = FieldPair((spec.mu / 0.22) * v, v)
        blocks = assemble_linearization(state, spec, grid)
        report = principal_eigenvalue(blocks)
        max_fv = float(np.max(spec.growth.f_v(x, v)))
        assert 0.02 + 0.02 * 0.3 / 0.22 < max_fv < 0.32
        assert report.lam1 < 0.0
        assert classify_stability(report, blocks) is Verdict.INDETERMINATE


class TestSensitivity:
    @pytest.mark.parametrize("q", [0.1, 0.2])
    def test_eigenvalue_falls_with_flow(self, grid, q):
        spec = make_logistic_spec(q=q)
        report = eigen_sensitivity(spec, grid, "q")
        assert report.sign == -1

    def test_eigenvalue_falls_with_mortality(self, grid):
        spec = make_logistic_spec()
        report = eigen_sensitivity(spec, grid, "m2")
        assert report.sign == -1

    def test_unknown_parameter_rejected(self, grid):
        with pytest.raises(ValueError):
            eigen_sensitivity(make_logistic_spec(), grid, "sigma")


class TestCriticalMortality:
    def test_root_inside_bracket(self, grid):
        spec = make_logistic_spec(q=0.2)
        m2_star = critical_m2(spec, grid)
        assert 0.05 < m2_star < 0.0864
        assert m2_star == pytest.approx(M2_STAR_Q02, abs=1e-9)
        blocks = assemble_linearization(
            zero_state(grid), spec.replace(m2=m2_star), grid
        )
        assert abs(principal_eigenvalue(blocks).lam1) < 1e-8

    def test_sign_flips_around_root(self, grid):
        spec = make_logistic_spec(q=0.2)
        m2_star = critical_m2(spec, grid)
        lam = lambda m2: principal_eigenvalue(
            assemble_linearization(zero_state(grid), spec.replace(m2=m2), grid)
        ).lam1
        assert lam(m2_star - 0.01) > 0.0
        assert lam(m2_star + 0.01) < 0.0

    def test_decreasing_in_flow(self, grid):
        spec = make_logistic_spec()
        assert critical_m2(spec, grid, q=0.1) == pytest.approx(M2_STAR_Q01, abs=1e-9)
        assert critical_m2(spec, grid, q=0.3) == pytest.approx(M2_STAR_Q03, abs=1e-9)
        assert M2_STAR_Q01 > M2_STAR_Q03

    def test_excessive_exchange_has_no_bracket(self, grid):
        # mu > p*: the zero state is stable for every admissible mortality
        spec = make_logistic_spec(mu=0.2)
        with pytest.raises(BracketFailure):
            critical_m2(spec, grid)

    def test_needs_logistic_growth(self, grid):
        with pytest.raises(ValueError):
            critical_m2(make_cubic_spec(), grid)
