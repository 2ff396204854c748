"""Spectral analysis of the linearized drift/benthic system.

Linearizing about a state gives a block operator: the drift block is the
transport operator minus the exchange/mortality shift, the benthic block is
a multiplication operator (its values form a band of essential spectrum),
and the two couple through the exchange rates.  A diagonal similarity with
purely local factors — the face-geometric mean for the drift block, the
cross-section/exchange balance for the coupling — makes the whole operator
symmetric without ever forming the exponentially growing weights, so the
principal eigenvalue is computed by a dense (or, for large grids, iterative)
symmetric eigensolve whose leading eigenvector is provably positive.
"""

from __future__ import annotations

import dataclasses
import enum
import math

import numpy as np
from scipy import optimize
from scipy.linalg import eigh

from .discretize import FieldPair, Grid, TransportOperator, assemble_transport
from .errors import BracketFailure, NonPositiveEigenfunction
from .model import GrowthKind, ModelSpec, _scan_extremum

__all__ = [
    "LinearizedBlocks",
    "SpectrumReport",
    "Verdict",
    "SensitivityReport",
    "assemble_linearization",
    "principal_eigenvalue",
    "classify_stability",
    "eigen_sensitivity",
    "critical_m2",
]

# Grids larger than this switch from a full dense eigensolve to an iterative
# one that only extracts the top of the spectrum.
DENSE_LIMIT = 1200

# The essential band is widened by this many cell widths when counting the
# eigenvalues that shadow it.
BAND_WIDEN_CELLS = 10.0


@dataclasses.dataclass(frozen=True)
class LinearizedBlocks:
    """Linearization of the system about a state.

    ``operator`` is the drift transport operator, ``c`` the benthic
    multiplier ``f_v(x, v*) - m2 - mu`` per cell, and ``ratio`` the
    cross-section ratio per cell.  ``dense`` materializes the full
    ``2n x 2n`` matrix in the physical variables (tests and small problems);
    ``symmetrized`` materializes the similar symmetric matrix actually used
    by the eigensolver.
    """

    operator: TransportOperator
    c: np.ndarray
    ratio: np.ndarray
    mu: float
    sigma: float
    m1: float
    m2: float

    @property
    def grid(self) -> Grid:
        return self.operator.grid

    def coupling(self) -> float:
        """Symmetrized coupling strength ``sqrt(mu * sigma)``."""
        return math.sqrt(self.mu * self.sigma)

    def sym_offdiag(self) -> np.ndarray:
        """Face-geometric mean of the transport off-diagonals (length n-1)."""
        op = self.operator
        return np.sqrt(op.upper[:-1] * op.lower[1:])

    def dense(self) -> np.ndarray:
        """Full matrix in the physical variables."""
        n = self.grid.n
        op = self.operator
        a = np.zeros((2 * n, 2 * n))
        idx = np.arange(n)
        a[idx, idx] = op.diag - (self.sigma + self.m1)
        a[idx[:-1], idx[:-1] + 1] = op.upper[:-1]
        a[idx[1:], idx[1:] - 1] = op.lower[1:]
        a[idx, n + idx] = self.mu * self.ratio
        a[n + idx, idx] = self.sigma / self.ratio
        a[n + idx, n + idx] = self.c
        return a

    def symmetrized(self) -> np.ndarray:
        """Similar symmetric matrix, assembled from local quantities only."""
        n = self.grid.n
        op = self.operator
        s = np.zeros((2 * n, 2 * n))
        idx = np.arange(n)
        off = self.sym_offdiag()
        s[idx, idx] = op.diag - (self.sigma + self.m1)
        s[idx[:-1], idx[:-1] + 1] = off
        s[idx[1:], idx[1:] - 1] = off
        coupling = self.coupling()
        s[idx, n + idx] = coupling
        s[n + idx, idx] = coupling
        s[n + idx, n + idx] = self.c
        return s


class Verdict(str, enum.Enum):
    """Stability classification of a state."""

    LINEARLY_STABLE = "LinearlyStable"
    UNSTABLE = "Unstable"
    INDETERMINATE = "Indeterminate"


@dataclasses.dataclass(frozen=True)
class SpectrumReport:
    """Principal eigenvalue and its certificates.

    ``lam1`` is the top of the spectrum, ``gap`` its distance to the next
    point below (positive for the irreducible assemblies produced here),
    ``band`` the benthic essential band ``[min c, max c]``, and
    ``band_population`` the number of eigenvalues inside the
    slightly widened band (``None`` when the iterative path was used).
    ``phi_u``/``phi_v`` are the positive eigenfunction components in the
    physical variables, jointly normalized to unit sup; ``psi_u``/``psi_v``
    the corresponding halves of the symmetric-variable eigenvector.
    ``rayleigh_residual`` is the relative mismatch between ``lam1`` and an
    independently summed quadratic form of the eigenvector.
    """

    lam1: float
    gap: float
    band: tuple[float, float]
    band_population: int | None
    phi_u: np.ndarray
    phi_v: np.ndarray
    psi_u: np.ndarray
    psi_v: np.ndarray
    rayleigh_residual: float


def assemble_linearization(
    state: FieldPair,
    spec: ModelSpec,
    grid: Grid,
    operator: TransportOperator | None = None,
) -> LinearizedBlocks:
    """Linearize the system about ``state``."""
    if operator is None:
        operator = assemble_transport(grid, spec)
    x = grid.centers
    c = np.asarray(spec.growth.f_v(x, state.v), dtype=float) - (spec.m2 + spec.mu)
    if c.ndim == 0:
        c = np.full(grid.n, float(c))
    ratio = np.asarray(spec.geometry.ratio_bd(x), dtype=float)
    if ratio.ndim == 0:
        ratio = np.full(grid.n, float(ratio))
    return LinearizedBlocks(
        operator=operator,
        c=c,
        ratio=ratio,
        mu=spec.mu,
        sigma=spec.sigma,
        m1=spec.m1,
        m2=spec.m2,
    )


def _rayleigh_quotient(blocks: LinearizedBlocks, psi1: np.ndarray, psi2: np.ndarray) -> float:
    """Quadratic form of the symmetrized operator, summed by parts.

    Uses only analytic local coefficients (face conductances, the fitting
    defect ``P tanh(P/4)``, and the realized boundary flux factors), so it
    cross-checks the assembled matrix with independent algebra.
    """
    op = blocks.operator
    dx = op.grid.dx
    p = op.peclet
    base = op.d / dx**2
    s_off = base if p < 1e-12 else base * p / (2.0 * math.sinh(0.5 * p))
    rho_int = base * p * math.tanh(0.25 * p)
    em = math.exp(-0.5 * p)
    rho_first = base * p / (1.0 + em) - op.c0 / dx
    rho_last = -base * p * em / (1.0 + em) + op.cL / dx

    diff = np.diff(psi1)
    quad = -s_off * float(np.dot(diff, diff))
    rho = np.full(psi1.shape[0], rho_int)
    rho[0] = rho_first
    rho[-1] = rho_last
    quad -= float(np.dot(rho * psi1, psi1))
    quad -= (blocks.sigma + blocks.m1) * float(np.dot(psi1, psi1))
    quad += 2.0 * blocks.coupling() * float(np.dot(psi1, psi2))
    quad += float(np.dot(blocks.c * psi2, psi2))
    norm = float(np.dot(psi1, psi1) + np.dot(psi2, psi2))
    return quad / norm


def principal_eigenvalue(
    blocks: LinearizedBlocks, dense_limit: int = DENSE_LIMIT
) -> SpectrumReport:
    """Top of the spectrum of the linearization, with certificates.

    Raises
    ------
    NonPositiveEigenfunction
        If the leading eigenvector of the symmetrized matrix is not positive
        after sign normalization — for these irreducible assemblies that
        indicates an assembly bug, not a model property.
    """
    n = blocks.grid.n
    if n <= dense_limit:
        s = blocks.symmetrized()
        vals, vecs = eigh(s)
        lam1 = float(vals[-1])
        gap = float(vals[-1] - vals[-2])
        psi = vecs[:, -1]
        lo = float(np.min(blocks.c))
        hi = float(np.max(blocks.c))
        widen = BAND_WIDEN_CELLS * blocks.grid.dx
        band_population = int(np.sum((vals >= lo - widen) & (vals <= hi + widen)))
    else:  # pragma: no cover - exercised only on very large grids
        from scipy.sparse import bmat, diags
        from scipy.sparse.linalg import eigsh

        op = blocks.operator
        off = blocks.sym_offdiag()
        t_sym = diags(
            [off, op.diag - (blocks.sigma + blocks.m1), off], offsets=(-1, 0, 1)
        )
        coupling = diags([np.full(n, blocks.coupling())], offsets=(0,))
        s_sparse = bmat(
            [[t_sym, coupling], [coupling, diags([blocks.c], offsets=(0,))]],
            format="csr",
        )
        vals, vecs = eigsh(s_sparse, k=2, which="LA")
        order = np.argsort(vals)
        lam1 = float(vals[order[-1]])
        gap = float(vals[order[-1]] - vals[order[-2]])
        psi = vecs[:, order[-1]]
        lo = float(np.min(blocks.c))
        hi = float(np.max(blocks.c))
        band_population = None

    if float(np.sum(psi)) < 0.0:
        psi = -psi
    top = float(np.max(psi))
    if top <= 0.0 or float(np.min(psi)) < -1e-8 * top:
        raise NonPositiveEigenfunction(
            "leading eigenvector changes sign; check the assembly"
        )
    psi1 = psi[:n]
    psi2 = psi[n:]

    x = blocks.grid.centers
    alpha = blocks.operator.q / blocks.operator.d
    with np.errstate(divide="ignore"):
        log1 = 0.5 * alpha * x + np.log(np.maximum(psi1, 0.0))
        log2 = (
            0.5 * alpha * x
            + np.log(np.maximum(psi2, 0.0))
            + 0.5 * math.log(blocks.sigma / blocks.mu)
            - np.log(blocks.ratio)
        )
    peak = max(float(np.max(log1)), float(np.max(log2)))
    phi_u = np.exp(log1 - peak)
    phi_v = np.exp(log2 - peak)

    rq = _rayleigh_quotient(blocks, psi1, psi2)
    residual = abs(lam1 - rq) / (1.0 + abs(lam1))
    return SpectrumReport(
        lam1=lam1,
        gap=gap,
        band=(lo, hi),
        band_population=band_population,
        phi_u=phi_u,
        phi_v=phi_v,
        psi_u=psi1,
        psi_v=psi2,
        rayleigh_residual=residual,
    )


def classify_stability(report: SpectrumReport, blocks: LinearizedBlocks) -> Verdict:
    """Three-way stability verdict for the linearized state.

    A positive benthic band top or a positive principal eigenvalue is
    conclusive instability.  Stability is certified only when the principal
    eigenvalue and the whole band are negative *and* the benthic slope stays
    below the settled-compartment threshold ``m2 + m1 mu / (m1 + sigma)``;
    between the two certificates the verdict is indeterminate.
    """
    band_top = report.band[1]
    max_fv = band_top + blocks.m2 + blocks.mu
    if band_top > 0.0 or report.lam1 > 0.0:
        return Verdict.UNSTABLE
    threshold = blocks.m2 + blocks.m1 * blocks.mu / (blocks.m1 + blocks.sigma)
    if max_fv < threshold and report.lam1 < 0.0 and band_top < 0.0:
        return Verdict.LINEARLY_STABLE
    return Verdict.INDETERMINATE


@dataclasses.dataclass(frozen=True)
class SensitivityReport:
    """Central-difference sensitivity of the principal eigenvalue."""

    parameter: str
    derivative: float
    sign: int


def eigen_sensitivity(
    spec: ModelSpec,
    grid: Grid,
    parameter: str,
    state: FieldPair | None = None,
    delta: float = 1e-4,
) -> SensitivityReport:
    """Differentiate the principal eigenvalue with respect to ``q`` or ``m2``.

    The state is held fixed (defaulting to the zero state, about which the
    linearization does not depend on either parameter through the state);
    ``delta`` is relative to the parameter magnitude.  Falls back to a
    one-sided difference when the parameter sits at the boundary of its
    admissible range.
    """
    if parameter not in ("q", "m2"):
        raise ValueError("parameter must be 'q' or 'm2'")
    if state is None:
        state = FieldPair(np.zeros(grid.n), np.zeros(grid.n))
    base = float(getattr(spec, parameter))
    h = delta * max(abs(base), 1.0)

    def lam_at(value: float) -> float:
        probe = spec.replace(**{parameter: value})
        blocks = assemble_linearization(state, probe, grid)
        return principal_eigenvalue(blocks).lam1

    if base - h < 0.0:
        derivative = (lam_at(base + h) - lam_at(base)) / h
    else:
        derivative = (lam_at(base + h) - lam_at(base - h)) / (2.0 * h)
    sign = 0 if derivative == 0.0 else (1 if derivative > 0.0 else -1)
    return SensitivityReport(parameter=parameter, derivative=derivative, sign=sign)


def critical_m2(
    spec: ModelSpec,
    grid: Grid,
    q: float | None = None,
    xtol: float = 1e-10,
) -> float:
    """Benthic mortality at which the zero state loses stability.

    For logistic or weak-Allee growth with a lossy downstream end, the
    principal eigenvalue at the zero state crosses zero exactly once between
    ``max(p* - mu, 0)`` and ``p* - m1 mu / (m1 + sigma)`` where
    ``p* = max_x g(x, 0)``; the crossing is located by bracketed bisection.

    Raises
    ------
    BracketFailure
        If the eigenvalue does not change sign over that bracket (for
        instance when ``mu`` exceeds ``p*``, so no admissible mortality makes
        the zero state unstable).
    """
    if spec.growth.kind not in (GrowthKind.LOGISTIC, GrowthKind.WEAK_ALLEE):
        raise ValueError("the critical mortality needs logistic or weak-Allee growth")
    if q is not None:
        spec = spec.replace(q=q)
    if spec.growth.poly is not None:
        p_star = float(spec.growth.poly[0])
    else:
        _, p_star = _scan_extremum(
            lambda y: float(spec.growth.g(y, 0.0)),
            0.0,
            spec.geometry.L,
            1024,
            maximize=True,
        )
    lo = max(p_star - spec.mu, 0.0)
    hi = p_star - spec.m1 * spec.mu / (spec.m1 + spec.sigma)
    if not hi > lo:
        raise BracketFailure(
            f"empty mortality bracket ({lo:.6g}, {hi:.6g}); "
            "the zero state is stable for every admissible mortality"
        )
    zero = FieldPair(np.zeros(grid.n), np.zeros(grid.n))

    def lam_at(m2_value: float) -> float:
        probe = spec.replace(m2=m2_value)
        blocks = assemble_linearization(zero, probe, grid)
        return principal_eigenvalue(blocks).lam1

    lam_lo = lam_at(lo)
    lam_hi = lam_at(hi)
    if not (lam_lo > 0.0 > lam_hi):
        raise BracketFailure(
            f"no sign change over the mortality bracket: "
            f"lam({lo:.6g}) = {lam_lo:.3e}, lam({hi:.6g}) = {lam_hi:.3e}"
        )
    root = optimize.brentq(lam_at, lo, hi, xtol=xtol)
    return float(root)
