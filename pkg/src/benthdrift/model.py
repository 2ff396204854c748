"""Parameter algebra for a two-compartment river population model.

The model couples a drifting compartment ``u`` (individuals suspended in the
flow, transported by advection and diffusion) to a benthic compartment ``v``
(individuals on the bed, where all reproduction happens).  Individuals settle
out of the drift at rate ``sigma`` and re-enter it at rate ``mu``; each
compartment has its own mortality.

This module holds the parameter containers — growth law, channel geometry and
the full model specification — together with the closed-form quantities
derived from them: growth landmarks, persistence thresholds and regime
classification, level-set roots of the per-capita growth, a-priori solution
bounds, and the drift bound that guarantees a bistable pair of coexistence
states.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy import integrate, optimize

from .errors import DoubleRoot, NonconformingGrowth, NoRoots, RegimeMismatch

__all__ = [
    "GrowthKind",
    "GrowthModel",
    "strong_allee_cubic",
    "logistic",
    "custom_growth",
    "RiverGeometry",
    "uniform_geometry",
    "sine_pair_geometry",
    "ModelSpec",
    "Landmarks",
    "Regime",
    "RegimeReport",
    "AprioriBounds",
    "GapCondition",
    "derive_landmarks",
    "classify_regime",
    "level_roots",
    "apriori_bounds",
    "bistability_gap_condition",
]

ScalarOrArray = float | np.ndarray
GrowthFn = Callable[[ScalarOrArray, ScalarOrArray], ScalarOrArray]
ProfileFn = Callable[[ScalarOrArray], ScalarOrArray]


class GrowthKind(str, enum.Enum):
    """Shape family of the benthic per-capita growth rate."""

    LOGISTIC = "logistic"
    WEAK_ALLEE = "weak_allee"
    STRONG_ALLEE = "strong_allee"
    CUSTOM = "custom"


@dataclasses.dataclass(frozen=True)
class GrowthModel:
    """Per-capita growth law ``g(x, v)`` of the benthic compartment.

    Attributes
    ----------
    kind:
        Shape family; several operations require a specific family.
    g:
        Per-capita growth rate ``g(x, v)``; the density growth is
        ``f(x, v) = v * g(x, v)``.
    f_v:
        Partial derivative of ``f`` with respect to ``v``.
    r:
        Carrying-capacity profile: largest positive zero of ``g(x, .)``.
    s:
        Hump profile: location of the maximum of ``g(x, .)`` on ``[0, r]``.
    h:
        Survival-threshold profile (smallest positive zero of ``g``); only
        meaningful for the strong-Allee family, ``None`` otherwise.
    M:
        Uniform upper bound for ``r`` (used by the a-priori bounds).
    poly:
        Ascending coefficients of ``g`` in ``v`` when ``g`` is an
        ``x``-independent polynomial; enables closed-form landmark and
        Lipschitz computations.  ``None`` for general laws.
    """

    kind: GrowthKind
    g: GrowthFn
    f_v: GrowthFn
    r: ProfileFn
    s: ProfileFn
    h: ProfileFn | None
    M: float
    poly: tuple[float, ...] | None = None
    _slope_cache: dict[int, float] = dataclasses.field(
        default_factory=dict, repr=False, compare=False
    )

    def f(self, x: ScalarOrArray, v: ScalarOrArray) -> ScalarOrArray:
        """Density growth rate ``f(x, v) = v * g(x, v)``."""
        return v * self.g(x, v)

    def F(self, x: ScalarOrArray, v: ScalarOrArray) -> ScalarOrArray:
        """Antiderivative ``F(x, v) = integral of f(x, .) from 0 to v``.

        Uses the closed form when ``g`` is polynomial in ``v`` and adaptive
        quadrature otherwise.
        """
        if self.poly is not None:
            # f = sum_k c_k v^(k+1)  =>  F = sum_k c_k v^(k+2) / (k+2)
            coeffs = [0.0, 0.0] + [c / (k + 2) for k, c in enumerate(self.poly)]
            return npoly.polyval(v, coeffs)
        xs = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(v, dtype=float))
        flat_x, flat_v = (a.ravel() for a in xs)
        out = np.empty_like(flat_v)
        for i, (xi, vi) in enumerate(zip(flat_x, flat_v)):
            out[i] = integrate.quad(lambda t: t * self.g(xi, t), 0.0, vi)[0]
        result = out.reshape(xs[0].shape)
        return float(result) if result.ndim == 0 else result

    def slope_bound(self, v_cap: float, x: np.ndarray | None = None) -> float:
        """Upper bound for ``|f_v(x, v)|`` over ``v`` in ``[0, v_cap]``.

        For polynomial laws the bound is exact (endpoints plus interior
        critical points of ``f_v``).  Otherwise a sampled bound is computed
        on a doubling ladder of caps and cached, so repeated calls during a
        long integration stay cheap.
        """
        v_cap = max(float(v_cap), 0.0)
        if self.poly is not None:
            fv = npoly.Polynomial([c * (k + 1) for k, c in enumerate(self.poly)])
            candidates = [0.0, v_cap]
            for root in fv.deriv().roots():
                if abs(root.imag) < 1e-12 and 0.0 < root.real < v_cap:
                    candidates.append(float(root.real))
            return max(abs(float(fv(c))) for c in candidates)
        rung = max(0, math.ceil(math.log2(max(v_cap, 1.0))))
        if rung not in self._slope_cache:
            xs = np.linspace(0.0, 1.0, 65) if x is None else np.asarray(x)
            vs = np.linspace(0.0, 2.0**rung, 513)
            grid = np.abs(self.f_v(xs[:, None], vs[None, :]))
            self._slope_cache[rung] = float(np.max(grid))
        return self._slope_cache[rung]


def _poly_growth(
    kind: GrowthKind,
    coeffs: tuple[float, ...],
    r: float,
    s: float,
    h: float | None,
    M: float,
) -> GrowthModel:
    g_poly = npoly.Polynomial(coeffs)
    fv_poly = npoly.Polynomial([c * (k + 1) for k, c in enumerate(coeffs)])

    def g(x: ScalarOrArray, v: ScalarOrArray) -> ScalarOrArray:
        return g_poly(np.asarray(v, dtype=float) if np.ndim(v) else v)

    def f_v(x: ScalarOrArray, v: ScalarOrArray) -> ScalarOrArray:
        return fv_poly(np.asarray(v, dtype=float) if np.ndim(v) else v)

    return GrowthModel(
        kind=kind,
        g=g,
        f_v=f_v,
        r=lambda x: r + 0.0 * np.asarray(x, dtype=float),
        s=lambda x: s + 0.0 * np.asarray(x, dtype=float),
        h=None if h is None else (lambda x: h + 0.0 * np.asarray(x, dtype=float)),
        M=M,
        poly=coeffs,
    )


def strong_allee_cubic(r: float = 1.0, h: float = 0.4, scale: float = 1.0) -> GrowthModel:
    """Cubic strong-Allee growth ``f(v) = scale * v (r - v)(v - h)``.

    The per-capita rate ``g(v) = scale (r - v)(v - h)`` is negative below the
    survival threshold ``h``, positive between ``h`` and the carrying
    capacity ``r``, and negative above ``r``.
    """
    if not 0.0 < h < r:
        raise ValueError("strong-Allee threshold must satisfy 0 < h < r")
    coeffs = (-r * h * scale, (r + h) * scale, -scale)
    return _poly_growth(GrowthKind.STRONG_ALLEE, coeffs, r, (r + h) / 2.0, h, M=r)


def logistic(rate: float = 0.09, r: float = 1.0) -> GrowthModel:
    """Logistic growth ``f(v) = rate * v (1 - v / r)``."""
    if rate <= 0.0 or r <= 0.0:
        raise ValueError("logistic growth needs positive rate and capacity")
    coeffs = (rate, -rate / r)
    return _poly_growth(GrowthKind.LOGISTIC, coeffs, r, 0.0, None, M=r)


def custom_growth(
    g: GrowthFn,
    f_v: GrowthFn,
    r: ProfileFn,
    s: ProfileFn,
    h: ProfileFn | None = None,
    M: float | None = None,
    kind: GrowthKind = GrowthKind.CUSTOM,
) -> GrowthModel:
    """Wrap user-supplied callables into a :class:`GrowthModel`.

    ``M`` defaults to the sampled maximum of ``r`` over ``[0, 1]`` scaled up
    by 10%; pass it explicitly for domains longer than 1.
    """
    if M is None:
        M = float(np.max(r(np.linspace(0.0, 1.0, 65)))) * 1.1
    return GrowthModel(kind=kind, g=g, f_v=f_v, r=r, s=s, h=h, M=M, poly=None)


# --- geometry ----------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class RiverGeometry:
    """Channel geometry: length and the two cross-section profiles.

    ``A_d`` is the wetted cross-section carrying the drift compartment and
    ``A_b`` the bed cross-section carrying the benthic compartment.  Both
    must be strictly positive along the reach.
    """

    L: float
    A_b: ProfileFn
    A_d: ProfileFn
    homogeneous: bool

    def __post_init__(self) -> None:
        if self.L <= 0.0:
            raise ValueError("river length must be positive")
        xs = np.linspace(0.0, self.L, 257)
        if np.min(self.A_b(xs)) <= 0.0 or np.min(self.A_d(xs)) <= 0.0:
            raise ValueError("cross-section profiles must be strictly positive")

    def ratio_bd(self, x: ScalarOrArray) -> ScalarOrArray:
        """Cross-section ratio ``A_b(x) / A_d(x)`` (bed over drift)."""
        return self.A_b(x) / self.A_d(x)


def uniform_geometry(L: float, area_b: float = 1.0, area_d: float = 1.0) -> RiverGeometry:
    """Channel with constant cross sections."""
    return RiverGeometry(
        L=L,
        A_b=lambda x: area_b + 0.0 * np.asarray(x, dtype=float),
        A_d=lambda x: area_d + 0.0 * np.asarray(x, dtype=float),
        homogeneous=True,
    )


def sine_pair_geometry(L: float = 10.0) -> RiverGeometry:
    """Channel whose two cross sections oscillate out of phase.

    ``A_d(x) = sin(2x) + 2`` and ``A_b(x) = sin(2x - 10) + 2``; both stay in
    ``[1, 3]`` so the positivity requirement holds for any length.
    """
    return RiverGeometry(
        L=L,
        A_b=lambda x: np.sin(2.0 * np.asarray(x, dtype=float) - 10.0) + 2.0,
        A_d=lambda x: np.sin(2.0 * np.asarray(x, dtype=float)) + 2.0,
        homogeneous=False,
    )


# --- full specification -------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class ModelSpec:
    """Complete parameter set of the coupled drift/benthic system.

    Attributes
    ----------
    geometry, growth:
        Channel geometry and benthic growth law.
    d:
        Drift diffusion coefficient (positive).
    q:
        Drift advection speed (non-negative; downstream is ``+x``).
    mu:
        Rate at which benthic individuals re-enter the drift.
    sigma:
        Rate at which drifting individuals settle onto the bed.
    m1, m2:
        Mortality rates of the drift and benthic compartments.
    b_u, b_d:
        Dimensionless upstream/downstream boundary-loss factors.  ``0`` is a
        closed (no-flux) end, ``1`` a free-flow outlet, and large values
        approximate a lethal boundary.
    """

    geometry: RiverGeometry
    growth: GrowthModel
    d: float
    q: float
    mu: float
    sigma: float
    m1: float
    m2: float
    b_u: float = 0.0
    b_d: float = 0.0

    def __post_init__(self) -> None:
        if self.d <= 0.0:
            raise ValueError("diffusion coefficient d must be positive")
        if self.q < 0.0:
            raise ValueError("advection speed q must be non-negative")
        if self.mu <= 0.0 or self.sigma <= 0.0:
            raise ValueError("exchange rates mu and sigma must be positive")
        if self.m1 < 0.0 or self.m2 < 0.0:
            raise ValueError("mortalities must be non-negative")
        if self.b_u < 0.0 or self.b_d < 0.0:
            raise ValueError("boundary-loss factors must be non-negative")

    @property
    def alpha(self) -> float:
        """Advection-to-diffusion ratio ``q / d``."""
        return self.q / self.d

    @property
    def theta1(self) -> float:
        """Drift-to-benthic slaving factor ``mu / (sigma + m1)``."""
        return self.mu / (self.sigma + self.m1)

    def replace(self, **changes: object) -> "ModelSpec":
        """Return a copy with the given fields replaced."""
        return dataclasses.replace(self, **changes)


# --- derived quantities -------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Landmarks:
    """Extremes of the growth law used by the persistence thresholds.

    ``g_max``/``g_min`` are the largest/smallest value of the hump height
    ``g(x, s(x))`` along the reach; ``fbar_v`` is the global maximum of
    ``f_v(x, v)`` over the reach and ``v`` in ``[0, 2M]``.
    """

    g_max: float
    g_min: float
    fbar_v: float


class Regime(str, enum.Enum):
    """Exchange-rate regime of a strong-Allee model."""

    H1 = "H1"
    H2 = "H2"
    H3 = "H3"
    GAP = "Gap"


@dataclasses.dataclass(frozen=True)
class RegimeReport:
    """Regime classification together with the thresholds that define it."""

    regime: Regime
    mu1: float
    mu2: float
    mu3: float
    compactness_ok: bool
    landmarks: Landmarks


@dataclasses.dataclass(frozen=True)
class AprioriBounds:
    """Pointwise upper bounds satisfied by every bounded trajectory.

    ``u_bound`` and ``v_bound`` are callables of ``x``; ``theta1_bar`` and
    ``theta2_bar`` are the constants relating the two compartments, and
    ``theta1`` is the slaving factor for a homogeneous channel.
    """

    theta1: float
    theta1_bar: float
    theta2_bar: float
    u_bound: ProfileFn
    v_bound: ProfileFn


@dataclasses.dataclass(frozen=True)
class GapCondition:
    """Result of the drift-bound test for bistability.

    ``satisfied`` reports the sharp weighted comparison
    ``max_y e^{-alpha y} v3(y) < min_y e^{-alpha y} v4(y)``; ``bound`` is the
    sufficient drift bound on ``q / d`` implied by the unweighted extremes.
    """

    satisfied: bool
    bound: float
    weighted_max_low: float
    weighted_min_high: float


def _scan_extremum(
    fun: Callable[[float], float],
    lo: float,
    hi: float,
    n: int,
    maximize: bool,
) -> tuple[float, float]:
    """Dense scan of ``fun`` on ``[lo, hi]`` followed by a bounded polish."""
    xs = np.linspace(lo, hi, max(n, 8))
    vals = np.array([fun(float(x)) for x in xs])
    idx = int(np.argmax(vals) if maximize else np.argmin(vals))
    a = xs[max(idx - 1, 0)]
    b = xs[min(idx + 1, len(xs) - 1)]
    if a == b:
        return float(xs[idx]), float(vals[idx])
    sign = -1.0 if maximize else 1.0
    res = optimize.minimize_scalar(
        lambda x: sign * fun(float(x)), bounds=(float(a), float(b)), method="bounded",
        options={"xatol": 1e-12},
    )
    best_x, best_v = float(res.x), sign * float(res.fun)
    if (best_v > vals[idx]) != maximize and best_v != vals[idx]:
        return float(xs[idx]), float(vals[idx])
    return best_x, best_v


def derive_landmarks(
    growth: GrowthModel, n_scan: int = 1024, length: float = 1.0
) -> Landmarks:
    """Compute the growth landmarks ``g_max``, ``g_min`` and ``fbar_v``.

    Also validates, on a sampled grid, the shape assumptions the law
    declares: the carrying capacity is a zero of ``g``, the hump really is a
    maximum, and (strong-Allee only) ``g`` is negative below the threshold.

    Raises
    ------
    NonconformingGrowth
        If a sampled shape check fails.
    """
    xs = np.linspace(0.0, length, 65)
    r = np.asarray(growth.r(xs), dtype=float)
    s = np.asarray(growth.s(xs), dtype=float)
    g_at_r = np.asarray(growth.g(xs, r), dtype=float)
    if np.max(np.abs(g_at_r)) > 1e-9 * max(1.0, float(np.max(np.abs(r)))):
        raise NonconformingGrowth("g(x, r(x)) must vanish at the carrying capacity")
    peak = np.asarray(growth.g(xs, s), dtype=float)
    probe = np.linspace(0.0, 2.0 * growth.M, 33)[None, :]
    if np.any(np.asarray(growth.g(xs[:, None], probe)) > peak[:, None] + 1e-9):
        raise NonconformingGrowth("g(x, .) must attain its maximum at s(x)")
    if growth.h is not None:
        h = np.asarray(growth.h(xs), dtype=float)
        below = np.asarray(growth.g(xs, 0.5 * h), dtype=float)
        if np.any(below >= 0.0):
            raise NonconformingGrowth("strong-Allee g must be negative below h")
    if growth.poly is not None:
        g_max = g_min = float(peak[0])
        fv_poly = npoly.Polynomial([c * (k + 1) for k, c in enumerate(growth.poly)])
        candidates = [0.0, 2.0 * growth.M]
        for root in np.atleast_1d(fv_poly.deriv().roots()):
            if abs(root.imag) < 1e-12 and 0.0 <= root.real <= 2.0 * growth.M:
                candidates.append(float(root.real))
        fbar_v = max(float(fv_poly(c)) for c in candidates)
    else:
        def hump(x: float) -> float:
            return float(growth.g(x, float(growth.s(x))))

        _, g_max = _scan_extremum(hump, 0.0, length, n_scan, maximize=True)
        _, g_min = _scan_extremum(hump, 0.0, length, n_scan, maximize=False)
        xs_f = np.linspace(0.0, length, 129)
        vs_f = np.linspace(0.0, 2.0 * growth.M, n_scan)
        fbar_v = float(np.max(growth.f_v(xs_f[:, None], vs_f[None, :])))
    return Landmarks(g_max=g_max, g_min=g_min, fbar_v=fbar_v)


def classify_regime(spec: ModelSpec, n_scan: int = 1024) -> RegimeReport:
    """Classify the exchange-rate regime of a strong-Allee model.

    The thresholds are
    ``mu1 = mu2 = (g_max - m2)(sigma + m1) / m1`` (infinite when ``m1 = 0``,
    in which case only the low-exchange regime remains distinguishable) and
    ``mu3 = g_min - m2``.  ``H1`` is ``mu > mu1`` (extinction dominates),
    ``H3`` is ``mu < mu3`` (coexistence from arbitrarily low positive data),
    ``H2`` the bistable range in between, and ``Gap`` the boundary set where
    none of the strict inequalities holds.
    """
    lm = derive_landmarks(spec.growth, n_scan=n_scan, length=spec.geometry.L)
    if spec.m1 > 0.0:
        mu1 = (lm.g_max - spec.m2) * (spec.sigma + spec.m1) / spec.m1
        mu2 = (lm.g_min - spec.m2) * (spec.sigma + spec.m1) / spec.m1
    else:
        mu1 = math.inf
        mu2 = math.inf
    mu3 = lm.g_min - spec.m2
    if spec.mu > mu1:
        regime = Regime.H1
    elif mu3 < spec.mu < mu2:
        regime = Regime.H2
    elif spec.mu < mu3:
        regime = Regime.H3
    else:
        regime = Regime.GAP
    return RegimeReport(
        regime=regime,
        mu1=mu1,
        mu2=mu2,
        mu3=mu3,
        compactness_ok=lm.fbar_v < spec.m2 + spec.mu,
        landmarks=lm,
    )


def level_roots(growth: GrowthModel, level: float, x: float = 0.0) -> tuple[float, float]:
    """Solve ``g(x, v) = level`` for the two roots inside ``(h(x), r(x))``.

    Parameters
    ----------
    growth:
        A strong-Allee law (the bracketing uses the threshold/hump/capacity
        triple).
    level:
        Height of the level line; must sit strictly between ``0`` and the
        hump height for two roots to exist.
    x:
        Position along the reach at which to evaluate the profiles.

    Returns
    -------
    tuple
        ``(lower, upper)`` with ``h < lower < s < upper < r``.

    Raises
    ------
    NoRoots
        If the level line passes above the hump or below the axis.
    DoubleRoot
        If the level line is exactly tangent to the hump.
    """
    if growth.h is None:
        raise ValueError("level_roots needs a strong-Allee law with a threshold")
    h = float(growth.h(x))
    s = float(growth.s(x))
    r = float(growth.r(x))
    peak = float(growth.g(x, s))
    if level == peak:
        raise DoubleRoot(f"level {level} is tangent to the hump at v = {s}")
    if level > peak:
        raise NoRoots(f"level {level} exceeds the hump height {peak}")
    if level <= 0.0:
        raise NoRoots(f"level {level} has no roots between threshold and capacity")
    lower = optimize.brentq(lambda v: float(growth.g(x, v)) - level, h, s, xtol=1e-12)
    upper = optimize.brentq(lambda v: float(growth.g(x, v)) - level, s, r, xtol=1e-12)
    return float(lower), float(upper)


def apriori_bounds(spec: ModelSpec, n_scan: int = 1024) -> AprioriBounds:
    """A-priori pointwise bounds for bounded trajectories.

    ``theta1_bar`` bounds the drift in terms of the benthic compartment and
    ``theta2_bar`` the converse; both reduce to the slaving factors of a
    homogeneous channel.  The returned ``u_bound``/``v_bound`` callables grow
    like ``e^{alpha x}`` and dominate every trajectory that starts below
    them.
    """
    L = spec.geometry.L
    ratio = spec.geometry.ratio_bd

    def ratio_at(x: float) -> float:
        return float(ratio(x))

    if spec.geometry.homogeneous:
        rmax = ratio_at(0.0)
        rmin = rmax
    else:
        _, rmax = _scan_extremum(ratio_at, 0.0, L, n_scan, maximize=True)
        _, rmin = _scan_extremum(ratio_at, 0.0, L, n_scan, maximize=False)
    theta1_bar = rmax * spec.mu / (spec.sigma + spec.m1)
    theta2_bar = (1.0 / rmin) * spec.sigma / (spec.mu + spec.m2)
    alpha = spec.alpha
    cap_v = spec.growth.M * max(1.0, theta1_bar * theta2_bar)
    cap_u = spec.growth.M * theta1_bar

    def u_bound(x: ScalarOrArray) -> ScalarOrArray:
        return cap_u * np.exp(alpha * np.asarray(x, dtype=float))

    def v_bound(x: ScalarOrArray) -> ScalarOrArray:
        return cap_v * np.exp(alpha * np.asarray(x, dtype=float))

    return AprioriBounds(
        theta1=spec.theta1,
        theta1_bar=theta1_bar,
        theta2_bar=theta2_bar,
        u_bound=u_bound,
        v_bound=v_bound,
    )


def bistability_gap_condition(spec: ModelSpec, n_scan: int = 1024) -> GapCondition:
    """Test the drift bound under which two coexistence states coexist.

    The two level roots ``v3(x) < v4(x)`` of ``g`` at height
    ``m2 + m1 mu / (sigma + m1)`` must stay separated after weighting by
    ``e^{-alpha x}``; the report also carries the sufficient bound
    ``(1/L) ln(min v4 / max v3)`` on ``q / d``.

    Raises
    ------
    RegimeMismatch
        If the growth is not strong-Allee, the channel is not homogeneous,
        or the level roots do not exist (high-exchange regime).
    """
    if spec.growth.kind is not GrowthKind.STRONG_ALLEE:
        raise RegimeMismatch("the bistability bound needs a strong-Allee law")
    if not spec.geometry.homogeneous:
        raise RegimeMismatch("the bistability bound needs uniform cross sections")
    level = spec.m2 + spec.m1 * spec.mu / (spec.sigma + spec.m1)
    L = spec.geometry.L
    alpha = spec.alpha
    try:
        if spec.growth.poly is not None:
            v3, v4 = level_roots(spec.growth, level, 0.0)

            def low(y: float) -> float:
                return v3

            def high(y: float) -> float:
                return v4
        else:
            def low(y: float) -> float:
                return level_roots(spec.growth, level, y)[0]

            def high(y: float) -> float:
                return level_roots(spec.growth, level, y)[1]

            v3 = max(low(float(y)) for y in np.linspace(0.0, L, 65))
            v4 = min(high(float(y)) for y in np.linspace(0.0, L, 65))
    except (NoRoots, DoubleRoot) as exc:
        raise RegimeMismatch(
            "the level roots defining the bistable pair do not exist here"
        ) from exc
    _, wmax = _scan_extremum(
        lambda y: math.exp(-alpha * y) * low(y), 0.0, L, n_scan, maximize=True
    )
    _, wmin = _scan_extremum(
        lambda y: math.exp(-alpha * y) * high(y), 0.0, L, n_scan, maximize=False
    )
    return GapCondition(
        satisfied=wmax < wmin,
        bound=math.log(v4 / v3) / L,
        weighted_max_low=wmax,
        weighted_min_high=wmin,
    )
