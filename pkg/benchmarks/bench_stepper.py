"""Benchmark: compiled stepping kernel vs. the NumPy fallback.

Times the inner IMEX update (transport solve + exchange elimination +
reaction) on identical inputs for both backends, across a range of grid
sizes, then cross-checks that the two produce the same state.

Usage::

    python3 benchmarks/bench_stepper.py [--steps 2000] [--sizes 100,400,1600]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from benthdrift import _stepcore_py
from benthdrift.discretize import Grid, assemble_transport
from benthdrift.model import ModelSpec, strong_allee_cubic, uniform_geometry

try:
    from benthdrift import _stepcore  # compiled extension

    HAVE_COMPILED = True
except ImportError:
    _stepcore = None
    HAVE_COMPILED = False


def make_spec() -> ModelSpec:
    return ModelSpec(
        geometry=uniform_geometry(10.0),
        growth=strong_allee_cubic(),
        d=0.02, q=0.11, mu=0.04, sigma=0.2,
        m1=0.02, m2=0.02, b_u=0.0, b_d=1.0,
    )


def run_kernel(module, spec: ModelSpec, n: int, steps: int, dt: float) -> tuple[float, np.ndarray]:
    """Time ``steps`` kernel calls; returns (seconds, final v)."""
    grid = Grid(n=n, L=10.0)
    operator = assemble_transport(grid, spec)
    x = grid.centers
    rng = np.random.default_rng(42)
    u = rng.random(n)
    v = rng.random(n)
    ratio_bd = np.ascontiguousarray(spec.geometry.ratio_bd(x) * np.ones(n))
    ratio_db = 1.0 / ratio_bd
    lower = np.ascontiguousarray(operator.lower)
    diag = np.ascontiguousarray(operator.diag)
    upper = np.ascontiguousarray(operator.upper)
    u_out, v_out, work = np.empty(n), np.empty(n), np.empty(2 * n)

    start = time.perf_counter()
    for _ in range(steps):
        f_old = np.ascontiguousarray(v * spec.growth.g(x, v))
        module.imex_step(
            lower, diag, upper, u, v, f_old, ratio_bd, ratio_db,
            dt, spec.mu, spec.sigma, spec.m1, spec.m2,
            u_out, v_out, work,
        )
        u, v = u_out.copy(), v_out.copy()
    return time.perf_counter() - start, v


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=2000, help="kernel calls per size")
    parser.add_argument("--sizes", default="100,400,1600",
                        help="comma-separated grid sizes")
    args = parser.parse_args()
    sizes = [int(token) for token in args.sizes.split(",")]
    spec = make_spec()
    dt = 0.05

    print(f"{'n':>6} {'python':>12} {'compiled':>12} {'speedup':>9}   agreement")
    for n in sizes:
        t_py, v_py = run_kernel(_stepcore_py, spec, n, args.steps, dt)
        per_py = t_py / args.steps * 1e6
        if HAVE_COMPILED:
            t_c, v_c = run_kernel(_stepcore, spec, n, args.steps, dt)
            per_c = t_c / args.steps * 1e6
            gap = float(np.max(np.abs(v_c - v_py)))
            print(f"{n:>6} {per_py:>9.1f} us {per_c:>9.1f} us {t_py / t_c:>8.1f}x   "
                  f"sup|dv| = {gap:.2e}")
        else:
            print(f"{n:>6} {per_py:>9.1f} us {'-':>12} {'-':>9}   compiled core not built")


if __name__ == "__main__":
    main()
