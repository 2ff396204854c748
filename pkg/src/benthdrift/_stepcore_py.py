"""Pure-Python fallback for the time-stepper inner loop.

Same contract as the compiled module: one mixed implicit/explicit step,
benthic update eliminated pointwise, one banded solve for the drift row.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded


def imex_step(lo, di, up, u, v, f_old, ratio_bd, ratio_db,
              dt, mu, sigma, m1, m2, u_out, v_out, work):
    """Advance (u, v) by one step of size dt; returns the clip magnitude."""
    n = u.shape[0]
    den = 1.0 + dt * (m2 + mu)
    elim = dt * dt * mu * sigma / den
    base = 1.0 + dt * (sigma + m1) - elim

    ab = np.zeros((3, n))
    ab[0, 1:] = -dt * up[:-1]
    ab[1, :] = base - dt * di
    ab[2, :-1] = -dt * lo[1:]
    rhs = u + dt * mu * ratio_bd * (v + dt * f_old) / den
    try:
        sol = solve_banded((1, 1), ab, rhs, overwrite_ab=True, overwrite_b=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - dominance prevents it
        raise FloatingPointError(str(exc)) from exc
    u_out[:] = sol
    v_out[:] = (v + dt * f_old + dt * sigma * ratio_db * sol) / den

    clip = 0.0
    lo_u = float(np.min(u_out)) if n else 0.0
    lo_v = float(np.min(v_out)) if n else 0.0
    worst = min(lo_u, lo_v)
    if worst < 0.0:
        clip = -worst
        np.maximum(u_out, 0.0, out=u_out)
        np.maximum(v_out, 0.0, out=v_out)
    return clip
