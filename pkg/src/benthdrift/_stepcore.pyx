# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner loop of the time stepper.

One mixed implicit/explicit step of the coupled drift/benthic system:
the benthic update is solved pointwise and eliminated into the drift row,
which leaves a single tridiagonal solve per step.  The loop is plain C over
typed memoryviews; the Python fallback in ``_stepcore_py`` implements the
same contract.
"""

from libc.math cimport fabs


def imex_step(double[::1] lo, double[::1] di, double[::1] up,
              double[::1] u, double[::1] v, double[::1] f_old,
              double[::1] ratio_bd, double[::1] ratio_db,
              double dt, double mu, double sigma, double m1, double m2,
              double[::1] u_out, double[::1] v_out, double[::1] work):
    """Advance (u, v) by one step of size dt; returns the clip magnitude.

    ``lo``/``di``/``up`` are the transport bands by row, ``f_old`` the benthic
    density growth at the current state, ``ratio_bd`` the bed/drift
    cross-section ratio (``ratio_db`` its reciprocal).  ``work`` must have
    length ``2 n``.  Negative entries of the result are zeroed; the returned
    value is the largest magnitude removed that way.
    """
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t i
    cdef double den = 1.0 + dt * (m2 + mu)
    cdef double elim = dt * dt * mu * sigma / den
    cdef double base = 1.0 + dt * (sigma + m1) - elim
    cdef double piv, adiag, alo, rhs
    cdef double clip = 0.0
    cdef double val

    # forward sweep of the Thomas algorithm; work[0:n] holds the scaled
    # superdiagonal, work[n:2n] the transformed right-hand side
    adiag = base - dt * di[0]
    if adiag == 0.0:
        raise FloatingPointError("zero pivot in tridiagonal solve")
    work[0] = -dt * up[0] / adiag
    work[n] = (u[0] + dt * mu * ratio_bd[0] * (v[0] + dt * f_old[0]) / den) / adiag
    for i in range(1, n):
        alo = -dt * lo[i]
        piv = (base - dt * di[i]) - alo * work[i - 1]
        if piv == 0.0:
            raise FloatingPointError("zero pivot in tridiagonal solve")
        work[i] = -dt * up[i] / piv
        rhs = u[i] + dt * mu * ratio_bd[i] * (v[i] + dt * f_old[i]) / den
        work[n + i] = (rhs - alo * work[n + i - 1]) / piv

    u_out[n - 1] = work[2 * n - 1]
    for i in range(n - 2, -1, -1):
        u_out[i] = work[n + i] - work[i] * u_out[i + 1]

    for i in range(n):
        v_out[i] = (v[i] + dt * f_old[i] + dt * sigma * ratio_db[i] * u_out[i]) / den
        val = u_out[i]
        if val < 0.0:
            if -val > clip:
                clip = -val
            u_out[i] = 0.0
        val = v_out[i]
        if val < 0.0:
            if -val > clip:
                clip = -val
            v_out[i] = 0.0
    return clip
