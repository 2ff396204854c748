#!/usr/bin/env python3
"""Closed-form reference values for the test suite.

Every number asserted in the tests that is not trivially readable off the
model definition is derived here from first principles (quadratic formulas,
2x2 eigenvalue algebra, one-dimensional constant-coefficient ODE theory),
independently of the package implementation.  Run this script and paste the
printed constants into the tests; keep the derivations here auditable.

The baseline parameter set used throughout:

    g(v) = (1 - v)(v - 0.4)   (so f = v*g is a cubic)
    d = 0.02, L = 10, m1 = m2 = 0.02, sigma = 0.2, A_b = A_d = 1
"""

from mpmath import mp, mpf, sqrt, ln, exp, quad

mp.dps = 30

D = mpf("0.02")
L = mpf(10)
M1 = mpf("0.02")
M2 = mpf("0.02")
SIGMA = mpf("0.2")
R_CAP = mpf(1)  # carrying capacity of the cubic
H_THRESH = mpf("0.4")  # lower zero of g


def g(v):
    return (R_CAP - v) * (v - H_THRESH)


def f_v(v):
    # d/dv [v*g(v)] for g = (1-v)(v-0.4):  -3v^2 + 2.8v - 0.4
    return -3 * v * v + mpf("2.8") * v - mpf("0.4")


def level_roots(level):
    """Roots of g(v) = level, i.e. v^2 - 1.4v + (0.4 + level) = 0."""
    disc = mpf("0.49") - (mpf("0.4") + level)
    return mpf("0.7") - sqrt(disc), mpf("0.7") + sqrt(disc)


def show(name, value, digits=12):
    print(f"{name:36s} = {mp.nstr(mpf(value), digits)}")


print("== growth landmarks ==")
s_peak = (R_CAP + H_THRESH) / 2
show("s (argmax of g)", s_peak)
show("g_max = g_min = g(s)", g(s_peak))
# f_v is a downward parabola with vertex at v = 2.8/6 = 7/15
v_star = mpf(28) / 60
show("argmax of f_v", v_star)
show("fbar_v = f_v(7/15)", f_v(v_star))

print("\n== regime thresholds ==")
gmax = g(s_peak)
mu1 = (gmax - M2) * (SIGMA + M1) / M1
mu3 = gmax - M2
show("mu1 = mu2", mu1)
show("mu3", mu3)

print("\n== level-set roots ==")
for mu in (mpf("0.04"), mpf("0.1")):
    lev12 = M2 + mu
    lev34 = M2 + M1 * mu / (SIGMA + M1)
    print(f"  mu = {mu}:")
    show("    level m2+mu", lev12)
    if lev12 < g(s_peak):
        v1, v2 = level_roots(lev12)
        show("    v1", v1)
        show("    v2", v2)
    else:
        print("    (no roots at level m2+mu: level above the peak of g)")
    show("    level m2+m1*mu/(sigma+m1)", lev34)
    v3, v4 = level_roots(lev34)
    show("    v3", v3)
    show("    v4", v4)

print("\n== transfer-rate aggregates ==")
mu = mpf("0.04")
show("theta1_bar (mu=0.04)", mu / (SIGMA + M1))
show("theta2_bar (mu=0.04)", SIGMA / (mu + M2))
show("theta1 (mu=0.1)", mpf("0.1") / (SIGMA + M1))

print("\n== bistability gap bound (mu=0.1, q=0) ==")
_, _ = level_roots(M2 + mpf("0.1"))
v3, v4 = level_roots(M2 + M1 * mpf("0.1") / (SIGMA + M1))
show("(1/L) ln(v4/v3)", ln(v4 / v3) / L)

print("\n== constant maximal state (mu=0.04, q=0, NF/NF) ==")
mu = mpf("0.04")
_, v4c = level_roots(M2 + M1 * mu / (SIGMA + M1))
theta1 = mu / (SIGMA + M1)
show("v component (v4)", v4c)
show("u component (theta1*v4)", theta1 * v4c)

print("\n== zero-state principal eigenvalue (mu=0.04, q=0, NF/NF) ==")
# Constant modes reduce the linearization to the 2x2 matrix
#   [[-(sigma+m1), mu], [sigma, g(0)-m2-mu]]
a11 = -(SIGMA + M1)
a12 = mu
a21 = SIGMA
a22 = g(0) - M2 - mu
show("a11", a11)
show("a22", a22)
tr = a11 + a22
det = a11 * a22 - a12 * a21
lam1 = (tr + sqrt(tr * tr - 4 * det)) / 2
show("trace", tr)
show("det", det)
show("lambda1 (larger root)", lam1)

print("\n== constant-state stability numbers (mu=0.04) ==")
show("f_v(v4)", f_v(v4c))
show("m2 + m1*mu/(m1+sigma)", M2 + M1 * mu / (M1 + SIGMA))
a22s = f_v(v4c) - M2 - mu
trs = a11 + a22s
dets = a11 * a22s - a12 * a21
show("lambda1 at constant state", (trs + sqrt(trs * trs - 4 * dets)) / 2)

print("\n== zero-state eigenvalue, H1 check (mu=0.8) ==")
mu8 = mpf("0.8")
a22h = g(0) - M2 - mu8
trh = a11 + a22h
deth = a11 * a22h - mu8 * SIGMA
show("lambda1 (mu=0.8)", (trh + sqrt(trh * trh - 4 * deth)) / 2)

print("\n== critical mortality bracket (logistic p*=0.09, mu=0.04) ==")
p_star = mpf("0.09")
show("lower  p* - mu", p_star - mu)
show("upper  p* - m1*mu/(m1+sigma)", p_star - M1 * mu / (M1 + SIGMA))

print("\n== linear two-point BVP closed form (mu=0.04, q=0.11) ==")
# d w'' + q w' + p(x) - (sigma+m1) w = 0,
#   -d w'(0) + b_u q w(0) = 0,   d w'(L) + b_d q w(L) = 0,
# with p(x) = mu * e^{-alpha x} * v1 and v1 the lower root at level m2+mu.
# Particular solution c*e^{-alpha x} satisfies d*a^2 - q*a = 0 identically
# (alpha = q/d), leaving c = mu*v1/(sigma+m1) = theta1*v1.
# Homogeneous modes e^{beta x} with d b^2 + q b - (sigma+m1) = 0.
q = mpf("0.11")
b_u = mpf(0)
b_d = mpf(1)
alpha = q / D
v1c, _ = level_roots(M2 + mu)
c_part = mu * v1c / (SIGMA + M1)
disc = sqrt(q * q + 4 * D * (SIGMA + M1))
beta_p = (-q + disc) / (2 * D)
beta_m = (-q - disc) / (2 * D)
show("alpha", alpha)
show("theta1*v1 (particular amplitude)", c_part)
show("beta_plus", beta_p)
show("beta_minus", beta_m)


def w_exact_coeffs(qv, buv, bdv):
    """Fit the two homogeneous amplitudes to the Robin boundary rows."""
    al = qv / D
    cp = mu * v1c / (SIGMA + M1)
    dsc = sqrt(qv * qv + 4 * D * (SIGMA + M1))
    bp = (-qv + dsc) / (2 * D)
    bm = (-qv - dsc) / (2 * D)
    # rows: -d w'(0) + b_u q w(0) = 0 ; d w'(L) + b_d q w(L) = 0
    # w = cp e^{-al x} + A e^{bp x} + B e^{bm x}
    r0 = [-D * bp + buv * qv, -D * bm + buv * qv]
    rhs0 = -(-D * (-al) + buv * qv) * cp
    r1 = [(D * bp + bdv * qv) * exp(bp * L), (D * bm + bdv * qv) * exp(bm * L)]
    rhs1 = -(D * (-al) + bdv * qv) * cp * exp(-al * L)
    det2 = r0[0] * r1[1] - r0[1] * r1[0]
    A = (rhs0 * r1[1] - r0[1] * rhs1) / det2
    B = (r0[0] * rhs1 - rhs0 * r1[0]) / det2
    return cp, al, bp, bm, A, B


cp, al, bp, bm, A, B = w_exact_coeffs(q, b_u, b_d)
show("A (e^{beta+x} amplitude)", A)
show("B (e^{beta-x} amplitude)", B)
for xv in (mpf(0), L / 2, L):
    wv = cp * exp(-al * xv) + A * exp(bp * xv) + B * exp(bm * xv)
    show(f"w({mp.nstr(xv, 3)})", wv)

print("\n== energy closed form at (u=0, v=c), alpha=0 ==")
# E = -(mu/sigma) * L * [F(c) - (mu+m2)/2 * c^2],  F(v) = -v^4/4 + 1.4 v^3/3 - 0.2 v^2
for cc, muv in ((mpf("0.5"), mpf("0.3")),):
    F = -(cc**4) / 4 + mpf("1.4") * cc**3 / 3 - mpf("0.2") * cc * cc
    show("F(0.5)", F)
    show("E(0, 0.5; mu=0.3, q=0)", -(muv / SIGMA) * L * (F - (muv + M2) / 2 * cc * cc))

print("\n== psp threshold (global extinction) ==")
fbv = f_v(v_star)
show("max{mu1, fbar_v - m2}", max(mu1, fbv - M2))
