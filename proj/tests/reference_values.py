#!/usr/bin/env python3
# Regenerates the reference constants frozen into the C++ test sources.
# Every value is computed from first principles here, independently of the
# library implementation, and printed with 17 significant digits.
#
# Run:  python3 tests/reference_values.py

import math
from mpmath import mp, mpf, mpc, sqrt, log, tanh, cosh, sinh, sin, zeta, pi, factorial

mp.dps = 40


def out(name, value):
    print(f"{name:42s} = {mp.nstr(mpf(value), 17, strip_zeros=False)}")


print("# dispersive pairing model (relativistic dispersion + constant pairing)")
def wick(m, kappa, p2):
    h = sqrt(p2 + m * m) + kappa
    k = mpf(kappa)
    G = k / h
    root = sqrt(1 - G * G)
    c = sqrt(mpf(1) / 2 + 1 / (2 * root))
    u = c
    v = -c * G / (1 + root)
    E = sqrt(h * h - k * k)
    return h, k, G, E, u, v

h, k, G, E, u, v = wick(1, 3, 0)
out("wick.m1k3.p0.h", h)
out("wick.m1k3.p0.E", E)          # sqrt(7)
out("wick.m1k3.p0.u", u)
out("wick.m1k3.p0.v", v)
out("wick.m1k3.p0.u2_minus_v2", u * u - v * v)
h, k, G, E, u, v = wick(1, 3, 1)
out("wick.m1k3.p100.E", E)
out("wick.m1k3.p100.u", u)
out("wick.m1k3.p100.v", v)

print()
print("# pairing-gap model (quadratic dispersion + gap)")
def bcs(eps, delta):
    eps = mpf(eps) if not isinstance(eps, mpc) else eps
    E = sqrt(eps * eps + abs(delta) ** 2)
    den = sqrt((E - eps) ** 2 + abs(delta) ** 2)
    return E, delta / den, (E - eps) / den

E, u, v = bcs(3, mpf(4))
out("bcs.e3d4.E", E)
out("bcs.e3d4.u", u)
out("bcs.e3d4.v", v)
E, u, v = bcs(-3, mpf(4))
out("bcs.em3d4.u", u)              # branch below the Fermi surface
out("bcs.em3d4.v", v)
E, u, v = bcs(2, mpc(3, 4))
out("bcs.e2d3p4i.E", E)
out("bcs.e2d3p4i.abs_u", abs(u))
out("bcs.e2d3p4i.v", v)

print()
print("# squeezed one-mode quantities")
xi = mpf(1) / 2
out("squeeze.xi05.cosh", cosh(xi))
out("squeeze.xi05.sinh", sinh(xi))
out("squeeze.xi05.tanh", tanh(xi))
out("squeeze.xi05.vac_overlap", (1 - tanh(xi) ** 2) ** mpf("0.25"))
t = tanh(xi) / 2                    # nu/(2 mu)
out("squeeze.xi05.t", t)
out("squeeze.xi05.amp2_over_amp0", -t * sqrt(factorial(2)) / 1)
out("squeeze.xi05.amp4_over_amp0", t * t * sqrt(factorial(4)) / 2)
out("squeeze.xi05.renorm_exponent", log(1 - tanh(xi) ** 2) / 4)

print()
print("# occupation-moment series at t = nu/(2 mu)")
def occ_moment(t, power, terms=4000):
    t = mpf(t)
    s = mpf(0)
    for N in range(terms):
        w = t ** (2 * N) * factorial(2 * N) / factorial(N) ** 2
        s += w * (2 * N) ** power
    return (1 - 4 * t * t) ** mpf("0.5") * s

for tv in ("0.1", "0.3", "0.45"):
    out(f"occ.t{tv}.norm", occ_moment(tv, 0))
out("occ.t0.3.mean", occ_moment("0.3", 1))        # = 4t^2/(1-4t^2) = 0.5625
out("occ.t0.3.mean_closed", mpf("0.36") / mpf("0.64"))
out("occ.t0.3.second_moment", occ_moment("0.3", 2))
out("occ.t0.45.mean", occ_moment("0.45", 1))
out("occ.t0.45.mean_closed", 4 * mpf("0.45") ** 2 / (1 - 4 * mpf("0.45") ** 2))

print()
print("# series and products")
out("zeta2", zeta(2))
out("zeta3", zeta(3))
out("harmonic.H10000", sum(mpf(1) / j for j in range(1, 10001)))
out("prod.one_plus_invsq", sinh(pi) / pi)          # prod_{k>=1} (1 + 1/k^2)
out("log_inv_sqrt2", log(1 / sqrt(2)))

print()
print("# two-level pairing rotation (alpha = cos xi, beta = sin xi)")
out("pair.xi_pi6.cos", cosh(0) * sqrt(3) / 2)      # sqrt(3)/2
out("pair.xi_pi6.sin", mpf(1) / 2)
out("one_over_sqrt2", 1 / sqrt(2))

print()
print("# time-dependent 4x4 generator, eps = 0, f(tau) = cos(tau)")
# A(tau) = cos(tau) X with X^2 = 1 commuting at unequal times, so
# U(0,1) = exp(-i sin(1) X) and |V1| = |sin(sin 1)|.
out("qed.eps0_fcos.theta", sin(1))
out("qed.eps0_fcos.absV1", sin(sin(1)))

print()
print("# lattice shell sums of v_p^2, quadratic-pairing model, m = kappa = 1")
def wick_v2(m, kappa, p2):
    h = math.sqrt(p2 + m * m) + kappa
    G = kappa / h
    root = math.sqrt(1 - G * G)
    c2 = 0.5 + 1 / (2 * root)
    v = -math.sqrt(c2) * G / (1 + root)
    return v * v

def shell_sum(R, m=1, kappa=1):
    terms = []
    R2 = R * R
    for x in range(-R, R + 1):
        for y in range(-R, R + 1):
            zmax = R2 - x * x - y * y
            if zmax < 0:
                continue
            zb = int(math.isqrt(zmax))
            for z in range(-zb, zb + 1):
                terms.append(wick_v2(m, kappa, x * x + y * y + z * z))
    return math.fsum(terms), len(terms)

for R in (3, 10, 20, 40):
    s, npts = shell_sum(R)
    print(f"{f'wickshell.R{R}.sum':42s} = {s:.17g}")
    print(f"{f'wickshell.R{R}.count':42s} = {npts}")
