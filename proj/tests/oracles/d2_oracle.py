"""Golden values for the D2 coefficient (alpha=1.5, d0=1).

Two independent routes, both with the tau-range cut at T=1e4 and the rest
replaced by its sin^2 -> 1/2 average:

  A. mpmath: exact inner integral mu^a C_a minus the oscillatory remainder
     beyond T written through the generalized exponential integral.
  B. numpy: fixed midpoint Riemann sum over tau in (0, 1e4] (tau = t^2 near
     the origin) and Gauss-Legendre in mu.

Run: python3 d2_oracle.py
"""
import numpy as np
from mpmath import mp, mpf, gamma, sin, pi, quad, expint, re, mpc

T = 1e4
ALPHA = 1.5


def route_a(alpha, dim):
    mp.dps = 30
    a = mpf(alpha)
    C = pi / (4 * gamma(a + 1) * sin(pi * a / 2))  # int_0^inf sin^2(u/2) u^{-a-1} du

    # int_T^inf sin^2(tau mu/2) tau^{-a-1} dtau - (1/2) T^{-a}/a
    #   = -(1/2) mu^a Re[ X^{-a} E_{a+1}(iX) ],  X = T mu
    def corr(mu):
        X = T * mu
        return -0.5 * mu**a * re(X**(-a) * expint(a + 1, mpc(0, X)))

    def inner(mu):
        return mu**a * C - corr(mu)

    if dim == 3:
        # ∫ dv = (1/2) ∫_{-1}^{1} dmu, even integrand
        edges = [mpf(0)] + [mpf(k) * 2 * pi / T for k in range(1, 4)] + [mpf(10) ** e for e in (-2, -1, 0)]
        edges = sorted(set(edges))
        main = mpf(0)
        for lo, hi in zip(edges[:-1], edges[1:]):
            main += quad(inner, [lo, hi])
        return 2 * main
    raise ValueError


def route_b(alpha, dim, n_mu=48):
    x, w = np.polynomial.legendre.leggauss(n_mu)
    mu = 0.5 * (x + 1.0)
    wm = 0.5 * w
    total = 0.0
    # tau in (0, 1]: tau = t^2, midpoint in t
    nt = 200000
    t = (np.arange(nt) + 0.5) / nt
    tau0 = t * t
    jac0 = 2.0 * t / nt
    # tau in (1, T]: midpoint with step h
    h = 2e-3
    n1 = int(round((T - 1.0) / h))
    tau1 = 1.0 + (np.arange(n1) + 0.5) * h
    p0 = tau0 ** (-alpha - 1.0) * jac0
    p1 = tau1 ** (-alpha - 1.0) * h
    for m, wmu in zip(mu, wm):
        s0 = np.sin(0.5 * tau0 * m)
        s1 = np.sin(0.5 * tau1 * m)
        inner = np.dot(s0 * s0, p0) + np.dot(s1 * s1, p1) + 0.5 * T ** (-alpha) / alpha
        total += wmu * inner
    return 2.0 * total  # ∫ dv over S^2 = ∫_0^1 dmu for an even integrand; times 2 d0


if __name__ == "__main__":
    mp.dps = 30
    a = mpf(ALPHA)
    exact = pi / (2 * (a + 1) * gamma(a + 1) * sin(pi * a / 2))
    A = route_a(ALPHA, 3)
    B = route_b(ALPHA, 3)
    print("closed form (no cutoff):", mp.nstr(exact, 17))
    print("route A (cutoff T=1e4): ", mp.nstr(A, 17))
    print("route B (Riemann sum):  ", repr(B))
    print("|A-B| =", float(abs(A - B)))
