"""Derive STO-NG expansions by least-squares fit of Slater orbitals (zeta=1).

A contracted Gaussian sum(c_i g(a_i)) best approximates a normalized Slater
orbital when the overlap <phi|chi> is maximal; for fixed exponents the optimal
coefficients solve the generalized problem c ~ M^-1 v with

    M_ij = <g_i|g_j>,   v_i = <g_i|chi>,   S = sqrt(v^T M^-1 v).

The 2s and 2p expansions share one exponent set (classic STO-NG constraint),
fitted by maximizing S_2s + S_2p.  2s contractions use s-type primitives.

Run as a script: fits N=6, prints exponents/coefficients for 1s and 2sp.
"""

import numpy as np
from scipy import integrate, optimize

# normalized radial parts; angular normalization folded into the constants
# chi_1s = pi^-1/2 exp(-r); chi_2s = (3 pi)^-1/2 r exp(-r)
# chi_2p = pi^-1/2 r exp(-r) * cos(theta)


def _s_norm(a):
    return (2.0 * a / np.pi) ** 0.75


def _p_norm(a):
    return (2.0 * a / np.pi) ** 0.75 * 2.0 * np.sqrt(a)


def overlap_gs_1s(a):
    """<g_s(a) | chi_1s>, radial quadrature."""
    f = lambda r: _s_norm(a) * np.pi ** -0.5 * np.exp(-a * r * r - r) * 4.0 * np.pi * r * r
    val, _ = integrate.quad(f, 0, 60, limit=400)
    return val


def overlap_gs_2s(a):
    """<g_s(a) | chi_2s>."""
    f = lambda r: _s_norm(a) * (3.0 * np.pi) ** -0.5 * r * np.exp(-a * r * r - r) * 4.0 * np.pi * r * r
    val, _ = integrate.quad(f, 0, 80, limit=400)
    return val


def overlap_gp_2p(a):
    """<g_p(a) | chi_2p>; angular integral of cos^2 gives 4 pi / 3."""
    f = lambda r: _p_norm(a) * np.pi ** -0.5 * r * r * np.exp(-a * r * r - r) * (4.0 * np.pi / 3.0) * r * r
    val, _ = integrate.quad(f, 0, 80, limit=400)
    return val


def gauss_overlap_ss(a, b):
    return (2.0 * np.sqrt(a * b) / (a + b)) ** 1.5


def gauss_overlap_pp(a, b):
    return (2.0 * np.sqrt(a * b) / (a + b)) ** 2.5


def _best_coeffs(M, v):
    c = np.linalg.solve(M, v)
    s2 = float(v @ c)
    return c / np.sqrt(s2), np.sqrt(s2)


def fit_1s(n, x0=None):
    def objective(logs):
        a = np.exp(logs)
        M = gauss_overlap_ss(a[:, None], a[None, :])
        v = np.array([overlap_gs_1s(ai) for ai in a])
        _, s = _best_coeffs(M, v)
        return -s

    if x0 is None:
        x0 = np.log(np.geomspace(0.06, 30.0, n))
    res = optimize.minimize(objective, x0, method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 40000, "maxfev": 40000})
    res = optimize.minimize(objective, res.x, method="Nelder-Mead",
                            options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 40000, "maxfev": 40000})
    a = np.exp(res.x)
    order = np.argsort(-a)
    a = a[order]
    M = gauss_overlap_ss(a[:, None], a[None, :])
    v = np.array([overlap_gs_1s(ai) for ai in a])
    c, s = _best_coeffs(M, v)
    return a, c, s


def fit_2sp(n, x0=None):
    def parts(a):
        Ms = gauss_overlap_ss(a[:, None], a[None, :])
        Mp = gauss_overlap_pp(a[:, None], a[None, :])
        vs = np.array([overlap_gs_2s(ai) for ai in a])
        vp = np.array([overlap_gp_2p(ai) for ai in a])
        cs, ss = _best_coeffs(Ms, vs)
        cp, sp = _best_coeffs(Mp, vp)
        return cs, cp, ss, sp

    def objective(logs):
        a = np.exp(logs)
        _, _, ss, sp = parts(a)
        return -(ss + sp)

    if x0 is None:
        x0 = np.log(np.geomspace(0.016, 11.0, n))
    res = optimize.minimize(objective, x0, method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 60000, "maxfev": 60000})
    res = optimize.minimize(objective, res.x, method="Nelder-Mead",
                            options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 60000, "maxfev": 60000})
    a = np.exp(res.x)
    order = np.argsort(-a)
    a = a[order]
    cs, cp, ss, sp = parts(a)
    return a, cs, cp, ss, sp


if __name__ == "__main__":
    np.set_printoptions(precision=10, suppress=False)
    a1, c1, s1 = fit_1s(6)
    print("1s exponents (zeta=1):", a1)
    print("1s coefficients      :", c1)
    print("1s overlap           :", s1)
    a2, cs, cp, ss, sp = fit_2sp(6)
    print("2sp exponents (zeta=1):", a2)
    print("2s coefficients       :", cs)
    print("2p coefficients       :", cp)
    print("overlaps              :", ss, sp)
