"""High-precision STO-6G fit using closed-form Slater/Gaussian overlaps.

Same objective as fit_sto_ng.py but the mixed overlaps use erfc closed forms
(no quadrature noise), and the optimum is polished with Nelder-Mead + BFGS.

    I_n(a) = int_0^inf r^n exp(-a r^2 - r) dr,  b = 1/(2 sqrt(a))
    I_2    = exp(b^2) a^-3/2 [ -b e^{-b^2}/2 + sqrt(pi)(1+2b^2)/4 erfc(b) ]
    I_4    = exp(b^2) a^-5/2 [ (-b^3/2 - 5b/4) e^{-b^2}
                               + sqrt(pi)(3 + 12 b^2 + 4 b^4)/8 erfc(b) ]
"""

import numpy as np
from scipy import optimize, special


def _i2(a):
    b = 0.5 / np.sqrt(a)
    # exp(b^2) * erfc(b) = erfcx(b), numerically stable for large b
    return a ** -1.5 * (-b / 2.0 + np.sqrt(np.pi) * (1.0 + 2.0 * b * b) / 4.0 * special.erfcx(b))


def _i3(a):
    b = 0.5 / np.sqrt(a)
    return a ** -2.0 * ((b * b + 1.0) / 2.0 - np.sqrt(np.pi) * b * (3.0 + 2.0 * b * b) / 4.0 * special.erfcx(b))


def _i4(a):
    b = 0.5 / np.sqrt(a)
    poly = 3.0 + 12.0 * b * b + 4.0 * b ** 4
    return a ** -2.5 * ((-b ** 3 / 2.0 - 5.0 * b / 4.0) + np.sqrt(np.pi) * poly / 8.0 * special.erfcx(b))


def _s_norm(a):
    return (2.0 * a / np.pi) ** 0.75


def _p_norm(a):
    return (2.0 * a / np.pi) ** 0.75 * 2.0 * np.sqrt(a)


def v_1s(a):
    return _s_norm(a) * np.pi ** -0.5 * 4.0 * np.pi * _i2(a)


def v_2s(a):
    return _s_norm(a) * (3.0 * np.pi) ** -0.5 * 4.0 * np.pi * _i3(a)


def v_2p(a):
    return _p_norm(a) * np.pi ** -0.5 * (4.0 * np.pi / 3.0) * _i4(a)


def m_ss(a):
    return (2.0 * np.sqrt(a[:, None] * a[None, :]) / (a[:, None] + a[None, :])) ** 1.5


def m_pp(a):
    return (2.0 * np.sqrt(a[:, None] * a[None, :]) / (a[:, None] + a[None, :])) ** 2.5


def _best(M, v):
    c = np.linalg.solve(M, v)
    s2 = float(v @ c)
    return c / np.sqrt(s2), np.sqrt(s2)


def _polish(objective, x0):
    res = optimize.minimize(objective, x0, method="Nelder-Mead",
                            options={"xatol": 1e-14, "fatol": 1e-16, "maxiter": 100000, "maxfev": 100000})
    res = optimize.minimize(objective, res.x, method="BFGS",
                            options={"gtol": 1e-13, "maxiter": 2000})
    res = optimize.minimize(objective, res.x, method="Nelder-Mead",
                            options={"xatol": 1e-15, "fatol": 1e-17, "maxiter": 100000, "maxfev": 100000})
    return res.x


def fit_1s(n=6, start=None):
    def obj(logs):
        a = np.exp(logs)
        _, s = _best(m_ss(a), v_1s(a))
        return -s

    x0 = np.log(start if start is not None else np.geomspace(0.065, 23.0, n)[::-1])
    x = _polish(obj, x0)
    a = np.sort(np.exp(x))[::-1]
    c, s = _best(m_ss(a), v_1s(a))
    return a, c, s


def fit_2sp(n=6, start=None):
    def obj(logs):
        a = np.exp(logs)
        _, ss = _best(m_ss(a), v_2s(a))
        _, sp = _best(m_pp(a), v_2p(a))
        return -(ss + sp)

    x0 = np.log(start if start is not None else np.geomspace(0.0486, 10.3, n)[::-1])
    x = _polish(obj, x0)
    a = np.sort(np.exp(x))[::-1]
    cs, ss = _best(m_ss(a), v_2s(a))
    cp, sp = _best(m_pp(a), v_2p(a))
    return a, cs, cp, ss, sp


if __name__ == "__main__":
    # sanity: closed forms against quadrature
    from scipy import integrate
    for a in (0.05, 1.0, 30.0):
        q2, _ = integrate.quad(lambda r: r * r * np.exp(-a * r * r - r), 0, 80, limit=400)
        q3, _ = integrate.quad(lambda r: r ** 3 * np.exp(-a * r * r - r), 0, 80, limit=400)
        q4, _ = integrate.quad(lambda r: r ** 4 * np.exp(-a * r * r - r), 0, 80, limit=400)
        print(f"a={a}: I2 {_i2(a):.13e}|{q2:.13e}  I3 {_i3(a):.13e}|{q3:.13e}  I4 {_i4(a):.13e}|{q4:.13e}")

    np.set_printoptions(precision=12)
    a1, c1, s1 = fit_1s(6, start=np.array([23.103, 4.23591, 1.185056, 0.40710, 0.158088, 0.0651095]))
    print("1s exponents   :", a1)
    print("1s coefficients:", c1)
    print("1s overlap     : %.14f" % s1)
    a2, cs, cp, ss, sp = fit_2sp(6, start=np.array([10.30867, 2.040356, 0.634142, 0.243977, 0.105960, 0.048569]))
    print("2sp exponents  :", a2)
    print("2s coefficients:", cs)
    print("2p coefficients:", cp)
    print("overlaps       : %.14f %.14f" % (ss, sp))
