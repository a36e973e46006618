"""Minimal-basis RHF engine used to generate the FCIDUMP fixtures.

Gaussian integrals follow McMurchie-Davidson (Hermite expansion + Boys
recursion), restricted to s and p shells, with the hot ERI loops compiled by
numba.  The SCF is closed-shell RHF with DIIS.  None of this ships inside the
package; it exists so the fixture inputs are reproducible from scratch.

STO-6G data: the zeta=1 expansions below were refitted from first principles
(tools/fit_sto_ng2.py) and validated against the hydrogen row; element
exponents are the zeta=1 values scaled by standard molecular zeta**2.
"""

import numpy as np
from numba import njit

BOHR_PER_ANGSTROM = 1.0 / 0.52917721092

# zeta=1 STO-6G expansions (least-squares Slater fits, N=6)
STO6G_1S_EXP = np.array([23.10303149, 4.235915534, 1.185056519,
                         0.4070988982, 0.1580884151, 0.06510953954])
STO6G_1S_COEF = np.array([0.00916359628, 0.04936149294, 0.16853830490,
                          0.37056279970, 0.41649152980, 0.13033408410])
STO6G_2SP_EXP = np.array([10.308968273691, 2.040378740588, 0.634147669834,
                          0.24397948345, 0.105960181437, 0.048569162995])
STO6G_2S_COEF = np.array([-0.013252526351, -0.046991613743, -0.033786114795,
                          0.250237456904, 0.595119042871, 0.240709063208])
STO6G_2P_COEF = np.array([0.003759595873, 0.037678931594, 0.173894534722,
                          0.418034506754, 0.425862813785, 0.101709714345])

# standard molecular scale factors (zeta) per element and shell
ZETA = {
    "H": {"1s": 1.24},
    "C": {"1s": 5.67, "2sp": 1.72},
    "N": {"1s": 6.67, "2sp": 1.95},
    "O": {"1s": 7.66, "2sp": 2.25},
}
Z_OF = {"H": 1, "C": 6, "N": 7, "O": 8}


class Shell:
    def __init__(self, center, l, exps, coefs):
        self.center = np.asarray(center, float)
        self.l = int(l)
        self.exps = np.asarray(exps, float)
        # fold primitive norms into the contraction
        if l == 0:
            norms = (2.0 * self.exps / np.pi) ** 0.75
        else:
            norms = (2.0 * self.exps / np.pi) ** 0.75 * 2.0 * np.sqrt(self.exps)
        self.coefs = np.asarray(coefs, float) * norms
        self.nfun = 1 if l == 0 else 3


def build_basis(atoms):
    """atoms: list of (symbol, xyz_bohr). Returns list of shells, AO labels."""
    shells = []
    labels = []
    for sym, xyz in atoms:
        z1 = ZETA[sym]["1s"]
        shells.append(Shell(xyz, 0, STO6G_1S_EXP * z1 * z1, STO6G_1S_COEF))
        labels.append(f"{sym} 1s")
        if "2sp" in ZETA[sym]:
            z2 = ZETA[sym]["2sp"]
            shells.append(Shell(xyz, 0, STO6G_2SP_EXP * z2 * z2, STO6G_2S_COEF))
            labels.append(f"{sym} 2s")
            shells.append(Shell(xyz, 1, STO6G_2SP_EXP * z2 * z2, STO6G_2P_COEF))
            labels.extend([f"{sym} 2p{ax}" for ax in "xyz"])
    return shells, labels


@njit(cache=True)
def _boys(n_max, x, out):
    """Fill out[0..n_max] with Boys F_n(x); series + downward recursion."""
    if x < 1e-13:
        for n in range(n_max + 1):
            out[n] = 1.0 / (2.0 * n + 1.0)
        return
    if x > 35.0:
        # asymptotic F_n ~ (2n-1)!! / (2x)^n * 0.5*sqrt(pi/x); exp(-x) negligible
        out[n_max] = 0.5 * np.sqrt(np.pi / x)
        dd = 1.0
        for k in range(1, n_max + 1):
            dd *= (2.0 * k - 1.0) / (2.0 * x)
        out[n_max] *= dd
    else:
        # Kummer series at the highest order
        term = 1.0 / (2.0 * n_max + 1.0)
        acc = term
        k = 1
        while True:
            term *= 2.0 * x / (2.0 * n_max + 2.0 * k + 1.0)
            acc += term
            if term < 1e-17 * acc:
                break
            k += 1
        out[n_max] = acc * np.exp(-x)
    emx = np.exp(-x)
    for n in range(n_max - 1, -1, -1):
        out[n] = (2.0 * x * out[n + 1] + emx) / (2.0 * n + 1.0)


@njit(cache=True)
def _e_table(li, lj, a, b, q):
    """Hermite expansion coefficients E[i, j, t] for 1D Gaussians, q = Ax - Bx."""
    p = a + b
    mu = a * b / p
    tmax = li + lj
    E = np.zeros((li + 1, lj + 1, tmax + 2))
    E[0, 0, 0] = np.exp(-mu * q * q)
    pa = -b * q / p
    pb = a * q / p
    for i in range(1, li + 1):
        for t in range(i + 1):
            val = pa * E[i - 1, 0, t] + (t + 1) * E[i - 1, 0, t + 1]
            if t > 0:
                val += E[i - 1, 0, t - 1] / (2.0 * p)
            E[i, 0, t] = val
    for j in range(1, lj + 1):
        for i in range(li + 1):
            for t in range(i + j + 1):
                val = pb * E[i, j - 1, t] + (t + 1) * E[i, j - 1, t + 1]
                if t > 0:
                    val += E[i, j - 1, t - 1] / (2.0 * p)
                E[i, j, t] = val
    return E


@njit(cache=True)
def _r_table(nmax, p, dx, dy, dz):
    """Hermite Coulomb tensor R[t, u, v] at auxiliary order 0."""
    r2 = dx * dx + dy * dy + dz * dz
    F = np.zeros(nmax + 1)
    _boys(nmax, p * r2, F)
    R = np.zeros((nmax + 1, nmax + 1, nmax + 1, nmax + 1))
    scale = 1.0
    for n in range(nmax + 1):
        R[n, 0, 0, 0] = scale * F[n]
        scale *= -2.0 * p
    for total in range(1, nmax + 1):
        for n in range(nmax - total, -1, -1):
            for t in range(total + 1):
                for u in range(total - t + 1):
                    v = total - t - u
                    if t > 0:
                        val = dx * R[n + 1, t - 1, u, v]
                        if t > 1:
                            val += (t - 1) * R[n + 1, t - 2, u, v]
                    elif u > 0:
                        val = dy * R[n + 1, t, u - 1, v]
                        if u > 1:
                            val += (u - 1) * R[n + 1, t, u - 2, v]
                    else:
                        val = dz * R[n + 1, t, u, v - 1]
                        if v > 1:
                            val += (v - 1) * R[n + 1, t, u, v - 2]
                    R[n, t, u, v] = val
    return R[0]


# cartesian components per angular momentum: l=0 -> [(0,0,0)]; l=1 -> x,y,z
@njit(cache=True)
def _comps(l):
    if l == 0:
        out = np.zeros((1, 3), dtype=np.int64)
    else:
        out = np.zeros((3, 3), dtype=np.int64)
        out[0, 0] = 1
        out[1, 1] = 1
        out[2, 2] = 1
    return out


@njit(cache=True)
def _overlap_kinetic_shell(la, A, ea, ca, lb, B, eb, cb):
    na = 1 if la == 0 else 3
    nb = 1 if lb == 0 else 3
    S = np.zeros((na, nb))
    T = np.zeros((na, nb))
    compa = _comps(la)
    compb = _comps(lb)
    for ia in range(ea.shape[0]):
        a = ea[ia]
        for ib in range(eb.shape[0]):
            b = eb[ib]
            p = a + b
            pref = ca[ia] * cb[ib] * (np.pi / p) ** 1.5
            Ex = _e_table(la, lb + 2, a, b, A[0] - B[0])
            Ey = _e_table(la, lb + 2, a, b, A[1] - B[1])
            Ez = _e_table(la, lb + 2, a, b, A[2] - B[2])
            Etabs = (Ex, Ey, Ez)
            for ka in range(na):
                for kb in range(nb):
                    s1 = np.zeros(3)
                    t1 = np.zeros(3)
                    for d in range(3):
                        i = compa[ka, d]
                        j = compb[kb, d]
                        E = Etabs[d]
                        s1[d] = E[i, j, 0]
                        tt = b * (2.0 * j + 1.0) * E[i, j, 0] - 2.0 * b * b * E[i, j + 2, 0]
                        if j >= 2:
                            tt -= 0.5 * j * (j - 1.0) * E[i, j - 2, 0]
                        t1[d] = tt
                    S[ka, kb] += pref * s1[0] * s1[1] * s1[2]
                    T[ka, kb] += pref * (t1[0] * s1[1] * s1[2] + s1[0] * t1[1] * s1[2] + s1[0] * s1[1] * t1[2])
    return S, T


@njit(cache=True)
def _nuclear_shell(la, A, ea, ca, lb, B, eb, cb, zs, coords):
    na = 1 if la == 0 else 3
    nb = 1 if lb == 0 else 3
    V = np.zeros((na, nb))
    compa = _comps(la)
    compb = _comps(lb)
    lsum = la + lb
    for ia in range(ea.shape[0]):
        a = ea[ia]
        for ib in range(eb.shape[0]):
            b = eb[ib]
            p = a + b
            P = (a * A + b * B) / p
            pref = ca[ia] * cb[ib] * 2.0 * np.pi / p
            Ex = _e_table(la, lb, a, b, A[0] - B[0])
            Ey = _e_table(la, lb, a, b, A[1] - B[1])
            Ez = _e_table(la, lb, a, b, A[2] - B[2])
            for ic in range(zs.shape[0]):
                R = _r_table(lsum, p, P[0] - coords[ic, 0], P[1] - coords[ic, 1], P[2] - coords[ic, 2])
                for ka in range(na):
                    for kb in range(nb):
                        acc = 0.0
                        i1 = compa[ka, 0]
                        j1 = compb[kb, 0]
                        i2 = compa[ka, 1]
                        j2 = compb[kb, 1]
                        i3 = compa[ka, 2]
                        j3 = compb[kb, 2]
                        for t in range(i1 + j1 + 1):
                            for u in range(i2 + j2 + 1):
                                for v in range(i3 + j3 + 1):
                                    acc += Ex[i1, j1, t] * Ey[i2, j2, u] * Ez[i3, j3, v] * R[t, u, v]
                        V[ka, kb] -= zs[ic] * pref * acc
    return V


@njit(cache=True)
def _eri_shell(la, A, ea, ca, lb, B, eb, cb, lc, C, ec, cc, ld, D, ed, cd):
    na = 1 if la == 0 else 3
    nb = 1 if lb == 0 else 3
    nc = 1 if lc == 0 else 3
    nd = 1 if ld == 0 else 3
    out = np.zeros((na, nb, nc, nd))
    compa = _comps(la)
    compb = _comps(lb)
    compc = _comps(lc)
    compd = _comps(ld)
    lab = la + lb
    lcd = lc + ld
    for ia in range(ea.shape[0]):
        a = ea[ia]
        for ib in range(eb.shape[0]):
            b = eb[ib]
            p = a + b
            P = (a * A + b * B) / p
            E1x = _e_table(la, lb, a, b, A[0] - B[0])
            E1y = _e_table(la, lb, a, b, A[1] - B[1])
            E1z = _e_table(la, lb, a, b, A[2] - B[2])
            cab = ca[ia] * cb[ib]
            for ic in range(ec.shape[0]):
                c = ec[ic]
                for idd in range(ed.shape[0]):
                    d = ed[idd]
                    q = c + d
                    Q = (c * C + d * D) / q
                    alpha = p * q / (p + q)
                    E2x = _e_table(lc, ld, c, d, C[0] - D[0])
                    E2y = _e_table(lc, ld, c, d, C[1] - D[1])
                    E2z = _e_table(lc, ld, c, d, C[2] - D[2])
                    R = _r_table(lab + lcd, alpha, P[0] - Q[0], P[1] - Q[1], P[2] - Q[2])
                    pref = cab * cc[ic] * cd[idd] * 2.0 * np.pi ** 2.5 / (p * q * np.sqrt(p + q))
                    for ka in range(na):
                        i1 = compa[ka, 0]
                        i2 = compa[ka, 1]
                        i3 = compa[ka, 2]
                        for kb in range(nb):
                            j1 = compb[kb, 0]
                            j2 = compb[kb, 1]
                            j3 = compb[kb, 2]
                            for kc in range(nc):
                                k1 = compc[kc, 0]
                                k2 = compc[kc, 1]
                                k3 = compc[kc, 2]
                                for kd in range(nd):
                                    m1 = compd[kd, 0]
                                    m2 = compd[kd, 1]
                                    m3 = compd[kd, 2]
                                    acc = 0.0
                                    for t in range(i1 + j1 + 1):
                                        for u in range(i2 + j2 + 1):
                                            for v in range(i3 + j3 + 1):
                                                e1 = E1x[i1, j1, t] * E1y[i2, j2, u] * E1z[i3, j3, v]
                                                if e1 == 0.0:
                                                    continue
                                                for tt in range(k1 + m1 + 1):
                                                    for uu in range(k2 + m2 + 1):
                                                        for vv in range(k3 + m3 + 1):
                                                            e2 = E2x[k1, m1, tt] * E2y[k2, m2, uu] * E2z[k3, m3, vv]
                                                            if e2 == 0.0:
                                                                continue
                                                            sign = 1.0 if (tt + uu + vv) % 2 == 0 else -1.0
                                                            acc += e1 * e2 * sign * R[t + tt, u + uu, v + vv]
                                    out[ka, kb, kc, kd] += pref * acc
    return out


def integrals(shells):
    nao = sum(sh.nfun for sh in shells)
    offs = np.cumsum([0] + [sh.nfun for sh in shells])
    S = np.zeros((nao, nao))
    T = np.zeros((nao, nao))
    for i, shi in enumerate(shells):
        for j, shj in enumerate(shells):
            if j > i:
                continue
            s, t = _overlap_kinetic_shell(shi.l, shi.center, shi.exps, shi.coefs,
                                          shj.l, shj.center, shj.exps, shj.coefs)
            S[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = s
            T[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = t
            S[offs[j]:offs[j + 1], offs[i]:offs[i + 1]] = s.T
            T[offs[j]:offs[j + 1], offs[i]:offs[i + 1]] = t.T
    return S, T, offs


def nuclear(shells, atoms, offs):
    nao = offs[-1]
    zs = np.array([float(Z_OF[sym]) for sym, _ in atoms])
    coords = np.array([xyz for _, xyz in atoms], dtype=float)
    V = np.zeros((nao, nao))
    for i, shi in enumerate(shells):
        for j, shj in enumerate(shells):
            if j > i:
                continue
            v = _nuclear_shell(shi.l, shi.center, shi.exps, shi.coefs,
                               shj.l, shj.center, shj.exps, shj.coefs, zs, coords)
            V[offs[i]:offs[i + 1], offs[j]:offs[j + 1]] = v
            V[offs[j]:offs[j + 1], offs[i]:offs[i + 1]] = v.T
    return V


def eri(shells, offs):
    nao = offs[-1]
    G = np.zeros((nao, nao, nao, nao))
    ns = len(shells)
    for i in range(ns):
        for j in range(i + 1):
            for k in range(ns):
                for l in range(k + 1):
                    if (i * (i + 1) // 2 + j) < (k * (k + 1) // 2 + l):
                        continue
                    shi, shj, shk, shl = shells[i], shells[j], shells[k], shells[l]
                    block = _eri_shell(shi.l, shi.center, shi.exps, shi.coefs,
                                       shj.l, shj.center, shj.exps, shj.coefs,
                                       shk.l, shk.center, shk.exps, shk.coefs,
                                       shl.l, shl.center, shl.exps, shl.coefs)
                    for a in range(shi.nfun):
                        for b in range(shj.nfun):
                            for c in range(shk.nfun):
                                for d in range(shl.nfun):
                                    val = block[a, b, c, d]
                                    p0, q0 = offs[i] + a, offs[j] + b
                                    r0, s0 = offs[k] + c, offs[l] + d
                                    for (x, y) in ((p0, q0), (q0, p0)):
                                        for (z, w) in ((r0, s0), (s0, r0)):
                                            G[x, y, z, w] = val
                                            G[z, w, x, y] = val
    return G


def nuclear_repulsion(atoms):
    e = 0.0
    for i, (si, xi) in enumerate(atoms):
        for j, (sj, xj) in enumerate(atoms):
            if j <= i:
                continue
            e += Z_OF[si] * Z_OF[sj] / np.linalg.norm(np.asarray(xi) - np.asarray(xj))
    return e


def rhf(atoms, n_electrons, max_iter=200, conv=1e-12, verbose=False):
    """Closed-shell RHF. Returns dict with energies, MO data, integrals."""
    assert n_electrons % 2 == 0
    shells, labels = build_basis(atoms)
    S, T, offs = integrals(shells)
    # renormalize contracted AOs exactly
    norm = 1.0 / np.sqrt(np.diag(S))
    for i, shi in enumerate(shells):
        shi.coefs = shi.coefs * norm[offs[i]]
    S, T, offs = integrals(shells)
    V = nuclear(shells, atoms, offs)
    G = eri(shells, offs)
    H = T + V
    enuc = nuclear_repulsion(atoms)
    nocc = n_electrons // 2

    w, U = np.linalg.eigh(S)
    X = U @ np.diag(w ** -0.5) @ U.T

    # Generalized Wolfsberg-Helmholz initial Fock.  A bare core-Hamiltonian
    # guess sends aufbau occupation into a symmetry-broken stationary state
    # for N2 (0.72 Ha above the ground solution, no pi degeneracy); the GWH
    # guess converges every fixture to the symmetric ground solution.
    hd = np.diag(H)
    F = 0.5 * 1.75 * (hd[:, None] + hd[None, :]) * S
    np.fill_diagonal(F, hd)
    damps = []
    errs = []
    e_old = 0.0
    for it in range(max_iter):
        Fp = X @ F @ X
        eps, Cp = np.linalg.eigh(Fp)
        Cmo = X @ Cp
        Cocc = Cmo[:, :nocc]
        D = Cocc @ Cocc.T
        J = np.einsum("pqrs,rs->pq", G, D)
        K = np.einsum("prqs,rs->pq", G, D)
        F = H + 2.0 * J - K
        e_el = float(np.sum(D * (H + F)))
        err = F @ D @ S - S @ D @ F
        errs.append(err)
        damps.append(F.copy())
        if len(damps) > 8:
            damps.pop(0)
            errs.pop(0)
        if verbose:
            print(f"  iter {it:3d}  E = {e_el + enuc:.12f}  |err| = {np.abs(err).max():.2e}")
        if abs(e_el - e_old) < conv and np.abs(err).max() < 1e-9:
            break
        e_old = e_el
        # DIIS extrapolation
        m = len(damps)
        if m > 1:
            Bm = -np.ones((m + 1, m + 1))
            Bm[m, m] = 0.0
            for x in range(m):
                for y in range(m):
                    Bm[x, y] = np.sum(errs[x] * errs[y])
            rhs = np.zeros(m + 1)
            rhs[m] = -1.0
            try:
                coef = np.linalg.solve(Bm, rhs)[:m]
                F = sum(c * f for c, f in zip(coef, damps))
            except np.linalg.LinAlgError:
                pass
    else:
        raise RuntimeError("SCF failed to converge")

    e_hf = e_el + enuc
    # MO transforms
    h_mo = Cmo.T @ H @ Cmo
    g_mo = np.einsum("pqrs,pi,qj,rk,sl->ijkl", G, Cmo, Cmo, Cmo, Cmo, optimize=True)
    return {
        "e_hf": e_hf,
        "e_nuc": enuc,
        "mo_energies": eps,
        "h_mo": h_mo,
        "g_mo": g_mo,
        "n_electrons": n_electrons,
        "labels": labels,
        "mo_coeff": Cmo,
    }


def write_fcidump(path, h_mo, g_mo, e_nuc, n_electrons, ms2=0, tol=1e-12):
    """Write chemist-notation (ij|kl) integrals, 8-fold unique, 1-based."""
    n = h_mo.shape[0]
    lines = []
    orbsym = ",".join(["1"] * n)
    lines.append(f"&FCI NORB={n},NELEC={n_electrons},MS2={ms2},")
    lines.append(f" ORBSYM={orbsym},")
    lines.append(" ISYM=1,")
    lines.append("&END")
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                lmax = j if k == i else k
                for l in range(lmax + 1):
                    val = g_mo[i, j, k, l]
                    if abs(val) > tol:
                        lines.append(f"{val: .16E} {i + 1:3d} {j + 1:3d} {k + 1:3d} {l + 1:3d}")
    for i in range(n):
        for j in range(i + 1):
            val = h_mo[i, j]
            if abs(val) > tol:
                lines.append(f"{val: .16E} {i + 1:3d} {j + 1:3d}   0   0")
    lines.append(f"{e_nuc: .16E}   0   0   0   0")
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
