"""Molecular integral handling: FCIDUMP files, frozen cores, spin orbitals.

Two-body integrals are stored in chemist convention (pq|rs) throughout; the
conversion to the physicist operator ordering needed by the second-quantized
Hamiltonian happens in exactly one place, spin_orbital_hamiltonian.
"""

import re
from dataclasses import dataclass, replace

import numpy as np

from .fermion import FermionOperator

_SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class MolecularIntegrals:
    """Core energy plus one- and two-body integrals over spatial orbitals."""

    n_spatial: int
    core_energy: float
    one_body: np.ndarray
    two_body: np.ndarray

    def __post_init__(self):
        m = self.n_spatial
        if m < 1:
            raise ValueError(f"n_spatial must be positive, got {m}")
        if self.one_body.shape != (m, m):
            raise ValueError("one_body shape mismatch")
        if self.two_body.shape != (m, m, m, m):
            raise ValueError("two_body shape mismatch")
        if np.max(np.abs(self.one_body - self.one_body.T)) > _SYMMETRY_TOL:
            raise ValueError("one_body is not symmetric")
        g = self.two_body
        for perm in ((1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)):
            if np.max(np.abs(g - g.transpose(perm))) > _SYMMETRY_TOL:
                raise ValueError("two_body lacks 8-fold permutational symmetry")


@dataclass(frozen=True)
class MolecularProblem:
    """A molecular electronic-structure problem ready for qubit encoding."""

    integrals: MolecularIntegrals
    n_electrons: int
    ms2: int
    label: str = ""
    n_frozen: int = 0

    def __post_init__(self):
        if not 0 <= self.n_electrons <= 2 * self.integrals.n_spatial:
            raise ValueError(f"n_electrons {self.n_electrons} does not fit "
                             f"{self.integrals.n_spatial} spatial orbitals")
        if (self.n_electrons - self.ms2) % 2:
            raise ValueError("n_electrons and ms2 have mismatched parity")
        if not 0 <= self.n_alpha <= self.integrals.n_spatial:
            raise ValueError("alpha occupation out of range")
        if not 0 <= self.n_beta <= self.integrals.n_spatial:
            raise ValueError("beta occupation out of range")
        if self.n_frozen < 0:
            raise ValueError("n_frozen must be nonnegative")

    @property
    def n_alpha(self):
        return (self.n_electrons + self.ms2) // 2

    @property
    def n_beta(self):
        return (self.n_electrons - self.ms2) // 2

    @property
    def n_spin_orbitals(self):
        return 2 * self.integrals.n_spatial


class FcidumpError(ValueError):
    """Raised for malformed FCIDUMP content, with a 1-based line number."""

    def __init__(self, line_number, message):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def parse_fcidump(text, label=""):
    """Parse FCIDUMP text into a MolecularProblem.

    Header lines up to a `/` or `&END` terminator must define NORB, NELEC and
    MS2.  Data lines read `value i j k l` with 1-based indices: `i j 0 0` is a
    one-body element, all-zero indices set the core energy, anything else is
    the chemist two-body integral (ij|kl), expanded to all 8 permutations.
    """
    lines = text.splitlines()
    header_parts = []
    data_start = None
    for ln, line in enumerate(lines, start=1):
        stripped = line.strip()
        header_parts.append(stripped)
        if stripped.endswith("/") or "&END" in stripped.upper():
            data_start = ln
            break
    if data_start is None:
        raise FcidumpError(len(lines) or 1, "header never terminated by / or &END")
    header = " ".join(header_parts).upper()

    def header_int(name):
        match = re.search(rf"\b{name}\s*=\s*(-?\d+)", header)
        if match is None:
            raise FcidumpError(data_start, f"header does not define {name}")
        return int(match.group(1))

    norb = header_int("NORB")
    nelec = header_int("NELEC")
    ms2 = header_int("MS2")
    if norb < 1:
        raise FcidumpError(data_start, f"NORB must be positive, got {norb}")

    core = 0.0
    h = np.zeros((norb, norb))
    g = np.zeros((norb, norb, norb, norb))
    for ln in range(data_start, len(lines)):
        stripped = lines[ln].strip()
        if not stripped:
            continue
        fields = stripped.split()
        if len(fields) != 5:
            raise FcidumpError(ln + 1, f"expected 5 fields, got {len(fields)}")
        try:
            value = float(fields[0].replace("D", "E").replace("d", "e"))
            i, j, k, l = (int(f) for f in fields[1:])
        except ValueError as exc:
            raise FcidumpError(ln + 1, f"non-numeric field ({exc})") from None
        for name, idx in (("i", i), ("j", j), ("k", k), ("l", l)):
            if not 0 <= idx <= norb:
                raise FcidumpError(ln + 1, f"index {name}={idx} outside 0..{norb}")
        if i == j == k == l == 0:
            core = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpError(ln + 1, f"one-body line needs i,j >= 1, got {i},{j}")
            h[i - 1, j - 1] = value
            h[j - 1, i - 1] = value
        else:
            if 0 in (i, j, k, l):
                raise FcidumpError(ln + 1, "two-body line has a zero index")
            a, b, c, d = i - 1, j - 1, k - 1, l - 1
            for p, q, r, s in ((a, b, c, d), (b, a, c, d), (a, b, d, c),
                               (b, a, d, c), (c, d, a, b), (d, c, a, b),
                               (c, d, b, a), (d, c, b, a)):
                g[p, q, r, s] = value

    integrals = MolecularIntegrals(norb, core, h, g)
    return MolecularProblem(integrals, nelec, ms2, label=label, n_frozen=0)


def serialize_fcidump(problem):
    """Render a MolecularProblem back to FCIDUMP text (8-fold-unique entries)."""
    ints = problem.integrals
    m = ints.n_spatial
    out = [f"&FCI NORB={m},NELEC={problem.n_electrons},MS2={problem.ms2},",
           "  ORBSYM=" + "1," * m,
           "  ISYM=1,",
           " &END"]

    def emit(value, i, j, k, l):
        out.append(f"{value: .16E} {i:4d} {j:4d} {k:4d} {l:4d}")

    for p in range(m):
        for q in range(p + 1):
            pq = p * (p + 1) // 2 + q
            for r in range(p + 1):
                for s in range(r + 1):
                    if r * (r + 1) // 2 + s > pq:
                        continue
                    value = ints.two_body[p, q, r, s]
                    if value != 0.0:
                        emit(value, p + 1, q + 1, r + 1, s + 1)
    for p in range(m):
        for q in range(p + 1):
            if ints.one_body[p, q] != 0.0:
                emit(ints.one_body[p, q], p + 1, q + 1, 0, 0)
    emit(ints.core_energy, 0, 0, 0, 0)
    return "\n".join(out) + "\n"


def freeze_core(problem, n_frozen):
    """Fold the lowest n_frozen doubly occupied orbitals into the core.

    The frozen orbitals' one-body energies and their mutual Coulomb/exchange
    move into core_energy; their mean field folds into the active one-body
    block.  The total HF energy is unchanged.
    """
    if n_frozen == 0:
        return replace(problem)
    ints = problem.integrals
    m = ints.n_spatial
    if n_frozen < 0:
        raise ValueError("n_frozen must be nonnegative")
    if n_frozen > problem.n_beta:
        raise ValueError(f"cannot freeze {n_frozen} orbitals: only "
                         f"{problem.n_beta} are doubly occupied")
    if n_frozen >= m:
        raise ValueError(f"cannot freeze {n_frozen} of {m} orbitals")
    k = n_frozen
    h = ints.one_body
    g = ints.two_body
    core = ints.core_energy + 2.0 * np.trace(h[:k, :k])
    for i in range(k):
        for j in range(k):
            core += 2.0 * g[i, i, j, j] - g[i, j, j, i]
    h_active = h[k:, k:].copy()
    for i in range(k):
        h_active += 2.0 * g[k:, k:, i, i] - g[k:, i, i, k:]
    new_ints = MolecularIntegrals(m - k, core, h_active,
                                  g[k:, k:, k:, k:].copy())
    return MolecularProblem(new_ints, problem.n_electrons - 2 * k, problem.ms2,
                            label=problem.label, n_frozen=problem.n_frozen + k)


def hf_energy(problem):
    """Hartree-Fock energy of the aufbau determinant, in Hartree."""
    ints = problem.integrals
    na, nb = problem.n_alpha, problem.n_beta
    h = ints.one_body
    g = ints.two_body
    energy = ints.core_energy
    energy += np.trace(h[:na, :na]) + np.trace(h[:nb, :nb])
    j_aa = np.einsum("iijj->", g[:na, :na, :na, :na])
    j_bb = np.einsum("iijj->", g[:nb, :nb, :nb, :nb])
    j_ab = np.einsum("iijj->", g[:na, :na, :nb, :nb])
    k_aa = np.einsum("ijji->", g[:na, :na, :na, :na])
    k_bb = np.einsum("ijji->", g[:nb, :nb, :nb, :nb])
    return energy + 0.5 * (j_aa - k_aa) + 0.5 * (j_bb - k_bb) + j_ab


def hf_bitstring(problem):
    """Aufbau occupation bitmask over 2*n_spatial block-ordered spin orbitals.

    Bit i (alpha block) and bit n_spatial+i (beta block) mark occupation of
    spatial orbital i; bit 0 is the least significant bit.
    """
    m = problem.integrals.n_spatial
    mask = 0
    for i in range(problem.n_alpha):
        mask |= 1 << i
    for i in range(problem.n_beta):
        mask |= 1 << (m + i)
    return mask


def spin_orbital_hamiltonian(problem):
    """Second-quantized electronic Hamiltonian over block-ordered spin orbitals.

    Returns core + sum h_pq c†_p c_q + 1/2 sum (pq|rs) c†_p c†_r c_s c_q with
    spin expanded (alpha block first), as a normal-ordered FermionOperator.
    """
    ints = problem.integrals
    m = ints.n_spatial
    h = ints.one_body
    g = ints.two_body
    raw = []
    for p in range(m):
        for q in range(m):
            if h[p, q] == 0.0:
                continue
            for sp in (0, m):
                raw.append((((p + sp, True), (q + sp, False)), h[p, q]))
    for p in range(m):
        for q in range(m):
            for r in range(m):
                for s in range(m):
                    value = g[p, q, r, s]
                    if value == 0.0:
                        continue
                    for sp1 in (0, m):
                        for sp2 in (0, m):
                            raw.append((((p + sp1, True), (r + sp2, True),
                                         (s + sp2, False), (q + sp1, False)),
                                        0.5 * value))
    return FermionOperator(2 * m, raw, constant=ints.core_energy)
