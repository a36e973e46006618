"""Fermion-to-qubit encodings and symmetry-based qubit elimination.

All three encodings (Jordan-Wigner, Parity, Bravyi-Kitaev) are expressed
through one invertible GF(2) matrix A: qubit i stores the bit
b_i = XOR_j A[i,j] n_j of the mode occupations n.  A ladder operator on mode j
then needs three qubit sets, all read off A and its inverse:

  flip set    C(j): qubits whose stored bit contains n_j (column j of A)
  readout set F(j): qubits whose XOR recovers n_j (row j of A^-1)
  parity set  P(j): qubits whose XOR recovers n_0 + .. + n_{j-1}

giving c_j = X_C * Z_P * (I - Z_F)/2 and its adjoint with (I + Z_F)/2.
Jordan-Wigner is A = identity, Parity is the lower-triangular all-ones
matrix, Bravyi-Kitaev is the binary-indexed-tree matrix.
"""

from dataclasses import dataclass

import numpy as np

from .fermion import FermionOperator
from .pauli import PauliString, PauliSum, pauli_multiply


def _gf2_rref(mat):
    """Reduced row echelon form over GF(2); returns (rref, pivot_columns)."""
    m = mat.copy() % 2
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hit = np.nonzero(m[r:, c])[0]
        if hit.size == 0:
            continue
        m[[r, r + hit[0]]] = m[[r + hit[0], r]]
        for other in range(rows):
            if other != r and m[other, c]:
                m[other] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def _gf2_inverse(mat):
    n = mat.shape[0]
    aug = np.concatenate([mat % 2, np.eye(n, dtype=np.uint8)], axis=1)
    rref, pivots = _gf2_rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("encoding matrix is singular over GF(2)")
    return rref[:, n:]


def _gf2_nullspace(mat):
    """Basis of {v : mat @ v = 0 over GF(2)}, itself in RREF."""
    rref, pivots = _gf2_rref(mat)
    cols = mat.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[f] = 1
        for r, p in enumerate(pivots):
            if rref[r, f]:
                v[p] = 1
        basis.append(v)
    if not basis:
        return np.zeros((0, cols), dtype=np.uint8)
    return _gf2_rref(np.array(basis, dtype=np.uint8))[0]


def jordan_wigner_matrix(n):
    return np.eye(n, dtype=np.uint8)


def parity_matrix(n):
    return np.tril(np.ones((n, n), dtype=np.uint8))


def bravyi_kitaev_matrix(n):
    """Binary-indexed-tree encoding matrix, truncated to n modes."""
    size = 1
    mat = np.ones((1, 1), dtype=np.uint8)
    while size < n:
        top = np.concatenate([mat, np.zeros((size, size), dtype=np.uint8)], axis=1)
        bottom = np.concatenate([np.zeros((size, size), dtype=np.uint8), mat], axis=1)
        bottom[-1, :size] = 1
        mat = np.concatenate([top, bottom], axis=0)
        size *= 2
    return mat[:n, :n]


def _bits_to_mask(bits):
    mask = 0
    for i, b in enumerate(bits):
        if b:
            mask |= 1 << i
    return mask


def _ladder_pauli_sums(a_mat):
    """Per-mode (annihilator, creator) PauliSums for an encoding matrix."""
    n = a_mat.shape[0]
    a_inv = _gf2_inverse(a_mat)
    prefix = np.cumsum(a_inv, axis=0) % 2  # prefix[j] = rows 0..j summed
    pairs = []
    for j in range(n):
        flip = _bits_to_mask(a_mat[:, j])
        readout = _bits_to_mask(a_inv[j])
        below = _bits_to_mask(prefix[j - 1]) if j > 0 else 0
        x_part = PauliSum(n, [(PauliString(n, flip, 0), 1.0)])
        z_part = PauliSum(n, [(PauliString(n, 0, below), 1.0)])
        project_occ = PauliSum(n, [(PauliString.identity(n), 0.5),
                                   (PauliString(n, 0, readout), -0.5)])
        project_emp = PauliSum(n, [(PauliString.identity(n), 0.5),
                                   (PauliString(n, 0, readout), 0.5)])
        lower = x_part * z_part * project_occ
        raiser = x_part * z_part * project_emp
        pairs.append((lower, raiser))
    return pairs


def _map_with_matrix(op, a_mat):
    n = op.n_modes
    pairs = _ladder_pauli_sums(a_mat)
    acc = {(0, 0): complex(op.constant)}
    for term in op.terms:
        prod = None
        for mode, raising in term.ladder:
            factor = pairs[mode][1 if raising else 0]
            prod = factor if prod is None else prod * factor
        for pterm in prod.terms:
            key = (pterm.string.x_mask, pterm.string.z_mask)
            acc[key] = acc.get(key, 0.0) + term.coefficient * pterm.coefficient
    return PauliSum(n, [(PauliString(n, x, z), c)
                        for (x, z), c in acc.items()]).simplify()


def map_jordan_wigner(op):
    """Jordan-Wigner encoding: qubit j stores the occupation of mode j."""
    return _map_with_matrix(op, jordan_wigner_matrix(op.n_modes))


def map_parity(op):
    """Parity encoding: qubit j stores the parity of occupations 0..j."""
    return _map_with_matrix(op, parity_matrix(op.n_modes))


def map_bravyi_kitaev(op):
    """Bravyi-Kitaev encoding via the binary-indexed-tree matrix."""
    return _map_with_matrix(op, bravyi_kitaev_matrix(op.n_modes))


def encode_bitstring(bits, a_mat):
    """Push an occupation bitmask through an encoding matrix.

    Bit i of the result is XOR_j A[i,j] n_j, i.e. the computational state the
    chosen encoding assigns to the determinant `bits`.
    """
    n = a_mat.shape[0]
    out = 0
    for i in range(n):
        acc = 0
        for j in range(n):
            if a_mat[i, j] and (bits >> j) & 1:
                acc ^= 1
        if acc:
            out |= 1 << i
    return out


def reduce_bitstring(bits, n_qubits):
    """Drop the two fixed-parity bit positions of a parity-encoded state."""
    return _remove_bits(bits, [n_qubits // 2 - 1, n_qubits - 1])


def _remove_bits(mask, positions):
    """Compact a bitmask by deleting the given (sorted ascending) positions."""
    out = 0
    shift = 0
    prev = -1
    for pos in positions + [None]:
        if pos is None:
            segment = mask >> (prev + 1)
        else:
            segment = (mask >> (prev + 1)) & ((1 << (pos - prev - 1)) - 1)
        out |= segment << (prev + 1 - shift)
        if pos is None:
            break
        shift += 1
        prev = pos
    return out


def two_qubit_reduction(s, n_alpha, n_beta):
    """Drop the two fixed-parity qubits of a block-ordered parity mapping.

    Under the parity encoding with all alpha modes before all beta modes,
    qubit n/2-1 stores the alpha-block parity and qubit n-1 the total parity;
    both are constants of motion for fixed particle numbers, so each Z there
    is replaced by its eigenvalue and the qubit removed.
    """
    n = s.n_qubits
    if n < 4 or n % 2:
        raise ValueError(f"need an even qubit count of at least 4, got {n}")
    mid, top = n // 2 - 1, n - 1
    eig_mid = -1.0 if n_alpha % 2 else 1.0
    eig_top = -1.0 if (n_alpha + n_beta) % 2 else 1.0
    out = []
    for term in s:
        x, z = term.string.x_mask, term.string.z_mask
        if (x >> mid) & 1 or (x >> top) & 1:
            raise ValueError(
                f"term {term.string} acts with X or Y on a fixed-parity qubit; "
                "input is not a block-ordered parity mapping")
        coeff = term.coefficient
        if (z >> mid) & 1:
            coeff *= eig_mid
        if (z >> top) & 1:
            coeff *= eig_top
        out.append((PauliString(n - 2, _remove_bits(x, [mid, top]),
                                _remove_bits(z, [mid, top])), coeff))
    return PauliSum(n - 2, out).simplify()


@dataclass(frozen=True)
class TaperingInfo:
    """Z2 symmetry generators with the qubits and eigenvalues that remove them."""

    generators: tuple
    removed_qubits: tuple
    sector: tuple

    def __post_init__(self):
        if not (len(self.generators) == len(self.removed_qubits) == len(self.sector)):
            raise ValueError("generators, removed_qubits and sector must align")
        for val in self.sector:
            if val not in (-1, 1):
                raise ValueError(f"sector values must be +/-1, got {val}")
        for i, gen in enumerate(self.generators):
            if gen.x_mask:
                raise ValueError("generators must be Z-type strings")
            if not (gen.z_mask >> self.removed_qubits[i]) & 1:
                raise ValueError("each generator must act on its removed qubit")
            for k, other in enumerate(self.generators):
                if k != i and (other.z_mask >> self.removed_qubits[i]) & 1:
                    raise ValueError("removed qubits must be exclusive to one generator")

    def __len__(self):
        return len(self.generators)


def find_z2_symmetries(s, reference_bits=0):
    """Find Z-type Pauli symmetries of a Hermitian sum.

    Generators span the kernel of the binary symplectic check matrix built
    from the terms' X supports: a Z string commutes with every term exactly
    when its support overlaps each term's X mask evenly.  The sector is fixed
    by evaluating each generator on `reference_bits` (the occupation of the
    reference determinant), so tapering keeps the reference state's sector.
    """
    n = s.n_qubits
    x_masks = sorted({term.string.x_mask for term in s} - {0})
    if not x_masks:
        rows = np.zeros((1, n), dtype=np.uint8)
    else:
        rows = np.array([[(m >> q) & 1 for q in range(n)] for m in x_masks],
                        dtype=np.uint8)
    basis = _gf2_nullspace(rows)
    generators = []
    removed = []
    sector = []
    for row in basis:
        z_mask = _bits_to_mask(row)
        if z_mask == 0:
            continue
        pivot = int(np.nonzero(row)[0][0])
        generators.append(PauliString(n, 0, z_mask))
        removed.append(pivot)
        sector.append(1 if bin(z_mask & reference_bits).count("1") % 2 == 0 else -1)
    return TaperingInfo(tuple(generators), tuple(removed), tuple(sector))


def taper(s, info):
    """Remove one qubit per symmetry generator from a Hermitian sum.

    Each generator g with designated qubit q is rotated onto X_q by the
    Clifford (X_q + g)/sqrt(2); X_q then acts as a constant +/-1 (the sector
    eigenvalue) on every symmetry eigenstate and the qubit is dropped.
    """
    if len(info) == 0:
        return s
    n = s.n_qubits
    if len(info) >= n:
        raise ValueError("cannot taper away every qubit of the sum")
    conjugators = []
    for gen, q in zip(info.generators, info.removed_qubits):
        if gen.n_qubits != n:
            raise ValueError("generator qubit count does not match the sum")
        product, phase = pauli_multiply(PauliString.single(n, q, "X"), gen)
        conjugators.append((q, product, phase))
    removed_sorted = sorted(info.removed_qubits)
    out = []
    for term in s:
        string = term.string
        coeff = term.coefficient
        for gen in info.generators:
            if not string.commutes(gen):
                raise ValueError(
                    f"term {string} anticommutes with generator {gen}; "
                    "the tapering info does not belong to this sum")
        for (q, product, phase) in conjugators:
            if (string.z_mask >> q) & 1:
                string, extra = pauli_multiply(string, product)
                coeff *= -phase * extra
        for eig, q in zip(info.sector, info.removed_qubits):
            if (string.x_mask >> q) & 1:
                coeff *= eig
        x = _remove_bits(string.x_mask, removed_sorted)
        z = _remove_bits(string.z_mask, removed_sorted)
        out.append((PauliString(n - len(info), x, z), coeff))
    return PauliSum(n - len(info), out).simplify()


def taper_bitstring(bits, info, n_qubits):
    """Project a computational reference state into the tapered register.

    Valid when the state lies in the chosen symmetry sector, which is checked;
    the surviving qubits keep their bit values.
    """
    for gen, eig in zip(info.generators, info.sector):
        parity = bin(gen.z_mask & bits).count("1") % 2
        if (1 if parity == 0 else -1) != eig:
            raise ValueError("reference state is outside the tapered sector")
    del n_qubits  # kept for call-site clarity; masks carry no width
    return _remove_bits(bits, sorted(info.removed_qubits))
