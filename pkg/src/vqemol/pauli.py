"""Pauli-string and Pauli-sum algebra on n qubits.

Strings are stored as a pair of bitmasks (x_mask, z_mask); qubit q has axis
X if only bit q of x_mask is set, Z if only bit q of z_mask, Y if both.
Qubit 0 is the least-significant bit of a basis-state index everywhere in
this package.  Multiplication, commutation and expectation kernels reduce to
integer bit operations, which keeps sums with 1e4..1e5 terms cheap.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

_TO_MATRIX_MAX_QUBITS = 14

_AXIS_CHARS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_AXIS_BITS = {v: k for k, v in _AXIS_CHARS.items()}
_PHASES = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def _popcount(x):
    return int(x).bit_count()


def _parity_u64(v):
    """Bitwise parity of each element of a uint64 array, vectorized."""
    v = v.copy()
    v ^= v >> 32
    v ^= v >> 16
    v ^= v >> 8
    v ^= v >> 4
    v ^= v >> 2
    v ^= v >> 1
    return (v & 1).astype(np.int64)


@dataclass(frozen=True, slots=True)
class PauliString:
    """Tensor product of single-qubit Paulis, phase-free."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        full = (1 << self.n_qubits) - 1
        if self.x_mask & ~full or self.z_mask & ~full:
            raise ValueError("mask has bits beyond n_qubits")

    @classmethod
    def identity(cls, n_qubits):
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_axes(cls, axes):
        """Build from an axis string like 'XIZY'; position i acts on qubit i."""
        x = z = 0
        for q, ch in enumerate(axes):
            try:
                xb, zb = _AXIS_BITS[ch]
            except KeyError:
                raise ValueError(f"invalid axis character {ch!r} at position {q}") from None
            x |= xb << q
            z |= zb << q
        return cls(len(axes), x, z)

    @classmethod
    def single(cls, n_qubits, qubit, axis):
        """One non-identity axis at `qubit`, identity elsewhere."""
        xb, zb = _AXIS_BITS[axis]
        return cls(n_qubits, xb << qubit, zb << qubit)

    def axis(self, qubit):
        return _AXIS_CHARS[((self.x_mask >> qubit) & 1, (self.z_mask >> qubit) & 1)]

    @property
    def axes(self):
        return "".join(self.axis(q) for q in range(self.n_qubits))

    @property
    def weight(self):
        return _popcount(self.x_mask | self.z_mask)

    @property
    def n_y(self):
        return _popcount(self.x_mask & self.z_mask)

    def is_identity(self):
        return self.x_mask == 0 and self.z_mask == 0

    def commutes(self, other):
        """True iff the two strings commute as matrices (symplectic test)."""
        _check_sizes(self, other)
        k = _popcount(self.x_mask & other.z_mask) + _popcount(other.x_mask & self.z_mask)
        return k % 2 == 0

    def qubitwise_commutes(self, other):
        """True iff at every position the axes are equal or at least one is I."""
        _check_sizes(self, other)
        both = (self.x_mask | self.z_mask) & (other.x_mask | other.z_mask)
        differ = (self.x_mask ^ other.x_mask) | (self.z_mask ^ other.z_mask)
        return both & differ == 0

    def __str__(self):
        return self.axes


def _check_sizes(a, b):
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")


def pauli_multiply(a, b):
    """Multiply two PauliStrings.

    Returns (string, phase) with matrix(a) @ matrix(b) = phase * matrix(string);
    phase is one of {1, i, -1, -i}.
    """
    _check_sizes(a, b)
    x = a.x_mask ^ b.x_mask
    z = a.z_mask ^ b.z_mask
    # each Y contributes a factor i relative to X.Z form; crossing Z-past-X
    # during reordering contributes (-1) per overlap of b.x with a.z
    k = a.n_y + b.n_y - _popcount(x & z) + 2 * _popcount(b.x_mask & a.z_mask)
    return PauliString(a.n_qubits, x, z), _PHASES[k % 4]


def qubitwise_commutes(a, b):
    return a.qubitwise_commutes(b)


@dataclass(frozen=True, slots=True)
class PauliTerm:
    string: PauliString
    coefficient: complex


class PauliSum:
    """Weighted sum of PauliStrings, kept duplicate-free and canonically ordered.

    Construction always merges duplicate strings; `simplify` additionally
    drops small coefficients.  Instances are never mutated in place.
    """

    __slots__ = ("n_qubits", "terms")

    def __init__(self, n_qubits, terms=()):
        merged = {}
        for item in terms:
            if isinstance(item, PauliTerm):
                s, c = item.string, item.coefficient
            else:
                s, c = item
            if s.n_qubits != n_qubits:
                raise ValueError(f"term on {s.n_qubits} qubits in a {n_qubits}-qubit sum")
            key = (s.x_mask, s.z_mask)
            merged[key] = merged.get(key, 0.0) + complex(c)
        self.n_qubits = n_qubits
        self.terms = tuple(
            PauliTerm(PauliString(n_qubits, x, z), merged[(x, z)])
            for (x, z) in sorted(merged)
        )

    @classmethod
    def zero(cls, n_qubits):
        return cls(n_qubits)

    @classmethod
    def from_label(cls, axes, coefficient=1.0):
        s = PauliString.from_axes(axes)
        return cls(s.n_qubits, [(s, coefficient)])

    @property
    def num_terms(self):
        return len(self.terms)

    @property
    def identity_coefficient(self):
        for t in self.terms:
            if t.string.is_identity():
                return t.coefficient
        return 0.0 + 0.0j

    def coefficient(self, string):
        for t in self.terms:
            if t.string == string:
                return t.coefficient
        return 0.0 + 0.0j

    def max_abs_imag(self):
        return max((abs(t.coefficient.imag) for t in self.terms), default=0.0)

    def is_hermitian(self, tol=1e-10):
        return self.max_abs_imag() < tol

    def simplify(self, drop_tol=1e-12):
        """Merge duplicates (already merged) and drop |coefficient| < drop_tol."""
        if drop_tol < 0:
            raise ValueError("drop_tol must be nonnegative")
        return PauliSum(self.n_qubits,
                        [t for t in self.terms if abs(t.coefficient) >= drop_tol])

    def __add__(self, other):
        if isinstance(other, PauliSum):
            _check_sizes(self, other)
            return PauliSum(self.n_qubits, list(self.terms) + list(other.terms))
        return NotImplemented

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            _check_sizes(self, other)
            out = []
            for ta in self.terms:
                for tb in other.terms:
                    s, ph = pauli_multiply(ta.string, tb.string)
                    out.append((s, ta.coefficient * tb.coefficient * ph))
            return PauliSum(self.n_qubits, out)
        if isinstance(other, (int, float, complex)):
            return PauliSum(self.n_qubits,
                            [(t.string, t.coefficient * other) for t in self.terms])
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (isinstance(other, PauliSum) and self.n_qubits == other.n_qubits
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n_qubits, self.terms))

    def to_matrix(self):
        """Dense 2^n x 2^n matrix; qubit 0 is the least-significant tensor factor.

        Guarded at 14 qubits (a 2^14 square complex matrix is ~4 GiB).
        """
        n = self.n_qubits
        if n > _TO_MATRIX_MAX_QUBITS:
            raise ResourceLimitError(
                f"to_matrix limited to {_TO_MATRIX_MAX_QUBITS} qubits, got {n}")
        dim = 1 << n
        idx = np.arange(dim, dtype=np.uint64)
        out = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            s = t.string
            signs = 1.0 - 2.0 * _parity_u64(idx & np.uint64(s.z_mask))
            rows = idx ^ np.uint64(s.x_mask)
            out[rows, idx] += t.coefficient * (1j ** s.n_y) * signs
        return out

    def render(self):
        """One term per line: `<coeff_re> <coeff_im> <axes>`."""
        return "\n".join(
            f"{t.coefficient.real} {t.coefficient.imag} {t.string.axes}"
            for t in self.terms)

    def __repr__(self):
        return f"PauliSum(n_qubits={self.n_qubits}, num_terms={self.num_terms})"
