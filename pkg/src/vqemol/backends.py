"""Statevector simulation, sampled estimation, exact diagonalization.

Amplitudes index computational basis states with qubit 0 as the least
significant bit.  Single-qubit gates act through a reshape that exposes the
target qubit as its own axis; CNOT swaps masked index pairs.  Expectation
values never materialize Pauli matrices: each term is an index flip plus a
sign vector.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .circuit import Circuit, Gate, constant_gate_matrix
from .errors import ResourceLimitError
from .pauli import _parity_u64

_DEFAULT_MAX_QUBITS = 30
_DENSE_CUTOFF = 12
_SPARSE_CUTOFF = 24


class Statevector:
    """Dense complex amplitudes of an n-qubit register."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits, amplitudes=None, max_qubits=_DEFAULT_MAX_QUBITS):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {n_qubits}")
        if n_qubits > max_qubits:
            raise ResourceLimitError(
                f"{n_qubits} qubits exceeds the cap of {max_qubits} "
                f"(2^{n_qubits} amplitudes)")
        dim = 1 << n_qubits
        if amplitudes is None:
            amps = np.zeros(dim, dtype=complex)
            amps[0] = 1.0
        else:
            amps = np.asarray(amplitudes, dtype=complex)
            if amps.shape != (dim,):
                raise ValueError(f"expected {dim} amplitudes, got {amps.shape}")
            norm = np.sum(np.abs(amps) ** 2)
            if abs(norm - 1.0) > 1e-10:
                raise ValueError(f"state norm {norm} is not 1")
            amps = amps.copy()
        self.n_qubits = n_qubits
        self.amplitudes = amps

    @classmethod
    def from_bitstring(cls, n_qubits, bits, max_qubits=_DEFAULT_MAX_QUBITS):
        state = cls(n_qubits, max_qubits=max_qubits)
        state.amplitudes[0] = 0.0
        state.amplitudes[bits] = 1.0
        return state

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


def _qubit_view(amps, n_qubits, qubit):
    return amps.reshape(1 << (n_qubits - qubit - 1), 2, 1 << qubit)


def _apply_single(amps, n_qubits, qubit, matrix):
    view = _qubit_view(amps, n_qubits, qubit)
    v0 = view[:, 0, :].copy()
    v1 = view[:, 1, :]
    view[:, 0, :] = matrix[0, 0] * v0 + matrix[0, 1] * v1
    view[:, 1, :] = matrix[1, 0] * v0 + matrix[1, 1] * v1


def _apply_cnot(amps, n_qubits, control, target):
    hi, lo = max(control, target), min(control, target)
    view = amps.reshape(1 << (n_qubits - hi - 1), 2,
                        1 << (hi - lo - 1), 2, 1 << lo)
    if control > target:
        sub = view[:, 1, :, :, :]
        tmp = sub[:, :, 0, :].copy()
        sub[:, :, 0, :] = sub[:, :, 1, :]
        sub[:, :, 1, :] = tmp
    else:
        sub = view[:, :, :, 1, :]
        tmp = sub[:, 0, :, :].copy()
        sub[:, 0, :, :] = sub[:, 1, :, :]
        sub[:, 1, :, :] = tmp


def _gate_matrix(gate):
    if gate.name == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if gate.name == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    angle = gate.angle
    if gate.name == "RX":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -1j * s], [-1j * s, c]])
    if gate.name == "RY":
        c, s = math.cos(angle / 2), math.sin(angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.name == "RZ":
        return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]])
    if gate.name == "U":
        return constant_gate_matrix(gate)
    raise ValueError(f"unknown gate {gate.name!r}")


def apply(circuit, state):
    """Run a fully bound circuit on a statevector; returns a new Statevector."""
    if circuit.n_parameters:
        raise ValueError(f"circuit still has {circuit.n_parameters} unbound "
                         "parameters; bind before applying")
    if circuit.n_qubits != state.n_qubits:
        raise ValueError(f"circuit on {circuit.n_qubits} qubits, state has "
                         f"{state.n_qubits}")
    amps = state.amplitudes.copy()
    n = state.n_qubits
    for gate in circuit.gates:
        if gate.name == "CNOT":
            _apply_cnot(amps, n, gate.qubits[0], gate.qubits[1])
        else:
            _apply_single(amps, n, gate.qubits[0], _gate_matrix(gate))
    out = Statevector.__new__(Statevector)
    out.n_qubits = n
    out.amplitudes = amps
    return out


def _term_expectation(string, amps, indices):
    """<s|P|s> for one Pauli string, matrix-free."""
    signs = 1.0 - 2.0 * _parity_u64(indices & string.z_mask)
    phase = 1j ** string.n_y
    if string.x_mask:
        flipped = amps[indices ^ string.x_mask]
    else:
        flipped = amps
    return phase * np.sum(np.conj(flipped) * signs * amps)


def expval_direct(h, state):
    """Exact expectation value of a Hermitian PauliSum, term by term."""
    if h.n_qubits != state.n_qubits:
        raise ValueError(f"operator on {h.n_qubits} qubits, state has "
                         f"{state.n_qubits}")
    amps = state.amplitudes
    indices = np.arange(1 << state.n_qubits, dtype=np.uint64)
    value = 0.0 + 0.0j
    for term in h:
        value += term.coefficient * _term_expectation(term.string, amps, indices)
    if abs(value.imag) > 1e-10:
        raise ValueError(f"expectation has imaginary residue {value.imag}; "
                         "operator is not Hermitian")
    return float(value.real)


@dataclass(frozen=True, slots=True)
class SampledEstimate:
    mean: float
    stderr: float
    shots: int
    seed: int


def group_qubitwise(h):
    """Greedy first-fit grouping of terms into qubitwise-commuting sets.

    Identity terms are excluded (their contribution is exact).  Returns a list
    of groups, each a list of PauliTerms, in deterministic order.
    """
    groups = []
    for term in h:
        if term.string.is_identity():
            continue
        for group in groups:
            if all(term.string.qubitwise_commutes(other.string) for other in group):
                group.append(term)
                break
        else:
            groups.append([term])
    return groups


def _group_basis_gates(group, n_qubits):
    """Rotations mapping every member's axes onto Z before measurement."""
    gates = []
    for q in range(n_qubits):
        axis = "I"
        for term in group:
            a = term.string.axis(q)
            if a != "I":
                axis = a
                break
        if axis == "X":
            gates.append(Gate("H", (q,)))
        elif axis == "Y":
            gates.append(Gate("RX", (q,), angle=math.pi / 2))
    return gates


def expval_sampled(h, circuit, shots, seed):
    """Estimate <H> by simulated projective measurement.

    Terms are grouped into qubitwise-commuting sets; each group is measured
    with the full shot budget after its basis change.  Per shot, the group's
    terms are evaluated jointly on the sampled bitstring; the group means add
    and their standard errors combine in quadrature.  The identity component
    enters exactly.
    """
    if shots < 1:
        raise ValueError(f"shots must be positive, got {shots}")
    state = apply(circuit, Statevector(circuit.n_qubits))
    mean = float(np.real(h.identity_coefficient))
    variance = 0.0
    rng = np.random.default_rng(seed)
    for group in group_qubitwise(h):
        rotated = apply(Circuit(circuit.n_qubits,
                                _group_basis_gates(group, circuit.n_qubits)),
                        state)
        probs = rotated.probabilities()
        probs = probs / probs.sum()
        samples = rng.choice(len(probs), size=shots, p=probs).astype(np.uint64)
        scalars = np.zeros(shots)
        for term in group:
            support = np.uint64(term.string.x_mask | term.string.z_mask)
            eigenvalues = 1.0 - 2.0 * _parity_u64(samples & support)
            scalars += float(np.real(term.coefficient)) * eigenvalues
        mean += float(np.mean(scalars))
        if shots > 1:
            variance += float(np.var(scalars, ddof=1)) / shots
    return SampledEstimate(mean=mean, stderr=math.sqrt(variance),
                           shots=shots, seed=seed)


def _matvec_factory(h):
    dim = 1 << h.n_qubits
    indices = np.arange(dim, dtype=np.uint64)
    terms = [(np.uint64(t.string.x_mask),
              t.coefficient * 1j ** t.string.n_y,
              t.string.z_mask) for t in h]

    def matvec(vec):
        vec = np.asarray(vec, dtype=complex).reshape(dim)
        out = np.zeros(dim, dtype=complex)
        for x_mask, scaled, z_mask in terms:
            signs = 1.0 - 2.0 * _parity_u64(indices & np.uint64(z_mask))
            contrib = scaled * (signs * vec)
            if x_mask:
                out[indices ^ x_mask] += contrib
            else:
                out += contrib
        return out

    return matvec


def exact_ground_energy(h, return_vector=False, method="auto",
                        dense_cutoff=_DENSE_CUTOFF, max_qubits=_SPARSE_CUTOFF):
    """Minimum eigenvalue of a Hermitian PauliSum, with optional eigenvector.

    Dense diagonalization up to `dense_cutoff` qubits, matrix-free Lanczos
    iteration beyond it up to `max_qubits`; anything larger is refused.
    """
    n = h.n_qubits
    if method not in ("auto", "dense", "sparse"):
        raise ValueError(f"unknown method {method!r}")
    if n > max_qubits:
        raise ResourceLimitError(
            f"{n} qubits exceeds the exact-diagonalization cap of {max_qubits}")
    if method == "dense" or (method == "auto" and n <= dense_cutoff):
        matrix = h.to_matrix()
        if return_vector:
            eigenvalues, eigenvectors = np.linalg.eigh(matrix)
            return float(eigenvalues[0]), eigenvectors[:, 0]
        return float(np.linalg.eigvalsh(matrix)[0]), None
    dim = 1 << n
    operator = LinearOperator((dim, dim), matvec=_matvec_factory(h),
                              dtype=complex)
    k = min(2, dim - 1)
    eigenvalues, eigenvectors = eigsh(operator, k=k, which="SA", tol=1e-9,
                                      maxiter=dim * 40)
    order = np.argsort(eigenvalues)
    ground = float(eigenvalues[order[0]])
    if return_vector:
        return ground, eigenvectors[:, order[0]]
    return ground, None
