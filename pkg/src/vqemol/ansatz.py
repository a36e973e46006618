"""UCCSD excitation enumeration and Trotterized circuit assembly.

Spin orbitals are block-ordered (alpha block then beta block).  Excitations
conserve S_z: singles stay within a spin block, doubles preserve the spin
multiset of the orbitals they move.  One first-order Trotter step turns the
anti-Hermitian cluster generator into a deterministic sequence of
Pauli-exponential blocks.
"""

from dataclasses import dataclass

from .circuit import Circuit, Gate, exponentiate_pauli
from .fermion import FermionOperator

_ANTI_HERMITIAN_TOL = 1e-10


@dataclass(frozen=True, slots=True)
class Excitation:
    kind: str
    occupied: tuple
    virtual: tuple
    parameter_index: int


def uccsd_excitations(n_spin_orbitals, hf_bits):
    """All spin-conserving singles and doubles out of a reference determinant.

    Singles come first, then doubles, each group in lexicographic index order,
    with parameter indices assigned in that sequence.
    """
    if n_spin_orbitals % 2:
        raise ValueError("spin-orbital count must be even (alpha and beta blocks)")
    m = n_spin_orbitals // 2
    occupied = [q for q in range(n_spin_orbitals) if (hf_bits >> q) & 1]
    virtual = [q for q in range(n_spin_orbitals) if not (hf_bits >> q) & 1]

    def spin(q):
        return 0 if q < m else 1

    excitations = []
    for i in occupied:
        for a in virtual:
            if spin(i) == spin(a):
                excitations.append(("single", (i,), (a,)))
    for ii, i in enumerate(occupied):
        for j in occupied[ii + 1:]:
            for ai, a in enumerate(virtual):
                for b in virtual[ai + 1:]:
                    if sorted((spin(i), spin(j))) == sorted((spin(a), spin(b))):
                        excitations.append(("double", (i, j), (a, b)))
    return tuple(Excitation(kind, occ, vir, k)
                 for k, (kind, occ, vir) in enumerate(excitations))


def excitation_generator(excitation, n_modes):
    """Unit-amplitude anti-Hermitian generator c†...c - h.c. for one excitation."""
    if excitation.kind == "single":
        (i,), (a,) = excitation.occupied, excitation.virtual
        forward = ((a, True), (i, False))
        backward = ((i, True), (a, False))
    elif excitation.kind == "double":
        (i, j), (a, b) = excitation.occupied, excitation.virtual
        forward = ((a, True), (b, True), (j, False), (i, False))
        backward = ((i, True), (j, True), (b, False), (a, False))
    else:
        raise ValueError(f"unknown excitation kind {excitation.kind!r}")
    return FermionOperator(n_modes, [(forward, 1.0), (backward, -1.0)])


def cluster_operator(excitations, theta, n_modes):
    """T(theta) - T(theta)† over the given excitations."""
    if len(theta) != len(excitations):
        raise ValueError(f"expected {len(excitations)} amplitudes, got {len(theta)}")
    raw = []
    for excitation, amplitude in zip(excitations, theta):
        generator = excitation_generator(excitation, n_modes)
        raw.extend((t.ladder, amplitude * t.coefficient) for t in generator.terms)
    return FermionOperator(n_modes, raw)


def screen_excitations(mapped_generators, symmetry_generators):
    """Indices of excitation generators compatible with all Z2 symmetries.

    A generator survives only if every one of its Pauli terms commutes with
    every symmetry; an excitation that breaks a symmetry cannot act within the
    tapered sector and is removed from the ansatz.
    """
    kept = []
    for idx, mapped in enumerate(mapped_generators):
        ok = all(term.string.commutes(sym)
                 for term in mapped for sym in symmetry_generators)
        if ok:
            kept.append(idx)
    return kept


def build_uccsd_circuit(n_qubits, hf_bits, mapped_generators,
                        drop_tol=1e-12):
    """HF preparation followed by one Trotter step of the cluster operator.

    mapped_generators holds one PauliSum per variational parameter, already
    encoded and tapered consistently with the Hamiltonian; entry k is the
    mapped image of the unit generator for parameter k.  Its coefficients
    must be purely imaginary (anti-Hermitian input); i*g*P contributes the
    block exp(-i*(-g*theta_k)*P).
    """
    gates = []
    for q in range(n_qubits):
        if (hf_bits >> q) & 1:
            gates.append(Gate("X", (q,)))
    n_parameters = len(mapped_generators)
    for k, mapped in enumerate(mapped_generators):
        if mapped.n_qubits != n_qubits:
            raise ValueError(
                f"generator {k} acts on {mapped.n_qubits} qubits, register has "
                f"{n_qubits}; encodings do not match")
        for term in mapped:
            coeff = term.coefficient
            if abs(coeff) < drop_tol:
                continue
            if abs(coeff.real) > _ANTI_HERMITIAN_TOL:
                raise ValueError(
                    f"generator {k} has a non-imaginary coefficient {coeff}; "
                    "cluster generators must be anti-Hermitian")
            if term.string.is_identity():
                continue
            block = exponentiate_pauli(term.string, (k, -coeff.imag),
                                       n_parameters=n_parameters)
            gates.extend(block.gates)
    return Circuit(n_qubits, gates, n_parameters=n_parameters)
