"""End-to-end assembly: molecular problem to qubit Hamiltonian and ansatz.

This wires the stages together in the standard order: spin-orbital
Hamiltonian, fermion-to-qubit encoding, optional parity two-qubit reduction,
optional Z2 tapering with automatic sector selection from the Hartree-Fock
reference, then excitation screening and UCCSD circuit construction on the
final register.
"""

import json
from dataclasses import dataclass, replace
from pathlib import Path

from .ansatz import (build_uccsd_circuit, excitation_generator,
                     uccsd_excitations)
from .chem import freeze_core, hf_bitstring, parse_fcidump, \
    spin_orbital_hamiltonian
from .mappings import (bravyi_kitaev_matrix, encode_bitstring,
                       find_z2_symmetries, jordan_wigner_matrix, map_bravyi_kitaev,
                       map_jordan_wigner, map_parity, parity_matrix,
                       reduce_bitstring, taper, taper_bitstring,
                       two_qubit_reduction)

ENCODINGS = ("jw", "parity", "bk")

_MAPPERS = {
    "jw": (map_jordan_wigner, jordan_wigner_matrix),
    "parity": (map_parity, parity_matrix),
    "bk": (map_bravyi_kitaev, bravyi_kitaev_matrix),
}


@dataclass(frozen=True)
class EncodedProblem:
    """A molecular problem fully lowered onto its final qubit register."""

    problem: object
    encoding: str
    hamiltonian: object
    hf_bits: int
    n_qubits: int
    pre_taper_qubits: int
    tapering_info: object
    excitations: tuple
    raw_n_excitations: int
    mapped_generators: tuple
    circuit: object

    @property
    def n_parameters(self):
        return len(self.mapped_generators)


def encode_problem(problem, encoding="parity", reduce_qubits=True,
                   tapering=True):
    """Lower a MolecularProblem to a qubit Hamiltonian, reference and ansatz.

    reduce_qubits applies the parity two-qubit reduction and therefore
    requires the parity encoding.  Tapering finds Z2 symmetries, fixes the
    sector from the encoded HF reference, removes one qubit per generator and
    drops UCCSD excitations whose generators leave the sector.
    """
    if encoding not in ENCODINGS:
        raise ValueError(f"unknown encoding {encoding!r}; pick from {ENCODINGS}")
    if reduce_qubits and encoding != "parity":
        raise ValueError("the two-qubit reduction requires the parity encoding")
    mapper, matrix_builder = _MAPPERS[encoding]
    n_modes = problem.n_spin_orbitals
    a_mat = matrix_builder(n_modes)

    hamiltonian = mapper(spin_orbital_hamiltonian(problem))
    bits = encode_bitstring(hf_bitstring(problem), a_mat)
    excitations = uccsd_excitations(n_modes, hf_bitstring(problem))
    generators = [mapper(excitation_generator(e, n_modes)) for e in excitations]

    if reduce_qubits:
        hamiltonian = two_qubit_reduction(hamiltonian, problem.n_alpha,
                                          problem.n_beta)
        bits = reduce_bitstring(bits, n_modes)
        generators = [two_qubit_reduction(g, problem.n_alpha, problem.n_beta)
                      for g in generators]
    pre_taper_qubits = hamiltonian.n_qubits

    info = None
    if tapering:
        info = find_z2_symmetries(hamiltonian, bits)
        if len(info) >= hamiltonian.n_qubits:
            raise ValueError("tapering would remove the whole register; "
                             "the problem is classically diagonal")
        if len(info):
            hamiltonian = taper(hamiltonian, info)
            bits = taper_bitstring(bits, info, pre_taper_qubits)
            survivors = []
            for excitation, generator in zip(excitations, generators):
                if all(term.string.commutes(sym)
                       for term in generator for sym in info.generators):
                    survivors.append((excitation, taper(generator, info)))
            pairs = survivors
        else:
            pairs = list(zip(excitations, generators))
    else:
        pairs = list(zip(excitations, generators))

    kept = [(replace(excitation, parameter_index=k), generator)
            for k, (excitation, generator) in enumerate(
                (e, g) for e, g in pairs if g.num_terms > 0)]
    tapered_excitations = tuple(e for e, _ in kept)
    tapered_generators = tuple(g for _, g in kept)
    circuit = build_uccsd_circuit(hamiltonian.n_qubits, bits,
                                  tapered_generators)
    return EncodedProblem(
        problem=problem,
        encoding=encoding,
        hamiltonian=hamiltonian,
        hf_bits=bits,
        n_qubits=hamiltonian.n_qubits,
        pre_taper_qubits=pre_taper_qubits,
        tapering_info=info,
        excitations=tapered_excitations,
        raw_n_excitations=len(excitations),
        mapped_generators=tapered_generators,
        circuit=circuit,
    )


def load_problem(fcidump_path, n_frozen="auto"):
    """Parse a fixture FCIDUMP and apply its frozen core.

    n_frozen "auto" reads `recommended_n_frozen` from the sidecar metadata
    file (same stem, .json); a missing sidecar means no freezing.  Returns
    (problem, metadata_dict).
    """
    path = Path(fcidump_path)
    text = path.read_text()
    label = path.parent.name if path.parent.name not in (".", "") else path.stem
    problem = parse_fcidump(text, label=label)
    sidecar = path.with_suffix(".json")
    metadata = {}
    if sidecar.exists():
        metadata = json.loads(sidecar.read_text())
    if n_frozen == "auto":
        n_frozen = int(metadata.get("recommended_n_frozen", 0))
    if n_frozen:
        problem = freeze_core(problem, n_frozen)
    return problem, metadata
