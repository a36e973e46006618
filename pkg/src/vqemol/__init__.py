"""VQE simulation toolkit for molecular ground-state energies."""

from .ansatz import (Excitation, build_uccsd_circuit, cluster_operator,
                     excitation_generator, screen_excitations,
                     uccsd_excitations)
from .backends import (SampledEstimate, Statevector, apply,
                       exact_ground_energy, expval_direct, expval_sampled,
                       group_qubitwise)
from .bench import (BenchmarkRecord, RunConfig, emit_table, estimate,
                    inspect, parse_csv, run_config, run_full, suite_fixtures)
from .chem import (MolecularIntegrals, MolecularProblem, freeze_core,
                   hf_bitstring, hf_energy, parse_fcidump, serialize_fcidump,
                   spin_orbital_hamiltonian)
from .circuit import (Circuit, CircuitStats, Gate, cancel_adjacent_cnots,
                      exponentiate_pauli, fuse_single_qubit_gates, transpile,
                      zyz_angles)
from .errors import ResourceLimitError
from .fermion import FermionOperator, FermionTerm
from .mappings import (TaperingInfo, find_z2_symmetries, map_bravyi_kitaev,
                       map_jordan_wigner, map_parity, taper, taper_bitstring,
                       two_qubit_reduction)
from .pauli import PauliString, PauliSum, PauliTerm, pauli_multiply, qubitwise_commutes
from .pipeline import EncodedProblem, encode_problem, load_problem
from .vqe import TraceRecord, VqeConfig, VqeResult, VqeSolver

__all__ = [
    "BenchmarkRecord",
    "Circuit",
    "CircuitStats",
    "EncodedProblem",
    "Excitation",
    "FermionOperator",
    "FermionTerm",
    "Gate",
    "MolecularIntegrals",
    "MolecularProblem",
    "PauliString",
    "PauliSum",
    "PauliTerm",
    "ResourceLimitError",
    "RunConfig",
    "SampledEstimate",
    "Statevector",
    "TaperingInfo",
    "TraceRecord",
    "VqeConfig",
    "VqeResult",
    "VqeSolver",
    "apply",
    "build_uccsd_circuit",
    "cancel_adjacent_cnots",
    "cluster_operator",
    "emit_table",
    "encode_problem",
    "estimate",
    "exact_ground_energy",
    "excitation_generator",
    "exponentiate_pauli",
    "expval_direct",
    "expval_sampled",
    "find_z2_symmetries",
    "freeze_core",
    "fuse_single_qubit_gates",
    "group_qubitwise",
    "hf_bitstring",
    "hf_energy",
    "inspect",
    "load_problem",
    "map_bravyi_kitaev",
    "map_jordan_wigner",
    "map_parity",
    "parse_csv",
    "parse_fcidump",
    "pauli_multiply",
    "qubitwise_commutes",
    "run_config",
    "run_full",
    "screen_excitations",
    "serialize_fcidump",
    "spin_orbital_hamiltonian",
    "suite_fixtures",
    "taper",
    "taper_bitstring",
    "transpile",
    "two_qubit_reduction",
    "zyz_angles",
]
