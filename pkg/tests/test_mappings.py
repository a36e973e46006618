"""Encodings and qubit elimination checked against Fock-space matrices."""

import json
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from vqemol.chem import freeze_core, hf_bitstring, hf_energy, parse_fcidump, \
    spin_orbital_hamiltonian
from vqemol.fermion import FermionOperator
from vqemol.mappings import (TaperingInfo, bravyi_kitaev_matrix,
                             encode_bitstring, find_z2_symmetries,
                             jordan_wigner_matrix, map_bravyi_kitaev,
                             map_jordan_wigner, map_parity, parity_matrix,
                             reduce_bitstring, taper, taper_bitstring,
                             two_qubit_reduction)
from vqemol.pauli import PauliString, PauliSum
from oracles import operator_matrix, pauli_sum_matrix

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

rng = np.random.default_rng(20240819)


def load_problem(name):
    text = (FIXTURES / name / "sto-6g.fcidump").read_text()
    return parse_fcidump(text, label=name)


def random_hermitian_operator(n_modes, n_quadratic=4, n_quartic=0):
    """Random Hermitian FermionOperator built as sum of t + t†."""
    raw = []
    for _ in range(n_quadratic):
        p, q = rng.integers(0, n_modes, size=2)
        coeff = complex(rng.normal(), rng.normal())
        raw.append(((((int(p), True), (int(q), False))), coeff))
        raw.append(((((int(q), True), (int(p), False))), coeff.conjugate()))
    for _ in range(n_quartic):
        p, q, r, s = rng.integers(0, n_modes, size=4)
        coeff = complex(rng.normal(), rng.normal())
        ladder = ((int(p), True), (int(q), True), (int(r), False), (int(s), False))
        raw.append((ladder, coeff))
        rev = ((int(s), True), (int(r), True), (int(q), False), (int(p), False))
        raw.append((rev, coeff.conjugate()))
    return FermionOperator(n_modes, raw, constant=rng.normal())


def number_operator(n_modes, mode):
    return FermionOperator.from_ladder(n_modes, ((mode, True), (mode, False)))


def test_jw_number_operator_single_mode():
    mapped = map_jordan_wigner(number_operator(1, 0))
    assert mapped.coefficient(PauliString.identity(1)) == pytest.approx(0.5)
    assert mapped.coefficient(PauliString.from_axes("Z")) == pytest.approx(-0.5)
    assert mapped.num_terms == 2


def test_jw_number_operator_skips_lower_qubits():
    mapped = map_jordan_wigner(number_operator(2, 1))
    assert mapped.coefficient(PauliString.from_axes("IZ")) == pytest.approx(-0.5)
    assert mapped.coefficient(PauliString.from_axes("ZI")) == 0.0
    assert mapped.coefficient(PauliString.from_axes("ZZ")) == 0.0


def test_jw_matches_occupation_matrix():
    for _ in range(20):
        op = random_hermitian_operator(3, n_quadratic=3)
        assert_allclose(pauli_sum_matrix(map_jordan_wigner(op)),
                        operator_matrix(op), atol=1e-12)


def test_jw_single_ladder_operators():
    # c_1 on 2 modes: Z on qubit 0, (X+iY)/2 on qubit 1
    lowering = FermionOperator.from_ladder(2, ((1, False),))
    mapped = map_jordan_wigner(lowering)
    assert_allclose(pauli_sum_matrix(mapped), operator_matrix(lowering), atol=1e-14)
    assert mapped.coefficient(PauliString.from_axes("ZX")) == pytest.approx(0.5)
    assert mapped.coefficient(PauliString.from_axes("ZY")) == pytest.approx(0.5j)


def test_parity_number_operator():
    mapped = map_parity(number_operator(2, 0))
    assert mapped.coefficient(PauliString.identity(2)) == pytest.approx(0.5)
    assert mapped.coefficient(PauliString.from_axes("ZI")) == pytest.approx(-0.5)
    assert mapped.num_terms == 2


def test_parity_preserves_mode_count():
    op = random_hermitian_operator(3)
    assert map_parity(op).n_qubits == 3


def test_bk_single_mode_equals_jw():
    op = number_operator(1, 0)
    assert map_bravyi_kitaev(op) == map_jordan_wigner(op)


def test_bk_matrix_structure():
    assert_allclose(bravyi_kitaev_matrix(4),
                    [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 1]])
    assert_allclose(bravyi_kitaev_matrix(3), [[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert_allclose(bravyi_kitaev_matrix(2), parity_matrix(2))


@pytest.mark.parametrize("mapper", [map_parity, map_bravyi_kitaev])
def test_encodings_match_occupation_matrix(mapper):
    # the encoded state permutes basis labels, so compare full spectra and
    # traces of powers instead of raw matrices
    for _ in range(10):
        op = random_hermitian_operator(3, n_quadratic=3, n_quartic=1)
        mapped = pauli_sum_matrix(mapper(op))
        direct = operator_matrix(op)
        assert_allclose(np.sort(np.linalg.eigvalsh(mapped)),
                        np.sort(np.linalg.eigvalsh(direct)), atol=1e-10)


def test_three_encodings_isospectral():
    for n_modes in (2, 3, 4):
        op = random_hermitian_operator(n_modes, n_quadratic=3, n_quartic=2)
        eigs = [np.sort(np.linalg.eigvalsh(pauli_sum_matrix(m(op))))
                for m in (map_jordan_wigner, map_parity, map_bravyi_kitaev)]
        assert_allclose(eigs[1], eigs[0], atol=1e-10)
        assert_allclose(eigs[2], eigs[0], atol=1e-10)


def test_encodings_permute_basis_states():
    # the parity/BK encodings relabel each occupation basis state; check the
    # number operator is diagonal with the right pattern
    for n_modes, mapper, a_builder in ((3, map_parity, parity_matrix),
                                       (4, map_bravyi_kitaev, bravyi_kitaev_matrix)):
        a_mat = a_builder(n_modes)
        total = sum((number_operator(n_modes, m) for m in range(n_modes)),
                    FermionOperator(n_modes))
        mat = pauli_sum_matrix(mapper(total))
        assert_allclose(mat, np.diag(np.diag(mat)), atol=1e-12)
        for bits in range(1 << n_modes):
            encoded = encode_bitstring(bits, a_mat)
            assert mat[encoded, encoded] == pytest.approx(bin(bits).count("1"))


def test_mapped_hamiltonians_are_hermitian():
    problem = load_problem("h2")
    op = spin_orbital_hamiltonian(problem)
    for mapper in (map_jordan_wigner, map_parity, map_bravyi_kitaev):
        assert mapper(op).max_abs_imag() < 1e-10


def test_two_qubit_reduction_h2():
    problem = load_problem("h2")
    op = spin_orbital_hamiltonian(problem)
    full = pauli_sum_matrix(map_jordan_wigner(op))
    sector = [idx for idx in range(16)
              if bin(idx & 0b0011).count("1") == 1 and bin(idx >> 2).count("1") == 1]
    sector_ground = np.linalg.eigvalsh(full[np.ix_(sector, sector)])[0]
    reduced = two_qubit_reduction(map_parity(op), problem.n_alpha, problem.n_beta)
    assert reduced.n_qubits == 2
    reduced_eigs = np.linalg.eigvalsh(pauli_sum_matrix(reduced))
    assert_allclose(reduced_eigs[0], sector_ground, atol=1e-10)
    assert reduced.max_abs_imag() < 1e-10


def test_two_qubit_reduction_identity_only():
    s = PauliSum(4, [(PauliString.identity(4), 2.5)])
    reduced = two_qubit_reduction(s, 1, 1)
    assert reduced.n_qubits == 2
    assert reduced.identity_coefficient == 2.5
    assert reduced.num_terms == 1


def test_two_qubit_reduction_rejects_non_parity():
    problem = load_problem("h2")
    jw = map_jordan_wigner(spin_orbital_hamiltonian(problem))
    with pytest.raises(ValueError, match="fixed-parity"):
        two_qubit_reduction(jw, 1, 1)


def test_find_symmetries_of_diagonal_sum():
    s = PauliSum(2, [(PauliString.from_axes("ZI"), 1.0),
                     (PauliString.from_axes("ZZ"), 0.25)])
    info = find_z2_symmetries(s)
    found = {g.z_mask for g in info.generators}
    assert {0b01, 0b10} <= found


def test_found_generators_commute_with_all_terms():
    problem = load_problem("h2")
    for mapper in (map_jordan_wigner, map_parity, map_bravyi_kitaev):
        mapped = mapper(spin_orbital_hamiltonian(problem))
        info = find_z2_symmetries(mapped, hf_bitstring(problem))
        assert len(info) > 0
        for gen in info.generators:
            for term in mapped:
                assert gen.commutes(term.string)


def test_no_symmetries_returns_empty_info():
    s = PauliSum(2, [(PauliString.from_axes("XI"), 1.0),
                     (PauliString.from_axes("IX"), 1.0),
                     (PauliString.from_axes("YX"), 0.5)])
    info = find_z2_symmetries(s)
    assert len(info) == 0
    assert taper(s, info) is s


def test_taper_h2_jw_preserves_ground():
    problem = load_problem("h2")
    op = spin_orbital_hamiltonian(problem)
    jw = map_jordan_wigner(op)
    hf = hf_bitstring(problem)
    info = find_z2_symmetries(jw, hf)
    tapered = taper(jw, info)
    assert tapered.n_qubits <= 2
    assert tapered.max_abs_imag() < 1e-10
    full = pauli_sum_matrix(jw)
    sector = [idx for idx in range(16)
              if all(bin(idx & g.z_mask).count("1") % 2 == (0 if e == 1 else 1)
                     for g, e in zip(info.generators, info.sector))]
    sector_eigs = np.sort(np.linalg.eigvalsh(full[np.ix_(sector, sector)]))
    tapered_eigs = np.sort(np.linalg.eigvalsh(pauli_sum_matrix(tapered)))
    assert_allclose(tapered_eigs, sector_eigs, atol=1e-10)
    # physical ground state (2-electron sector) lives in the kept sector
    two_e = [idx for idx in range(16) if bin(idx).count("1") == 2]
    ground_2e = np.linalg.eigvalsh(full[np.ix_(two_e, two_e)])[0]
    assert_allclose(tapered_eigs[0], ground_2e, atol=1e-10)


def test_taper_random_number_conserving_operator():
    for _ in range(5):
        n = 5
        raw = []
        for _ in range(6):
            p, q = rng.integers(0, n, size=2)
            coeff = complex(rng.normal(), rng.normal())
            raw.append(((((int(p), True), (int(q), False))), coeff))
            raw.append(((((int(q), True), (int(p), False))), coeff.conjugate()))
        op = FermionOperator(n, raw)
        jw = map_jordan_wigner(op)
        info = find_z2_symmetries(jw, 0b00011)
        assert len(info) >= 1
        tapered = taper(jw, info)
        full = pauli_sum_matrix(jw)
        dim = 1 << n
        sector = [idx for idx in range(dim)
                  if all(bin(idx & g.z_mask).count("1") % 2 == (0 if e == 1 else 1)
                         for g, e in zip(info.generators, info.sector))]
        assert_allclose(np.sort(np.linalg.eigvalsh(pauli_sum_matrix(tapered))),
                        np.sort(np.linalg.eigvalsh(full[np.ix_(sector, sector)])),
                        atol=1e-9)


def test_taper_rejects_foreign_info():
    s = PauliSum(2, [(PauliString.from_axes("XX"), 1.0)])
    bad = TaperingInfo((PauliString.from_axes("ZI"),), (0,), (1,))
    with pytest.raises(ValueError, match="anticommutes"):
        taper(s, bad)


def test_tapering_info_validation():
    with pytest.raises(ValueError, match="align"):
        TaperingInfo((PauliString.from_axes("ZI"),), (0,), (1, -1))
    with pytest.raises(ValueError, match="sector"):
        TaperingInfo((PauliString.from_axes("ZI"),), (0,), (2,))
    with pytest.raises(ValueError, match="Z-type"):
        TaperingInfo((PauliString.from_axes("XI"),), (0,), (1,))
    with pytest.raises(ValueError, match="removed qubit"):
        TaperingInfo((PauliString.from_axes("ZI"),), (1,), (1,))


def test_taper_bitstring_h2():
    problem = load_problem("h2")
    op = spin_orbital_hamiltonian(problem)
    jw = map_jordan_wigner(op)
    hf = hf_bitstring(problem)
    info = find_z2_symmetries(jw, hf)
    tapered_bits = taper_bitstring(hf, info, 4)
    tapered = taper(jw, info)
    mat = pauli_sum_matrix(tapered)
    hf_element = mat[tapered_bits, tapered_bits].real
    assert_allclose(hf_element, hf_energy(problem), atol=1e-9)


def test_taper_bitstring_rejects_wrong_sector():
    info = TaperingInfo((PauliString.from_axes("ZZ"),), (0,), (-1,))
    with pytest.raises(ValueError, match="sector"):
        taper_bitstring(0b00, info, 2)
    assert taper_bitstring(0b01, info, 2) == 0b0


def test_parity_reduction_plus_taper_h2_single_qubit():
    problem = load_problem("h2")
    op = spin_orbital_hamiltonian(problem)
    parity = map_parity(op)
    reduced = two_qubit_reduction(parity, problem.n_alpha, problem.n_beta)
    encoded_hf = encode_bitstring(hf_bitstring(problem), parity_matrix(4))
    reduced_hf = reduce_bitstring(encoded_hf, 4)
    info = find_z2_symmetries(reduced, reduced_hf)
    tapered = taper(reduced, info)
    assert tapered.n_qubits == 1
    reduced_eigs = np.linalg.eigvalsh(pauli_sum_matrix(reduced))
    tapered_eigs = np.linalg.eigvalsh(pauli_sum_matrix(tapered))
    assert_allclose(tapered_eigs[0], reduced_eigs[0], atol=1e-10)


@pytest.mark.parametrize("name, expected_qubits", [("h2o", 8), ("oh-", 6)])
def test_pipeline_qubit_counts(name, expected_qubits):
    problem = load_problem(name)
    meta = json.loads((FIXTURES / name / "sto-6g.json").read_text())
    problem = freeze_core(problem, meta["recommended_n_frozen"])
    op = spin_orbital_hamiltonian(problem)
    parity = map_parity(op)
    n = parity.n_qubits
    reduced = two_qubit_reduction(parity, problem.n_alpha, problem.n_beta)
    encoded = encode_bitstring(hf_bitstring(problem), parity_matrix(n))
    reduced_hf = reduce_bitstring(encoded, n)
    info = find_z2_symmetries(reduced, reduced_hf)
    tapered = taper(reduced, info)
    assert tapered.n_qubits == expected_qubits
    assert tapered.max_abs_imag() < 1e-10


def test_encode_bitstring_parity():
    a_mat = parity_matrix(4)
    # occupations 1,0,1,0 -> prefix parities 1,1,0,0 -> bits 0 and 1 set
    assert encode_bitstring(0b0101, a_mat) == 0b0011
    assert encode_bitstring(0b0000, a_mat) == 0
