"""FCIDUMP ingestion, frozen core, spin-orbital Hamiltonian assembly."""

import json
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from vqemol.chem import (FcidumpError, MolecularIntegrals, MolecularProblem,
                         freeze_core, hf_bitstring, hf_energy, parse_fcidump,
                         serialize_fcidump, spin_orbital_hamiltonian)
from oracles import (apply_ladder, hamiltonian_matrix_from_integrals,
                     operator_matrix, slater_condon_diagonal)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
ALL_FIXTURES = sorted(p.parent.name for p in FIXTURES.glob("*/sto-6g.fcidump"))

rng = np.random.default_rng(20240818)


def load_fixture(name):
    text = (FIXTURES / name / "sto-6g.fcidump").read_text()
    meta = json.loads((FIXTURES / name / "sto-6g.json").read_text())
    return parse_fcidump(text, label=name), meta


def make_random_integrals(m, core=0.0):
    h = rng.normal(size=(m, m))
    h = 0.5 * (h + h.T)
    g = rng.normal(size=(m, m, m, m))
    acc = np.zeros_like(g)
    for perm in ((0, 1, 2, 3), (1, 0, 2, 3), (0, 1, 3, 2), (1, 0, 3, 2),
                 (2, 3, 0, 1), (3, 2, 0, 1), (2, 3, 1, 0), (3, 2, 1, 0)):
        acc += g.transpose(perm)
    return MolecularIntegrals(m, core, h, acc / 8.0)


def test_parse_minimal_header():
    problem = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,\n &END\n 0.7 0 0 0 0\n")
    assert problem.integrals.n_spatial == 2
    assert problem.n_electrons == 2
    assert problem.ms2 == 0
    assert problem.n_frozen == 0
    assert problem.integrals.core_energy == 0.7


def test_parse_two_body_symmetry_fill():
    problem = parse_fcidump("&FCI NORB=2,NELEC=2,MS2=0,\n/\n 0.5 1 2 1 2\n")
    g = problem.integrals.two_body
    for p, q, r, s in ((0, 1, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0), (1, 0, 1, 0)):
        assert g[p, q, r, s] == 0.5
        assert g[r, s, p, q] == 0.5
    assert g[0, 0, 0, 0] == 0.0


def test_parse_fortran_d_exponent():
    problem = parse_fcidump("&FCI NORB=1,NELEC=2,MS2=0,\n&END\n 1.5D-01 1 1 0 0\n")
    assert problem.integrals.one_body[0, 0] == 0.15


@pytest.mark.parametrize("text, lineno", [
    ("&FCI NORB=2,NELEC=2,MS2=0,\nno terminator here", 2),
    ("&FCI NELEC=2,MS2=0,\n&END\n", 2),
    ("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.5 1 2\n", 3),
    ("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n abc 1 2 1 2\n", 3),
    ("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.5 1 3 1 2\n", 3),
    ("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.5 0 1 0 0\n", 3),
    ("&FCI NORB=2,NELEC=2,MS2=0,\n&END\n 0.5 1 2 1 0\n", 3),
])
def test_parse_errors_cite_line(text, lineno):
    with pytest.raises(FcidumpError, match=f"line {lineno}"):
        parse_fcidump(text)


def test_roundtrip_random_integrals():
    ints = make_random_integrals(3, core=-1.25)
    problem = MolecularProblem(ints, 4, 0, label="rand")
    again = parse_fcidump(serialize_fcidump(problem), label="rand")
    assert again.n_electrons == problem.n_electrons
    assert again.ms2 == problem.ms2
    assert_allclose(again.integrals.one_body, ints.one_body, atol=1e-15, rtol=0)
    assert_allclose(again.integrals.two_body, ints.two_body, atol=1e-15, rtol=0)
    assert again.integrals.core_energy == ints.core_energy


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixture_roundtrip(name):
    problem, _ = load_fixture(name)
    again = parse_fcidump(serialize_fcidump(problem))
    assert_allclose(again.integrals.one_body, problem.integrals.one_body,
                    atol=1e-15, rtol=0)
    assert_allclose(again.integrals.two_body, problem.integrals.two_body,
                    atol=1e-15, rtol=0)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixture_hf_energy_matches_sidecar(name):
    problem, meta = load_fixture(name)
    assert problem.n_electrons == meta["n_electrons"]
    assert_allclose(hf_energy(problem), meta["e_hf"], atol=1e-8, rtol=0)


def test_integral_invariants_enforced():
    h = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(ValueError, match="symmetric"):
        MolecularIntegrals(2, 0.0, h, np.zeros((2, 2, 2, 2)))
    g = np.zeros((2, 2, 2, 2))
    g[0, 1, 0, 0] = 1.0
    with pytest.raises(ValueError, match="8-fold"):
        MolecularIntegrals(2, 0.0, np.zeros((2, 2)), g)
    with pytest.raises(ValueError, match="parity"):
        MolecularProblem(make_random_integrals(2), 3, 0)


def test_freeze_core_zero_is_identity():
    problem, _ = load_fixture("h2o")
    frozen = freeze_core(problem, 0)
    assert frozen.n_electrons == problem.n_electrons
    assert frozen.n_frozen == 0
    assert np.array_equal(frozen.integrals.one_body, problem.integrals.one_body)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_freeze_core_preserves_hf_energy(name):
    problem, _ = load_fixture(name)
    reference = hf_energy(problem)
    for k in range(1, problem.n_beta):
        frozen = freeze_core(problem, k)
        assert frozen.integrals.n_spatial == problem.integrals.n_spatial - k
        assert frozen.n_electrons == problem.n_electrons - 2 * k
        assert frozen.n_frozen == k
        assert_allclose(hf_energy(frozen), reference, atol=1e-9, rtol=0)


def test_freeze_core_active_electron_count():
    problem, meta = load_fixture("h2o")
    frozen = freeze_core(problem, meta["recommended_n_frozen"])
    assert frozen.n_electrons == 8


def test_freeze_core_rejects_too_many():
    problem, _ = load_fixture("h2")
    with pytest.raises(ValueError):
        freeze_core(problem, 2)
    with pytest.raises(ValueError):
        freeze_core(problem, -1)


def test_hf_energy_zero_integrals_is_core():
    ints = MolecularIntegrals(2, -3.25, np.zeros((2, 2)), np.zeros((2, 2, 2, 2)))
    assert hf_energy(MolecularProblem(ints, 2, 0)) == -3.25


def test_hf_energy_open_shell_matches_diagonal_rule():
    for _ in range(10):
        m = int(rng.integers(1, 4))
        ne = int(rng.integers(1, 2 * m + 1))
        ms2 = ne % 2 + 2 * int(rng.integers(0, (min(ne, 2 * m - ne) - ne % 2) // 2 + 1))
        problem = MolecularProblem(make_random_integrals(m, core=rng.normal()), ne, ms2)
        occ = list(range(problem.n_alpha)) + [m + i for i in range(problem.n_beta)]
        assert_allclose(hf_energy(problem),
                        slater_condon_diagonal(problem.integrals, occ), atol=1e-10)


def test_hf_bitstring_example():
    ints = MolecularIntegrals(2, 0.0, np.zeros((2, 2)), np.zeros((2, 2, 2, 2)))
    problem = MolecularProblem(ints, 2, 0)
    assert hf_bitstring(problem) == (1 << 0) | (1 << 2)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_hf_bitstring_popcount(name):
    problem, _ = load_fixture(name)
    assert bin(hf_bitstring(problem)).count("1") == problem.n_electrons


def test_spin_orbital_hamiltonian_single_orbital():
    ints = MolecularIntegrals(1, 0.5, np.array([[-1.0]]), np.zeros((1, 1, 1, 1)))
    op = spin_orbital_hamiltonian(MolecularProblem(ints, 2, 0))
    assert op.n_modes == 2
    assert op.constant == 0.5
    coeffs = {t.ladder: t.coefficient for t in op.terms}
    assert coeffs == {((0, True), (0, False)): -1.0, ((1, True), (1, False)): -1.0}


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_hamiltonian_hf_expectation_is_hf_energy(name):
    problem, _ = load_fixture(name)
    problem = freeze_core(problem, 2) if problem.n_beta > 2 else problem
    op = spin_orbital_hamiltonian(problem)
    hf = hf_bitstring(problem)
    value = complex(op.constant)
    for term in op.terms:
        hit = apply_ladder(term.ladder, hf)
        if hit is not None and hit[1] == hf:
            value += hit[0] * term.coefficient
    assert abs(value.imag) < 1e-12
    assert_allclose(value.real, hf_energy(problem), atol=1e-9, rtol=0)


def test_hamiltonian_is_hermitian():
    problem = MolecularProblem(make_random_integrals(2, core=0.3), 2, 0)
    op = spin_orbital_hamiltonian(problem)
    dagger = op.dagger()
    assert dagger.constant == op.constant
    forward = {t.ladder: t.coefficient for t in op.terms}
    backward = {t.ladder: t.coefficient for t in dagger.terms}
    assert forward.keys() == backward.keys()
    for ladder, coeff in forward.items():
        assert_allclose(backward[ladder], coeff, atol=1e-14, rtol=0)


def test_hamiltonian_matches_brute_force_matrix():
    for _ in range(5):
        problem = MolecularProblem(make_random_integrals(2, core=rng.normal()), 2, 0)
        direct = hamiltonian_matrix_from_integrals(problem.integrals)
        built = operator_matrix(spin_orbital_hamiltonian(problem))
        assert_allclose(built, direct, atol=1e-10)


def test_full_ci_below_hf_h2():
    problem, _ = load_fixture("h2")
    mat = operator_matrix(spin_orbital_hamiltonian(problem))
    assert_allclose(mat, mat.conj().T, atol=1e-12)
    eigs = np.linalg.eigvalsh(mat)
    # restrict to the 2-electron sector for the variational comparison
    sector = [idx for idx in range(16) if bin(idx).count("1") == 2]
    sector_mat = mat[np.ix_(sector, sector)]
    ground = np.linalg.eigvalsh(sector_mat)[0]
    assert ground <= hf_energy(problem) + 1e-9
    assert eigs[0] <= ground + 1e-12
