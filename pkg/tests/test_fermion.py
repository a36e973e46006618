"""Normal ordering checked against brute-force Fock-space matrices."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from vqemol.fermion import FermionOperator, FermionTerm
from oracles import ladder_matrix, operator_matrix

rng = np.random.default_rng(20240818)


def random_ladder(n_modes, max_len):
    length = rng.integers(0, max_len + 1)
    return tuple((int(rng.integers(0, n_modes)), bool(rng.integers(0, 2)))
                 for _ in range(length))


def test_canonical_anticommutator_is_identity():
    # c_p c†_p + c†_p c_p = 1, exhaustively over the first four modes
    for p in range(4):
        lower_raise = FermionOperator.from_ladder(4, ((p, False), (p, True)))
        raise_lower = FermionOperator.from_ladder(4, ((p, True), (p, False)))
        total = lower_raise + raise_lower
        assert total.num_terms == 0
        assert total.constant == 1.0


def test_anticommutators_exhaustive():
    n = 4
    for p in range(n):
        for q in range(n):
            cc = (FermionOperator.from_ladder(n, ((p, False), (q, False)))
                  + FermionOperator.from_ladder(n, ((q, False), (p, False))))
            assert cc.num_terms == 0 and cc.constant == 0.0
            dd = (FermionOperator.from_ladder(n, ((p, True), (q, True)))
                  + FermionOperator.from_ladder(n, ((q, True), (p, True))))
            assert dd.num_terms == 0 and dd.constant == 0.0
            mixed = (FermionOperator.from_ladder(n, ((p, False), (q, True)))
                     + FermionOperator.from_ladder(n, ((q, True), (p, False))))
            assert mixed.num_terms == 0
            assert mixed.constant == (1.0 if p == q else 0.0)


def test_normal_ordering_preserves_matrix():
    for _ in range(60):
        n = int(rng.integers(2, 6))
        ladder = random_ladder(n, 6)
        coeff = complex(rng.normal(), rng.normal())
        raw = coeff * ladder_matrix(n, ladder)
        op = FermionOperator(n, [(ladder, coeff)])
        assert_allclose(operator_matrix(op), raw, atol=1e-12)


def test_terms_are_normal_ordered_and_merged():
    op = FermionOperator(3, [
        (((0, False), (1, True)), 1.0),
        (((1, True), (0, False)), 2.0),
    ])
    # both inputs describe -+/+- orderings of the same pair; they merge
    assert op.num_terms == 1
    term = op.terms[0]
    assert term.ladder == ((1, True), (0, False))
    assert term.coefficient == -1.0 + 2.0
    for t in op.terms:
        kinds = [r for _, r in t.ladder]
        assert kinds == sorted(kinds, reverse=True)


def test_equal_mode_pairs_vanish():
    op = FermionOperator(2, [(((1, True), (1, True)), 3.0)])
    assert op.num_terms == 0 and op.constant == 0.0
    op = FermionOperator(2, [(((0, False), (0, False)), 3.0)])
    assert op.num_terms == 0 and op.constant == 0.0


def test_number_operator_is_idempotent():
    n_op = FermionOperator.from_ladder(3, ((2, True), (2, False)))
    assert_allclose(operator_matrix(n_op * n_op), operator_matrix(n_op), atol=1e-14)


def test_product_matches_matrix_product():
    for _ in range(30):
        n = int(rng.integers(2, 5))
        a = FermionOperator(n, [(random_ladder(n, 4), complex(rng.normal(), rng.normal()))
                                for _ in range(3)], constant=rng.normal())
        b = FermionOperator(n, [(random_ladder(n, 4), complex(rng.normal(), rng.normal()))
                                for _ in range(3)], constant=rng.normal())
        assert_allclose(operator_matrix(a * b),
                        operator_matrix(a) @ operator_matrix(b), atol=1e-10)


def test_dagger_is_conjugate_transpose():
    for _ in range(30):
        n = int(rng.integers(2, 5))
        op = FermionOperator(n, [(random_ladder(n, 5), complex(rng.normal(), rng.normal()))
                                 for _ in range(4)],
                             constant=complex(rng.normal(), rng.normal()))
        assert_allclose(operator_matrix(op.dagger()),
                        operator_matrix(op).conj().T, atol=1e-12)


def test_addition_and_scalar_arithmetic():
    n = 3
    a = FermionOperator.from_ladder(n, ((2, True), (0, False)), 0.5)
    b = FermionOperator.from_ladder(n, ((1, True), (1, False)), -2.0)
    combo = 2.0 * a + b - a
    assert_allclose(operator_matrix(combo),
                    operator_matrix(a) + operator_matrix(b), atol=1e-14)
    shifted = a + 1.5
    assert shifted.constant == 1.5


def test_simplify_drops_small_terms():
    op = FermionOperator(2, [
        (((1, True), (0, False)), 1e-15),
        (((0, True), (0, False)), 1.0),
    ], constant=1e-16)
    out = op.simplify()
    assert out.num_terms == 1
    assert out.constant == 0.0
    assert op.num_terms == 2  # simplify returns a new operator


def test_mode_bounds_checked():
    with pytest.raises(ValueError):
        FermionOperator(2, [(((2, True),), 1.0)])
    with pytest.raises(ValueError):
        FermionOperator(0)


@st.composite
def ladder_strategy(draw):
    n = draw(st.integers(min_value=2, max_value=4))
    length = draw(st.integers(min_value=0, max_value=5))
    ladder = tuple((draw(st.integers(0, n - 1)), draw(st.booleans()))
                   for _ in range(length))
    return n, ladder


@given(ladder_strategy())
@settings(max_examples=100, deadline=None)
def test_normal_ordering_idempotent(case):
    n, ladder = case
    once = FermionOperator(n, [(ladder, 1.0)])
    twice = FermionOperator(n, [(t.ladder, t.coefficient) for t in once.terms],
                            constant=once.constant)
    assert once == twice
