import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_ue.clifford import (
    PauliString,
    anticommutator_is_canonical,
    family_for,
    jordan_wigner_generators,
    jordan_wigner_strings,
    linear_combination_norm_check,
    minimal_qubits,
    operator_norm,
    pauli_to_dense,
)
from clifford_ue.errors import DomainError, UnsatisfiableRequest

pauli_words = st.integers(1, 4).flatmap(lambda n: st.tuples(*[st.text("IXYZ", min_size=n, max_size=n)] * 3))


def test_jordan_wigner_strings_one_qubit():
    assert [str(p) for p in jordan_wigner_strings(1)] == ["Y", "Z", "X"]


def test_jordan_wigner_strings_two_qubits():
    assert [str(p) for p in jordan_wigner_strings(2)] == ["YI", "ZI", "XY", "XZ", "XX"]


@pytest.mark.parametrize("lam", range(1, 7))
def test_full_family_is_exact_clifford(lam):
    assert jordan_wigner_generators(lam, 2 * lam + 1).is_exact_clifford()


def test_symbolic_product_matches_dense():
    for a, b in itertools.product(jordan_wigner_strings(2), repeat=2):
        k, r = a.multiply(b)
        assert np.allclose(pauli_to_dense(a) @ pauli_to_dense(b), (1j**k) * pauli_to_dense(r))


@given(pauli_words)
def test_multiplication_is_associative(words):
    a, b, c = (PauliString(w) for w in words)
    k1, ab = a.multiply(b)
    k2, abc = ab.multiply(c)
    k3, bc = b.multiply(c)
    k4, a_bc = a.multiply(bc)
    assert abc == a_bc and (k1 + k2) % 4 == (k3 + k4) % 4


@given(pauli_words)
def test_strings_commute_or_anticommute(words):
    a, b, _ = (PauliString(w) for w in words)
    A, B = pauli_to_dense(a), pauli_to_dense(b)
    if a.commutes_with(b):
        assert np.allclose(A @ B, B @ A)
    else:
        assert np.allclose(A @ B, -B @ A)


def test_canonical_anticommutator_cases():
    p = PauliString("XZ")
    assert anticommutator_is_canonical(-p, -p)
    assert anticommutator_is_canonical(p, PauliString("XX"))
    assert not anticommutator_is_canonical(p, PauliString("IZ"))


def test_too_many_generators_is_unsatisfiable():
    with pytest.raises(UnsatisfiableRequest):
        jordan_wigner_generators(2, 6)


@pytest.mark.parametrize("bad", ["", "XA"])
def test_invalid_pauli_letters(bad):
    with pytest.raises(DomainError):
        PauliString(bad)


@pytest.mark.parametrize("K,lam", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 2), (6, 3), (9, 4), (18, 9)])
def test_minimal_qubits(K, lam):
    assert minimal_qubits(K) == lam
    assert K <= 2 * lam + 1


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 9), st.lists(st.floats(-10, 10, allow_nan=False), min_size=9, max_size=9))
def test_norm_identity(K, coeffs):
    fam = family_for(K)
    check = linear_combination_norm_check(fam, coeffs[:K])
    assert check, check.line()


def test_operator_norm_rejects_non_hermitian():
    with pytest.raises(DomainError):
        operator_norm(np.array([[0, 1], [0, 0]]))
