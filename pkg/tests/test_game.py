import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_ue.clifford import family_for
from clifford_ue.errors import DomainError
from clifford_ue.game import (
    Strategy,
    build_W,
    build_W_sparse,
    commuting_strategy_check,
    conjecture_bound,
    gamma_commuting_term_norm,
    gamma_strategy_norms,
    low_rank_strategy,
    low_rank_witness,
    product_state_value,
    random_hermitian_unitary,
    win_prob_from_norm,
)


def _dense_reference(fam, strat):
    """Direct Kronecker-product assembly of W_K."""
    d, D = fam.dim, strat.D
    I_D, I_d = np.eye(D), np.eye(d)
    W = 0
    for g, B, C in zip(fam.matrices, strat.B, strat.C):
        W = W + np.kron(g, np.kron(B, I_D) + np.kron(I_D, C)) + np.kron(I_d, np.kron(B, C))
    return W


@pytest.mark.parametrize("K,D", [(2, 2), (3, 3), (5, 2)])
def test_block_assembly_matches_kron(K, D):
    fam = family_for(K)
    strat = Strategy.random(K, D, 11)
    W = build_W(fam, strat).matrix
    assert np.allclose(W, _dense_reference(fam, strat))
    assert np.allclose(build_W_sparse(fam, strat.B, strat.C).toarray(), W)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_random_hermitian_unitary(D, seed):
    U = random_hermitian_unitary(D, seed)
    assert np.allclose(U, U.conj().T) and np.allclose(U @ U, np.eye(D), atol=1e-10)
    assert int(np.sum(np.linalg.eigvalsh(U) < 0)) == D // 2


def test_strategy_rejects_non_involution():
    with pytest.raises(DomainError):
        Strategy.symmetric([np.diag([1.0, 0.5])] * 2)


@pytest.mark.parametrize("K", range(2, 7))
def test_identity_strategy_reaches_conjecture(K):
    got = build_W(family_for(K), Strategy.identity(K)).norm
    assert got == pytest.approx(conjecture_bound(K)[0], abs=1e-9)


def test_gamma_norms_small():
    assert gamma_strategy_norms(5) == pytest.approx([4, 3, 6, 7], abs=1e-8)


def test_commuting_term_norm_equals_K():
    for K in (2, 3, 4):
        assert gamma_commuting_term_norm(family_for(K)) == pytest.approx(K)


@pytest.mark.parametrize("K", [2, 3, 4])
def test_low_rank_witness_hits_bound(K):
    fam = family_for(K)
    strat, u_perp = low_rank_strategy(fam, 2, 2 * K + 1, rng_seed=K)
    _, value = low_rank_witness(fam, strat, u_perp)
    assert value == pytest.approx(conjecture_bound(K)[0], abs=1e-9)


def test_low_rank_needs_room():
    with pytest.raises(DomainError):
        low_rank_strategy(family_for(3), 1, 3)


def test_commuting_strategies_respect_bound():
    rng = np.random.default_rng(0)
    fam = family_for(4)
    for _ in range(10):
        assert commuting_strategy_check(fam, rng.choice([-1, 1], size=(4, 3)))


def test_product_state_value_matches_dense():
    fam = family_for(3)
    strat = Strategy.random(3, 2, 5)
    rng = np.random.default_rng(1)
    a = rng.standard_normal(fam.dim) + 1j * rng.standard_normal(fam.dim)
    phi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    a, phi = a / np.linalg.norm(a), phi / np.linalg.norm(phi)
    psi = np.kron(a, phi)
    assert product_state_value(fam, strat, a, phi) == pytest.approx(build_W(fam, strat).expectation(psi))
    with pytest.raises(DomainError):
        product_state_value(fam, strat, 2 * a, phi)


def test_win_prob_from_norm():
    assert win_prob_from_norm(4, 8) == pytest.approx(0.75)
    assert conjecture_bound(4)[1] == pytest.approx(0.5 + 1 / (2 * math.sqrt(4)))
