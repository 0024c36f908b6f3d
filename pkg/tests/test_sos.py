import math

import numpy as np
import pytest

from clifford_ue.clifford import family_for
from clifford_ue.errors import DomainError
from clifford_ue.game import Strategy, build_W, conjecture_bound
from clifford_ue.sos import (
    SoSCertificate,
    alpha_coefficient,
    certificate_sweep,
    evaluate_P,
    leading_coefficient,
    verify_bc23_certificate,
    verify_family_certificate,
)


def test_alpha_examples():
    assert alpha_coefficient(2) == pytest.approx(math.sqrt(2) - 1)
    assert alpha_coefficient(7) == pytest.approx((19 * math.sqrt(7) - 49) / 84)
    assert alpha_coefficient(8) == pytest.approx((22 * math.sqrt(8) - 64) / 112)


def test_alpha_sign_flip():
    assert all(alpha_coefficient(K) > 0 for K in range(2, 8))
    assert all(alpha_coefficient(K) < 0 for K in range(8, 40))
    assert SoSCertificate.for_K(7).is_sos and not SoSCertificate.for_K(8).is_sos


def test_leading_coefficient():
    assert leading_coefficient(4) == pytest.approx(2 / 24)


def test_evaluate_P_identity_floor():
    fam = family_for(3)
    P = evaluate_P(fam, Strategy.identity(3, 1))
    assert np.linalg.eigvalsh(P)[0] == pytest.approx(0, abs=1e-12)


def test_evaluate_P_gamma_K3():
    fam = family_for(3)
    P = evaluate_P(fam, Strategy.gamma(fam))
    assert np.linalg.eigvalsh(P)[0] == pytest.approx(2 * math.sqrt(3), abs=1e-10)


def test_evaluate_P_dimension_mismatch():
    with pytest.raises(DomainError):
        evaluate_P(family_for(3), Strategy.identity(2))


@pytest.mark.parametrize("K", range(2, 9))
def test_family_identity(K):
    for check in certificate_sweep(K, trials=4, seed=K):
        assert check.residual <= 1e-9
        assert check.min_square_eig >= -1e-10
        if K <= 7:
            assert check.min_P_eig >= -1e-8


def test_family_identity_identity_strategy():
    fam = family_for(5)
    check = verify_family_certificate(fam, Strategy.identity(5, 2))
    assert check.residual <= 1e-12


def test_bc23_identity_strategy():
    check = verify_bc23_certificate(Strategy.identity(2, 1))
    assert check.residual <= 1e-12 and check.min_square_eig >= -1e-12


def test_bc23_random():
    rng = np.random.default_rng(3)
    for D in (2, 3):
        check = verify_bc23_certificate(Strategy.random(2, D, rng))
        assert check.residual <= 1e-9 and check.min_P_eig >= -1e-8


def test_bc23_needs_two_keys():
    with pytest.raises(DomainError):
        verify_bc23_certificate(Strategy.identity(3))


def test_certificate_bounds_norm_K_le_7():
    rng = np.random.default_rng(0)
    for K in (3, 5):
        fam = family_for(K)
        for _ in range(3):
            assert build_W(fam, Strategy.random(K, 2, rng)).norm <= conjecture_bound(K)[0] + 1e-8
