import math

import numpy as np
import pytest

from clifford_ue.errors import DomainError
from clifford_ue.game import Strategy, build_W, conjecture_bound
from clifford_ue.seesaw import (
    SeesawConfig,
    SeesawState,
    apply_W,
    bob_gradients,
    charlie_gradients,
    init_state,
    objective,
    run,
    run_instance,
    sign_projector,
    step_B,
    step_C,
    step_z,
    traces_csv,
)


@pytest.fixture
def cfg():
    return SeesawConfig(K=3, D=3, M=3, instances=4, seed=7)


def test_envelope():
    with pytest.raises(DomainError):
        SeesawConfig(K=18, D=3)


@pytest.mark.parametrize("D,n_minus", [(2, 1), (3, 1), (4, 2)])
def test_init_eigenvalues(D, n_minus):
    st = init_state(SeesawConfig(K=3, D=D), 0)
    assert abs(np.linalg.norm(st.z) - 1) < 1e-12
    for U in st.B + st.C:
        ev = np.linalg.eigvalsh(U)
        assert np.allclose(np.abs(ev), 1, atol=1e-9) and int(np.sum(ev < 0)) == n_minus


def test_init_is_deterministic(cfg):
    a, b = init_state(cfg, 2), init_state(cfg, 2)
    assert np.array_equal(a.z, b.z) and all(np.array_equal(x, y) for x, y in zip(a.B, b.B))
    assert not np.array_equal(a.z, init_state(cfg, 3).z)


def test_apply_W_matches_dense(cfg):
    st = init_state(cfg, 0)
    fam = cfg.family()
    W = build_W(fam, Strategy(tuple(st.B), tuple(st.C))).matrix
    assert np.allclose(W @ st.z, apply_W(fam, st.B, st.C, st.z))


def test_step_z_is_top_eigenvector(cfg):
    fam = cfg.family()
    st = step_z(fam, init_state(cfg, 0))
    W = build_W(fam, Strategy(tuple(st.B), tuple(st.C)))
    assert st.objective_trace[-1] == pytest.approx(W.lambda_max, abs=1e-10)


def test_step_B_convention_identity(cfg):
    fam = cfg.family()
    st = step_z(fam, init_state(cfg, 1))
    Xs = bob_gradients(fam, st)
    D = cfg.D
    c_term = sum(
        np.vdot(st.z, np.kron(g, np.kron(np.eye(D), C)) @ st.z).real for g, C in zip(fam.matrices, st.C)
    )
    new = step_B(fam, st)
    expected = c_term + sum(np.abs(np.linalg.eigvalsh(X)).sum() for X in Xs)
    assert new.objective_trace[-1] == pytest.approx(expected, abs=1e-10)


def test_step_C_convention_identity(cfg):
    fam = cfg.family()
    st = step_z(fam, init_state(cfg, 1))
    Xs = charlie_gradients(fam, st)
    D = cfg.D
    b_term = sum(
        np.vdot(st.z, np.kron(g, np.kron(B, np.eye(D))) @ st.z).real for g, B in zip(fam.matrices, st.B)
    )
    new = step_C(fam, st)
    expected = b_term + sum(np.abs(np.linalg.eigvalsh(X)).sum() for X in Xs)
    assert new.objective_trace[-1] == pytest.approx(expected, abs=1e-10)


def test_sign_projector_positive_is_identity():
    X = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(sign_projector(X), np.eye(2))
    assert np.allclose(sign_projector(np.zeros((2, 2))), np.eye(2))


def test_identity_is_fixed_point():
    cfg = SeesawConfig(K=4, D=2, M=2, instances=1)
    fam = cfg.family()
    K = cfg.K
    I = [np.eye(2, dtype=complex)] * K
    _, vecs = np.linalg.eigh(build_W(fam, Strategy.identity(K, 2)).matrix)
    st = SeesawState(vecs[:, -1], list(I), list(I))
    out = run_instance(cfg, 0, st)
    assert np.allclose(out.objective_trace, conjecture_bound(K)[0], atol=1e-9)


def test_run_traces(cfg):
    res = run(cfg)
    assert all(len(t.objectives) == 3 * cfg.M for t in res.traces)
    assert res.all_monotone and res.max_log_error <= 1e-9
    assert res.best <= 3 * cfg.K


def test_K2_bound():
    res = run(SeesawConfig(K=2, D=2, M=4, instances=5, seed=1))
    assert res.best <= 2 + 2 * math.sqrt(2) + 1e-8


def test_trace_csv_is_deterministic(cfg):
    a, b = traces_csv([run(cfg)]), traces_csv([run(cfg)])
    assert a == b
    assert a.splitlines()[0] == "D,instance,step_index,objective,log_relative_error"
    assert len(a.splitlines()) == 1 + cfg.instances * 3 * cfg.M
