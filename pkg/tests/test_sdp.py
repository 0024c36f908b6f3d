import math

import numpy as np
import pytest
import scipy.sparse as sp

from clifford_ue.errors import DomainError
from clifford_ue.npa1 import npa1_pencil
from clifford_ue.sdp import INFEASIBLE, OPTIMAL, SDProblem, SolverOptions, export_problem, read_problem, solve

X = np.array([[0.0, 1.0], [1.0, 0.0]])


@pytest.mark.parametrize("backend", ["ipm", "cvxopt"])
def test_two_by_two(backend):
    sol = solve(SDProblem([1.0], np.eye(2), (X,)), SolverOptions(backend=backend))
    assert sol.status == OPTIMAL
    assert sol.g[0] == pytest.approx(1, abs=1e-6)
    assert sol.min_eig_residual >= -1e-8


def test_empty_pencil_infeasible():
    assert solve(SDProblem([], -np.eye(2), ())).status == INFEASIBLE


def test_infeasible_pencil_with_variables():
    assert solve(SDProblem([1.0], -np.eye(2), (X,))).status == INFEASIBLE


def test_unused_variable_is_pinned():
    sol = solve(SDProblem([1.0, 0.0], np.eye(2), (X, np.zeros((2, 2)))))
    assert sol.status == OPTIMAL and sol.g[1] == 0


def test_unused_variable_with_cost_is_unbounded():
    with pytest.raises(DomainError):
        solve(SDProblem([1.0, 1.0], np.eye(2), (X, np.zeros((2, 2)))))


def test_rejects_asymmetric():
    with pytest.raises(DomainError):
        SDProblem([1.0], np.eye(2), (np.array([[0.0, 1.0], [0.0, 0.0]]),))


def test_iteration_cap_reports_failure():
    sol = solve(npa1_pencil(5), SolverOptions(max_iters=2))
    assert sol.status == "numerical-failure"
    assert np.all(np.isfinite(sol.g))


def test_ipm_and_cvxopt_agree_on_npa1():
    p = npa1_pencil(9)
    a = solve(p)
    b = solve(p, SolverOptions(backend="cvxopt"))
    assert a.objective_value == pytest.approx(b.objective_value, abs=1e-6)


def test_weak_duality_on_trace_problem():
    # maximize sum of off-diagonals of a correlation matrix: bound n(n-1)
    n = 4
    F = [sp.csr_matrix(([1.0, 1.0], ([i, j], [j, i])), shape=(n, n)) for i in range(n) for j in range(i + 1, n)]
    sol = solve(SDProblem(np.ones(len(F)), np.eye(n), tuple(F)))
    assert sol.objective_value <= len(F) + 1e-6
    assert sol.objective_value == pytest.approx(len(F), abs=1e-6)


def test_export_round_trip(tmp_path):
    p = npa1_pencil(3)
    path = export_problem(p, tmp_path / "p.txt")
    text = path.read_text()
    assert text.startswith("# sparse SDP pencil")
    q = read_problem(path)
    assert np.array_equal(q.objective, p.objective)
    for a, b in zip((p.F0,) + p.F, (q.F0,) + q.F):
        assert abs(a - b).max() == 0
    assert math.isclose(solve(q).objective_value, solve(p).objective_value, abs_tol=1e-9)
