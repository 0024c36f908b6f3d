"""Level-1 NPA bound on the no-cloning game.

After symmetrization the level-1 Gram matrix over ``(psi, u_1..u_K, v_1..v_K)``
depends on three parameters::

    g1 = <psi|u_i> = <psi|v_i>
    g2 = <u_i|u_j> = <v_i|v_j>      (i != j)
    g3 = <u_i|v_i>                  (<u_i|v_j> = 0 for i != j)

and the bias to maximize is ``2K g1 + K g3``.  In the coordinates
``x = 1 - g2 + g3``, ``y = 1 - g2 - g3``, ``lam = 2 g1 + g3`` the optimum sits
at ``y = 0`` with ``x = 2`` for ``K <= 7`` and ``x = 2K/(K-2) - (K-2)/K`` for
larger ``K``; then ``lam = x/2 + sqrt(2 - x (K-2)/K)`` and the bias is ``K lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DomainError
from .sdp import SDPSolution, SDProblem, SolverOptions, solve

CROSSOVER_K = 7


def _check_K(K: int) -> None:
    if not isinstance(K, (int, np.integer)) or K < 2:
        raise DomainError(f"level-1 bound needs an integer K >= 2, got {K!r}")


def npa1_value(K: int) -> float:
    """Closed-form level-1 winning probability."""
    _check_K(K)
    if K <= CROSSOVER_K:
        return 0.5 + 0.5 / math.sqrt(K)
    return 5 / 8 + 1 / (2 * (K - 2)) - 1 / (4 * K)


def npa1_asymptote() -> float:
    return 5 / 8


def bias_to_win(K: int, bias: float) -> float:
    return 0.25 + bias / (4 * K)


@dataclass(frozen=True)
class NPA1Certificate:
    K: int
    g1: float
    g2: float
    g3: float
    bias: float
    win_prob: float

    @property
    def params(self) -> np.ndarray:
        return np.array([self.g1, self.g2, self.g3])


def npa1_optimal_params(K: int) -> NPA1Certificate:
    """Analytic optimum of the three-parameter program."""
    _check_K(K)
    x = 2.0 if K <= CROSSOVER_K else 2 * K / (K - 2) - (K - 2) / K
    lam = x / 2 + math.sqrt(2 - x * (K - 2) / K)
    g1, g2, g3 = lam / 2 - x / 4, 1 - x / 2, x / 2
    bias = K * lam
    return NPA1Certificate(K, g1, g2, g3, bias, bias_to_win(K, bias))


def npa1_pencil(K: int) -> SDProblem:
    """The ``(1+2K)``-dimensional pencil in ``(g1, g2, g3)`` with objective ``2K g1 + K g3``."""
    _check_K(K)
    n = 1 + 2 * K
    u = np.arange(1, K + 1)
    v = u + K
    F0 = sp.identity(n, format="csr")
    F1 = sp.lil_matrix((n, n))
    F1[0, 1:] = 1
    F1[1:, 0] = 1
    F2 = sp.lil_matrix((n, n))
    for block in (u, v):
        F2[np.ix_(block, block)] = np.ones((K, K)) - np.eye(K)
    F3 = sp.lil_matrix((n, n))
    F3[u, v] = 1
    F3[v, u] = 1
    return SDProblem([2.0 * K, 0.0, 1.0 * K], F0, (F1.tocsr(), F2.tocsr(), F3.tocsr()), names=("g1", "g2", "g3"))


def solve_npa1_sdp(K: int, opts: SolverOptions | None = None) -> tuple[float, SDPSolution]:
    """Numerical level-1 value; returns ``(win_prob, solution)``."""
    sol = solve(npa1_pencil(K), opts)
    return bias_to_win(K, sol.objective_value), sol


def block_eigenvalues(a, b) -> np.ndarray:
    """Spectrum of ``[[A, B], [B, A]]`` for simultaneously diagonal ``A``, ``B``.

    The vectors ``(e_i, +-e_i)`` are eigenvectors with eigenvalues ``a_i +- b_i``.
    Returns the ``a_i + b_i`` values followed by the ``a_i - b_i`` values.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise DomainError("A and B must have the same dimension")
    return np.concatenate([a + b, a - b])


def bordered_eigenvalues(lambdas, omega: float) -> np.ndarray:
    """Spectrum of ``[[1, omega e_1^T], [omega e_1, diag(lambdas)]]``.

    Only the first eigenvalue couples to the border; it splits into
    ``(1 + l_1)/2 +- sqrt(((1 - l_1)/2)^2 + omega^2)``.
    """
    lam = np.asarray(lambdas, dtype=float).ravel()
    if lam.size == 0:
        raise DomainError("need at least one eigenvalue")
    mid = (1 + lam[0]) / 2
    rad = math.hypot((1 - lam[0]) / 2, omega)
    return np.concatenate([lam[1:], [mid - rad, mid + rad]])
