"""Sum-of-squares certificates for ``P_K = (K + 2 sqrt K) I - W_K``.

Operators act on Alice (x) Bob (x) Charlie with ``b_i = I (x) B_i (x) I`` and
``c_i = I (x) I (x) C_i``; ``Gamma_i (x) x`` places ``Gamma_i`` on Alice.

The family certificate, valid as an identity for every ``K >= 2``::

    P_K = lead_K * sum_i (Q_K + (sqrt K + 1) Gamma_i (x) (c_i - b_i))^2 + alpha_K Q_K^2
    Q_K = sqrt K I - sum_j Gamma_j (x) c_j

is a sum of squares only while ``alpha_K >= 0``, which holds up to ``K = 7``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clifford import CliffordFamily, PauliString, hermitian_eigvalsh, jordan_wigner_generators
from .errors import DomainError
from .game import Strategy, build_W

SQUARE_PSD_TOL = 1e-10


def _check_K(K: int) -> None:
    if K < 2:
        raise DomainError("certificates are defined for K >= 2")


def alpha_coefficient(K: int) -> float:
    _check_K(K)
    return ((3 * K - 2) * math.sqrt(K) - K * K) / (2 * K * (K - 1))


def leading_coefficient(K: int) -> float:
    _check_K(K)
    return (K - math.sqrt(K)) / (2 * K * (K - 1))


@dataclass(frozen=True)
class SoSCertificate:
    K: int
    alpha: float
    leading: float
    terms: tuple[str, ...] = field(default=())

    @classmethod
    def for_K(cls, K: int) -> "SoSCertificate":
        terms = tuple(f"{leading_coefficient(K):.6g} * (Q + {math.sqrt(K) + 1:.6g} G{i}(c{i} - b{i}))^2" for i in range(1, K + 1))
        return cls(K, alpha_coefficient(K), leading_coefficient(K), terms + (f"{alpha_coefficient(K):.6g} * Q^2",))

    @property
    def is_sos(self) -> bool:
        return self.alpha >= 0


@dataclass(frozen=True)
class CertificateCheck:
    residual: float
    min_square_eig: float
    min_P_eig: float
    alpha: float


class _Rep:
    """Embeds Alice, Bob and Charlie operators into the joint space."""

    def __init__(self, d: int, D: int):
        self.d, self.D = d, D
        self.Id, self.ID = np.eye(d), np.eye(D)

    def alice(self, A):
        return np.kron(A, np.eye(self.D * self.D))

    def bob(self, B):
        return np.kron(self.Id, np.kron(B, self.ID))

    def charlie(self, C):
        return np.kron(self.Id, np.kron(self.ID, C))

    def alice_bob(self, A, B):
        return np.kron(A, np.kron(B, self.ID))

    def alice_charlie(self, A, C):
        return np.kron(A, np.kron(self.ID, C))


def evaluate_P(family: CliffordFamily, strat: Strategy) -> np.ndarray:
    """``(K + 2 sqrt K) I - W_K``."""
    if strat.K != family.K:
        raise DomainError(f"strategy has {strat.K} observables, family has K={family.K}")
    W = build_W(family, strat).matrix
    K = family.K
    return (K + 2 * math.sqrt(K)) * np.eye(W.shape[0]) - W


def _rel_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(lhs))


def family_certificate_terms(family: CliffordFamily, strat: Strategy) -> tuple[list[np.ndarray], np.ndarray]:
    """The ``K`` Hermitian factors ``Q + (sqrt K + 1) Gamma_i (x) (c_i - b_i)`` and ``Q``."""
    K = family.K
    rep = _Rep(family.dim, strat.D)
    n = family.dim * strat.D**2
    r = math.sqrt(K)
    Q = r * np.eye(n) - sum(rep.alice_charlie(g, C) for g, C in zip(family.matrices, strat.C))
    factors = [
        Q + (r + 1) * (rep.alice_charlie(g, C) - rep.alice_bob(g, B))
        for g, B, C in zip(family.matrices, strat.B, strat.C)
    ]
    return factors, Q


def verify_family_certificate(family: CliffordFamily, strat: Strategy) -> CertificateCheck:
    """Evaluate both sides of the family identity in the tensor representation.

    Returns the relative Frobenius residual, the smallest eigenvalue over the
    squared factors, the smallest eigenvalue of ``P_K`` and ``alpha_K``.
    """
    K = family.K
    _check_K(K)
    lhs = evaluate_P(family, strat)
    factors, Q = family_certificate_terms(family, strat)
    squares = [f @ f for f in factors]
    rhs = leading_coefficient(K) * sum(squares) + alpha_coefficient(K) * (Q @ Q)
    min_sq = min(float(hermitian_eigvalsh((s + s.conj().T) / 2)[0]) for s in squares + [Q @ Q])
    return CertificateCheck(_rel_residual(lhs, rhs), min_sq, float(hermitian_eigvalsh(lhs)[0]), alpha_coefficient(K))


def bc23_family() -> CliffordFamily:
    """``Gamma_1 = X``, ``Gamma_2 = Z`` on one qubit."""
    fam = CliffordFamily(1, (PauliString("X"), PauliString("Z")))
    assert fam.is_exact_clifford()
    return fam


def verify_bc23_certificate(strat: Strategy) -> CertificateCheck:
    """Four-square decomposition of ``P_2`` with ``Gamma_1 = X``, ``Gamma_2 = Z``::

        P_2 = (X b_1 + Z c_2 - sqrt2 I)^2 / (2 sqrt2) + (X c_1 + Z b_2 - sqrt2 I)^2 / (2 sqrt2)
              + (b_1 - c_1)^2 / 2 + (b_2 - c_2)^2 / 2
    """
    if strat.K != 2:
        raise DomainError("the two-key certificate needs K = 2")
    fam = bc23_family()
    X, Z = fam.matrices
    rep = _Rep(2, strat.D)
    (B1, B2), (C1, C2) = strat.B, strat.C
    n = 2 * strat.D**2
    s2 = math.sqrt(2)
    h1 = rep.alice_bob(X, B1) + rep.alice_charlie(Z, C2) - s2 * np.eye(n)
    h2 = rep.alice_charlie(X, C1) + rep.alice_bob(Z, B2) - s2 * np.eye(n)
    h3 = rep.bob(B1) - rep.charlie(C1)
    h4 = rep.bob(B2) - rep.charlie(C2)
    squares = [h @ h for h in (h1, h2, h3, h4)]
    rhs = (squares[0] + squares[1]) / (2 * s2) + (squares[2] + squares[3]) / 2
    lhs = evaluate_P(fam, strat)
    min_sq = min(float(hermitian_eigvalsh((s + s.conj().T) / 2)[0]) for s in squares)
    return CertificateCheck(_rel_residual(lhs, rhs), min_sq, float(hermitian_eigvalsh(lhs)[0]), alpha_coefficient(2))


def certificate_sweep(K: int, trials: int = 20, dims=(2, 3), seed: int = 0) -> list[CertificateCheck]:
    """Family certificate on random strategies over the minimal Jordan-Wigner family."""
    from .clifford import minimal_qubits

    fam = jordan_wigner_generators(minimal_qubits(K), K)
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        D = dims[t % len(dims)]
        out.append(verify_family_certificate(fam, Strategy.random(K, D, rng)))
    return out
