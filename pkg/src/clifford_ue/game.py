"""The game operator ``W_K`` and special adversary strategies.

Tensor factors are ordered (Alice ``d``, Bob ``D``, Charlie ``D``) throughout
the package; the flattened index of ``|a, b, c>`` is ``(a*D + b)*D + c``.

    W_K = sum_k  Gamma_k (x) (B_k (x) I + I (x) C_k)  +  I_d (x) B_k (x) C_k

The winning probability of the no-cloning game is at most
``1/4 + ||W_K|| / (4K)``, maximized over strategies.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .checks import CheckResult
from .clifford import CliffordFamily, family_for, hermitian_eigvalsh, is_hermitian
from .errors import DomainError

STRATEGY_ATOL = 1e-10
DENSE_ENVELOPE = 4096


def _check_observable(m: np.ndarray, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"{name} must be square")
    if not is_hermitian(m, atol=1e-12):
        raise DomainError(f"{name} is not Hermitian")
    if not np.allclose(m @ m, np.eye(m.shape[0]), rtol=0, atol=STRATEGY_ATOL):
        raise DomainError(f"{name} does not square to the identity")
    return m


@dataclass(frozen=True)
class Strategy:
    """Bob's and Charlie's binary observables, one pair per key."""

    B: tuple[np.ndarray, ...]
    C: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.B) != len(self.C) or not self.B:
            raise DomainError("B and C must list the same positive number of observables")
        D = np.asarray(self.B[0]).shape[0]
        B = tuple(_check_observable(b, f"B_{k + 1}") for k, b in enumerate(self.B))
        C = tuple(_check_observable(c, f"C_{k + 1}") for k, c in enumerate(self.C))
        if any(m.shape != (D, D) for m in B + C):
            raise DomainError("all observables must share one dimension D")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", C)

    @classmethod
    def symmetric(cls, U) -> "Strategy":
        U = tuple(U)
        return cls(U, U)

    @classmethod
    def identity(cls, K: int, D: int = 1) -> "Strategy":
        return cls.symmetric([np.eye(D)] * K)

    @classmethod
    def gamma(cls, family: CliffordFamily) -> "Strategy":
        """``U_k = Gamma_k`` with ``D = d``."""
        return cls.symmetric(family.matrices)

    @classmethod
    def random(cls, K: int, D: int, rng, symmetric: bool = False) -> "Strategy":
        rng = np.random.default_rng(rng)
        B = [random_hermitian_unitary(D, rng) for _ in range(K)]
        if symmetric:
            return cls.symmetric(B)
        return cls(tuple(B), tuple(random_hermitian_unitary(D, rng) for _ in range(K)))

    @property
    def K(self) -> int:
        return len(self.B)

    @property
    def D(self) -> int:
        return self.B[0].shape[0]

    @property
    def symmetric_flag(self) -> bool:
        return all(b is c or np.array_equal(b, c) for b, c in zip(self.B, self.C))

    def swapped(self) -> "Strategy":
        return Strategy(self.C, self.B)


def haar_unitary(D: int, rng) -> np.ndarray:
    rng = np.random.default_rng(rng)
    z = (rng.standard_normal((D, D)) + 1j * rng.standard_normal((D, D))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_hermitian_unitary(D: int, rng, n_minus: int | None = None) -> np.ndarray:
    """``V diag(+1.., -1..) V*`` with Haar ``V`` and ``floor(D/2)`` minus signs by default."""
    rng = np.random.default_rng(rng)
    n_minus = D // 2 if n_minus is None else n_minus
    if not 0 <= n_minus <= D:
        raise DomainError("number of -1 eigenvalues must lie in 0..D")
    v = haar_unitary(D, rng)
    signs = np.concatenate([np.ones(D - n_minus), -np.ones(n_minus)])
    u = (v * signs) @ v.conj().T
    return (u + u.conj().T) / 2


@dataclass(frozen=True)
class GameOperator:
    K: int
    d: int
    D: int
    matrix: np.ndarray

    @cached_property
    def spectrum(self) -> np.ndarray:
        return hermitian_eigvalsh(self.matrix)

    @property
    def lambda_max(self) -> float:
        return float(self.spectrum[-1])

    @property
    def lambda_min(self) -> float:
        return float(self.spectrum[0])

    @property
    def norm(self) -> float:
        return max(self.lambda_max, -self.lambda_min)

    def top_eigenpair(self) -> tuple[float, np.ndarray]:
        n = self.matrix.shape[0]
        w, v = scipy.linalg.eigh(self.matrix, subset_by_index=[n - 1, n - 1])
        return float(w[0]), v[:, 0]

    def expectation(self, psi: np.ndarray) -> float:
        return float(np.vdot(psi, self.matrix @ psi).real)


def _local_terms(B: np.ndarray, C: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    D = B.shape[0]
    eye = np.eye(D)
    return np.kron(B, eye) + np.kron(eye, C), np.kron(B, C)


def build_W(family: CliffordFamily, strat: Strategy) -> GameOperator:
    """Dense ``W_K`` for the family and strategy.

    Accumulated block by block over the nonzeros of each ``Gamma_k``, which is
    a signed permutation matrix for Pauli strings.
    """
    if strat.K != family.K:
        raise DomainError(f"strategy has {strat.K} observables, family has K={family.K}")
    d, D = family.dim, strat.D
    n2 = D * D
    if d * n2 > 4 * DENSE_ENVELOPE:
        raise DomainError(f"dense W of size {d * n2} exceeds the supported envelope")
    W = np.zeros((d, n2, d, n2), dtype=complex)
    bc_sum = np.zeros((n2, n2), dtype=complex)
    for g, B, C in zip(family.matrices, strat.B, strat.C):
        local, bc = _local_terms(B, C)
        bc_sum += bc
        rows, cols = np.nonzero(g)
        for a, a2 in zip(rows, cols):
            W[a, :, a2, :] += g[a, a2] * local
    for a in range(d):
        W[a, :, a, :] += bc_sum
    W = W.reshape(d * n2, d * n2)
    return GameOperator(family.K, d, D, (W + W.conj().T) / 2)


def build_W_sparse(family: CliffordFamily, B, C) -> sp.csr_matrix:
    """Sparse ``W_K`` for large ``d`` (used by the seesaw iterations)."""
    d, D = family.dim, B[0].shape[0]
    total = sp.csr_matrix((d * D * D, d * D * D), dtype=complex)
    bc_sum = np.zeros((D * D, D * D), dtype=complex)
    for g, b, c in zip(family.matrices, B, C):
        local, bc = _local_terms(b, c)
        bc_sum += bc
        total = total + sp.kron(sp.csr_matrix(g), sp.csr_matrix(local), format="csr")
    total = total + sp.kron(sp.identity(d, format="csr"), sp.csr_matrix(bc_sum), format="csr")
    return total.tocsr()


def win_prob_from_norm(K: int, w_norm: float) -> float:
    if w_norm < 0:
        raise DomainError("norm must be non-negative")
    return 0.25 + w_norm / (4 * K)


def conjecture_bound(K: int) -> tuple[float, float]:
    """``(K + 2 sqrt K, 1/2 + 1/(2 sqrt K))``: conjectured norm and winning-probability bounds."""
    if K < 1:
        raise DomainError("K must be positive")
    r = np.sqrt(K)
    return float(K + 2 * r), float(0.5 + 0.5 / r)


def gamma_strategy_norms(K_max: int, K_min: int = 2) -> list[float]:
    """``||W_K(Gamma_1, ..., Gamma_K)||`` for ``K = K_min..K_max``.

    Each ``K`` uses the smallest Jordan-Wigner family that fits it.
    """
    out = []
    for K in range(K_min, K_max + 1):
        fam = family_for(K)
        out.append(build_W(fam, Strategy.gamma(fam)).norm)
    return out


def gamma_cross_term_norms(K_max: int, K_min: int = 2) -> list[float]:
    """``||sum_k Gamma_k (x) (Gamma_k (x) I + I (x) Gamma_k)||`` for ``K = K_min..K_max``."""
    out = []
    for K in range(K_min, K_max + 1):
        fam = family_for(K)
        d = fam.dim
        eye = np.eye(d)
        W = build_W(fam, Strategy.gamma(fam)).matrix
        comm = np.kron(eye, sum(np.kron(g, g) for g in fam.matrices))
        out.append(float(np.abs(hermitian_eigvalsh(W - comm)).max()))
    return out


def gamma_commuting_term_norm(family: CliffordFamily) -> float:
    """``||sum_k I (x) Gamma_k (x) Gamma_k||``; the ``Gamma_k (x) Gamma_k`` commute pairwise."""
    m = sum(np.kron(g, g) for g in family.matrices)
    return float(np.abs(hermitian_eigvalsh(m)).max())


def low_rank_strategy(family: CliffordFamily, r: int, D: int, rng_seed=None) -> tuple[Strategy, np.ndarray]:
    """Symmetric strategy ``U_k = 2 P_k - I`` with rank-``r`` projectors ``P_k``.

    The ``K*r`` spanning vectors are orthonormal columns of a Haar unitary; the
    next column is returned as the common ``-1`` eigenvector ``u_perp``.

    Returns:
        (strategy, u_perp)
    """
    K = family.K
    if r < 1:
        raise DomainError("rank must be positive")
    if D < K * r + 1:
        raise DomainError(f"need D >= K*r + 1 = {K * r + 1}, got D={D}")
    V = haar_unitary(D, np.random.default_rng(rng_seed))
    Us = []
    for k in range(K):
        cols = V[:, k * r:(k + 1) * r]
        U = 2 * cols @ cols.conj().T - np.eye(D)
        Us.append((U + U.conj().T) / 2)
    return Strategy.symmetric(Us), V[:, K * r]


def commuting_strategy(signs) -> Strategy:
    """Diagonal observables ``U_k = diag(signs[k])``."""
    signs = np.asarray(signs, dtype=float)
    if signs.ndim != 2 or not np.all(np.abs(signs) == 1):
        raise DomainError("signs must be a K x D matrix of +-1")
    return Strategy.symmetric([np.diag(row).astype(complex) for row in signs])


def commuting_strategy_check(family: CliffordFamily, signs, tol: float = 1e-9) -> CheckResult:
    strat = commuting_strategy(signs)
    bound = conjecture_bound(family.K)[0]
    got = build_W(family, strat).norm
    return CheckResult(
        f"commuting strategy K={family.K} D={strat.D}", got <= bound + tol, value=got, expected=bound
    )


def product_state_value(family: CliffordFamily, strat: Strategy, alice_vec, bc_vec) -> float:
    """``<psi|W|psi>`` for ``psi = alice (x) bc``, evaluated factor by factor."""
    a = np.asarray(alice_vec, dtype=complex).ravel()
    phi = np.asarray(bc_vec, dtype=complex).ravel()
    if a.shape != (family.dim,) or phi.shape != (strat.D**2,):
        raise DomainError("state factors have the wrong dimensions")
    for v, name in ((a, "alice_vec"), (phi, "bc_vec")):
        if abs(np.linalg.norm(v) - 1) > 1e-10:
            raise DomainError(f"{name} must be a unit vector")
    total = 0.0
    for g, B, C in zip(family.matrices, strat.B, strat.C):
        local, bc = _local_terms(B, C)
        total += np.vdot(a, g @ a).real * np.vdot(phi, local @ phi).real + np.vdot(phi, bc @ phi).real
    return float(total)


def low_rank_witness(family: CliffordFamily, strat: Strategy, u_perp: np.ndarray) -> tuple[np.ndarray, float]:
    """Product state ``alpha (x) u_perp (x) u_perp`` reaching ``K + 2 sqrt K``.

    Every ``U_k`` acts as ``-1`` on ``u_perp``, so the expectation reduces to
    ``K - 2 <alpha| sum_k Gamma_k |alpha>``.  It is maximized by the eigenvector
    of the most negative eigenvalue ``-sqrt K`` of ``sum_k Gamma_k``.

    Returns:
        (alpha, value)
    """
    _, vecs = scipy.linalg.eigh(family.gamma_sum())
    alpha = vecs[:, 0]
    value = product_state_value(family, strat, alpha, np.kron(u_perp, u_perp))
    return alpha, value
