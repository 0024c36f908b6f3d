"""Gen / Enc / Dec of the Clifford uncloneable-bit scheme.

Keys are 1-based, ``k in {1, ..., K}``.  Decryption returns the exact Born
probabilities next to a sampled bit so callers can test deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .checks import CheckResult
from .clifford import CliffordFamily, is_hermitian, jordan_wigner_generators, operator_norm
from .errors import DomainError

DENSITY_TRACE_ATOL = 1e-10
DENSITY_PSD_ATOL = 1e-10


def keyspace_size(lam: int) -> int:
    """``2*lam`` keys for even ``lam``, ``2*lam + 1`` for odd ``lam``."""
    if lam < 1:
        raise DomainError("security parameter must be >= 1")
    return 2 * lam if lam % 2 == 0 else 2 * lam + 1


@dataclass(frozen=True)
class SchemeInstance:
    lam: int
    family: CliffordFamily

    def __post_init__(self):
        if self.family.lam != self.lam or self.family.K != keyspace_size(self.lam):
            raise DomainError("Clifford family does not match the security parameter")

    @classmethod
    def from_lambda(cls, lam: int) -> "SchemeInstance":
        return cls(lam, jordan_wigner_generators(lam, keyspace_size(lam)))

    @property
    def K(self) -> int:
        return self.family.K

    @property
    def d(self) -> int:
        return self.family.dim

    def generator(self, k: int) -> np.ndarray:
        if not (isinstance(k, (int, np.integer)) and 1 <= k <= self.K):
            raise DomainError(f"key must be an integer in 1..{self.K}, got {k!r}")
        return self.family.matrices[k - 1]


@dataclass(frozen=True)
class Ciphertext:
    rho: np.ndarray

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class Decryption:
    bit: int
    probabilities: tuple[float, float]


def gen(lam: int, rng_seed: int | np.random.SeedSequence | None = None) -> int:
    """Sample a key uniformly from ``1..K``."""
    K = keyspace_size(lam)
    rng = np.random.default_rng(rng_seed)
    return int(rng.integers(1, K + 1))


def encrypt(inst: SchemeInstance, m: int, k: int) -> Ciphertext:
    """``rho = (2/d) (I + (-1)^m Gamma_k) / 2``: the normalized projector onto
    the ``(-1)^m`` eigenspace of ``Gamma_k``."""
    if m not in (0, 1):
        raise DomainError(f"message must be a bit, got {m!r}")
    g = inst.generator(k)
    d = inst.d
    rho = (np.eye(d) + (-1) ** m * g) / d
    return Ciphertext(rho)


def _as_density(rho) -> np.ndarray:
    rho = rho.rho if isinstance(rho, Ciphertext) else np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DomainError("density matrix must be square")
    if not is_hermitian(rho, atol=1e-10):
        raise DomainError("density matrix must be Hermitian")
    if abs(np.trace(rho).real - 1) > DENSITY_TRACE_ATOL:
        raise DomainError("density matrix must have unit trace")
    if np.linalg.eigvalsh(rho)[0] < -DENSITY_PSD_ATOL:
        raise DomainError("density matrix must be positive semidefinite")
    return rho


def decrypt(inst: SchemeInstance, rho, k: int, rng_seed=None) -> Decryption:
    """Measure ``rho`` with the projectors ``(I + (-1)^i Gamma_k) / 2``."""
    rho = _as_density(rho)
    g = inst.generator(k)
    if rho.shape[0] != inst.d:
        raise DomainError(f"state has dimension {rho.shape[0]}, scheme needs {inst.d}")
    eye = np.eye(inst.d)
    probs = []
    for i in (0, 1):
        proj = (eye + (-1) ** i * g) / 2
        probs.append(float(np.trace(proj @ rho @ proj).real))
    p = np.clip(np.array(probs), 0.0, None)
    p = p / p.sum()
    bit = int(np.random.default_rng(rng_seed).choice(2, p=p))
    return Decryption(bit, (probs[0], probs[1]))


def indistinguishability_bound(K: int) -> float:
    """Single-adversary guessing bound ``1/2 + 1/(2 sqrt K)``."""
    if K < 1:
        raise DomainError("K must be positive")
    return 0.5 + 0.5 / np.sqrt(K)


def single_decryptor_norm_check(family: CliffordFamily, U: np.ndarray, tol: float = 1e-9) -> CheckResult:
    """``||sum_k Gamma_k (x) U|| == sqrt(K)`` for a Hermitian unitary ``U``."""
    U = np.asarray(U, dtype=complex)
    D = U.shape[0]
    if not is_hermitian(U, atol=1e-10) or not np.allclose(U @ U, np.eye(D), atol=1e-10):
        raise DomainError("U must be a Hermitian unitary")
    got = operator_norm(np.kron(family.gamma_sum(), U))
    want = float(np.sqrt(family.K))
    return CheckResult(f"single decryptor K={family.K} D={D}", abs(got - want) <= tol, got, want)
