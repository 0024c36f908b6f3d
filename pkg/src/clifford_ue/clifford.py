"""Pauli strings, Jordan-Wigner generators of Clifford algebras, operator norms.

Pauli arithmetic is symbolic: a string is a word over ``I, X, Y, Z`` with a
sign, and products track their phase as a power of ``i``.  Dense matrices are
built on demand with ``np.kron`` in row-major order, so the first letter of a
string acts on the most significant qubit.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from itertools import combinations

import numpy as np
import scipy.linalg

from .checks import CheckResult
from .errors import DomainError, NumericalFailure, UnsatisfiableRequest

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (power of i, letter) with a*b = i**power * letter
_PRODUCT = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}

HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class PauliString:
    """A signed tensor product of single-qubit Pauli operators.

    ``letters[0]`` acts on the first (most significant) tensor factor.
    """

    letters: str
    phase: int = 1

    def __post_init__(self):
        if not self.letters:
            raise DomainError("a Pauli string needs at least one qubit")
        bad = set(self.letters) - set("IXYZ")
        if bad:
            raise DomainError(f"unknown Pauli letters {sorted(bad)}")
        if self.phase not in (1, -1):
            raise DomainError("a Hermitian Pauli string carries phase +1 or -1")

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def is_identity(self) -> bool:
        return set(self.letters) == {"I"}

    def __neg__(self) -> "PauliString":
        return PauliString(self.letters, -self.phase)

    def __str__(self) -> str:
        return ("" if self.phase == 1 else "-") + self.letters

    def multiply(self, other: "PauliString") -> tuple[int, "PauliString"]:
        """Return ``(k, r)`` with ``self @ other == 1j**k * r`` and ``r`` of phase +1."""
        if other.n_qubits != self.n_qubits:
            raise DomainError("Pauli strings act on different numbers of qubits")
        power = 0 if self.phase * other.phase == 1 else 2
        out = []
        for a, b in zip(self.letters, other.letters):
            p, c = _PRODUCT[a, b]
            power += p
            out.append(c)
        return power % 4, PauliString("".join(out))

    def commutes_with(self, other: "PauliString") -> bool:
        k1, _ = self.multiply(other)
        k2, _ = other.multiply(self)
        return k1 == k2

    def to_dense(self) -> np.ndarray:
        return pauli_to_dense(self)


def i_power(power: int) -> complex:
    """``1j**power`` without floating-point round-off."""
    return (1, 1j, -1, -1j)[power % 4]


def pauli_to_dense(p: PauliString) -> np.ndarray:
    """Kronecker product of the single-qubit matrices, scaled by the sign."""
    mat = reduce(np.kron, (PAULI_MATRICES[c] for c in p.letters))
    return p.phase * mat


def anticommutator_is_canonical(p: PauliString, q: PauliString) -> bool:
    """Exact check of ``{p, q} == 2 delta_pq I`` using symbolic products only.

    For ``p == q`` this asks for ``p**2 == I``; otherwise for ``pq == -qp``.
    """
    k1, r1 = p.multiply(q)
    k2, r2 = q.multiply(p)
    if p.letters == q.letters:
        return r1.is_identity and k1 == 0 and k2 == 0
    return r1 == r2 and (k1 - k2) % 4 == 2


@dataclass(frozen=True)
class CliffordFamily:
    """``K`` pairwise anticommuting Hermitian unitaries on ``lam`` qubits."""

    lam: int
    generators: tuple[PauliString, ...]

    @property
    def K(self) -> int:
        return len(self.generators)

    @property
    def dim(self) -> int:
        return 2 ** self.lam

    @cached_property
    def matrices(self) -> tuple[np.ndarray, ...]:
        return tuple(pauli_to_dense(g) for g in self.generators)

    def combination(self, v) -> np.ndarray:
        """Dense ``sum_k v_k Gamma_k``."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.K,):
            raise DomainError(f"expected a vector of length {self.K}, got shape {v.shape}")
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for vk, g in zip(v, self.matrices):
            out += vk * g
        return out

    def gamma_sum(self) -> np.ndarray:
        return self.combination(np.ones(self.K))

    def is_exact_clifford(self) -> bool:
        gens = self.generators
        return all(anticommutator_is_canonical(g, g) for g in gens) and all(
            anticommutator_is_canonical(p, q) for p, q in combinations(gens, 2)
        )


def jordan_wigner_strings(lam: int) -> list[PauliString]:
    """All ``2*lam + 1`` Jordan-Wigner strings on ``lam`` qubits, in the order
    ``X..X Y I..I``, ``X..X Z I..I`` for each site, then ``X^lam``."""
    if lam < 1:
        raise DomainError("need at least one qubit")
    out = []
    for i in range(1, lam + 1):
        prefix, suffix = "X" * (i - 1), "I" * (lam - i)
        out.append(PauliString(prefix + "Y" + suffix))
        out.append(PauliString(prefix + "Z" + suffix))
    out.append(PauliString("X" * lam))
    return out


def jordan_wigner_generators(lam: int, K: int) -> CliffordFamily:
    """First ``K`` Jordan-Wigner generators on ``lam`` qubits.

    Raises:
        UnsatisfiableRequest: if ``K > 2*lam + 1``; no family of that size
            exists in dimension ``2**lam``.
    """
    if K < 1:
        raise DomainError("K must be positive")
    if K > 2 * lam + 1:
        raise UnsatisfiableRequest(
            f"at most {2 * lam + 1} anticommuting Pauli strings exist on {lam} qubits, asked for {K}"
        )
    return CliffordFamily(lam, tuple(jordan_wigner_strings(lam)[:K]))


def minimal_qubits(K: int) -> int:
    """Smallest ``lam`` with ``K <= 2*lam + 1``."""
    if K < 1:
        raise DomainError("K must be positive")
    return max(1, K // 2)


def family_for(K: int, lam: int | None = None) -> CliffordFamily:
    return jordan_wigner_generators(minimal_qubits(K) if lam is None else lam, K)


def is_hermitian(m: np.ndarray, atol: float = HERMITIAN_ATOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, m.conj().T, rtol=0, atol=atol)


def hermitian_eigvalsh(m: np.ndarray) -> np.ndarray:
    try:
        return scipy.linalg.eigvalsh(m, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalFailure(f"Hermitian eigensolver failed: {exc}") from exc


def operator_norm(m: np.ndarray) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    m = np.asarray(m)
    if not is_hermitian(m, atol=1e-10 * max(1.0, float(np.abs(m).max(initial=0.0)))):
        raise DomainError("operator_norm expects a Hermitian matrix")
    ev = hermitian_eigvalsh(m)
    return float(max(abs(ev[0]), abs(ev[-1])))


def linear_combination_norm_check(family: CliffordFamily, v, tol: float = 1e-10) -> CheckResult:
    """Compare ``||sum_k v_k Gamma_k||`` with the Euclidean norm of ``v``."""
    v = np.asarray(v, dtype=float)
    got = operator_norm(family.combination(v))
    want = float(np.linalg.norm(v))
    return CheckResult(
        f"norm identity K={family.K} lam={family.lam}",
        abs(got - want) <= tol,
        value=got,
        expected=want,
    )
