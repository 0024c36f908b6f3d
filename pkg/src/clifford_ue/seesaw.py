"""Seesaw (block-coordinate) maximization of ``<z|W_K(B, C)|z>``.

One outer iteration performs three exact block maximizations:

1. ``z``: the top eigenvector of ``W_K(B, C)``;
2. every ``B_k``: with ``z`` and ``C`` fixed the objective is
   ``const + sum_k tr(B_k X_k^T)``, maximized by the sign projector of
   ``conj(X_k)``, worth ``||X_k||_1``;
3. every ``C_k``: the same with the Bob and Charlie factors exchanged.

The state vector is kept as a ``(d, D, D)`` tensor over (Alice, Bob, Charlie).
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from .clifford import CliffordFamily, jordan_wigner_generators
from .errors import ConjectureViolation, DomainError, NumericalFailure
from .game import Strategy, build_W, conjecture_bound, random_hermitian_unitary

log = logging.getLogger(__name__)

DENSE_EIG_LIMIT = 1024
MONOTONE_TOL = 1e-9
VIOLATION_TOL = 1e-7


@dataclass(frozen=True)
class SeesawConfig:
    """One seesaw experiment: ``instances`` random restarts of ``M`` rounds.

    ``lam`` defaults to the smallest number of qubits carrying ``K`` generators.
    """

    K: int
    D: int = 2
    M: int = 10
    instances: int = 100
    seed: int = 0
    lam: int | None = None
    max_dim: int = 4096

    def __post_init__(self):
        if self.K < 1 or self.D < 1 or self.M < 1 or self.instances < 1:
            raise DomainError("K, D, M and instances must be positive")
        if self.lam is None:
            object.__setattr__(self, "lam", max(1, self.K // 2))
        if self.dim > self.max_dim:
            raise DomainError(f"d*D^2 = {self.dim} exceeds the supported envelope {self.max_dim}")

    @property
    def d(self) -> int:
        return 2 ** self.lam

    @property
    def dim(self) -> int:
        return self.d * self.D * self.D

    def family(self) -> CliffordFamily:
        return jordan_wigner_generators(self.lam, self.K)


@dataclass
class SeesawState:
    z: np.ndarray
    B: list[np.ndarray]
    C: list[np.ndarray]
    objective_trace: list[float] = field(default_factory=list)

    def copy(self) -> "SeesawState":
        return SeesawState(self.z.copy(), list(self.B), list(self.C), list(self.objective_trace))


def _tensor(z: np.ndarray, d: int, D: int) -> np.ndarray:
    return np.asarray(z).reshape(d, D, D)


def apply_W(family: CliffordFamily, B, C, z: np.ndarray) -> np.ndarray:
    """``W_K z`` by tensor contraction, without forming ``W_K``."""
    d, D = family.dim, B[0].shape[0]
    t = _tensor(z, d, D)
    out = np.zeros_like(t, dtype=complex)
    for g, b, c in zip(family.matrices, B, C):
        g_t = np.tensordot(g, t, axes=(1, 0))
        out += np.einsum("ij,ajc->aic", b, g_t) + np.einsum("ij,abj->abi", c, g_t)
        out += np.einsum("ij,kl,ajl->aik", b, c, t)
    return out.reshape(-1)


def objective(family: CliffordFamily, state: SeesawState) -> float:
    return float(np.vdot(state.z, apply_W(family, state.B, state.C, state.z)).real)


def init_state(cfg: SeesawConfig, instance_index: int) -> SeesawState:
    """Random unit ``z`` and random Hermitian unitaries with ``floor(D/2)`` minus signs.

    The stream is ``SeedSequence(seed, spawn_key=(D, instance_index))`` so
    instances are reproducible independently of each other.
    """
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(cfg.D, instance_index)))
    z = rng.standard_normal(cfg.dim) + 1j * rng.standard_normal(cfg.dim)
    z /= np.linalg.norm(z)
    B = [random_hermitian_unitary(cfg.D, rng) for _ in range(cfg.K)]
    C = [random_hermitian_unitary(cfg.D, rng) for _ in range(cfg.K)]
    return SeesawState(z, B, C)


def step_z(family: CliffordFamily, state: SeesawState) -> SeesawState:
    """Replace ``z`` by a top eigenvector of ``W_K(B, C)``.

    Small problems use a dense eigensolver; larger ones use Lanczos started
    from the current ``z``.  The trace records the Rayleigh quotient of the
    new vector.
    """
    n = state.z.size
    try:
        if n <= DENSE_EIG_LIMIT:
            W = build_W(family, Strategy(tuple(state.B), tuple(state.C))).matrix
            _, vecs = scipy.linalg.eigh(W, subset_by_index=[n - 1, n - 1])
            z = vecs[:, 0]
        else:
            op = spla.LinearOperator(
                (n, n), matvec=lambda x: apply_W(family, state.B, state.C, x), dtype=complex
            )
            _, vecs = spla.eigsh(op, k=1, which="LA", v0=state.z, tol=1e-14, maxiter=20 * n)
            z = vecs[:, 0]
    except (np.linalg.LinAlgError, spla.ArpackError, spla.ArpackNoConvergence) as exc:
        raise NumericalFailure(f"top eigenvector computation failed: {exc}") from exc
    z = z / np.linalg.norm(z)
    new = state.copy()
    new.z = z
    new.objective_trace.append(objective(family, new))
    return new


def sign_projector(X: np.ndarray) -> np.ndarray:
    """``sum_i sign(x_i)|x_i><x_i|`` with ``sign(0) = +1``."""
    w, v = scipy.linalg.eigh((X + X.conj().T) / 2)
    s = np.where(w >= 0, 1.0, -1.0)
    U = (v * s) @ v.conj().T
    return (U + U.conj().T) / 2


def bob_gradients(family: CliffordFamily, state: SeesawState) -> list[np.ndarray]:
    """``X_k = Z^* (Gamma_k (x) I + I (x) C_k) Z`` with ``Z`` rows ``(a, c)`` and columns ``b``."""
    d, D = family.dim, state.B[0].shape[0]
    t = _tensor(state.z, d, D)  # (a, b, c)
    out = []
    for g, c in zip(family.matrices, state.C):
        m_t = np.tensordot(g, t, axes=(1, 0)) + np.einsum("ij,abj->abi", c, t)
        # X[b, b'] = sum_{a,c} conj(t[a,b,c]) m_t[a,b',c]
        out.append(np.einsum("abc,aec->be", t.conj(), m_t))
    return out


def charlie_gradients(family: CliffordFamily, state: SeesawState) -> list[np.ndarray]:
    """Mirror of :func:`bob_gradients` with ``Z`` rows ``(a, b)`` and columns ``c``."""
    d, D = family.dim, state.B[0].shape[0]
    t = _tensor(state.z, d, D)
    out = []
    for g, b in zip(family.matrices, state.B):
        m_t = np.tensordot(g, t, axes=(1, 0)) + np.einsum("ij,ajc->aic", b, t)
        out.append(np.einsum("abc,abe->ce", t.conj(), m_t))
    return out


def step_B(family: CliffordFamily, state: SeesawState) -> SeesawState:
    new = state.copy()
    new.B = [sign_projector(X.conj()) for X in bob_gradients(family, state)]
    new.objective_trace.append(objective(family, new))
    return new


def step_C(family: CliffordFamily, state: SeesawState) -> SeesawState:
    new = state.copy()
    new.C = [sign_projector(X.conj()) for X in charlie_gradients(family, state)]
    new.objective_trace.append(objective(family, new))
    return new


def run_instance(cfg: SeesawConfig, instance_index: int, state: SeesawState | None = None) -> SeesawState:
    fam = cfg.family()
    state = init_state(cfg, instance_index) if state is None else state
    for _ in range(cfg.M):
        state = step_z(fam, state)
        state = step_B(fam, state)
        state = step_C(fam, state)
    return state


def log_relative_error(K: int, value: float) -> float:
    return math.log(value / conjecture_bound(K)[0])


@dataclass(frozen=True)
class InstanceTrace:
    D: int
    instance: int
    objectives: tuple[float, ...]

    @property
    def final(self) -> float:
        return self.objectives[-1]

    def log_errors(self, K: int) -> list[float]:
        return [log_relative_error(K, v) for v in self.objectives]

    def is_monotone(self, tol: float = MONOTONE_TOL) -> bool:
        return all(b >= a - tol for a, b in zip(self.objectives, self.objectives[1:]))


@dataclass(frozen=True)
class SeesawResult:
    cfg: SeesawConfig
    traces: tuple[InstanceTrace, ...]

    @property
    def best(self) -> float:
        return max(t.final for t in self.traces)

    @property
    def best_win_prob(self) -> float:
        return 0.25 + self.best / (4 * self.cfg.K)

    @property
    def max_log_error(self) -> float:
        return max(max(t.log_errors(self.cfg.K)) for t in self.traces)

    @property
    def all_monotone(self) -> bool:
        return all(t.is_monotone() for t in self.traces)


def _run_one(args) -> InstanceTrace:
    cfg, idx = args
    st = run_instance(cfg, idx)
    return InstanceTrace(cfg.D, idx, tuple(st.objective_trace))


def run(cfg: SeesawConfig, workers: int = 1, strict: bool = True) -> SeesawResult:
    """Run every instance; optionally fan out over a process pool.

    Raises:
        ConjectureViolation: if ``strict`` and some objective exceeds
            ``K + 2 sqrt K`` by more than ``VIOLATION_TOL``.
    """
    jobs = [(cfg, i) for i in range(cfg.instances)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = tuple(pool.map(_run_one, jobs))
    else:
        traces = tuple(_run_one(j) for j in jobs)
    res = SeesawResult(cfg, traces)
    bound = conjecture_bound(cfg.K)[0]
    worst = max(max(t.objectives) for t in traces)
    if worst > bound + VIOLATION_TOL:
        log.error("seesaw objective %.12f exceeds K + 2 sqrt K = %.12f", worst, bound)
        if strict:
            raise ConjectureViolation(
                f"seesaw found {worst:.12f} > K + 2 sqrt K = {bound:.12f} at K={cfg.K}, D={cfg.D}", worst, bound
            )
    if not res.all_monotone:
        log.warning("non-monotone seesaw trace at K=%d D=%d", cfg.K, cfg.D)
    return res


def run_sweep(cfg: SeesawConfig, dims, workers: int = 1, strict: bool = True) -> list[SeesawResult]:
    return [run(replace(cfg, D=D), workers=workers, strict=strict) for D in dims]


TRACE_HEADER = ("D", "instance", "step_index", "objective", "log_relative_error")


def traces_csv(results) -> str:
    """CSV with one row per (D, instance, step); steps run 1..3M."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for res in results:
        K = res.cfg.K
        for tr in res.traces:
            for step, (v, e) in enumerate(zip(tr.objectives, tr.log_errors(K)), start=1):
                w.writerow((tr.D, tr.instance, step, f"{v:.12f}", f"{e:.12e}"))
    return buf.getvalue()


def write_traces(results, path) -> Path:
    path = Path(path)
    path.write_text(traces_csv(results))
    return path
