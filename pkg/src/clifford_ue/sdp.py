"""Single-block semidefinite programs in affine-pencil form.

    maximize    c . g
    subject to  S(g) = F_0 + sum_i g_i F_i  >= 0

with real symmetric ``F_i``.  Two backends are available:

``ipm``
    An embedded infeasible-start primal-dual interior-point method with the
    HKM search direction and Mehrotra predictor-corrector steps.  The Schur
    complement is only ``n_vars x n_vars``, which suits moment matrices with a
    handful of free parameters and a large pencil.
``cvxopt``
    An adapter to ``cvxopt.solvers.sdp``, kept for cross-checking small
    problems.

Internally the pencil problem is the dual of the standard form
``min <F_0, Y>  s.t.  <F_i, Y> = -c_i,  Y >= 0``; the multiplier ``Y`` is a
certificate of optimality (or, with ``<F_0, Y> < 0`` and ``<F_i, Y> = 0``, of
infeasibility).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DomainError, NumericalFailure

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
NUMERICAL_FAILURE = "numerical-failure"
STATUSES = (OPTIMAL, INFEASIBLE, NUMERICAL_FAILURE)

SYMMETRY_ATOL = 1e-12


def _as_sparse(m) -> sp.csr_matrix:
    if sp.issparse(m):
        out = sp.csr_matrix(m, dtype=float)
    else:
        arr = np.asarray(m)
        if np.iscomplexobj(arr):
            if np.abs(arr.imag).max(initial=0.0) > SYMMETRY_ATOL:
                raise DomainError("pencil matrices must be real")
            arr = arr.real
        out = sp.csr_matrix(arr.astype(float))
    out.eliminate_zeros()
    return out


@dataclass(frozen=True)
class SDProblem:
    """Maximize ``objective . g`` subject to ``F0 + sum_i g_i F[i] >= 0``."""

    objective: np.ndarray
    F0: sp.csr_matrix
    F: tuple[sp.csr_matrix, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        if not np.all(np.isfinite(c)):
            raise DomainError("objective must be finite")
        F0 = _as_sparse(self.F0)
        F = tuple(_as_sparse(f) for f in self.F)
        if len(F) != c.size:
            raise DomainError(f"{c.size} objective coefficients for {len(F)} pencil matrices")
        n = F0.shape[0]
        if n < 1 or F0.shape != (n, n):
            raise DomainError("pencil dimension must be at least 1")
        for i, m in enumerate((F0,) + F):
            if m.shape != (n, n):
                raise DomainError(f"F_{i} has shape {m.shape}, expected {(n, n)}")
            if abs(m - m.T).max() > SYMMETRY_ATOL:
                raise DomainError(f"F_{i} is not symmetric")
        if self.names and len(self.names) != len(F):
            raise DomainError("one name per variable expected")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "F0", F0)
        object.__setattr__(self, "F", F)

    @property
    def n_vars(self) -> int:
        return len(self.F)

    @property
    def block_dim(self) -> int:
        return self.F0.shape[0]

    def pencil(self, g) -> np.ndarray:
        """Dense ``F0 + sum_i g_i F_i``."""
        g = np.asarray(g, dtype=float)
        out = self.F0.toarray()
        for gi, f in zip(g, self.F):
            if gi:
                out += gi * f.toarray()
        return out

    def min_eig(self, g) -> float:
        return float(scipy.linalg.eigvalsh(self.pencil(g), subset_by_index=[0, 0])[0])


@dataclass(frozen=True)
class SolverOptions:
    feasibility_tol: float = 1e-8
    gap_tol: float = 1e-8
    max_iters: int = 100
    backend: str = "ipm"

    def __post_init__(self):
        if self.backend not in ("ipm", "cvxopt"):
            raise DomainError(f"unknown SDP backend {self.backend!r}")
        if self.feasibility_tol <= 0 or self.gap_tol <= 0 or self.max_iters < 1:
            raise DomainError("tolerances must be positive and max_iters >= 1")


@dataclass
class SDPSolution:
    status: str
    g: np.ndarray
    objective_value: float
    min_eig_residual: float
    iterations: int = 0
    runtime_s: float = 0.0
    dual_bound: float = float("nan")
    message: str = ""
    multiplier: np.ndarray | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.status == OPTIMAL


def solve(problem: SDProblem, opts: SolverOptions | None = None) -> SDPSolution:
    """Solve ``problem`` with the backend named in ``opts``.

    Raises:
        DomainError: if a variable has an all-zero matrix but nonzero cost,
            which makes the objective unbounded.
    """
    opts = opts or SolverOptions()
    t0 = time.perf_counter()
    active = [i for i, f in enumerate(problem.F) if f.nnz]
    for i in set(range(problem.n_vars)) - set(active):
        if problem.objective[i] != 0:
            raise DomainError(f"variable {i + 1} does not enter the pencil but carries cost; unbounded")
    if not active:
        sol = _solve_constant(problem, opts)
    else:
        reduced = SDProblem(problem.objective[active], problem.F0, tuple(problem.F[i] for i in active))
        if opts.backend == "cvxopt":
            sol = _solve_cvxopt(reduced, opts)
        else:
            sol = _solve_ipm(reduced, opts)
        g = np.zeros(problem.n_vars)
        g[active] = sol.g
        sol.g = g
    sol.runtime_s = time.perf_counter() - t0
    if sol.status == OPTIMAL:
        sol.min_eig_residual = problem.min_eig(sol.g)
        if sol.min_eig_residual < -opts.feasibility_tol:
            log.warning("pencil violated by %.2e at reported optimum", -sol.min_eig_residual)
            sol.status = NUMERICAL_FAILURE
            sol.message = "returned point violates the pencil beyond feasibility_tol"
    return sol


def _solve_constant(problem: SDProblem, opts: SolverOptions) -> SDPSolution:
    lam = problem.min_eig(np.zeros(problem.n_vars))
    status = OPTIMAL if lam >= -opts.feasibility_tol else INFEASIBLE
    return SDPSolution(status, np.zeros(problem.n_vars), 0.0, lam, message="no free variables")


# ---------------------------------------------------------------------------
# embedded interior-point method


def _max_step(X: np.ndarray, dX: np.ndarray, L: np.ndarray | None = None) -> float:
    """Largest ``a <= 1`` keeping ``X + a dX`` positive definite (before damping)."""
    if L is None:
        L = np.linalg.cholesky(X)
    Linv_dX = scipy.linalg.solve_triangular(L, dX, lower=True)
    T = scipy.linalg.solve_triangular(L, Linv_dX.T, lower=True)
    lam = scipy.linalg.eigvalsh((T + T.T) / 2, subset_by_index=[0, 0])[0]
    return 1.0 if lam >= 0 else min(1.0, -1.0 / lam)


def _solve_ipm(problem: SDProblem, opts: SolverOptions) -> SDPSolution:
    A = problem.F
    m, n = problem.n_vars, problem.block_dim
    C = problem.F0.toarray()
    b = -problem.objective

    def A_op(X):  # <A_i, X>
        return np.array([a.multiply(X).sum() for a in A])

    def AT_op(y):
        out = sp.csr_matrix((n, n))
        for yi, a in zip(y, A):
            out = out + yi * a
        return out.toarray()

    normA = max(spla.norm(a) for a in A)
    normC = np.linalg.norm(C)
    normb = np.linalg.norm(b)
    xi = max(10.0, np.sqrt(n), n * max((1 + abs(bi)) / (1 + spla.norm(a)) for bi, a in zip(b, A)))
    eta = max(10.0, np.sqrt(n), normA, normC)
    X = xi * np.eye(n)
    S = eta * np.eye(n)
    y = np.zeros(m)

    best = None
    status, message = NUMERICAL_FAILURE, "iteration limit reached"
    it = 0
    for it in range(1, opts.max_iters + 1):
        Rp = b - A_op(X)
        Rd = C - S - AT_op(y)
        mu = np.sum(X * S) / n
        pobj, dobj = float(np.sum(C * X)), float(b @ y)
        gap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
        pinf = np.linalg.norm(Rp) / (1 + normb)
        dinf = np.linalg.norm(Rd) / (1 + normC)
        log.debug("it %3d pobj %.10e dobj %.10e gap %.1e pinf %.1e dinf %.1e", it, pobj, dobj, gap, pinf, dinf)
        merit = max(gap, pinf, dinf)
        if best is None or merit < best[0]:
            best = (merit, y.copy(), X.copy(), dobj, pobj)
        if gap <= opts.gap_tol and pinf <= opts.feasibility_tol and dinf <= opts.feasibility_tol:
            status, message = OPTIMAL, "converged"
            break
        # Y-certificate of infeasibility of the pencil: <A_i, Y> = 0, <C, Y> < 0
        trX = np.trace(X)
        if pobj < 0 and np.linalg.norm(A_op(X)) / trX <= opts.feasibility_tol * (-pobj / trX) and -pobj / trX > 1e-6 and trX > 1e8:
            status, message = INFEASIBLE, "found Y >= 0 with <F_i,Y> = 0 and <F_0,Y> < 0"
            break
        try:
            Ls = np.linalg.cholesky(S)
            Lx = np.linalg.cholesky(X)
        except np.linalg.LinAlgError:
            message = "iterate lost positive definiteness"
            break
        Sinv = scipy.linalg.cho_solve((Ls, True), np.eye(n))
        Sinv = (Sinv + Sinv.T) / 2
        # Schur complement M_ij = <A_i, X A_j S^-1>
        M = np.empty((m, m))
        for j in range(m):
            T = X @ (A[j] @ Sinv)
            for i in range(m):
                M[i, j] = A[i].multiply(T).sum()
        M = (M + M.T) / 2
        try:
            cf = scipy.linalg.cho_factor(M)
            msolve = lambda r: scipy.linalg.cho_solve(cf, r)  # noqa: E731
        except np.linalg.LinAlgError:
            msolve = lambda r: np.linalg.lstsq(M, r, rcond=None)[0]  # noqa: E731
        XRdSinv = X @ Rd @ Sinv

        def direction(target):
            # target is sigma*mu*S^-1 - X - (correction), dX = target - X dS S^-1
            dy = msolve(Rp - A_op(target - XRdSinv))
            dS = Rd - AT_op(dy)
            dX = target - X @ dS @ Sinv
            return dy, (dX + dX.T) / 2, (dS + dS.T) / 2

        # predictor
        dy, dX, dS = direction(-X)
        ap = _max_step(X, dX, Lx)
        ad = _max_step(S, dS, Ls)
        mu_aff = np.sum((X + ap * dX) * (S + ad * dS)) / n
        sigma = min(1.0, (mu_aff / mu) ** 3)
        # corrector
        target = sigma * mu * Sinv - X - dX @ dS @ Sinv
        dy, dX, dS = direction(target)
        tau = 0.9 + 0.09 * min(1.0, 1 - sigma) if it > 1 else 0.9
        ap = min(1.0, tau * _max_step(X, dX, Lx))
        ad = min(1.0, tau * _max_step(S, dS, Ls))
        X = X + ap * dX
        y = y + ad * dy
        S = S + ad * dS
        X, S = (X + X.T) / 2, (S + S.T) / 2
    else:
        it = opts.max_iters

    if status == INFEASIBLE:
        return SDPSolution(INFEASIBLE, np.full(m, np.nan), float("nan"), float("nan"), it, message=message, multiplier=X / np.trace(X))
    if status != OPTIMAL:
        _, y, X, dobj, pobj = best
    else:
        dobj, pobj = float(b @ y), float(np.sum(C * X))
    g = -y
    return SDPSolution(status, g, float(problem.objective @ g), float("nan"), it, dual_bound=pobj, message=message, multiplier=X)


# ---------------------------------------------------------------------------
# cvxopt adapter


def _solve_cvxopt(problem: SDProblem, opts: SolverOptions) -> SDPSolution:
    import cvxopt
    from cvxopt import solvers

    n, m = problem.block_dim, problem.n_vars
    rows, cols, vals = [], [], []
    for j, f in enumerate(problem.F):
        coo = f.tocoo()
        rows.extend((coo.row + coo.col * n).tolist())
        cols.extend([j] * coo.nnz)
        vals.extend((-coo.data).tolist())
    G = cvxopt.spmatrix(vals, rows, cols, (n * n, m))
    h = cvxopt.matrix(problem.F0.toarray())
    c = cvxopt.matrix(-problem.objective)
    settings = {
        "show_progress": False,
        "abstol": opts.gap_tol,
        "reltol": opts.gap_tol,
        "feastol": opts.feasibility_tol,
        "maxiters": opts.max_iters,
    }
    try:
        res = solvers.sdp(c, Gs=[G], hs=[h], options=settings)
    except (ValueError, ArithmeticError) as exc:
        raise NumericalFailure(f"cvxopt failed: {exc}") from exc
    if res["status"] == "primal infeasible":
        return SDPSolution(INFEASIBLE, np.full(m, np.nan), float("nan"), float("nan"), res["iterations"], message="cvxopt: primal infeasible")
    g = np.array(res["x"]).ravel()
    status = OPTIMAL if res["status"] == "optimal" else NUMERICAL_FAILURE
    return SDPSolution(
        status, g, float(problem.objective @ g), float("nan"), res["iterations"],
        dual_bound=-float(res["dual objective"]) if res["dual objective"] is not None else float("nan"),
        message=f"cvxopt: {res['status']}",
    )


# ---------------------------------------------------------------------------
# plain-text export

EXPORT_HEADER = """\
# sparse SDP pencil
# maximize c . g  subject to  F_0 + sum_i g_i F_i >= 0  (one real symmetric block)
# line 'n_vars <m>', line 'block_dim <n>', line 'objective c_1 ... c_m',
# then one line per nonzero in the upper triangle: matrix_index row col value
# matrix_index 0 is F_0; rows and columns are 1-based
"""


def export_problem(problem: SDProblem, path) -> Path:
    path = Path(path)
    lines = [EXPORT_HEADER.rstrip("\n")]
    lines.append(f"n_vars {problem.n_vars}")
    lines.append(f"block_dim {problem.block_dim}")
    lines.append("objective " + " ".join(repr(float(x)) for x in problem.objective))
    for idx, f in enumerate((problem.F0,) + problem.F):
        coo = sp.triu(f).tocoo()
        order = np.lexsort((coo.col, coo.row))
        for r, c_, v in zip(coo.row[order], coo.col[order], coo.data[order]):
            lines.append(f"{idx} {r + 1} {c_ + 1} {float(v)!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_problem(path) -> SDProblem:
    m = n = None
    c = None
    entries = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        if head == "n_vars":
            m = int(rest[0])
        elif head == "block_dim":
            n = int(rest[0])
        elif head == "objective":
            c = np.array([float(x) for x in rest])
        else:
            entries.append((int(head), int(rest[0]) - 1, int(rest[1]) - 1, float(rest[2])))
    if m is None or n is None or c is None:
        raise DomainError("pencil file lacks n_vars, block_dim or objective")
    mats = [sp.lil_matrix((n, n)) for _ in range(m + 1)]
    for idx, r, col, v in entries:
        mats[idx][r, col] = v
        mats[idx][col, r] = v
    return SDProblem(c, mats[0].tocsr(), tuple(x.tocsr() for x in mats[1:]))
