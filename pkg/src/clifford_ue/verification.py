"""Check suites behind ``clifford-ue verify``; each returns a :class:`CheckReport`."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .checks import CheckReport, CheckResult
from .clifford import family_for, jordan_wigner_generators, linear_combination_norm_check
from .game import (
    Strategy,
    build_W,
    conjecture_bound,
    gamma_cross_term_norms,
    gamma_strategy_norms,
    low_rank_strategy,
    low_rank_witness,
    random_hermitian_unitary,
)
from .npa2 import build_structure, validate_structure
from .reference import GAMMA_CROSS_TERMS, GAMMA_NORMS
from .scheme import SchemeInstance, decrypt, encrypt, single_decryptor_norm_check
from .sos import certificate_sweep, verify_bc23_certificate


@dataclass(frozen=True)
class Tolerances:
    residual: float = 1e-9
    norm: float = 1e-8
    psd: float = 1e-8
    table: float = 5e-4


PROFILES = {
    "paper": Tolerances(),
    "strict": Tolerances(residual=1e-12, norm=1e-10, psd=1e-10, table=1e-4),
}


def verify_clifford(lams, trials: int = 50, seed: int = 0, tol: Tolerances = Tolerances()) -> CheckReport:
    rep = CheckReport()
    rng = np.random.default_rng(seed)
    for lam in lams:
        fam = jordan_wigner_generators(lam, 2 * lam + 1)
        rep.add(CheckResult(f"anticommutation lam={lam}", fam.is_exact_clifford()))
        if fam.dim <= 256:
            rep.add(linear_combination_norm_check(fam, np.ones(fam.K), tol.norm))
            worst = max(
                abs(c.value - c.expected)
                for c in (linear_combination_norm_check(fam, rng.standard_normal(fam.K)) for _ in range(trials))
            )
            rep.add(CheckResult(f"norm identity lam={lam} random", worst <= tol.norm, worst, 0.0))
    return rep


def verify_scheme(lams, seed: int = 0) -> CheckReport:
    rep = CheckReport()
    for lam in lams:
        inst = SchemeInstance.from_lambda(lam)
        worst_ok, worst_wrong = 0.0, 0.0
        for k in range(1, inst.K + 1):
            for m in (0, 1):
                ct = encrypt(inst, m, k)
                worst_ok = max(worst_ok, 1 - decrypt(inst, ct, k, seed).probabilities[m])
                for k2 in range(1, inst.K + 1):
                    if k2 != k:
                        p = decrypt(inst, ct, k2, seed).probabilities[0]
                        worst_wrong = max(worst_wrong, abs(p - 0.5))
        rep.add(CheckResult(f"correct decryption lam={lam}", worst_ok <= 1e-12, worst_ok, 0.0))
        rep.add(CheckResult(f"wrong-key decryption lam={lam}", worst_wrong <= 1e-10, worst_wrong, 0.0))
        rng = np.random.default_rng(seed)
        for D in (1, 2, 3):
            rep.add(single_decryptor_norm_check(inst.family, random_hermitian_unitary(D, rng)))
    return rep


def verify_sos_family(Ks, trials: int = 20, dims=(2, 3), seed: int = 0, tol: Tolerances = Tolerances()) -> CheckReport:
    rep = CheckReport()
    for K in Ks:
        checks = certificate_sweep(K, trials, dims, seed)
        res = max(c.residual for c in checks)
        rep.add(CheckResult(f"family identity K={K}", res <= tol.residual, res, 0.0))
        sq = min(c.min_square_eig for c in checks)
        rep.add(CheckResult(f"squared factors PSD K={K}", sq >= -1e-10, sq, 0.0))
        alpha = checks[0].alpha
        if K <= 7:
            rep.add(CheckResult(f"alpha positive K={K}", alpha > 0, alpha, 0.0))
            lam = min(c.min_P_eig for c in checks)
            rep.add(CheckResult(f"P_K PSD K={K}", lam >= -tol.psd, lam, 0.0))
        else:
            rep.add(CheckResult(f"alpha negative K={K} (certificate void)", alpha < 0, alpha, 0.0))
    return rep


def verify_sos_bc23(trials: int = 20, dims=(2, 3), seed: int = 0, tol: Tolerances = Tolerances()) -> CheckReport:
    rep = CheckReport()
    rng = np.random.default_rng(seed)
    ident = verify_bc23_certificate(Strategy.identity(2, 1))
    rep.add(CheckResult("two-key certificate identity strategy", ident.residual <= 1e-12, ident.residual, 0.0))
    checks = [verify_bc23_certificate(Strategy.random(2, dims[t % len(dims)], rng)) for t in range(trials)]
    res = max(c.residual for c in checks)
    rep.add(CheckResult("two-key certificate random strategies", res <= tol.residual, res, 0.0))
    lam = min(c.min_P_eig for c in checks)
    rep.add(CheckResult("P_2 PSD across sweep", lam >= -tol.psd, lam, 0.0))
    return rep


def verify_strategies(Ks, seed: int = 0, tol: Tolerances = Tolerances()) -> CheckReport:
    rep = CheckReport()
    Ks = list(Ks)
    for K in Ks:
        fam = family_for(K)
        got = build_W(fam, Strategy.identity(K)).norm
        want = conjecture_bound(K)[0]
        rep.add(CheckResult(f"identity strategy K={K}", abs(got - want) <= 1e-9, got, want))
    for K, got in zip(Ks, gamma_strategy_norms(max(Ks), min(Ks))):
        if K in GAMMA_NORMS:
            rep.add(CheckResult(f"gamma strategy K={K}", abs(got - GAMMA_NORMS[K]) <= tol.norm, got, GAMMA_NORMS[K]))
    for K, got in zip(Ks, gamma_cross_term_norms(max(Ks), min(Ks))):
        if K in GAMMA_CROSS_TERMS:
            want = 2 * math.sqrt(GAMMA_CROSS_TERMS[K])
            rep.add(CheckResult(f"gamma cross terms K={K}", abs(got - want) <= tol.norm, got, want))
    for K in (k for k in Ks if k <= 7):
        fam = family_for(K)
        strat, u_perp = low_rank_strategy(fam, 1, K + 1, seed)
        got = build_W(fam, strat).norm
        want = conjecture_bound(K)[0]
        _, witness = low_rank_witness(fam, strat, u_perp)
        rep.add(CheckResult(f"low-rank strategy K={K}", abs(got - want) <= tol.norm, got, want))
        rep.add(CheckResult(f"low-rank witness K={K}", abs(witness - want) <= tol.norm, witness, want))
    return rep


def verify_npa2_structure(Ks) -> CheckReport:
    rep = CheckReport()
    for K in Ks:
        sub = validate_structure(build_structure(K))
        for c in sub.checks:
            rep.add(CheckResult(f"K={K} {c.name}", c.passed, c.value, c.expected, c.detail))
    return rep
