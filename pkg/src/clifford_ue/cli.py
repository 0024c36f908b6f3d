"""Command-line driver: bounds tables, verification suites, seesaw traces.

Settings are resolved per key in the order command-line flag, ``--config``
file (``key = value`` lines), environment variable ``CLIFFORD_UE_<KEY>``,
built-in default.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import CliffordUEError, ConjectureViolation, DomainError
from .game import conjecture_bound
from .npa1 import npa1_pencil, npa1_value, solve_npa1_sdp
from .npa2 import build_structure, dump_structure, solve_npa2
from .sdp import OPTIMAL, SolverOptions, export_problem
from .seesaw import SeesawConfig, run, run_sweep, traces_csv
from .verification import (
    PROFILES,
    verify_clifford,
    verify_npa2_structure,
    verify_scheme,
    verify_sos_bc23,
    verify_sos_family,
    verify_strategies,
)

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3
ENV_PREFIX = "CLIFFORD_UE_"
METHODS = ("conjecture", "npa1", "npa1-sdp", "npa2", "seesaw")
BOUNDS_HEADER = ("K", "conjecture", "npa1", "npa2", "seesaw_lower", "npa1_runtime_s", "npa2_runtime_s")
VERIFY_TARGETS = ("clifford", "scheme", "sos-family", "sos-bc23", "strategies", "npa2-structure")

log = logging.getLogger("clifford_ue")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# settings


@dataclass
class Settings:
    tolerance_profile: str = "paper"
    gap_tol: float = 1e-8
    feasibility_tol: float = 1e-8
    max_iters: int = 100
    backend: str = "ipm"
    seed: int = 0
    instances: int = 100
    iters: int = 10
    dims: str = "2,3,4"
    trials: int = 20
    workers: int = 1

    def solver_options(self) -> SolverOptions:
        return SolverOptions(self.feasibility_tol, self.gap_tol, self.max_iters, self.backend)

    @property
    def tolerances(self):
        return PROFILES[self.tolerance_profile]


def read_config(path) -> dict[str, str]:
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{n}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def resolve_settings(args: argparse.Namespace, environ=None) -> Settings:
    environ = os.environ if environ is None else environ
    config = read_config(args.config) if getattr(args, "config", None) else {}
    defaults = Settings()
    values = {}
    for name, default in asdict(defaults).items():
        flag = getattr(args, name, None)
        if flag is not None:
            raw = flag
        elif name in config:
            raw = config[name]
        elif ENV_PREFIX + name.upper() in environ:
            raw = environ[ENV_PREFIX + name.upper()]
        else:
            raw = default
        try:
            values[name] = type(default)(raw)
        except ValueError as exc:
            raise UsageError(f"bad value {raw!r} for {name}") from exc
    s = Settings(**values)
    if s.tolerance_profile not in PROFILES:
        raise UsageError(f"unknown tolerance profile {s.tolerance_profile!r}")
    if s.backend not in ("ipm", "cvxopt"):
        raise UsageError(f"unknown backend {s.backend!r}")
    return s


def parse_int_list(text: str) -> list[int]:
    """``"2,4,7"`` or ``"2..7"`` or a mix such as ``"2..4,8"``."""
    out: list[int] = []
    try:
        for part in str(text).split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                if int(hi) < int(lo):
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}") from exc
    if not out:
        raise UsageError("empty integer list")
    return out


# ---------------------------------------------------------------------------
# bounds


@dataclass
class BoundReport:
    K: int
    conjecture: float | None = None
    npa1: float | None = None
    npa2: float | None = None
    seesaw_lower: float | None = None
    runtimes: dict[str, float] = field(default_factory=dict)
    solver_status: dict[str, str] = field(default_factory=dict)

    def ordering_violations(self) -> list[str]:
        """Hierarchy ordering with table-rounding slack, among present cells."""
        out = []
        c, n1, n2, s = self.conjecture, self.npa1, self.npa2, self.seesaw_lower
        if s is not None and c is not None and s > c + 1e-6:
            out.append("seesaw_lower > conjecture")
        if c is not None and n2 is not None and c + 1e-6 > n2 + 2e-3:
            out.append("conjecture > npa2")
        if n2 is not None and n1 is not None and n2 > n1 + 1e-6:
            out.append("npa2 > npa1")
        return out


def compute_bounds(K: int, methods, settings: Settings, seesaw_dims=(2,)) -> BoundReport:
    rep = BoundReport(K)
    if "conjecture" in methods:
        rep.conjecture = conjecture_bound(K)[1]
    if "npa1" in methods or "npa1-sdp" in methods:
        t0 = time.perf_counter()
        if "npa1-sdp" in methods:
            win, sol = solve_npa1_sdp(K, settings.solver_options())
            rep.solver_status["npa1"] = sol.status
            rep.npa1 = win if sol.status == OPTIMAL else None
        else:
            rep.npa1 = npa1_value(K)
            rep.solver_status["npa1"] = "closed-form"
        rep.runtimes["npa1"] = time.perf_counter() - t0
    if "npa2" in methods:
        t0 = time.perf_counter()
        win, sol = solve_npa2(K, settings.solver_options())
        rep.solver_status["npa2"] = sol.status
        rep.npa2 = win if sol.status == OPTIMAL else None
        rep.runtimes["npa2"] = time.perf_counter() - t0
    if "seesaw" in methods:
        t0 = time.perf_counter()
        cfg = SeesawConfig(K, D=seesaw_dims[0], M=settings.iters, instances=settings.instances, seed=settings.seed)
        try:
            results = run_sweep(cfg, seesaw_dims, workers=settings.workers, strict=True)
            rep.seesaw_lower = max(r.best_win_prob for r in results)
            rep.solver_status["seesaw"] = "ok"
        except ConjectureViolation as exc:
            rep.seesaw_lower = 0.25 + exc.value / (4 * K)
            rep.solver_status["seesaw"] = "conjecture-violation"
        rep.runtimes["seesaw"] = time.perf_counter() - t0
    return rep


def _fmt(x: float | None, digits: int = 10) -> str:
    return "" if x is None else f"{x:.{digits}f}"


def bounds_csv(reports, timings: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BOUNDS_HEADER)
    for r in reports:
        rt = (
            (_fmt(r.runtimes.get("npa1"), 3), _fmt(r.runtimes.get("npa2"), 3)) if timings else ("", "")
        )
        w.writerow((r.K, _fmt(r.conjecture), _fmt(r.npa1), _fmt(r.npa2), _fmt(r.seesaw_lower)) + rt)
    return buf.getvalue()


def bounds_json(reports, timings: bool = True) -> str:
    rows = []
    for r in reports:
        row = {
            "K": r.K,
            "conjecture": r.conjecture,
            "npa1": r.npa1,
            "npa2": r.npa2,
            "seesaw_lower": r.seesaw_lower,
            "npa1_runtime_s": r.runtimes.get("npa1") if timings else None,
            "npa2_runtime_s": r.runtimes.get("npa2") if timings else None,
            "solver_status": r.solver_status,
        }
        rows.append(row)
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bounds(args, settings: Settings) -> int:
    Ks = parse_int_list(args.k)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise UsageError(f"unknown methods {sorted(unknown)}; choose from {', '.join(METHODS)}")
    if any(m.startswith("npa") for m in methods) and min(Ks) < 2:
        raise UsageError("NPA bounds need K >= 2")
    if min(Ks) < 1:
        raise UsageError("K must be positive")
    dims = parse_int_list(args.dims) if args.dims else [2]
    reports = []
    for K in Ks:
        log.info("bounds K=%d", K)
        reports.append(compute_bounds(K, methods, settings, dims))
    text = bounds_json(reports, not args.no_timings) if args.format == "json" else bounds_csv(reports, not args.no_timings)
    _emit(text, args.out)
    code = EXIT_OK
    for r in reports:
        for v in r.ordering_violations():
            log.error("K=%d: %s", r.K, v)
            code = EXIT_VALIDATION
        if r.solver_status.get("seesaw") == "conjecture-violation":
            log.error("K=%d: seesaw exceeded the conjectured bound", r.K)
            code = EXIT_VALIDATION
    failed = [r.K for r in reports if any(s not in (OPTIMAL, "closed-form", "ok", "conjecture-violation") for s in r.solver_status.values())]
    if failed and code == EXIT_OK:
        log.error("solver failures at K=%s", failed)
        code = EXIT_SOLVER
    return code


# ---------------------------------------------------------------------------
# verify, seesaw, structure dump, export


def cmd_verify(args, settings: Settings) -> int:
    tol = settings.tolerances
    dims = tuple(parse_int_list(settings.dims))
    t = args.target
    if t == "clifford":
        rep = verify_clifford(parse_int_list(args.lam or "1..6"), seed=settings.seed, tol=tol)
    elif t == "scheme":
        rep = verify_scheme(parse_int_list(args.lam or "1..5"), seed=settings.seed)
    elif t == "sos-family":
        rep = verify_sos_family(parse_int_list(args.k or "2..8"), settings.trials, dims, settings.seed, tol)
    elif t == "sos-bc23":
        rep = verify_sos_bc23(settings.trials, dims, settings.seed, tol)
    elif t == "strategies":
        rep = verify_strategies(parse_int_list(args.k or "2..8"), settings.seed, tol)
    else:
        rep = verify_npa2_structure(parse_int_list(args.k or "4..6"))
    for line in rep.lines():
        print(line)
    print(f"{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} checks passed")
    return EXIT_OK if rep else EXIT_VALIDATION


def cmd_seesaw(args, settings: Settings) -> int:
    dims = parse_int_list(args.dims or settings.dims)
    try:
        cfgs = [SeesawConfig(args.k, D=D, M=settings.iters, instances=settings.instances, seed=settings.seed) for D in dims]
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    results = []
    code = EXIT_OK
    for cfg in cfgs:
        try:
            results.append(run(cfg, workers=settings.workers, strict=not args.no_strict))
        except ConjectureViolation as exc:
            log.error("%s", exc)
            code = EXIT_VALIDATION
    _emit(traces_csv(results), args.out)
    for res in results:
        log.info(
            "K=%d D=%d best=%.12f max log-ratio=%.3e monotone=%s",
            res.cfg.K, res.cfg.D, res.best, res.max_log_error, res.all_monotone,
        )
        if res.max_log_error > 1e-9 or not res.all_monotone:
            code = EXIT_VALIDATION
    return code


def cmd_structure(args, settings: Settings) -> int:
    text = dump_structure(build_structure(args.k))
    _emit(text, args.out)
    return EXIT_OK


def cmd_export(args, settings: Settings) -> int:
    problem = npa1_pencil(args.k) if args.level == 1 else build_structure(args.k).sdp()
    export_problem(problem, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clifford-ue", description=__doc__.split("\n\n")[0])
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--tolerance-profile", dest="tolerance_profile", choices=sorted(PROFILES))
    p.add_argument("--backend", choices=("ipm", "cvxopt"))
    p.add_argument("--gap-tol", dest="gap_tol", type=float)
    p.add_argument("--feasibility-tol", dest="feasibility_tol", type=float)
    p.add_argument("--max-iters", dest="max_iters", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="winning-probability bounds per K")
    b.add_argument("--k", required=True, help="K values, e.g. 2,4,7 or 2..7")
    b.add_argument("--methods", default="conjecture,npa1,npa2", help=f"subset of {','.join(METHODS)}")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--out")
    b.add_argument("--instances", type=int)
    b.add_argument("--iters", type=int)
    b.add_argument("--dims", help="seesaw dimensions D (default 2)")
    b.add_argument("--no-timings", action="store_true", help="leave runtime cells empty for byte-stable output")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("target", choices=VERIFY_TARGETS)
    v.add_argument("--k")
    v.add_argument("--lambda", dest="lam")
    v.add_argument("--trials", type=int)
    v.add_argument("--dims")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("seesaw", help="per-step seesaw traces as CSV")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--dims")
    s.add_argument("--instances", type=int)
    s.add_argument("--iters", type=int)
    s.add_argument("--out")
    s.add_argument("--no-strict", action="store_true", help="report instead of aborting on a conjecture violation")
    s.set_defaults(func=cmd_seesaw)

    n = sub.add_parser("npa2-structure", help="dump the level-2 class assignment")
    n.add_argument("--k", type=int, required=True)
    n.add_argument("--out")
    n.set_defaults(func=cmd_structure)

    e = sub.add_parser("export-sdp", help="write a pencil in the sparse text format")
    e.add_argument("--level", type=int, choices=(1, 2), required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        settings = resolve_settings(args)
        return args.func(args, settings)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CliffordUEError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
