"""Recompute the bounds table (conjecture, NPA level 1, NPA level 2) and compare with reference values.

Usage:
    python3 scripts/reproduce_table.py                # K in the reference table, NPA-2 up to K=18
    python3 scripts/reproduce_table.py --npa2-max 35  # include the long K=25 and K=35 solves
"""

from __future__ import annotations

import argparse
import time

from clifford_ue.game import conjecture_bound
from clifford_ue.npa1 import npa1_value
from clifford_ue.npa2 import solve_npa2
from clifford_ue.reference import NPA1_TABLE, NPA2_TABLE, NPA2_TABLE_LONG, TABLE_TOL


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--npa2-max", type=int, default=18, help="largest K for which the level-2 SDP is solved")
    args = ap.parse_args()

    npa2_ref = {**NPA2_TABLE, **NPA2_TABLE_LONG}
    print(f"{'K':>3} {'conjecture':>10} {'npa1':>8} {'npa2':>8} {'ref npa2':>8} {'seconds':>8}  check")
    bad = 0
    for K in sorted(NPA1_TABLE):
        conj = conjecture_bound(K)[1]
        n1 = npa1_value(K)
        ok = abs(round(n1, 4) - NPA1_TABLE[K]) < 1e-12
        n2_text, ref_text, secs = "", "", ""
        if K in npa2_ref and K <= args.npa2_max:
            t0 = time.perf_counter()
            n2, sol = solve_npa2(K)
            secs = f"{time.perf_counter() - t0:.1f}"
            n2_text, ref_text = f"{n2:.4f}", f"{npa2_ref[K]:.4f}"
            ok &= sol.ok and abs(n2 - npa2_ref[K]) <= TABLE_TOL and conj - 1e-4 <= n2 <= n1 + 1e-6
        bad += not ok
        print(f"{K:>3} {conj:>10.4f} {n1:>8.4f} {n2_text:>8} {ref_text:>8} {secs:>8}  {'ok' if ok else 'MISMATCH'}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
