"""Level-2 NPA bound: the symmetry-reduced 18-parameter moment pencil.

Monomials, in index order::

    psi;  u_1..u_K;  v_1..v_K;  u_iv_j (row-major);
    u_iu_j, i != j (row-major);  v_iv_j, i != j (row-major)

giving ``1 + 3K^2`` rows.  Relabeling keys, swapping the two adversaries and
taking real parts leave the optimization invariant, so every Gram entry
``<a|b>`` is a signed copy of one of 18 parameters, the constant 1, or 0.
``CLASSIFICATION`` lists one representative pattern per line; distinct index
letters denote distinct keys, and a leading ``-`` means the entry equals minus
the parameter.

The table is audited against an independent algebraic model.  In it ``u_i``
and ``v_j`` are unitary involutions that commute for ``i == j`` and
anticommute otherwise (as ``Gamma_i (x) B_i (x) I`` and
``Gamma_j (x) I (x) C_j`` do).  ``<a|b>`` is the word ``a^dagger b`` and is
reduced to a normal form; entries whose words lie in one symmetry orbit must
share a class, and orbits containing both ``w`` and ``-w`` must vanish.
"""

from __future__ import annotations

import math
import re
from collections import defaultdict
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .checks import CheckReport, CheckResult
from .clifford import family_for
from .errors import DomainError, StructureError
from .sdp import SDPSolution, SDProblem, SolverOptions, solve

N_PARAMS = 18
ONE_CLASS = 0
ZERO_CLASS = -1
UNASSIGNED = -2

CLASSIFICATION = """\
1: psi|psi, u_i|u_i, v_i|v_i, u_iv_i|u_iv_i, u_iv_j|u_iv_j, u_iu_j|u_iu_j, v_iv_j|v_iv_j
0: u_i|v_j, psi|u_iv_j, u_iv_i|u_iu_j, u_iv_i|u_ju_i, u_iv_j|u_iu_k, u_iv_j|u_ku_i, u_iv_j|u_ku_l, u_iv_i|v_iv_j, u_iv_i|v_jv_i, u_iv_j|v_kv_j, u_iv_j|v_jv_k, u_iv_j|v_kv_l, u_iu_j|v_kv_i, u_iu_j|v_jv_k, u_iv_i|u_jv_k, u_iv_j|u_kv_k
g1: psi|u_i, psi|v_i, u_i|u_iv_i, v_i|u_iv_i, u_i|u_iv_j, -v_i|u_jv_i, u_i|u_iu_j, v_i|v_iv_j
g2: u_i|v_i, psi|u_iv_i, u_iv_j|u_iu_j, -u_iv_j|v_jv_i
g3: u_i|u_j, v_i|v_j, u_iv_i|u_iv_j, -u_iv_i|u_jv_i, psi|u_iu_j, psi|v_iv_j, u_iv_j|u_iv_k, u_iv_j|u_kv_j, u_iu_j|u_iu_k, v_iv_j|v_iv_k
g4: u_i|u_jv_j, -u_i|u_jv_i, v_i|u_jv_j, v_i|u_iv_j, v_i|u_iu_j, -v_i|u_ju_i, u_i|v_iv_j, -u_i|v_jv_i
g5: u_i|u_jv_k, -v_i|u_jv_k, v_i|u_ju_k, u_i|v_jv_k
g6: u_iv_i|u_jv_j, -u_iu_j|v_jv_i
g7: u_iv_j|u_jv_i, -u_iu_j|v_iv_j
g8: u_iv_j|u_kv_i, -u_iu_j|v_iv_k, u_iu_j|v_kv_j
g9: u_iv_j|u_kv_l, u_iu_j|v_kv_l
g10: u_i|u_ju_i, v_i|v_jv_i
g11: u_i|u_ju_k, v_i|v_jv_k
g12: u_iv_j|u_ju_i, -u_iv_j|v_iv_j
g13: u_iv_i|u_ju_k, u_iv_j|u_ku_j, u_iv_i|v_jv_k, -u_iv_j|v_kv_i
g14: u_iv_j|u_ju_k, -u_iv_j|v_iv_k
g15: u_iu_j|u_ju_i, v_iv_j|v_jv_i
g16: u_iu_j|u_ku_i, v_iv_j|v_kv_i
g17: u_iu_j|u_ku_j, v_iv_j|v_kv_j
g18: u_iu_j|u_ku_l, v_iv_j|v_kv_l
"""

Monomial = tuple[tuple[str, int], ...]
_LETTERS = "ijklmn"


def index_set(K: int) -> list[Monomial]:
    """Monomials in the documented order; each letter is ``('u'|'v', key index)``."""
    r = range(K)
    mons: list[Monomial] = [()]
    mons += [(("u", i),) for i in r]
    mons += [(("v", i),) for i in r]
    mons += [(("u", i), ("v", j)) for i in r for j in r]
    mons += [(("u", i), ("u", j)) for i in r for j in r if i != j]
    mons += [(("v", i), ("v", j)) for i in r for j in r if i != j]
    return mons


def monomial_label(m: Monomial) -> str:
    return "".join(f"{k}{i + 1}" for k, i in m) or "psi"


def pair_pattern(a: Monomial, b: Monomial) -> str:
    """``<a|b>`` with key indices renamed ``i, j, k, ...`` by first appearance."""
    names: dict[int, str] = {}
    sides = []
    for m in (a, b):
        s = ""
        for kind, idx in m:
            if idx not in names:
                names[idx] = _LETTERS[len(names)]
            s += f"{kind}_{names[idx]}"
        sides.append(s or "psi")
    return "|".join(sides)


def _parse_pattern_side(text: str) -> Monomial:
    if text == "psi":
        return ()
    letters = re.findall(r"([uv])_([a-z])", text)
    if "".join(f"{k}_{v}" for k, v in letters) != text:
        raise StructureError(f"cannot parse monomial pattern {text!r}")
    return tuple((k, _LETTERS.index(v)) for k, v in letters)


def _class_id(name: str) -> int:
    if name == "1":
        return ONE_CLASS
    if name == "0":
        return ZERO_CLASS
    m = re.fullmatch(r"g(\d+)", name)
    if not m or not 1 <= int(m.group(1)) <= N_PARAMS:
        raise StructureError(f"unknown class label {name!r}")
    return int(m.group(1))


def parse_classification(text: str = CLASSIFICATION) -> dict[str, tuple[int, int]]:
    """Map canonical pair patterns to ``(class id, sign)``.

    Raises:
        StructureError: if one pattern is listed twice.
    """
    table: dict[str, tuple[int, int]] = {}
    for line in text.strip().splitlines():
        name, _, items = line.partition(":")
        cid = _class_id(name.strip())
        for item in items.split(","):
            item = item.strip()
            sign = 1
            if item.startswith("-"):
                sign, item = -1, item[1:]
            left, right = item.split("|")
            key = pair_pattern(_parse_pattern_side(left), _parse_pattern_side(right))
            if key in table:
                raise StructureError(f"pattern {key} listed twice in the classification")
            table[key] = (cid, 0 if cid == ZERO_CLASS else sign)
    return table


# ---------------------------------------------------------------------------
# algebraic oracle


def reduce_word(word) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """Normal form ``sign * (u-word)(v-word)`` of a product of letters.

    Moving ``v_j`` past ``u_i`` costs a sign when ``i != j``; equal adjacent
    letters of one kind cancel.
    """
    sign = 1
    us: list[int] = []
    vs: list[int] = []
    for kind, i in word:
        if kind == "u":
            for j in vs:
                if j != i:
                    sign = -sign
            us.append(i)
        else:
            vs.append(i)

    def cancel(seq):
        out: list[int] = []
        for x in seq:
            if out and out[-1] == x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    return sign, cancel(us), cancel(vs)


def _relabel(us, vs):
    order: dict[int, int] = {}
    for x in us + vs:
        order.setdefault(x, len(order))
    return tuple(order[x] for x in us), tuple(order[x] for x in vs)


def _images(sign, us, vs):
    word = [("u", i) for i in us] + [("v", i) for i in vs]
    for swap in (False, True):
        w = [("v" if k == "u" else "u", i) for k, i in word] if swap else word
        for adj in (False, True):
            s, u2, v2 = reduce_word(w[::-1] if adj else w)
            yield (s * sign,) + _relabel(u2, v2)


@lru_cache(maxsize=None)
def _orbit_class(sign: int, us: tuple, vs: tuple):
    seen = {(sign,) + _relabel(us, vs)}
    frontier = list(seen)
    while frontier:
        for t in _images(*frontier.pop()):
            if t not in seen:
                seen.add(t)
                frontier.append(t)
    key = min((u, v) for _, u, v in seen)
    signs = {s for s, u, v in seen if (u, v) == key}
    if len(signs) == 2:
        return "zero", 0
    return key, signs.pop()


def word_class(a: Monomial, b: Monomial):
    """Oracle class of ``<a|b>``: ``("one", 1)``, ``("zero", 0)`` or ``(orbit key, sign)``."""
    sign, us, vs = reduce_word(list(a[::-1]) + list(b))
    if not us and not vs:
        return "one", sign
    return _orbit_class(sign, us, vs)


# ---------------------------------------------------------------------------
# structure


@dataclass(frozen=True)
class NPA2Structure:
    """Class and sign of every Gram entry; ``classes[a, b] = c`` and
    ``signs[a, b] = s`` mean ``G[a, b] = s * g_c`` (``c = 0``: constant 1,
    ``c = -1``: constant 0)."""

    K: int
    monomials: tuple[Monomial, ...]
    classes: np.ndarray
    signs: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.monomials)

    @cached_property
    def labels(self) -> list[str]:
        return [monomial_label(m) for m in self.monomials]

    def class_of(self, a: int, b: int) -> tuple[int, int]:
        return int(self.classes[a, b]), int(self.signs[a, b])

    @cached_property
    def G_mats(self) -> tuple[sp.csr_matrix, ...]:
        """``G_0, ..., G_18`` as sparse symmetric matrices."""
        n = self.dim
        out = []
        for c in range(N_PARAMS + 1):
            rows, cols = np.nonzero(self.classes == c)
            vals = self.signs[rows, cols].astype(float)
            out.append(sp.csr_matrix((vals, (rows, cols)), shape=(n, n)))
        return tuple(out)

    def pencil(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        if g.shape != (N_PARAMS,):
            raise DomainError(f"expected {N_PARAMS} parameters")
        out = self.G_mats[0].toarray()
        for gi, G in zip(g, self.G_mats[1:]):
            out += gi * G.toarray()
        return out

    def with_flipped_sign(self, a: int, b: int) -> "NPA2Structure":
        """Copy with the sign of entry ``(a, b)`` (and ``(b, a)``) reversed."""
        signs = self.signs.copy()
        signs[a, b] = -signs[a, b]
        signs[b, a] = signs[a, b]
        return replace(self, signs=signs)

    def sdp(self) -> SDProblem:
        c = np.zeros(N_PARAMS)
        c[0] = 2 * self.K
        c[1] = self.K
        return SDProblem(c, self.G_mats[0], self.G_mats[1:], names=tuple(f"g{i}" for i in range(1, N_PARAMS + 1)))


def build_structure(K: int, table: dict[str, tuple[int, int]] | None = None) -> NPA2Structure:
    """Assign every Gram entry through the classification table.

    Each unordered pair is looked up in both orientations.  ``K`` as small as 2
    is accepted; classes needing more distinct keys than ``K`` stay empty.

    Raises:
        StructureError: naming the first pair with no class or with two
            conflicting classes.
    """
    if not isinstance(K, (int, np.integer)) or K < 2:
        raise DomainError(f"level-2 structure needs an integer K >= 2, got {K!r}")
    table = parse_classification() if table is None else table
    mons = index_set(K)
    n = len(mons)
    classes = np.full((n, n), UNASSIGNED, dtype=np.int8)
    signs = np.zeros((n, n), dtype=np.int8)
    for a in range(n):
        ma = mons[a]
        for b in range(a, n):
            mb = mons[b]
            hits = {table.get(pair_pattern(ma, mb)), table.get(pair_pattern(mb, ma))} - {None}
            if not hits:
                raise StructureError(
                    f"no class for <{monomial_label(ma)}|{monomial_label(mb)}> (pattern {pair_pattern(ma, mb)})"
                )
            if len(hits) > 1:
                raise StructureError(
                    f"<{monomial_label(ma)}|{monomial_label(mb)}> assigned twice: {sorted(hits)}"
                )
            c, s = hits.pop()
            classes[a, b] = classes[b, a] = c
            signs[a, b] = signs[b, a] = s
    return NPA2Structure(K, tuple(mons), classes, signs)


def identity_strategy_moments(K: int) -> np.ndarray:
    """Class-averaged moments of the strategy ``B_k = C_k = 1``.

    The state is the top eigenvector of ``sum_k Gamma_k``; ``u_i`` and ``v_i``
    both act as ``Gamma_i`` on it.  Returns the 18 parameters, each the mean of
    ``sign * Re<a|b>`` over its class.
    """
    fam = family_for(K)
    w, vecs = np.linalg.eigh(fam.gamma_sum())
    alpha = vecs[:, -1]
    gam = fam.matrices
    mons = index_set(K)
    V = np.empty((fam.dim, len(mons)), dtype=complex)
    for col, m in enumerate(mons):
        x = alpha
        for _, i in m[::-1]:
            x = gam[i] @ x
        V[:, col] = x
    gram = (V.conj().T @ V).real
    s = build_structure(K)
    g = np.zeros(N_PARAMS)
    for c in range(1, N_PARAMS + 1):
        mask = s.classes == c
        if mask.any():
            g[c - 1] = float(np.mean(s.signs[mask] * gram[mask]))
    return g


def validate_structure(s: NPA2Structure, psd_tol: float = 1e-8) -> CheckReport:
    """Invariants, algebraic audit and an explicit-strategy feasibility test."""
    K, n = s.K, s.dim
    rep = CheckReport()
    rep.add(CheckResult("dimension 1+3K^2", n == 1 + 3 * K * K, n, 1 + 3 * K * K))
    rep.add(CheckResult("all entries assigned", not (s.classes == UNASSIGNED).any()))
    rep.add(
        CheckResult(
            "assignment symmetric",
            np.array_equal(s.classes, s.classes.T) and np.array_equal(s.signs, s.signs.T),
        )
    )
    Gs = s.G_mats
    sym = all(abs(G - G.T).max() == 0 if G.nnz else True for G in Gs)
    entries = all(set(np.unique(G.data)) <= {-1.0, 1.0} for G in Gs)
    cover = sum(abs(G) for G in Gs)
    rep.add(CheckResult("G_i symmetric with entries in {-1,0,1}", sym and entries))
    rep.add(CheckResult("G_i supports disjoint", cover.max() <= 1 if cover.nnz else True))
    rep.add(CheckResult("G_0 is the identity", (Gs[0] != sp.identity(n, format="csr")).nnz == 0))

    # algebraic audit: each class is one orbit with a consistent relative sign
    orbit_of: dict[int, set] = defaultdict(set)
    bad_pairs = []
    iu, ju = np.triu_indices(n)
    for a, b in zip(iu, ju):
        c, sg = int(s.classes[a, b]), int(s.signs[a, b])
        key, osg = word_class(s.monomials[a], s.monomials[b])
        if c == ONE_CLASS:
            ok = key == "one" and sg == osg
        elif c == ZERO_CLASS:
            ok = key == "zero"
        else:
            ok = key not in ("one", "zero")
            orbit_of[c].add((key, sg * osg))
        if not ok:
            bad_pairs.append((a, b))
    per_class = {c: v for c, v in orbit_of.items() if len(v) != 1}
    keys = [next(iter(v))[0] for v in orbit_of.values() if len(v) == 1]
    detail = ""
    if bad_pairs:
        a, b = bad_pairs[0]
        detail = f"first bad pair <{s.labels[a]}|{s.labels[b]}>"
    elif per_class:
        detail = f"classes mixing orbits or signs: {sorted(per_class)}"
    rep.add(
        CheckResult(
            "algebraic audit",
            not bad_pairs and not per_class and len(keys) == len(set(keys)),
            detail=detail,
        )
    )

    g = identity_strategy_moments(K)
    lam = float(np.linalg.eigvalsh(s.pencil(g))[0])
    bias = 2 * K * g[0] + K * g[1]
    rep.add(CheckResult("identity-strategy moments PSD", lam >= -psd_tol, lam, 0.0))
    target = K + 2 * math.sqrt(K)
    rep.add(CheckResult("identity-strategy bias", bias >= target - 1e-8, bias, target))
    return rep


def solve_npa2(K: int, opts: SolverOptions | None = None, structure: NPA2Structure | None = None) -> tuple[float, SDPSolution]:
    """Maximize ``2K g1 + K g2`` over the pencil; returns ``(win_prob, solution)``."""
    s = structure or build_structure(K)
    sol = solve(s.sdp(), opts)
    return 0.25 + sol.objective_value / (4 * K), sol


def dump_structure(s: NPA2Structure, path=None) -> str:
    """One line ``row col class sign`` per entry of the upper triangle."""
    names = {ONE_CLASS: "1", ZERO_CLASS: "0"}
    lines = [f"# K={s.K} dim={s.dim}", "# row col class sign"]
    iu, ju = np.triu_indices(s.dim)
    for a, b in zip(iu, ju):
        c = int(s.classes[a, b])
        lines.append(f"{s.labels[a]} {s.labels[b]} {names.get(c, f'g{c}')} {int(s.signs[a, b]):+d}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
