import numpy as np
import pytest

from clifford_ue.errors import StructureError
from clifford_ue.npa1 import solve_npa1_sdp
from clifford_ue.npa2 import (
    CLASSIFICATION,
    N_PARAMS,
    ONE_CLASS,
    ZERO_CLASS,
    build_structure,
    dump_structure,
    identity_strategy_moments,
    index_set,
    monomial_label,
    pair_pattern,
    parse_classification,
    reduce_word,
    solve_npa2,
    validate_structure,
    word_class,
)


@pytest.fixture(scope="module")
def s4():
    return build_structure(4)


def _idx(s, label):
    return s.labels.index(label)


def test_index_set_order():
    labels = [monomial_label(m) for m in index_set(2)]
    assert labels == [
        "psi", "u1", "u2", "v1", "v2", "u1v1", "u1v2", "u2v1", "u2v2",
        "u1u2", "u2u1", "v1v2", "v2v1",
    ]


@pytest.mark.parametrize("K", [2, 3, 4, 5, 6])
def test_dimension(K):
    assert len(index_set(K)) == 1 + 2 * K + K * K + 2 * K * (K - 1) == 1 + 3 * K * K


def test_pattern_relabels_by_first_appearance():
    a = (("u", 3), ("v", 1))
    b = (("u", 1), ("v", 3))
    assert pair_pattern(a, b) == "u_iv_j|u_jv_i"


def test_table_examples(s4):
    assert s4.class_of(_idx(s4, "psi"), _idx(s4, "u2v2")) == (2, 1)
    assert s4.class_of(_idx(s4, "u1v2"), _idx(s4, "u2v1")) == (7, 1)
    assert s4.class_of(_idx(s4, "u1u2"), _idx(s4, "v1v2")) == (7, -1)
    assert s4.class_of(_idx(s4, "v1"), _idx(s4, "u2v1")) == (1, -1)
    assert s4.class_of(_idx(s4, "u1"), _idx(s4, "v2"))[0] == ZERO_CLASS


def test_diagonal_is_one(s4):
    assert np.all(np.diag(s4.classes) == ONE_CLASS)
    assert np.array_equal(s4.G_mats[0].toarray(), np.eye(s4.dim))


@pytest.mark.parametrize("K", [4, 5, 6])
def test_validation_passes(K):
    rep = validate_structure(build_structure(K))
    assert rep, "\n".join(rep.lines())


def test_flipped_sign_fails_validation(s4):
    a, b = _idx(s4, "u1"), _idx(s4, "u1v1")
    rep = validate_structure(s4.with_flipped_sign(a, b))
    assert not rep
    assert any(c.name == "algebraic audit" for c in rep.failures)


def test_zero_parameters_give_identity(s4):
    assert np.allclose(s4.pencil(np.zeros(N_PARAMS)), np.eye(s4.dim))


def test_gap_is_reported():
    table = parse_classification()
    del table["u_i|v_j"]
    with pytest.raises(StructureError, match="no class"):
        build_structure(3, table)


def test_double_assignment_is_reported():
    text = CLASSIFICATION.replace("g2: u_i|v_i,", "g2: u_i|v_i, u_i|u_j,")
    with pytest.raises(StructureError):
        build_structure(3, parse_classification(text))


def test_reduce_word_signs():
    # u1 v2 -> (u1)(v2); v2 u1 -> -(u1)(v2); v1 u1 -> (u1)(v1)
    assert reduce_word([("v", 1), ("u", 0)]) == (-1, (0,), (1,))
    assert reduce_word([("v", 0), ("u", 0)]) == (1, (0,), (0,))
    assert reduce_word([("u", 0), ("u", 0)]) == (1, (), ())


def test_word_class_orbit_zero():
    # <u_i|v_j> with i != j: the orbit holds both signs
    assert word_class((("u", 0),), (("v", 1),)) == ("zero", 0)


def test_identity_moments_objective():
    g = identity_strategy_moments(4)
    assert 8 * g[0] + 4 * g[1] == pytest.approx(8)


def test_dump_structure(s4):
    text = dump_structure(s4)
    lines = text.splitlines()
    assert lines[0] == "# K=4 dim=49"
    assert len(lines) == 2 + 49 * 50 // 2
    assert "psi u1v1 g2 +1" in lines


@pytest.mark.parametrize("K", [2, 4, 5])
def test_npa2_sandwich_small(K):
    w2, sol = solve_npa2(K)
    w1, _ = solve_npa1_sdp(K)
    assert sol.status == "optimal"
    assert 0.5 + 0.5 / np.sqrt(K) - 1e-4 <= w2 <= w1 + 1e-6
