# tests/test_mlp.py
import pytest

from src.errors import NegativeCount
from src.gelfand import casimir_invariants
from src.invariance import annihilated_by_subalgebra, independence_rank
from src.liealg import catalog, rotation_indices, subalgebra
from src.mlp import (
    REFERENCE_LABELS,
    atomize,
    compute_l_prime,
    missing_label_count,
    mlp_analyze,
    reduced_solution_count,
    report_to_json,
    rotation_scalars,
    compare_with_reference,
)


def rotations(key):
    g = catalog(key)
    return g, subalgebra(g, rotation_indices(g))


def test_rotation_scalars_are_so3_invariant(scalars):
    _, h = rotations("so32")
    assert set(scalars) == {"I1", "I2", "I3", "I4", "I5", "I6", "I7", "M"}
    for p in scalars.values():
        assert annihilated_by_subalgebra(h, p)
    assert scalars["M"].degree() == 3


def test_triple_product_identity(scalars):
    s = scalars
    gram = (s["I4"] * s["I2"] * s["I3"] + 2 * s["I5"] * s["I6"] * s["I7"]
            - s["I4"] * s["I5"] ** 2 - s["I3"] * s["I7"] ** 2 - s["I2"] * s["I6"] ** 2)
    assert s["M"] ** 2 == gram


def test_scalars_rank(scalars):
    names = ["I1", "I2", "I3", "I4", "I5", "I6", "I7"]
    assert independence_rank([scalars[n] for n in names]) == 7
    assert independence_rank([scalars[n] for n in names] + [scalars["M"]]) == 7


def test_missing_label_counts():
    g, h = rotations("so32")
    assert missing_label_count(g, h, 0) == (2, 4)
    assert missing_label_count(g, h, 1) == (3, 6)
    g, h = rotations("static")
    assert missing_label_count(g, h, 0) == (1, 2)
    with pytest.raises(NegativeCount):
        missing_label_count(g, h, -2)


def test_l_prime_and_reduced_solutions():
    for key in ("so32", "iso31", "galilei"):
        g, h = rotations(key)
        assert compute_l_prime(casimir_invariants(g), h) == 0
        assert reduced_solution_count(g, h) == 4
    g, h = rotations("so32")
    s = rotation_scalars()
    assert compute_l_prime([s["I4"], s["I2"]], h) == 1


def test_atomize(scalars):
    s = scalars
    basis = [s["I2"], s["I3"], s["I5"]]
    atoms = atomize(s["I2"] * s["I3"] - s["I5"] ** 2, basis)
    assert {e for e, _ in atoms} == {(1, 1, 0), (0, 0, 2)}
    assert {str(p) for _, p in atoms} == {str(s["I2"] * s["I3"]), str(s["I5"] ** 2)}
    assert atomize(s["I4"], basis) == []
    assert atomize(s["I2"] ** 0, basis) == []


def test_mlp_anti_de_sitter():
    report = mlp_analyze("so32")
    assert report.subalgebra == ("J1", "J2", "J3")
    assert (report.n, report.m, report.l_prime, report.N_prime) == (2, 4, 0, 4)
    assert len(report.accepted_labels) == 3
    assert not report.failed
    _, h = rotations("so32")
    for p in report.accepted_labels:
        assert annihilated_by_subalgebra(h, p)

    row = compare_with_reference(report)
    assert row["pool_ok"]
    assert row["count"] == row["expected_count"] == 3
    assert row["matches_reference"]

    doc = report_to_json(report)
    assert doc["indices"] == [1, 2, 3]
    assert doc["n"] == 2 and doc["m"] == 4
    assert len(doc["accepted_labels"]) == 3
    assert doc["failed"] is False


def test_mlp_galilei_label(scalars):
    report = mlp_analyze("galilei", ["J1", "J2", "J3"])
    label = scalars["I2"] * scalars["I3"]
    assert len(report.accepted_labels) == 1
    assert independence_rank(report.accepted_labels + [label]) == 1
    row = compare_with_reference(report)
    assert row["count"] == 1 and row["note"]


def test_mlp_static_has_nothing_left():
    report = mlp_analyze("static")
    assert (report.n, report.m) == (1, 2)
    assert report.failed
    assert "no new missing label" in report.notes[-1]
    assert compare_with_reference(report)["count"] == 0


def test_l_prime_override_is_noted():
    report = mlp_analyze("so41", l_prime=1)
    assert report.l_prime == 1 and report.n == 3
    assert any("overridden" in n for n in report.notes)


def test_reference_pools_are_valid():
    s = rotation_scalars()
    for key, row in REFERENCE_LABELS.items():
        _, h = rotations(key)
        for name in row.pool:
            assert annihilated_by_subalgebra(h, s[name])


@pytest.mark.parametrize("key", sorted(REFERENCE_LABELS))
def test_every_reference_row(key):
    report = mlp_analyze(key)
    row = compare_with_reference(report)
    expected = REFERENCE_LABELS[key]
    assert row["pool_ok"]
    assert row["count"] == expected.expected_count == len(report.accepted_labels)
    assert report.failed == (key == "static")
    _, h = rotations(key)
    for p in report.accepted_labels:
        assert annihilated_by_subalgebra(h, p)
    if not expected.note:
        assert row["matches_reference"]
    else:
        assert row["note"] == expected.note


def test_carroll_labels_contain_the_reference_label(scalars):
    report = mlp_analyze("carroll")
    accepted = report.accepted_labels
    label = scalars["I2"] * scalars["I3"]
    assert independence_rank(accepted + [label]) == independence_rank(accepted) == 2
