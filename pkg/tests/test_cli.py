# tests/test_cli.py
import io
import json

import pytest

from src.cli import CommandConfig, build_parser, main
from src.errors import BadParams
from src.gelfand import KINEMATICAL_COORDINATES, Invariant, InvariantSet
from src.liealg import catalog
from src.polyalg import MultiPoly


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


def run_json(argv):
    code, text = run(argv + ["--format", "json"])
    return code, json.loads(text)


def test_catalog_lists_algebras_and_contractions():
    code, doc = run_json(["catalog"])
    assert code == 0
    counts = {r["name"]: r["invariants"] for r in doc["algebras"]}
    assert counts["so32"] == 2 and counts["static"] == 4 and counts["isp4"] == 2
    assert {"source": "so32", "target": "iso31", "exponents": [0, 1, 0, 1]} in doc["contractions"]

    code, text = run(["catalog", "--no-symbolic-rank"])
    assert code == 0
    assert "contractions" in text


def test_invariants_text():
    code, text = run(["invariants", "--algebra", "so(3,2)"])
    assert code == 0
    assert text.startswith("so32: dim 10, N(g) = 2")
    assert "P(T) = " in text
    assert text.count("verified") == 2


def test_invariants_static_json():
    code, doc = run_json(["invariants", "--algebra", "static"])
    assert code == 0
    assert doc["N"] == 4 and len(doc["invariants"]) == 4
    assert doc["invariants"][-1]["source"] == "T^4 (part)"
    assert doc["verified"] is True


def test_invariants_from_file(tmp_path):
    heis = tmp_path / "heisenberg.json"
    heis.write_text(json.dumps({
        "name": "heisenberg",
        "generators": ["X", "Y", "Z"],
        "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "c": "1"}]}],
    }), encoding="utf-8")
    code, doc = run_json(["invariants", "--file", str(heis)])
    assert code == 0
    assert doc["N"] == 1
    assert [inv["polynomial"] for inv in doc["invariants"]] == ["z"]
    assert "polynomial" not in doc

    flat = tmp_path / "abelian.json"
    flat.write_text(json.dumps({"name": "flat", "generators": ["A", "B", "C"]}), encoding="utf-8")
    code, doc = run_json(["invariants", "--file", str(flat)])
    assert code == 0
    assert doc["N"] == 3
    assert any("abelian" in n for n in doc["notes"])


def test_contract_by_target():
    code, doc = run_json(["contract", "--algebra", "so32", "--target", "iso31"])
    assert code == 0
    assert doc["source"] == "so32" and doc["target"] == "iso31"
    assert doc["alpha"] == 2
    assert len(doc["invariants"]) == 2


def test_contract_divergent_spec(tmp_path, capsys):
    spec = tmp_path / "bad.json"
    spec.write_text(json.dumps({"algebra": "so32", "exponents": {"J1": 1, "J2": 1, "J3": 1}}),
                    encoding="utf-8")
    code, _ = run(["contract", "--spec", str(spec)])
    assert code == 3
    assert "diverges" in capsys.readouterr().err


def test_contract_needs_source():
    code, _ = run(["contract", "--target", "iso31"])
    assert code == 1


def test_contract_count_mismatch():
    code, _ = run(["contract", "--algebra", "so32", "--target", "static"])
    assert code == 4


def test_mlp_report():
    code, doc = run_json(["mlp", "--algebra", "galilei"])
    assert code == 0
    assert doc["n"] == 2 and doc["m"] == 4
    assert len(doc["accepted_labels"]) == 1
    assert doc["reference"]["note"]

    code, text = run(["mlp", "--algebra", "static"])
    assert code == 0
    assert "method fails" in text


def test_mlp_subalgebra_by_index():
    code, doc = run_json(["mlp", "--algebra", "so32", "--subalgebra", "1,2,3"])
    assert code == 0
    assert doc["subalgebra"] == ["J1", "J2", "J3"]
    assert "reference" not in doc


def test_mlp_subalgebra_not_closed():
    code, _ = run(["mlp", "--algebra", "so32", "--subalgebra", "J1,P2"])
    assert code == 5


def test_unknown_algebra_exit_code(capsys):
    code, _ = run(["invariants", "--algebra", "nowhere"])
    assert code == 1
    assert "nowhere" in capsys.readouterr().err


def test_usage_errors():
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["invariants", "--algebra", "so32", "--file", "x.json"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        build_parser().parse_args(["verify", "--workers", "0"])


def test_command_config_validation():
    with pytest.raises(BadParams):
        CommandConfig("invariants")
    with pytest.raises(BadParams):
        CommandConfig("catalog", fmt="yaml")
    assert not CommandConfig("catalog", symbolic_rank=False).rank_options.symbolic


def test_verify_single_check():
    code, doc = run_json(["verify", "--only", "golden:so32"])
    assert code == 0
    assert [r["name"] for r in doc["checks"]] == ["golden:so32"]


POLYNOMIAL_FIELDS = {
    "polynomial",
    "casimirs",
    "subalgebra_casimirs",
    "reduced_polynomial",
    "reduced_candidates",
    "basic_solutions",
    "accepted_labels",
}


def reparsed(node, variables, seen):
    if isinstance(node, dict):
        out = {}
        for key, value in node.items():
            if key in POLYNOMIAL_FIELDS:
                texts = value if isinstance(value, list) else [value]
                again = [str(MultiPoly.parse(t, variables)) for t in texts]
                seen.extend(texts)
                out[key] = again if isinstance(value, list) else again[0]
            else:
                out[key] = reparsed(value, variables, seen)
        return out
    if isinstance(node, list):
        return [reparsed(v, variables, seen) for v in node]
    return node


@pytest.mark.parametrize("argv", [
    ["invariants", "--algebra", "so41"],
    ["invariants", "--algebra", "static"],
    ["contract", "--algebra", "so32", "--target", "iso31"],
    ["mlp", "--algebra", "galilei"],
    ["mlp", "--algebra", "so32"],
])
def test_json_reports_read_back_identically(argv):
    code, text = run(argv + ["--format", "json"])
    assert code == 0
    seen = []
    doc = reparsed(json.loads(text), KINEMATICAL_COORDINATES + ("T",), seen)
    assert seen
    assert json.dumps(doc, ensure_ascii=False, indent=2) + "\n" == text


def test_invariants_verified_flag_is_computed(monkeypatch):
    import src.cli as cli

    g = catalog("so32")
    stray = InvariantSet("so32", (Invariant(MultiPoly.var("p1", g.coordinates), "T^3"),))
    monkeypatch.setattr(cli, "casimir_invariants", lambda *args, **kwargs: stray)
    code, doc = run_json(["invariants", "--algebra", "so32"])
    assert code == 1
    assert doc["verified"] is False
    assert any("not annihilated" in n for n in doc["notes"])
    code, text = run(["invariants", "--algebra", "so32"])
    assert code == 1
    assert "NOT INVARIANT" in text


def test_no_symbolic_rank_reaches_the_extraction(monkeypatch):
    import src.polyalg as polyalg

    def refuse(a, ring):
        raise AssertionError("symbolic elimination was not switched off")

    monkeypatch.setattr(polyalg, "_symbolic_rank", refuse)
    code, doc = run_json(["invariants", "--algebra", "so32", "--no-symbolic-rank"])
    assert code == 0
    assert doc["N"] == 2 and len(doc["invariants"]) == 2
    assert doc["verified"] is True
    code, doc = run_json(["contract", "--algebra", "so32", "--target", "iso31", "--no-symbolic-rank"])
    assert code == 0 and len(doc["invariants"]) == 2
