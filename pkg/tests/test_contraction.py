# tests/test_contraction.py
import json

import pytest

from src.contraction import (
    CATALOG_CONTRACTIONS,
    ContractionSpec,
    _renormalize,
    catalog_contraction,
    contract_algebra,
    contract_charpoly,
    contraction_graph,
    contraction_pipeline,
    eps_degree,
    load_spec,
    scale_polynomial,
    transformed_structure,
)
from src.config import RankOptions
from src.errors import BadParams, CountMismatch, DependentInvariants, DivergentContraction, UnknownName
from src.gelfand import casimir_invariants
from src.invariance import independence_rank, is_invariant
from src.liealg import catalog
from src.polyalg import MultiPoly


def same_up_to_sign(p, q):
    return p == q or p == -q


def test_spec_validation():
    g = catalog("so32")
    with pytest.raises(BadParams):
        ContractionSpec(g, (0, 1))
    with pytest.raises(BadParams):
        ContractionSpec(g, (0,) * 9 + (1.5,))
    with pytest.raises(UnknownName):
        ContractionSpec.from_mapping(g, {"Q1": 1})


def test_identity_spec_gives_back_the_algebra():
    g = catalog("so41")
    spec = ContractionSpec.identity(g)
    assert spec.is_identity()
    assert contract_algebra(spec).same_structure(g)


def test_from_json_and_load(tmp_path):
    doc = {"algebra": "so(3,2)", "exponents": {"P1": 1, "P2": 1, "P3": 1, "H": 1},
           "target": "iso31"}
    spec = ContractionSpec.from_json(json.dumps(doc))
    assert spec.algebra.name == "so32"
    assert spec.exponents == (0, 0, 0, 1, 1, 1, 0, 0, 0, 1)
    assert spec.to_json() == {"algebra": "so32",
                              "exponents": {"P1": 1, "P2": 1, "P3": 1, "H": 1},
                              "target": "iso31"}

    path = tmp_path / "spec.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert load_spec(path) == spec

    with pytest.raises(BadParams):
        ContractionSpec.from_json("{not json")
    with pytest.raises(BadParams):
        ContractionSpec.from_json({"exponents": {}})
    with pytest.raises(BadParams):
        load_spec(tmp_path / "missing.json")


def test_net_degree_and_composition():
    spec = catalog_contraction("so32", "iso31")
    g = spec.algebra
    H, P1, K1 = g.index("H"), g.index("P1"), g.index("K1")
    # [H, P1] = -K1 dies, [H, K1] = P1 survives
    assert spec.net_degree(H, P1, K1) == 2
    assert spec.net_degree(H, K1, P1) == 0

    step = ContractionSpec(g, (0, 0, 0, 0, 0, 0, 1, 1, 1, 0), "galilei")
    both = spec.then(step)
    assert both.exponents == (0, 0, 0, 1, 1, 1, 1, 1, 1, 1)
    assert both.target == "galilei"

    with pytest.raises(BadParams):
        spec.then(ContractionSpec.identity(catalog("so(3,0)")))


def test_transformed_structure_keeps_constants():
    spec = catalog_contraction("so41", "iso4")
    table = transformed_structure(spec)
    assert len(table) == len(spec.algebra.structure)
    for key, (c, d) in table.items():
        assert spec.algebra.constants()[key] == c
        assert d == spec.net_degree(*key)


def test_divergent_contraction_reports_the_triple():
    g = catalog("so32")
    spec = ContractionSpec.from_mapping(g, {"J1": 1, "J2": 1, "J3": 1})
    with pytest.raises(DivergentContraction) as info:
        contract_algebra(spec)
    # [P1, P2] = -J3 is the first bracket to blow up
    assert info.value.triple == (3, 4, 2)
    assert info.value.exit_code == 3


def test_every_catalog_edge_lands_on_its_target():
    G = contraction_graph()
    assert G.number_of_edges() == len(CATALOG_CONTRACTIONS)
    for src, dst in G.edges:
        spec = ContractionSpec(catalog(src), G.edges[src, dst]["exponents"], dst)
        for _, (_, d) in transformed_structure(spec).items():
            assert d >= 0
        assert contract_algebra(spec).same_structure(catalog(dst))


def test_catalog_contraction_composes_a_path():
    spec = catalog_contraction("so(3,2)", "carroll")
    assert spec.exponents == (0, 0, 0, 2, 2, 2, 1, 1, 1, 3)
    assert contract_algebra(spec).same_structure(catalog("carroll"))

    with pytest.raises(BadParams):
        catalog_contraction("static", "so32")
    with pytest.raises(UnknownName):
        catalog_contraction("so32", "nowhere")


def test_scale_polynomial_and_eps_degree(scalars):
    spec = catalog_contraction("so32", "iso31")
    I2, I4 = scalars["I2"], scalars["I4"]
    scaled = scale_polynomial(I2 + I4, spec)
    assert eps_degree(scaled) == 2
    # only the ε² part survives
    assert contract_charpoly(scaled, T="T") == MultiPoly.parse("p1^2 + p2^2 + p3^2", scaled.variables)

    negative = ContractionSpec.from_mapping(spec.algebra, {"H": -1})
    with pytest.raises(BadParams):
        scale_polynomial(I2, negative)


def test_pipeline_de_sitter_to_poincare():
    g = catalog("so32")
    result = contraction_pipeline(g, catalog_contraction("so32", "iso31"))
    assert result.alpha == 2
    assert result.contracted.same_structure(catalog("iso31"))
    assert len(result.invariants) == 2
    assert result.invariants.degrees() == [2, 4]
    for p in result.invariants.polynomials():
        assert is_invariant(result.contracted, p)
    reference = casimir_invariants(catalog("iso31")).polynomials()
    got = result.invariants.polynomials()
    assert independence_rank(got + reference) == 2

    doc = result.to_json()
    assert doc["source"] == "so32" and doc["target"] == "iso31"
    assert doc["alpha"] == 2 and len(doc["invariants"]) == 2


def test_pipeline_de_sitter_to_euclidean(scalars):
    result = contraction_pipeline(catalog("so41"), catalog_contraction("so41", "iso4"))
    C2 = result.invariants.polynomials()[0]
    assert same_up_to_sign(C2, -scalars["I3"] - scalars["I1"] ** 2)


def test_pipeline_count_mismatch():
    with pytest.raises(CountMismatch):
        contraction_pipeline(catalog("so32"), catalog_contraction("so32", "static"))


def test_global_limit_can_lose_an_invariant():
    g = catalog("iso31")
    spec = catalog_contraction("iso31", "galilei")
    with pytest.raises(DependentInvariants):
        contraction_pipeline(g, spec)
    result = contraction_pipeline(g, spec, per_power=True)
    assert result.per_power
    assert len(result.invariants) == 2
    for p in result.invariants.polynomials():
        assert is_invariant(catalog("galilei"), p)


def test_pipeline_rejects_foreign_spec():
    with pytest.raises(BadParams):
        contraction_pipeline(catalog("so(3,0)"), catalog_contraction("so32", "iso31"))


def test_renormalize_needs_a_constant_leading_coefficient():
    names = ("h", "T")
    restored = _renormalize(MultiPoly.parse("h*T^3", names), "T", 5)
    assert restored == MultiPoly.parse("T^5 + h*T^3", names)
    scaled = _renormalize(MultiPoly.parse("2*T^5 + h*T^3", names), "T", 5)
    assert scaled == MultiPoly.parse("T^5 + 1/2*h*T^3", names)
    with pytest.raises(DependentInvariants) as exc:
        _renormalize(MultiPoly.parse("h*T^5 + T^3", names), "T", 5)
    assert exc.value.exit_code == 6
    assert "T^5" in str(exc.value)


def test_pipeline_with_evaluated_ranks_only(monkeypatch):
    import src.polyalg as polyalg

    def refuse(a, ring):
        raise AssertionError("symbolic elimination was not switched off")

    monkeypatch.setattr(polyalg, "_symbolic_rank", refuse)
    result = contraction_pipeline(catalog("so32"), catalog_contraction("so32", "iso31"),
                                  options=RankOptions(symbolic=False))
    assert result.invariants.degrees() == [2, 4]
