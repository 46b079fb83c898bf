# src/contraction.py
"""
Diagonal contractions Ψ_ε(X_i) = ε^{−a_i} X_i with ε → ∞.

A bracket [X_i, X_j] = C_ij^k X_k transforms to C_ij^k ε^{−d} with the net
degree d = a_i + a_j − a_k: d > 0 dies in the limit, d = 0 survives and
d < 0 diverges.

On the polynomial side the coordinates scale as x_i → ε^{a_i} x_i; the
limit of P_ε(T)/ε^α keeps the top ε-degree (α) part.
"""
from __future__ import annotations

import json
import logging
import pathlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple, Union

import networkx as nx

from .config import EPS_SYMBOL, JACOBIAN_RANK_OPTIONS, RankOptions, T_SYMBOL, structure_rank_options
from .errors import BadParams, CountMismatch, DependentInvariants, DivergentContraction, UnknownName
from .gelfand import InvariantSet, MatrixRecipe, evaluate_recipe, extract_invariants, recipe_for
from .liealg import KINEMATICAL_NAMES, LieAlgebra, canonical_name, catalog, make_algebra, num_invariants
from .polyalg import MultiPoly, collect, substitute

__all__ = [
    "ContractionSpec",
    "ContractionResult",
    "transformed_structure",
    "contract_algebra",
    "scale_polynomial",
    "eps_degree",
    "contract_charpoly",
    "contraction_pipeline",
    "CATALOG_CONTRACTIONS",
    "contraction_graph",
    "catalog_contraction",
    "load_spec",
]

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# ContractionSpec
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractionSpec:
    algebra: LieAlgebra
    exponents: Tuple[int, ...]
    target: Optional[str] = None

    def __post_init__(self):
        if len(self.exponents) != self.algebra.dim:
            raise BadParams(
                f"{self.algebra.name} has {self.algebra.dim} generators, "
                f"got {len(self.exponents)} exponents"
            )
        for a in self.exponents:
            if isinstance(a, bool) or not isinstance(a, int):
                raise BadParams(f"contraction exponents must be integers, got {a!r}")

    @classmethod
    def identity(cls, g: LieAlgebra) -> "ContractionSpec":
        return cls(g, (0,) * g.dim, g.name)

    @classmethod
    def from_mapping(cls, g: LieAlgebra, exponents: Mapping[Union[str, int], int],
                     target: Optional[str] = None) -> "ContractionSpec":
        """Generator name or 0-based index → exponent; missing ones are 0."""
        exps = [0] * g.dim
        for ref, a in exponents.items():
            exps[g.index(ref)] = a
        return cls(g, tuple(exps), target)

    @classmethod
    def from_json(cls, doc: Union[str, Mapping]) -> "ContractionSpec":
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as e:
                raise BadParams(f"contraction spec is not valid JSON: {e}") from e
        if not isinstance(doc, Mapping) or "algebra" not in doc:
            raise BadParams("contraction spec needs an 'algebra' field")
        g = catalog(str(doc["algebra"]))
        raw = doc.get("exponents", {})
        if not isinstance(raw, Mapping):
            raise BadParams("'exponents' must map generator names to integers")
        target = doc.get("target")
        return cls.from_mapping(g, raw, str(target) if target is not None else None)

    def to_json(self) -> Dict:
        doc = {
            "algebra": self.algebra.name,
            "exponents": {n: a for n, a in zip(self.algebra.generators, self.exponents) if a},
        }
        if self.target is not None:
            doc["target"] = self.target
        return doc

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def net_degree(self, i: int, j: int, k: int) -> int:
        a = self.exponents
        return a[i] + a[j] - a[k]

    def then(self, other: "ContractionSpec") -> "ContractionSpec":
        """Compose with a contraction of the limit algebra: exponents add."""
        if other.algebra.generators != self.algebra.generators:
            raise BadParams("composed contractions must share generator names")
        exps = tuple(a + b for a, b in zip(self.exponents, other.exponents))
        return ContractionSpec(self.algebra, exps, other.target)


def load_spec(path: Union[str, pathlib.Path]) -> ContractionSpec:
    p = pathlib.Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise BadParams(f"cannot read contraction spec {p}: {e}") from e
    return ContractionSpec.from_json(text)


# ---------------------------------------------------------------------------
# 代数的极限
# ---------------------------------------------------------------------------

def transformed_structure(spec: ContractionSpec) -> Dict[Tuple[int, int, int], Tuple[Fraction, int]]:
    """(i, j, k) → (C_ij^k, d): the transformed constant is C_ij^k·ε^{−d}."""
    return {(i, j, k): (c, spec.net_degree(i, j, k)) for (i, j, k), c in spec.algebra.structure}


def contract_algebra(spec: ContractionSpec) -> LieAlgebra:
    g = spec.algebra
    surviving: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for (i, j, k), (c, d) in sorted(transformed_structure(spec).items()):
        if d < 0:
            gen = g.generators
            raise DivergentContraction(
                (i, j, k),
                f"[{gen[i]}, {gen[j]}] -> {gen[k]} scales as eps^{-d} and diverges",
            )
        if d == 0:
            surviving.setdefault((i, j), {})[k] = c
    name = spec.target or f"{g.name}'"
    h = make_algebra(g.generators, surviving, name=name, coordinates=g.coordinates)
    assert h.dim == g.dim
    return h


# ---------------------------------------------------------------------------
# 特征多项式的极限
# ---------------------------------------------------------------------------

def scale_polynomial(P: MultiPoly, spec: ContractionSpec, eps: str = EPS_SYMBOL) -> MultiPoly:
    """x_i → ε^{a_i}·x_i on the coordinates of the spec's algebra."""
    g = spec.algebra
    if any(a < 0 for a in spec.exponents):
        raise BadParams("the polynomial route needs nonnegative exponents")
    names = tuple(P.variables) + tuple(v for v in g.coordinates if v not in P.variables) + (eps,)
    e = MultiPoly.var(eps, names)
    bindings = {
        v: MultiPoly.var(v, names) * e ** a
        for v, a in zip(g.coordinates, spec.exponents)
        if a and v in P.variables
    }
    return substitute(P, bindings)


def eps_degree(P_eps: MultiPoly, eps: str = EPS_SYMBOL) -> int:
    return P_eps.degree(eps)


def _top_part(p: MultiPoly, eps: str) -> MultiPoly:
    by_eps = collect(p, eps)
    return by_eps[max(by_eps)] if by_eps else p


def contract_charpoly(P_eps: MultiPoly, T: str = T_SYMBOL, eps: str = EPS_SYMBOL,
                      per_power: bool = False) -> MultiPoly:
    """lim P_ε(T)/ε^α: the ε^α coefficient, α = deg_ε P_ε.

    With ``per_power`` every T-power keeps its own top ε-degree part.
    """
    if eps not in P_eps.variables:
        return P_eps
    if not per_power:
        return _top_part(P_eps, eps)
    t = MultiPoly.var(T, P_eps.variables)
    acc = MultiPoly.zero(P_eps.variables)
    for k, c in collect(P_eps, T).items():
        acc = acc + _top_part(c, eps) * t ** k
    return acc


def _renormalize(limit: MultiPoly, T: str, n: int) -> MultiPoly:
    """Put T^n back when the limit dropped it; a surviving T^n coefficient
    must be a nonzero constant."""
    top = collect(limit, T).get(n)
    if top is None or top.is_zero():
        return limit + MultiPoly.var(T, limit.variables) ** n
    if not top.is_constant():
        raise DependentInvariants(f"the {T}^{n} coefficient of the limit is not constant: {top}")
    return limit / top.constant_value()


# ---------------------------------------------------------------------------
# 流水线
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractionResult:
    spec: ContractionSpec
    contracted: LieAlgebra
    alpha: int
    polynomial: MultiPoly
    invariants: InvariantSet
    per_power: bool = False

    def to_json(self) -> Dict:
        return {
            "source": self.spec.algebra.name,
            "target": self.contracted.name,
            "spec": self.spec.to_json(),
            "brackets": self.contracted.bracket_table(),
            "alpha": self.alpha,
            "per_power": self.per_power,
            "polynomial": str(self.polynomial),
            "invariants": self.invariants.to_json()["invariants"],
        }


def contraction_pipeline(g: LieAlgebra, spec: ContractionSpec,
                         recipe: Optional[MatrixRecipe] = None,
                         per_power: bool = False, T: str = T_SYMBOL,
                         options: RankOptions = JACOBIAN_RANK_OPTIONS) -> ContractionResult:
    """Invariants of the contraction obtained as limits of the invariants of g."""
    if spec.algebra.generators != g.generators:
        raise BadParams(f"spec is for {spec.algebra.name}, not {g.name}")
    contracted = contract_algebra(spec)
    counting = structure_rank_options(options)
    n_src, n_dst = num_invariants(g, counting), num_invariants(contracted, counting)
    if n_src != n_dst:
        raise CountMismatch(
            f"{g.name} has {n_src} invariants but its contraction {contracted.name} has {n_dst}"
        )
    recipe = recipe if recipe is not None else recipe_for(g.name)
    P = evaluate_recipe(recipe, T)
    P_eps = scale_polynomial(P, spec)
    alpha = eps_degree(P_eps)
    limit = _renormalize(contract_charpoly(P_eps, T, per_power=per_power), T, recipe.size)
    logger.info("%s -> %s: alpha = %d%s", g.name, contracted.name, alpha,
                " (per power)" if per_power else "")
    invariants = extract_invariants(limit, contracted, T, options=options)
    if len(invariants) < n_dst:
        raise DependentInvariants(
            f"the limit gives {len(invariants)} independent invariant(s) of "
            f"{contracted.name}, {n_dst} needed"
        )
    return ContractionResult(spec, contracted, alpha, limit, invariants, per_power)


# ---------------------------------------------------------------------------
# 目录中的收缩（networkx 有向图）
# ---------------------------------------------------------------------------

# (source, target, exponents on the J | P | K | H families)
CATALOG_CONTRACTIONS: Tuple[Tuple[str, str, Tuple[int, int, int, int]], ...] = (
    ("so32", "iso31", (0, 1, 0, 1)),
    ("so41", "iso31", (0, 1, 0, 1)),
    ("so41", "iso4", (0, 0, 1, 1)),
    ("so32", "newton_minus", (0, 1, 1, 0)),
    ("so41", "newton_plus", (0, 1, 1, 0)),
    ("iso31", "galilei", (0, 1, 1, 0)),
    ("iso31", "carroll", (0, 1, 1, 2)),
    ("iso4", "carroll", (0, 1, 0, 1)),
    ("newton_plus", "galilei", (0, 1, 0, 1)),
    ("newton_minus", "galilei", (0, 1, 0, 1)),
    ("galilei", "static", (0, 0, 0, 1)),
    ("carroll", "static", (0, 1, 0, 0)),
    ("so32", "static", (0, 1, 1, 1)),
)


def _family_exponents(fam: Tuple[int, int, int, int]) -> Tuple[int, ...]:
    j, p, k, h = fam
    return (j,) * 3 + (p,) * 3 + (k,) * 3 + (h,)


@lru_cache(maxsize=1)
def contraction_graph() -> nx.DiGraph:
    G = nx.DiGraph()
    G.add_nodes_from(KINEMATICAL_NAMES)
    for src, dst, fam in CATALOG_CONTRACTIONS:
        G.add_edge(src, dst, exponents=_family_exponents(fam))
    return G


def catalog_contraction(source: str, target: str) -> ContractionSpec:
    """Spec for a catalog contraction, composing a path of named ones."""
    src, dst = canonical_name(source), canonical_name(target)
    G = contraction_graph()
    if src not in G or dst not in G:
        raise UnknownName(f"no catalog contractions between {source!r} and {target!r}")
    try:
        path: List[str] = nx.shortest_path(G, src, dst)
    except nx.NetworkXNoPath as e:
        raise BadParams(f"{source} does not contract to {target} in the catalog") from e
    spec = ContractionSpec.identity(catalog(src))
    for a, b in zip(path, path[1:]):
        step = ContractionSpec(catalog(src), G.edges[a, b]["exponents"], b)
        spec = spec.then(step)
    logger.debug("catalog contraction %s: %s", " -> ".join(path), spec.exponents)
    return spec
