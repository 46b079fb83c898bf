# src/invariance.py
"""
Coadjoint differential operators and everything built on them.

  X̂_i = −Σ_{j,k} C_ij^k x_k ∂/∂x_j

  • apply / is_invariant / annihilated_by_subalgebra
  • independence_rank / independent_basis  (generic Jacobian rank)
  • system_matrix      : rows of the PDE system restricted to chosen generators
  • invariants_of_degree / search_invariants : polynomial solutions by exact
    linear algebra on one homogeneous degree at a time
  • coupled_families / split_by_families : variable-coupling components
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .config import DEFAULT_MAX_DEGREE, JACOBIAN_RANK_OPTIONS, RankOptions, structure_rank_options
from .liealg import LieAlgebra, SubalgebraSelection, num_invariants
from .polyalg import MultiPoly, differentiate, rank_over_function_field, to_fraction

__all__ = [
    "CoadjointOperator",
    "coadjoint_operators",
    "apply",
    "is_invariant",
    "failing_generator",
    "annihilated_by_subalgebra",
    "jacobian_rows",
    "independence_rank",
    "independent_basis",
    "system_matrix",
    "invariants_of_degree",
    "search_invariants",
    "coupled_families",
    "split_by_families",
]

logger = logging.getLogger(__name__)

Selection = Union[LieAlgebra, SubalgebraSelection]


# ---------------------------------------------------------------------------
# 余伴随算子
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoadjointOperator:
    algebra: LieAlgebra
    index: int

    @property
    def generator(self) -> str:
        return self.algebra.generators[self.index]

    @cached_property
    def coefficients(self) -> Dict[str, MultiPoly]:
        """x_j → −Σ_k C_ij^k x_k, only the nonzero ones."""
        g = self.algebra
        xs = g.variables()
        out: Dict[str, MultiPoly] = {}
        for j in range(g.dim):
            vec = g.bracket(self.index, j)
            if not vec:
                continue
            acc = MultiPoly.zero(g.coordinates)
            for k, c in vec.items():
                acc = acc - xs[g.coordinates[k]] * c
            if not acc.is_zero():
                out[g.coordinates[j]] = acc
        return out

    def __call__(self, F: MultiPoly) -> MultiPoly:
        return apply(self, F)

    def __str__(self) -> str:
        parts = [f"({c})*d/d{v}" for v, c in self.coefficients.items()]
        return f"{self.generator}^ = " + (" + ".join(parts) if parts else "0")


@lru_cache(maxsize=128)
def coadjoint_operators(g: LieAlgebra) -> Tuple[CoadjointOperator, ...]:
    return tuple(CoadjointOperator(g, i) for i in range(g.dim))


def apply(op: CoadjointOperator, F: MultiPoly) -> MultiPoly:
    """X̂_i F, exact."""
    acc = MultiPoly.zero(F.variables)
    for v, c in op.coefficients.items():
        d = differentiate(F, v)
        if not d.is_zero():
            acc = acc + c * d
    return acc


def failing_generator(g: LieAlgebra, F: MultiPoly,
                      indices: Optional[Iterable[int]] = None) -> Optional[str]:
    """Name of the first generator whose operator does not kill F, else None."""
    ops = coadjoint_operators(g)
    for i in (range(g.dim) if indices is None else indices):
        if not apply(ops[i], F).is_zero():
            return g.generators[i]
    return None


def is_invariant(g: LieAlgebra, F: MultiPoly) -> bool:
    return failing_generator(g, F) is None


def annihilated_by_subalgebra(h: SubalgebraSelection, F: MultiPoly) -> bool:
    return failing_generator(h.parent, F, h.indices) is None


# ---------------------------------------------------------------------------
# 函数独立性（Jacobian 泛秩）
# ---------------------------------------------------------------------------

def _universe_of(polys: Sequence[MultiPoly]) -> Tuple[str, ...]:
    names: List[str] = []
    for p in polys:
        for v in p.variables:
            if v not in names:
                names.append(v)
    return tuple(names)


def jacobian_rows(polys: Sequence[MultiPoly],
                  variables: Optional[Sequence[str]] = None) -> List[List[MultiPoly]]:
    cols = tuple(variables) if variables is not None else _universe_of(polys)
    return [[differentiate(p, v) for v in cols] for p in polys]


def independence_rank(polys: Sequence[MultiPoly],
                      options: RankOptions = JACOBIAN_RANK_OPTIONS) -> int:
    """Generic rank of the Jacobian (∂F_a/∂x_b)."""
    polys = [p for p in polys if not p.is_constant()]
    if not polys:
        return 0
    cols = tuple(sorted(set().union(*(p.support() for p in polys))))
    return rank_over_function_field(jacobian_rows(polys, cols), options)


def independent_basis(polys: Sequence[MultiPoly],
                      already_have: Sequence[MultiPoly] = (),
                      options: RankOptions = JACOBIAN_RANK_OPTIONS) -> List[MultiPoly]:
    """Greedy in input order: keep p when it raises the rank over what is kept."""
    chosen: List[MultiPoly] = []
    base = list(already_have)
    current = independence_rank(base, options)
    for p in polys:
        r = independence_rank(base + chosen + [p], options)
        if r > current:
            chosen.append(p)
            current = r
    return chosen


# ---------------------------------------------------------------------------
# 方程组矩阵与多项式解
# ---------------------------------------------------------------------------

def _indices(sel: Selection) -> Tuple[LieAlgebra, Tuple[int, ...]]:
    if isinstance(sel, SubalgebraSelection):
        return sel.parent, sel.indices
    return sel, tuple(range(sel.dim))


def system_matrix(sel: Selection,
                  columns: Optional[Sequence[str]] = None) -> List[List[MultiPoly]]:
    """Row i: the coefficients of ∂/∂x_j in X̂_i, for the selected generators."""
    g, rows = _indices(sel)
    cols = tuple(columns) if columns is not None else g.coordinates
    ops = coadjoint_operators(g)
    zero = MultiPoly.zero(g.coordinates)
    return [[ops[i].coefficients.get(v, zero) for v in cols] for i in rows]


def _monomials(nvars: int, degree: int) -> List[Tuple[int, ...]]:
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def invariants_of_degree(g: LieAlgebra, degree: int,
                         variables: Optional[Sequence[str]] = None,
                         generators: Optional[Iterable[int]] = None) -> List[MultiPoly]:
    """Basis of the homogeneous polynomials of one degree in ``variables``
    killed by the operators of ``generators`` (default: all of g)."""
    assert degree >= 1, "degree must be positive"
    names = tuple(variables) if variables is not None else g.coordinates
    gens = tuple(range(g.dim)) if generators is None else tuple(generators)
    ops = coadjoint_operators(g)
    basis = _monomials(len(names), degree)
    images: List[Dict] = []
    row_keys: Dict[Tuple[int, Tuple], int] = {}
    for col, e in enumerate(basis):
        mono = MultiPoly.from_terms(names, {e: 1})
        image = {}
        for i in gens:
            for key, c in apply(ops[i], mono).named_terms().items():
                rk = row_keys.setdefault((i, key), len(row_keys))
                image[rk] = c
        images.append(image)
    if not row_keys:
        solutions = [[1 if r == c else 0 for r in range(len(basis))] for c in range(len(basis))]
    else:
        rows = [[QQ(0)] * len(basis) for _ in range(len(row_keys))]
        for col, image in enumerate(images):
            for rk, c in image.items():
                rows[rk][col] = QQ(c.numerator, c.denominator)
        dm = DomainMatrix(rows, (len(row_keys), len(basis)), QQ)
        solutions = dm.nullspace().to_list()
    out = []
    for vec in solutions:
        terms = {basis[c]: to_fraction(v) for c, v in enumerate(vec) if v}
        if terms:
            out.append(MultiPoly.from_terms(names, terms))
    logger.debug("%s: %d invariant(s) of degree %d in %d variable(s)",
                 g.name, len(out), degree, len(names))
    return out


def search_invariants(g: LieAlgebra, max_degree: int = DEFAULT_MAX_DEGREE,
                      variables: Optional[Sequence[str]] = None,
                      generators: Optional[Iterable[int]] = None,
                      target: Optional[int] = None,
                      options: RankOptions = JACOBIAN_RANK_OPTIONS) -> List[MultiPoly]:
    """Functionally independent polynomial solutions, by ascending degree.

    Stops once ``target`` solutions are found (default N(g) when the whole
    algebra is asked for) or ``max_degree`` is exhausted. ``options`` drives
    the Jacobian rank of the independence filter.
    """
    gens = None if generators is None else tuple(generators)
    if target is None and gens is None and variables is None:
        target = num_invariants(g, structure_rank_options(options))
    found: List[MultiPoly] = []
    for d in range(1, max_degree + 1):
        if target is not None and len(found) >= target:
            break
        candidates = invariants_of_degree(g, d, variables, gens)
        found += independent_basis(candidates, found, options)
    if target is not None and len(found) < target:
        logger.warning("%s: only %d of %d invariants found up to degree %d",
                       g.name, len(found), target, max_degree)
    return found[:target] if target is not None else found


# ---------------------------------------------------------------------------
# 变量耦合图
# ---------------------------------------------------------------------------

def coupled_families(g: LieAlgebra,
                     generators: Optional[Iterable[int]] = None) -> List[Tuple[str, ...]]:
    """Connected components of the graph with an edge between x_j and x_k whenever
    some selected X_i has C_ij^k ≠ 0; each family in declared order."""
    G = nx.Graph()
    G.add_nodes_from(g.coordinates)
    for i in (range(g.dim) if generators is None else generators):
        for j in range(g.dim):
            for k in g.bracket(i, j):
                if j != k:
                    G.add_edge(g.coordinates[j], g.coordinates[k])
    order = {v: n for n, v in enumerate(g.coordinates)}
    families = [tuple(sorted(comp, key=order.__getitem__)) for comp in nx.connected_components(G)]
    families.sort(key=lambda f: order[f[0]])
    return families


def split_by_families(p: MultiPoly, families: Sequence[Sequence[str]]) -> List[MultiPoly]:
    """Partition the terms of p by the family their support lies in.

    Terms that touch several families stay together in one mixed part;
    constant terms are dropped. Parts come in family order, mixed last.
    """
    home = {v: n for n, fam in enumerate(families) for v in fam}
    buckets: Dict[int, Dict[Tuple[int, ...], object]] = {}
    mixed = len(families)
    names = p.variables
    for monom, c in p.element.items():
        owners = {home.get(names[i], -1) for i, e in enumerate(monom) if e}
        if not owners:
            continue
        key = owners.pop() if len(owners) == 1 else mixed
        buckets.setdefault(key, {})[monom] = c
    return [MultiPoly(p.ring.from_dict(buckets[k])) for k in sorted(buckets)]
