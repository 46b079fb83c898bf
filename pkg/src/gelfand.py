# src/gelfand.py
"""
Invariant-generating matrices and their characteristic polynomials.

A MatrixRecipe is a base matrix plus a combine rule:

  ("plain",)                       P(T) = |D − T·Id|
  ("plus_T_times_minor", r, c)     P(T) = |D − T·Id| + T·|D_rc − T·Id|

(r, c 1-based). Both are brought to the monic convention of
``polyalg.monic_normalize``; ``sign`` is the factor used when the leading
pure power of T cancels inside the determinant.

The coefficients of P(T) are verified against the coadjoint operators
before they are returned.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .config import JACOBIAN_RANK_OPTIONS, RankOptions, T_SYMBOL
from .errors import BadParams, BadSignature, NonInvariantCoefficient, UnknownName
from .invariance import (
    coupled_families,
    failing_generator,
    independent_basis,
    is_invariant,
    search_invariants,
    split_by_families,
)
from .liealg import (
    KINEMATICAL_GENERATORS,
    LieAlgebra,
    canonical_name,
    catalog,
    isp_coefficient_matrices,
    isp_generators,
)
from .polyalg import (
    MultiPoly,
    PolyMatrix,
    collect,
    determinant,
    differentiate,
    monic_normalize,
    shift_diagonal,
)

__all__ = [
    "MatrixRecipe",
    "Invariant",
    "InvariantSet",
    "gelfand_matrix_so",
    "so_recipe",
    "kinematical_matrix",
    "isp_matrix",
    "recipe_for",
    "evaluate_recipe",
    "extract_invariants",
    "casimir_invariants",
    "coefficient_map",
    "is_homomorphism",
    "representation_split",
    "KINEMATICAL_COORDINATES",
]

logger = logging.getLogger(__name__)

KINEMATICAL_COORDINATES = tuple(s.lower() for s in KINEMATICAL_GENERATORS)

PLAIN = ("plain",)


# ---------------------------------------------------------------------------
# 配方（recipe）
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixRecipe:
    name: str
    base: PolyMatrix
    combine: Tuple = PLAIN
    T_dependent: bool = False
    sign: Optional[int] = None
    T: str = T_SYMBOL

    def __post_init__(self):
        kind = self.combine[0] if self.combine else None
        if kind == "plain":
            if len(self.combine) != 1:
                raise BadParams("plain recipes take no indices")
        elif kind == "plus_T_times_minor":
            if len(self.combine) != 3:
                raise BadParams("plus_T_times_minor needs (row, col)")
            _, r, c = self.combine
            n = self.base.size
            if not (1 <= r <= n and 1 <= c <= n):
                raise BadParams(f"minor ({r}, {c}) invalid for a {n}x{n} matrix")
        else:
            raise BadParams(f"unknown combine rule {self.combine!r}")
        if self.sign not in (None, 1, -1):
            raise BadParams(f"sign must be +1 or -1, got {self.sign!r}")

    @property
    def size(self) -> int:
        return self.base.size

    @property
    def is_composite(self) -> bool:
        return self.combine[0] == "plus_T_times_minor"

    def substitute(self, bindings) -> "MatrixRecipe":
        return MatrixRecipe(self.name, self.base.substitute(bindings), self.combine,
                            self.T_dependent, self.sign, self.T)

    def describe(self) -> str:
        if self.is_composite:
            _, r, c = self.combine
            return f"|D - {self.T}*Id| + {self.T}*|D[{r},{c}] - {self.T}*Id|"
        return f"|D - {self.T}*Id|"


def evaluate_recipe(r: MatrixRecipe, T: str = T_SYMBOL) -> MultiPoly:
    """P(T) for a recipe, in the monic convention."""
    base = r.base
    if T != r.T and r.T_dependent:
        base = base.substitute({r.T: MultiPoly.var(T, base.variables)})
    raw = determinant(shift_diagonal(base, T))
    if r.is_composite:
        _, row, col = r.combine
        minor = base.minor(row - 1, col - 1)
        t = MultiPoly.var(T, raw.variables)
        raw = raw + t * determinant(shift_diagonal(minor, T))
    P = monic_normalize(raw, T, r.size, r.sign)
    logger.info("%s: P(%s) has %d term(s)", r.name, T, len(P))
    return P


# ---------------------------------------------------------------------------
# so(p,q)：Gel'fand 矩阵
# ---------------------------------------------------------------------------

def gelfand_matrix_so(p: int, q: int) -> PolyMatrix:
    """Entries −g_jj e_ij above the diagonal and g_ii e_ij below it."""
    if not isinstance(p, int) or not isinstance(q, int) or p < 0 or q < 0 or p + q < 3:
        raise BadSignature(f"so(p,q) needs p, q >= 0 and p+q >= 3, got ({p}, {q})")
    N = p + q
    g = [1] * p + [-1] * q
    coords = tuple(f"e{i}_{j}" for i in range(1, N + 1) for j in range(i + 1, N + 1))
    rows: List[List[object]] = [[0] * N for _ in range(N)]
    for i in range(N):
        for j in range(i + 1, N):
            e = MultiPoly.var(f"e{i + 1}_{j + 1}", coords)
            rows[i][j] = e * (-g[j])
            rows[j][i] = e * g[i]
    return PolyMatrix.from_rows(rows, coords)


def so_recipe(p: int, q: int) -> MatrixRecipe:
    return MatrixRecipe(f"so({p},{q})", gelfand_matrix_so(p, q))


# ---------------------------------------------------------------------------
# 运动学代数的矩阵 D
# ---------------------------------------------------------------------------

_ADS_ROWS = (
    ("0", "j3", "j2", "-k1", "p1"),
    ("-j3", "0", "j1", "k2", "-p2"),
    ("-j2", "-j1", "0", "-k3", "p3"),
    ("-k1", "k2", "-k3", "0", "h"),
    ("p1", "-p2", "p3", "-h", "0"),
)
_DS_ROWS = _ADS_ROWS[:4] + (("-p1", "p2", "-p3", "h", "0"),)

_NEWTON_TOP = (
    ("0", "0", "0", "-k1", "p1"),
    ("0", "0", "0", "k2", "-p2"),
    ("0", "0", "0", "-k3", "p3"),
    ("-k1", "k2", "-k3", "0", "0"),
)

_CARROLL_ROWS = _DS_ROWS[:3] + (
    ("-k1", "k2", "-k3", "T", "h"),
    ("-p1", "p2", "-p3", "h", "T"),
)

_STATIC_ROWS = (
    ("0", "0", "0", "-k1", "p1*T"),
    ("0", "0", "0", "k2", "-p2*T"),
    ("0", "0", "0", "-k3", "p3*T"),
    ("-k1", "k2", "-k3", "0", "-h*T"),
    ("-p1", "p2", "-p3", "-h", "0"),
)

# name → (rows, combine, sign)
_KINEMATICAL_RECIPES: Dict[str, Tuple[Tuple[Tuple[str, ...], ...], Tuple, Optional[int]]] = {
    "so32": (_ADS_ROWS, PLAIN, None),
    "so41": (_DS_ROWS, PLAIN, None),
    "iso31": (_ADS_ROWS, ("plus_T_times_minor", 5, 5), -1),
    # 平移是 K：删去 K 列/行后剩下的是 so(4)
    "iso4": (_DS_ROWS, ("plus_T_times_minor", 4, 4), -1),
    "newton_minus": (_NEWTON_TOP + (("p1", "-p2", "p3", "0", "0"),), PLAIN, None),
    "newton_plus": (_NEWTON_TOP + (("-p1", "p2", "-p3", "0", "0"),), PLAIN, None),
    "carroll": (_CARROLL_ROWS, PLAIN, 1),
    "galilei": (_NEWTON_TOP + (("-p1", "p2", "-p3", "0", "T"),), PLAIN, -1),
    "static": (_STATIC_ROWS, PLAIN, None),
}


def kinematical_matrix(name: str) -> MatrixRecipe:
    key = canonical_name(name)
    if key not in _KINEMATICAL_RECIPES:
        raise UnknownName(f"no kinematical matrix for {name!r}")
    rows, combine, sign = _KINEMATICAL_RECIPES[key]
    universe = KINEMATICAL_COORDINATES + (T_SYMBOL,)
    base = PolyMatrix.from_rows(rows, universe)
    t_dep = any(T_SYMBOL in e.support() for r in base.rows for e in r)
    return MatrixRecipe(key, base, combine, t_dep, sign)


# ---------------------------------------------------------------------------
# Isp(2N,R)：矩阵 C
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def isp_matrix(N: int) -> MatrixRecipe:
    """(2N+1)×(2N+1) matrix C: the sp block X(x), last column p_i·T / q_i·T,
    last row (−q, p), zero corner; combined with the (2N+1, 2N+1) minor."""
    if not isinstance(N, int) or isinstance(N, bool) or N < 2:
        raise BadParams(f"isp(2N) needs N >= 2, got {N!r}")
    n = 2 * N
    coords = tuple(c for _, c in isp_generators(N))
    universe = coords + (T_SYMBOL,)
    xs = [MultiPoly.var(c, universe) for c in coords]
    mats = isp_coefficient_matrices(N)
    t = MultiPoly.var(T_SYMBOL, universe)
    ps = [MultiPoly.var(f"p{i}", universe) for i in range(1, N + 1)]
    qs = [MultiPoly.var(f"q{i}", universe) for i in range(1, N + 1)]
    Y = ps + qs
    rows = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = MultiPoly.zero(universe)
            for b, m in enumerate(mats):
                if m[r, c] != 0:
                    acc = acc + xs[b] * int(m[r, c])
            row.append(acc)
        row.append(Y[r] * t)
        rows.append(row)
    rows.append([-q for q in qs] + ps + [MultiPoly.zero(universe)])
    base = PolyMatrix.from_rows(rows, universe)
    return MatrixRecipe(f"isp{n}", base, ("plus_T_times_minor", n + 1, n + 1), True, 1)


def recipe_for(name: str) -> MatrixRecipe:
    """The recipe for a catalog algebra key or alias."""
    key = canonical_name(name)
    if key in _KINEMATICAL_RECIPES:
        return kinematical_matrix(key)
    if key.startswith("so("):
        p, q = (int(x) for x in key[3:-1].split(","))
        return so_recipe(p, q)
    if key.startswith("isp"):
        two_n = int(key[3:])
        if two_n % 2:
            raise BadParams(f"isp(2N) needs an even matrix size, got {two_n}")
        return isp_matrix(two_n // 2)
    raise UnknownName(f"no matrix recipe for {name!r}")


# ---------------------------------------------------------------------------
# 系数提取
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Invariant:
    polynomial: MultiPoly
    source: str

    @property
    def degree(self) -> int:
        return self.polynomial.degree()

    def to_json(self) -> Dict:
        return {"polynomial": str(self.polynomial), "degree": self.degree, "source": self.source}


@dataclass(frozen=True)
class InvariantSet:
    algebra: str
    invariants: Tuple[Invariant, ...]
    polynomial: Optional[MultiPoly] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.invariants)

    def __iter__(self) -> Iterator[Invariant]:
        return iter(self.invariants)

    def polynomials(self) -> List[MultiPoly]:
        return [inv.polynomial for inv in self.invariants]

    def degrees(self) -> List[int]:
        return [inv.degree for inv in self.invariants]

    def to_json(self) -> Dict:
        doc = {"algebra": self.algebra, "invariants": [inv.to_json() for inv in self.invariants]}
        if self.polynomial is not None:
            doc["polynomial"] = str(self.polynomial)
        return doc


def extract_invariants(P: MultiPoly, g: LieAlgebra, T: str = T_SYMBOL, split: bool = True,
                       options: RankOptions = JACOBIAN_RANK_OPTIONS) -> InvariantSet:
    """Nonconstant T-coefficients of P, each verified against g.

    With ``split`` the parts of a coefficient living on different coupled
    families of variables are offered as well when they are invariant on
    their own; the pool is then reduced to a functionally independent one.
    """
    by_power = collect(P, T)
    pool: List[Invariant] = []
    for k in sorted(by_power, reverse=True):
        c = by_power[k]
        if c.is_constant():
            continue
        gen = failing_generator(g, c)
        if gen is not None:
            raise NonInvariantCoefficient(k, str(c), gen)
        pool.append(Invariant(c, f"{T}^{k}"))
    if split:
        families = coupled_families(g)
        for inv in list(pool):
            parts = split_by_families(inv.polynomial, families)
            if len(parts) < 2:
                continue
            for part in parts:
                if not part.is_constant() and is_invariant(g, part):
                    pool.append(Invariant(part, f"{inv.source} (part)"))
    kept = {id(p) for p in independent_basis([inv.polynomial for inv in pool], options=options)}
    chosen = tuple(inv for inv in pool if id(inv.polynomial) in kept)
    logger.info("%s: %d coefficient invariant(s), %d independent",
                g.name, len(pool), len(chosen))
    return InvariantSet(g.name, chosen, P)


def _matches_catalog(g: LieAlgebra) -> bool:
    try:
        return catalog(g.name).same_structure(g)
    except (UnknownName, BadParams):
        return False


def casimir_invariants(g: LieAlgebra, max_degree: Optional[int] = None,
                       options: RankOptions = JACOBIAN_RANK_OPTIONS) -> InvariantSet:
    """Invariants of g: through its matrix recipe when g is a catalog algebra,
    otherwise by the polynomial search of ``invariance``."""
    if _matches_catalog(g):
        try:
            recipe = recipe_for(g.name)
        except UnknownName:
            recipe = None
        if recipe is not None:
            return extract_invariants(evaluate_recipe(recipe), g, options=options)
    kwargs = {} if max_degree is None else {"max_degree": max_degree}
    found = search_invariants(g, options=options, **kwargs)
    logger.info("%s: %d invariant(s) by polynomial search", g.name, len(found))
    return InvariantSet(g.name, tuple(Invariant(p, f"degree {p.degree()}") for p in found))


# ---------------------------------------------------------------------------
# 表示检验
# ---------------------------------------------------------------------------

def coefficient_map(matrix: PolyMatrix, g: LieAlgebra) -> Dict[int, PolyMatrix]:
    """X_i ↦ ∂D/∂x_i."""
    return {i: matrix.map(lambda e, v=v: differentiate(e, v))
            for i, v in enumerate(g.coordinates)}


def is_homomorphism(matrix: PolyMatrix, g: LieAlgebra) -> bool:
    """[ρ(X_i), ρ(X_j)] = Σ_k C_ij^k ρ(X_k) for every pair."""
    images = coefficient_map(matrix, g)
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = images[i].commutator(images[j])
            rhs = images[i] * 0
            for k, c in g.bracket(i, j).items():
                rhs = rhs + images[k] * c
            if lhs != rhs:
                logger.debug("%s: bracket (%s, %s) not preserved",
                             g.name, g.generators[i], g.generators[j])
                return False
    return True


def _zero_rows_cols(M: PolyMatrix, rows: Sequence[int] = (), cols: Sequence[int] = ()) -> PolyMatrix:
    zero = M[0, 0] * 0
    return PolyMatrix(tuple(
        tuple(zero if i in rows or j in cols else e
              for j, e in enumerate(r))
        for i, r in enumerate(M.rows)
    ))


# D = D₁ + D₂，D₁ 给出忠实表示（0-based 行列）
_SPLITS = {
    "iso31": {"rows": (4,)},
    "iso4": {"cols": (3,)},
    "carroll": {"rows": (4,), "cols": (3,)},
}


def representation_split(name: str) -> Tuple[PolyMatrix, PolyMatrix]:
    """(D₁, D₂) with D = D₁ + D₂ for iso(3,1), iso(4) and Carroll."""
    key = canonical_name(name)
    if key not in _SPLITS:
        raise BadParams(f"no representation split recorded for {name!r}")
    D = kinematical_matrix(key).base
    D1 = _zero_rows_cols(D, **_SPLITS[key])
    return D1, D - D1
