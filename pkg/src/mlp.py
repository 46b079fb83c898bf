# src/mlp.py
"""
Missing-label analysis for a chain h ↪ g.

  n = ½(dim g − N(g) − dim h − N(h)) + l′,   m = 2n

Labels come from the characteristic polynomial of the recipe matrix with
every subalgebra variable set to zero. Each reduced coefficient is tested
whole and then through its atoms: the monomials of the coefficient written
as a polynomial in a basis of subalgebra-annihilated solutions free of the
subalgebra variables.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from .config import DEFAULT_MAX_DEGREE, T_SYMBOL
from .errors import NegativeCount
from .gelfand import (
    KINEMATICAL_COORDINATES,
    InvariantSet,
    MatrixRecipe,
    casimir_invariants,
    evaluate_recipe,
    recipe_for,
)
from .invariance import (
    annihilated_by_subalgebra,
    failing_generator,
    independence_rank,
    independent_basis,
    invariants_of_degree,
    system_matrix,
)
from .liealg import (
    LieAlgebra,
    SubalgebraSelection,
    catalog,
    num_invariants,
    rotation_indices,
    subalgebra,
)
from .polyalg import MultiPoly, collect, rank_over_function_field, substitute

__all__ = [
    "rotation_scalars",
    "missing_label_count",
    "compute_l_prime",
    "reduced_solution_count",
    "reduced_recipe",
    "basic_solutions",
    "atomize",
    "LabelVerdict",
    "MLPReport",
    "mlp_analyze",
    "ReferenceRow",
    "REFERENCE_LABELS",
    "compare_with_reference",
    "report_to_json",
]

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# 旋转标量 I1..I7 与 M
# ---------------------------------------------------------------------------

def rotation_scalars(variables: Sequence[str] = KINEMATICAL_COORDINATES) -> Dict[str, MultiPoly]:
    """I1 = h, I2 = p·p, I3 = k·k, I4 = j·j, I5 = k·p, I6 = j·k, I7 = j·p,
    M = ε^{αβγ} j_α p_β k_γ."""
    v = {n: MultiPoly.var(n, variables) for n in KINEMATICAL_COORDINATES}
    j = [v[f"j{a}"] for a in (1, 2, 3)]
    p = [v[f"p{a}"] for a in (1, 2, 3)]
    k = [v[f"k{a}"] for a in (1, 2, 3)]

    def dot(x, y):
        return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]

    M = (j[0] * (p[1] * k[2] - p[2] * k[1])
         - j[1] * (p[0] * k[2] - p[2] * k[0])
         + j[2] * (p[0] * k[1] - p[1] * k[0]))
    return {
        "I1": v["h"],
        "I2": dot(p, p),
        "I3": dot(k, k),
        "I4": dot(j, j),
        "I5": dot(k, p),
        "I6": dot(j, k),
        "I7": dot(j, p),
        "M": M,
    }


# ---------------------------------------------------------------------------
# 计数
# ---------------------------------------------------------------------------

def _subalgebra_invariant_count(h: SubalgebraSelection) -> int:
    return num_invariants(h.as_algebra()) if h.dim else 0


def missing_label_count(g: LieAlgebra, h: SubalgebraSelection, l_prime: int) -> Tuple[int, int]:
    twice = g.dim - num_invariants(g) - h.dim - _subalgebra_invariant_count(h)
    assert twice % 2 == 0, "ranks of commutator matrices are even"
    n = twice // 2 + l_prime
    if n < 0:
        raise NegativeCount(f"missing label count n = {n} < 0 for {g.name} with l' = {l_prime}")
    return n, 2 * n


def compute_l_prime(g_invariants: Union[InvariantSet, Sequence[MultiPoly]],
                    h: SubalgebraSelection) -> int:
    polys = (g_invariants.polynomials() if isinstance(g_invariants, InvariantSet)
             else list(g_invariants))
    inside = set(h.variables)
    return sum(1 for p in polys if p.support() <= inside)


def reduced_solution_count(g: LieAlgebra, h: SubalgebraSelection) -> int:
    """N′ = #(non-h variables) − rank of the h-rows restricted to those columns."""
    cols = h.complement_variables
    if not cols:
        return 0
    if not h.dim:
        return len(cols)
    rank = rank_over_function_field(system_matrix(h, cols))
    return len(cols) - rank


def reduced_recipe(r: MatrixRecipe, h: SubalgebraSelection) -> MatrixRecipe:
    """The recipe with every subalgebra variable replaced by 0."""
    return r.substitute({v: 0 for v in h.variables})


def basic_solutions(g: LieAlgebra, h: SubalgebraSelection, target: Optional[int] = None,
                    max_degree: int = DEFAULT_MAX_DEGREE) -> List[MultiPoly]:
    """Independent polynomial solutions of the h-equations in the non-h variables."""
    if target is None:
        target = reduced_solution_count(g, h)
    cols = h.complement_variables
    found: List[MultiPoly] = []
    for d in range(1, max_degree + 1):
        if len(found) >= target:
            break
        found += independent_basis(invariants_of_degree(g, d, cols, h.indices), found)
    if len(found) < target:
        logger.warning("%s: %d of %d basic solutions found up to degree %d",
                       g.name, len(found), target, max_degree)
    return found[:target]


# ---------------------------------------------------------------------------
# 原子分解
# ---------------------------------------------------------------------------

def _exponent_vectors(weights: Sequence[int], total: int) -> List[Tuple[int, ...]]:
    out: List[Tuple[int, ...]] = []

    def rec(i: int, left: int, acc: List[int]) -> None:
        if i == len(weights):
            if left == 0:
                out.append(tuple(acc))
            return
        for e in range(left // weights[i] + 1):
            rec(i + 1, left - e * weights[i], acc + [e])

    rec(0, total, [])
    return out


def _power_product(basis: Sequence[MultiPoly], exps: Sequence[int], like: MultiPoly) -> MultiPoly:
    acc = MultiPoly.constant(1, like.variables)
    for b, e in zip(basis, exps):
        if e:
            acc = acc * b ** e
    return acc


def atomize(p: MultiPoly, basis: Sequence[MultiPoly]) -> List[Tuple[Tuple[int, ...], MultiPoly]]:
    """Write p as Σ c_e Π basis^e and return the (e, Π basis^e) with c_e ≠ 0.

    Empty when p is not a polynomial in the basis.
    """
    if p.is_constant() or not basis:
        return []
    weights = [max(b.degree(), 1) for b in basis]
    degrees = sorted({sum(m) for m in p.terms()})
    columns: List[Tuple[Tuple[int, ...], MultiPoly]] = []
    for d in degrees:
        for e in _exponent_vectors(weights, d):
            if any(e):
                columns.append((e, _power_product(basis, e, p)))
    if not columns:
        return []
    row_index: Dict[Tuple, int] = {}
    entries: List[Dict[int, Fraction]] = []
    for _, poly in columns + [(None, p)]:
        col = {}
        for key, c in poly.named_terms().items():
            col[row_index.setdefault(key, len(row_index))] = c
        entries.append(col)
    nrows, ncols = len(row_index), len(entries)
    rows = [[QQ(0)] * ncols for _ in range(nrows)]
    for c, col in enumerate(entries):
        for r, v in col.items():
            rows[r][c] = QQ(v.numerator, v.denominator)
    rref, pivots = DomainMatrix(rows, (nrows, ncols), QQ).rref()
    if ncols - 1 in pivots:
        return []
    values = rref.to_list()
    out = []
    for r, c in enumerate(pivots):
        if values[r][ncols - 1]:
            out.append(columns[c])
    return out


# ---------------------------------------------------------------------------
# 报告
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LabelVerdict:
    polynomial: MultiPoly
    origin: str
    accepted: bool
    reason: str

    def to_json(self) -> Dict:
        return {"polynomial": str(self.polynomial), "origin": self.origin,
                "accepted": self.accepted, "reason": self.reason}


@dataclass(frozen=True)
class MLPReport:
    algebra: str
    subalgebra: Tuple[str, ...]
    indices: Tuple[int, ...]
    n: int
    m: int
    l_prime: int
    N_prime: int
    casimirs: InvariantSet
    subalgebra_casimirs: InvariantSet
    reduced_polynomial: MultiPoly
    reduced_candidates: Tuple[MultiPoly, ...]
    basic: Tuple[MultiPoly, ...]
    verdicts: Tuple[LabelVerdict, ...]
    reduced_rank: int
    notes: Tuple[str, ...] = field(default=())

    @property
    def accepted_labels(self) -> List[MultiPoly]:
        return [v.polynomial for v in self.verdicts if v.accepted]

    @property
    def failed(self) -> bool:
        """The reduced matrix gave no new label."""
        return not self.accepted_labels

    @property
    def counting_identity_holds(self) -> bool:
        return self.reduced_rank == self.N_prime

    def summary(self) -> str:
        labels = ", ".join(str(p) for p in self.accepted_labels) or "none"
        flag = "  [method fails]" if self.failed else ""
        return (f"{self.algebra}: n={self.n} m={self.m} l'={self.l_prime} "
                f"N'={self.N_prime} labels={{{labels}}}{flag}")


def report_to_json(report: MLPReport) -> Dict:
    return {
        "algebra": report.algebra,
        "subalgebra": list(report.subalgebra),
        "indices": [i + 1 for i in report.indices],
        "n": report.n,
        "m": report.m,
        "l_prime": report.l_prime,
        "N_prime": report.N_prime,
        "casimirs": [str(p) for p in report.casimirs.polynomials()],
        "subalgebra_casimirs": [str(p) for p in report.subalgebra_casimirs.polynomials()],
        "reduced_polynomial": str(report.reduced_polynomial),
        "reduced_candidates": [str(p) for p in report.reduced_candidates],
        "basic_solutions": [str(p) for p in report.basic],
        "verdicts": [v.to_json() for v in report.verdicts],
        "accepted_labels": [str(p) for p in report.accepted_labels],
        "reduced_rank": report.reduced_rank,
        "counting_identity": report.counting_identity_holds,
        "failed": report.failed,
        "notes": list(report.notes),
    }


def _atom_key(g: LieAlgebra, exps: Tuple[int, ...], poly: MultiPoly) -> Tuple:
    order = {v: i for i, v in enumerate(g.coordinates)}
    first = min((order.get(v, len(order)) for v in poly.support()), default=len(order))
    return first, tuple(-e for e in exps)


def mlp_analyze(g: Union[str, LieAlgebra],
                h_indices: Optional[Sequence[Union[int, str]]] = None,
                l_prime: Optional[int] = None,
                recipe: Optional[MatrixRecipe] = None,
                T: str = T_SYMBOL) -> MLPReport:
    if isinstance(g, str):
        g = catalog(g)
    h = subalgebra(g, rotation_indices(g) if h_indices is None else h_indices)
    recipe = recipe if recipe is not None else recipe_for(g.name)

    casimirs = casimir_invariants(g)
    sub_casimirs = (casimir_invariants(h.as_algebra()) if h.dim
                    else InvariantSet(f"{g.name}|", ()))
    notes: List[str] = []
    lp = compute_l_prime(casimirs, h)
    if l_prime is not None and l_prime != lp:
        notes.append(f"l' overridden: computed {lp}, used {l_prime}")
        lp = l_prime
    n, m = missing_label_count(g, h, lp)
    N_prime = reduced_solution_count(g, h)

    reduced = evaluate_recipe(reduced_recipe(recipe, h), T)
    by_power = collect(reduced, T)
    candidates = tuple(by_power[k] for k in sorted(by_power, reverse=True)
                       if not by_power[k].is_constant())
    basic = basic_solutions(g, h, N_prime)

    have = casimirs.polynomials() + sub_casimirs.polynomials()
    accepted: List[MultiPoly] = []
    verdicts: List[LabelVerdict] = []
    rank = independence_rank(have)

    def judge(p: MultiPoly, origin: str) -> None:
        nonlocal rank
        gen = failing_generator(g, p, h.indices)
        if gen is not None:
            verdicts.append(LabelVerdict(p, origin, False, f"not annihilated by {gen}"))
            return
        r = independence_rank(have + accepted + [p])
        if r > rank:
            rank = r
            accepted.append(p)
            verdicts.append(LabelVerdict(p, origin, True, "independent of Casimirs and labels"))
        else:
            verdicts.append(LabelVerdict(p, origin, False, "functionally dependent"))

    for c_index, cand in enumerate(candidates):
        judge(cand, f"candidate {c_index + 1}")
        atoms = sorted(atomize(cand, basic), key=lambda a: _atom_key(g, a[0], a[1]))
        for exps, atom in atoms:
            if atom == cand:
                continue
            judge(atom, f"atom of candidate {c_index + 1}")

    zeroed = [substitute(p, {v: 0 for v in h.variables}) for p in casimirs.polynomials()]
    reduced_rank = independence_rank(accepted + [p for p in zeroed if not p.is_constant()])
    if not accepted:
        notes.append("the reduced matrix yields no new missing label operator")
    report = MLPReport(
        algebra=g.name,
        subalgebra=h.generators,
        indices=h.indices,
        n=n,
        m=m,
        l_prime=lp,
        N_prime=N_prime,
        casimirs=casimirs,
        subalgebra_casimirs=sub_casimirs,
        reduced_polynomial=reduced,
        reduced_candidates=candidates,
        basic=tuple(basic),
        verdicts=tuple(verdicts),
        reduced_rank=reduced_rank,
        notes=tuple(notes),
    )
    logger.info("%s", report.summary())
    return report


# ---------------------------------------------------------------------------
# 参照表（so(3) ↪ g）
# ---------------------------------------------------------------------------

Scalars = Dict[str, MultiPoly]


@dataclass(frozen=True)
class ReferenceRow:
    algebra: str
    pool: Tuple[str, ...]
    expected_labels: Callable[[Scalars], List[MultiPoly]]
    expected_count: int
    note: str = ""


def _names(*names: str) -> Callable[[Scalars], List[MultiPoly]]:
    return lambda s: [s[n] for n in names]


REFERENCE_LABELS: Dict[str, ReferenceRow] = {
    "so41": ReferenceRow("so41", ("I2", "I3", "I5", "I6"), _names("I2", "I3", "I5"), 3),
    "so32": ReferenceRow("so32", ("I2", "I3", "I5", "I6"), _names("I2", "I3", "I5"), 3),
    "iso31": ReferenceRow("iso31", ("I2", "I3", "I5", "I7"), _names("I2", "I3", "I5"), 3),
    "iso4": ReferenceRow("iso4", ("I2", "I3", "I5", "I6"), _names("I2", "I3", "I5"), 3),
    "newton_plus": ReferenceRow("newton_plus", ("I1", "I2", "I6", "I7"), _names("I2"), 1),
    "newton_minus": ReferenceRow("newton_minus", ("I1", "I2", "I6", "I7"), _names("I2"), 1),
    "carroll": ReferenceRow(
        "carroll", ("I2", "I3", "I5", "I6"), lambda s: [s["I2"] * s["I3"]], 2,
        "reduced matrix gives I2*I3 - I5^2 and I2*I3; the reference row lists I2*I3 only",
    ),
    "galilei": ReferenceRow(
        "galilei", ("I1", "I3", "I6", "I7"), lambda s: [s["I2"] * s["I3"] - s["I5"] ** 2], 1,
        "the reference label I2*I3 - I5^2 is itself a Casimir of galilei; "
        "the independent label found is I2*I3",
    ),
    "static": ReferenceRow("static", ("I6", "I7"), lambda s: [], 0,
                        "Casimirs already exhaust the solutions free of j"),
}


def compare_with_reference(report: MLPReport) -> Dict:
    """Compare a report with its reference row."""
    row = REFERENCE_LABELS[report.algebra]
    s = rotation_scalars()
    pool = [s[n] for n in row.pool]
    base = report.casimirs.polynomials() + [s["I4"]]
    g = catalog(row.algebra)
    h = subalgebra(g, rotation_indices(g))
    pool_ok = (all(annihilated_by_subalgebra(h, p) for p in pool)
               and independence_rank(base + pool) == independence_rank(base) + len(pool))
    accepted = report.accepted_labels
    reference = row.expected_labels(s)
    same_span = (independence_rank(accepted) == independence_rank(reference)
                 == independence_rank(accepted + reference))
    return {
        "algebra": row.algebra,
        "pool": list(row.pool),
        "pool_ok": pool_ok,
        "accepted": [str(p) for p in accepted],
        "count": len(accepted),
        "expected_count": row.expected_count,
        "matches_reference": same_span,
        "note": row.note,
    }
