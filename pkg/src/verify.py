# src/verify.py
"""
Golden verification suite.

Every check is a named callable taking a resolver (name → LieAlgebra,
``catalog`` by default) and raising CheckFailed on a wrong answer.
``run_suite`` runs the selected checks on a thread pool and reports them
in registry order; the first failure is the one the CLI names.

Check groups:
  golden      displayed Casimir formulas of every kinematical recipe
  invariance  extracted invariants killed by every coadjoint operator
  counts      N(g) of the catalog
  isp         the isp(4) composite recipe
  contraction ε-limits reproduce the iso(3,1) and iso(4) invariants
  mlp         the so(3) ↪ g missing-label rows
  dependency  the M² identity and the rank of I1..I7
  jacobi      the Jacobi identity on every catalog algebra
  rank        symbolic and evaluated generic ranks agree
  homomorphism  which recipe matrices are representations
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from tqdm import tqdm

from .config import DEFAULT_WORKERS, T_SYMBOL, RankOptions
from .contraction import catalog_contraction, contract_algebra, contraction_pipeline
from .errors import BadParams, CasimirError
from .gelfand import (
    evaluate_recipe,
    extract_invariants,
    is_homomorphism,
    kinematical_matrix,
    recipe_for,
    representation_split,
)
from .invariance import coadjoint_operators, apply, independence_rank, is_invariant
from .liealg import (
    KINEMATICAL_NAMES,
    LieAlgebra,
    catalog,
    commutator_matrix,
    jacobi_witness,
    num_invariants,
)
from .mlp import REFERENCE_LABELS, mlp_analyze, rotation_scalars, compare_with_reference
from .polyalg import MultiPoly, collect, rank_over_function_field

__all__ = [
    "CheckFailed",
    "Check",
    "CheckResult",
    "VerifyReport",
    "GOLDEN",
    "GOLDEN_SIGNS",
    "registry",
    "check_names",
    "select_checks",
    "run_suite",
]

logger = logging.getLogger(__name__)

Resolver = Callable[[str], LieAlgebra]
Scalars = Dict[str, MultiPoly]


class CheckFailed(Exception):
    pass


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise CheckFailed(message)


@dataclass(frozen=True)
class Check:
    name: str
    group: str
    run: Callable[[Resolver], str]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_json(self) -> Dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class VerifyReport:
    results: Tuple[CheckResult, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        return next((r for r in self.results if not r.passed), None)

    def to_json(self) -> Dict:
        return {
            "passed": self.passed,
            "first_failure": self.first_failure.name if self.first_failure else None,
            "total": len(self.results),
            "failed": sum(1 for r in self.results if not r.passed),
            "checks": [r.to_json() for r in self.results],
        }


# ---------------------------------------------------------------------------
# 参考公式：P(T) = T^5 + C2 T^3 + C4 T
# ---------------------------------------------------------------------------

def _dS_pair(s: Scalars, sign: int) -> Tuple[MultiPoly, MultiPoly]:
    I1, I2, I3, I4, I5, I6, I7, M = (s[k] for k in ("I1", "I2", "I3", "I4", "I5", "I6", "I7", "M"))
    if sign < 0:
        # so(3,2)
        return (I4 - I2 - I3 + I1 ** 2,
                I4 * I1 ** 2 + (I2 * I3 - I5 ** 2) - I7 ** 2 - I6 ** 2 - 2 * M * I1)
    return (I4 + I2 - I3 - I1 ** 2,
            -I4 * I1 ** 2 - (I2 * I3 - I5 ** 2) + I7 ** 2 - I6 ** 2 + 2 * M * I1)


GOLDEN: Dict[str, Callable[[Scalars], Tuple[MultiPoly, MultiPoly]]] = {
    "so32": lambda s: _dS_pair(s, -1),
    "so41": lambda s: _dS_pair(s, +1),
    "newton_minus": lambda s: (-s["I2"] - s["I3"], s["I2"] * s["I3"] - s["I5"] ** 2),
    "newton_plus": lambda s: (s["I2"] - s["I3"], s["I2"] * s["I3"] - s["I5"] ** 2),
    "iso31": lambda s: (
        s["I1"] ** 2 - s["I2"],
        s["I4"] * s["I1"] ** 2 + s["I2"] * s["I3"] - s["I7"] ** 2 - s["I5"] ** 2
        - 2 * s["M"] * s["I1"],
    ),
    "iso4": lambda s: (
        -s["I1"] ** 2 - s["I3"],
        s["I4"] * s["I1"] ** 2 + s["I2"] * s["I3"] + s["I6"] ** 2 - s["I5"] ** 2
        - 2 * s["M"] * s["I1"],
    ),
    "carroll": lambda s: (
        s["I1"] ** 2,
        s["I4"] * s["I1"] ** 2 + s["I2"] * s["I3"] - s["I5"] ** 2 - 2 * s["M"] * s["I1"],
    ),
    "galilei": lambda s: (s["I2"], s["I2"] * s["I3"] - s["I5"] ** 2),
}


def _static_polynomial(s: Scalars) -> MultiPoly:
    t = MultiPoly.var(T_SYMBOL, s["I1"].variables)
    I1, I2, I3, I5 = s["I1"], s["I2"], s["I3"], s["I5"]
    return t ** 5 + (I2 - I1 ** 2) * t ** 4 - I3 * t ** 3 - (I2 * I3 - I5 ** 2) * t ** 2


# 已记录的整体符号：(T^3, T^1) 系数相对参考公式
GOLDEN_SIGNS: Dict[str, Tuple[int, int]] = {
    "galilei": (1, -1),
    "newton_plus": (1, -1),
    "iso4": (1, -1),
}


def _expected_signs(key: str) -> Tuple[int, int]:
    return GOLDEN_SIGNS.get(key, (1, 1))


def _golden(key: str) -> Callable[[Resolver], str]:
    def run(resolve: Resolver) -> str:
        s = rotation_scalars()
        P = evaluate_recipe(kinematical_matrix(key))
        if key == "static":
            _require(P == _static_polynomial(s), f"static P(T) = {P}")
            return "P(T) exact"
        C2, C4 = GOLDEN[key](s)
        by_power = collect(P, T_SYMBOL)
        _require(sorted(by_power) == [1, 3, 5], f"{key}: T-powers {sorted(by_power)}")
        _require(by_power[5] == 1, f"{key}: P(T) is not monic")
        signs = _expected_signs(key)
        for power, expected, sign in zip((3, 1), (C2, C4), signs):
            got = by_power[power]
            _require(got == expected * sign,
                     f"{key}: coefficient of T^{power} is {got}, expected {expected * sign}")
        return "exact" if signs == (1, 1) else f"exact with recorded signs {signs}"
    return run


# ---------------------------------------------------------------------------
# 单项检查
# ---------------------------------------------------------------------------

def _expected_count(key: str) -> int:
    return 4 if key == "static" else 2


def _invariance(key: str) -> Callable[[Resolver], str]:
    def run(resolve: Resolver) -> str:
        g = resolve(key)
        found = extract_invariants(evaluate_recipe(recipe_for(key)), g)
        _require(len(found) == _expected_count(key),
                 f"{key}: {len(found)} invariant(s), expected {_expected_count(key)}")
        for inv in found:
            _require(is_invariant(g, inv.polynomial), f"{key}: {inv.polynomial} not invariant")
        return f"{len(found)} x {g.dim} operators"
    return run


def _counts(resolve: Resolver) -> str:
    for key in KINEMATICAL_NAMES:
        n = num_invariants(resolve(key))
        _require(n == _expected_count(key), f"N({key}) = {n}")
    for p, q in ((3, 2), (4, 1)):
        n = num_invariants(catalog("so", p=p, q=q))
        _require(n == 2, f"N(so({p},{q})) = {n} in the E basis")
    return f"{len(KINEMATICAL_NAMES) + 2} algebras"


def _isp(resolve: Resolver) -> str:
    g = resolve("isp4")
    P = evaluate_recipe(recipe_for("isp4"))
    by_power = collect(P, T_SYMBOL)
    nonconstant = sorted(k for k, c in by_power.items() if not c.is_constant())
    _require(nonconstant == [1, 3], f"isp4: invariant T-powers {nonconstant}")
    found = extract_invariants(P, g, split=False)
    _require(len(found) == 2, f"isp4: {len(found)} invariant(s)")
    _require(sorted(found.degrees()) == [3, 5], f"isp4: degrees {found.degrees()}")
    ops = coadjoint_operators(g)
    _require(len(ops) == 14, f"isp4 has {len(ops)} operators")
    for inv in found:
        for op in ops:
            _require(apply(op, inv.polynomial).is_zero(),
                     f"isp4: degree {inv.degree} invariant fails under {op.generator}")
    return "degrees 3, 5"


def _contraction(source: str, target: str) -> Callable[[Resolver], str]:
    def run(resolve: Resolver) -> str:
        g = resolve(source)
        spec = catalog_contraction(source, target)
        _require(contract_algebra(spec).same_structure(resolve(target)),
                 f"{source} -> {target}: bracket table differs")
        result = contraction_pipeline(g, spec)
        C2, C4 = GOLDEN[target](rotation_scalars())
        by_power = collect(result.polynomial, T_SYMBOL)
        for power, expected, sign in zip((3, 1), (C2, C4), _expected_signs(target)):
            got = by_power.get(power)
            _require(got is not None and got == expected * sign,
                     f"{source} -> {target}: limit coefficient of T^{power} is {got}")
        return f"alpha = {result.alpha}"
    return run


_MLP_SHAPE = {"static": (1, 2)}


def _mlp(key: str) -> Callable[[Resolver], str]:
    def run(resolve: Resolver) -> str:
        report = mlp_analyze(resolve(key))
        n, m = _MLP_SHAPE.get(key, (2, 4))
        _require((report.n, report.m) == (n, m), f"{key}: n={report.n} m={report.m}")
        _require(report.N_prime == 4, f"{key}: N' = {report.N_prime}")
        row = compare_with_reference(report)
        _require(row["pool_ok"], f"{key}: reference pool is not a set of new labels")
        _require(row["count"] == row["expected_count"],
                 f"{key}: {row['count']} label(s), expected {row['expected_count']}")
        if not REFERENCE_LABELS[key].note:
            _require(row["matches_reference"], f"{key}: labels {row['accepted']}")
        _require(report.failed == (key == "static"), f"{key}: failure flag {report.failed}")
        return row["note"] or "matches reference"
    return run


def _dependency(resolve: Resolver) -> str:
    s = rotation_scalars()
    I2, I3, I4, I5, I6, I7, M = (s[k] for k in ("I2", "I3", "I4", "I5", "I6", "I7", "M"))
    # M^2 is the Gram determinant of j, p, k
    rhs = I2 * I3 * I4 + 2 * I5 * I6 * I7 - I4 * I5 ** 2 - I3 * I7 ** 2 - I2 * I6 ** 2
    _require(M ** 2 == rhs, "M^2 identity fails")
    base = [s[f"I{i}"] for i in range(1, 8)]
    r = independence_rank(base)
    _require(r == 7, f"rank(I1..I7) = {r}")
    r = independence_rank(base + [M])
    _require(r == 7, f"rank(I1..I7, M) = {r}")
    return "M^2 identity, rank 7"


def _catalog_keys() -> List[str]:
    return list(KINEMATICAL_NAMES) + ["isp4"]


def _jacobi(resolve: Resolver) -> str:
    algebras = [resolve(k) for k in _catalog_keys()]
    algebras += [catalog("so", p=p, q=q) for p, q in ((3, 0), (2, 1), (3, 1), (3, 2), (4, 1))]
    for g in algebras:
        w = jacobi_witness(g)
        _require(w is None, f"{g.name}: Jacobi witness {w}")
    return f"{len(algebras)} algebras"


def _rank(resolve: Resolver) -> str:
    for key in _catalog_keys():
        g = resolve(key)
        # RankMismatch 在这里会被当作失败
        rank_over_function_field(commutator_matrix(g), RankOptions(symbolic_max_dim=g.dim))
    return f"{len(_catalog_keys())} commutator matrices"


def _homomorphism(resolve: Resolver) -> str:
    for key in ("iso31", "iso4", "carroll"):
        D1, _ = representation_split(key)
        _require(is_homomorphism(D1, resolve(key)), f"{key}: D1 is not a representation")
    for key in ("so32", "so41"):
        _require(is_homomorphism(kinematical_matrix(key).base, resolve(key)),
                 f"{key}: D is not a representation")
    for key in ("newton_plus", "newton_minus", "galilei", "static"):
        _require(not is_homomorphism(kinematical_matrix(key).base, resolve(key)),
                 f"{key}: D unexpectedly is a representation")
    return "splits and negative claims"


# ---------------------------------------------------------------------------
# 注册表与执行
# ---------------------------------------------------------------------------

def registry() -> List[Check]:
    checks: List[Check] = []
    for key in KINEMATICAL_NAMES:
        checks.append(Check(f"golden:{key}", "golden", _golden(key)))
    for key in KINEMATICAL_NAMES:
        checks.append(Check(f"invariance:{key}", "invariance", _invariance(key)))
    checks.append(Check("counts", "counts", _counts))
    checks.append(Check("isp", "isp", _isp))
    for src, dst in (("so32", "iso31"), ("so41", "iso4")):
        checks.append(Check(f"contraction:{src}-{dst}", "contraction", _contraction(src, dst)))
    for key in REFERENCE_LABELS:
        checks.append(Check(f"mlp:{key}", "mlp", _mlp(key)))
    checks.append(Check("dependency", "dependency", _dependency))
    checks.append(Check("jacobi", "jacobi", _jacobi))
    checks.append(Check("rank", "rank", _rank))
    checks.append(Check("homomorphism", "homomorphism", _homomorphism))
    return checks


def check_names() -> List[str]:
    return [c.name for c in registry()]


def select_checks(only: Optional[Iterable[str]] = None) -> List[Check]:
    """Filter by group or exact check name; unknown filters are an error."""
    checks = registry()
    if not only:
        return checks
    wanted = [w.strip() for w in only if w.strip()]
    picked = [c for c in checks if c.name in wanted or c.group in wanted]
    known = {c.name for c in checks} | {c.group for c in checks}
    unknown = [w for w in wanted if w not in known]
    if unknown:
        raise BadParams(f"unknown check(s) {unknown}; groups are "
                        f"{sorted({c.group for c in checks})}")
    return picked


def _run_one(check: Check, resolve: Resolver) -> CheckResult:
    try:
        detail = check.run(resolve)
    except CheckFailed as e:
        return CheckResult(check.name, False, str(e))
    except CasimirError as e:
        return CheckResult(check.name, False, f"{type(e).__name__}: {e}")
    return CheckResult(check.name, True, detail)


def run_suite(only: Optional[Sequence[str]] = None,
              workers: int = DEFAULT_WORKERS,
              resolve: Resolver = catalog,
              progress: bool = False) -> VerifyReport:
    checks = select_checks(only)
    workers = max(1, int(workers))
    results: Dict[str, CheckResult] = {}
    with ThreadPoolExecutor(max_workers=workers) as ex:
        futures = {c.name: ex.submit(_run_one, c, resolve) for c in checks}
        for name in tqdm(futures, desc="verify", disable=not progress):
            res = futures[name].result()
            results[name] = res
            logger.info("%-28s %s  %s", name, "ok" if res.passed else "FAIL", res.detail)
    return VerifyReport(tuple(results[c.name] for c in checks))
