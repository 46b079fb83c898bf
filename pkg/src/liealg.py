# src/liealg.py
"""
Lie algebras as structure-constant tensors.

  • LieAlgebra / make_algebra : Jacobi-validated, antisymmetry canonical
  • catalog                   : so(p,q), the kinematical algebras, isp(2N)
  • commutator_matrix / num_invariants : A(g) and N(g) = dim g − rank A(g)
  • subalgebra                : closed generator selections
  • algebra_from_json / algebra_to_json / load_algebra

All indices are 0-based in the API; the JSON document is 1-based.
"""
from __future__ import annotations

import json
import logging
import pathlib
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational, eye, zeros

from .config import DEFAULT_RANK_OPTIONS, EPS_SYMBOL, RankOptions, T_SYMBOL
from .errors import BadParams, BadSignature, JacobiViolation, NotClosed, UnknownName
from .polyalg import MultiPoly, PolyMatrix, rank_over_function_field

__all__ = [
    "LieAlgebra",
    "SubalgebraSelection",
    "make_algebra",
    "jacobi_witness",
    "catalog",
    "catalog_names",
    "canonical_name",
    "kinematical_algebra",
    "so_algebra",
    "isp_algebra",
    "KINEMATICAL_PARAMETERS",
    "KINEMATICAL_NAMES",
    "levi_civita",
    "commutator_matrix",
    "num_invariants",
    "subalgebra",
    "rotation_indices",
    "algebra_from_json",
    "algebra_to_json",
    "load_algebra",
]

logger = logging.getLogger(__name__)

GeneratorRef = Union[int, str]
StructureKey = Tuple[int, int, int]


def _fraction(c) -> Fraction:
    if isinstance(c, bool):
        raise BadParams(f"not a rational coefficient: {c!r}")
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    if isinstance(c, str):
        try:
            return Fraction(c.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise BadParams(f"bad rational string {c!r}") from e
    if isinstance(c, Rational):
        return Fraction(int(c.p), int(c.q))
    raise BadParams(f"not a rational coefficient: {c!r}")


# ---------------------------------------------------------------------------
# LieAlgebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants C_ij^k stored sparsely for i < j.

    ``coordinates`` names the dual-basis variables x_i used by every
    polynomial built on this algebra (default: lower-cased generator names).
    """
    name: str
    generators: Tuple[str, ...]
    structure: Tuple[Tuple[StructureKey, Fraction], ...]
    coordinates: Tuple[str, ...]

    def __post_init__(self):
        n = len(self.generators)
        if n == 0:
            raise BadParams("a Lie algebra needs at least one generator")
        if len(set(self.generators)) != n:
            raise BadParams(f"duplicate generator names in {self.name}")
        if len(self.coordinates) != n or len(set(self.coordinates)) != n:
            raise BadParams(f"coordinates of {self.name} must be {n} distinct names")
        for c in self.coordinates:
            if c in (T_SYMBOL, EPS_SYMBOL):
                raise BadParams(f"coordinate name {c!r} is reserved")
        for (i, j, k), c in self.structure:
            if not (0 <= i < j < n and 0 <= k < n):
                raise IndexError(f"structure key {(i, j, k)} invalid for dimension {n}")
            if c == 0:
                raise BadParams("zero structure constants must not be stored")
        witness = _jacobi_witness(n, self.table)
        if witness is not None:
            i, j, k, l = witness
            g = self.generators
            raise JacobiViolation(
                witness,
                f"Jacobi identity fails in {self.name} for ({g[i]}, {g[j]}, {g[k]}) "
                f"on the {g[l]} component",
            )

    # ---- queries ----
    @property
    def dim(self) -> int:
        return len(self.generators)

    @cached_property
    def table(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        out: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
        for (i, j, k), c in self.structure:
            out.setdefault((i, j), {})[k] = c
        return out

    def bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        """[X_i, X_j] as a sparse vector k → C_ij^k."""
        if i < j:
            return dict(self.table.get((i, j), {}))
        if i > j:
            return {k: -c for k, c in self.table.get((j, i), {}).items()}
        return {}

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return self.bracket(i, j).get(k, Fraction(0))

    def constants(self) -> Dict[StructureKey, Fraction]:
        return dict(self.structure)

    def index(self, ref: GeneratorRef) -> int:
        if isinstance(ref, bool):
            raise IndexError(f"bad generator reference {ref!r}")
        if isinstance(ref, int):
            if not 0 <= ref < self.dim:
                raise IndexError(f"generator index {ref} out of range for dimension {self.dim}")
            return ref
        if ref in self.generators:
            return self.generators.index(ref)
        raise UnknownName(f"no generator named {ref!r} in {self.name}")

    def variable(self, ref: GeneratorRef) -> MultiPoly:
        return MultiPoly.var(self.coordinates[self.index(ref)], self.coordinates)

    def variables(self) -> Dict[str, MultiPoly]:
        return {c: MultiPoly.var(c, self.coordinates) for c in self.coordinates}

    def is_abelian(self) -> bool:
        return not self.structure

    def same_structure(self, other: "LieAlgebra") -> bool:
        return self.generators == other.generators and dict(self.structure) == dict(other.structure)

    def renamed(self, name: str) -> "LieAlgebra":
        return LieAlgebra(name, self.generators, self.structure, self.coordinates)

    def bracket_table(self) -> List[str]:
        lines = []
        g = self.generators
        for (i, j), vec in sorted(self.table.items()):
            rhs = " ".join(_signed_term(c, g[k], first=(n == 0))
                           for n, (k, c) in enumerate(sorted(vec.items())))
            lines.append(f"[{g[i]}, {g[j]}] = {rhs}")
        return lines


def _signed_term(c: Fraction, name: str, first: bool) -> str:
    mag = abs(c)
    body = name if mag == 1 else f"{mag}*{name}"
    if first:
        return f"-{body}" if c < 0 else body
    return f"- {body}" if c < 0 else f"+ {body}"


def _jacobi_witness(n: int, table: Mapping[Tuple[int, int], Mapping[int, Fraction]]
                    ) -> Optional[Tuple[int, int, int, int]]:
    def br(i: int, j: int) -> Mapping[int, Fraction]:
        if i < j:
            return table.get((i, j), {})
        if i > j:
            return {k: -c for k, c in table.get((j, i), {}).items()}
        return {}

    def br_vec(vec: Mapping[int, Fraction], k: int) -> Dict[int, Fraction]:
        out: Dict[int, Fraction] = defaultdict(Fraction)
        for m, c in vec.items():
            for l, d in br(m, k).items():
                out[l] += c * d
        return out

    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                total: Dict[int, Fraction] = defaultdict(Fraction)
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    for l, v in br_vec(br(a, b), c).items():
                        total[l] += v
                for l in sorted(total):
                    if total[l] != 0:
                        return (i, j, k, l)
    return None


def jacobi_witness(g: LieAlgebra) -> Optional[Tuple[int, int, int, int]]:
    """First (i, j, k, l) where the Jacobi sum has a nonzero X_l component."""
    return _jacobi_witness(g.dim, g.table)


def make_algebra(
    names: Sequence[str],
    brackets: Union[Mapping, Iterable],
    name: str = "custom",
    coordinates: Optional[Sequence[str]] = None,
) -> LieAlgebra:
    """Build a validated LieAlgebra.

    ``brackets`` is a mapping {(x, y): {z: c}} or an iterable of (x, y, {z: c});
    generator references are names or 0-based indices, coefficients are
    int / Fraction / "a/b" strings. [X_y, X_x] entries are folded into
    [X_x, X_y] with the sign flipped; giving a pair twice is an error.
    """
    names = tuple(names)
    n = len(names)
    if coordinates is None:
        coordinates = tuple(s.lower() for s in names)

    def ref(x: GeneratorRef) -> int:
        if isinstance(x, bool):
            raise IndexError(f"bad generator reference {x!r}")
        if isinstance(x, int):
            if not 0 <= x < n:
                raise IndexError(f"generator index {x} out of range for dimension {n}")
            return x
        if x in names:
            return names.index(x)
        raise UnknownName(f"no generator named {x!r}")

    items = brackets.items() if isinstance(brackets, Mapping) else (
        ((b[0], b[1]), b[2]) for b in brackets
    )
    acc: Dict[StructureKey, Fraction] = {}
    seen_pairs = set()
    for (x, y), terms in items:
        i, j = ref(x), ref(y)
        sign = 1
        if i > j:
            i, j, sign = j, i, -1
        coeffs = {ref(k): _fraction(c) for k, c in dict(terms).items()}
        if i == j:
            if any(c != 0 for c in coeffs.values()):
                raise BadParams(f"[{names[i]}, {names[i]}] must vanish")
            continue
        if (i, j) in seen_pairs:
            raise BadParams(f"bracket [{names[i]}, {names[j]}] given twice")
        seen_pairs.add((i, j))
        for k, c in coeffs.items():
            if c != 0:
                acc[(i, j, k)] = sign * c
    structure = tuple(sorted(acc.items()))
    return LieAlgebra(name, names, structure, tuple(coordinates))


# ---------------------------------------------------------------------------
# 运动学代数（Table 1）
# ---------------------------------------------------------------------------

def levi_civita(a: int, b: int, c: int) -> int:
    """ε^{abc} on indices 1..3 with ε^{123} = +1."""
    if len({a, b, c}) < 3:
        return 0
    return 1 if (a, b, c) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)) else -1


KINEMATICAL_GENERATORS = ("J1", "J2", "J3", "P1", "P2", "P3", "K1", "K2", "K3", "H")

# (a, b, c, d, e):  [H,P]=aK  [H,K]=bP  [P,P]=cJ  [K,K]=dJ  [P,K]=eH
KINEMATICAL_PARAMETERS: Dict[str, Tuple[int, int, int, int, int]] = {
    "so41": (1, 1, 1, -1, 1),
    "so32": (-1, 1, -1, -1, 1),
    "iso31": (0, 1, 0, -1, 1),
    "iso4": (1, 0, 1, 0, 1),
    "newton_plus": (1, 1, 0, 0, 0),
    "newton_minus": (-1, 1, 0, 0, 0),
    "carroll": (0, 0, 0, 0, 1),
    "galilei": (0, 1, 0, 0, 0),
    "static": (0, 0, 0, 0, 0),
}

KINEMATICAL_NAMES = tuple(KINEMATICAL_PARAMETERS)

_DISPLAY = {
    "so41": "so(4,1)",
    "so32": "so(3,2)",
    "iso31": "iso(3,1)",
    "iso4": "iso(4)",
    "newton_plus": "Ne+",
    "newton_minus": "Ne-",
    "carroll": "Carroll",
    "galilei": "Galilei",
    "static": "static",
}


def kinematical_algebra(key: str) -> LieAlgebra:
    if key not in KINEMATICAL_PARAMETERS:
        raise UnknownName(f"unknown kinematical algebra {key!r}")
    a, b, c, d, e = KINEMATICAL_PARAMETERS[key]
    J = lambda s: f"J{s}"
    P = lambda s: f"P{s}"
    K = lambda s: f"K{s}"
    brackets: Dict[Tuple[str, str], Dict[str, int]] = {}

    def put(x: str, y: str, z: str, coeff: int) -> None:
        if coeff:
            brackets.setdefault((x, y), {})[z] = coeff

    # 空间各向同性：J 以向量方式作用于 J, P, K；[J, H] = 0
    for alpha in (1, 2, 3):
        for beta in (1, 2, 3):
            for gamma in (1, 2, 3):
                eps = levi_civita(alpha, beta, gamma)
                if not eps:
                    continue
                if alpha < beta:
                    put(J(alpha), J(beta), J(gamma), eps)
                    put(P(alpha), P(beta), J(gamma), c * eps)
                    put(K(alpha), K(beta), J(gamma), d * eps)
                put(J(alpha), P(beta), P(gamma), eps)
                put(J(alpha), K(beta), K(gamma), eps)
    for alpha in (1, 2, 3):
        put("H", P(alpha), K(alpha), a)
        put("H", K(alpha), P(alpha), b)
        put(P(alpha), K(alpha), "H", e)
    return make_algebra(KINEMATICAL_GENERATORS, brackets, name=key)


# ---------------------------------------------------------------------------
# so(p,q)：E_{μν} 基
# ---------------------------------------------------------------------------

def so_algebra(p: int, q: int) -> LieAlgebra:
    """so(p,q) in the basis E_{μν} (μ < ν), metric diag(1^p, (−1)^q)."""
    if not isinstance(p, int) or not isinstance(q, int) or p < 0 or q < 0 or p + q < 3:
        raise BadSignature(f"so(p,q) needs p, q >= 0 and p+q >= 3, got ({p}, {q})")
    N = p + q
    g = [1] * p + [-1] * q
    pairs = [(m, n) for m in range(1, N + 1) for n in range(m + 1, N + 1)]
    index = {pr: i for i, pr in enumerate(pairs)}
    names = tuple(f"E{m}_{n}" for m, n in pairs)

    def e(m: int, n: int) -> Dict[int, int]:
        if m == n:
            return {}
        if m < n:
            return {index[(m, n)]: 1}
        return {index[(n, m)]: -1}

    def metric(a: int, b: int) -> int:
        return g[a - 1] if a == b else 0

    brackets = {}
    for x, (mu, nu) in enumerate(pairs):
        for y in range(x + 1, len(pairs)):
            lam, sig = pairs[y]
            vec: Dict[int, int] = defaultdict(int)
            for coeff, (s, t) in (
                (metric(mu, lam), (nu, sig)),
                (metric(mu, sig), (lam, nu)),
                (-metric(nu, lam), (mu, sig)),
                (-metric(nu, sig), (lam, mu)),
            ):
                if coeff:
                    for k, v in e(s, t).items():
                        vec[k] += coeff * v
            vec = {k: v for k, v in vec.items() if v}
            if vec:
                brackets[(x, y)] = vec
    return make_algebra(names, brackets, name=f"so({p},{q})")


# ---------------------------------------------------------------------------
# Isp(2N,R) = sp(2N,R) ⋉ R^{2N}
# ---------------------------------------------------------------------------

def _unit(n: int, r: int, c: int):
    m = zeros(n, n)
    m[r, c] = 1
    return m


def isp_generators(N: int) -> List[Tuple[str, str]]:
    """(generator, coordinate) names in basis order X_{i,j}, X_{-i,j}, X_{i,-j}, P_i, Q_i."""
    out = []
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            out.append((f"X{i}_{j}", f"x{i}_{j}"))
    for i in range(1, N + 1):
        for j in range(i, N + 1):
            out.append((f"Xm{i}_{j}", f"xm{i}_{j}"))
    for i in range(1, N + 1):
        for j in range(i, N + 1):
            out.append((f"X{i}_m{j}", f"x{i}_m{j}"))
    out += [(f"P{i}", f"p{i}") for i in range(1, N + 1)]
    out += [(f"Q{i}", f"q{i}") for i in range(1, N + 1)]
    return out


def isp_coefficient_matrices(N: int) -> List[Matrix]:
    """M_b with X(x) = Σ_b x_b M_b the generic element of sp(2N) (gl block A,
    upper block −B, lower block C, lower-right −A^T)."""
    n = 2 * N
    mats = []
    for i in range(N):
        for j in range(N):
            mats.append(_unit(n, i, j) - _unit(n, N + j, N + i))
    for i in range(N):
        for j in range(i, N):
            m = -_unit(n, i, N + j)
            if i != j:
                m = m - _unit(n, j, N + i)
            mats.append(m)
    for i in range(N):
        for j in range(i, N):
            m = _unit(n, N + i, j)
            if i != j:
                m = m + _unit(n, N + j, i)
            mats.append(m)
    return mats


@lru_cache(maxsize=None)
def isp_algebra(N: int) -> LieAlgebra:
    """Isp(2N,R) from its matrix realization.

    The sp generators are the trace-dual basis E_a of the coefficient
    matrices (tr(E_a M_b) = δ_ab), so x_b is the coordinate dual to E_b and
    X(x) above is the coadjoint point. Translations: P_i ↔ e_{N+i},
    Q_i ↔ −e_i, with coordinates read off through J = [[0, I], [−I, 0]].
    """
    if not isinstance(N, int) or N < 2:
        raise BadParams(f"isp(2N) needs N >= 2, got {N!r}")
    n = 2 * N
    names = isp_generators(N)
    mats = isp_coefficient_matrices(N)
    s = len(mats)
    gram = Matrix(s, s, lambda a, b: (mats[a] * mats[b]).trace())
    ginv = gram.inv()
    dual = []
    for a in range(s):
        acc = zeros(n, n)
        for b in range(s):
            if ginv[a, b] != 0:
                acc += ginv[a, b] * mats[b]
        dual.append(acc)
    Jform = zeros(n, n)
    Jform[:N, N:] = eye(N)
    Jform[N:, :N] = -eye(N)
    vectors = []
    for i in range(N):
        v = zeros(n, 1)
        v[N + i] = 1
        vectors.append(v)
    for i in range(N):
        v = zeros(n, 1)
        v[i] = -1
        vectors.append(v)

    brackets: Dict[Tuple[int, int], Dict[int, Fraction]] = {}
    for a in range(s):
        for b in range(a + 1, s):
            comm = dual[a] * dual[b] - dual[b] * dual[a]
            vec = {}
            for k in range(s):
                c = (comm * mats[k]).trace()
                if c != 0:
                    vec[k] = _fraction(c)
            if vec:
                brackets[(a, b)] = vec
        for r, v in enumerate(vectors):
            coords = Jform * (dual[a] * v)
            vec = {}
            for t in range(n):
                if coords[t] != 0:
                    vec[s + t] = _fraction(coords[t])
            if vec:
                brackets[(a, s + r)] = vec
    return make_algebra(
        [g for g, _ in names], brackets, name=f"isp({n})", coordinates=[c for _, c in names]
    )


# ---------------------------------------------------------------------------
# 目录（catalog）
# ---------------------------------------------------------------------------

_ALIASES = {
    "so32": "so32", "so(3,2)": "so32", "ads": "so32", "antidesitter": "so32",
    "so41": "so41", "so(4,1)": "so41", "ds": "so41", "desitter": "so41",
    "iso31": "iso31", "iso(3,1)": "iso31", "poincare": "iso31",
    "iso4": "iso4", "iso(4)": "iso4", "euclidean": "iso4",
    "newton_plus": "newton_plus", "ne+": "newton_plus", "newton+": "newton_plus",
    "newton_minus": "newton_minus", "ne-": "newton_minus", "newton-": "newton_minus",
    "carroll": "carroll",
    "galilei": "galilei",
    "static": "static",
    "isp4": "isp4", "isp(4)": "isp4",
}

_SO_RE = re.compile(r"^so\((\d+),(\d+)\)$")
_SO_SHORT_RE = re.compile(r"^so(\d+)_(\d+)$")
_ISP_RE = re.compile(r"^isp\(?(\d+)\)?$")


def canonical_name(name: str) -> str:
    """Normalize a user-facing algebra name to its catalog key."""
    key = name.strip().lower().replace(" ", "")
    if key in _ALIASES:
        return _ALIASES[key]
    m = _SO_RE.match(key) or _SO_SHORT_RE.match(key)
    if m:
        return f"so({int(m.group(1))},{int(m.group(2))})"
    m = _ISP_RE.match(key)
    if m:
        return f"isp{int(m.group(1))}"
    raise UnknownName(f"unknown algebra {name!r}")


def catalog_names() -> List[str]:
    return list(KINEMATICAL_NAMES) + ["isp4", "so(p,q)"]


def display_name(key: str) -> str:
    return _DISPLAY.get(key, key)


@lru_cache(maxsize=None)
def _catalog_cached(key: str) -> LieAlgebra:
    if key in KINEMATICAL_PARAMETERS:
        return kinematical_algebra(key)
    m = _SO_RE.match(key)
    if m:
        return so_algebra(int(m.group(1)), int(m.group(2)))
    if key.startswith("isp"):
        two_n = int(key[3:])
        if two_n % 2:
            raise BadParams(f"isp(2N) needs an even matrix size, got {two_n}")
        return isp_algebra(two_n // 2)
    raise UnknownName(f"unknown algebra {key!r}")


def catalog(name: str, **params) -> LieAlgebra:
    """Look up a catalog algebra.

    ``catalog("so", p=2, q=1)`` and ``catalog("isp", N=3)`` take parameters;
    named forms such as "so(3,2)", "isp(6)" or the ASCII aliases do not.
    so(3,2) and so(4,1) resolve to the kinematical (J, P, K, H) basis.
    """
    key = name.strip().lower()
    if key == "so":
        try:
            return so_algebra(int(params["p"]), int(params["q"]))
        except KeyError as e:
            raise BadParams("catalog('so') needs p and q") from e
    if key == "isp":
        if "N" not in params:
            raise BadParams("catalog('isp') needs N")
        return isp_algebra(int(params["N"]))
    if params:
        raise BadParams(f"catalog({name!r}) takes no parameters")
    return _catalog_cached(canonical_name(name))


def rotation_indices(g: LieAlgebra) -> Tuple[int, ...]:
    """Indices of J1, J2, J3 (the so(3) of a kinematical algebra)."""
    try:
        return tuple(g.index(n) for n in ("J1", "J2", "J3"))
    except UnknownName as e:
        raise BadParams(f"{g.name} has no rotation generators J1..J3") from e


# ---------------------------------------------------------------------------
# A(g) 与不变量个数
# ---------------------------------------------------------------------------

def commutator_matrix(g: LieAlgebra) -> PolyMatrix:
    """A(g)_{ij} = Σ_k C_ij^k x_k."""
    xs = g.variables()
    zero = MultiPoly.zero(g.coordinates)
    rows = []
    for i in range(g.dim):
        row = []
        for j in range(g.dim):
            entry = zero
            for k, c in g.bracket(i, j).items():
                entry = entry + xs[g.coordinates[k]] * c
            row.append(entry)
        rows.append(tuple(row))
    return PolyMatrix(tuple(rows))


@lru_cache(maxsize=256)
def num_invariants(g: LieAlgebra, options: RankOptions = DEFAULT_RANK_OPTIONS) -> int:
    """N(g) = dim g − rank A(g)."""
    rank = rank_over_function_field(commutator_matrix(g), options)
    logger.debug("rank A(%s) = %d", g.name, rank)
    return g.dim - rank


# ---------------------------------------------------------------------------
# 子代数
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubalgebraSelection:
    parent: LieAlgebra
    indices: Tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.indices)

    @property
    def generators(self) -> Tuple[str, ...]:
        return tuple(self.parent.generators[i] for i in self.indices)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(self.parent.coordinates[i] for i in self.indices)

    @property
    def complement_variables(self) -> Tuple[str, ...]:
        chosen = set(self.indices)
        return tuple(c for i, c in enumerate(self.parent.coordinates) if i not in chosen)

    def is_improper(self) -> bool:
        return self.dim == self.parent.dim

    def as_algebra(self) -> LieAlgebra:
        """The subalgebra on its own, generator and coordinate names kept."""
        if not self.indices:
            raise BadParams("the trivial subalgebra has no generators")
        pos = {old: new for new, old in enumerate(self.indices)}
        brackets = {}
        for a, i in enumerate(self.indices):
            for j in self.indices[a + 1:]:
                vec = {pos[k]: c for k, c in self.parent.bracket(i, j).items()}
                if vec:
                    brackets[(pos[i], pos[j])] = vec
        return make_algebra(
            self.generators, brackets, name=f"{self.parent.name}|{','.join(self.generators)}",
            coordinates=self.variables,
        )


def subalgebra(g: LieAlgebra, indices: Iterable[GeneratorRef]) -> SubalgebraSelection:
    chosen = tuple(sorted({g.index(r) for r in indices}))
    members = set(chosen)
    for a, i in enumerate(chosen):
        for j in chosen[a + 1:]:
            for k in g.bracket(i, j):
                if k not in members:
                    gen = g.generators
                    raise NotClosed(
                        (i, j, k),
                        f"[{gen[i]}, {gen[j]}] has a {gen[k]} component outside the selection",
                    )
    return SubalgebraSelection(g, chosen)


# ---------------------------------------------------------------------------
# JSON 文档
# ---------------------------------------------------------------------------

def algebra_from_json(doc: Union[str, Mapping]) -> LieAlgebra:
    """Parse the algebra-definition document (1-based indices)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise BadParams(f"algebra document is not valid JSON: {e}") from e
    if not isinstance(doc, Mapping):
        raise BadParams("algebra document must be a JSON object")
    try:
        names = list(doc["generators"])
        name = str(doc.get("name", "custom"))
        brackets = []
        for entry in doc.get("brackets", []):
            i = int(entry["i"]) - 1
            j = int(entry["j"]) - 1
            terms = {int(t["k"]) - 1: _fraction(str(t["c"])) for t in entry.get("terms", [])}
            brackets.append((i, j, terms))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, BadParams):
            raise
        raise BadParams(f"malformed algebra document: {e}") from e
    coords = doc.get("coordinates")
    return make_algebra(names, brackets, name=name, coordinates=coords)


def algebra_to_json(g: LieAlgebra) -> Dict:
    brackets = []
    for (i, j), vec in sorted(g.table.items()):
        brackets.append({
            "i": i + 1,
            "j": j + 1,
            "terms": [{"k": k + 1, "c": str(c)} for k, c in sorted(vec.items())],
        })
    doc = {"name": g.name, "generators": list(g.generators), "brackets": brackets}
    if g.coordinates != tuple(s.lower() for s in g.generators):
        doc["coordinates"] = list(g.coordinates)
    return doc


def load_algebra(path: Union[str, pathlib.Path]) -> LieAlgebra:
    p = pathlib.Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise BadParams(f"cannot read algebra file {p}: {e}") from e
    return algebra_from_json(text)
