# src/polyalg.py
"""
Exact multivariate polynomials over Q and linear algebra over the
polynomial ring.

  • MultiPoly            : immutable polynomial in named commuting variables
  • PolyMatrix           : square matrix of MultiPoly sharing one universe
  • differentiate / substitute / evaluate / collect
  • determinant          : fraction-free (Bareiss) with cofactor fallback
  • charpoly             : det(M − T·Id) in the monic sign convention
  • rank_over_function_field : generic rank, symbolic and evaluated

The arithmetic kernel is sympy's sparse ``PolyRing`` over ``QQ`` with the
graded-lexicographic order, so the term maps are canonical by construction.
"""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import Symbol, sympify
from sympy.core.sympify import SympifyError
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, PolyRing

from .config import DEFAULT_RANK_OPTIONS, RankOptions, T_SYMBOL
from .errors import BadParams, RankMismatch

__all__ = [
    "Scalar",
    "universe",
    "MultiPoly",
    "PolyMatrix",
    "differentiate",
    "substitute",
    "evaluate",
    "collect",
    "normalized",
    "determinant",
    "charpoly",
    "monic_normalize",
    "shift_diagonal",
    "rank_over_function_field",
    "numeric_rank",
    "numeric_charpoly",
    "random_point",
    "to_fraction",
]

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


# ---------------------------------------------------------------------------
# 变量全集（universe）与系数转换
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def universe(names: Tuple[str, ...]) -> PolyRing:
    """Polynomial ring over QQ in the given variable names, grlex order."""
    assert len(names) > 0, "a polynomial universe needs at least one variable"
    assert len(set(names)) == len(names), f"duplicate variable names: {names}"
    return PolyRing(tuple(Symbol(n) for n in names), QQ, grlex)


@lru_cache(maxsize=None)
def _names(ring: PolyRing) -> Tuple[str, ...]:
    return tuple(s.name for s in ring.symbols)


def _merge(a: Sequence[str], b: Sequence[str]) -> Tuple[str, ...]:
    out = list(a)
    seen = set(a)
    for n in b:
        if n not in seen:
            seen.add(n)
            out.append(n)
    return tuple(out)


def _to_qq(x):
    if isinstance(x, bool):
        return None
    if isinstance(x, int):
        return QQ(x)
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if QQ.of_type(x):
        return x
    return None


def to_fraction(c) -> Fraction:
    """QQ element (or int/Fraction) → fractions.Fraction."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    return Fraction(int(QQ.numer(c)), int(QQ.denom(c)))


def _lift(p: PolyElement, target: PolyRing) -> PolyElement:
    """Re-express p in a ring whose variables contain p's variables."""
    if p.ring is target:
        return p
    pos = {n: i for i, n in enumerate(_names(target))}
    idx = [pos[n] for n in _names(p.ring)]
    k = target.ngens
    terms = {}
    for monom, c in p.items():
        m = [0] * k
        for i, e in enumerate(monom):
            if e:
                m[idx[i]] = e
        terms[tuple(m)] = c
    return target.from_dict(terms)


# ---------------------------------------------------------------------------
# MultiPoly
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MultiPoly:
    """Exact polynomial over Q in named variables.

    Operands over different universes are aligned by variable name; the
    result lives in the merged universe (left operand's order first).
    """
    element: PolyElement

    # ---- constructors ----
    @classmethod
    def var(cls, name: str, variables: Optional[Sequence[str]] = None) -> "MultiPoly":
        names = tuple(variables) if variables else (name,)
        if name not in names:
            names = names + (name,)
        ring = universe(names)
        return cls(ring.gens[names.index(name)])

    @classmethod
    def constant(cls, value: Scalar, variables: Sequence[str]) -> "MultiPoly":
        ring = universe(tuple(variables))
        c = _to_qq(value)
        if c is None:
            raise TypeError(f"not a rational scalar: {value!r}")
        return cls(ring.ground_new(c))

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "MultiPoly":
        return cls(universe(tuple(variables)).zero)

    @classmethod
    def from_terms(cls, variables: Sequence[str],
                   terms: Mapping[Tuple[int, ...], Scalar]) -> "MultiPoly":
        ring = universe(tuple(variables))
        data = {}
        for monom, c in terms.items():
            assert len(monom) == ring.ngens, "exponent vector length mismatch"
            q = _to_qq(c)
            if q is None:
                raise TypeError(f"not a rational scalar: {c!r}")
            if q:
                data[tuple(monom)] = q
        return cls(ring.from_dict(data))

    @classmethod
    def parse(cls, text: str, variables: Sequence[str]) -> "MultiPoly":
        """Read the printed form back (``^`` and ``**`` both accepted)."""
        names = tuple(variables)
        ring = universe(names)
        local = {n: Symbol(n) for n in names}
        try:
            expr = sympify(text.replace("^", "**"), locals=local)
            return cls(ring.from_expr(expr))
        except (SympifyError, ValueError, TypeError) as e:
            raise BadParams(f"cannot parse polynomial {text!r}: {e}") from e

    # ---- views ----
    @property
    def ring(self) -> PolyRing:
        return self.element.ring

    @property
    def variables(self) -> Tuple[str, ...]:
        return _names(self.element.ring)

    def terms(self) -> Dict[Tuple[int, ...], Fraction]:
        return {m: to_fraction(c) for m, c in self.element.terms()}

    def named_terms(self) -> Dict[Tuple[Tuple[str, int], ...], Fraction]:
        names = self.variables
        out = {}
        for m, c in self.element.items():
            key = tuple(sorted((names[i], e) for i, e in enumerate(m) if e))
            out[key] = to_fraction(c)
        return out

    def __len__(self) -> int:
        return len(self.element)

    def __bool__(self) -> bool:
        return bool(self.element)

    def is_zero(self) -> bool:
        return not self.element

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.element.keys())

    def constant_value(self) -> Fraction:
        return to_fraction(self.element.coeff(1)) if self.element else Fraction(0)

    def support(self) -> frozenset:
        names = self.variables
        used = set()
        for m in self.element.keys():
            for i, e in enumerate(m):
                if e:
                    used.add(names[i])
        return frozenset(used)

    def degree(self, v: Optional[str] = None) -> int:
        """Total degree, or degree in v. The zero polynomial has degree -1."""
        if not self.element:
            return -1
        if v is None:
            return max(sum(m) for m in self.element.keys())
        if v not in self.variables:
            return 0
        i = self.variables.index(v)
        return max(m[i] for m in self.element.keys())

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.element.keys()}
        return len(degs) <= 1

    def leading_coefficient(self) -> Fraction:
        if not self.element:
            return Fraction(0)
        return to_fraction(self.element.terms()[0][1])

    def extend(self, variables: Sequence[str]) -> "MultiPoly":
        ring = universe(_merge(self.variables, variables))
        return MultiPoly(_lift(self.element, ring))

    # ---- arithmetic ----
    def _pair(self, other) -> Optional[Tuple[PolyElement, PolyElement]]:
        if isinstance(other, MultiPoly):
            if other.element.ring is self.element.ring:
                return self.element, other.element
            ring = universe(_merge(self.variables, other.variables))
            return _lift(self.element, ring), _lift(other.element, ring)
        c = _to_qq(other)
        if c is None:
            return None
        return self.element, self.element.ring.ground_new(c)

    def __add__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return MultiPoly(pr[0] + pr[1])

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return MultiPoly(pr[0] - pr[1])

    def __rsub__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return MultiPoly(pr[1] - pr[0])

    def __mul__(self, other):
        pr = self._pair(other)
        if pr is None:
            return NotImplemented
        return MultiPoly(pr[0] * pr[1])

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        c = _to_qq(other)
        if c is None:
            return NotImplemented
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return MultiPoly(self.element * (QQ.one / c))

    def __neg__(self):
        return MultiPoly(-self.element)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise BadParams(f"exponent must be a nonnegative integer, got {k!r}")
        return MultiPoly(self.element ** k)

    def exquo(self, other: "MultiPoly") -> "MultiPoly":
        a, b = self._pair(other)
        return MultiPoly(a.exquo(b))

    # ---- comparison ----
    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            if other.element.ring is self.element.ring:
                return self.element == other.element
            return self.named_terms() == other.named_terms()
        c = _to_qq(other)
        if c is None:
            return NotImplemented
        return self.element == self.element.ring.ground_new(c)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(frozenset(self.named_terms().items()))

    # ---- printing ----
    def __str__(self) -> str:
        if not self.element:
            return "0"
        names = self.variables
        pieces: List[str] = []
        for monom, coeff in self.element.terms():
            num = int(QQ.numer(coeff))
            den = int(QQ.denom(coeff))
            negative = num < 0
            num = abs(num)
            mono = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(names, monom) if e
            )
            coef = str(num) if den == 1 else f"{num}/{den}"
            if mono:
                body = mono if (num == 1 and den == 1) else f"{coef}*{mono}"
            else:
                body = coef
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f" - {body}" if negative else f" + {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def _as_poly(x, variables: Sequence[str]) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, str):
        return MultiPoly.parse(x, variables)
    return MultiPoly.constant(x, variables)


# ---------------------------------------------------------------------------
# 微分、代入、求值
# ---------------------------------------------------------------------------

def differentiate(p: MultiPoly, v: str) -> MultiPoly:
    """Formal partial derivative; a variable outside the universe gives 0."""
    if v not in p.variables:
        return MultiPoly(p.ring.zero)
    return MultiPoly(p.element.diff(p.ring.gens[p.variables.index(v)]))


def substitute(p: MultiPoly, bindings: Mapping[str, Union[MultiPoly, Scalar]]) -> MultiPoly:
    """Simultaneous substitution v → bindings[v]."""
    active = {v: b for v, b in bindings.items() if v in p.variables}
    if not active:
        return p
    names = p.variables
    for b in active.values():
        if isinstance(b, MultiPoly):
            names = _merge(names, b.variables)
    ring = universe(names)
    pos = {n: i for i, n in enumerate(names)}

    images: List[PolyElement] = []
    for n in p.variables:
        if n in active:
            b = active[n]
            if isinstance(b, MultiPoly):
                images.append(_lift(b.element, ring))
            else:
                c = _to_qq(b)
                if c is None:
                    raise TypeError(f"cannot substitute {b!r} for {n}")
                images.append(ring.ground_new(c))
        else:
            images.append(ring.gens[pos[n]])

    powers: Dict[Tuple[int, int], PolyElement] = {}

    def pw(i: int, e: int) -> PolyElement:
        key = (i, e)
        if key not in powers:
            powers[key] = images[i] ** e
        return powers[key]

    result = ring.zero
    for monom, c in p.element.items():
        term = ring.ground_new(c)
        for i, e in enumerate(monom):
            if e:
                term = term * pw(i, e)
                if not term:
                    break
        if term:
            result += term
    return MultiPoly(result)


def _eval_element(el: PolyElement, values: Sequence) -> object:
    total = QQ.zero
    for monom, c in el.items():
        t = c
        for i, e in enumerate(monom):
            if e:
                t = t * values[i] ** e
        total += t
    return total


def evaluate(p: MultiPoly, point: Mapping[str, Scalar]) -> Fraction:
    missing = p.support() - set(point)
    if missing:
        raise BadParams(f"evaluation point misses variables {sorted(missing)}")
    values = [_to_qq(point.get(n, 0)) for n in p.variables]
    return to_fraction(_eval_element(p.element, values))


def collect(p: MultiPoly, v: str) -> Dict[int, MultiPoly]:
    """Coefficients of p by power of v (v removed from each coefficient)."""
    if v not in p.variables:
        return {0: p} if not p.is_zero() else {}
    i = p.variables.index(v)
    groups: Dict[int, dict] = {}
    for monom, c in p.element.items():
        k = monom[i]
        m = list(monom)
        m[i] = 0
        groups.setdefault(k, {})[tuple(m)] = c
    return {k: MultiPoly(p.ring.from_dict(d)) for k, d in groups.items()}


def normalized(p: MultiPoly, monic: bool = False) -> MultiPoly:
    """Scale p so its leading grlex coefficient is positive (or exactly 1)."""
    if p.is_zero():
        return p
    lc = p.leading_coefficient()
    if monic:
        return p / lc
    return -p if lc < 0 else p


# ---------------------------------------------------------------------------
# PolyMatrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolyMatrix:
    """Square matrix of MultiPoly, all entries in one universe (0-based)."""
    rows: Tuple[Tuple[MultiPoly, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if n == 0:
            raise BadParams("PolyMatrix needs at least one row")
        for r in self.rows:
            if len(r) != n:
                raise BadParams(f"PolyMatrix must be square, got a row of length {len(r)} for size {n}")
        names: Tuple[str, ...] = ()
        for r in self.rows:
            for e in r:
                names = _merge(names, e.variables)
        ring = universe(names)
        aligned = tuple(tuple(MultiPoly(_lift(e.element, ring)) for e in r) for r in self.rows)
        object.__setattr__(self, "rows", aligned)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Union[MultiPoly, Scalar, str]]],
                  variables: Sequence[str]) -> "PolyMatrix":
        return cls(tuple(tuple(_as_poly(x, variables) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int, variables: Sequence[str]) -> "PolyMatrix":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], variables)

    @classmethod
    def zero(cls, n: int, variables: Sequence[str]) -> "PolyMatrix":
        return cls.from_rows([[0] * n for _ in range(n)], variables)

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.rows[0][0].variables

    @property
    def ring(self) -> PolyRing:
        return self.rows[0][0].ring

    def __getitem__(self, ij: Tuple[int, int]) -> MultiPoly:
        i, j = ij
        return self.rows[i][j]

    def elements(self) -> List[List[PolyElement]]:
        return [[e.element for e in r] for r in self.rows]

    def map(self, fn: Callable[[MultiPoly], MultiPoly]) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(fn(e) for e in r) for r in self.rows))

    def substitute(self, bindings: Mapping[str, Union[MultiPoly, Scalar]]) -> "PolyMatrix":
        return self.map(lambda e: substitute(e, bindings))

    def transpose(self) -> "PolyMatrix":
        n = self.size
        return PolyMatrix(tuple(tuple(self.rows[j][i] for j in range(n)) for i in range(n)))

    def minor(self, row: int, col: int) -> "PolyMatrix":
        """Delete one row and one column (0-based)."""
        n = self.size
        if not (0 <= row < n and 0 <= col < n):
            raise IndexError(f"minor ({row}, {col}) out of range for size {n}")
        if n == 1:
            raise BadParams("a 1x1 matrix has no minor")
        return PolyMatrix(tuple(
            tuple(e for j, e in enumerate(r) if j != col)
            for i, r in enumerate(self.rows) if i != row
        ))

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_size(other)
        return PolyMatrix(tuple(tuple(a + b for a, b in zip(ra, rb))
                                for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_size(other)
        return PolyMatrix(tuple(tuple(a - b for a, b in zip(ra, rb))
                                for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self) -> "PolyMatrix":
        return self.map(lambda e: -e)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            self._check_size(other)
            n = self.size
            a = self.rows
            b = other.rows
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = a[i][0] * b[0][j]
                    for k in range(1, n):
                        if not a[i][k].is_zero() and not b[k][j].is_zero():
                            acc = acc + a[i][k] * b[k][j]
                    row.append(acc)
                out.append(tuple(row))
            return PolyMatrix(tuple(out))
        if isinstance(other, MultiPoly) or _to_qq(other) is not None:
            return self.map(lambda e: e * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, MultiPoly) or _to_qq(other) is not None:
            return self.map(lambda e: other * e)
        return NotImplemented

    def commutator(self, other: "PolyMatrix") -> "PolyMatrix":
        return self * other - other * self

    def _check_size(self, other: "PolyMatrix") -> None:
        if self.size != other.size:
            raise BadParams(f"size mismatch: {self.size} vs {other.size}")

    def is_zero(self) -> bool:
        return all(e.is_zero() for r in self.rows for e in r)

    def is_antisymmetric(self) -> bool:
        return self.transpose() == -self

    def evaluate(self, point: Mapping[str, Scalar]) -> List[List[Fraction]]:
        return [[evaluate(e, point) for e in r] for r in self.rows]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.size == other.size and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(self.rows)

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)


# ---------------------------------------------------------------------------
# 行列式：Bareiss 无分式消元 + 余子式展开
# ---------------------------------------------------------------------------

def _bareiss(a: List[List[PolyElement]], ring: PolyRing) -> PolyElement:
    n = len(a)
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        # 选项数最少的非零主元，抑制中间膨胀
        best = None
        for r in range(k, n):
            e = a[r][k]
            if e and (best is None or len(e) < len(a[best][k])):
                best = r
        if best is None:
            return ring.zero
        if best != k:
            a[k], a[best] = a[best], a[k]
            sign = -sign
        piv = a[k][k]
        for i in range(k + 1, n):
            f = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - f * a[k][j]).exquo(prev)
        prev = piv
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def _cofactor(a: List[List[PolyElement]], ring: PolyRing) -> PolyElement:
    n = len(a)
    memo: Dict[Tuple[int, Tuple[int, ...]], PolyElement] = {}

    def expand(row: int, cols: Tuple[int, ...]) -> PolyElement:
        if row == n - 1:
            return a[row][cols[0]]
        key = (row, cols)
        if key in memo:
            return memo[key]
        total = ring.zero
        for idx, c in enumerate(cols):
            if a[row][c]:
                sub = expand(row + 1, cols[:idx] + cols[idx + 1:])
                if sub:
                    term = a[row][c] * sub
                    total = total + term if idx % 2 == 0 else total - term
        memo[key] = total
        return total

    return expand(0, tuple(range(n)))


def determinant(M: PolyMatrix, method: str = "bareiss") -> MultiPoly:
    """Exact determinant.

    method: "bareiss" (fraction-free elimination; falls back to cofactor
    expansion for n ≤ 5 if an exact division ever fails) or "cofactor".
    """
    ring = M.ring
    a = M.elements()
    if method == "cofactor":
        return MultiPoly(_cofactor(a, ring))
    if method != "bareiss":
        raise BadParams(f"unknown determinant method: {method}")
    try:
        return MultiPoly(_bareiss(a, ring))
    except ExactQuotientFailed:
        if M.size > 5:
            raise
        logger.warning("Bareiss division failed on a %dx%d matrix; using cofactor expansion", M.size, M.size)
        return MultiPoly(_cofactor(M.elements(), ring))


def _pure_power_coefficients(p: MultiPoly, T: str) -> Dict[int, Fraction]:
    """Coefficients of the terms c·T^k with no other variable."""
    if T not in p.variables:
        c = p.constant_value()
        return {0: c} if c else {}
    i = p.variables.index(T)
    out = {}
    for monom, c in p.element.items():
        if all(e == 0 for j, e in enumerate(monom) if j != i):
            out[monom[i]] = to_fraction(c)
    return out


def monic_normalize(raw: MultiPoly, T: str, n: int, sign: Optional[int] = None) -> MultiPoly:
    """Bring a determinant expression into the displayed monic convention.

    If raw carries a pure power of T, divide by the coefficient of the highest
    one. Otherwise the T^n term cancelled inside the determinant (T-dependent
    matrices, composite recipes): return T^n + sign·raw, where sign defaults
    to (−1)^n.
    """
    pure = _pure_power_coefficients(raw, T)
    if pure:
        top = max(pure)
        return raw / pure[top]
    s = sign if sign is not None else (-1) ** n
    t = MultiPoly.var(T, raw.variables)
    return t ** n + raw * s


def shift_diagonal(M: PolyMatrix, T: str = T_SYMBOL) -> PolyMatrix:
    """M − T·Id in the universe of M extended by T."""
    t = MultiPoly.var(T, _merge(M.variables, (T,)))
    return PolyMatrix(tuple(
        tuple((e - t) if i == j else e for j, e in enumerate(r))
        for i, r in enumerate(M.rows)
    ))


def charpoly(M: PolyMatrix, T: str = T_SYMBOL, sign: Optional[int] = None,
             method: str = "bareiss") -> MultiPoly:
    """det(M − T·Id), normalized as in ``monic_normalize``.

    T may already occur in the entries of M; the determinant is then taken
    in the ring containing T.
    """
    raw = determinant(shift_diagonal(M, T), method=method)
    return monic_normalize(raw, T, M.size, sign)


# ---------------------------------------------------------------------------
# 泛秩（generic rank）
# ---------------------------------------------------------------------------

def random_point(variables: Sequence[str], seed: int, bound: int = 10_000) -> Dict[str, Fraction]:
    """Deterministic pseudo-random rational point, |num|, den ≤ bound."""
    rng = random.Random(seed)
    point = {}
    for n in variables:
        num = rng.randint(-bound, bound) or 1
        den = rng.randint(1, bound)
        point[n] = Fraction(num, den)
    return point


def numeric_rank(rows: Sequence[Sequence[Scalar]]) -> int:
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        return 0
    dm = DomainMatrix([[_to_qq(x) for x in r] for r in rows], (m, n), QQ)
    return dm.rank()


def numeric_charpoly(rows: Sequence[Sequence[Scalar]]) -> List[Fraction]:
    """Coefficients of det(λ·Id − A), highest power first."""
    n = len(rows)
    dm = DomainMatrix([[_to_qq(x) for x in r] for r in rows], (n, n), QQ)
    return [to_fraction(c) for c in dm.charpoly()]


def _symbolic_rank(a: List[List[PolyElement]], ring: PolyRing) -> int:
    """Fraction-free elimination with full pivoting over Q[x]."""
    m = len(a)
    n = len(a[0])
    active_rows = list(range(m))
    active_cols = list(range(n))
    prev = ring.one
    rank = 0
    while active_rows and active_cols:
        best = None
        best_len = 0
        for i in active_rows:
            for j in active_cols:
                e = a[i][j]
                if e and (best is None or len(e) < best_len):
                    best, best_len = (i, j), len(e)
                    if best_len == 1:
                        break
            if best is not None and best_len == 1:
                break
        if best is None:
            break
        pi, pj = best
        piv = a[pi][pj]
        active_rows.remove(pi)
        active_cols.remove(pj)
        for i in active_rows:
            f = a[i][pj]
            for j in active_cols:
                a[i][j] = (piv * a[i][j] - f * a[pi][j]).exquo(prev)
        prev = piv
        rank += 1
    return rank


def _common_rows(M) -> Tuple[List[List[PolyElement]], PolyRing]:
    if isinstance(M, PolyMatrix):
        return M.elements(), M.ring
    rows = [list(r) for r in M]
    names: Tuple[str, ...] = ()
    for r in rows:
        for e in r:
            names = _merge(names, e.variables)
    ring = universe(names)
    return [[_lift(e.element, ring) for e in r] for r in rows], ring


def rank_over_function_field(M, options: RankOptions = DEFAULT_RANK_OPTIONS) -> int:
    """Generic rank of a polynomial matrix (PolyMatrix or rows of MultiPoly).

    Evaluated at one deterministic rational point per seed (maximum taken);
    when the matrix is small enough the symbolic elimination runs as well and
    both answers must agree.
    """
    rows, ring = _common_rows(M)
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0 or n == 0:
        return 0
    names = _names(ring)
    evaluated = 0
    for seed in options.seeds:
        pt = random_point(names, seed, options.bound)
        values = [_to_qq(pt[v]) for v in names]
        numeric = [[_eval_element(e, values) for e in r] for r in rows]
        r = numeric_rank(numeric)
        logger.debug("rank at seed %d: %d", seed, r)
        evaluated = max(evaluated, r)
    if options.symbolic and min(m, n) <= options.symbolic_max_dim:
        size = sum(len(e) for r in rows for e in r)
        if size > options.symbolic_max_terms:
            logger.info("skipping symbolic rank for a %dx%d matrix with %d terms", m, n, size)
            return evaluated
        symbolic = _symbolic_rank([list(r) for r in rows], ring)
        if symbolic != evaluated:
            raise RankMismatch(
                f"symbolic rank {symbolic} disagrees with evaluated rank {evaluated} ({m}x{n})"
            )
        return symbolic
    logger.debug("skipping symbolic rank for a %dx%d matrix", m, n)
    return evaluated
