# tests/test_polyalg_properties.py
import random
from fractions import Fraction

from src.polyalg import MultiPoly, PolyMatrix, determinant, differentiate, evaluate, random_point, substitute

V = ("x", "y", "z")


def random_poly(rng, variables=V, max_deg=3, max_terms=4):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = [0] * len(variables)
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(len(variables))] += 1
        terms[tuple(e)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return MultiPoly.from_terms(variables, terms)


def test_ring_axioms():
    rng = random.Random(20240601)
    for _ in range(1000):
        a, b, c = random_poly(rng), random_poly(rng), random_poly(rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == 0
        assert a * 1 == a


def test_product_rule_and_chain_rule():
    rng = random.Random(7)
    for _ in range(1000):
        p, q, s = random_poly(rng), random_poly(rng), random_poly(rng, max_deg=2)
        v = rng.choice(V)
        assert differentiate(p * q, v) == differentiate(p, v) * q + p * differentiate(q, v)
        # x → s(x, y, z)
        composed = substitute(p, {"x": s})
        expected = (substitute(differentiate(p, "x"), {"x": s}) * differentiate(s, v)
                    + (substitute(differentiate(p, v), {"x": s}) if v != "x" else 0))
        assert differentiate(composed, v) == expected


def test_evaluation_is_a_ring_homomorphism():
    rng = random.Random(11)
    for seed in range(1000):
        a, b = random_poly(rng), random_poly(rng)
        pt = random_point(V, seed, bound=50)
        assert evaluate(a * b, pt) == evaluate(a, pt) * evaluate(b, pt)
        assert evaluate(a + b, pt) == evaluate(a, pt) + evaluate(b, pt)


def test_bareiss_matches_cofactor():
    rng = random.Random(2024)
    for _ in range(200):
        n = rng.randint(1, 5)
        rows = [[random_poly(rng, ("x", "y"), max_deg=2, max_terms=3) for _ in range(n)]
                for _ in range(n)]
        M = PolyMatrix(tuple(tuple(r) for r in rows))
        assert determinant(M) == determinant(M, method="cofactor")


def test_parse_of_printed_form():
    rng = random.Random(3)
    for _ in range(300):
        p = random_poly(rng)
        assert MultiPoly.parse(str(p), V) == p
