"""Polynomial core: arithmetic, determinants, resultants, real roots."""
import random
from fractions import Fraction as Q
from itertools import permutations

import pytest

from fiberatlas.polycore import (
    ParseError,
    PolyMatrix,
    Polynomial,
    Ring,
    RingMismatchError,
    as_univariate,
    coprime_basis,
    determinant,
    int_coeffs,
    isolate_int_roots,
    isolate_real_roots,
    parse_polynomial,
    primitive_signed,
    refine_interval,
    resultant,
    sign_at,
    sign_int_at,
    square_free_part,
    ugcd_int,
    usquarefree_int,
)

R11 = Ring(1, 1)
R20 = Ring(2, 0)


def P(text, ring=R11):
    return parse_polynomial(text, ring)


# -- arithmetic and parsing --------------------------------------------

def test_parse_round_trip():
    for text in ("X1^2 + Y1 - 1", "3/4*X1*Y1 - 2", "X1^3 - 3*X1 + 1"):
        p = P(text)
        assert P(p.to_text()) == p


def test_ring_mismatch_raises():
    with pytest.raises(RingMismatchError):
        P("X1") + parse_polynomial("X1", R20)


def test_arithmetic_identities():
    rng = random.Random(7)
    for _ in range(30):
        terms = {
            (rng.randint(0, 2), rng.randint(0, 2)): Q(rng.randint(-4, 4))
            for _ in range(3)
        }
        p = Polynomial(R11, {k: v for k, v in terms.items() if v})
        q = P("X1*Y1 - 2")
        assert p + q - q == p
        assert p * q == q * p
        assert (p - p).is_zero()
        assert p * 0 == Polynomial.constant(R11, 0)


def test_eval_matches_expansion():
    p = P("(X1 + Y1)^3")
    for x in (Q(0), Q(1, 2), Q(-3)):
        for y in (Q(2), Q(-1, 3)):
            assert p.eval_at((x, y)) == (x + y) ** 3


def test_parse_errors_carry_position():
    with pytest.raises(ParseError):
        P("X1 + + 2")
    with pytest.raises(ParseError):
        P("X1^-2")
    with pytest.raises(ValueError):
        P("X3")


def test_derivative_product_rule():
    p = P("X1^2*Y1 + 1")
    q = P("X1 - Y1")
    lhs = (p * q).derivative(0)
    assert lhs == p.derivative(0) * q + p * q.derivative(0)


# -- determinants -------------------------------------------------------

def _det_oracle(rows):
    n = len(rows)
    ring = rows[0][0].ring
    total = Polynomial.constant(ring, 0)
    for perm in permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        term = Polynomial.constant(ring, sign)
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + term
    return total


def test_determinant_against_permanent_expansion():
    rng = random.Random(11)
    for n in (2, 3, 5):
        rows = [
            [
                Polynomial(R20, {(rng.randint(0, 1), rng.randint(0, 1)):
                                 Q(rng.randint(-3, 3))})
                for _ in range(n)
            ]
            for _ in range(n)
        ]
        m = PolyMatrix.from_rows(rows)
        assert determinant(m) == _det_oracle(rows)


def test_determinant_singular_matrix_is_zero():
    row = [P("X1"), P("Y1 + 1")]
    m = PolyMatrix.from_rows([row, row])
    assert determinant(m).is_zero()


# -- resultants ---------------------------------------------------------

def test_resultant_worked_example():
    f = P("X1^2 + Y1 - 1")
    g = P("2*X1")
    assert resultant(f, g, 0) == P("4*Y1 - 4")


def test_resultant_common_factor_vanishes():
    rng = random.Random(3)
    for _ in range(20):
        a = Q(rng.randint(-5, 5))
        common = P("X1") - a
        f = common * P("X1 + Y1")
        g = common * P(f"X1 - {rng.randint(1, 4)}")
        assert resultant(f, g, 0).is_zero()


def test_resultant_degree_zero_convention():
    f = P("Y1 + 2")
    g = P("X1^3 - Y1")
    assert resultant(g, f, 0) == f ** 3


# -- univariate integer machinery ---------------------------------------

def _udiv_frac(a, b):
    """Quotient and remainder over the rationals."""
    a = [Q(c) for c in a]
    b = _trimmed(b)
    q = [Q(0)] * max(len(a) - len(b) + 1, 0)
    while len(_trimmed(a)) >= len(b):
        a = _trimmed(a)
        k = len(a) - len(b)
        f = a[-1] / Q(b[-1])
        q[k] = f
        for i, c in enumerate(b):
            a[k + i] -= f * Q(c)
        a = a[:-1]
    return q, _trimmed(a)


def test_ugcd_int_divides_both():
    rng = random.Random(5)
    for _ in range(25):
        h = [rng.randint(-3, 3) for _ in range(3)]
        if not any(h):
            h[0] = 1
        a = _umul(h, [rng.randint(-3, 3) for _ in range(3)])
        b = _umul(h, [rng.randint(-3, 3) for _ in range(2)])
        if not any(a) or not any(b):
            continue
        g = ugcd_int(a, b)
        assert len(g) >= len(_trimmed(h)) or len(_trimmed(h)) == 1
        for target in (a, b):
            _, r = _udiv_frac(target, g)
            assert not r


def _umul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _trimmed(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def test_sign_int_at_matches_fraction_eval():
    rng = random.Random(13)
    for _ in range(40):
        coeffs = [rng.randint(-6, 6) for _ in range(5)]
        if not any(coeffs):
            continue
        x = Q(rng.randint(-9, 9), rng.randint(1, 7))
        value = sum(Q(c) * x ** k for k, c in enumerate(coeffs))
        assert sign_int_at(coeffs, x) == (value > 0) - (value < 0)


def test_primitive_signed_keeps_sign():
    coeffs = [Q(-4, 6), Q(0), Q(2, 3)]
    p = primitive_signed(coeffs)
    for x in (Q(0), Q(2), Q(-2), Q(1, 2)):
        value = sum(Q(c) * x ** k for k, c in enumerate(coeffs))
        assert sign_int_at(p, x) == (value > 0) - (value < 0)


def test_square_free_part_removes_multiplicity():
    p = P("(X1 - 1)^3", Ring(1, 0)) * P("(X1 + 2)^2", Ring(1, 0))
    sf = square_free_part(p)
    assert sf.total_degree() == 2
    assert sf.eval_at((Q(1),)) == 0
    assert sf.eval_at((Q(-2),)) == 0


# -- root isolation -----------------------------------------------------

def test_isolation_finds_exactly_the_rational_roots():
    ring = Ring(1, 0)
    roots = [Q(-3), Q(-1, 2), Q(0), Q(5, 3), Q(4)]
    p = Polynomial.constant(ring, 1)
    for r in roots:
        p = p * (Polynomial.variable(ring, 0) - r)
    intervals = isolate_real_roots(p)
    assert len(intervals) == len(roots)
    for (lo, hi), r in zip(intervals, sorted(roots)):
        assert lo <= r <= hi


def test_isolation_separates_close_roots():
    ring = Ring(1, 0)
    a, b = Q(1), Q(1) + Q(1, 10 ** 6)
    p = (Polynomial.variable(ring, 0) - a) * (Polynomial.variable(ring, 0) - b)
    intervals = isolate_real_roots(p)
    assert len(intervals) == 2
    assert intervals[0][1] <= intervals[1][0]
    assert intervals[0][0] <= a <= intervals[0][1]
    assert intervals[1][0] <= b <= intervals[1][1]


def test_isolation_irrational_roots_counted():
    # X^2 - 2 has two real roots, neither rational
    p = P("X1^2 - 2", Ring(1, 0))
    intervals = isolate_real_roots(p)
    assert len(intervals) == 2
    for lo, hi in intervals:
        assert lo < hi


def test_refine_interval_keeps_the_root():
    _, coeffs = int_coeffs(P("X1^2 - 2", Ring(1, 0)))
    lo, hi = isolate_int_roots(list(coeffs))[1]
    for _ in range(20):
        lo, hi = refine_interval(list(coeffs), lo, hi)
    assert hi - lo <= Q(1, 2 ** 18)
    assert sign_int_at(list(coeffs), lo) * sign_int_at(list(coeffs), hi) <= 0


def test_coprime_basis_preserves_root_union():
    polys = [[-2, 0, 1], [-1, 0, 1], [2, -3, 1], [-4, 0, 0, 1]]
    basis = coprime_basis(polys)
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            assert len(ugcd_int(list(a), list(b))) == 1
    total = sum(len(isolate_int_roots(list(b))) for b in basis)
    # distinct real roots: -sqrt2, sqrt2, -1, 1, 2, cbrt4 (1 and 2 shared)
    assert total == 6


def test_usquarefree_int_is_square_free():
    p = _umul(_umul([1, 1], [1, 1]), [-2, 1])
    sf = usquarefree_int(p)
    g = ugcd_int(list(sf), [i * c for i, c in enumerate(sf)][1:])
    assert len(g) == 1


def test_as_univariate_rejects_mixed():
    with pytest.raises(ValueError):
        as_univariate(P("X1*Y1"))


def test_sign_at_multivariate():
    p = P("X1^2 + Y1 - 1")
    assert sign_at(p, (Q(0), Q(0))) == -1
    assert sign_at(p, (Q(1), Q(0))) == 0
    assert sign_at(p, (Q(2), Q(0))) == 1
