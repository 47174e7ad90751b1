from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from affine_descent import linalg
from affine_descent.poly import Poly, count_monomials, monomials_of_degree, monomials_up_to

small = st.integers(-6, 6)
rows = st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5)


@given(rows)
def test_nullspace_vectors_are_killed(m):
    for v in linalg.nullspace(m, 4):
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in m)
    assert linalg.rank(m, 4) + len(linalg.nullspace(m, 4)) == 4


@given(rows, st.lists(small, min_size=4, max_size=4))
def test_span_builder_membership(m, extra):
    sb = linalg.SpanBuilder(4)
    for r in m:
        sb.add(r)
    assert all(sb.contains(r) for r in m)
    combo = [sum(r[i] for r in m) for i in range(4)]
    assert sb.contains(combo)
    grew = sb.add(extra)
    assert grew == (linalg.rank(m + [extra], 4) > linalg.rank(m, 4))


def test_solve_and_inverse():
    a = [[2, 1], [1, 3]]
    x = linalg.solve(a, [3, 5], 2)
    assert x == [Fraction(4, 5), Fraction(7, 5)]
    assert linalg.solve([[1, 1], [2, 2]], [1, 3], 2) is None
    inv = linalg.inverse(a)
    assert linalg.mat_mul(a, inv) == linalg.identity(2)
    assert linalg.determinant(a) == 5


@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_smith_normal_form(m):
    u, d, v = linalg.smith_normal_form(m)
    assert linalg.mat_mul(linalg.mat_mul(u, m), v) == d
    diag = [d[i][i] for i in range(3)]
    assert all(d[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    assert abs(linalg.determinant(u)) == 1 and abs(linalg.determinant(v)) == 1
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))


def test_poly_arithmetic_and_substitution():
    x, y = Poly.var(2, 0), Poly.var(2, 1)
    p = (x + y) ** 3
    assert p.coeff((2, 1)) == 3
    assert p.degree() == 3
    assert p.substitute([y, x]) == p
    assert (p - p).is_zero()
    assert p.evaluate((1, Fraction(1, 2))) == Fraction(27, 8)
    q = Poly.from_sparse(2, p.to_sparse())
    assert q == p and hash(q) == hash(p)


def test_poly_sparse_validation():
    with pytest.raises(ValueError, match="length 1, expected 2"):
        Poly.from_sparse(2, [[[1], "2"]])
    with pytest.raises(ValueError, match="pair"):
        Poly.from_sparse(1, [[1, 2, 3]])


def test_monomial_counts():
    assert len(monomials_of_degree(3, 4)) == count_monomials(3, 4) == 15
    assert len(monomials_up_to(2, 3)) == 10
    assert count_monomials(2, -1) == 0
