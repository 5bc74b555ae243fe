import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gms.exactmath import (
    Matrix,
    char_poly,
    det,
    inverse,
    kernel_basis,
    mat_mul,
    nilpotency_index,
    rank,
    rref,
)
from gms.fields import GF, QQ, QQi, FieldError, GaussianRational, parse_field

F2, F3, F5 = GF(2), GF(3), GF(5)


def leibniz(grid, field):
    """Signed sum over permutations in plain integers, reduced into the field at the end."""
    n = len(grid)
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = (-1) ** sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        term = 1
        for i in range(n):
            term *= int(grid[i][perm[i]])
        total += sign * term
    return field(total)


def brute_rank_fp(grid, p):
    """Largest k with a k x k minor nonzero, by Leibniz on every minor."""
    f = GF(p)
    rows, cols = len(grid), len(grid[0]) if grid else 0
    for k in range(min(rows, cols), 0, -1):
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                if leibniz([[grid[r][c] for c in cs] for r in rs], f):
                    return k
    return 0


small_fp = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, 4), min_size=n, max_size=n), min_size=n, max_size=n))


def test_field_canonical_forms():
    assert F5(7) == 2 and F5(-1) == 4
    assert QQ(Fraction(2, -4)) == Fraction(-1, 2)
    assert parse_field("Fp:3") == F3
    with pytest.raises(FieldError):
        parse_field("Fp:4")


def test_mixing_fields_is_an_error():
    with pytest.raises(Exception):
        mat_mul(Matrix([[1]], F2), Matrix([[1]], F3))


def test_rref_examples():
    _, r, piv = rref(Matrix.identity(3, F2))
    assert (r, piv) == (3, [0, 1, 2])
    _, r, piv = rref(Matrix.zeros(2, 3, F2))
    assert (r, piv) == (0, [])
    assert rank(Matrix([[1, 1], [1, 1]], F2)) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(2, QQ)) == []
    assert len(kernel_basis(Matrix.zeros(2, 2, QQ))) == 2
    (v,) = kernel_basis(Matrix.elementary(2, 2, 0, 1, QQ))
    # left kernel: v . E_12 = 0 forces v = e_2 up to scale
    assert v.flat()[0] == 0 and v.flat()[1] != 0


def test_char_poly_examples():
    x2 = [0, 0, 1]
    assert list(char_poly(Matrix.zeros(2, 2, QQ)).coeffs) == x2
    assert list(char_poly(Matrix.elementary(2, 2, 0, 1, QQ)).coeffs) == x2
    assert list(char_poly(Matrix([[1, 1], [1, 1]], QQ)).coeffs) == [0, -2, 1]


def test_det_and_inverse_examples():
    assert det(Matrix.identity(3, QQ)) == 1
    assert inverse(Matrix([[1, 1], [0, 1]], QQ)) == Matrix([[1, -1], [0, 1]], QQ)
    assert det(Matrix([[1, 0, 1], [1, 1, 1], [0, 1, 1]], QQ)) == 1


def test_gaussian_rationals():
    i = GaussianRational(0, 1)
    assert i * i == QQi(-1)
    assert (GaussianRational(1, 1) / GaussianRational(1, -1)) == i


@settings(max_examples=60, deadline=None)
@given(small_fp, st.sampled_from([2, 3, 5]))
def test_det_matches_leibniz(grid, p):
    f = GF(p)
    m = Matrix(grid, f)
    assert det(m) == leibniz(m.tolist(), f)


@settings(max_examples=60, deadline=None)
@given(small_fp, st.sampled_from([2, 3]))
def test_rank_matches_minors(grid, p):
    m = Matrix(grid, GF(p))
    assert rank(m) == brute_rank_fp(m.tolist(), p)


@settings(max_examples=40, deadline=None)
@given(small_fp)
def test_inverse_round_trip_over_q(grid):
    m = Matrix(grid, QQ)
    if det(m) == 0:
        with pytest.raises(Exception):
            inverse(m)
        return
    assert mat_mul(m, inverse(m)) == Matrix.identity(m.rows, QQ)


@settings(max_examples=40, deadline=None)
@given(small_fp)
def test_char_poly_constant_term_is_signed_det(grid):
    m = Matrix(grid, QQ)
    cp = char_poly(m)
    assert cp.coeffs[0] == (-1) ** m.rows * det(m)
    assert cp.coeffs[-1] == 1


def test_nilpotency_index():
    shift = Matrix([[0, 1, 0], [0, 0, 1], [0, 0, 0]], QQ)
    assert nilpotency_index(shift) == 3
    assert nilpotency_index(Matrix.identity(2, QQ)) == float("inf")
