import random
from functools import reduce

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shardlab import (
    DuplicateAbscissa,
    Matrix,
    Polynomial,
    PrimeField,
    lagrange_interpolate,
    matrix_rank,
    nullspace_basis,
    poly_eval,
    vandermonde,
)
from shardlab.field_poly import is_prime, solve_linear

GF97 = PrimeField(97)

residues = st.integers(min_value=0, max_value=96)
elements = residues.map(GF97)


def vandermonde_det_nonzero(xs):
    """Independent oracle: det of a square Vandermonde is prod of (x_i - x_j)."""
    det = reduce(lambda a, b: a * b,
                 (xs[i] - xs[j] for i in range(len(xs)) for j in range(i)),
                 xs[0].field.one)
    return det.value != 0


class TestPrimality:
    def test_small_primes(self):
        assert [n for n in range(2, 40) if is_prime(n)] == [
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37
        ]

    def test_mersenne(self):
        assert is_prime(2**31 - 1)
        assert not is_prime(2**31)
        assert not is_prime(1)

    def test_composite_modulus_rejected(self):
        with pytest.raises(ValueError):
            PrimeField(91)


class TestFieldAxioms:
    @given(a=elements, b=elements, c=elements)
    def test_distributivity(self, a, b, c):
        assert a * (b + c) == a * b + a * c

    @given(a=elements, b=elements)
    def test_commutativity(self, a, b):
        assert a + b == b + a
        assert a * b == b * a

    @given(a=st.integers(min_value=1, max_value=96).map(GF97))
    def test_multiplicative_inverse(self, a):
        assert a * a.inverse() == GF97.one
        assert a / a == 1

    def test_inverse_of_zero(self):
        with pytest.raises(ZeroDivisionError):
            GF97.zero.inverse()

    def test_int_mixing(self, gf7):
        assert gf7(3) + 5 == gf7(1)
        assert 2 * gf7(4) == 1
        assert gf7(3) - 5 == gf7(5)
        assert 1 / gf7(3) == gf7(5)

    def test_cross_field_rejected(self, gf7, gf97):
        with pytest.raises(ValueError):
            gf7(1) + gf97(1)


class TestPolynomial:
    def test_eval_square(self, gf7):
        # z^2 at 3: 9 mod 7
        assert poly_eval(Polynomial(gf7, [0, 0, 1]), gf7(3)) == gf7(2)

    def test_eval_zero_poly(self, gf7, rng):
        zero = Polynomial.zero(gf7)
        assert zero.degree is None
        for _ in range(5):
            assert poly_eval(zero, gf7.random(rng)) == 0

    def test_eval_shard_basis_constant_term(self, gf7):
        # (z-2)(z-3)/2 has constant term 6/2 = 3
        basis = (Polynomial(gf7, [-2, 1]) * Polynomial(gf7, [-3, 1])) * gf7(2).inverse()
        assert poly_eval(basis, gf7.zero) == gf7(3)

    def test_canonical_form(self, gf7):
        assert Polynomial(gf7, [1, 2, 0, 0]).coeffs == (gf7(1), gf7(2))
        assert Polynomial(gf7, [0, 0]).is_zero

    def test_divmod_roundtrip(self, gf97, rng):
        for _ in range(20):
            a = Polynomial(gf97, [gf97.random(rng) for _ in range(rng.randrange(1, 6))])
            b = Polynomial(gf97, [gf97.random(rng) for _ in range(rng.randrange(1, 4))])
            if b.is_zero:
                continue
            q, r = divmod(a, b)
            assert q * b + r == a
            assert r.is_zero or r.degree < b.degree

    def test_pow(self, gf97):
        q = Polynomial(gf97, [1, 1])
        assert q**3 == q * q * q
        assert q**0 == Polynomial(gf97, [1])


class TestInterpolation:
    def test_exact_square_fit(self, gf97):
        pts = [(gf97(1), gf97(1)), (gf97(2), gf97(4)), (gf97(3), gf97(9))]
        assert lagrange_interpolate(pts) == Polynomial(gf97, [0, 0, 1])

    def test_single_point(self, gf97):
        assert lagrange_interpolate([(gf97(5), gf97(42))]) == Polynomial(gf97, [42])

    def test_random_roundtrip(self, gf97, rng):
        # oracle: re-verify every interpolated value by direct evaluation
        for _ in range(20):
            ys = [gf97.random(rng) for _ in range(3)]
            poly = lagrange_interpolate([(gf97(i), y) for i, y in enumerate(ys, 1)])
            for i, y in enumerate(ys, 1):
                assert poly_eval(poly, gf97(i)) == y

    def test_duplicate_abscissa(self, gf97):
        with pytest.raises(DuplicateAbscissa):
            lagrange_interpolate([(gf97(1), gf97(1)), (gf97(1), gf97(2))])

    @given(
        coeffs=st.lists(elements, min_size=1, max_size=6),
        extra=st.integers(min_value=0, max_value=3),
    )
    @settings(max_examples=50)
    def test_interpolate_inverts_evaluation(self, coeffs, extra):
        poly = Polynomial(GF97, coeffs)
        n = len(coeffs) + extra  # more points than the degree requires
        pts = [(GF97(i), poly(GF97(i))) for i in range(1, n + 1)]
        assert lagrange_interpolate(pts) == poly


class TestVandermonde:
    def test_descending_two_rows(self, gf97):
        a1, a2 = gf97(5), gf97(11)
        m = vandermonde([a1, a2], 3)
        assert (m.nrows, m.ncols) == (2, 4)
        assert m.rows[0] == (a1**3, a1**2, a1, gf97.one)
        assert m.rows[1] == (a2**3, a2**2, a2, gf97.one)

    def test_empty(self, gf97):
        m = vandermonde([], 2, field=gf97)
        assert (m.nrows, m.ncols) == (0, 3)
        assert matrix_rank(m) == 0

    def test_full_rank_three_points(self, gf7):
        xs = [gf7(1), gf7(2), gf7(3)]
        assert vandermonde_det_nonzero(xs)  # oracle agrees rank is full
        assert matrix_rank(vandermonde(xs, 2)) == 3

    def test_rank_is_min_of_dims(self, gf97, rng):
        for _ in range(20):
            n = rng.randrange(1, 7)
            degree = rng.randrange(0, 8)
            xs = rng.sample(range(97), n)
            m = vandermonde([gf97(x) for x in xs], degree)
            assert matrix_rank(m) == min(n, degree + 1)


class TestRankNullspace:
    def test_identity(self, gf7):
        assert matrix_rank(Matrix.identity(gf7, 4)) == 4
        assert nullspace_basis(Matrix.identity(gf7, 3)) == []

    def test_zero_matrix(self, gf7):
        m = Matrix(gf7, [[0] * 5 for _ in range(3)])
        assert matrix_rank(m) == 0
        assert len(nullspace_basis(m)) == 5

    def test_sum_constraint(self, gf7):
        # x + y = 0 has the single line x = -y
        basis = nullspace_basis(Matrix(gf7, [[1, 1]]))
        assert len(basis) == 1
        x, y = basis[0]
        assert x and x == -y

    def test_nullity_plus_rank(self, gf97, rng):
        for _ in range(20):
            nrows, ncols = rng.randrange(1, 6), rng.randrange(1, 6)
            m = Matrix(gf97, [[gf97.random(rng) for _ in range(ncols)] for _ in range(nrows)])
            basis = nullspace_basis(m)  # each vector verified internally
            assert len(basis) == ncols - matrix_rank(m)

    def test_solve_consistent(self, gf97, rng):
        for _ in range(20):
            m = Matrix(gf97, [[gf97.random(rng) for _ in range(4)] for _ in range(6)])
            x = [gf97.random(rng) for _ in range(4)]
            rhs = m.mul_vec(x)
            sol = solve_linear(m, rhs)
            assert sol is not None
            assert m.mul_vec(sol) == rhs

    def test_solve_inconsistent(self, gf7):
        m = Matrix(gf7, [[1, 0], [1, 0]])
        assert solve_linear(m, [gf7(1), gf7(2)]) is None
