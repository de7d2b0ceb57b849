"""Exact arithmetic building blocks: GF(p), polynomials, Vandermonde ranks.

Everything downstream rides on this substrate: no floats, no tolerances,
every rank and every decode is an exact statement about integers mod p.
"""

import random

from shardlab import (
    DEFAULT_MODULUS,
    Matrix,
    Polynomial,
    PrimeField,
    lagrange_interpolate,
    matrix_rank,
    nullspace_basis,
    poly_eval,
    vandermonde,
)

rng = random.Random(7)

# A small field for hand-checkable numbers, the big Mersenne field for runs.
gf7 = PrimeField(7)
field = PrimeField(DEFAULT_MODULUS)
print(f"fields: {gf7} and {field}")

a = gf7(3)
print(f"in GF(7): 3 + 5 = {a + 5}, 3 * 5 = {a * 5}, 3^-1 = {a.inverse()}")

# Polynomials evaluate by Horner and interpolate exactly.
square = Polynomial(gf7, [0, 0, 1])
print(f"z^2 at z=3 over GF(7): {poly_eval(square, gf7(3))}")

points = [(field(x), field.random(rng)) for x in range(1, 6)]
fit = lagrange_interpolate(points)
print(f"interpolated degree-{fit.degree} polynomial through 5 random points;")
print(f"  refits all of them: {all(poly_eval(fit, x) == y for x, y in points)}")

# Vandermonde matrices on distinct points have full rank -- the fact that
# makes evaluations of a polynomial decodable in the first place.
xs = [field(x) for x in (2, 3, 5, 8)]
van = vandermonde(xs, 6)
print(f"Vandermonde on 4 distinct points, degree 6: {van.nrows}x{van.ncols}, "
      f"rank {matrix_rank(van)}")

# Nullspaces witness rank deficits exactly.
wide = Matrix(field, [[1, 1, 0], [0, 1, 1]])
basis = nullspace_basis(wide)
print(f"nullspace of a 2x3 system has dimension {len(basis)}: {basis[0]}")
