"""Exact arithmetic substrate: prime fields, univariate polynomials, matrices.

Everything is integer arithmetic modulo a prime, so ranks, nullspaces and the
decoders built on top never need a numerical tolerance.
"""

from __future__ import annotations

from typing import Iterable, Sequence

# Mersenne prime: large enough that random-instance degeneracies have
# probability ~N/p, small enough for fast native arithmetic.
DEFAULT_MODULUS = 2**31 - 1

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class DuplicateAbscissa(ValueError):
    """Two interpolation points share an x coordinate."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """GF(p) for a prime p; instances double as element factories."""

    __slots__ = ("modulus",)

    def __init__(self, modulus: int):
        if not is_prime(modulus):
            raise ValueError(f"field modulus must be prime, got {modulus}")
        self.modulus = modulus

    def __call__(self, value: "int | FieldElement") -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field.modulus != self.modulus:
                raise ValueError("element belongs to a different field")
            return value
        return FieldElement(int(value) % self.modulus, self)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def random(self, rng) -> "FieldElement":
        return FieldElement(rng.randrange(self.modulus), self)

    def random_nonzero(self, rng) -> "FieldElement":
        return FieldElement(rng.randrange(1, self.modulus), self)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self) -> int:
        return hash(("PrimeField", self.modulus))

    def __repr__(self) -> str:
        return f"GF({self.modulus})"


class FieldElement:
    """Residue in [0, p). Immutable; hashable; mixes with plain ints."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value
        self.field = field

    def _other(self, other) -> int | None:
        if isinstance(other, FieldElement):
            if other.field.modulus != self.field.modulus:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.modulus
        return None

    def __add__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement((self.value + v) % self.field.modulus, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement((self.value - v) % self.field.modulus, self.field)

    def __rsub__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement((v - self.value) % self.field.modulus, self.field)

    def __mul__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement(self.value * v % self.field.modulus, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.field.modulus, self.field)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        p = self.field.modulus
        return FieldElement(pow(self.value, p - 2, p), self.field)

    def __truediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError("division by zero field element")
        p = self.field.modulus
        return FieldElement(self.value * pow(v, p - 2, p) % p, self.field)

    def __rtruediv__(self, other):
        v = self._other(other)
        if v is None:
            return NotImplemented
        return FieldElement(v, self.field) / self

    def __pow__(self, exponent: int):
        return FieldElement(pow(self.value, exponent, self.field.modulus), self.field)

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.value == other.value and self.field.modulus == other.field.modulus
        if isinstance(other, int):
            return self.value == other % self.field.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"{self.value}"


class Polynomial:
    """Univariate polynomial, coefficients ascending, no trailing zeros stored."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs: Iterable[int | FieldElement] = ()):
        cs = [field(c) for c in coeffs]
        while cs and cs[-1].value == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c: FieldElement) -> "Polynomial":
        return cls(c.field, (c,))

    @classmethod
    def zero(cls, field: PrimeField) -> "Polynomial":
        return cls(field, ())

    @property
    def degree(self) -> int | None:
        """Index of the last nonzero coefficient; None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> FieldElement:
        return self.coeffs[i] if i < len(self.coeffs) else self.field.zero

    def __call__(self, point: FieldElement) -> FieldElement:
        p = self.field.modulus
        x = self.field(point).value
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c.value) % p
        return FieldElement(acc, self.field)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            self.field,
            (self.coefficient(i) + other.coefficient(i) for i in range(n)),
        )

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(
            self.field,
            (self.coefficient(i) - other.coefficient(i) for i in range(n)),
        )

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, (-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial.zero(self.field)
            p = self.field.modulus
            out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                av = a.value
                for j, b in enumerate(other.coeffs):
                    out[i + j] = (out[i + j] + av * b.value) % p
            return Polynomial(self.field, out)
        if isinstance(other, (FieldElement, int)):
            s = self.field(other)
            return Polynomial(self.field, (c * s for c in self.coeffs))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative polynomial powers are not defined")
        result = Polynomial(self.field, (1,))
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Polynomial"):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dcoeffs = other.coeffs
        dd = len(dcoeffs) - 1
        inv_lead = dcoeffs[-1].inverse()
        quot = [self.field.zero] * max(0, len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] * inv_lead
            if c.value:
                quot[i - dd] = c
                for j, d in enumerate(dcoeffs):
                    rem[i - dd + j] = rem[i - dd + j] - c * d
        return Polynomial(self.field, quot), Polynomial(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (FieldElement, int)):
            return self == Polynomial(self.field, (other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(tuple(c.value for c in self.coeffs))

    def __repr__(self) -> str:
        return f"Polynomial({self.field!r}, {[c.value for c in self.coeffs]})"


def poly_eval(poly: Polynomial, point: FieldElement) -> FieldElement:
    """Horner evaluation of `poly` at `point`."""
    return poly(point)


def lagrange_interpolate(points: Sequence[tuple[FieldElement, FieldElement]]) -> Polynomial:
    """Unique polynomial of degree < len(points) through the given (x, y) pairs."""
    if not points:
        raise ValueError("at least one interpolation point is required")
    field = points[0][0].field
    xs = [field(x) for x, _ in points]
    if len({x.value for x in xs}) != len(xs):
        raise DuplicateAbscissa("interpolation points must have distinct x values")
    ys = [field(y) for _, y in points]
    # master = prod (z - x_i); per-point numerators by synthetic division
    master = Polynomial(field, (1,))
    for x in xs:
        master = master * Polynomial(field, (-x, 1))
    result = Polynomial.zero(field)
    for x, y in zip(xs, ys):
        numerator = master // Polynomial(field, (-x, 1))
        denom = numerator(x)
        result = result + numerator * (y / denom)
    return result


class Matrix:
    """Immutable row-major matrix of field elements."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: PrimeField, rows: Iterable[Sequence[int | FieldElement]],
                 ncols: int | None = None):
        rs = tuple(tuple(field(x) for x in row) for row in rows)
        if rs:
            widths = {len(r) for r in rs}
            if len(widths) != 1:
                raise ValueError("ragged rows")
            width = widths.pop()
            if ncols is not None and ncols != width:
                raise ValueError(f"ncols={ncols} but rows have width {width}")
            ncols = width
        elif ncols is None:
            raise ValueError("ncols is required for a matrix with no rows")
        self.field = field
        self.rows = rs
        self.nrows = len(rs)
        self.ncols = ncols

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "Matrix":
        return cls(field, ([int(i == j) for j in range(n)] for i in range(n)), ncols=n)

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return self.rows[i][j]

    def mul_vec(self, vec: Sequence[FieldElement]) -> tuple[FieldElement, ...]:
        if len(vec) != self.ncols:
            raise ValueError("vector length does not match column count")
        p = self.field.modulus
        vals = [self.field(v).value for v in vec]
        out = []
        for row in self.rows:
            acc = 0
            for a, b in zip(row, vals):
                acc += a.value * b
            out.append(FieldElement(acc % p, self.field))
        return tuple(out)

    def take_columns(self, cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, ([row[j] for j in cols] for row in self.rows),
                      ncols=len(cols))

    def __eq__(self, other) -> bool:
        return (isinstance(other, Matrix) and self.field == other.field
                and self.ncols == other.ncols and self.rows == other.rows)

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols,
                     tuple(c.value for row in self.rows for c in row)))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols} over {self.field!r})"


def vandermonde(xs: Sequence[FieldElement], degree: int,
                field: PrimeField | None = None) -> Matrix:
    """|xs| x (degree+1) matrix; row i = (x_i^degree, ..., x_i, 1), descending."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    if field is None:
        if not xs:
            raise ValueError("field is required when xs is empty")
        field = xs[0].field
    p = field.modulus
    rows = []
    for x in xs:
        v = field(x).value
        row = [1] * (degree + 1)
        acc = 1
        for j in range(degree - 1, -1, -1):
            acc = acc * v % p
            row[j] = acc
        rows.append(row)
    return Matrix(field, rows, ncols=degree + 1)


def _rref(rows: list[list[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over GF(p) on plain int rows; returns (rows, pivot cols)."""
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def matrix_rank(m: Matrix) -> int:
    """Rank over the matrix's field, by exact Gaussian elimination."""
    rows = [[e.value for e in row] for row in m.rows]
    _, pivots = _rref(rows, m.ncols, m.field.modulus)
    return len(pivots)


def nullspace_basis(m: Matrix) -> list[tuple[FieldElement, ...]]:
    """Basis of {x : m @ x = 0}; each vector is re-verified by multiplication."""
    p = m.field.modulus
    rows = [[e.value for e in row] for row in m.rows]
    red, pivots = _rref(rows, m.ncols, p)
    pivot_set = set(pivots)
    free = [c for c in range(m.ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = [0] * m.ncols
        vec[f] = 1
        for i, c in enumerate(pivots):
            vec[c] = -red[i][f] % p
        v = tuple(FieldElement(x, m.field) for x in vec)
        if any(e.value for e in m.mul_vec(v)):
            raise AssertionError("nullspace vector failed verification")
        basis.append(v)
    return basis


def solve_linear(m: Matrix, rhs: Sequence[FieldElement]) -> list[FieldElement] | None:
    """One solution of m @ x = rhs (free variables zeroed), or None if inconsistent."""
    if len(rhs) != m.nrows:
        raise ValueError("rhs length does not match row count")
    p = m.field.modulus
    rows = [[e.value for e in row] + [m.field(b).value]
            for row, b in zip(m.rows, rhs)]
    red, pivots = _rref(rows, m.ncols + 1, p)
    if pivots and pivots[-1] == m.ncols:
        return None
    sol = [0] * m.ncols
    for i, c in enumerate(pivots):
        sol[c] = red[i][m.ncols]
    return [FieldElement(x, m.field) for x in sol]
