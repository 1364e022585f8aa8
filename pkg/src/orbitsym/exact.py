"""Exact arithmetic: rationals, cyclotomic numbers, rational matrices.

Rationals are stdlib fractions (always in lowest terms, positive
denominator).  A cyclotomic number is stored as its coordinate vector
over the power basis 1, z, ..., z^(phi(n)-1) of Q(zeta_n), reduced
modulo the n-th cyclotomic polynomial, with n the smallest conductor
containing the value.  Minimal conductors are never congruent to
2 mod 4, so equality and hashing are structural.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import BadGaloisExponent, BadParameter, DimensionMismatch, SchemaError, Singular

Rational = Fraction


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _prime_factors(n: int) -> list[int]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _polydiv_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Exact division of integer polynomials (ascending coefficients),
    # monic divisor.  Remainder must come out zero.
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + dd]
        out[i] = c
        if c:
            for j in range(dd + 1):
                num[i + j] -= c * den[j]
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending degree."""
    if n < 1:
        raise BadParameter(f"cyclotomic polynomial needs n >= 1, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _polydiv_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


class _Field:
    """Reduction data for Q(zeta_n): power-basis images of zeta^j."""

    __slots__ = ("n", "degree", "powers")

    def __init__(self, n: int):
        phi = cyclotomic_polynomial(n)
        degree = len(phi) - 1
        # zeta^degree = -(phi[0] + phi[1] z + ... + phi[degree-1] z^(degree-1))
        tail = [-c for c in phi[:-1]]
        length = max(2 * degree - 1, n)
        powers: list[tuple[int, ...]] = []
        cur = [1] + [0] * (degree - 1)
        for _ in range(length):
            powers.append(tuple(cur))
            carry = cur[degree - 1]
            cur = [0] + cur[: degree - 1]
            if carry:
                for i in range(degree):
                    cur[i] += carry * tail[i]
        self.n = n
        self.degree = degree
        self.powers = tuple(powers)


@lru_cache(maxsize=None)
def _field(n: int) -> _Field:
    return _Field(n)


def cyclotomic_degree(n: int) -> int:
    """Degree of Q(zeta_n) over Q, i.e. Euler phi of n."""
    return _field(n).degree


@lru_cache(maxsize=None)
def power_basis_height(n: int) -> int:
    """Largest absolute entry in the zeta_n power-reduction table.

    Bounds how much coefficients can grow when a product of two values in
    Q(zeta_n) is reduced back to the power basis.
    """
    return max(1, max(abs(c) for row in _field(n).powers for c in row))


@lru_cache(maxsize=None)
def _subfield_solver(n: int, d: int):
    # Columns: power-basis coords in Q(zeta_n) of zeta_d^i, i < phi(d).
    # Cached pivot-row inverse turns membership tests into one mat-vec.
    fn = _field(n)
    e = _field(d).degree
    step = n // d
    cols = [fn.powers[step * i] for i in range(e)]
    mat = [[Fraction(cols[j][i]) for j in range(e)] for i in range(fn.degree)]
    tr = [[mat[i][j] for i in range(fn.degree)] for j in range(e)]
    _, pivots = _rref(tr)
    piv_rows = pivots
    sq = [[mat[i][j] for j in range(e)] for i in piv_rows]
    inv = _inverse_rows(sq)
    return mat, piv_rows, inv


def _subfield_coords(n: int, d: int, vec: list[Fraction]):
    """Coords of vec (living in Q(zeta_n)) over Q(zeta_d), or None."""
    mat, piv_rows, inv = _subfield_solver(n, d)
    e = len(inv)
    rhs = [vec[i] for i in piv_rows]
    x = [sum(inv[i][j] * rhs[j] for j in range(e)) for i in range(e)]
    for i in range(len(vec)):
        if sum(mat[i][j] * x[j] for j in range(e)) != vec[i]:
            return None
    return x


def _lift(vec: tuple[Fraction, ...], d: int, n: int) -> list[Fraction]:
    # Re-express Q(zeta_d) coords inside Q(zeta_n); requires d | n.
    fn = _field(n)
    step = n // d
    out = [Fraction(0)] * fn.degree
    for i, c in enumerate(vec):
        if c:
            for j, p in enumerate(fn.powers[step * i]):
                if p:
                    out[j] += c * p
    return out


def _canonical(n: int, vec: list[Fraction]) -> "Cyclo":
    while True:
        if all(c == 0 for c in vec[1:]):
            return Cyclo(1, (vec[0],))
        dropped = False
        for p in _prime_factors(n):
            d = n // p
            while d % 4 == 2:
                d //= 2
            sub = _subfield_coords(n, d, vec)
            if sub is not None:
                n, vec = d, sub
                dropped = True
                break
        if not dropped:
            return Cyclo(n, tuple(vec))


@dataclass(frozen=True, eq=False)
class Cyclo:
    """A cyclotomic number in canonical minimal-conductor form.

    Build values through `rational`, `zeta` or `from_terms`; the raw
    constructor trusts its arguments to be canonical already.
    """

    conductor: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != _field(self.conductor).degree:
            raise BadParameter(
                f"coefficient vector of length {len(self.coeffs)} does not match "
                f"conductor {self.conductor}"
            )

    @classmethod
    def rational(cls, value) -> "Cyclo":
        return cls(1, (Fraction(value),))

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> "Cyclo":
        """The root of unity exp(2*pi*i*k/n)."""
        if n < 1:
            raise BadParameter(f"zeta needs n >= 1, got {n}")
        return cls.from_terms(n, {k % n: Fraction(1)})

    @classmethod
    def from_terms(cls, n: int, terms) -> "Cyclo":
        """Sum of coeff * zeta_n^exp over (exp, coeff) pairs or a dict."""
        if n < 1:
            raise BadParameter(f"from_terms needs n >= 1, got {n}")
        items = terms.items() if hasattr(terms, "items") else terms
        f = _field(n)
        vec = [Fraction(0)] * f.degree
        for exp, coeff in items:
            c = Fraction(coeff)
            if c:
                for j, p in enumerate(f.powers[exp % n]):
                    if p:
                        vec[j] += c * p
        return _canonical(n, vec)

    @property
    def is_rational(self) -> bool:
        return self.conductor == 1

    def rational_value(self) -> Fraction:
        if self.conductor != 1:
            raise BadParameter(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, Cyclo):
            return self.conductor == other.conductor and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.conductor == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        # Rational values hash like their Fraction so mixed dicts stay sound.
        if self.conductor == 1:
            return hash(self.coeffs[0])
        return hash((self.conductor, self.coeffs))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.conductor == 1 and other.conductor == 1:
            return Cyclo(1, (self.coeffs[0] + other.coeffs[0],))
        n = lcm(self.conductor, other.conductor)
        a = _lift(self.coeffs, self.conductor, n)
        b = _lift(other.coeffs, other.conductor, n)
        return _canonical(n, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.conductor == 1:
            q = self.coeffs[0]
            if not q:
                return Cyclo(1, (Fraction(0),))
            return Cyclo(other.conductor, tuple(q * c for c in other.coeffs))
        if other.conductor == 1:
            return other * self
        n = lcm(self.conductor, other.conductor)
        a = _lift(self.coeffs, self.conductor, n)
        b = _lift(other.coeffs, other.conductor, n)
        f = _field(n)
        conv = [Fraction(0)] * (2 * f.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        vec = [Fraction(0)] * f.degree
        for j, c in enumerate(conv):
            if c:
                for i, p in enumerate(f.powers[j]):
                    if p:
                        vec[i] += c * p
        return _canonical(n, vec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Cyclo.rational(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Cyclo":
        if self.conductor == 1:
            return Cyclo(1, (1 / self.coeffs[0],))
        prod = Cyclo.rational(1)
        for k in range(2, self.conductor):
            if gcd(k, self.conductor) == 1:
                prod = prod * self.galois(k)
        norm = (self * prod).rational_value()
        return (1 / norm) * prod

    def galois(self, k: int) -> "Cyclo":
        """Apply the field automorphism zeta -> zeta^k."""
        n = self.conductor
        if n == 1:
            return self
        k %= n
        if gcd(k, n) != 1:
            raise BadGaloisExponent(f"exponent {k} is not invertible mod {n}")
        if k == 1:
            return self
        f = _field(n)
        vec = [Fraction(0)] * f.degree
        for i, c in enumerate(self.coeffs):
            if c:
                for j, p in enumerate(f.powers[(i * k) % n]):
                    if p:
                        vec[j] += c * p
        # An automorphism preserves the conductor, no rescan needed.
        return Cyclo(n, tuple(vec))

    def conj(self) -> "Cyclo":
        """Complex conjugate."""
        if self.conductor == 1:
            return self
        return self.galois(self.conductor - 1)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(float(c) * z**i for i, c in enumerate(self.coeffs))

    def __str__(self):
        if self.conductor == 1:
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            body = f"z{self.conductor}" if i == 1 else f"z{self.conductor}^{i}"
            if c == 1:
                term = body
            elif c == -1:
                term = f"-{body}"
            else:
                term = f"{c}*{body}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self):
        return f"Cyclo({self})"


def _coerce(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclo.rational(x)
    return NotImplemented


def cyclo_is_rational(a: Cyclo | int | Fraction) -> Fraction | None:
    """The value as a Fraction when it lies in Q, else None."""
    c = _coerce(a)
    if c is NotImplemented:
        raise BadParameter(f"not a cyclotomic value: {a!r}")
    return c.coeffs[0] if c.conductor == 1 else None


def coords_at_conductor(c: Cyclo, n: int) -> tuple[Fraction, ...]:
    """Power-basis coordinates of c inside Q(zeta_n).

    The conductor of c must divide n.
    """
    if n <= 0 or n % c.conductor:
        raise BadParameter(
            f"conductor {c.conductor} does not divide requested level {n}"
        )
    if c.conductor == n:
        return c.coeffs
    return tuple(_lift(list(c.coeffs), c.conductor, n))


def cyclo_sort_key(c: Cyclo):
    """Deterministic total order on cyclotomic numbers."""
    return (c.conductor, tuple((f.numerator, f.denominator) for f in c.coeffs))


def rat_to_str(q: Fraction) -> str:
    return str(q)


def rat_from_json(value, where: str = "") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise SchemaError(f"{where}: expected an integer or 'p/q' string")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: malformed rational {value!r}") from None


def cyclo_to_json(c: Cyclo) -> dict:
    coeffs = [[i, rat_to_str(f)] for i, f in enumerate(c.coeffs) if f]
    if not coeffs:
        coeffs = [[0, "0"]]
    return {"conductor": c.conductor, "coeffs": coeffs}


def cyclo_from_json(obj, where: str = "") -> Cyclo:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object with conductor/coeffs")
    n = obj.get("conductor")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError(f"{where}/conductor: expected a positive integer")
    coeffs = obj.get("coeffs")
    if not isinstance(coeffs, list):
        raise SchemaError(f"{where}/coeffs: expected a list of [exponent, value] pairs")
    terms = []
    for idx, pair in enumerate(coeffs):
        if not isinstance(pair, list) or len(pair) != 2:
            raise SchemaError(f"{where}/coeffs/{idx}: expected an [exponent, value] pair")
        exp, val = pair
        if not isinstance(exp, int) or isinstance(exp, bool):
            raise SchemaError(f"{where}/coeffs/{idx}/0: expected an integer exponent")
        terms.append((exp, rat_from_json(val, f"{where}/coeffs/{idx}/1")))
    return Cyclo.from_terms(n, terms)


# ---------------------------------------------------------------------------
# Rational matrices.


def _rref(rows: list[list[Fraction]]):
    """In-place reduced row echelon form; returns (rows, pivot columns)."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def _inverse_rows(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [list(row) + [Fraction(i == j) for j in range(n)] for i, row in enumerate(rows)]
    aug, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise Singular("matrix is singular")
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable matrix over the rationals."""

    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        data = [tuple(Fraction(x) for x in row) for row in rows]
        if not data:
            raise BadParameter("matrix needs at least one row")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise DimensionMismatch("ragged rows in matrix input")
        if width == 0:
            raise BadParameter("matrix needs at least one column")
        return cls(len(data), width, tuple(data))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(tuple(Fraction(i == j) for j in range(n)) for i in range(n)))

    def __mul__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        bt = list(zip(*other.entries))
        out = tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in bt) for row in self.entries
        )
        return RationalMatrix(self.rows, other.cols, out)

    def apply(self, vec) -> tuple:
        v = tuple(Fraction(x) for x in vec)
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} against {self.rows}x{self.cols}")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise DimensionMismatch("trace needs a square matrix")
        return sum(self.entries[i][i] for i in range(self.rows))


def mat_rank(a: RationalMatrix) -> int:
    rows, pivots = _rref([list(r) for r in a.entries])
    return len(pivots)


def mat_solve(a: RationalMatrix, b):
    """One solution of a x = b with free variables set to 0, or None."""
    rhs = tuple(Fraction(x) for x in b)
    if len(rhs) != a.rows:
        raise DimensionMismatch(f"rhs of length {len(rhs)} against {a.rows}x{a.cols}")
    aug = [list(row) + [rhs[i]] for i, row in enumerate(a.entries)]
    aug, pivots = _rref(aug)
    if pivots and pivots[-1] == a.cols:
        return None
    x = [Fraction(0)] * a.cols
    for r, p in enumerate(pivots):
        x[p] = aug[r][a.cols]
    return tuple(x)


def mat_solve_mat(a: RationalMatrix, b: RationalMatrix):
    """Solve a X = b column-wise; None if any column is inconsistent."""
    if b.rows != a.rows:
        raise DimensionMismatch(f"rhs {b.rows}x{b.cols} against {a.rows}x{a.cols}")
    aug = [list(row) + list(b.entries[i]) for i, row in enumerate(a.entries)]
    aug, pivots = _rref(aug)
    n = a.cols
    real_pivots = [p for p in pivots if p < n]
    if len(real_pivots) != len(pivots):
        return None
    for r in range(len(pivots), len(aug)):
        if any(aug[r][n:]):
            return None
    out = [[Fraction(0)] * b.cols for _ in range(n)]
    for r, p in enumerate(real_pivots):
        out[p] = aug[r][n:]
    return RationalMatrix(n, b.cols, tuple(tuple(row) for row in out))


def mat_inverse(a: RationalMatrix):
    """The inverse for square full-rank input, else None."""
    if a.rows != a.cols:
        raise DimensionMismatch("inverse needs a square matrix")
    try:
        inv = _inverse_rows([list(r) for r in a.entries])
    except Singular:
        return None
    return RationalMatrix(a.rows, a.cols, tuple(tuple(r) for r in inv))


def mat_kernel(a: RationalMatrix) -> tuple:
    """Canonical basis of the right null space (RREF free-column form)."""
    rows, pivots = _rref([list(r) for r in a.entries])
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * a.cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        basis.append(tuple(v))
    return tuple(basis)
