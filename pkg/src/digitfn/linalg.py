"""Exact rational linear algebra on plain nested lists of Fractions.

Rank decisions use fraction-free (Bareiss) elimination on integer-scaled rows;
pivots are taken from the first nonzero column, first nonzero row.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Vector = list
Matrix = list


def frac(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to Fraction.

    Floats are rejected: silently converting 0.1 to its binary expansion
    would defeat exactness.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def vec(xs: Iterable) -> Vector:
    return [frac(x) for x in xs]


def mat(rows: Iterable[Iterable]) -> Matrix:
    return [vec(r) for r in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def shape(a: Matrix) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else 0)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0)) for col in bt] for row in a]


def mat_vec(a: Matrix, x: Sequence) -> Vector:
    return [sum((p * q for p, q in zip(row, x) if p and q), Fraction(0)) for row in a]


def vec_mat(x: Sequence, a: Matrix) -> Vector:
    n = len(a[0]) if a else 0
    out = [Fraction(0)] * n
    for xi, row in zip(x, a):
        if xi:
            for j, aij in enumerate(row):
                if aij:
                    out[j] += xi * aij
    return out


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(x, y) if a and b), Fraction(0))


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(c, a: Matrix) -> Matrix:
    c = frac(c)
    return [[c * x for x in r] for r in a]


def vsub(x: Sequence, y: Sequence) -> Vector:
    return [a - b for a, b in zip(x, y)]


def vadd(x: Sequence, y: Sequence) -> Vector:
    return [a + b for a, b in zip(x, y)]


def outer(x: Sequence, y: Sequence) -> Matrix:
    return [[a * b for b in y] for a in x]


def transpose(a: Matrix) -> Matrix:
    return [list(c) for c in zip(*a)]


def mat_pow(a: Matrix, k: int) -> Matrix:
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        k >>= 1
        if k:
            base = mat_mul(base, base)
    return result


def kron(a: Matrix, b: Matrix) -> Matrix:
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def kron_vec(x: Sequence, y: Sequence) -> Vector:
    return [a * b for a in x for b in y]


def is_zero(x: Sequence) -> bool:
    return not any(x)


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = lcm(den, x.denominator)
    return [int(x * den) for x in row]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank via fraction-free Bareiss elimination."""
    a = [_integer_row(vec(r)) for r in rows]
    if not a:
        return 0
    n, m = len(a), len(a[0])
    prev = 1
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, n):
            ai = a[i]
            f = ai[c]
            a[i] = [(p * ai[j] - f * a[r][j]) // prev for j in range(m)]
        prev = p
        r += 1
        if r == n:
            break
    return r


def solve(a: Matrix, b: Sequence) -> Vector:
    """Solve ``a x = b`` for square nonsingular ``a``; raises ZeroDivisionError if singular."""
    n = len(a)
    aug = [list(a[i]) + [frac(b[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        p = aug[c][c]
        row = [x / p for x in aug[c]]
        aug[c] = row
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], row)]
    return [aug[i][n] for i in range(n)]


def solve_left(a: Matrix, b: Sequence) -> Vector:
    """Solve ``x a = b`` for a row vector x."""
    return solve(transpose(a), b)


class EchelonBasis:
    """Incrementally built basis of a subspace of Q^n.

    Vectors are kept in insertion order (``self.vectors``); a reduced echelon
    copy is maintained alongside for membership tests and for expressing a
    vector in terms of the inserted ones.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.vectors: list[Vector] = []
        self._rows: list[tuple[int, Vector, Vector]] = []  # (pivot, reduced row, combo)

    def __len__(self):
        return len(self.vectors)

    def _reduce(self, v: Sequence) -> tuple[Vector, Vector]:
        v = vec(v)
        coeffs = [Fraction(0)] * len(self.vectors)
        for p, row, combo in self._rows:
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
                for j, c in enumerate(combo):
                    if c:
                        coeffs[j] += f * c
        return v, coeffs

    def add(self, v: Sequence) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        residual, coeffs = self._reduce(v)
        p = next((i for i, x in enumerate(residual) if x), None)
        if p is None:
            return False
        k = len(self.vectors)
        self.vectors.append(vec(v))
        # residual = v - sum(coeffs_j * orig_j)
        combo = [-c for c in coeffs] + [Fraction(1)]
        for _, _, c in self._rows:
            c.append(Fraction(0))
        piv = residual[p]
        row = [x / piv for x in residual]
        combo = [c / piv for c in combo]
        # keep rows fully reduced on existing pivots
        new_rows = []
        for q_, r_, c_ in self._rows:
            if r_[p]:
                f = r_[p]
                r_ = [x - f * y for x, y in zip(r_, row)]
                c_ = [x - f * y for x, y in zip(c_, combo)]
            new_rows.append((q_, r_, c_))
        new_rows.append((p, row, combo))
        self._rows = new_rows
        assert len(combo) == k + 1
        return True

    def contains(self, v: Sequence) -> bool:
        residual, _ = self._reduce(v)
        return is_zero(residual)

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients c with ``v = sum(c_j * vectors[j])``; ValueError if v is outside the span."""
        residual, coeffs = self._reduce(v)
        if not is_zero(residual):
            raise ValueError("vector not in span")
        return coeffs


def span_basis(vectors: Iterable[Sequence], dim: int) -> EchelonBasis:
    basis = EchelonBasis(dim)
    for v in vectors:
        basis.add(v)
    return basis


def fmt(x: Fraction) -> str:
    x = frac(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
