"""Exact dense linear algebra over the rationals and prime fields.

Matrices are small (a few thousand rows at most), so everything is
plain list-of-lists arithmetic: fraction-free Bareiss elimination with
row pivoting for integer/rational determinants, ordinary Gaussian
elimination mod p. No floating point anywhere in this module except
the explicit `to_float` conversion.

The field tag of an ExactMatrix is None for the rationals or the prime
p itself; mod-p entries are ints reduced to [0, p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm


class SingularMatrixError(ArithmeticError):
    """Raised where an exact solve meets a singular matrix.

    Deliberately a distinct type: the eigenvalue solver treats it as a
    retry signal (pick a new random coordinate change), not a bug.
    """


@dataclass
class ExactMatrix:
    """Dense exact matrix: entries over Q (field None) or F_p (field p)."""

    rows: list
    field: int | None = None

    def __post_init__(self):
        if self.rows:
            width = len(self.rows[0])
            if any(len(row) != width for row in self.rows):
                raise ValueError("ragged matrix")
        if self.field is not None:
            p = self.field
            self.rows = [
                [e % p if isinstance(e, int) else fraction_mod_p(e, p) for e in row]
                for row in self.rows
            ]

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def copy_rows(self):
        return [list(row) for row in self.rows]

    def submatrix(self, row_idx, col_idx) -> "ExactMatrix":
        return ExactMatrix([[self.rows[i][j] for j in col_idx] for i in row_idx], self.field)

    def permuted(self, row_perm, col_perm) -> "ExactMatrix":
        return self.submatrix(row_perm, col_perm)


def identity(n: int, field: int | None = None) -> ExactMatrix:
    return ExactMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)], field)


def matmul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.ncols != b.nrows:
        raise ValueError("shape mismatch")
    bt = list(zip(*b.rows)) if b.rows else []
    out = [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a.rows]
    return ExactMatrix(out, a.field)


def matvec(a: ExactMatrix, v) -> list:
    if a.ncols != len(v):
        raise ValueError("shape mismatch")
    out = [sum(x * y for x, y in zip(row, v)) for row in a.rows]
    if a.field is not None:
        out = [e % a.field for e in out]
    return out


def _int_rows(m: ExactMatrix):
    """Clear denominators row by row; returns (integer rows, total scale)."""
    rows = []
    scale = Fraction(1)
    for row in m.rows:
        denom = 1
        for e in row:
            if isinstance(e, Fraction):
                denom = lcm(denom, e.denominator)
        scale *= denom
        rows.append([int(e * denom) if isinstance(e, Fraction) else int(e) * denom for e in row])
    return rows, scale


def _det_bareiss_int(rows) -> int:
    """Fraction-free Bareiss elimination; rows is a square integer matrix
    that gets clobbered. Row pivoting on the first nonzero entry."""
    n = len(rows)
    sign = 1
    prev = 1
    for k in range(n - 1):
        pivot_row = next((i for i in range(k, n) if rows[i][k] != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            ri, rk = rows[i], rows[k]
            rik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - rik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    return sign * rows[n - 1][n - 1]


def _det_fp(rows, p: int) -> int:
    n = len(rows)
    det = 1
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if rows[i][k] % p != 0), None)
        if pivot_row is None:
            return 0
        if pivot_row != k:
            rows[k], rows[pivot_row] = rows[pivot_row], rows[k]
            det = -det
        pk = rows[k][k] % p
        det = det * pk % p
        inv = pow(pk, p - 2, p)
        for i in range(k + 1, n):
            factor = rows[i][k] * inv % p
            if factor:
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[k])]
    return det % p


def det(m: ExactMatrix):
    """Exact determinant. Bareiss over Q/Z, plain elimination over F_p."""
    if m.nrows != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    if m.nrows == 0:
        return 1 if m.field is None else 1 % m.field
    if m.field is not None:
        return _det_fp(m.copy_rows(), m.field)
    rows, scale = _int_rows(m)
    value = Fraction(_det_bareiss_int(rows)) / scale
    return int(value) if value.denominator == 1 else value


def _solve_fp(a_rows, b_rows, p: int):
    n = len(a_rows)
    width = len(b_rows[0])
    aug = [list(ra) + list(rb) for ra, rb in zip(a_rows, b_rows)]
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if aug[i][k] % p != 0), None)
        if pivot_row is None:
            raise SingularMatrixError("singular matrix over F_p")
        aug[k], aug[pivot_row] = aug[pivot_row], aug[k]
        inv = pow(aug[k][k], p - 2, p)
        aug[k] = [e * inv % p for e in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                factor = aug[i][k]
                aug[i] = [(a - factor * b) % p for a, b in zip(aug[i], aug[k])]
    return [row[n:n + width] for row in aug]


def _solve_qq(a_rows, b_rows):
    n = len(a_rows)
    width = len(b_rows[0])
    aug = [[Fraction(e) for e in ra] + [Fraction(e) for e in rb]
           for ra, rb in zip(a_rows, b_rows)]
    for k in range(n):
        # largest pivot keeps intermediate fractions smaller on the
        # integer matrices this sees in practice
        pivot_row = max(range(k, n), key=lambda i: abs(aug[i][k]))
        if aug[pivot_row][k] == 0:
            raise SingularMatrixError("singular matrix over Q")
        aug[k], aug[pivot_row] = aug[pivot_row], aug[k]
        pk = aug[k][k]
        aug[k] = [e / pk for e in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                factor = aug[i][k]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[k])]
    return [row[n:n + width] for row in aug]


def solve(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact X with A X = B; raises SingularMatrixError when A is singular."""
    if a.nrows != a.ncols:
        raise ValueError("solve needs a square matrix")
    if a.field != b.field:
        raise ValueError("field mismatch")
    if a.nrows != b.nrows:
        raise ValueError("shape mismatch")
    if a.nrows == 0:
        return ExactMatrix([], a.field)
    if a.field is not None:
        return ExactMatrix(_solve_fp(a.rows, b.rows, a.field), a.field)
    return ExactMatrix(_solve_qq(a.rows, b.rows), None)


def schur_complement(m: ExactMatrix, k: int) -> ExactMatrix:
    """M22 - M21 M11^{-1} M12 for the leading k x k block M11."""
    if m.nrows != m.ncols:
        raise ValueError("Schur complement needs a square matrix")
    if not 0 <= k <= m.nrows:
        raise ValueError("invalid split position")
    n = m.nrows
    lead = list(range(k))
    trail = list(range(k, n))
    m11 = m.submatrix(lead, lead)
    m12 = m.submatrix(lead, trail)
    m21 = m.submatrix(trail, lead)
    m22 = m.submatrix(trail, trail)
    if k == 0 or n == k:
        return m22
    x = solve(m11, m12)
    prod = matmul(m21, x)
    rows = [[a - b for a, b in zip(r22, rp)] for r22, rp in zip(m22.rows, prod.rows)]
    return ExactMatrix(rows, m.field)


def rank(m: ExactMatrix) -> int:
    """Rank by exact elimination."""
    if not m.rows:
        return 0
    p = m.field
    rows = [[Fraction(e) for e in row] for row in m.rows] if p is None else m.copy_rows()
    nr, nc = len(rows), len(rows[0])
    r = 0
    for col in range(nc):
        pivot_row = next(
            (i for i in range(r, nr) if (rows[i][col] if p is None else rows[i][col] % p) != 0),
            None,
        )
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        if p is None:
            pk = rows[r][col]
            rows[r] = [e / pk for e in rows[r]]
        else:
            inv = pow(rows[r][col], p - 2, p)
            rows[r] = [e * inv % p for e in rows[r]]
        for i in range(nr):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                if p is None:
                    rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
                else:
                    rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == nr:
            break
    return r


def nullspace(m: ExactMatrix) -> list[list]:
    """Basis of the right kernel, from the reduced row echelon form."""
    if not m.rows:
        return []
    p = m.field
    rows = [[Fraction(e) for e in row] for row in m.rows] if p is None else m.copy_rows()
    nr, nc = len(rows), len(rows[0])
    pivots = []
    r = 0
    for col in range(nc):
        pivot_row = next(
            (i for i in range(r, nr) if (rows[i][col] if p is None else rows[i][col] % p) != 0),
            None,
        )
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        if p is None:
            pk = rows[r][col]
            rows[r] = [e / pk for e in rows[r]]
        else:
            inv = pow(rows[r][col], p - 2, p)
            rows[r] = [e * inv % p for e in rows[r]]
        for i in range(nr):
            if i != r and rows[i][col]:
                factor = rows[i][col]
                if p is None:
                    rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
                else:
                    rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == nr:
            break
    basis = []
    free = [c for c in range(nc) if c not in pivots]
    one = 1 if p is None else 1
    for col in free:
        vec = [Fraction(0) if p is None else 0] * nc
        vec[col] = one
        for i, pc in enumerate(pivots):
            value = rows[i][col]
            vec[pc] = -value if p is None else (-value) % p
        basis.append(vec)
    return basis


def to_float(m: ExactMatrix):
    """float64 numpy copy (rationals only)."""
    import numpy as np

    if m.field is not None:
        raise ValueError("to_float is for rational matrices")
    return np.array([[float(e) for e in row] for row in m.rows], dtype=float)


def fraction_mod_p(value, p: int) -> int:
    """Image of an exact rational in F_p; denominator must be a unit."""
    value = Fraction(value)
    if value.denominator % p == 0:
        raise ZeroDivisionError(f"denominator of {value} vanishes mod {p}")
    return value.numerator * pow(value.denominator, p - 2, p) % p
