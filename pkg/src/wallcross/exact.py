"""Exact rational linear algebra on nested lists of ``Fraction``.

Matrices are lists of rows.  Everything here is small (a handful of rows),
so plain Gaussian elimination is fast enough and keeps results exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Sequence

Matrix = list[list[Fraction]]


def to_fraction_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product ``a @ b``.  Shapes are ambiguous for empty factors; pass
    ``inner`` and ``cols`` explicitly there."""
    if inner is None:
        inner = len(a[0]) if a else len(b)
    if cols is None:
        cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                oi = out[i]
                for j in range(cols):
                    oi[j] += x * bk[j]
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def rref(rows: Matrix, ncols: int) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Matrix, ncols: int | None = None) -> int:
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    return len(rref(rows, ncols)[1])


def nullspace(rows: Matrix, ncols: int) -> Matrix:
    """Basis of ``{v : rows @ v = 0}`` as a list of vectors."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    red, pivots = rref(aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def ldl(gram: Sequence[Sequence]) -> tuple[Matrix, list[Fraction]]:
    """Exact symmetric LDL^T with symmetric pivoting disabled.

    Returns ``(L, D)`` with ``L`` unit lower triangular.  A zero pivot in a
    leading position raises ``ZeroDivisionError``; callers that only want
    the signature should use :func:`signature`.
    """
    n = len(gram)
    a = to_fraction_matrix(gram)
    lower = identity(n)
    d: list[Fraction] = []
    for j in range(n):
        dj = a[j][j] - sum(lower[j][k] ** 2 * d[k] for k in range(j))
        if dj == 0:
            raise ZeroDivisionError(f"zero pivot at position {j}")
        d.append(dj)
        for i in range(j + 1, n):
            s = a[i][j] - sum(lower[i][k] * lower[j][k] * d[k] for k in range(j))
            lower[i][j] = s / dj
    return lower, d


def congruence_diagonal(gram: Sequence[Sequence]) -> list[Fraction]:
    """Diagonal of a form congruent to ``gram`` over Q (handles zero pivots).

    Symmetric elimination; when the leading diagonal entry vanishes a
    later row/column is added to it first, which preserves congruence.
    """
    a = to_fraction_matrix(gram)
    n = len(a)
    diag: list[Fraction] = []
    for _ in range(n):
        m = len(a)
        if a[0][0] == 0:
            k = next((i for i in range(1, m) if a[i][i] != 0), None)
            if k is not None:
                a[0], a[k] = a[k], a[0]
                for row in a:
                    row[0], row[k] = row[k], row[0]
            else:
                k = next((i for i in range(1, m) if a[0][i] != 0), None)
                if k is not None:
                    # e0 -> e0 + ek makes the (0,0) entry 2*a[0][k] != 0
                    for j in range(m):
                        a[0][j] += a[k][j]
                    for i in range(m):
                        a[i][0] += a[i][k]
        p = a[0][0]
        diag.append(p)
        if p == 0:
            # whole first row is zero: the form splits off a zero summand
            a = [row[1:] for row in a[1:]]
            continue
        a = [[a[i][j] - a[i][0] * a[0][j] / p for j in range(1, m)] for i in range(1, m)]
    return diag


def signature(gram: Sequence[Sequence]) -> tuple[int, int, int]:
    """(positive, negative, zero) counts of the form's inertia."""
    diag = congruence_diagonal(gram)
    return (
        sum(1 for x in diag if x > 0),
        sum(1 for x in diag if x < 0),
        sum(1 for x in diag if x == 0),
    )


def is_positive_definite(gram: Sequence[Sequence]) -> bool:
    try:
        _, d = ldl(gram)
    except ZeroDivisionError:
        return False
    return all(x > 0 for x in d)


def floor_sqrt(q: Fraction) -> int:
    """Largest integer ``k >= 0`` with ``k*k <= q`` (``q >= 0``)."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative argument")
    k = isqrt(q.numerator // q.denominator)
    while (k + 1) ** 2 <= q:
        k += 1
    while k * k > q:
        k -= 1
    return k


def format_fraction(q: Fraction | int) -> str:
    """``"num/den"``, or a bare integer when the denominator is 1."""
    return str(Fraction(q))


def parse_fraction(s: str | int) -> Fraction:
    return Fraction(s)
