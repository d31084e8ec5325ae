"""Exact integer-lattice linear algebra.

Everything here works on plain Python ints (arbitrary precision); matrices are
tuples of row tuples.  No floating point is used anywhere in this module.

Hermite normal form convention (column style): for an ``m x n`` matrix ``A`` of
full column rank we return ``H = A @ U`` with ``U`` unimodular and ``H`` lower
triangular in echelon sense: column ``j`` has its first nonzero entry (the
pivot) in row ``p_j`` with ``p_0 < p_1 < ... < p_{n-1}``, every pivot is
positive, and every entry to the left of a pivot satisfies
``0 <= H[p_j][k] < H[p_j][j]`` for ``k < j``.  The result is unique.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

IntVector = tuple[int, ...]
IntMatrix = tuple[IntVector, ...]


class LatticeError(ValueError):
    """Raised for invalid lattice input (zero vectors, rank defects, ...)."""


def as_int_vector(v: Sequence[int]) -> IntVector:
    out = []
    for x in v:
        if isinstance(x, bool) or int(x) != x:
            raise LatticeError(f"non-integer lattice coordinate {x!r}")
        out.append(int(x))
    return tuple(out)


def as_int_matrix(rows: Sequence[Sequence[int]]) -> IntMatrix:
    mat = tuple(as_int_vector(r) for r in rows)
    if mat and len({len(r) for r in mat}) != 1:
        raise LatticeError("ragged integer matrix")
    return mat


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def primitive(v: Sequence[int]) -> IntVector:
    """Divide ``v`` by the gcd of its entries, keeping direction and sign.

    >>> primitive([-3, 6])
    (-1, 2)
    """
    v = as_int_vector(v)
    g = vector_gcd(v)
    if g == 0:
        raise LatticeError("no primitive direction: zero vector")
    return tuple(x // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return vector_gcd(v) == 1


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a: IntMatrix) -> IntMatrix:
    return tuple(zip(*a)) if a else ()


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(a: IntMatrix, v: Sequence[int]) -> IntVector:
    return tuple(dot(row, v) for row in a)


def det(a: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise LatticeError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def is_unimodular(u: IntMatrix) -> bool:
    return abs(det(u)) == 1


def unimodular_inverse(u: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix (Gauss-Jordan over the integers)."""
    n = len(u)
    d = det(u)
    if abs(d) != 1:
        raise LatticeError(f"matrix is not unimodular (det = {d})")
    # Adjugate via cofactors is fine at the sizes we use (n <= 5 or so).
    inv = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = tuple(
                tuple(u[r][c] for c in range(n) if c != j) for r in range(n) if r != i
            )
            inv[j][i] = (-1) ** (i + j) * det(minor) * d  # 1/d == d for d = +-1
    return tuple(tuple(r) for r in inv)


def _column_echelon(a: IntMatrix) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Column-style echelon form for any integer matrix.

    Returns ``(H, U, pivot_rows)`` as mutable lists with ``A @ U == H``.  The
    first ``r = len(pivot_rows)`` columns of ``H`` carry the pivots; the
    remaining columns of ``H`` are zero, so the matching columns of ``U`` are a
    lattice basis of ``ker(A)``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    h = [list(r) for r in a]
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(j: int, k: int, s: int, t: int, p: int, q: int) -> None:
        # (col_j, col_k) <- (s col_j + t col_k, p col_j + q col_k)
        for mat in (h, u):
            for row in mat:
                x, y = row[j], row[k]
                row[j] = s * x + t * y
                row[k] = p * x + q * y

    pivots: list[int] = []
    col = 0
    for i in range(m):
        if col >= n:
            break
        for k in range(col + 1, n):
            b = h[i][k]
            if b == 0:
                continue
            a_ = h[i][col]
            g, s, t = ext_gcd(a_, b)
            colop(col, k, s, t, -b // g, a_ // g)
        if h[i][col] == 0:
            continue
        if h[i][col] < 0:
            for mat in (h, u):
                for row in mat:
                    row[col] = -row[col]
        piv = h[i][col]
        for k in range(col):
            q = h[i][k] // piv
            if q:
                for mat in (h, u):
                    for row in mat:
                        row[k] -= q * row[col]
        pivots.append(i)
        col += 1
    return h, u, pivots


def rank(a: IntMatrix) -> int:
    a = as_int_matrix(a)
    if not a:
        return 0
    return len(_column_echelon(a)[2])


def kernel_basis(a: IntMatrix) -> IntMatrix:
    """Columns of the returned matrix form a lattice basis of ``ker(A) ∩ Z^n``."""
    a = as_int_matrix(a)
    n = len(a[0])
    _, u, piv = _column_echelon(a)
    r = len(piv)
    return tuple(tuple(u[i][j] for j in range(r, n)) for i in range(n))


def hermite_normal_form(a: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Column Hermite normal form ``(H, U)`` with ``A @ U == H``.

    ``A`` must have full column rank.  See the module docstring for the
    normalisation convention.
    """
    a = as_int_matrix(a)
    if not a or not a[0]:
        raise LatticeError("empty matrix")
    n = len(a[0])
    h, u, piv = _column_echelon(a)
    if len(piv) != n:
        raise LatticeError(
            f"matrix is rank deficient: rank {len(piv)} < {n} columns"
        )
    return tuple(map(tuple, h)), tuple(map(tuple, u))


def complete_to_basis(xi: Sequence[int]) -> IntMatrix:
    """Unimodular ``U`` whose first column is the primitive vector ``xi``.

    Deterministic: the first nonzero coordinate becomes the pivot (a plain
    row swap when it is not already first), then the remaining coordinates are
    cleared against it by extended gcd in index order.  Standard basis vectors
    therefore give permutation matrices.
    """
    xi = as_int_vector(xi)
    n = len(xi)
    if n == 0:
        raise LatticeError("empty vector")
    if not is_primitive(xi):
        raise LatticeError(
            f"{list(xi)} is not primitive (gcd {vector_gcd(xi)}); call primitive() first"
        )
    # Build W with W @ xi == e_1 by row operations, then U = W^{-1}.
    # Rows of ``w`` carry the accumulated row operations; column n is xi itself.
    w = [list(r) + [c] for r, c in zip(identity(n), xi)]

    p = next(i for i, v in enumerate(xi) if v != 0)
    if p != 0:
        w[0], w[p] = w[p], w[0]
    for k in range(1, n):
        a, b = w[0][n], w[k][n]
        if b == 0:
            continue
        g, s, t = ext_gcd(a, b)
        r0, rk = w[0], w[k]
        w[0] = [s * x + t * y for x, y in zip(r0, rk)]
        w[k] = [(-b // g) * x + (a // g) * y for x, y in zip(r0, rk)]
    x = [row[n] for row in w]
    w = [row[:n] for row in w]
    if x[0] < 0:
        w[0] = [-v for v in w[0]]
        x[0] = -x[0]
    assert x[0] == 1 and all(v == 0 for v in x[1:])
    u = unimodular_inverse(tuple(map(tuple, w)))
    assert tuple(r[0] for r in u) == xi
    return u


def hyperplane_basis(xi: Sequence[int]) -> tuple[IntVector, IntMatrix]:
    """Lattice coordinates on the level sets of ``<xi, .>``.

    Returns ``(v1, B)`` with ``<xi, v1> = 1`` and the columns of ``B`` a basis
    of ``{w in Z^n : <xi, w> = 0}``.  Every lattice point with ``<xi, w> = c``
    is ``c * v1 + B @ y`` for exactly one ``y in Z^{n-1}``.
    """
    u = complete_to_basis(xi)
    v = transpose(unimodular_inverse(u))  # columns of v are dual to columns of u
    n = len(u)
    v1 = tuple(v[i][0] for i in range(n))
    b = tuple(tuple(v[i][j] for j in range(1, n)) for i in range(n))
    return v1, b
