"""Exact integer and rational matrix routines.

Matrices are plain lists of rows holding ``int`` or ``Fraction`` entries.
Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

Matrix = List[list]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> Matrix:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def bilinear(G: Sequence[Sequence], u: Sequence, v: Sequence):
    """Return ``u^T G v``."""
    return dot(u, mat_vec(G, v))


def copy_matrix(M: Sequence[Sequence]) -> Matrix:
    return [list(row) for row in M]


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def is_primitive(v: Sequence[int]) -> bool:
    return vec_gcd(v) == 1


def determinant(M: Sequence[Sequence]) -> Fraction:
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def rref(M: Sequence[Sequence]) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    A = [[Fraction(x) for x in row] for row in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        piv = A[r][c]
        A[r] = [x / piv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def solve(A: Sequence[Sequence], b: Sequence) -> Optional[list]:
    """One rational solution of ``A x = b`` or ``None`` if inconsistent.

    Free variables are set to zero, so the answer is deterministic.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [list(A[i]) + [b[i]] for i in range(rows)]
    R, piv = rref(aug)
    if cols in piv:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(piv):
        x[c] = R[i][cols]
    return x


def _swap_rows(M: Matrix, i: int, j: int) -> None:
    M[i], M[j] = M[j], M[i]


def _swap_cols(M: Matrix, i: int, j: int) -> None:
    for row in M:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(M: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V`` unimodular,
    ``D`` diagonal with non-negative entries and ``D[i][i] | D[i+1][i+1]``.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)
    t = 0
    while t < min(m, n):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        _swap_rows(D, t, pi)
        _swap_rows(U, t, pi)
        _swap_cols(D, t, pj)
        _swap_cols(V, t, pj)
        while True:
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // D[t][t]
                if q:
                    D[i] = [a - q * b for a, b in zip(D[i], D[t])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[t])]
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // D[t][t]
                if q:
                    for row in D:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                if D[t][j]:
                    done = False
            if done:
                bad = next(
                    ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                    None,
                )
                if bad is None:
                    break
                i = bad[0]
                D[t] = [a + b for a, b in zip(D[t], D[i])]
                U[t] = [a + b for a, b in zip(U[t], U[i])]
                continue
            # bring the smallest non-zero entry of row/column t to the pivot
            cand = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
            cand += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
            _, pi, pj = min(cand)
            _swap_rows(D, t, pi)
            _swap_rows(U, t, pi)
            _swap_cols(D, t, pj)
            _swap_cols(V, t, pj)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, D, V


def elementary_divisors(M: Sequence[Sequence[int]]) -> List[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def hermite_normal_form(M: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix]:
    """Row-style Hermite normal form ``H = U @ M`` with ``U`` unimodular.

    Pivots are positive and entries above a pivot lie in ``[0, pivot)``.
    Zero rows are moved to the bottom.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    H = [[int(x) for x in row] for row in M]
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [(abs(H[i][c]), i) for i in range(r, m) if H[i][c]]
            if not nz:
                break
            _, p = min(nz)
            _swap_rows(H, r, p)
            _swap_rows(U, r, p)
            clean = True
            for i in range(r + 1, m):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
                if H[i][c]:
                    clean = False
            if clean:
                break
        if r < m and H[r][c]:
            if H[r][c] < 0:
                H[r] = [-a for a in H[r]]
                U[r] = [-a for a in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[r])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[r])]
            r += 1
    return H, U


def integer_kernel(A: Sequence[Sequence[int]]) -> Matrix:
    """Basis (as rows) of the saturated integer kernel ``{x : A x = 0}``."""
    if not A:
        return []
    n = len(A[0])
    # column operations on A: HNF of A^T tracks them as row operations
    H, U = hermite_normal_form(transpose(A))
    return [U[i] for i in range(n) if not any(H[i])]


def complete_to_basis(vectors: Sequence[Sequence[int]], n: int) -> Matrix:
    """Extend vectors spanning a saturated sublattice of Z^n to a basis.

    Returns an ``n x n`` unimodular matrix whose first rows are ``vectors``.
    """
    k = len(vectors)
    if k == 0:
        return identity(n)
    U, D, V = smith_normal_form(vectors)
    if any(D[i][i] != 1 for i in range(k)):
        raise ValueError("vectors do not span a saturated sublattice")
    # vectors = U^{-1} [I 0] V^{-1}; rows of V^{-1} after the first k complete it
    Vinv = inverse(V)
    rest = [[int(x) for x in Vinv[i]] for i in range(k, n)]
    return [list(map(int, v)) for v in vectors] + rest


def saturation_index(vectors: Sequence[Sequence[int]]) -> int:
    """Index of the span of ``vectors`` in its saturation (0 if dependent)."""
    if not vectors:
        return 1
    d = elementary_divisors(vectors)
    out = 1
    for x in d:
        out *= x
    return out


def feasible_nonneg(A_eq: Sequence[Sequence], b_eq: Sequence) -> Optional[List[Fraction]]:
    """Exact phase-one simplex for ``{x >= 0 : A_eq x = b_eq}``.

    Returns a feasible point or ``None``. Bland's rule, so it terminates.
    """
    m = len(A_eq)
    n = len(A_eq[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    for i in range(m):
        row = [Fraction(x) for x in A_eq[i]]
        rhs = Fraction(b_eq[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        rows.append(row + [Fraction(int(j == i)) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    total = n + m
    # objective: minimise the sum of artificials
    while True:
        reduced = [Fraction(0)] * total
        for j in range(total):
            cj = Fraction(1) if j >= n else Fraction(0)
            reduced[j] = cj - sum((Fraction(1) if basis[i] >= n else Fraction(0)) * rows[i][j] for i in range(m))
        entering = next((j for j in range(total) if reduced[j] < 0), None)
        if entering is None:
            break
        ratios = [
            (rows[i][-1] / rows[i][entering], basis[i], i)
            for i in range(m)
            if rows[i][entering] > 0
        ]
        if not ratios:
            break
        _, _, leave = min(ratios)
        piv = rows[leave][entering]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][entering] != 0:
                f = rows[i][entering]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[leave])]
        basis[leave] = entering
    x = [Fraction(0)] * total
    for i in range(m):
        x[basis[i]] = rows[i][-1]
    if any(x[j] != 0 for j in range(n, total)):
        return None
    return x[:n]


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[List[int]]:
    """An integer solution of ``A x = b`` or ``None``.

    Uses ``U A V = D``: with ``y = V^{-1} x`` the system decouples into
    ``d_i y_i = (U b)_i``.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    U, D, V = smith_normal_form(A)
    c = mat_vec(U, [int(t) for t in b])
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d == 0:
            if c[i] != 0:
                return None
            continue
        if c[i] % d:
            return None
        y[i] = c[i] // d
    return mat_vec(V, y)
