"""Exact integer and rational matrix helpers.

Matrices are lists of rows of Python ints (or Fractions).  Everything here is
exact; nothing touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*M)] if M else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def vecmat(v: Sequence, A: Sequence[Sequence]) -> list:
    if not A:
        return []
    return [sum(x * A[i][j] for i, x in enumerate(v)) for j in range(len(A[0]))]


def congruent(B: Sequence[Sequence], G: Sequence[Sequence]) -> list[list]:
    """B G B^T."""
    BG = matmul(B, G)
    return matmul(BG, transpose(B))


def det(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    """Exact inverse over Q; raises ZeroDivisionError when singular."""
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def rank(M: Sequence[Sequence]) -> int:
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return 0
    r = 0
    ncols = len(A[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(r + 1, len(A)):
            if A[i][col] != 0:
                f = A[i][col] / A[r][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
        if r == len(A):
            break
    return r


def _row_echelon(A: Matrix, ncols: int | None = None) -> int:
    """In-place integer row echelon form on the first ``ncols`` columns.

    Only unimodular row operations are used, so any columns beyond ``ncols``
    record the transform.  Returns the number of pivot rows.
    """
    m = len(A)
    if m == 0:
        return 0
    ncols = len(A[0]) if ncols is None else ncols
    r = 0
    for col in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[piv] = A[piv], A[r]
            done = True
            for i in range(r + 1, m):
                if A[i][col] != 0:
                    f = A[i][col] // A[r][col]
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                    if A[i][col] != 0:
                        done = False
            if done:
                break
        if any(A[i][col] != 0 for i in range(r, m)):
            if A[r][col] < 0:
                A[r] = [-x for x in A[r]]
            for i in range(r):
                f = A[i][col] // A[r][col]
                if f:
                    A[i] = [x - f * y for x, y in zip(A[i], A[r])]
            r += 1
    return r


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row-style Hermite normal form; returns the nonzero rows only."""
    A = [list(map(int, row)) for row in rows]
    r = _row_echelon(A)
    return A[:r]


def left_kernel(A: Sequence[Sequence[int]]) -> Matrix:
    """Integral basis of {x in Z^m : x A = 0} (saturated)."""
    m = len(A)
    if m == 0:
        return []
    k = len(A[0])
    aug = [list(map(int, A[i])) + [int(i == j) for j in range(m)] for i in range(m)]
    r = _row_echelon(aug, k)
    kern = [row[k:] for row in aug[r:]]
    return hnf(kern) if kern else []


def smith(M: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U M V = D`` with U, V unimodular.

    Diagonal entries are nonnegative and each divides the next.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [list(map(int, row)) for row in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def nearest(a, b):
        q, r = divmod(a, b)
        return q + 1 if 2 * r > abs(b) else q

    t = 0
    while t < min(m, n):
        while True:
            # smallest entry of the remaining block as pivot keeps entries small
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                return _smith_sign(U, D, V)
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            for i in range(t + 1, m):
                if D[i][t]:
                    f = nearest(D[i][t], p)
                    D[i] = [x - f * y for x, y in zip(D[i], D[t])]
                    U[i] = [x - f * y for x, y in zip(U[i], U[t])]
            for j in range(t + 1, n):
                if D[t][j]:
                    f = nearest(D[t][j], p)
                    for row in D:
                        row[j] -= f * row[t]
                    for row in V:
                        row[j] -= f * row[t]
            if any(D[i][t] for i in range(t + 1, m)) or any(D[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            D[t] = [x + y for x, y in zip(D[t], D[bad])]
            U[t] = [x + y for x, y in zip(U[t], U[bad])]
        t += 1
    return _smith_sign(U, D, V)


def _smith_sign(U, D, V):
    for t in range(min(len(D), len(D[0]) if D else 0)):
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def lll_gram(G: Sequence[Sequence[int]], delta: float = 0.75) -> Matrix:
    """LLL-reduce a positive definite integral Gram matrix.

    Returns a unimodular T such that T G T^T is reduced.  The Gram matrix
    is kept exact; only the Gram-Schmidt data used to choose steps is
    floating point, so T is always unimodular even if reduction is loose.
    """
    n = len(G)
    G = [list(map(int, row)) for row in G]
    T = identity(n)
    if n <= 1:
        return T

    def gso():
        mu = [[0.0] * n for _ in range(n)]
        bstar = [0.0] * n
        for i in range(n):
            for j in range(i):
                s = G[i][j] - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
                mu[i][j] = s / bstar[j]
            bstar[i] = G[i][i] - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
        return mu, bstar

    def swap(k):
        T[k], T[k - 1] = T[k - 1], T[k]
        G[k], G[k - 1] = G[k - 1], G[k]
        for row in G:
            row[k], row[k - 1] = row[k - 1], row[k]

    G0 = [row[:] for row in G]
    k = 1
    mu, bstar = gso()
    steps = 0
    while k < n:
        changed = False
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                T[k] = [x - q * y for x, y in zip(T[k], T[j])]
                changed = True
                for i in range(j + 1):
                    mu[k][i] -= q * (mu[j][i] if i < j else 1.0)
        if changed:
            G[:] = congruent(T, G0)
            mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            swap(k)
            mu, bstar = gso()
            k = max(k - 1, 1)
        steps += 1
        if steps > 100000:
            break
    return T


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x) if x else out
    return out


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
