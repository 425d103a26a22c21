"""Intersection form, Picard-Lefschetz twists and the monodromy operator.

All arithmetic is on Python integers.  The characteristic polynomial uses
Berkowitz's division-free algorithm; determinant and rank use fraction-free
Bareiss elimination.
"""
from __future__ import annotations

from dataclasses import dataclass

from .intersection import local_intersections
from .regions import SignedDivide, two_color
from .surface import CycleSystem, RibbonSurface, build_surface, vanishing_cycles

Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# exact integer linear algebra

def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(r) for r in zip(*A)]


def bareiss_det(A: Matrix) -> int:
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def bareiss_rank(A: Matrix) -> int:
    if not A:
        return 0
    M = [list(r) for r in A]
    rows, cols = len(M), len(M[0])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(rank + 1, rows):
            for j in range(c + 1, cols):
                M[i][j] = (M[i][j] * M[rank][c] - M[i][c] * M[rank][j]) // prev
            M[i][c] = 0
        prev = M[rank][c]
        rank += 1
        if rank == rows:
            break
    return rank


def char_poly(A: Matrix) -> list[int]:
    """Coefficients of det(t*I - A), highest degree first (Berkowitz)."""
    n = len(A)
    if n == 0:
        return [1]
    # C holds the char poly of the leading r x r block, highest degree first
    C = [1, -A[0][0]]
    for r in range(1, n):
        R = A[r][:r]                 # row segment
        S = [A[i][r] for i in range(r)]  # column segment
        a = A[r][r]
        # Toeplitz column: 1, -a, -R S, -R M S, -R M^2 S, ...
        col = [1, -a]
        v = S
        for _ in range(r):
            col.append(-sum(x * y for x, y in zip(R, v)))
            v = [sum(A[i][j] * v[j] for j in range(r)) for i in range(r)]
        # multiply lower-triangular Toeplitz (r+2) x (r+1) by C
        C = [sum(col[i - j] * C[j] for j in range(0, min(i, r) + 1)) for i in range(r + 2)]
    return C


def format_poly(coeffs: list[int], var: str = "t") -> str:
    deg = len(coeffs) - 1
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        p = deg - i
        mag = abs(c)
        if p == 0:
            body = str(mag)
        else:
            body = ("" if mag == 1 else f"{mag}*") + (var if p == 1 else f"{var}^{p}")
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("- " if c < 0 else "+ ") + body)
    return " ".join(parts) if parts else "0"


def poly_eval(coeffs: list[int], x):
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# monodromy

def gram(s: RibbonSurface, cycles: CycleSystem) -> Matrix:
    """Skew-symmetric intersection matrix of the vanishing cycles."""
    return local_intersections(s, [c.walk for c in cycles], cycles.orientation)


def twist(G: Matrix, i: int) -> Matrix:
    """Matrix of the right Dehn twist along cycle ``i`` in the cycle basis.

    Column ``j`` holds the image of basis vector ``j``.  With the pairing
    <a, b> = +1 when the tangents (a', b') form a positive frame, the
    cylinder model (x, y) -> (x + y, y) sends a transverse arc g to
    g + d, and <g, d> = -1, so D_i(x) = x + <d_i, x> d_i.
    """
    n = len(G)
    D = identity(n)
    for j in range(n):
        D[i][j] += G[i][j]
    return D


def apply_twist(G: Matrix, i: int, M: Matrix) -> Matrix:
    """twist(G, i) @ M computed as a single row update."""
    out = [list(r) for r in M]
    row = out[i]
    for k, g in enumerate(G[i]):
        if g:
            src = M[k]
            for j in range(len(row)):
                row[j] += g * src[j]
    return out


def monodromy(G: Matrix) -> Matrix:
    """Product of the twists in basis order; the first twist is applied first."""
    T = identity(len(G))
    for i in range(len(G)):
        T = apply_twist(G, i, T)
    return T


def preserves_form(T: Matrix, G: Matrix) -> bool:
    return matmul(matmul(transpose(T), G), T) == G


def lefschetz(T: Matrix) -> int:
    return 1 - sum(T[i][i] for i in range(len(T)))


@dataclass(frozen=True)
class MonodromyData:
    signed: SignedDivide
    surface: RibbonSurface
    cycles: CycleSystem
    gram: Matrix
    monodromy: Matrix
    char_poly: list[int]
    lefschetz: int


def compute(divide, anchor=None) -> MonodromyData:
    """Full pipeline from a divide to its monodromy data."""
    sd = divide if isinstance(divide, SignedDivide) else two_color(divide, anchor)
    surf = build_surface(sd)
    cyc = vanishing_cycles(surf)
    G = gram(surf, cyc)
    T = monodromy(G)
    return MonodromyData(sd, surf, cyc, G, T, char_poly(T), lefschetz(T))
