"""Independent oracle: characteristic polynomial of a Coxeter element of D5.

Builds the simple reflections of the D5 root system from its Cartan matrix,
multiplies them in brute force and prints the characteristic polynomial.
Uses sympy only, so it shares no code with the package.

    python3 scripts/d5_coxeter_oracle.py
"""
import itertools

import sympy

# D5 Dynkin diagram: chain 0-1-2-3 with an extra node 4 attached to 2
EDGES = [(0, 1), (1, 2), (2, 3), (2, 4)]


def cartan(n=5, edges=EDGES):
    A = sympy.eye(n) * 2
    for i, j in edges:
        A[i, j] = A[j, i] = -1
    return A


def reflection(A, i):
    # s_i(alpha_j) = alpha_j - A[i, j] alpha_i, as a matrix on simple-root coordinates
    n = A.shape[0]
    S = sympy.eye(n)
    for j in range(n):
        S[i, j] -= A[i, j]
    return S


def coxeter_charpoly():
    A = cartan()
    t = sympy.Symbol("t")
    polys = set()
    # every ordering of the simple reflections gives a conjugate Coxeter element
    for order in itertools.permutations(range(5)):
        C = sympy.eye(5)
        for i in order:
            C = reflection(A, i) * C
        polys.add(sympy.expand(C.charpoly(t).as_expr()))
    assert len(polys) == 1
    return polys.pop(), t


if __name__ == "__main__":
    p, t = coxeter_charpoly()
    print("charpoly:", p)
    print("factored:", sympy.factor(p))
    print("coefficients:", " ".join(str(c) for c in sympy.Poly(p, t).all_coeffs()))
