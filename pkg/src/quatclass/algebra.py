"""Finite-dimensional Q-algebras given by structure constants, and Z-lattices in them.

Used for both the quartic CM fields (commutative) and definite quaternion
algebras over Q.  Elements are tuples of Fractions in the algebra's basis;
lattices are lists of basis rows kept in Hermite normal form.
"""

from fractions import Fraction
from itertools import product

from . import lattice as lat


class Algebra:
    def __init__(self, table, one):
        # table[i][j] = coordinates of e_i * e_j
        self.n = len(table)
        self.table = [[tuple(Fraction(x) for x in v) for v in row] for row in table]
        self.one = tuple(Fraction(x) for x in one)

    def mul(self, x, y):
        n = self.n
        out = [Fraction(0)] * n
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            for j in range(n):
                c = xi * y[j]
                if not c:
                    continue
                for k, t in enumerate(self.table[i][j]):
                    if t:
                        out[k] += c * t
        return tuple(out)

    @staticmethod
    def add(x, y):
        return tuple(a + b for a, b in zip(x, y))

    @staticmethod
    def sub(x, y):
        return tuple(a - b for a, b in zip(x, y))

    @staticmethod
    def scale(c, x):
        c = Fraction(c)
        return tuple(c * a for a in x)

    def mul_matrix(self, x, side="left"):
        """Matrix M with (row vector y) * M = x*y (left) or y*x (right)."""
        rows = []
        for i in range(self.n):
            e = tuple(Fraction(int(i == k)) for k in range(self.n))
            rows.append(self.mul(x, e) if side == "left" else self.mul(e, x))
        return rows


def span(gens):
    """Hermite basis of the Z-module spanned by ``gens`` (full rank assumed by callers)."""
    return [tuple(r) for r in lat.rational_hnf([list(g) for g in gens])]


def product_lattice(A, I, J):
    return span([A.mul(x, y) for x in I for y in J])


def contains(L, x, Linv=None):
    return lat.in_lattice(x, L, Linv)


def contains_lattice(L, M):
    Linv = lat.inverse(L)
    return all(lat.in_lattice(x, L, Linv) for x in M)


def covolume(L):
    return abs(lat.det(L))


def index(big, small):
    """[big : small] for full lattices small <= big."""
    r = covolume(small) / covolume(big)
    if r.denominator != 1:
        raise ValueError("not a sublattice")
    return int(r)


def colon(A, I, J, side="left"):
    """{x : x*I <= J} (side='left') or {x : I*x <= J} (side='right')."""
    Jinv = lat.inverse(J)
    n = A.n
    # x * b lies in J  <=>  x * M_b * Jinv is integral, M_b the right-mult matrix of b
    rows = []
    for b in I:
        Mb = A.mul_matrix(b, side="right" if side == "left" else "left")
        # map x -> coordinates of (x*b) in J: x * Mb * Jinv
        T = [[sum(Mb[i][k] * Jinv[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        # constraint functionals are the columns of T
        for j in range(n):
            rows.append([T[i][j] for i in range(n)])
    # lattice of x with <row, x> integral for all rows = dual of the row span
    R = span(rows)
    return [tuple(r) for r in lat.dual_basis(R)]


def ring_closure(A, gens):
    """The Z-order generated by 1 and ``gens`` (must be integral elements)."""
    L = span([A.one] + list(gens))
    while True:
        prods = [A.mul(x, y) for x in L for y in L]
        L2 = span(list(L) + prods)
        if L2 == L:
            return L
        L = L2


def is_order(A, L):
    if not contains(L, A.one):
        return False
    Linv = lat.inverse(L)
    return all(lat.in_lattice(A.mul(x, y), L, Linv) for x in L for y in L)


def residues(L, p):
    """Coefficient vectors (mod p) enumerating L/pL."""
    return product(range(p), repeat=len(L))


def combine(L, coeffs, scale=1):
    n = len(L[0])
    out = [Fraction(0)] * n
    for c, b in zip(coeffs, L):
        if c:
            for k in range(n):
                out[k] += c * b[k]
    if scale != 1:
        out = [x / scale for x in out]
    return tuple(out)
