"""Exact integer/rational lattice utilities.

Everything here works on lists of ``Fraction`` or ``int`` and never touches
floating point: Hermite normal form, LLL reduction, dual lattices and a
Fincke-Pohst style short vector enumeration.
"""

from fractions import Fraction
from math import gcd


def lcm(a, b):
    return a // gcd(a, b) * b


def common_denominator(rows):
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, Fraction(x).denominator)
    return den


def hnf(rows):
    """Row-style Hermite normal form of the Z-span of integer ``rows``.

    Returns the nonzero rows, upper triangular with positive pivots and
    entries above each pivot reduced into ``[0, pivot)``.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out = []
    for col in range(ncols):
        # gcd-combine every remaining row on this column into a single pivot
        piv = None
        rest = []
        for r in A:
            if r[col] == 0:
                rest.append(r)
                continue
            if piv is None:
                piv = r
                continue
            a, b = piv[col], r[col]
            g, x, y = _xgcd(a, b)
            new_piv = [x * u + y * v for u, v in zip(piv, r)]
            other = [(b // g) * u - (a // g) * v for u, v in zip(piv, r)]
            piv = new_piv
            if any(other):
                rest.append(other)
        if piv is None:
            continue
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        A = [r for r in rest if any(r)]
    # reduce entries above pivots
    for i in range(len(out)):
        pc = next(c for c in range(ncols) if out[i][c])
        p = out[i][pc]
        for k in range(i):
            q = out[k][pc] // p
            if q:
                out[k] = [u - q * v for u, v in zip(out[k], out[i])]
    return out


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def rational_hnf(rows):
    """HNF basis (as Fractions) of the Z-module spanned by rational rows."""
    den = common_denominator(rows)
    H = hnf([[int(Fraction(x) * den) for x in r] for r in rows])
    return [[Fraction(x, den) for x in r] for r in H]


def det(M):
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    sign = 1
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        d *= A[c][c]
        inv = 1 / A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] * inv
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return sign * d


def inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[p] = A[p], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return [row[n:] for row in A]


def solve_left(x, B):
    """Coordinates c with c * B = x (B square, rows are basis vectors)."""
    Binv = inverse(B)
    n = len(B)
    return [sum(Fraction(x[i]) * Binv[i][j] for i in range(n)) for j in range(n)]


def in_lattice(x, B, Binv=None):
    if Binv is None:
        Binv = inverse(B)
    n = len(B)
    for j in range(n):
        c = sum(Fraction(x[i]) * Binv[i][j] for i in range(n))
        if c.denominator != 1:
            return False
    return True


def dual_basis(B):
    """Rows of the dual lattice {y : <y, b> in Z for all b} of a full lattice."""
    Binv = inverse(B)
    n = len(B)
    return [[Binv[i][j] for i in range(n)] for j in range(n)]


def gram(B, bilinear):
    return [[bilinear(u, v) for v in B] for u in B]


def _ldl(G):
    n = len(G)
    q = [[Fraction(G[i][j]) for j in range(n)] for i in range(n)]
    # Cholesky-style decomposition without square roots
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(G, bound, include_zero=False):
    """Yield (x, q(x)) for all integer x with x^T G x <= bound.

    ``G`` must be a positive definite rational Gram matrix. Only one of
    each pair +-x is produced (the one whose last nonzero entry is positive).
    """
    n = len(G)
    bound = Fraction(bound)
    q = _ldl(G)
    x = [0] * n

    def centre(i):
        return -sum(q[i][j] * x[j] for j in range(i + 1, n))

    def rec(i, remaining):
        if i < 0:
            yield list(x)
            return
        c = centre(i)
        d = q[i][i]
        start = -((-c.numerator) // c.denominator)
        # walk up from ceil(c) and down from ceil(c) - 1; both runs move away
        # from the centre, so each stops at the first value over budget
        k = start
        while d * (k - c) ** 2 <= remaining:
            x[i] = k
            yield from rec(i - 1, remaining - d * (k - c) ** 2)
            k += 1
        k = start - 1
        while d * (k - c) ** 2 <= remaining:
            x[i] = k
            yield from rec(i - 1, remaining - d * (k - c) ** 2)
            k -= 1
        x[i] = 0

    for v in rec(n - 1, bound):
        last = next((t for t in reversed(v) if t), 0)
        if last < 0:
            continue
        if last == 0 and not include_zero:
            continue
        val = sum(G[i][j] * v[i] * v[j] for i in range(n) for j in range(n))
        if val <= bound:
            yield v, val


def lll(B, bilinear, delta=Fraction(3, 4)):
    """Exact LLL reduction of basis rows ``B`` for the given inner product.

    Returns the reduced basis (same lattice). Works over the rationals; the
    Gram-Schmidt data is computed once and then updated in place.
    """
    B = [list(b) for b in B]
    n = len(B)
    if n <= 1:
        return B
    G = [[Fraction(bilinear(B[i], B[j])) for j in range(n)] for i in range(n)]

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        bb = []
        for i in range(n):
            for j in range(i):
                mu[i][j] = (G[i][j] - sum(mu[j][k] * mu[i][k] * bb[k] for k in range(j))) / bb[j]
            bb.append(G[i][i] - sum(mu[i][k] ** 2 * bb[k] for k in range(i)))
        return mu, bb

    mu, bb = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            r = round(mu[k][j])
            if r:
                B[k] = [a - r * b for a, b in zip(B[k], B[j])]
                # size reduction leaves the Gram-Schmidt vectors alone
                for l in range(j):
                    mu[k][l] -= r * mu[j][l]
                mu[k][j] -= r
        if bb[k] >= (delta - mu[k][k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            # swap b_{k-1}, b_k and update the Gram-Schmidt data in place
            B[k], B[k - 1] = B[k - 1], B[k]
            m = mu[k][k - 1]
            big = bb[k] + m * m * bb[k - 1]
            mu[k][k - 1] = m * bb[k - 1] / big
            bb[k] = bb[k - 1] * bb[k] / big
            bb[k - 1] = big
            for j in range(k - 1):
                mu[k - 1][j], mu[k][j] = mu[k][j], mu[k - 1][j]
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - m * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(k - 1, 1)
    return B


def isqrt_ceil(fr):
    """Smallest integer s >= 0 with s*s >= fr (fr a nonnegative rational)."""
    fr = Fraction(fr)
    from math import isqrt
    s = isqrt(fr.numerator // fr.denominator)
    while Fraction(s * s) < fr:
        s += 1
    return s
