"""Independent class-number oracle over Q.

Builds explicit maximal and Eichler orders in definite rational quaternion
algebras (a, b) and enumerates right ideal classes by p-neighbors.  Two
ideals are equivalent when the colon lattice {x : xI <= J} holds an element
of reduced norm nrd(J)/nrd(I); enumeration stops once sum 1/w reaches the
Eichler mass, which certifies completeness.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import isqrt

from sympy import factorint, primerange

from . import algebra as alg
from . import lattice as lat


class OracleError(RuntimeError):
    pass


# --- the algebra ---------------------------------------------------------------

def quaternion_table(a, b):
    """Structure constants on 1, i, j, k = ij with i^2 = a, j^2 = b."""
    def e(c, k):
        v = [0, 0, 0, 0]
        v[k] = c
        return tuple(v)

    return [
        [e(1, 0), e(1, 1), e(1, 2), e(1, 3)],
        [e(1, 1), e(a, 0), e(1, 3), e(a, 2)],
        [e(1, 2), e(-1, 3), e(b, 0), e(-b, 1)],
        [e(1, 3), e(-a, 2), e(b, 1), e(-a * b, 0)],
    ]


def nrd(a, b, x):
    return x[0] ** 2 - a * x[1] ** 2 - b * x[2] ** 2 + a * b * x[3] ** 2


def trd(x):
    return 2 * x[0]


def conj(x):
    return (x[0], -x[1], -x[2], -x[3])


def _rational_hilbert(a, b, p):
    """Classical Hilbert symbol (a, b)_p for nonzero integers a, b."""
    def split(n):
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return v, n

    al, u = split(a)
    be, v = split(b)
    if p == 2:
        eps = lambda n: ((n - 1) // 2) % 2
        om = lambda n: ((n * n - 1) // 8) % 2
        e = eps(u) * eps(v) + al * om(v) + be * om(u)
        return -1 if e % 2 else 1
    leg = lambda n: pow(n % p, (p - 1) // 2, p)
    sign = -1 if (al * be) % 2 and (p - 1) // 2 % 2 else 1
    t = 1
    if be % 2:
        t *= 1 if leg(u) == 1 else -1
    if al % 2:
        t *= 1 if leg(v) == 1 else -1
    return sign * t


def ramified_primes(a, b):
    ps = {2} | set(factorint(abs(a))) | set(factorint(abs(b)))
    return tuple(sorted(p for p in ps if _rational_hilbert(a, b, p) == -1))


def _squarefree_divisors(n):
    out = [1]
    for p in factorint(n):
        out += [d * p for d in out]
    return out


@lru_cache(maxsize=None)
def definite_algebra(D):
    """Negative (a, b) ramified exactly at the primes of D (odd count), with
    the extra primes of ab kept small so that saturation stays cheap."""
    target = tuple(sorted(factorint(D)))
    if len(target) % 2 == 0 or any(e > 1 for e in factorint(D).values()):
        raise ValueError("D must be squarefree with an odd number of primes")
    best = None
    for m in sorted(_squarefree_divisors(2 * D)):
        for q in [1] + list(primerange(3, 200)):
            for m2 in _squarefree_divisors(2 * D):
                a, b = -m, -m2 * q
                if ramified_primes(a, b) != target:
                    continue
                extra = max([p for p in factorint(a * b) if p not in target] + [1])
                score = (extra, abs(a * b))
                if best is None or score < best[0]:
                    best = (score, a, b)
        if best is not None and best[0][0] <= 3:
            break
    if best is None:
        raise OracleError("no algebra found for D=%d" % D)
    return best[1], best[2]


# --- orders --------------------------------------------------------------------

@dataclass
class RationalQuaternionOrder:
    a: int
    b: int
    basis: list
    level: int = 1
    ram: tuple = ()

    @property
    def algebra(self):
        return _algebra(self.a, self.b)

    @property
    def ram_product(self):
        r = 1
        for p in self.ram:
            r *= p
        return r

    @property
    def reduced_discriminant(self):
        return self.ram_product * self.level

    def trace_form_det(self):
        A = self.algebra
        return lat.det([[trd(A.mul(x, y)) for y in self.basis] for x in self.basis])


class QuaternionAlgebra(alg.Algebra):
    """(a, b) over Q with a closed-form product."""

    def __init__(self, a, b):
        super().__init__(quaternion_table(a, b), (1, 0, 0, 0))
        self.a, self.b = Fraction(a), Fraction(b)

    def mul(self, x, y):
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )


@lru_cache(maxsize=None)
def _algebra(a, b):
    return QuaternionAlgebra(a, b)


def discriminant_of(A, L):
    """Reduced discriminant from |det trd(e_i e_j)| = d^2."""
    dt = abs(lat.det([[trd(A.mul(x, y)) for y in L] for x in L]))
    s = isqrt(int(dt))
    if dt.denominator != 1 or s * s != dt:
        raise ArithmeticError("trace form determinant %s is not a square" % dt)
    return s


def _norm_gram(a, b, L):
    """Integer-coefficient description of nrd on L: (diagonal, off-diagonal, traces)."""
    n = len(L)
    diag = [nrd(a, b, x) for x in L]
    off = [[nrd(a, b, alg.Algebra.add(L[i], L[j])) - diag[i] - diag[j] for j in range(n)] for i in range(n)]
    return diag, off, [trd(x) for x in L]


def _saturate_once(A, a, b, L, p):
    """An order strictly containing L with index a power of p, or None."""
    diag, off, tr = _norm_gram(a, b, L)
    n = len(L)
    p2 = p * p
    for c in product(range(p), repeat=n):
        last = next((t for t in reversed(c) if t), 0)
        if last != 1:
            continue    # projective representatives only
        if sum(ci * ti for ci, ti in zip(c, tr)) % p:
            continue
        q = sum(diag[i] * c[i] * c[i] for i in range(n))
        q += sum(off[i][j] * c[i] * c[j] for i in range(n) for j in range(i + 1, n))
        if q % p2:
            continue
        x = alg.combine(L, c, p)
        M = alg.span(list(L) + [x])
        for _ in range(6):
            prods = [A.mul(u, v) for u in M for v in M]
            M2 = alg.span(list(M) + prods)
            if M2 == M:
                break
            M = M2
        else:
            continue
        if alg.is_order(A, M) and all(Fraction(v).denominator == 1 for v in _norm_gram(a, b, M)[0]):
            try:
                discriminant_of(A, M)
            except ArithmeticError:
                continue
            return M
    return None


def maximal_order(a, b, bound=8):
    """A maximal order of (a, b) (a, b < 0) by saturating Z<1, i, j, ij>."""
    if a >= 0 or b >= 0:
        raise ValueError("definite algebra needs a, b < 0")
    A = _algebra(a, b)
    ram = ramified_primes(a, b)
    target = 1
    for p in ram:
        target *= p
    L = alg.span([(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)])
    for _ in range(bound * 4):
        d = discriminant_of(A, L)
        if d == target:
            return RationalQuaternionOrder(a, b, L, 1, ram)
        extra = d // target
        p = min(factorint(extra))
        M = _saturate_once(A, a, b, L, p)
        if M is None:
            raise OracleError("saturation stalled at p=%d (disc %d, target %d)" % (p, d, target))
        L = M
    raise OracleError("saturation did not converge within bound %d" % bound)


def _kernel_mod_p(rows, p):
    """Basis (mod p) of {c : c * rows = 0 mod p} for a square integer matrix."""
    n = len(rows)
    # transpose so we solve M c = 0 with M = rows^T
    M = [[int(rows[j][i]) % p for j in range(n)] for i in range(n)]
    pivots, r = [], 0
    for col in range(n):
        piv = next((i for i in range(r, n) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][col], -1, p)
        M[r] = [v * inv % p for v in M[r]]
        for i in range(n):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [(u - f * v) % p for u, v in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -M[i][f] % p
        out.append(v)
    return out


def _coords(L, Linv, x):
    return [sum(x[k] * Linv[k][j] for k in range(4)) for j in range(4)]


def _idempotent(O, p):
    """e in O with e^2 = e mod pO and e of rank one, from a split characteristic polynomial."""
    a, b, L = O.a, O.b, O.basis
    for c in product(range(-2, 3), repeat=4):
        x = alg.combine(L, c)
        t, n = int(trd(x)), int(nrd(a, b, x))
        roots = [r for r in range(p) if (r * r - t * r + n) % p == 0]
        if len(roots) != 2:
            continue
        r1, r2 = roots
        inv = pow(r1 - r2, -1, p)
        # (x - r2)/(r1 - r2) mod p: trace 1, norm 0
        e = alg.Algebra.scale(inv, alg.Algebra.sub(x, alg.Algebra.scale(r2, (1, 0, 0, 0))))
        if int(trd(e)) % p == 1 and int(nrd(a, b, e)) % p == 0:
            return e
    return None


def _level_lattice(O, p):
    """{x in O : (1 - e) x e in pO} for a rank-one idempotent e mod p."""
    A, L = O.algebra, O.basis
    e = _idempotent(O, p)
    if e is None:
        raise OracleError("no idempotent mod %d: algebra not split there" % p)
    f = alg.Algebra.sub(A.one, e)
    Linv = lat.inverse(L)
    rows = [_coords(L, Linv, A.mul(A.mul(f, x), e)) for x in L]
    ker = _kernel_mod_p(rows, p)
    gens = [alg.Algebra.scale(p, x) for x in L] + [alg.combine(L, c) for c in ker]
    return alg.span(gens)


def _intersect(L1, L2):
    D = alg.span([tuple(r) for r in lat.dual_basis(L1)] + [tuple(r) for r in lat.dual_basis(L2)])
    return [tuple(r) for r in lat.dual_basis(D)]


def eichler_suborder(O, N):
    """Eichler order of level N inside the maximal order O."""
    if N < 1 or any(e > 1 for e in factorint(N).values()):
        raise ValueError("level must be squarefree")
    if any(N % p == 0 for p in O.ram):
        raise ValueError("level %d meets the ramified primes %s" % (N, O.ram))
    L = O.basis
    for p in factorint(N):
        L = _intersect(L, _level_lattice(O, p))
        L = alg.span(L)
    return RationalQuaternionOrder(O.a, O.b, L, N * O.level, O.ram)


# --- ideal classes -------------------------------------------------------------

@dataclass
class RightIdealClassSet:
    order: RationalQuaternionOrder
    representatives: list
    unit_indices: list
    norms: list = field(default_factory=list)

    @property
    def mass(self):
        return sum((Fraction(1, w) for w in self.unit_indices), Fraction(0))

    def __len__(self):
        return len(self.representatives)


def _bilinear(a, b):
    def f(x, y):
        # trd(x conj(y)) = 2 x0 y0 - 2a x1 y1 - 2b x2 y2 + 2ab x3 y3
        return 2 * (x[0] * y[0] - a * x[1] * y[1] - b * x[2] * y[2] + a * b * x[3] * y[3])
    return f


def reduce_basis(a, b, L):
    return [tuple(Fraction(x) for x in v) for v in lat.lll(L, _bilinear(a, b))]


def _ideal_norm(O, I):
    r = alg.covolume(I) / alg.covolume(O.basis)
    n = Fraction(isqrt(r.numerator), isqrt(r.denominator))
    if n * n != r:
        raise ArithmeticError("lattice is not an ideal of square index")
    return n


def unit_index(order_basis, a, b):
    """|O^x / +-1| for a definite order."""
    G = lat.gram(order_basis, _bilinear(a, b))
    return sum(1 for _ in lat.short_vectors(G, 2))


def left_order(A, I, a=None, b=None):
    L = alg.colon(A, I, I, side="left")
    return reduce_basis(a, b, L) if a is not None else L


def _theta(a, b, I, nI, depth=4):
    G = lat.gram(I, _bilinear(a, b))
    counts = [0] * depth
    for _, v in lat.short_vectors(G, 2 * depth * nI):
        k = v / (2 * nI)
        if k.denominator == 1 and 1 <= k <= depth:
            counts[int(k) - 1] += 1
    return tuple(counts)


def equivalent(O, I, nI, J, nJ):
    """Is there x with xI = J?  Equivalently J*conj(I) has an element of norm nI*nJ."""
    A, a, b = O.algebra, O.a, O.b
    P = reduce_basis(a, b, alg.product_lattice(A, J, [conj(x) for x in I]))
    want = nJ * nI
    G = lat.gram(P, _bilinear(a, b))
    for _, v in lat.short_vectors(G, 2 * want):
        if v == 2 * want:
            return True
    return False


def equivalent_by_colon(O, I, nI, J, nJ):
    """Same test through the colon lattice {x : xI <= J}."""
    A, a, b = O.algebra, O.a, O.b
    C = reduce_basis(a, b, alg.colon(A, I, J, side="left"))
    want = nJ / nI
    G = lat.gram(C, _bilinear(a, b))
    return any(v == 2 * want for _, v in lat.short_vectors(G, 2 * want))


def neighbors(O, I, p):
    """Right O-ideals J <= I with [I : J] = p^2 (the p-neighbors of I)."""
    A, a, b = O.algebra, O.a, O.b
    nI = _ideal_norm(O, I)
    pI = [alg.Algebra.scale(p, x) for x in I]
    out, seen = [], set()
    for c in product(range(p), repeat=4):
        last = next((t for t in reversed(c) if t), 0)
        if last != 1:
            continue
        x = alg.combine(I, c)
        if (nrd(a, b, x) / nI) % p:
            continue
        J = alg.span(pI + [A.mul(x, y) for y in O.basis])
        key = tuple(J)
        if key in seen or alg.index(I, J) != p * p:
            continue
        seen.add(key)
        out.append(J)
    return out


def ideal_class_set(O, p=None, max_ideals=20000):
    """Right ideal classes of O, certified by the Eichler mass."""
    a, b, A = O.a, O.b, O.algebra
    target = eichler_mass_q(O.ram, O.level)
    if p is None:
        p = next(q for q in primerange(2, 1000) if O.reduced_discriminant % q)
    reps, ws, norms, thetas = [], [], [], []

    reps.append(O.basis)
    ws.append(unit_index(O.basis, a, b))
    norms.append(Fraction(1))
    thetas.append(_theta(a, b, O.basis, Fraction(1)))
    queue, seen = [0], 1
    mass = Fraction(1, ws[0])
    while queue and mass < target:
        i = queue.pop(0)
        for J in neighbors(O, reps[i], p):
            seen += 1
            if seen > max_ideals:
                raise OracleError("neighbor budget exhausted at mass %s of %s" % (mass, target))
            nJ = norms[i] * p
            J = reduce_basis(a, b, J)
            th = _theta(a, b, J, nJ)
            if any(t == th and equivalent(O, reps[k], norms[k], J, nJ) for k, t in enumerate(thetas)):
                continue
            w = unit_index(left_order(A, J, a, b), a, b)
            reps.append(J)
            ws.append(w)
            norms.append(nJ)
            thetas.append(th)
            queue.append(len(reps) - 1)
            mass += Fraction(1, w)
            if mass >= target:
                break
    if mass != target:
        raise OracleError("enumeration ended at mass %s, expected %s" % (mass, target))
    return RightIdealClassSet(O, reps, ws, norms)


def eichler_mass_q(ram, level):
    m = Fraction(1, 12)
    for p in ram:
        m *= p - 1
    for p in factorint(level):
        m *= p + 1
    return m


def order_for(D, N=1):
    """Eichler order of level N in the definite algebra of discriminant D."""
    a, b = definite_algebra(D)
    O = _maximal_cached(a, b)
    return eichler_suborder(O, N) if N > 1 else O


@lru_cache(maxsize=None)
def _maximal_cached(a, b):
    return maximal_order(a, b)


def class_count(D, N=1):
    return len(ideal_class_set(order_for(D, N)))
