"""Quaternion algebras (a, b) over F = Q or Q(sqrt(d)) at the level of genus data.

Ramification is found from local Hilbert symbols.  Odd primes use the tame
symbol; dyadic primes of Q and split dyadic primes use the 2-adic formula;
inert or ramified dyadic primes use a finite search modulo P^(2e+1), which
decides solubility exactly by Hensel's lemma.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from sympy import factorint

from .numberfield import InputError, vp

# --- Hilbert symbols ----------------------------------------------------------


def _q2_symbol(a_val, a_unit, b_val, b_unit):
    """(a, b)_2 over Q_2 from valuations and odd units given mod 8."""
    def eps(u):
        return ((u - 1) // 2) % 2

    def omega(u):
        return ((u * u - 1) // 8) % 2

    e = eps(a_unit) * eps(b_unit) + a_val * omega(b_unit) + b_val * omega(a_unit)
    return -1 if e % 2 else 1


def _two_adic(z, P):
    """(valuation, odd unit mod 8) of z in Q_2 (z rational, or F-element at a split P)."""
    F = P.field
    z = F(z)
    if F.is_rational:
        x = z.x
        v = vp(x, 2)
        u = x / Fraction(2) ** v
        return v, u.numerator * pow(u.denominator, -1, 8) % 8
    v = P.valuation(z)
    w = z / Fraction(2) ** v if v >= 0 else z * Fraction(2) ** (-v)
    uu, vv = F.coords(w)
    den = uu.denominator * vv.denominator
    U, V = int(uu * den), int(vv * den)
    k = vp(den, 2)
    R = P._padic_root(k + 4)
    val = (U + V * R) % (2 ** (k + 4))
    val //= 2 ** k
    t = den // 2 ** k
    return v, (val * pow(t, -1, 8)) % 8


def _tame_symbol(a, b, P):
    F = P.field
    a, b = F(a), F(b)
    al, be = P.valuation(a), P.valuation(b)
    u = (F(-1) ** (al * be)) * a ** be / b ** al
    return P.square_character(u)


class _DyadicResidues:
    """O_F / P^m for a non-split dyadic prime P, in (1, omega) coordinates."""

    def __init__(self, P, m):
        F = P.field
        self.F, self.P = F, P
        I = F.unit_ideal()
        for _ in range(m):
            I = I * P.ideal
        self.I = I

    def canon(self, u, v):
        A, B, C = self.I.A, self.I.B, self.I.C
        k = u // A
        return (u - k * A, (v - k * B) % C)

    def elements(self):
        A, C = self.I.A, self.I.C
        return [(u, v) for u in range(A) for v in range(C)]

    def mul(self, x, y):
        T, N = self.F.omega_trace, self.F.omega_norm
        u1, v1 = x
        u2, v2 = y
        # omega^2 = T omega - N
        return self.canon(u1 * u2 - N * v1 * v2, u1 * v2 + u2 * v1 + T * v1 * v2)

    def add(self, x, y):
        return self.canon(x[0] + y[0], x[1] + y[1])

    def is_unit(self, x):
        return not self.P.ideal.contains(self.F.from_coords(*x))


def _dyadic_uniformizer_data(P):
    """(pi, g): pi in O_F with v_P(pi) = 1 and g with v_P(g) = -1, g integral away from P."""
    F = P.field
    if P.kind == "inert":
        return F(2), F(Fraction(1, 2))
    pi = F(1, 1) if F.d % 4 == 3 else F(0, 1)
    return pi, pi / 2


def _normalize_dyadic(z, P):
    """A P-integral element of O_F in the same square class as z with v_P in {0, 1}."""
    F = P.field
    pi, g = _dyadic_uniformizer_data(P)
    v = P.valuation(z)
    if v >= 2:
        z = z * g ** (2 * (v // 2))
    elif v < 0:
        z = z * pi ** (2 * ((-v + 1) // 2))
    # clear odd denominators with a square
    u, w = F.coords(z)
    den = u.denominator * w.denominator
    odd = den
    while odd % 2 == 0:
        odd //= 2
    z = z * odd * odd
    u, w = F.coords(z)
    if u.denominator != 1 or w.denominator != 1:
        raise ArithmeticError("dyadic normalization left a denominator at %r" % (P,))
    return z


def _dyadic_symbol_bruteforce(a, b, P):
    F = P.field
    e = 1 if P.kind == "inert" else 2
    m = 2 * e + 1
    a = _normalize_dyadic(F(a), P)
    b = _normalize_dyadic(F(b), P)
    if P.valuation(a) == 1 and P.valuation(b) == 1:
        b = _normalize_dyadic(-a * b, P)
    R = _DyadicResidues(P, m)
    ar = R.canon(*map(int, F.coords(a)))
    br = R.canon(*map(int, F.coords(b)))
    a_unit, b_unit = R.is_unit(ar), R.is_unit(br)
    elems = R.elements()
    sq = {x: R.mul(x, x) for x in elems}
    unit_squares = {sq[x] for x in elems if R.is_unit(x)}
    all_squares = set(sq.values())
    ax = {x: R.mul(ar, sq[x]) for x in elems}
    by = {y: R.mul(br, sq[y]) for y in elems}
    for x in elems:
        xu = a_unit and R.is_unit(x)
        for y in elems:
            t = R.add(ax[x], by[y])
            if t in unit_squares:
                return 1
            if (xu or (b_unit and R.is_unit(y))) and t in all_squares:
                return 1
    return -1


def _rational_dyadic_bruteforce(a, b):
    """(a, b)_2 over Q by the same finite search (used as a cross-check)."""
    def norm(z):
        z = Fraction(z)
        v = vp(z, 2)
        z = z / Fraction(4) ** (v // 2)
        odd = z.denominator
        return z * odd * odd
    a, b = norm(a), norm(b)
    if vp(a, 2) == 1 and vp(b, 2) == 1:
        b = norm(-a * b)
    a, b = int(a) % 8, int(b) % 8
    for x, y, z in product(range(8), repeat=3):
        if (a * x * x + b * y * y - z * z) % 8:
            continue
        if z % 2 or (a % 2 and x % 2) or (b % 2 and y % 2):
            return 1
    return -1


def hilbert_symbol(a, b, P):
    """Local Hilbert symbol (a, b)_P in {1, -1} at a finite prime P of F."""
    F = P.field
    a, b = F(a), F(b)
    if not a or not b:
        raise InputError("Hilbert symbol of zero")
    if P.p != 2:
        return _tame_symbol(a, b, P)
    if F.is_rational or P.kind == "split":
        av, au = _two_adic(a, P)
        bv, bu = _two_adic(b, P)
        return _q2_symbol(av, au, bv, bu)
    return _dyadic_symbol_bruteforce(a, b, P)


def real_hilbert_symbol(a, b, place):
    return -1 if a.sign(place) < 0 and b.sign(place) < 0 else 1


# --- algebras -----------------------------------------------------------------


@dataclass(frozen=True)
class QuaternionAlgebraSpec:
    base: object
    a: object
    b: object
    ram_finite: tuple
    ram_infinite: tuple

    @property
    def places(self):
        return tuple(range(self.base.degree))

    @property
    def totally_definite(self):
        return len(self.ram_infinite) == self.base.degree

    @property
    def eichler_condition(self):
        return len(self.ram_infinite) < self.base.degree

    def describe(self):
        fin = ",".join(P.label for P in self.ram_finite) or "-"
        return "(%r, %r) ram_finite={%s} ram_inf=%d" % (self.a, self.b, fin, len(self.ram_infinite))


def _relevant_primes(F, a, b):
    ps = {2}
    for z in (a, b):
        n = z.norm()
        for q in (n.numerator, n.denominator):
            ps.update(factorint(abs(q)))
    if not F.is_rational:
        ps.update(factorint(F.disc))
    ps.discard(1)
    out = []
    for p in sorted(ps):
        out.extend(F.prime_ideals_above(p))
    return out


def ramified_places(F, a, b):
    """(ram_finite, ram_infinite) of the algebra (a, b) over F."""
    a, b = F(a), F(b)
    if not a or not b:
        raise InputError("a and b must be nonzero")
    fin = tuple(P for P in _relevant_primes(F, a, b) if hilbert_symbol(a, b, P) == -1)
    inf = tuple(v for v in range(F.degree) if real_hilbert_symbol(a, b, v) == -1)
    if (len(fin) + len(inf)) % 2:
        raise ArithmeticError("odd number of ramified places for (%r, %r)" % (a, b))
    return fin, inf


def quaternion_algebra(F, a, b):
    a, b = F(a), F(b)
    fin, inf = ramified_places(F, a, b)
    return QuaternionAlgebraSpec(F, a, b, fin, inf)


def _small_totally_positive(F, height):
    out = []
    if F.is_rational:
        return [F(n) for n in range(1, height + 1)]
    from math import sqrt
    r = sqrt(F.d)
    w = ((1 + r) / 2, (1 - r) / 2) if F.disc == F.d else (r, -r)
    for v in range(-height, height + 1):
        # u + v*omega is totally positive once u exceeds both -v*omega'
        lo = int(max(-v * w[0], -v * w[1])) - 1
        for u in range(lo, lo + 2 * height + 2):
            z = F.from_coords(u, v)
            if z and z.is_totally_positive():
                out.append(z)
    out.sort(key=lambda z: (z.norm(), z.trace(), F.coords(z)))
    return out


def _candidate_pool(F, targets, height):
    pool = _small_totally_positive(F, height)
    extra = []
    for P in targets:
        for g in P.ideal.basis():
            for z in (g, -g, g * g, g * F.omega, g + P.p, g - P.p, g * F.fund_unit):
                if z and z.is_totally_positive():
                    extra.append(z)
                elif z and z.is_totally_negative():
                    extra.append(-z)
    # small totally positive elements of the target ideals and their product
    ideals = [P.ideal for P in targets]
    if len(ideals) > 1:
        prod = ideals[0]
        for I in ideals[1:]:
            prod = prod * I
        ideals = [prod] + ideals
    for I in ideals:
        g1, g2 = I.basis()
        found = []
        for u in range(-4, 5):
            for v in range(-4, 5):
                z = u * g1 + v * g2
                if z and z.is_totally_negative():
                    z = -z
                if z and z.is_totally_positive():
                    found.append(z)
        found.sort(key=lambda z: (abs(z.norm()), z.trace(), F.coords(z)))
        extra += found[:12]
    # products of the rational primes below the targets reach algebras
    # ramified at three or more primes
    primes = sorted({P.p for P in targets})
    for mask in range(3, 1 << len(primes)):
        if mask & (mask - 1):
            m = 1
            for k, q in enumerate(primes):
                if mask >> k & 1:
                    m *= q
            extra += [F(m), F(2 * m)]
    return extra + pool


def _odd_places_match(F, a, b, want):
    """Cheap prefilter: tame symbols at the odd primes agree with ``want``."""
    wanted = {(P.p, P.index) for P in want}
    for P in _relevant_primes(F, a, b):
        if P.p == 2:
            continue
        if (hilbert_symbol(a, b, P) == -1) != ((P.p, P.index) in wanted):
            return False
    return True


def algebra_with_ramification(F, ram_finite=(), definite=True, height=6, limit=20000):
    """First totally definite (a, b) (totally negative a, b) with the given finite
    ramification, searching small elements."""
    want = tuple(sorted(ram_finite, key=lambda P: (P.p, P.index)))
    if definite and (len(want) + F.degree) % 2:
        raise InputError("a definite algebra over %r needs an even number of ramified places" % (F,))
    pool = _candidate_pool(F, want, height)
    tried = 0
    seen = set()
    for i, x in enumerate(pool):
        for y in pool[i:]:
            key = (x.x, x.y, y.x, y.y)
            if key in seen:
                continue
            seen.add(key)
            tried += 1
            if tried > limit:
                raise RuntimeError("no algebra with ramification %s found within %d pairs"
                                   % ([P.label for P in want], limit))
            if not _odd_places_match(F, -x, -y, want):
                continue
            fin, inf = ramified_places(F, -x, -y)
            fin = tuple(sorted(fin, key=lambda P: (P.p, P.index)))
            if fin == want:
                return QuaternionAlgebraSpec(F, -x, -y, fin, inf)
    raise RuntimeError("search pool exhausted for ramification %s" % ([P.label for P in want],))


def find_unramified_definite_algebra(F, height=6, limit=20000):
    if F.degree % 2:
        raise InputError("no totally definite algebra unramified at all finite primes over %r" % (F,))
    return algebra_with_ramification(F, (), True, height, limit)


def restricted_class_number(alg):
    """h_D(F) = h(F) * 2^|S| / |sign image of the units at S|, S = ram_infinite."""
    F = alg.base
    S = alg.ram_infinite
    if F.is_rational:
        return 1
    signs = set()
    eps = F.fund_unit
    for u in (F(1), F(-1), eps, -eps):
        signs.add(tuple(u.sign(v) for v in S))
    return F.h * 2 ** len(S) // len(signs)


# --- Eichler orders -----------------------------------------------------------


@dataclass(frozen=True)
class EichlerOrderSpec:
    alg: QuaternionAlgebraSpec
    level_primes: tuple

    @property
    def base(self):
        return self.alg.base

    @property
    def ram_finite(self):
        return self.alg.ram_finite

    @property
    def disc_primes(self):
        return tuple(self.alg.ram_finite) + tuple(self.level_primes)

    @property
    def disc_norm(self):
        n = 1
        for P in self.disc_primes:
            n *= P.norm
        return n

    @property
    def level_norm(self):
        n = 1
        for P in self.level_primes:
            n *= P.norm
        return n

    def describe(self):
        lev = ",".join(P.label for P in self.level_primes) or "1"
        return "%s level=%s" % (self.alg.describe(), lev)


def eichler_order(alg, level=()):
    """Genus data of an Eichler order of squarefree level in ``alg``."""
    level = tuple(level)
    labels = [P.label for P in level]
    if len(set(labels)) != len(labels):
        raise InputError("level must be squarefree (repeated prime in %s)" % labels)
    ram = {P.label for P in alg.ram_finite}
    clash = [l for l in labels if l in ram]
    if clash:
        raise InputError("level primes %s meet the ramification of the algebra" % clash)
    level = tuple(sorted(level, key=lambda P: (P.p, P.index)))
    return EichlerOrderSpec(alg, level)
