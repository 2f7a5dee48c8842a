"""Exact arithmetic in Q and real quadratic fields.

A field is a :class:`RealQuadraticField`; ``make_field(1)`` gives the rational
field, treated as a degenerate member of the family with trivial class groups
and a single real place.  Elements are :class:`FieldElement` (x + y*sqrt(d)
with rational x, y).  Integral ideals are kept as 2-dimensional Hermite bases
over the integral basis (1, omega).
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt

from sympy import factorint, isprime

from . import forms
from .lattice import hnf, isqrt_ceil, short_vectors


class InputError(ValueError):
    """Rejected user input (bad field, non-squarefree level, ...)."""


def is_squarefree(n):
    return n > 0 and all(e == 1 for e in factorint(n).values())


def vp(n, p):
    """p-adic valuation of a nonzero rational."""
    n = Fraction(n)
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    a, b = n.numerator, n.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def kronecker(D, p):
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    return legendre(D, p)


def rational_sqrt(q):
    """Nonnegative rational square root of q, or None."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def squarefree_part(q):
    """The squarefree integer m with q = m * (nonzero rational)^2."""
    q = Fraction(q)
    n = q.numerator * q.denominator
    m = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            m *= p
    return m


def sigma1(n):
    s = 1
    for p, e in factorint(n).items():
        s *= (p ** (e + 1) - 1) // (p - 1)
    return s


class FieldElement:
    """x + y*sqrt(d) with rational coordinates."""

    __slots__ = ("x", "y", "d")

    def __init__(self, x, y=0, d=1):
        x, y = Fraction(x), Fraction(y)
        if d == 1:
            x, y = x + y, Fraction(0)
        self.x, self.y, self.d = x, y, d

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.d != self.d and other.y != 0 and self.d != 1:
                raise ValueError("elements of different fields")
            return other
        return FieldElement(other, 0, self.d)

    def __add__(self, o):
        o = self._coerce(o)
        return FieldElement(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.x, -self.y, self.d)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __mul__(self, o):
        o = self._coerce(o)
        return FieldElement(self.x * o.x + self.d * self.y * o.y,
                            self.x * o.y + self.y * o.x, self.d)

    __rmul__ = __mul__

    def inverse(self):
        if self.d == 1:
            return FieldElement(1 / self.x)
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.x / n, -self.y / n, self.d)

    def __truediv__(self, o):
        return self * self._coerce(o).inverse()

    def __rtruediv__(self, o):
        return self._coerce(o) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r = FieldElement(1, 0, self.d)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def __eq__(self, o):
        if not isinstance(o, FieldElement):
            try:
                o = FieldElement(o, 0, self.d)
            except TypeError:
                return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __repr__(self):
        if self.y == 0:
            return str(self.x)
        sign = "+" if self.y > 0 else "-"
        return "%s%s%s*sqrt(%d)" % (self.x, sign, abs(self.y), self.d)

    def conj(self):
        return FieldElement(self.x, -self.y, self.d)

    def norm(self):
        if self.d == 1:
            return self.x
        return self.x * self.x - self.d * self.y * self.y

    def trace(self):
        return 2 * self.x if self.d != 1 else self.x

    def is_rational(self):
        return self.y == 0

    def sign(self, place=0):
        """Sign at the real place sending sqrt(d) to +sqrt(d) (0) or -sqrt(d) (1)."""
        x, y = self.x, (self.y if place == 0 else -self.y)
        if y == 0:
            return (x > 0) - (x < 0)
        if x == 0:
            return 1 if y > 0 else -1
        if (x > 0) == (y > 0):
            return 1 if x > 0 else -1
        # opposite signs: compare x^2 with d*y^2
        if x * x > self.d * y * y:
            return 1 if x > 0 else -1
        return 1 if y > 0 else -1

    def signs(self):
        if self.d == 1:
            return (self.sign(0),)
        return (self.sign(0), self.sign(1))

    def is_totally_positive(self):
        return all(s > 0 for s in self.signs())

    def is_totally_negative(self):
        return all(s < 0 for s in self.signs())

    def greater_than_one(self):
        return (self - 1).sign(0) > 0

    def approx(self):
        """Float value at the first real place (display only)."""
        return float(self.x) + float(self.y) * self.d ** 0.5


@dataclass(frozen=True)
class QuadIdeal:
    """Integral ideal with Hermite basis rows [[A, B], [0, C]] over (1, omega).

    The Z-basis is {A + B*omega, C*omega}; the norm is A*C.
    """

    field: "RealQuadraticField" = dc_field(repr=False, compare=False, hash=False)
    A: int = 1
    B: int = 0
    C: int = 1

    @property
    def norm(self):
        return self.A * self.C

    def basis(self):
        F = self.field
        return [F.from_coords(self.A, self.B), F.from_coords(0, self.C)]

    def contains(self, z):
        u, v = self.field.coords(z)
        if u.denominator != 1 or v.denominator != 1:
            return False
        # u + v*omega = s*(A + B omega) + t*(C omega)
        if u % self.A:
            return False
        s = u // self.A
        return (v - s * self.B) % self.C == 0

    def __mul__(self, other):
        F = self.field
        gens = [a * b for a in self.basis() for b in other.basis()]
        return F.ideal_from_elements(gens)

    def __pow__(self, k):
        r = self.field.unit_ideal()
        for _ in range(k):
            r = r * self
        return r

    def key(self):
        return (self.A, self.B, self.C)


@dataclass(frozen=True)
class PrimeIdeal:
    """A nonzero prime of O_F.

    ``kind`` is 'split', 'inert', 'ramified' (or 'rational' over Q); ``root``
    is the image of omega in the residue field for degree-one primes.
    """

    field: "RealQuadraticField" = dc_field(repr=False, compare=False, hash=False)
    p: int = 2
    kind: str = "rational"
    root: int = 0
    index: int = 1

    @property
    def degree(self):
        return 2 if self.kind == "inert" else 1

    @property
    def norm(self):
        return self.p ** self.degree

    @property
    def label(self):
        if self.kind == "split":
            return "%d.%d" % (self.p, self.index)
        return str(self.p)

    def __repr__(self):
        return "PrimeIdeal(%s, %s)" % (self.label, self.kind)

    @cached_property
    def ideal(self):
        F = self.field
        if F.is_rational:
            return QuadIdeal(F, self.p, 0, 1)
        if self.kind == "inert":
            return F.ideal_from_elements([F.from_coords(self.p, 0), F.from_coords(0, self.p)])
        return F.ideal_from_elements([F.from_coords(self.p, 0), F.from_coords(-self.root, 1)])

    def _padic_root(self, prec):
        """omega mod p^prec at this degree-one prime (Hensel lift)."""
        F = self.field
        T, N = F.omega_trace, F.omega_norm
        mod = self.p
        r = self.root % mod
        k = 1
        while k < prec:
            k = min(2 * k, prec)
            mod = self.p ** k
            fr = (r * r - T * r + N) % mod
            dfr = (2 * r - T) % mod
            r = (r - fr * pow(dfr, -1, mod)) % mod
        return r

    def valuation(self, z):
        z = self.field(z)
        if not z:
            raise ValueError("valuation of zero")
        F = self.field
        if F.is_rational:
            return vp(z.x, self.p)
        if self.kind == "inert":
            return vp(z.norm(), self.p) // 2
        if self.kind == "ramified":
            return vp(z.norm(), self.p)
        u, v = F.coords(z)
        t = u.denominator * v.denominator // gcd(u.denominator, v.denominator)
        U, V = int(u * t), int(v * t)
        bound = vp(F.from_coords(U, V).norm(), self.p) + 1
        R = self._padic_root(bound + 1)
        w = (U + V * R) % self.p ** (bound + 1)
        return vp(w, self.p) - vp(t, self.p)

    def residue(self, z):
        """Image of a p-unit z in the residue field (degree-one primes only)."""
        F = self.field
        z = F(z)
        if self.degree != 1:
            raise ValueError("residue only implemented for degree-one primes")
        if F.is_rational:
            return z.x.numerator * pow(z.x.denominator, -1, self.p) % self.p
        u, v = F.coords(z)
        t = u.denominator * v.denominator // gcd(u.denominator, v.denominator)
        U, V = int(u * t), int(v * t)
        k = vp(t, self.p)
        R = self._padic_root(k + 1)
        w = (U + V * R) % self.p ** (k + 1)
        if w % self.p ** k:
            raise ValueError("element is not integral at %r" % (self,))
        w //= self.p ** k
        t0 = t // self.p ** k
        return w * pow(t0, -1, self.p) % self.p

    def square_character(self, z):
        """+1/-1 according as the p-unit z is a square mod this (odd) prime."""
        if self.p == 2:
            raise ValueError("dyadic prime")
        F = self.field
        z = F(z)
        if self.kind == "inert":
            return legendre(int(z.norm() % self.p if z.norm().denominator == 1
                                else z.norm().numerator * pow(z.norm().denominator, -1, self.p)), self.p)
        return legendre(self.residue(z), self.p)


class RealQuadraticField:
    """Q(sqrt(d)) for squarefree d > 1; d == 1 is the rational field."""

    def __init__(self, d):
        if d != 1 and not (d > 1 and is_squarefree(d)):
            raise InputError("d must be a squarefree integer > 1 (or 1 for Q), got %r" % (d,))
        self.d = d
        self.is_rational = d == 1
        if self.is_rational:
            self.disc = 1
            self.omega_trace, self.omega_norm = 0, 0
        elif d % 4 == 1:
            self.disc = d
            self.omega_trace, self.omega_norm = 1, (1 - d) // 4
        else:
            self.disc = 4 * d
            self.omega_trace, self.omega_norm = 0, -d

    def __repr__(self):
        return "Q" if self.is_rational else "Q(sqrt(%d))" % self.d

    def __eq__(self, o):
        return isinstance(o, RealQuadraticField) and o.d == self.d

    def __hash__(self):
        return hash(("F", self.d))

    @property
    def degree(self):
        return 1 if self.is_rational else 2

    def __call__(self, x, y=0):
        if isinstance(x, FieldElement):
            if x.d != self.d and not x.is_rational():
                raise ValueError("element of another field")
            return FieldElement(x.x, x.y, self.d)
        return FieldElement(x, y, self.d)

    @property
    def omega(self):
        if self.is_rational:
            return self(0)
        if self.d % 4 == 1:
            return self(Fraction(1, 2), Fraction(1, 2))
        return self(0, 1)

    @property
    def sqrt_d(self):
        return self(0, 1)

    def from_coords(self, u, v):
        """u + v*omega."""
        if self.is_rational:
            return self(u)
        return self(u) + self(v) * self.omega

    def coords(self, z):
        z = self(z)
        if self.is_rational:
            return (z.x, Fraction(0))
        if self.d % 4 == 1:
            # x + y sqrt(d) = (x - y) + 2y omega
            return (z.x - z.y, 2 * z.y)
        return (z.x, z.y)

    def is_integral(self, z):
        u, v = self.coords(z)
        return u.denominator == 1 and v.denominator == 1

    def sqrt(self, a):
        """A square root of a in F, or None."""
        a = self(a)
        if a.y == 0:
            r = rational_sqrt(a.x)
            if r is not None:
                return self(r)
            if self.is_rational:
                return None
            r = rational_sqrt(a.x / self.d)
            return self(0, r) if r is not None else None
        m = rational_sqrt(a.norm())
        if m is None:
            return None
        for mm in (m, -m):
            x = rational_sqrt((a.x + mm) / 2)
            if x:
                z = self(x, a.y / (2 * x))
                if z * z == a:
                    return z
        return None

    def is_square(self, a):
        return self.sqrt(a) is not None

    def weights(self, spread):
        """Totally positive rationals-plus-sqrt(d) weights lambda whose
        embedding ratios lambda_1/lambda_2 run over powers of 2 covering
        [1/spread, spread] (spread a float)."""
        if self.is_rational:
            return [self(1)]
        import math
        K = max(0, math.ceil(math.log2(max(spread, 1.0))))
        rd = math.sqrt(self.d)
        out = [self(1)]
        for k in range(1, K + 1):
            mu = 2.0 ** k
            a = Fraction(rd * (mu + 1) / (mu - 1)).limit_denominator(1 << 20)
            if a * a <= self.d:
                a = Fraction(isqrt(self.d) + 1)
            out.append(self(a, 1))
            out.append(self(a, -1))
        return out

    def generator(self, ideal, totally_positive=False):
        """A generator of the integral ideal, or None if it is not principal
        (in the narrow sense when ``totally_positive``)."""
        n = ideal.norm
        if self.is_rational:
            return self(n)
        B = ideal.basis()
        e = self.fund_unit.approx()
        found = None
        for lam in self.weights(e * e):
            def bil(u, v, lam=lam):
                return (lam * u * v).trace()
            G = [[bil(a, b) for b in B] for a in B]
            bound = Fraction(isqrt_ceil(9 * n * n * lam.norm()))
            for c, _ in short_vectors(G, bound):
                z = B[0] * c[0] + B[1] * c[1]
                if abs(z.norm()) == n:
                    found = z
                    break
            if found is not None:
                break
        if found is None:
            return None
        if not totally_positive:
            return found
        if found.is_totally_negative():
            return -found
        if found.is_totally_positive():
            return found
        if self.unit_norm == -1:
            z = found * self.fund_unit
            return z if z.is_totally_positive() else -z
        return None

    # --- units -----------------------------------------------------------

    @cached_property
    def fund_unit(self):
        if self.is_rational:
            return self(-1)
        return _fundamental_unit_cf(self)

    @property
    def unit_norm(self):
        if self.is_rational:
            return -1
        return int(self.fund_unit.norm())

    def fund_unit_coords(self):
        u, v = self.coords(self.fund_unit)
        return (int(u), int(v))

    def totally_positive_unit(self):
        """Generator of the totally positive units modulo nothing: eps or eps^2."""
        e = self.fund_unit
        return e if self.unit_norm == 1 else e * e

    # --- ideals ----------------------------------------------------------

    def ideal_from_elements(self, gens):
        rows = []
        for g in gens:
            u, v = self.coords(g)
            if u.denominator != 1 or v.denominator != 1:
                raise ValueError("non-integral generator %r" % (g,))
            if self.is_rational:
                rows.append([int(u), 0])
            else:
                rows.append([int(u), int(v)])
                # closure under omega
                w = g * self.omega
                a, b = self.coords(w)
                rows.append([int(a), int(b)])
        H = hnf(rows)
        if self.is_rational:
            return QuadIdeal(self, H[0][0], 0, 1)
        if len(H) != 2:
            raise ValueError("generators do not span a full ideal")
        (A, B), (_, C) = H
        return QuadIdeal(self, A, B, C)

    def unit_ideal(self):
        return QuadIdeal(self, 1, 0, 1)

    def principal_ideal(self, z):
        z = self(z)
        return self.ideal_from_elements([z])

    def splitting(self, p):
        """'split', 'inert' or 'ramified' (Kronecker symbol of disc at p)."""
        if not isprime(p):
            raise InputError("%r is not prime" % (p,))
        if self.is_rational:
            return "split"
        k = kronecker(self.disc, p)
        return {1: "split", -1: "inert", 0: "ramified"}[k]

    def prime_ideals_above(self, p):
        if not isprime(p):
            raise InputError("%r is not prime" % (p,))
        if self.is_rational:
            return [PrimeIdeal(self, p, "rational", 0, 1)]
        kind = self.splitting(p)
        if kind == "inert":
            return [PrimeIdeal(self, p, "inert", 0, 1)]
        T, N = self.omega_trace, self.omega_norm
        roots = [r for r in range(p) if (r * r - T * r + N) % p == 0]
        if kind == "ramified":
            return [PrimeIdeal(self, p, "ramified", roots[0], 1)]
        return [PrimeIdeal(self, p, "split", r, i + 1) for i, r in enumerate(sorted(roots))]

    def prime_from_label(self, label):
        s = str(label).strip()
        if "." in s:
            p, i = s.split(".")
            p, i = int(p), int(i)
        else:
            p, i = int(s), 1
        P = self.prime_ideals_above(p)
        if i < 1 or i > len(P):
            raise InputError("no prime %s in %r" % (label, self))
        return P[i - 1]

    def primes_dividing(self, z):
        """Prime ideals dividing the nonzero integral element z (z may be rational)."""
        z = self(z)
        n = abs(z.norm())
        out = []
        for p in sorted(factorint(int(n.numerator * n.denominator)) if n != 1 else []):
            for P in self.prime_ideals_above(p):
                if P.valuation(z) != 0:
                    out.append(P)
        return out

    def ideal_to_form(self, ideal):
        """Binary quadratic form N(x alpha + y beta)/N(a) for an oriented basis."""
        al, be = ideal.basis()
        z = al * be.conj()
        if z.y < 0:
            al, be = be, al
        n = ideal.norm
        a = al.norm() / n
        b = (al * be.conj()).trace() / n
        c = be.norm() / n
        return (int(a), int(b), int(c))

    def element_to_form(self, z):
        """Form of the principal ideal (z), oriented by the sign of N(z)."""
        z = self(z)
        al, be = z, z * self.omega
        if (al * be.conj()).y < 0:
            al, be = be, al
        n = abs(z.norm())
        return (int(al.norm() / n), int((al * be.conj()).trace() / n), int(be.norm() / n))

    # --- class groups ------------------------------------------------------

    @cached_property
    def narrow_class_group(self):
        return narrow_class_group(self)

    @property
    def h_plus(self):
        return len(self.narrow_class_group.group)

    @property
    def h(self):
        return self.narrow_class_group.h

    @cached_property
    def zeta_minus_one(self):
        return zeta_minus_one(self)


def make_field(d):
    return RealQuadraticField(d)


def _fundamental_unit_cf(F):
    """Fundamental unit > 1 from the continued fraction of omega (or sqrt d)."""
    d = F.d
    # omega = (P + sqrt(d)) / Q with Q | d - P^2
    if d % 4 == 1:
        P, Q = 1, 2
    else:
        P, Q = 0, 1
    s = isqrt(d)
    om = F.omega
    p_prev, p_cur = 0, 1
    q_prev, q_cur = 1, 0
    for _ in range(100000):
        a = (P + s) // Q
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        # convergent p_cur / q_cur of omega
        eta = F(p_cur) - F(q_cur) * om
        n = eta.norm()
        if abs(n) == 1:
            for cand in (eta, -eta, eta.conj(), -eta.conj()):
                if cand.greater_than_one():
                    return cand
        P = a * Q - P
        Q = (d - P * P) // Q
    raise RuntimeError("continued fraction did not produce a unit")


class NarrowClassGroup:
    """Cl^+(O_F) as form classes of discriminant D_F, plus the projection to Cl(O_F)."""

    def __init__(self, F):
        self.field = F
        if F.is_rational:
            self.group = _TrivialGroup()
        else:
            self.group = forms.FormClassGroup(F.disc)
        g = self.class_of_form(F.element_to_form(F.sqrt_d)) if not F.is_rational else 0
        self.kernel_pi = self.group.subgroup([g])
        self.r = len(self.kernel_pi)
        self.cosets = self.group.cosets(self.kernel_pi)
        self.h = len(self.cosets)
        self._coset_of = {}
        for i, c in enumerate(self.cosets):
            for x in c:
                self._coset_of[x] = i

    @property
    def h_plus(self):
        return len(self.group)

    def class_of_form(self, f):
        if self.field.is_rational:
            return 0
        return self.group.class_of(f)

    def class_of_ideal(self, ideal):
        if self.field.is_rational:
            return 0
        return self.group.class_of(self.field.ideal_to_form(ideal))

    def project(self, c):
        """pi: narrow class index -> wide class (coset) index."""
        return self._coset_of[c]

    def labels(self):
        if self.field.is_rational:
            return ["1"]
        return ["(%d,%d,%d)" % f for f in self.group.elements]

    @cached_property
    def class_primes(self):
        """Split primes ordered by norm, each with its narrow class index."""
        return _PrimeClassIterator(self)

    def primes_in_class(self, c, count=1, avoid=1):
        return self.class_primes.find(c, count, avoid)


class _PrimeClassIterator:
    def __init__(self, G):
        self.G = G
        self.found = []
        self.next_p = 2

    def _extend(self):
        F = self.G.field
        while True:
            p = self.next_p
            self.next_p += 1
            if not isprime(p):
                continue
            if F.is_rational or F.splitting(p) == "split":
                for P in F.prime_ideals_above(p):
                    self.found.append((P, self.G.class_of_ideal(P.ideal)))
                return

    def find(self, c, count, avoid):
        out = []
        i = 0
        while len(out) < count:
            while i >= len(self.found):
                self._extend()
                if self.next_p > 10 ** 6:
                    raise RuntimeError("no prime found in class %r" % (c,))
            P, cls = self.found[i]
            i += 1
            if cls == c and avoid % P.p != 0:
                out.append(P)
        return out


class _TrivialGroup:
    elements = [(1, 0, 0)]

    def __len__(self):
        return 1

    def mul(self, i, j):
        return 0

    def inverse(self, i):
        return 0

    def subgroup(self, gens):
        return [0]

    def cosets(self, H):
        return [[0]]

    def class_of(self, f):
        return 0


def narrow_class_group(F):
    return NarrowClassGroup(F)


def class_group_projection(G):
    """(h, cosets of ker(pi), r) for a narrow class group."""
    return G.h, G.cosets, G.r


def zeta_minus_one(F):
    """zeta_F(-1) via Siegel's divisor-sum formula; -1/12 for Q."""
    if F.is_rational:
        return Fraction(-1, 12)
    D = F.disc
    total = 0
    b = D % 2
    while b * b < D:
        n = (D - b * b) // 4
        total += sigma1(n) * (1 if b == 0 else 2)
        b += 2
    return Fraction(total, 60)


def splitting(F, p):
    return F.splitting(p)


def prime_ideals_above(F, p):
    return F.prime_ideals_above(p)


def make_artin_character(F, delta, conductor_avoid=None):
    """Artin character Cl^+(O_F) -> Z/2 of the extension F(sqrt(delta)).

    Returns a list indexed by narrow class.  Values are computed on split
    primes coprime to 2*delta: 0 when delta is a square modulo the prime.
    The caller is responsible for checking that F(sqrt(delta))/F is
    unramified at every finite prime.
    """
    delta = F(delta)
    G = F.narrow_class_group
    avoid = 2 * abs(delta.norm().numerator) * F.disc
    out = []
    for c in range(len(G.group)):
        P = G.primes_in_class(c, 1, avoid)[0]
        out.append(0 if legendre(P.residue(delta), P.p) == 1 else 1)
    return out


def artin_symbol_at_prime(F, delta, P):
    """0 if the odd prime P (coprime to delta) splits in F(sqrt(delta)), else 1."""
    return 0 if P.square_character(F(delta)) == 1 else 1
