"""Totally imaginary quadratic extensions K = F(sqrt(delta)) of F = Q or Q(sqrt(d)).

Elements of K are stored as Q-coordinate tuples over the basis
(1, sqrt(d), s, sqrt(d)*s) with s = sqrt(delta); over Q the basis is (1, s).
Orders and ideals are full-rank Z-lattices in that basis (see ``algebra``).
"""

from fractions import Fraction
from functools import cached_property
from math import pi, sqrt

from sympy import factorint

from . import algebra as alg
from . import lattice as lat
from . import forms
from .numberfield import InputError, rational_sqrt, squarefree_part


class CMField:
    def __init__(self, F, delta):
        delta = F(delta)
        if not delta.is_totally_negative():
            raise InputError("delta must be totally negative, got %r" % (delta,))
        self.F = F
        self.delta = delta
        self.n = 2 * F.degree
        basis = [self._pair_of_basis(i) for i in range(self.n)]
        table = [[self.vec(*self._pmul(a, b)) for b in basis] for a in basis]
        self.A = alg.Algebra(table, self.vec(F(1), F(0)))

    def __repr__(self):
        return "CMField(%r, delta=%r)" % (self.F, self.delta)

    # --- coordinates ------------------------------------------------------

    def vec(self, u, v):
        u, v = self.F(u), self.F(v)
        if self.F.is_rational:
            return (u.x, v.x)
        return (u.x, u.y, v.x, v.y)

    def pair(self, x):
        F = self.F
        if F.is_rational:
            return F(x[0]), F(x[1])
        return F(x[0], x[1]), F(x[2], x[3])

    def _pair_of_basis(self, i):
        e = [Fraction(int(i == k)) for k in range(self.n)]
        return self.pair(e)

    def _pmul(self, a, b):
        (u1, v1), (u2, v2) = a, b
        return (u1 * u2 + self.delta * v1 * v2, u1 * v2 + u2 * v1)

    def mul(self, x, y):
        return self.A.mul(x, y)

    def embed(self, a):
        return self.vec(self.F(a), self.F(0))

    def conj(self, x):
        u, v = self.pair(x)
        return self.vec(u, -v)

    def rel_norm(self, x):
        u, v = self.pair(x)
        return u * u - self.delta * v * v

    def rel_trace(self, x):
        u, _ = self.pair(x)
        return 2 * u

    def abs_norm(self, x):
        return self.rel_norm(x).norm()

    def trace_form(self, x, y):
        return self.rel_trace(self.mul(x, y)).trace()

    def is_integral(self, x):
        return self.F.is_integral(self.rel_trace(x)) and self.F.is_integral(self.rel_norm(x))

    def from_trace_norm(self, t, nrm):
        """A root (t + sqrt(t^2 - 4n))/2 of X^2 - tX + n, expressed in K."""
        F = self.F
        t, nrm = F(t), F(nrm)
        r = F.sqrt((t * t - 4 * nrm) / self.delta)
        if r is None:
            raise ValueError("X^2 - (%r)X + (%r) does not split in %r" % (t, nrm, self))
        return self.vec(t / 2, r / 2)

    def sqrt(self, z):
        """A square root of z in K, or None."""
        F = self.F
        x, y = self.pair(z)
        if y == 0:
            r = F.sqrt(x)
            if r is not None:
                return self.vec(r, 0)
            r = F.sqrt(x / self.delta)
            return self.vec(0, r) if r is not None else None
        m = F.sqrt(x * x - self.delta * y * y)
        if m is None:
            return None
        for mm in (m, -m):
            a = F.sqrt((x + mm) / 2)
            if a:
                w = self.vec(a, y / (2 * a))
                if self.mul(w, w) == tuple(z):
                    return w
        return None

    def same_field(self, delta):
        """True if F(sqrt(delta)) is this field (delta/self.delta a square)."""
        return self.F.sqrt(self.F(delta) / self.delta) is not None

    # --- orders -----------------------------------------------------------

    def of_basis(self):
        """Z-basis of O_F inside K."""
        F = self.F
        if F.is_rational:
            return [self.embed(1)]
        return [self.embed(1), self.embed(F.omega)]

    def order_generated(self, theta):
        """O_F[theta] for an integral theta."""
        gens = self.of_basis() + [self.mul(b, theta) for b in self.of_basis()]
        return alg.span(gens)

    def discriminant(self, L):
        return lat.det(lat.gram(L, self.trace_form))

    @cached_property
    def maximal_order(self):
        theta = self.from_trace_norm(0, -self.delta) if self.F.is_integral(self.delta) else None
        if theta is None:
            raise InputError("delta must be integral")
        L = self.order_generated(theta)
        disc = self.discriminant(L)
        bad = [p for p, e in factorint(abs(int(disc))).items() if e >= 2]
        for p in bad:
            L = self._saturate(L, p)
        return L

    def _saturate(self, L, p):
        """Enlarge the order L at p until it is p-maximal."""
        while True:
            new = None
            if p ** len(L) <= 20000:
                for c in alg.residues(L, p):
                    if not any(c):
                        continue
                    x = alg.combine(L, c, p)
                    if self.is_integral(x):
                        new = x
                        break
            else:
                # odd p: an integral (a + b s)/p has a in p O_F, so only b varies
                F = self.F
                for c in alg.residues(self.of_basis(), p):
                    if not any(c):
                        continue
                    b = F.from_coords(*c) if not F.is_rational else F(c[0])
                    x = self.vec(0, b / p)
                    if self.is_integral(x) and not alg.contains(L, x):
                        new = x
                        break
            if new is None or alg.contains(L, new):
                return L
            L = alg.ring_closure(self.A, list(L) + [new])

    def conductor_order(self, f_ideal):
        """O_F + f*O_K for an integral ideal f of O_F."""
        F = self.F
        OK = self.maximal_order
        fgens = [self.embed(g) for g in f_ideal.basis()] if not F.is_rational else [self.embed(f_ideal.A)]
        gens = self.of_basis() + [self.mul(g, b) for g in fgens for b in OK]
        return alg.span(gens)

    # --- roots of unity and units --------------------------------------------

    @cached_property
    def roots_of_unity(self):
        """All roots of unity of K as coordinate tuples."""
        F = self.F
        cands = [F(-1), F(0)]
        if F.d == 5:
            cands += [F(Fraction(-1, 2), Fraction(1, 2)), F(Fraction(-1, 2), Fraction(-1, 2))]
        if F.d == 2:
            cands += [F(0, 1)]
        if F.d == 3:
            cands += [F(0, 1)]
        gens = [self.embed(-1)]
        for c in cands:
            s = self.sqrt(self.embed(c * c - 4))
            if s is not None:
                gens.append(alg.Algebra.scale(Fraction(1, 2), alg.Algebra.add(self.embed(c), s)))
        one = self.embed(1)
        group = {one}
        frontier = [one]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in group:
                    group.add(y)
                    frontier.append(y)
                    if len(group) > 24:
                        raise RuntimeError("too many roots of unity")
        return sorted(group)

    def positive_unit_reps(self):
        """Totally positive units of O_F modulo squares of units."""
        F = self.F
        if F.is_rational or F.unit_norm == -1:
            return [F(1)]
        return [F(1), F.fund_unit if F.fund_unit.is_totally_positive() else -F.fund_unit]

    def unit_index(self, L):
        """w = [L^x : O_F^x], counted as the image of u -> u/conj(u) in mu_K."""
        Linv = lat.inverse(L)
        reps = self.positive_unit_reps()
        w = 0
        for z in self.roots_of_unity:
            for nu in reps:
                u = self.sqrt(self.mul(z, self.embed(nu)))
                if u is not None and lat.in_lattice(u, L, Linv):
                    w += 1
                    break
        return w

    # --- primes -------------------------------------------------------------

    def _v_coordinate(self, x):
        return self.pair(x)[1]

    def local_generator(self, P):
        """An element x of O_K with O_F[x] maximal at the F-prime P."""
        best, bv = None, None
        for b in self.maximal_order:
            v = self._v_coordinate(b)
            if not v:
                continue
            val = P.valuation(v)
            if bv is None or val < bv:
                best, bv = b, val
        return best

    def _residue_reps(self, P):
        F = self.F
        if F.is_rational or P.degree == 1:
            return [F(a) for a in range(P.p)]
        return [F.from_coords(a, b) for a in range(P.p) for b in range(P.p)]

    def _in_prime(self, P, z):
        z = self.F(z)
        if not self.F.is_integral(z):
            return False
        return P.ideal.contains(z) if not self.F.is_rational else z.x % P.p == 0

    def splitting_type(self, P):
        """'split', 'inert' or 'ramified' for the prime P of F in K."""
        return self._split_data(P)[0]

    def chi(self, P):
        return {"split": 1, "inert": -1, "ramified": 0}[self.splitting_type(P)]

    def _split_data(self, P):
        x = self.local_generator(P)
        t, nrm = self.rel_trace(x), self.rel_norm(x)
        disc = t * t - 4 * nrm
        if P.valuation(disc) > 0:
            kind = "ramified"
        elif P.p != 2:
            kind = "split" if P.square_character(disc) == 1 else "inert"
        else:
            kind = None
        roots = []
        if kind != "inert":
            if kind == "ramified" and P.p != 2:
                roots = [self._half_mod(P, t)]
            else:
                roots = [r for r in self._residue_reps(P) if self._in_prime(P, r * r - t * r + nrm)]
            if kind is None:
                kind = "split" if roots else "inert"
        return kind, x, roots

    def _half_mod(self, P, t):
        inv2 = (P.p + 1) // 2
        for r in self._residue_reps(P):
            if self._in_prime(P, 2 * r - t):
                return r
        return t * inv2

    def primes_above(self, P):
        """Prime ideals of O_K above P as (lattice, norm) pairs."""
        kind, x, roots = self._split_data(P)
        F = self.F
        OK = self.maximal_order
        pgens = [self.embed(g) for g in P.ideal.basis()] if not F.is_rational else [self.embed(P.p)]
        base = [self.mul(g, b) for g in pgens for b in OK]
        if kind == "inert":
            return [(alg.span(base), P.norm ** 2)]
        out = []
        for r in roots[:2] if kind == "split" else roots[:1]:
            y = alg.Algebra.sub(x, self.embed(r))
            gens = base + [self.mul(y, b) for b in OK]
            out.append((alg.span(gens), P.norm))
        return out

    def relative_discriminant_is_trivial(self):
        """K/F unramified at every finite prime, via |d_K| = d_F^2."""
        dF = self.F.disc if not self.F.is_rational else 1
        return abs(self.discriminant(self.maximal_order)) == dF * dF

    def minkowski_bound(self):
        n = self.n
        dk = abs(self.discriminant(self.maximal_order))
        fact = 1
        for k in range(2, n + 1):
            fact *= k
        return (4 / pi) ** (n // 2) * fact / n ** n * sqrt(float(dk))




    # --- ideal classes ------------------------------------------------------

    def polar(self, x, y):
        """Symmetric O_F-bilinear form with polar(x, x) = N_{K/F}(x)."""
        return self.rel_trace(self.mul(x, self.conj(y))) / 2

    def relative_norm_ideal(self, L):
        """N_{K/F}(L) as (integral ideal I, positive integer D) meaning I/D."""
        F = self.F
        vals = []
        # N(x + y) = N(x) + N(y) + Tr(x conj(y)), so these generate all norms
        for i, a in enumerate(L):
            for b in L[i:]:
                v = self.rel_norm(a) if a is b else 2 * self.polar(a, b)
                if v:
                    vals.append(v)
        D = 1
        for v in vals:
            for c in F.coords(v):
                D = lat.lcm(D, c.denominator)
        return F.ideal_from_elements([v * D for v in vals]), D

    def norm_class(self, L):
        """Narrow ideal class of N_{K/F}(L) in Cl^+(F)."""
        I, _ = self.relative_norm_ideal(L)
        return self.F.narrow_class_group.class_of_ideal(I)

    def principal_generator(self, L):
        """x with x*O_K = L for an O_K-ideal lattice L, or None."""
        F = self.F
        I, D = self.relative_norm_ideal(L)
        g = F.generator(I, totally_positive=True)
        if g is None:
            return None
        for c in self.positive_unit_reps():
            nu = g * c / D

            def bil(x, y, nu=nu):
                return (self.polar(x, y) / nu).trace()

            B = lat.lll(L, bil)
            G = lat.gram(B, bil)
            for coeffs, _ in lat.short_vectors(G, F.degree):
                x = alg.combine(B, coeffs)
                if self.rel_norm(x) == nu:
                    return x
        return None

    def ideal_product(self, I, J):
        return alg.product_lattice(self.A, I, J)

    def equivalent(self, I, J):
        """I and J lie in the same ideal class of O_K."""
        return self.principal_generator(alg.colon(self.A, I, J)) is not None

    def small_primes(self, bound):
        """Prime ideals of O_K of norm <= bound, as (lattice, norm)."""
        from sympy import primerange
        out = []
        for p in primerange(2, int(bound) + 1):
            for P in self.F.prime_ideals_above(p):
                if P.norm > bound:
                    continue
                out.extend(Q for Q in self.primes_above(P) if Q[1] <= bound)
        return out

    def class_group_reps(self, budget=4000):
        """Representatives of Cl(O_K), by closing the Minkowski primes under
        multiplication.  Raises BudgetExceeded after ``budget`` equivalence tests."""
        OK = self.maximal_order
        gens = [Q for Q, _ in self.small_primes(self.minkowski_bound())]
        reps = [(OK, self.norm_class(OK))]
        frontier = [OK]
        tests = 0
        while frontier:
            R = frontier.pop()
            for Q in gens:
                X = self.ideal_product(R, Q)
                cx = self.norm_class(X)
                seen = False
                for S, cs in reps:
                    if cs != cx:
                        continue
                    tests += 1
                    if tests > budget:
                        raise BudgetExceeded("class group enumeration exceeded %d tests" % budget)
                    if self.equivalent(X, S):
                        seen = True
                        break
                if not seen:
                    reps.append((X, cx))
                    frontier.append(X)
        return [R for R, _ in reps]

    @cached_property
    def class_number(self):
        return len(self.class_group_reps())

    def imaginary_quadratic_subfields(self):
        """Squarefree m1, m2 with K = F(sqrt(m1)) = Q(sqrt(d), sqrt(m1), sqrt(m2)),
        or None when K/Q is not biquadratic (or F = Q)."""
        F = self.F
        if F.is_rational:
            return None
        dl = self.delta
        if dl.y == 0:
            m1 = squarefree_part(dl.x)
        else:
            n = rational_sqrt(dl.norm())
            if n is None:
                return None
            v = dl.trace() + 2 * n
            if v == 0:
                v = dl.trace() - 2 * n
            m1 = squarefree_part(v)
        return m1, squarefree_part(m1 * F.d)

    def kuroda_class_number(self):
        """h(O_K) from the class number relation for imaginary biquadratic fields:
        h(K) = q(K) h(F) h(k1) h(k2) / 2, q(K) the unit index of the subfield units."""
        subs = self.imaginary_quadratic_subfields()
        if subs is None:
            return None
        hs, ws = [], []
        for m in subs:
            D = m if m % 4 == 1 else 4 * m
            hs.append(forms.class_number(D))
            ws.append({-1: 4, -3: 6}.get(m, 2))
        q = Fraction(self.unit_index(self.maximal_order) * 4, ws[0] * ws[1])
        h = q * self.F.h * hs[0] * hs[1] / 2
        if h.denominator != 1:
            raise ArithmeticError("non-integral class number relation for %r" % (self,))
        return int(h)



class BudgetExceeded(RuntimeError):
    pass


def cm_field_from_root(F, t, n):
    """The field F(theta) with theta^2 - t*theta + n = 0 (t^2 - 4n totally negative)."""
    t, n = F(t), F(n)
    return CMField(F, t * t - 4 * n)
