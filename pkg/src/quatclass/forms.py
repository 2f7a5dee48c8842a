"""Binary quadratic forms: Gauss composition, reduction and class groups.

Forms are plain integer triples ``(a, b, c)`` standing for a x^2 + b xy + c y^2.
Classes are taken up to proper (SL2(Z)) equivalence. For positive
discriminants a class is represented by the lexicographically smallest form
in its cycle of reduced forms; for negative discriminants by the unique
reduced positive form.
"""

from math import gcd, isqrt


def discriminant(f):
    a, b, c = f
    return b * b - 4 * a * c


def is_primitive(f):
    return gcd(gcd(f[0], f[1]), f[2]) == 1


def _xgcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f, g):
    """Gauss composition of two primitive forms of equal discriminant.

    Handles non-coprime leading coefficients; the result is not reduced.
    """
    f, g = _positive_leading(f), _positive_leading(g)
    a1, b1, c1 = f
    a2, b2, c2 = g
    if b1 * b1 - 4 * a1 * c1 != b2 * b2 - 4 * a2 * c2:
        raise ValueError("discriminants differ")
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = _xgcd_signed(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, u, v = _xgcd_signed(s, d)
        x2, y2 = u, -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    D = b1 * b1 - 4 * a1 * c1
    c3 = (b3 * b3 - D) // (4 * a3)
    return (a3, b3, c3)


def _positive_leading(f):
    """A properly equivalent form with a > 0 (x -> x + ky, y -> -x swaps)."""
    a, b, c = f
    if a > 0:
        return f
    if c > 0:
        return (c, -b, a)
    # both negative: shift so the new a = a + bk + ck^2 > 0 (indefinite only)
    k = 1
    while True:
        for kk in (k, -k):
            na = a + b * kk + c * kk * kk
            if na > 0:
                return (na, b + 2 * c * kk, c)
        k += 1
        if k > 10 ** 6:
            raise ValueError("form does not represent positive values: %r" % (f,))


def _xgcd_signed(a, b):
    g, x, y = _xgcd(a, b)
    if g < 0:
        g, x, y = -g, -x, -y
    return g, x, y


def _sqrt_floor(D):
    return isqrt(D)


def _lt_sqrt(x, D):
    """x < sqrt(D) for integer x and non-square D > 0."""
    return x < 0 or x * x < D


def is_reduced_indefinite(f):
    """|sqrt(D) - 2|a|| < b < sqrt(D)."""
    a, b, c = f
    D = discriminant(f)
    if b <= 0 or not _lt_sqrt(b, D):
        return False
    t = 2 * abs(a)
    return _lt_sqrt(t - b, D) and not _lt_sqrt(t + b, D)


def _normalize_b(b, a, D):
    """Representative of b mod 2|a| used by the rho step."""
    m = 2 * abs(a)
    s = _sqrt_floor(D)
    if abs(a) > s:
        # -|a| < b <= |a|
        r = b % m
        if r > abs(a):
            r -= m
        return r
    # sqrt(D) - 2|a| < b < sqrt(D): largest b' congruent to b with b' <= s
    r = s - ((s - b) % m)
    return r


def rho(f):
    """One reduction step (a, b, c) -> (c, b', a') for positive discriminant."""
    a, b, c = f
    D = discriminant(f)
    b2 = _normalize_b(-b, c, D)
    a2 = (b2 * b2 - D) // (4 * c)
    return (c, b2, a2)


def reduce_indefinite(f):
    D = discriminant(f)
    if D <= 0:
        raise ValueError("expected positive discriminant")
    g = f
    seen = 0
    while not is_reduced_indefinite(g):
        g = rho(g)
        seen += 1
        if seen > 10000:
            raise RuntimeError("reduction did not terminate for %r" % (f,))
    return g


def cycle(f):
    """The rho-cycle of a reduced indefinite form."""
    out = [f]
    g = rho(f)
    while g != f:
        out.append(g)
        g = rho(g)
        if len(out) > 100000:
            raise RuntimeError("cycle too long")
    return out


def reduce_definite(f):
    """Reduce a positive definite form to the unique reduced representative."""
    a, b, c = f
    if a <= 0:
        raise ValueError("expected positive definite form")
    while True:
        if b > a or b <= -a:
            # translate b into (-a, a]
            m = 2 * a
            k = (a - b) // m
            b2 = b + k * m
            if b2 <= -a:
                b2 += m
            c = (b2 * b2 - (b * b - 4 * a * c)) // (4 * a)
            b = b2
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return (a, b, c)


def canonical(f):
    D = discriminant(f)
    if D < 0:
        if f[0] < 0:
            raise ValueError("negative definite forms are not classes here")
        return reduce_definite(f)
    return min(cycle(reduce_indefinite(f)))


def principal_form(D):
    if D % 4 == 0:
        return (1, 0, -D // 4)
    return (1, 1, (1 - D) // 4)


def reduced_forms(D):
    """All reduced primitive forms of discriminant D (D not a square)."""
    out = []
    if D < 0:
        a = 1
        while 3 * a * a <= -D:
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                if gcd(gcd(a, b), c) == 1:
                    out.append((a, b, c))
            a += 1
        return out
    s = isqrt(D)
    for b in range(1, s + 1):
        if (b - D) % 2:
            continue
        ac = (b * b - D) // 4
        for a in range(1, -ac + 1):
            if ac % a:
                continue
            for sa in (a, -a):
                f = (sa, b, ac // sa)
                if is_primitive(f) and is_reduced_indefinite(f):
                    out.append(f)
    return out


class FormClassGroup:
    """Proper equivalence classes of primitive forms of discriminant D.

    ``elements`` holds canonical representatives with the principal class
    first; ``table[i][j]`` is the index of the product class.
    """

    def __init__(self, D):
        self.D = D
        reps = sorted({canonical(f) for f in reduced_forms(D)})
        e = canonical(principal_form(D))
        reps.remove(e)
        self.elements = [e] + reps
        self.index = {f: i for i, f in enumerate(self.elements)}
        n = len(self.elements)
        self.table = [[self.index[canonical(compose(self.elements[i], self.elements[j]))]
                       for j in range(n)] for i in range(n)]

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return "FormClassGroup(D=%d, order=%d)" % (self.D, len(self))

    def class_of(self, f):
        return self.index[canonical(f)]

    def mul(self, i, j):
        return self.table[i][j]

    def inverse(self, i):
        return self.table[i].index(0)

    def power(self, i, k):
        r = 0
        for _ in range(k):
            r = self.mul(r, i)
        return r

    def order_of(self, i):
        k, r = 1, i
        while r != 0:
            r = self.mul(r, i)
            k += 1
        return k

    def subgroup(self, gens):
        H = {0}
        frontier = [0]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in H:
                    H.add(y)
                    frontier.append(y)
        return sorted(H)

    def cosets(self, H):
        seen, out = set(), []
        for x in range(len(self)):
            if x in seen:
                continue
            c = sorted(self.mul(x, h) for h in H)
            seen.update(c)
            out.append(c)
        return out


def class_number(D):
    """Number of proper classes of primitive forms of discriminant D."""
    if D < 0:
        return len(reduced_forms(D))
    return len({canonical(f) for f in reduced_forms(D)})
