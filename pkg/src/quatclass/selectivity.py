"""Optimal spinor selectivity of CM orders for a genus of Eichler orders.

A catalog order B with field K is selective when M(B) != 0, K/F is
unramified at every finite prime, and every prime dividing d(O) to an odd
power splits in K.  For selective B the indicator delta on narrow classes is
the Artin character of K/F shifted by a base value; the base value of the
distinguished order is not determined here and is a configurable assumption.
"""

from dataclasses import dataclass
from fractions import Fraction

from .numberfield import make_artin_character


class SelectivityInvariantError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SelectivityReport:
    B: object
    cond_a: bool
    cond_b: bool
    s: int
    selective: bool
    delta_base: int
    delta_values: tuple
    M: Fraction

    @property
    def label(self):
        return self.B.label()


def is_unramified_cm_extension(ext):
    """K/F unramified at all finite primes, via |d_K| = d_F^2."""
    if ext.F.is_rational:
        return False
    return ext.unramified


def unramified_by_primes(ext):
    """Same question decided prime by prime: no prime above 2*N(delta) ramifies in K."""
    from sympy import factorint
    F = ext.F
    if F.is_rational:
        return False
    n = ext.delta.norm()
    ps = {2} | set(factorint(abs(n.numerator))) | set(factorint(n.denominator))
    for p in sorted(ps):
        for P in F.prime_ideals_above(p):
            if ext.chi(P) == 0:
                return False
    return True


def condition_b(ext, order):
    """Every prime with odd valuation in d(O) splits in K (squarefree d(O): all of them)."""
    return all(ext.chi(P) == 1 for P in order.disc_primes)


def artin_character(ext):
    """Artin character of K/F on narrow classes, cached on the extension."""
    chi = getattr(ext, "_artin", None)
    if chi is None:
        chi = make_artin_character(ext.F, ext.delta)
        ext._artin = chi
    return chi


def conductor_artin(B):
    """Artin symbol of the conductor of B (0 when it is trivial)."""
    if not B.conductor_primes:
        return 0
    G = B.ext.F.narrow_class_group
    return artin_character(B.ext)[G.class_of_ideal(B.conductor)]


def selectivity(B, order, M_B, delta_base=1, override=None):
    """Selectivity of B for the genus of ``order``.

    ``delta_base`` is the value of Delta(O_K, O) for the maximal order of
    B's field; an order of conductor f then has Delta(B, O) = delta_base +
    (f, K/F), since its optimal embeddings sit at distance v_P(f) from those
    of O_K in the tree at each P | f.  ``override`` sets Delta(B, O) directly.
    """
    F = order.base
    G = F.narrow_class_group
    n = len(G.group)
    cond_a = is_unramified_cm_extension(B.ext)
    cond_b = condition_b(B.ext, order)
    s = int(cond_a and cond_b)
    selective = bool(s) and M_B != 0
    base = None
    if selective:
        chi = artin_character(B.ext)
        base = override if override is not None else (delta_base + conductor_artin(B)) % 2
        values = tuple((c + base) % 2 for c in chi)
    else:
        values = (1 if M_B != 0 else 0,) * n
    return SelectivityReport(B, cond_a, cond_b, s, selective, base, values, M_B)


def coset_sum_check(report, G):
    """Sum of delta over every ker(pi)-coset equals r/2 (selective reports only)."""
    if not report.selective:
        return True
    r = G.r
    if r % 2:
        raise SelectivityInvariantError(
            "selective order %s over a field with r = %d" % (report.label, r))
    return all(sum(report.delta_values[c] for c in coset) == r // 2 for coset in G.cosets)
