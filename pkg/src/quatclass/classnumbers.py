"""Class numbers of Eichler orders from the spinor class number formula.

For a totally definite algebra the ideal classes split into fibers over the
narrow class group Cl^+(O_F) (the reduced norm map).  Each fiber size is

    h_sc = Mass_sc + 1/(2h^+) sum_{B non-selective} (w-1) M(B)
                   + 1/h^+    sum_{B selective} delta_B(c) (w-1) M(B),

and grouping fibers by ker(pi)-cosets gives the fibers over Cl(O_F).
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import cmorders
from .quatalg import restricted_class_number
from .selectivity import coset_sum_check, selectivity


class IntegralityError(ArithmeticError):
    pass


class TheoremViolation(ArithmeticError):
    pass


@dataclass
class FiberReport:
    order: object
    mass: Fraction
    mass_sc: Fraction
    psi_fibers: dict
    phi_fibers: dict
    total: int
    r: int
    divisibility: dict = field(default_factory=dict)
    assumptions: dict = field(default_factory=dict)
    selective: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    notes: list = field(default_factory=list)


def eichler_mass(order):
    """2^(1-n) |zeta_F(-1)| h(F) prod_ram (N P - 1) prod_level (N P + 1)."""
    F = order.base
    n = F.degree
    m = Fraction(1, 2 ** (n - 1)) * abs(F.zeta_minus_one) * F.h
    for P in order.ram_finite:
        m *= P.norm - 1
    for P in order.level_primes:
        m *= P.norm + 1
    return m


def spinor_class_mass(order):
    return eichler_mass(order) / order.base.h_plus


def _base_for(delta_base, B):
    """delta_base is an int or a map from extension tag to Delta(O_K, O)."""
    if isinstance(delta_base, dict):
        return delta_base.get(B.ext.tag, 1)
    return delta_base


def selectivity_reports(order, catalog, delta_base=1, override=None):
    out = []
    for B in catalog:
        M = cmorders.big_M(B, order)
        ov = override.get(B.label()) if override else None
        out.append(selectivity(B, order, M, _base_for(delta_base, B), ov))
    return out


def h_sc_fiber(order, c, reports, mass_sc=None, strict=True):
    """Fiber size over the narrow class index c.

    Evaluated twice: split into selective and non-selective sums, and as a
    single sum weighted by 2^s.  The two must agree.
    """
    F = order.base
    hp = F.h_plus
    if mass_sc is None:
        mass_sc = spinor_class_mass(order)
    non = sum(((R.B.w_B - 1) * R.M for R in reports if not R.selective), Fraction(0))
    sel = sum((R.delta_values[c] * (R.B.w_B - 1) * R.M for R in reports if R.selective), Fraction(0))
    v11 = mass_sc + non / (2 * hp) + sel / hp
    v8 = mass_sc + sum((2 ** R.s * R.delta_values[c] * (R.B.w_B - 1) * R.M for R in reports),
                       Fraction(0)) / (2 * hp)
    if v8 != v11:
        raise ArithmeticError("fiber formulas disagree at class %d: %s vs %s" % (c, v11, v8))
    if strict and (v11.denominator != 1 or v11 <= 0):
        raise IntegralityError(
            "non-integral fiber %s at class %d for %s: mass_sc=%s, terms=%s"
            % (v11, c, order.describe(), mass_sc,
               [(R.label, R.B.h_B, R.B.w_B, str(R.M), R.selective, R.delta_values[c]) for R in reports]))
    return v11


def phi_fibers(order, psi):
    """Fiber sizes over wide classes: sums of psi over each ker(pi)-coset."""
    G = order.base.narrow_class_group
    return [sum((psi[c] for c in coset), Fraction(0)) for coset in G.cosets]


def compute_fibers(order, catalog=None, delta_base=1, strict=True, budget=cmorders.DEFAULT_BUDGET,
                   override=None):
    F = order.base
    G = F.narrow_class_group
    mass = eichler_mass(order)
    if not order.alg.totally_definite:
        total = restricted_class_number(order.alg)
        rep = FiberReport(order, mass, None, {}, {}, total, G.r)
        rep.notes.append("Eichler condition holds: h(O) = h_D(F)")
        rep.divisibility = divisibility_verdict(order, rep)
        return rep
    if catalog is None:
        catalog = cmorders.catalog_for(F.d, budget)
    mass_sc = mass / F.h_plus
    reports = selectivity_reports(order, catalog, delta_base, override)
    labels = G.labels()
    psi = [h_sc_fiber(order, c, reports, mass_sc, strict) for c in range(len(G.group))]
    phi = phi_fibers(order, psi)
    total = sum(psi, Fraction(0))
    for R in reports:
        if R.selective and not coset_sum_check(R, G):
            raise ArithmeticError("coset sums differ from r/2 for %s" % R.label)
    rep = FiberReport(
        order, mass, mass_sc,
        {labels[c]: _num(v) for c, v in enumerate(psi)},
        {"W%d" % i: _num(v) for i, v in enumerate(phi)},
        _num(total), G.r,
        selective=[R.label for R in reports if R.selective],
        reports=reports,
        notes=list(catalog.notes),
    )
    rep.assumptions = {
        "delta_base": {R.B.ext.tag: _base_for(delta_base, R.B) for R in reports if R.selective},
        "delta": {R.label: R.delta_base for R in reports if R.selective},
        "mass_sc": "Mass / h+(F)",
    }
    rep.divisibility = divisibility_verdict(order, rep)
    return rep


def _num(v):
    return int(v) if v.denominator == 1 else v


def total_class_number(order, **kw):
    return compute_fibers(order, **kw).total


def divisibility_verdict(order, report):
    F = order.base
    total = report.total
    h, hp = F.h, F.h_plus
    out = {
        "h": h,
        "h_plus": hp,
        "h_divides": isinstance(total, int) and total % h == 0,
        "h_plus_divides": isinstance(total, int) and total % hp == 0,
        # with the Eichler condition h(O) = h_D(F), which h+(F) need not divide
        "h_plus_required": bool(order.ram_finite) and order.alg.totally_definite,
    }
    out["expected_negative"] = not out["h_plus_divides"] and not out["h_plus_required"]
    if isinstance(total, int):
        if not out["h_divides"]:
            raise TheoremViolation("h(F)=%d does not divide h(O)=%d for %s" % (h, total, order.describe()))
        if out["h_plus_required"] and not out["h_plus_divides"]:
            raise TheoremViolation("h+(F)=%d does not divide h(O)=%d for %s" % (hp, total, order.describe()))
    return out
