"""The finite catalog of CM O_F-orders B with w(B) = [B^x : O_F^x] > 1.

Every such B contains a unit u outside O_F; u/conj(u) is then a root of unity
of K, and unwinding the possibilities shows B contains one of the sources

    i, zeta3, sqrt(-eps) (eps totally positive), zeta5 (d=5), zeta8 (d=2), zeta12 (d=3).

For each source theta we list the orders O_F + f*O_K containing O_F[theta]
and keep those with w > 1.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from sympy import factorint

from . import algebra as alg
from .cmfield import BudgetExceeded, CMField
from .numberfield import make_field

COMPLETENESS_NOTE = (
    "catalog complete for the listed unit sources; every order with w > 1 "
    "contains one of them (u/conj(u) is a root of unity of K)"
)

DEFAULT_BUDGET = 40


class UnsupportedConfiguration(ValueError):
    """Conductor of a CM order shares a prime with the reduced discriminant."""


class CatalogConflict(ValueError):
    pass


class TableError(ValueError):
    def __init__(self, problems):
        self.problems = problems
        super().__init__("; ".join("line %d: %s" % p for p in problems))


@dataclass
class CMExtension:
    F: object
    delta: object
    tag: str
    cm: CMField = field(repr=False)
    sources: tuple = ()

    @property
    def unramified(self):
        return self.cm.relative_discriminant_is_trivial()

    @property
    def rel_disc_norm(self):
        dF = self.F.disc if not self.F.is_rational else 1
        return int(abs(self.cm.discriminant(self.cm.maximal_order)) / (dF * dF))

    def chi(self, P):
        return self.cm.chi(P)


@dataclass
class CMOrderRecord:
    ext: CMExtension
    conductor: object            # QuadIdeal of O_F
    conductor_primes: tuple      # ((PrimeIdeal, exponent), ...)
    lattice: list = field(repr=False)
    w_B: int = 1
    h_B: int = 0
    provenance: str = "computed"

    @property
    def conductor_norm(self):
        return self.conductor.norm

    @property
    def conductor_label(self):
        if not self.conductor_primes:
            return "1"
        return "*".join(P.label + ("^%d" % e if e > 1 else "") for P, e in self.conductor_primes)

    @property
    def key(self):
        d = self.ext.F.d if not self.ext.F.is_rational else 1
        return (d, self.ext.tag, self.conductor_norm, self.conductor_label)

    def label(self):
        if self.conductor_norm == 1:
            return "O(%s)" % self.ext.tag
        return "O(%s, f=%s)" % (self.ext.tag, self.conductor_label)


@dataclass
class BCatalog:
    F: object
    members: list
    notes: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


# --- unit sources -----------------------------------------------------------

def unit_sources(F):
    """(tag, trace, norm) of each source theta: theta^2 - trace*theta + norm = 0."""
    out = [("F(i)", F(0), F(1)), ("F(zeta3)", F(-1), F(1))]
    if not F.is_rational and F.unit_norm == 1:
        eps = F.fund_unit
        out.append(("F(sqrt(-eps))", F(0), eps))
    if F.d == 5:
        out.append(("F(zeta5)", F(Fraction(-1, 2), Fraction(1, 2)), F(1)))
    if F.d == 2:
        out.append(("F(zeta8)", F(0, 1), F(1)))
    if F.d == 3:
        out.append(("F(zeta12)", F(0, 1), F(1)))
    return out


def _ideals_of_norm_dividing(F, n):
    """All integral O_F-ideals (with factorizations) whose norm divides n."""
    out = [(F.unit_ideal(), ())]
    for p in sorted(factorint(n)):
        for P in F.prime_ideals_above(p):
            new = []
            for I, fac in out:
                J, j = I, 0
                while n % (J.norm * P.norm) == 0:
                    J, j = J * P.ideal, j + 1
                    new.append((J, fac + ((P, j),)))
            out = out + new
    return out


def conductor_local_factor(ext, conductor_primes):
    """|(O_K/fO_K)^x| / |(O_F/f)^x| = N(f) * prod_{P | f} (1 - chi(P)/N(P))."""
    r = Fraction(1)
    for P, e in conductor_primes:
        r *= Fraction(P.norm) ** e * (1 - Fraction(ext.chi(P), P.norm))
    return r


def class_number_of_maximal(ext, budget=DEFAULT_BUDGET):
    """h(O_K) and the route used.  Enumeration runs when the Minkowski bound is
    within ``budget``; otherwise the class number relation for biquadratic K."""
    K = ext.cm
    if K.F.is_rational or K.minkowski_bound() <= budget:
        return K.class_number, "enumeration"
    h = K.kuroda_class_number()
    if h is not None:
        return h, "class-number-relation"
    raise BudgetExceeded(
        "Minkowski bound %.1f of %s over %r exceeds budget %s; supply a curated value"
        % (K.minkowski_bound(), ext.tag, ext.F, budget))


def class_number_of_cm_order(record, budget=DEFAULT_BUDGET):
    """h(B) = h(O_K) * w(B)/w(O_K) * N(f) * prod_{P|f}(1 - chi(P)/N(P))."""
    ext = record.ext
    hK, _ = class_number_of_maximal(ext, budget)
    wK = ext.cm.unit_index(ext.cm.maximal_order)
    h = hK * Fraction(record.w_B, wK) * conductor_local_factor(ext, record.conductor_primes)
    if h.denominator != 1:
        raise ArithmeticError("non-integral h(B) for %s" % record.label())
    return int(h)


# --- catalog ----------------------------------------------------------------

def build_catalog(F, budget=DEFAULT_BUDGET, curated=None):
    """All CM orders B over F with w(B) > 1, with h(B) and w(B).

    ``curated`` maps (d, tag, conductor_norm) -> (h, w, note); curated values
    are used where the computation exceeds the budget and must agree with
    computed values otherwise.
    """
    if isinstance(F, int):
        F = make_field(F)
    exts = []
    members = []
    seen = set()
    for tag, t, n in unit_sources(F):
        delta = t * t - 4 * n
        ext = next((e for e in exts if e.cm.same_field(delta)), None)
        if ext is None:
            ext = CMExtension(F, delta, tag, CMField(F, delta), (tag,))
            exts.append(ext)
        else:
            ext.sources = ext.sources + (tag,)
        K = ext.cm
        theta = K.from_trace_norm(t, n)
        OK = K.maximal_order
        base = K.order_generated(theta)
        index = alg.index(OK, base)
        for f, fac in _ideals_of_norm_dividing(F, index):
            B = K.conductor_order(f)
            if not alg.contains(B, theta):
                continue
            key = (id(ext), tuple(B))
            if key in seen:
                continue
            seen.add(key)
            w = K.unit_index(B)
            if w <= 1:
                continue
            members.append(CMOrderRecord(ext, f, tuple(fac), B, w))
    members.sort(key=lambda r: (r.ext.tag, r.conductor_norm, r.label()))
    _check_keys_unique(members)
    for rec in members:
        _assign_class_number(rec, budget, curated)
    notes = [COMPLETENESS_NOTE]
    return BCatalog(F, members, notes)


def _check_keys_unique(members):
    keys = [m.key for m in members]
    if len(set(keys)) != len(keys):
        raise CatalogConflict("two catalog orders share (field, tag, conductor)")


def _curated_entry(curated, rec):
    if not curated:
        return None
    if rec.key in curated:
        return curated[rec.key]
    # rows without an f= label match when the conductor norm is unambiguous
    return curated.get(rec.key[:3] + (None,))


def _assign_class_number(rec, budget, curated):
    cur = _curated_entry(curated, rec)
    try:
        h = class_number_of_cm_order(rec, budget)
        _, route = class_number_of_maximal(rec.ext, budget)
    except BudgetExceeded:
        if cur is None:
            raise
        h_c, w_c, _ = cur
        if w_c != rec.w_B:
            raise CatalogConflict("curated w=%d disagrees with computed w=%d for %r"
                                  % (w_c, rec.w_B, rec.key))
        rec.h_B, rec.provenance = h_c, "curated"
        return
    if cur is not None and (cur[0] != h or cur[1] != rec.w_B):
        raise CatalogConflict("curated (h, w)=%r disagrees with computed (%d, %d) for %r"
                              % (cur[:2], h, rec.w_B, rec.key))
    rec.h_B, rec.provenance = h, "computed:" + route


@lru_cache(maxsize=None)
def catalog_for(d, budget=DEFAULT_BUDGET):
    return build_catalog(make_field(d), budget)


# --- embedding numbers --------------------------------------------------------

def eichler_symbol(B, P):
    for Q, _ in B.conductor_primes:
        if Q == P:
            return 1
    return B.ext.chi(P)


def local_embedding_count(B, order, P):
    """Number of O_P^x-orbits of optimal embeddings of B_P into O_P."""
    ram = order.ram_finite
    lev = order.level_primes
    in_ram, in_level = P in ram, P in lev
    if not (in_ram or in_level):
        return 1
    if any(Q == P for Q, _ in B.conductor_primes):
        raise UnsupportedConfiguration(
            "conductor of %s meets the reduced discriminant at %s" % (B.label(), P.label))
    e = eichler_symbol(B, P)
    return 1 - e if in_ram else 1 + e


def embedding_profile(B, order):
    return {P.label: local_embedding_count(B, order, P)
            for P in list(order.ram_finite) + list(order.level_primes)}


def big_M(B, order):
    """M(B) = h(B)/w(B) * prod_P m_P."""
    m = Fraction(B.h_B, B.w_B)
    for v in embedding_profile(B, order).values():
        m *= v
    return m


# --- curated table ------------------------------------------------------------

HEADER = "# field_d, extension_tag, conductor_norm, h_B, w_B, source_note"


def export_catalog(catalogs, path):
    """Write catalog records, sorted by field, tag, conductor norm."""
    if isinstance(catalogs, BCatalog):
        catalogs = [catalogs]
    rows = []
    for cat in catalogs:
        for r in cat:
            d, tag, fn, fl = r.key
            rows.append((d, tag, fn, fl, r.h_B, r.w_B, r.provenance))
    rows.sort()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(HEADER + "\n")
        for d, tag, fn, fl, h, w, prov in rows:
            fh.write("%d, %s, %d, %d, %d, f=%s %s\n" % (d, tag, fn, h, w, fl, prov))


def load_curated_table(path):
    """Parse a table into {(d, tag, conductor_norm, conductor_label): (h, w, note)}.

    The conductor label is read from a leading ``f=...`` token of the note;
    rows without one get label None.
    """
    table, problems = {}, []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [x.strip() for x in line.split(",")]
            if len(parts) < 5:
                problems.append((lineno, "expected at least 5 fields"))
                continue
            try:
                d, fn, h, w = int(parts[0]), int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                problems.append((lineno, "non-integer numeric field"))
                continue
            note = ",".join(parts[5:]).strip() if len(parts) > 5 else ""
            if w <= 1:
                problems.append((lineno, "w = %d is not a catalog member" % w))
                continue
            if h <= 0 or fn <= 0:
                problems.append((lineno, "h and conductor norm must be positive"))
                continue
            flabel = None
            if note.startswith("f="):
                flabel = note.split()[0][2:]
            key = (d, parts[1], fn, flabel)
            if key in table and table[key][:2] != (h, w):
                raise CatalogConflict("line %d: conflicting duplicate row for %r" % (lineno, key))
            table[key] = (h, w, note)
    if problems:
        raise TableError(problems)
    return table
