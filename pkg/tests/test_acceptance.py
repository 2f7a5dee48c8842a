"""Acceptance suite: eight criteria, each announcing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines go to the terminal
reporter) or ``python3 tests/test_acceptance.py``.
"""

import itertools
import sys
import time
from fractions import Fraction

import pytest
from sympy import factorint, primerange

from quatclass import brandt_oracle as brandt
from quatclass.classnumbers import compute_fibers
from quatclass.cmorders import UnsupportedConfiguration, catalog_for
from quatclass.numberfield import is_squarefree, make_field
from quatclass.quatalg import algebra_with_ramification, eichler_order, find_unramified_definite_algebra
from quatclass.selectivity import coset_sum_check

FIELDS = [d for d in range(2, 101) if is_squarefree(d)]
_printer = print


@pytest.fixture(autouse=True)
def _announce(request):
    global _printer
    rep = request.config.pluginmanager.get_plugin("terminalreporter")
    _printer = (lambda s: rep.write_line(s)) if rep else print
    yield
    _printer = print


def announce(n, ok, detail):
    _printer("%s criterion %d: %s" % ("PASS" if ok else "FAIL", n, detail))


# --- corpora -----------------------------------------------------------------

class Case:
    def __init__(self, d, order, catalog, ramified):
        self.d, self.order, self.catalog, self.ramified = d, order, catalog, ramified
        self.reports = {}

    def name(self):
        return self.order.describe()


def _level_primes(F):
    return [P for p in primerange(2, 51) for P in F.prime_ideals_above(p) if P.norm <= 50]


def _unramified_cases():
    cases, unsupported = [], 0
    for d in FIELDS:
        F = make_field(d)
        A = find_unramified_definite_algebra(F)
        cat = catalog_for(d)
        for lev in [()] + [(P,) for P in _level_primes(F)]:
            c = Case(d, eichler_order(A, list(lev)), cat, False)
            try:
                for base in (0, 1):
                    c.reports[base] = compute_fibers(c.order, cat, delta_base=base)
            except UnsupportedConfiguration:
                unsupported += 1
                continue
            cases.append(c)
    return cases, unsupported


def _ramified_cases():
    """Two definite algebras per field, ramified at pairs of small primes
    that avoid every conductor prime of the catalog."""
    cases = []
    for d in FIELDS:
        F = make_field(d)
        cat = catalog_for(d)
        avoid = {P.label for B in cat for P, _ in B.conductor_primes}
        primes = [P for p in primerange(2, 60) for P in F.prime_ideals_above(p) if P.label not in avoid]
        for pair in ((primes[0], primes[1]), (primes[0], primes[2])):
            A = algebra_with_ramification(F, list(pair))
            c = Case(d, eichler_order(A, []), cat, True)
            for base in (0, 1):
                c.reports[base] = compute_fibers(c.order, cat, delta_base=base)
            cases.append(c)
    return cases


@pytest.fixture(scope="module")
def sweep():
    t0 = time.perf_counter()
    cases, unsupported = _unramified_cases()
    elapsed = time.perf_counter() - t0
    return {"cases": cases, "unsupported": unsupported, "seconds": elapsed}


@pytest.fixture(scope="module")
def ramified():
    return _ramified_cases()


def _rational_cases():
    """Maximal orders of prime discriminant and all Eichler orders with D*N <= 200."""
    out = []
    for M in range(2, 201):
        f = factorint(M)
        if any(e > 1 for e in f.values()):
            continue
        ps = sorted(f)
        for mask in range(1, 1 << len(ps)):
            D = [p for k, p in enumerate(ps) if mask >> k & 1]
            if len(D) % 2 == 1:
                out.append((tuple(D), tuple(p for p in ps if p not in D)))
    return out


# --- criteria ----------------------------------------------------------------

def test_criterion_1_anchor():
    t0 = time.perf_counter()
    F = make_field(7)
    rep = compute_fibers(eichler_order(find_unramified_definite_algebra(F), []))
    dt = time.perf_counter() - t0
    div = rep.divisibility
    ok = (rep.total == 3 and div["h_plus"] == 2 and not div["h_plus_divides"] and div["expected_negative"]
          and div["h"] == 1 and div["h_divides"] and dt < 5)
    announce(1, ok, "Q(sqrt 7) maximal order: h(O)=%s, h+=%d does not divide, h=%d divides, %.2fs"
             % (rep.total, div["h_plus"], div["h"], dt))
    assert ok


def test_criterion_2_oracle_over_q():
    t0 = time.perf_counter()
    Q = make_field(1)
    bad, n = [], 0
    anchors = {}
    for D, N in _rational_cases():
        A = algebra_with_ramification(Q, [Q.prime_ideals_above(p)[0] for p in D])
        rep = compute_fibers(eichler_order(A, [Q.prime_ideals_above(p)[0] for p in N]))
        Dn, Nn = 1, 1
        for p in D:
            Dn *= p
        for p in N:
            Nn *= p
        S = brandt.ideal_class_set(brandt.order_for(Dn, Nn))
        w_sum = sum((Fraction(1, w) for w in S.unit_indices), Fraction(0))
        n += 1
        if rep.total != len(S) or w_sum != rep.mass:
            bad.append((Dn, Nn, rep.total, len(S)))
        if Nn == 1 and len(D) == 1:
            anchors[Dn] = rep.total
    dt = time.perf_counter() - t0
    want = {2: 1, 3: 1, 5: 1, 7: 1, 11: 2, 13: 1}
    got = {p: anchors[p] for p in want}
    ok = not bad and got == want and dt < 60
    announce(2, ok, "%d orders over Q agree with the Brandt oracle (mismatches %s), maximal h=%s, %.1fs"
             % (n, bad, [got[p] for p in sorted(want)], dt))
    assert ok


def test_criterion_3_integrality(sweep):
    cases = sweep["cases"]
    ok = sweep["seconds"] < 600 and all(
        isinstance(v, int) and v > 0 for c in cases for r in c.reports.values() for v in r.psi_fibers.values())
    announce(3, ok, "%d unramified cases (%d conductor clashes skipped), all fibers positive integers "
             "under both delta bases, %.0fs" % (len(cases), sweep["unsupported"], sweep["seconds"]))
    assert ok


def test_criterion_4_divisibility(sweep, ramified):
    bad = []
    for c in sweep["cases"] + ramified:
        r = c.reports[1]
        h, hp = c.order.base.h, c.order.base.h_plus
        if r.total % h or (c.ramified and r.total % hp):
            bad.append(c.name())
    ok = not bad
    announce(4, ok, "h(F) | h(O) on %d cases, h+(F) | h(O) on %d finitely ramified cases; failures %s"
             % (len(sweep["cases"]) + len(ramified), len(ramified), bad))
    assert ok


def test_criterion_5_coset_sums(sweep, ramified):
    n, bad = 0, []
    for c in sweep["cases"] + ramified:
        G = c.order.base.narrow_class_group
        for base, rep in c.reports.items():
            for R in rep.reports:
                if not R.selective:
                    continue
                n += 1
                sums = [sum(R.delta_values[i] for i in coset) for coset in G.cosets]
                if not coset_sum_check(R, G) or any(s != Fraction(G.r, 2) for s in sums):
                    bad.append((c.name(), R.label, base))
    ok = n > 0 and not bad
    announce(5, ok, "%d selective (order, base) pairs have every coset sum equal to r/2; failures %s" % (n, bad))
    assert ok


def test_criterion_6_equal_phi_fibers(sweep):
    bad = []
    for c in sweep["cases"]:
        h = c.order.base.h
        for rep in c.reports.values():
            if set(rep.phi_fibers.values()) != {Fraction(rep.total, h)}:
                bad.append(c.name())
    ok = not bad
    announce(6, ok, "Phi-fibers all equal h(O)/h(F) on %d unramified cases; failures %s"
             % (len(sweep["cases"]), bad))
    assert ok


def test_criterion_7_base_independence(sweep):
    n, bad = 0, []
    for c in sweep["cases"]:
        ref = c.reports[1]
        labels = ref.selective
        for bits in itertools.product((0, 1), repeat=len(labels)):
            rep = compute_fibers(c.order, c.catalog, override=dict(zip(labels, bits)), strict=False)
            n += 1
            if rep.phi_fibers != ref.phi_fibers or rep.total != ref.total:
                bad.append((c.name(), bits))
    ok = not bad
    announce(7, ok, "%d Delta assignments over %d cases leave every Phi-fiber and total unchanged; failures %s"
             % (n, len(sweep["cases"]), bad[:5]))
    assert ok


def test_criterion_8_no_selective_orders(sweep, ramified):
    Q = make_field(1)
    over_q = 0
    bad = []
    for D, N in _rational_cases():
        A = algebra_with_ramification(Q, [Q.prime_ideals_above(p)[0] for p in D])
        rep = compute_fibers(eichler_order(A, [Q.prime_ideals_above(p)[0] for p in N]))
        over_q += 1
        if rep.selective:
            bad.append(rep.order.describe())
    neg = [c for c in sweep["cases"] + ramified if c.order.base.unit_norm == -1]
    for c in neg:
        if any(r.selective for r in c.reports.values()):
            bad.append(c.name())
    ok = not bad and bool(neg)
    announce(8, ok, "no selective orders in %d cases over Q and %d cases over fields with N(eps) = -1; "
             "failures %s" % (over_q, len(neg), bad))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
