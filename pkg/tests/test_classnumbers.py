from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quatclass import brandt_oracle as brandt
from quatclass.classnumbers import (FiberReport, TheoremViolation, compute_fibers, divisibility_verdict,
                                    eichler_mass, h_sc_fiber, selectivity_reports, spinor_class_mass,
                                    total_class_number)
from quatclass.cmorders import catalog_for
from quatclass.corpus import CorpusCase, build_order
from quatclass.quatalg import restricted_class_number


def _order(d, algebra="unramified", level=()):
    return build_order(CorpusCase("t", d, algebra, tuple(level)))


def test_sqrt7_anchor():
    rep = compute_fibers(_order(7))
    assert rep.total == 3
    assert rep.divisibility["h"] == 1 and rep.divisibility["h_divides"]
    assert rep.divisibility["h_plus"] == 2
    assert not rep.divisibility["h_plus_divides"]
    assert not rep.divisibility["h_plus_required"]
    assert rep.divisibility["expected_negative"]
    assert sorted(rep.psi_fibers.values()) == [1, 2]
    assert list(rep.phi_fibers.values()) == [3]


@pytest.mark.parametrize("p,h", [(2, 1), (3, 1), (5, 1), (7, 1), (11, 2), (13, 1)])
def test_rational_maximal_orders(p, h):
    order = _order(1, "ramified:%d" % p)
    assert total_class_number(order) == h
    assert eichler_mass(order) == Fraction(p - 1, 12)


@pytest.mark.parametrize("D,N", [(2, 3), (2, 5), (3, 2), (3, 7), (5, 2), (7, 3), (11, 2), (2 * 3 * 5, 1),
                                 (13, 2), (2, 11)])
def test_rational_eichler_orders_match_oracle(D, N):
    from sympy import factorint
    ram = ",".join(str(p) for p in factorint(D))
    level = [str(p) for p in factorint(N)] if N > 1 else []
    order = _order(1, "ramified:" + ram, level)
    S = brandt.ideal_class_set(brandt.order_for(D, N))
    assert total_class_number(order) == len(S)
    assert eichler_mass(order) == S.mass == brandt.eichler_mass_q(tuple(factorint(D)), N)


@pytest.mark.parametrize("d,algebra,level", [
    (7, "unramified", ()), (7, "unramified", ("3.1",)), (15, "unramified", ()), (3, "unramified", ()),
    (7, "ramified:3.1,3.2", ()), (6, "ramified:5.1,5.2", ()), (10, "unramified", ()),
])
def test_fibers_sum_to_total(d, algebra, level):
    rep = compute_fibers(_order(d, algebra, level))
    assert sum(rep.psi_fibers.values()) == rep.total == sum(rep.phi_fibers.values())
    assert rep.mass_sc == rep.mass / rep.order.base.h_plus
    assert all(isinstance(v, int) and v > 0 for v in rep.psi_fibers.values())


@pytest.mark.parametrize("d", [3, 7, 10, 15, 35])
def test_unramified_phi_fibers_are_equal(d):
    rep = compute_fibers(_order(d))
    h = rep.order.base.h
    assert set(rep.phi_fibers.values()) == {rep.total // h}
    assert rep.total % h == 0


@pytest.mark.parametrize("d,algebra", [(7, "ramified:3.1,3.2"), (6, "ramified:5.1,5.2")])
def test_finite_ramification_gives_equal_psi_fibers(d, algebra):
    rep = compute_fibers(_order(d, algebra))
    assert len(set(rep.psi_fibers.values())) == 1
    assert rep.divisibility["h_plus_required"] and rep.divisibility["h_plus_divides"]


def test_fiber_formula_single_and_split_sums_agree():
    order = _order(15)
    reports = selectivity_reports(order, catalog_for(15))
    for c in range(len(order.base.narrow_class_group.group)):
        v = h_sc_fiber(order, c, reports)
        assert v == spinor_class_mass(order) + sum(
            (2 ** R.s * R.delta_values[c] * (R.B.w_B - 1) * R.M for R in reports), Fraction(0)) / 8


@settings(max_examples=10, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=4, max_size=4))
def test_phi_fibers_do_not_depend_on_delta(bits):
    order = _order(3)
    sel = compute_fibers(order).selective
    override = dict(zip(sel, bits))
    rep = compute_fibers(order, override=override, strict=False)
    assert rep.phi_fibers == compute_fibers(order).phi_fibers
    assert rep.total == 2


def test_per_extension_base_map():
    order = _order(15)
    a = compute_fibers(order, delta_base={"F(i)": 0, "F(zeta3)": 1})
    b = compute_fibers(order, delta_base=1)
    assert a.assumptions["delta_base"] == {"F(i)": 0, "F(zeta3)": 1}
    assert a.total == b.total and a.phi_fibers == b.phi_fibers


def test_indefinite_algebra_uses_restricted_class_number():
    order = _order(7, "ab:-1;0,1")
    rep = compute_fibers(order)
    assert rep.total == restricted_class_number(order.alg) == 1
    assert rep.mass_sc is None
    assert not rep.divisibility["h_plus_required"]


def test_divisibility_violation_raises():
    order = _order(7, "ramified:3.1,3.2")
    fake = FiberReport(order, Fraction(1), Fraction(1), {}, {}, 3, 2)
    with pytest.raises(TheoremViolation):
        divisibility_verdict(order, fake)


def test_assumptions_record_delta_choices():
    rep = compute_fibers(_order(3), delta_base=0)
    assert rep.assumptions["delta_base"] == {"F(i)": 0}
    assert rep.assumptions["delta"] == {"O(F(i))": 0, "O(F(i), f=2)": 1, "O(F(i), f=3)": 1, "O(F(i), f=2^2)": 0}
    assert rep.assumptions["mass_sc"] == "Mass / h+(F)"
