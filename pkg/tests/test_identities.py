import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sftweyl.core import Form, Orbit, Signature, TruncationWindow, add, grade_of, weyl_bracket
from sftweyl.errors import EvenSummand, MasterFails, NoDivisorForm, ValidationError
from sftweyl.homology import is_exact
from sftweyl.identities import (
    FirstOrderOperator,
    GeometryData,
    Status,
    build_delta,
    check_descendant_commutation,
    check_master,
    check_t0_specializations,
    constant_term,
    descendant_shift,
    dilaton_defect,
    divisor_defect,
    euler_operator,
    string_defect,
)
from sftweyl.testing import random_homogeneous, sig1, sig_odd_forms

HDIL = "h^-1*q[g1] + h^-1*q[g1]*t[th0,1]"
HDIV = "h^-1*q[g1] - t[th1,0]*q[g1] + 1/2*h*t[th1,0]^2*q[g1]"

sigs = pytest.mark.parametrize("sg", [sig1(), sig_odd_forms()], ids=["sig1", "odd_forms"])


def test_master_examples(sig, P, w):
    assert check_master(P("h^-1*q[g1]"), w).status is Status.HOLDS_EXACTLY
    bad = check_master(P("h^-1*q[g1] + h^-1*p[g1]"), w)
    assert bad.status is Status.FAILS
    assert bad.defect == P("2*h^-1")
    assert check_master(sig.zero(), w).status is Status.HOLDS_EXACTLY


def test_master_rejects_even_summands(P, w):
    with pytest.raises(EvenSummand):
        check_master(P("q[g2]"), w)


def test_descendant_commutation(P, w):
    for text in ("h^-1*q[g1]", HDIL):
        one, two = check_descendant_commutation(P(text), ("th0", 1), ("th1", 0), w)
        assert one.status is two.status is Status.HOLDS_EXACTLY
    with pytest.raises(MasterFails):
        check_descendant_commutation(P("h^-1*q[g1] + h^-1*p[g1]"), ("th0", 1), ("th0", 1), w)


def test_euler_examples(sig, P):
    assert euler_operator(P("h^-1*q[g1]")) == P("h^-1*q[g1]")
    assert euler_operator(P("h^-1*q[g1]*t[th0,1]")).is_zero()
    assert euler_operator(P("z[A0]")).is_zero()
    assert euler_operator(P("3*h*p[g2]")) == P("-9*h*p[g2]")


def test_delta(sig, P, geo1):
    # q-before-p ordering of p*q with the central shift retained
    assert build_delta(sig, geo1) == P("q[g1]*p[g1] - h")
    assert build_delta(sig, GeometryData.zero(sig)).is_zero()
    g2 = GeometryData.build(sig, d={"g2": 1})
    assert build_delta(sig, g2) == P("q[g2]*p[g2] + 2*h")


def test_delta_central_shift_is_bracket_irrelevant(sig, P, geo1, w):
    H = P("h^-1*q[g1]*p[g2] + h^-1*q[g1]")
    d = build_delta(sig, geo1, w)
    assert weyl_bracket(H, d) == weyl_bracket(H, add(d, sig.hbar(1).scale(7)))


def test_divisor_examples(sig, P, geo1, w):
    rep = divisor_defect(P(HDIV), geo1, w)
    assert rep.status in (Status.HOLDS_EXACTLY, Status.HOLDS_WITHIN_WINDOW)
    z = divisor_defect(P("h^-1*q[g1]*z[A0]"), geo1, w)
    assert z.status is Status.HOLDS_IN_HOMOLOGY
    assert z.defect == P("q[g1]*z[A0] - h^-1*q[g1]*z[A0]")
    assert is_exact(z.defect, P("h^-1*q[g1]*z[A0]"), w.adjusted(hbar_lo=1, hbar_hi=1, pq=1), w)
    plain = divisor_defect(P("h^-1*q[g1]"), GeometryData.zero(sig), w)
    assert plain.status is Status.HOLDS_EXACTLY


def test_divisor_chain_level_only(P, geo1, w):
    rep = divisor_defect(P("h^-1*q[g1]*z[A0]"), geo1, w, certificates=False)
    assert rep.status is Status.FAILS


def test_dilaton_examples(sig, P, w):
    assert dilaton_defect(P(HDIL), w).status is Status.HOLDS_EXACTLY
    bad = dilaton_defect(P("h^-1*q[g1]"), w, certificates=False)
    assert bad.status is Status.FAILS
    assert bad.defect == P("-h^-1*q[g1]")
    assert dilaton_defect(sig.zero(), w).status is Status.HOLDS_EXACTLY


def test_string_examples(sig, P, w):
    geo = GeometryData.zero(sig)
    # the k = 0 shift t^{0,1} d/dt^{0,0} meets no t^{0,0}; the k = 1 shift
    # t^{0,2} d/dt^{0,1} leaves a D-exact remainder
    rep = string_defect(P(HDIL), geo, w)
    assert rep.defect == P("-h^-1*t[th0,2]*q[g1]")
    assert rep.status is Status.HOLDS_IN_HOMOLOGY
    bad = string_defect(P("h^-1*q[g1]*t[th0,0]"), geo, w, certificates=False)
    assert bad.status is Status.FAILS
    assert bad.defect == P("h^-1*q[g1] - h^-1*q[g1]*t[th0,1]")
    assert string_defect(sig.zero(), geo, w).status is Status.HOLDS_EXACTLY


def test_zero_hamiltonian_zero_geometry(sig, w):
    geo = GeometryData.zero(sig)
    H = sig.zero()
    for rep in (divisor_defect(H, geo, w), dilaton_defect(H, w), string_defect(H, geo, w)):
        assert rep.status is Status.HOLDS_EXACTLY
        assert rep.defect.is_zero()


def test_divisor_needs_divisor_form(w):
    sg = Signature(2, [Orbit("g", 1, 0)], [Form("u", 0, is_unit=True)], [])
    with pytest.raises(NoDivisorForm):
        divisor_defect(sg.zero(), GeometryData.zero(sg), w)


def test_t0_specializations(sig, P, geo1, w):
    div, dil, st_ = check_t0_specializations(P(HDIV), geo1, w)
    assert div.holds
    assert st_.status is Status.HOLDS_EXACTLY
    _, dil, st_ = check_t0_specializations(P(HDIL), GeometryData.zero(sig), w)
    assert dil.status is Status.HOLDS_EXACTLY
    assert st_.status is Status.HOLDS_EXACTLY


def test_constant_term_uses_triple(sig):
    sg = sig_odd_forms()
    geo = GeometryData.build(sg, triple={("u", "w", "v"): 3})
    tu, tw = sg.t("u", 0), sg.t("w", 0)
    # both orderings of the symmetric pair, no factor 1/2
    assert constant_term(sg, geo.triple, "v") == (tu * tw).scale(6)
    assert constant_term(sg, geo.triple, "u").is_zero() is False
    with pytest.raises(ValidationError):
        GeometryData.build(sig, triple={("th0", "th0", "th1"): 1})


def test_geometry_validation(sig):
    with pytest.raises(ValidationError):
        GeometryData.build(sig, d={"nope": 1})
    with pytest.raises(ValidationError):
        GeometryData.build(sig, cup={("th1", "th1", "th0"): 1})
    with pytest.raises(ValidationError):
        GeometryData.build(sig, cup={("th1", "th0", "th1"): 1, ("th0", "th1", "th1"): 2})
    geo = GeometryData.build(sig, cup={("th1", "th0", "th1"): 1})
    assert geo.cup[("th0", "th1", "th1")] == 1


def _pair(sg, seed):
    rng = random.Random(seed)
    kw = dict(max_pq=3, max_t=1, hbar=(-1, 1), max_z=1)
    return random_homogeneous(sg, rng, 3, **kw), random_homogeneous(sg, rng, 3, **kw)


@sigs
@settings(max_examples=120, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_euler_is_bracket_derivation(sg, seed):
    f, g = _pair(sg, seed)
    lhs = euler_operator(weyl_bracket(f, g))
    rhs = add(weyl_bracket(euler_operator(f), g), weyl_bracket(f, euler_operator(g)))
    assert lhs == rhs


def _operators(sg):
    div = sg.forms[sg.divisor_form_index].id
    unit = sg.forms[sg.unit_form_index].id
    cup = {(div, unit, div): Fraction(1)}
    ops = [
        FirstOrderOperator(z_weights=tuple(Fraction(h.pairing) for h in sg.h2_basis)),
        FirstOrderOperator(cup=cup, gamma=div),
        FirstOrderOperator(t_form=unit, t_level=1),
    ]
    odd = [f.id for f in sg.forms if f.deg % 2]
    if odd:
        ops.append(FirstOrderOperator(t_form=odd[0], t_level=0))
    return ops


@sigs
@settings(max_examples=120, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), which=st.integers(0, 3))
def test_first_order_operators_are_derivations(sg, seed, which):
    ops = _operators(sg)
    D = ops[which % len(ops)]
    f, g = _pair(sg, seed)
    sign = -1 if D.parity(sg) and grade_of(f) % 2 else 1
    lhs = D(weyl_bracket(f, g))
    rhs = add(weyl_bracket(D(f), g), weyl_bracket(f, D(g)).scale(sign))
    assert lhs == rhs


@pytest.mark.parametrize("text", ["h^-1*q[g1]", HDIL, "h^-1*q[g1]*z[A0]",
                                  "h^-1*q[g1]*q[g2] + h^-1*q[g1]"])
def test_delta_bracket_is_exact(sig, P, geo1, text):
    w = TruncationWindow(hbar_min=-2, hbar_max=1, max_pq_letters=3, max_t_letters=1,
                         max_z_total=1)
    H = P(text, w)
    assert check_master(H, w).status is Status.HOLDS_EXACTLY
    delta = build_delta(sig, geo1, w)
    target = weyl_bracket(H, delta)
    src = w.adjusted(hbar_lo=1, hbar_hi=1, pq=1)
    cert = is_exact(target, H, src, w)
    assert cert
    # the certificate may differ from delta by a closed element
    image = weyl_bracket(H.with_window(src), cert.preimage).with_window(w)
    assert image == target


def test_descendant_shift_without_cup_is_string_shift(P):
    assert descendant_shift(P("q[g1]*t[th0,0]")) == P("q[g1]*t[th0,1]")
    assert descendant_shift(P("t[th1,1]^2")) == P("2*t[th1,1]*t[th1,2]")
