import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sftweyl.cobordism import (
    FundamentalWarning,
    act_left,
    act_right,
    check_chain_map,
    check_covariance,
    check_dspace,
    check_fundamental,
    cylinder_signature,
    dF_operator,
    exp_series,
    fundamental_defect,
    pushforward,
    trivial_potential,
)
from sftweyl.core import (
    P_KIND,
    Q_KIND,
    T_KIND,
    Monomial,
    Orbit,
    Series,
    Signature,
    TruncationWindow,
    add,
    letter_code,
    normal_form,
    star,
)
from sftweyl.errors import (
    FundamentalFails,
    MasterFails,
    NotDSpace,
    WrongEnd,
    ZeroWeightMonomial,
)
from sftweyl.identities import FirstOrderOperator, Status
from sftweyl.testing import sig1
from sftweyl.textio import parse_series

W = TruncationWindow(hbar_min=-2, hbar_max=1, max_pq_letters=4, max_t_letters=2, max_z_total=2)
CYL = cylinder_signature(sig1())


def S(text, window=None):
    return parse_series(text, CYL, window)


@pytest.fixture(scope="module")
def F_id():
    return trivial_potential(CYL, W)


def _end_letters(end, kinds):
    out = []
    for i, o in enumerate(CYL.orbits):
        if o.end == end:
            out += [letter_code(k, i) for k in kinds]
    return out


def _rand_word_series(rng, letters, max_len=2, t=True):
    word = [rng.choice(letters) for _ in range(rng.randint(0, max_len))]
    if t and rng.random() < 0.3:
        word.append(letter_code(T_KIND, rng.randrange(len(CYL.forms)), rng.randint(0, 1)))
    gens = [CYL.generator_of(x) for x in word]
    c = Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 2))
    central = Series(CYL, {Monomial(rng.randint(-1, 1), (rng.randint(0, 1),), ()): c})
    return normal_form(CYL, [central] + gens, 1, None)


def _rand_sum(rng, letters, terms=2, **kw):
    total = CYL.zero()
    for _ in range(terms):
        total = add(total, _rand_word_series(rng, letters, **kw))
    return total


W_MINUS = _end_letters("-", (Q_KIND, P_KIND))
W_PLUS = _end_letters("+", (Q_KIND, P_KIND))
D_LETTERS = _end_letters("-", (Q_KIND,)) + _end_letters("+", (P_KIND,))


def test_left_action_examples():
    one = S("1")
    assert act_left(S("q-[g1]"), one) == S("q-[g1]")
    assert act_left(S("p-[g1]"), one).is_zero()
    assert act_left(S("p-[g1]"), S("q-[g1]*p+[g1]")) == S("h*p+[g1]")


def test_right_action_examples():
    one = S("1")
    assert act_right(one, S("p+[g1]")) == S("p+[g1]")
    assert act_right(one, S("q+[g1]")).is_zero()
    assert act_right(S("q-[g1]*p+[g1]"), S("q+[g1]")) == S("h*q-[g1]")


def test_even_orbit_derivative_carries_kappa():
    assert act_left(S("p-[g2]"), S("q-[g2]^2")) == S("4*h*q-[g2]")
    assert act_right(S("p+[g2]^2"), S("q+[g2]")) == S("4*h*p+[g2]")


def test_actions_reject_non_dspace():
    with pytest.raises(NotDSpace):
        act_left(S("q-[g1]"), S("q+[g1]"))
    with pytest.raises(NotDSpace):
        check_dspace(S("p-[g2]"))


def test_exp_examples():
    assert exp_series(CYL.zero(), W) == S("1", W)
    F = S("h^-1*q-[g1]*p+[g1]")
    assert exp_series(F, W) == S("1 + h^-1*q-[g1]*p+[g1]", W)
    G = S("1/2*h^-1*p+[g2]*q-[g2]")
    w4 = TruncationWindow(-2, 1, 4, 0, 0)
    expected = add(add(S("1"), G), star(G, G).scale(Fraction(1, 2))).with_window(w4)
    assert exp_series(G, w4) == expected


def test_exp_rejects_zero_weight():
    with pytest.raises(ZeroWeightMonomial):
        exp_series(S("h^-1"), W)


def test_trivial_potential_examples(F_id):
    assert F_id == S("h^-1*q-[g1]*p+[g1] + 1/2*h^-1*q-[g2]*p+[g2]", W)
    empty = cylinder_signature(Signature(2, [], sig1().forms, sig1().h2_basis))
    assert trivial_potential(empty, W).is_zero()
    g2only = cylinder_signature(Signature(2, [Orbit("g2", 2, 1)], sig1().forms, sig1().h2_basis))
    assert trivial_potential(g2only, W) == parse_series("1/2*h^-1*q-[g2]*p+[g2]", g2only, W)


def test_fundamental_examples(F_id):
    Hp, Hm = S("h^-1*q+[g1]"), S("h^-1*q-[g1]")
    assert check_fundamental(F_id, Hp, Hm, W).holds
    bad = check_fundamental(CYL.zero(), Hp, Hm, W)
    assert bad.status is Status.FAILS
    assert bad.defect == S("-h^-1*q-[g1]", W)
    zero = CYL.zero()
    assert check_fundamental(F_id, zero, zero, W).status is Status.HOLDS_EXACTLY
    with pytest.raises(MasterFails):
        check_fundamental(F_id, S("h^-1*q+[g1] + h^-1*p+[g1]"), Hm, W)


def test_dF_examples(F_id):
    Hp, Hm = S("h^-1*q+[g1]"), S("h^-1*q-[g1]")
    # on g = 1 the display reduces to minus the fundamental defect
    assert dF_operator(S("1"), F_id, Hp, Hm, W) == -fundamental_defect(F_id, Hp, Hm, W)
    assert dF_operator(S("q-[g1]"), F_id, Hp, Hm, W).is_zero()
    zero = CYL.zero()
    assert dF_operator(S("q-[g2]*p+[g1]"), F_id, zero, zero, W).is_zero()


def test_dF_warns_when_fundamental_fails():
    with pytest.warns(FundamentalWarning):
        out = dF_operator(S("1"), CYL.zero(), S("h^-1*q+[g1]"), S("h^-1*q-[g1]"), W)
    assert out == S("h^-1*q-[g1]", W)


def test_pushforward_examples(F_id):
    zero = CYL.zero()
    assert pushforward(S("q-[g1]"), "-", zero, W) == S("q-[g1]", W)
    assert pushforward(S("p-[g1]"), "-", zero, W).is_zero()
    assert pushforward(S("p-[g1]"), "-", F_id, W) == S("p+[g1]", W)
    assert pushforward(S("q+[g1]"), "+", F_id, W) == S("q-[g1]", W)
    with pytest.raises(WrongEnd):
        pushforward(S("q+[g1]"), "-", F_id, W)


def _probes():
    return [S(t) for t in ("p-[g1]", "q-[g2]", "q-[g1]*p-[g1]", "p+[g2]", "q+[g1]*p+[g2]", "z[A0]")]


@pytest.mark.parametrize("ham", ["h^-1*q{e}[g1]", "h^-1*p{e}[g1]", "h^-1*q{e}[g1]*z[A0]"])
def test_chain_map_trivial_cylinder(F_id, ham):
    Hp, Hm = S(ham.format(e="+")), S(ham.format(e="-"))
    rep = check_chain_map(F_id, Hp, Hm, _probes(), W)
    assert rep.holds, rep.message
    assert check_chain_map(F_id, Hp, Hm, [CYL.zero()], W).status is Status.HOLDS_EXACTLY


def test_chain_map_zero_hamiltonians(F_id):
    zero = CYL.zero()
    assert check_chain_map(F_id, zero, zero, _probes(), W).status is Status.HOLDS_EXACTLY


def test_chain_map_needs_fundamental():
    with pytest.raises(FundamentalFails):
        check_chain_map(CYL.zero(), S("h^-1*q+[g1]"), S("h^-1*q-[g1]"), _probes(), W)


def test_covariance(F_id):
    Hp, Hm = S("h^-1*q+[g1]"), S("h^-1*q-[g1]")
    assert check_covariance(F_id, Hp, Hm, ("th0", 1), W).status is Status.HOLDS_EXACTLY
    zop = FirstOrderOperator(z_weights=(Fraction(1),))
    assert check_covariance(F_id, Hp, Hm, zop, W).status is Status.HOLDS_EXACTLY
    # t-dependent ends against the t-independent cylinder potential
    Hp2, Hm2 = S("h^-1*q+[g1] + h^-1*q+[g1]*t[th0,1]"), S("h^-1*q-[g1] + h^-1*q-[g1]*t[th0,1]")
    assert check_fundamental(F_id, Hp2, Hm2, W).holds
    assert check_covariance(F_id, Hp2, Hm2, ("th0", 1), W).holds
    with pytest.raises(FundamentalFails):
        check_covariance(CYL.zero(), Hp, Hm, ("th0", 1), W)


def test_dF_squares_to_zero(F_id):
    Hp, Hm = S("h^-1*q+[g1] + h^-1*q+[g1]*t[th0,1]"), S("h^-1*q-[g1] + h^-1*q-[g1]*t[th0,1]")
    wide = TruncationWindow(-2, 1, 3, 1, 1)
    for g in ("1", "q-[g1]", "p+[g1]", "q-[g2]*p+[g2]", "q-[g1]*p+[g2]*z[A0]", "t[th0,0]*p+[g1]"):
        once = dF_operator(S(g), F_id, Hp, Hm, wide)
        assert dF_operator(once, F_id, Hp, Hm, wide).is_zero(), g


def test_outputs_stay_in_dspace(F_id):
    Hp, Hm = S("h^-1*q+[g1]"), S("h^-1*q-[g1]")
    for g in ("q-[g1]", "p+[g2]*q-[g2]", "z[A0]"):
        check_dspace(dF_operator(S(g), F_id, Hp, Hm, W))
    for f, e in (("p-[g1]", "-"), ("q-[g2]*p-[g2]", "-"), ("q+[g2]", "+"), ("p+[g1]", "+")):
        check_dspace(pushforward(S(f), e, F_id, W))
    check_dspace(exp_series(F_id, W))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_left_action_is_associative(seed):
    rng = random.Random(seed)
    f, f2 = _rand_sum(rng, W_MINUS), _rand_sum(rng, W_MINUS)
    g = _rand_sum(rng, D_LETTERS, 3, max_len=3)
    assert act_left(star(f, f2), g) == act_left(f, act_left(f2, g))


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_right_action_is_associative(seed):
    rng = random.Random(seed)
    f, f2 = _rand_sum(rng, W_PLUS), _rand_sum(rng, W_PLUS)
    g = _rand_sum(rng, D_LETTERS, 3, max_len=3)
    assert act_right(g, star(f, f2)) == act_right(act_right(g, f), f2)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), orbit=st.sampled_from(["g1", "g2"]))
def test_left_action_represents_weyl_relation(seed, orbit):
    rng = random.Random(seed)
    g = _rand_sum(rng, D_LETTERS, 3, max_len=3)
    i = CYL.orbit_index(orbit, "-")
    sign = -1 if CYL.p_degree(i) % 2 and CYL.q_degree(i) % 2 else 1
    p, q = S(f"p-[{orbit}]"), S(f"q-[{orbit}]")
    lhs = add(act_left(p, act_left(q, g)), -act_left(q, act_left(p, g)).scale(sign))
    kappa = CYL.orbits[i].kappa
    assert lhs == (CYL.hbar(1) * g).scale(kappa)
