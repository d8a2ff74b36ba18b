import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sftweyl.core import DEFAULT_WINDOW, Monomial, TruncationWindow
from sftweyl.errors import ParseError, UnknownGenerator, ValidationError, WindowOverflow
from sftweyl.testing import SIG1_TEXT, random_series, sig1, sig_odd_forms
from sftweyl.textio import (
    classify_orbit,
    format_window,
    parse_geometry,
    parse_series,
    parse_signature,
    parse_window,
    print_canonical,
)


def test_parse_sig1_gradings():
    sig = parse_signature(SIG1_TEXT)
    assert sig == sig1()
    assert sig.p_degree(0) == -1
    assert sig.hbar_degree == -2
    assert sig.orbits[1].kappa == 2


def test_two_unit_forms_rejected():
    text = SIG1_TEXT.replace("deg=2 divisor", "deg=0 unit")
    with pytest.raises(ValidationError):
        parse_signature(text)


def test_empty_orbit_list_is_valid():
    sig = parse_signature("m 2\nform th0 deg=0 unit\n")
    assert sig.orbits == ()


def test_comments_and_geometry_lines_are_skipped():
    sig = parse_signature(SIG1_TEXT + "d g1 1  # trailing\ncup th1 th0 -> th1 1\n")
    assert sig == sig1()


def test_bad_orbit_screened():
    with pytest.raises(ValidationError):
        parse_signature("m 2\norbit g kappa=2 cz=2 base_cz=1\nform u deg=0 unit\n")
    parse_signature("m 2\norbit g kappa=2 cz=3 base_cz=1\nform u deg=0 unit\n")


def test_signature_syntax_error_location():
    with pytest.raises(ParseError) as exc:
        parse_signature("m 2\norbit g1 kappa=x cz=0\nform u deg=0 unit\n")
    assert exc.value.line == 2
    assert exc.value.column == 16


def test_classify_orbit():
    assert classify_orbit(1, 1) == "good"
    assert classify_orbit(1, 2) == "bad"
    assert classify_orbit(0, 4) == "good"


def test_parse_series_examples(sig, P):
    assert P("h^-1 * q[g1]") == sig.hbar(-1) * sig.q("g1")
    assert P("p[g1]*q[g1]") == P("h - q[g1]*p[g1]")
    got = P("1/2 * t[th0,1]^2 * z[A0]")
    assert dict(got.items()) == {Monomial(0, (1,), ((1 << 0) | 1, 1)): Fraction(1, 2)}


def test_print_examples(sig, P):
    assert print_canonical(P("h^-1*q[g1]")) == "h^-1 * q[g1]"
    assert print_canonical(sig.zero()) == "0"
    assert print_canonical(P("-q[g1]*p[g1] + h")) == "h - q[g1]*p[g1]"
    assert print_canonical(P("1/2*t[th0,1]^2*z[A0]")) == "1/2 * t[th0,1]^2 * z[A0]"
    assert print_canonical(P("-3/6*h")) == "-1/2 * h"


def test_unknown_generator(sig):
    with pytest.raises(UnknownGenerator):
        parse_series("q[nope]", sig)
    with pytest.raises(UnknownGenerator):
        parse_series("z[B]", sig)


def test_window_overflow(sig):
    w = TruncationWindow(max_pq_letters=1)
    with pytest.raises(WindowOverflow):
        parse_series("q[g1]*p[g1]", sig, w)
    # cancellation inside the window is fine
    assert parse_series("q[g2] - q[g2]", sig, w).is_zero()


@pytest.mark.parametrize("text,col", [("q[g1] +* p[g1]", 8), ("q[g1]^", 7), ("2 * * q[g1]", 5),
                                      ("q[g1", 1), ("t[th0]", 3), ("q[g1]^-1", 8)])
def test_syntax_error_points_into_token(sig, text, col):
    with pytest.raises(ParseError) as exc:
        parse_series(text, sig)
    assert exc.value.line == 1
    assert exc.value.column == col


def test_multiline_error_location(sig):
    with pytest.raises(ParseError) as exc:
        parse_series("q[g1]\n + p[g1] $", sig)
    assert (exc.value.line, exc.value.column) == (2, 10)


def test_window_text():
    w = parse_window("hbar=-2..1,pq=4,t=2,z=2")
    assert w == TruncationWindow(-2, 1, 4, 2, 2)
    assert parse_window(format_window(w)) == w
    assert parse_window("level=2").max_t_level == 2
    assert parse_window("") == DEFAULT_WINDOW
    with pytest.raises(ParseError):
        parse_window("hbar=3")
    with pytest.raises(ValidationError):
        parse_window("hbar=2..1")


def test_parse_geometry(sig):
    geo = parse_geometry("d g1 1\nd g2 -1/2\ncup th1 th0 -> th1 1\ntriple th0 th0 th1 0\n", sig)
    assert geo.d == {"g1": 1, "g2": Fraction(-1, 2)}
    assert geo.cup[("th1", "th0", "th1")] == 1
    assert geo.cup[("th0", "th1", "th1")] == 1
    with pytest.raises(ValidationError):
        parse_geometry("cup th1 th1 -> th0 1\n", sig)
    with pytest.raises(ValidationError):
        parse_geometry("triple th0 th0 th0 1\n", sig)


@pytest.mark.parametrize("sg", [sig1(), sig_odd_forms()], ids=["sig1", "odd_forms"])
@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_round_trip(sg, seed):
    rng = random.Random(seed)
    f = random_series(sg, rng, rng.randint(0, 5), max_pq=4, max_t=2, hbar=(-3, 2), max_z=2)
    text = print_canonical(f)
    g = parse_series(text, sg)
    assert g == f
    assert print_canonical(g) == text


def test_print_parse_idempotent(sig):
    text = "p[g1]*q[g1] + 2/4*z[A0]*h^-1 + t[th1,0]*q[g2]^2 - q[g2]*q[g2]*t[th1,0]"
    once = print_canonical(parse_series(text, sig))
    assert print_canonical(parse_series(once, sig)) == once
