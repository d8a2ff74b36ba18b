"""Random signatures and series for property checks and the self-test."""
from __future__ import annotations

import random
from fractions import Fraction

from .core import (
    P_KIND,
    Q_KIND,
    T_KIND,
    Form,
    H2Class,
    Monomial,
    Orbit,
    Series,
    Signature,
    TruncationWindow,
    letter_code,
)

SIG1_TEXT = """\
m 2
orbit g1 kappa=1 cz=0
orbit g2 kappa=2 cz=1
form th0 deg=0 unit
form th1 deg=2 divisor
h2 A0 c1=0 pair=1
"""


def sig1() -> Signature:
    return Signature(
        2,
        [Orbit("g1", 1, 0), Orbit("g2", 2, 1)],
        [Form("th0", 0, is_unit=True), Form("th1", 2, is_divisor=True)],
        [H2Class("A0", 0, Fraction(1))],
    )


def sig_odd_forms() -> Signature:
    """A signature with odd t variables (m = 3, a degree-3 form)."""
    return Signature(
        3,
        [Orbit("a", 1, 1), Orbit("b", 3, 2), Orbit("c", 2, -1)],
        [Form("u", 0, is_unit=True), Form("v", 2, is_divisor=True), Form("w", 3)],
        [H2Class("A", 1, Fraction(1)), H2Class("B", 0, Fraction(-2))],
    )


def random_word(sig: Signature, rng: random.Random, max_pq=3, max_t=1, max_level=2):
    letters = []
    for _ in range(rng.randint(0, max_pq)):
        i = rng.randrange(len(sig.orbits))
        letters.append(letter_code(rng.choice((Q_KIND, P_KIND)), i))
    for _ in range(rng.randint(0, max_t)):
        letters.append(letter_code(T_KIND, rng.randrange(len(sig.forms)), rng.randint(0, max_level)))
    rng.shuffle(letters)
    return letters


def random_monomial_series(sig: Signature, rng: random.Random, window=None, max_pq=3,
                           max_t=1, hbar=(-1, 1), max_z=1) -> Series:
    """A random word, star-multiplied out, times a random central factor."""
    from .core import normal_form

    word = [sig.generator_of(x) for x in random_word(sig, rng, max_pq, max_t)]
    z = tuple(rng.randint(0, max_z) for _ in sig.h2_basis)
    c = Fraction(rng.randint(-5, 5) or 1, rng.randint(1, 4))
    central = Series(sig, {Monomial(rng.randint(*hbar), z, ()): c})
    return normal_form(sig, [central] + word, 1, None).with_window(window)


def random_homogeneous(sig: Signature, rng: random.Random, terms=3, window=None, **kw) -> Series:
    """Sum of random monomial series sharing the degree of the first one."""
    from .core import grade_of

    first = None
    while first is None or first.is_zero():
        first = random_monomial_series(sig, rng, None, **kw)
    deg = sig.monomial_degree(next(iter(first.monomials())))
    first = first.filter(lambda m: sig.monomial_degree(m) == deg)
    total = first
    for _ in range(terms - 1):
        extra = random_monomial_series(sig, rng, None, **kw)
        total = total + extra.filter(lambda m: sig.monomial_degree(m) == deg)
    grade_of(total)
    return total.with_window(window)


def random_series(sig: Signature, rng: random.Random, terms=4, window=None, **kw) -> Series:
    total = sig.zero()
    for _ in range(terms):
        total = total + random_monomial_series(sig, rng, None, **kw)
    return total.with_window(window)


def random_window(rng: random.Random) -> TruncationWindow:
    lo = rng.randint(-3, 0)
    return TruncationWindow(lo, rng.randint(lo, 2), rng.randint(0, 6), rng.randint(0, 3),
                            rng.randint(0, 3))
