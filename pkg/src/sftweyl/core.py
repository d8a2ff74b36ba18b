"""Graded Weyl and Poisson algebras with descendant variables.

A :class:`Signature` fixes the generators (orbit variables ``p``/``q``,
descendant variables ``t``, homology variables ``z`` and ``hbar``) together
with their gradings.  A :class:`Series` is a finite exact-rational linear
combination of canonical monomials, optionally confined to a
:class:`TruncationWindow`; every operation computes its result exactly and
then drops whatever falls outside the window.

Canonical words list all t letters first (by form, then level), then the q
letters, then the p letters, both by orbit order in the signature.  ``hbar``
and ``z`` are even and central and are stored as exponents beside the word.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Iterable, NamedTuple

from .errors import (
    HbarPresent,
    MixedSignature,
    NonHomogeneous,
    ValidationError,
    WindowMismatch,
    WindowNotContained,
)
from .kernel import INDEX_SHIFT, KIND_SHIFT, WordKernel

T_KIND, Q_KIND, P_KIND = 0, 1, 2
_MASK = 0xFFFF


def letter_code(kind: int, index: int, level: int = 0) -> int:
    if not (0 <= index <= _MASK and 0 <= level <= _MASK):
        raise ValueError("letter index or level out of range")
    return (kind << KIND_SHIFT) | (index << INDEX_SHIFT) | level


def letter_kind(x: int) -> int:
    return x >> KIND_SHIFT


def letter_index(x: int) -> int:
    return (x >> INDEX_SHIFT) & _MASK


def letter_level(x: int) -> int:
    return x & _MASK


@dataclass(frozen=True)
class Orbit:
    id: str
    kappa: int
    cz: int
    # "+" or "-" inside a doubled (cobordism) signature, "" otherwise
    end: str = ""


@dataclass(frozen=True)
class Form:
    id: str
    deg: int
    is_unit: bool = False
    is_divisor: bool = False


@dataclass(frozen=True)
class H2Class:
    id: str
    c1: int
    pairing: Fraction = Fraction(0)


@dataclass(frozen=True)
class Generator:
    """A single generator; ``kind`` is one of P, Q, T, Z, HBAR."""

    kind: str
    ref: str | None = None
    level: int = 0
    end: str = ""

    def __post_init__(self):
        if self.kind not in ("P", "Q", "T", "Z", "HBAR"):
            raise ValueError(f"unknown generator kind {self.kind!r}")


HBAR = Generator("HBAR")


def P(orbit: str, end: str = "") -> Generator:
    return Generator("P", orbit, 0, end)


def Q(orbit: str, end: str = "") -> Generator:
    return Generator("Q", orbit, 0, end)


def T(form: str, level: int) -> Generator:
    return Generator("T", form, level)


def Z(basis: str) -> Generator:
    return Generator("Z", basis)


class Monomial(NamedTuple):
    hbar_exp: int
    z_exps: tuple
    letters: tuple


@dataclass(frozen=True)
class Signature:
    """Generator universe: orbits, differential forms, H_2 basis and ``m``.

    ``dim V = 2m - 1``.  Orbit order, form order and basis order are the
    declaration order and define the canonical letter order.
    """

    m: int
    orbits: tuple = ()
    forms: tuple = ()
    h2_basis: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "orbits", tuple(self.orbits))
        object.__setattr__(self, "forms", tuple(self.forms))
        object.__setattr__(self, "h2_basis", tuple(self.h2_basis))
        self._validate()

    def _validate(self):
        orbit_keys = [(o.id, o.end) for o in self.orbits]
        if len(set(orbit_keys)) != len(orbit_keys):
            raise ValidationError("duplicate orbit id")
        for o in self.orbits:
            if o.kappa < 1:
                raise ValidationError(f"orbit {o.id}: multiplicity must be positive")
            if o.end not in ("", "+", "-"):
                raise ValidationError(f"orbit {o.id}: bad end marker {o.end!r}")
        form_ids = [f.id for f in self.forms]
        if len(set(form_ids)) != len(form_ids):
            raise ValidationError("duplicate form id")
        basis_ids = [a.id for a in self.h2_basis]
        if len(set(basis_ids)) != len(basis_ids):
            raise ValidationError("duplicate h2 basis id")
        units = [f for f in self.forms if f.is_unit]
        if len(units) != 1:
            raise ValidationError(f"need exactly one unit form, found {len(units)}")
        if units[0].deg != 0:
            raise ValidationError("the unit form must have degree 0")
        divisors = [f for f in self.forms if f.is_divisor]
        if len(divisors) > 1:
            raise ValidationError("at most one divisor form is allowed")
        if divisors and divisors[0].deg != 2:
            raise ValidationError("the divisor form must have degree 2")
        for f in self.forms:
            if f.deg < 0:
                raise ValidationError(f"form {f.id}: negative degree")
        if len(self.orbits) > _MASK or len(self.forms) > _MASK:
            raise ValidationError("too many generators")

    # lookups

    @cached_property
    def _orbit_lookup(self):
        return {(o.id, o.end): i for i, o in enumerate(self.orbits)}

    @cached_property
    def _form_lookup(self):
        return {f.id: i for i, f in enumerate(self.forms)}

    @cached_property
    def _basis_lookup(self):
        return {a.id: i for i, a in enumerate(self.h2_basis)}

    def orbit_index(self, orbit_id: str, end: str = "") -> int:
        try:
            return self._orbit_lookup[(orbit_id, end)]
        except KeyError:
            raise KeyError(f"unknown orbit {orbit_id!r}{end}") from None

    def form_index(self, form_id: str) -> int:
        try:
            return self._form_lookup[form_id]
        except KeyError:
            raise KeyError(f"unknown form {form_id!r}") from None

    def basis_index(self, basis_id: str) -> int:
        try:
            return self._basis_lookup[basis_id]
        except KeyError:
            raise KeyError(f"unknown h2 class {basis_id!r}") from None

    @cached_property
    def unit_form_index(self) -> int:
        return next(i for i, f in enumerate(self.forms) if f.is_unit)

    @cached_property
    def divisor_form_index(self) -> int | None:
        return next((i for i, f in enumerate(self.forms) if f.is_divisor), None)

    # gradings

    @property
    def hbar_degree(self) -> int:
        return 2 * (self.m - 3)

    def p_degree(self, i: int) -> int:
        return self.m - 3 - self.orbits[i].cz

    def q_degree(self, i: int) -> int:
        return self.m - 3 + self.orbits[i].cz

    def t_degree(self, i: int, level: int) -> int:
        return 2 * (1 - level) - self.forms[i].deg

    def z_degree(self, i: int) -> int:
        return -2 * self.h2_basis[i].c1

    def letter_degree(self, x: int) -> int:
        kind, i = letter_kind(x), letter_index(x)
        if kind == T_KIND:
            return self.t_degree(i, letter_level(x))
        if kind == Q_KIND:
            return self.q_degree(i)
        return self.p_degree(i)

    def monomial_degree(self, mono: Monomial) -> int:
        d = mono.hbar_exp * self.hbar_degree
        for i, e in enumerate(mono.z_exps):
            if e:
                d += e * self.z_degree(i)
        for x in mono.letters:
            d += self.letter_degree(x)
        return d

    def monomial_parity(self, mono: Monomial) -> int:
        return self.kernel.word_parity(mono.letters)

    @cached_property
    def kernel(self):
        return WordKernel(
            [f.deg % 2 for f in self.forms],
            [(self.m - 3 + o.cz) % 2 for o in self.orbits],
            [o.kappa for o in self.orbits],
        )

    # generators as letters and series

    def letter(self, g: Generator) -> int:
        if g.kind == "P":
            return letter_code(P_KIND, self.orbit_index(g.ref, g.end))
        if g.kind == "Q":
            return letter_code(Q_KIND, self.orbit_index(g.ref, g.end))
        if g.kind == "T":
            if g.level < 0:
                raise ValueError("descendant level must be nonnegative")
            return letter_code(T_KIND, self.form_index(g.ref), g.level)
        raise ValueError(f"{g.kind} is not a word letter")

    def generator_of(self, x: int) -> Generator:
        kind, i = letter_kind(x), letter_index(x)
        if kind == T_KIND:
            return T(self.forms[i].id, letter_level(x))
        o = self.orbits[i]
        return (Q if kind == Q_KIND else P)(o.id, o.end)

    def generator_degree(self, g: Generator) -> int:
        if g.kind == "HBAR":
            return self.hbar_degree
        if g.kind == "Z":
            return self.z_degree(self.basis_index(g.ref))
        return self.letter_degree(self.letter(g))

    @property
    def zero_z(self) -> tuple:
        return (0,) * len(self.h2_basis)

    def monomial(self, generator: Generator, power: int = 1) -> Monomial:
        z = self.zero_z
        if generator.kind == "HBAR":
            return Monomial(power, z, ())
        if generator.kind == "Z":
            zl = list(z)
            zl[self.basis_index(generator.ref)] = power
            return Monomial(0, tuple(zl), ())
        if power < 0:
            raise ValueError("negative powers only exist for hbar")
        return Monomial(0, z, (self.letter(generator),) * power)

    def gen(self, generator: Generator, window=None) -> "Series":
        return Series(self, {self.monomial(generator): 1}, window)

    def p(self, orbit: str, end: str = "", window=None) -> "Series":
        return self.gen(P(orbit, end), window)

    def q(self, orbit: str, end: str = "", window=None) -> "Series":
        return self.gen(Q(orbit, end), window)

    def t(self, form: str, level: int, window=None) -> "Series":
        return self.gen(T(form, level), window)

    def z(self, basis: str, window=None) -> "Series":
        return self.gen(Z(basis), window)

    def hbar(self, power: int = 1, window=None) -> "Series":
        return Series(self, {Monomial(power, self.zero_z, ()): 1}, window)

    def const(self, c=1, window=None) -> "Series":
        return Series(self, {Monomial(0, self.zero_z, ()): c}, window)

    def zero(self, window=None) -> "Series":
        return Series(self, {}, window)


@dataclass(frozen=True)
class TruncationWindow:
    """Box of monomials in which arithmetic is kept.

    ``max_t_level`` is only consulted when a finite monomial basis of the
    whole window has to be enumerated; ``None`` leaves levels unbounded.
    """

    hbar_min: int = -3
    hbar_max: int = 1
    max_pq_letters: int = 5
    max_t_letters: int = 3
    max_z_total: int = 3
    max_t_level: int | None = None

    def __post_init__(self):
        if self.hbar_min > self.hbar_max:
            raise ValueError("hbar_min exceeds hbar_max")
        for name in ("max_pq_letters", "max_t_letters", "max_z_total"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.max_t_level is not None and self.max_t_level < 0:
            raise ValueError("max_t_level must be nonnegative")

    def contains(self, mono: Monomial) -> bool:
        if not (self.hbar_min <= mono.hbar_exp <= self.hbar_max):
            return False
        if sum(mono.z_exps) > self.max_z_total:
            return False
        nt = 0
        for x in mono.letters:
            if x >> KIND_SHIFT:
                continue
            nt += 1
            if self.max_t_level is not None and letter_level(x) > self.max_t_level:
                return False
        return nt <= self.max_t_letters and len(mono.letters) - nt <= self.max_pq_letters

    def includes(self, other: "TruncationWindow") -> bool:
        """True when every monomial inside ``other`` is inside ``self``."""
        lv_ok = self.max_t_level is None or (
            other.max_t_level is not None and other.max_t_level <= self.max_t_level
        )
        return (
            self.hbar_min <= other.hbar_min
            and other.hbar_max <= self.hbar_max
            and other.max_pq_letters <= self.max_pq_letters
            and other.max_t_letters <= self.max_t_letters
            and other.max_z_total <= self.max_z_total
            and lv_ok
        )

    def adjusted(self, *, hbar_lo=0, hbar_hi=0, pq=0, t=0, z=0) -> "TruncationWindow":
        """Window with each bound moved outward by the given amount.

        Negative amounts shrink; bounds are clamped so the result stays valid.
        """
        lo = self.hbar_min - hbar_lo
        hi = self.hbar_max + hbar_hi
        if lo > hi:
            lo = hi
        return replace(
            self,
            hbar_min=lo,
            hbar_max=hi,
            max_pq_letters=max(0, self.max_pq_letters + pq),
            max_t_letters=max(0, self.max_t_letters + t),
            max_z_total=max(0, self.max_z_total + z),
        )


DEFAULT_WINDOW = TruncationWindow()


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class Series:
    """Exact finite sum of canonical monomials over one signature."""

    __slots__ = ("sig", "window", "_terms", "_hash")

    def __init__(self, sig: Signature, terms=None, window: TruncationWindow | None = None):
        self.sig = sig
        self.window = window
        clean = {}
        if terms:
            for mono, c in terms.items():
                c = _coerce(c)
                if c and (window is None or window.contains(mono)):
                    clean[mono] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, sig, terms, window):
        # terms already exact, nonzero and inside the window
        s = object.__new__(cls)
        s.sig = sig
        s.window = window
        s._terms = terms
        s._hash = None
        return s

    # container protocol

    def items(self):
        return self._terms.items()

    def monomials(self):
        return self._terms.keys()

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, Series):
            return self.sig == other.sig and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self._terms == self._const_terms(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        from .textio import print_canonical

        return f"Series({print_canonical(self)!r})"

    def __str__(self):
        from .textio import print_canonical

        return print_canonical(self)

    def _const_terms(self, c):
        c = _coerce(c)
        return {Monomial(0, self.sig.zero_z, ()): c} if c else {}

    # linear structure

    def _lift(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        if isinstance(other, (int, Rational)):
            return Series(self.sig, self._const_terms(other), self.window)
        raise TypeError(f"cannot combine Series with {type(other).__name__}")

    def __add__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.sig, {k: -c for k, c in self._terms.items()}, self.window)

    def __sub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(self, -other)

    def __rsub__(self, other):
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return add(other, -self)

    def scale(self, c) -> "Series":
        c = _coerce(c)
        if not c:
            return Series._raw(self.sig, {}, self.window)
        return Series._raw(self.sig, {k: c * v for k, v in self._terms.items()}, self.window)

    def __mul__(self, other):
        if isinstance(other, Series):
            return star(self, other)
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(Fraction(1) / _coerce(other))
        return NotImplemented

    def with_window(self, window: TruncationWindow | None) -> "Series":
        """Re-tag with ``window``, dropping monomials outside it."""
        return Series(self.sig, self._terms, window)

    def map_terms(self, fn) -> "Series":
        """Apply ``fn(mono, coeff) -> coeff`` monomial-wise (zeros dropped)."""
        out = {}
        for mono, c in self._terms.items():
            v = _coerce(fn(mono, c))
            if v:
                out[mono] = v
        return Series._raw(self.sig, out, self.window)

    def filter(self, pred) -> "Series":
        return Series._raw(
            self.sig, {k: c for k, c in self._terms.items() if pred(k)}, self.window
        )

    def parity_parts(self) -> dict:
        """``{parity: homogeneous-parity part}`` for the parities present."""
        parts = {}
        par = self.sig.monomial_parity
        for mono, c in self._terms.items():
            parts.setdefault(par(mono), {})[mono] = c
        return {p: Series._raw(self.sig, t, self.window) for p, t in parts.items()}


def _check_pair(f: Series, g: Series) -> TruncationWindow | None:
    if f.sig is not g.sig and f.sig != g.sig:
        raise MixedSignature("operands belong to different signatures")
    if f.window is None:
        return g.window
    if g.window is None or g.window == f.window:
        return f.window
    raise WindowMismatch(f"windows differ: {f.window} vs {g.window}")


def add(f: Series, g: Series) -> Series:
    w = _check_pair(f, g)
    out = dict(f._terms)
    for k, c in g._terms.items():
        v = out.get(k, 0) + c
        if v:
            out[k] = v
        else:
            out.pop(k, None)
    if w is not None and (f.window != w or g.window != w):
        out = {k: c for k, c in out.items() if w.contains(k)}
    return Series._raw(f.sig, out, w)


def linear_combination(sig: Signature, pairs: Iterable, window=None) -> Series:
    """Sum of ``coeff * series`` for ``(coeff, series)`` pairs."""
    acc = {}
    for c, s in pairs:
        c = _coerce(c)
        if not c:
            continue
        for k, v in s._terms.items():
            acc[k] = acc.get(k, 0) + c * v
    return Series(sig, acc, window)


def _prunable(w: TruncationWindow | None, a: Monomial, b: Monomial) -> bool:
    # bounds that can only grow under multiplication
    if w is None:
        return False
    if a.hbar_exp + b.hbar_exp > w.hbar_max:
        return True
    if sum(a.z_exps) + sum(b.z_exps) > w.max_z_total:
        return True
    nt = sum(1 for x in a.letters if not x >> KIND_SHIFT) + sum(
        1 for x in b.letters if not x >> KIND_SHIFT
    )
    return nt > w.max_t_letters


def _product(f: Series, g: Series, contract: bool) -> Series:
    w = _check_pair(f, g)
    prod = f.sig.kernel.product
    acc = {}
    for a, ca in f._terms.items():
        for b, cb in g._terms.items():
            if _prunable(w, a, b):
                continue
            c = ca * cb
            h = a.hbar_exp + b.hbar_exp
            z = tuple(x + y for x, y in zip(a.z_exps, b.z_exps)) if a.z_exps else a.z_exps
            for (dh, word), k in prod(a.letters, b.letters, contract).items():
                key = Monomial(h + dh, z, word)
                acc[key] = acc.get(key, 0) + c * k
    if w is None:
        out = {k: c for k, c in acc.items() if c}
    else:
        out = {k: c for k, c in acc.items() if c and w.contains(k)}
    return Series._raw(f.sig, out, w)


def star(f: Series, g: Series) -> Series:
    """Weyl star product ``f * g``, truncated to the common window."""
    return _product(f, g, True)


def supercommutative_product(f: Series, g: Series) -> Series:
    """Graded-commutative product (the star product without contractions)."""
    return _product(f, g, False)


def _parity_of_series(f: Series) -> int | None:
    parts = f.parity_parts()
    if len(parts) > 1:
        return None
    return next(iter(parts), 0)


def weyl_bracket(f: Series, g: Series) -> Series:
    """Graded commutator ``f*g - (-1)^{|f||g|} g*f``, bilinear in parity parts."""
    w = _check_pair(f, g)
    total = Series(f.sig, {}, w)
    for pa, fa in f.parity_parts().items():
        for pb, gb in g.parity_parts().items():
            fg = star(fa, gb)
            gf = star(gb, fa)
            total = add(total, add(fg, -gf if not (pa and pb) else gf))
    return total


def normal_form(sig: Signature, word, coeff=1, window=None) -> Series:
    """Star product of the generators (or series) in ``word``, times ``coeff``."""
    acc = sig.const(coeff, window)
    for item in word:
        if isinstance(item, Series):
            if item.sig is not sig and item.sig != sig:
                raise MixedSignature("word mixes signatures")
            factor = item
        else:
            factor = sig.gen(item, window)
        acc = star(acc, factor)
    return acc


def grade_of(x, sig: Signature | None = None) -> int | None:
    """Grading of a generator (needs ``sig``), a monomial or a Series.

    Returns ``None`` for the zero series, which is homogeneous of every
    degree.
    """
    if isinstance(x, Generator):
        if sig is None:
            raise TypeError("grade_of(Generator) needs the signature")
        return sig.generator_degree(x)
    if isinstance(x, Monomial):
        if sig is None:
            raise TypeError("grade_of(Monomial) needs the signature")
        return sig.monomial_degree(x)
    degrees = {x.sig.monomial_degree(m) for m in x.monomials()}
    if len(degrees) > 1:
        raise NonHomogeneous(f"series mixes degrees {sorted(degrees)}")
    return next(iter(degrees), None)


def degree_parts(f: Series) -> dict:
    """``{degree: homogeneous part}``."""
    parts = {}
    deg = f.sig.monomial_degree
    for mono, c in f.items():
        parts.setdefault(deg(mono), {})[mono] = c
    return {d: Series._raw(f.sig, t, f.window) for d, t in sorted(parts.items())}


def letter_derivative(f: Series, x: int, side: str = "left") -> Series:
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    kern = f.sig.kernel
    der = kern.left_derivative if side == "left" else kern.right_derivative
    acc = {}
    for mono, c in f.items():
        if x not in mono.letters:
            continue
        for word, k in der(mono.letters, x).items():
            key = Monomial(mono.hbar_exp, mono.z_exps, word)
            acc[key] = acc.get(key, 0) + c * k
    return Series(f.sig, acc, f.window)


def partial_derivative(f: Series, x: Generator, side: str = "left") -> Series:
    """Graded derivative by a generator.

    For ``hbar`` and ``z`` (even, central) the exponent rule applies and
    ``side`` is irrelevant.
    """
    if x.kind == "HBAR":
        acc = {
            Monomial(m.hbar_exp - 1, m.z_exps, m.letters): c * m.hbar_exp
            for m, c in f.items()
            if m.hbar_exp
        }
        return Series(f.sig, acc, f.window)
    if x.kind == "Z":
        i = f.sig.basis_index(x.ref)
        acc = {}
        for m, c in f.items():
            e = m.z_exps[i]
            if e:
                z = m.z_exps[:i] + (e - 1,) + m.z_exps[i + 1:]
                acc[Monomial(m.hbar_exp, z, m.letters)] = c * e
        return Series(f.sig, acc, f.window)
    return letter_derivative(f, f.sig.letter(x), side)


def poisson_bracket(f: Series, g: Series) -> Series:
    """Poisson bracket of two hbar-free series.

    ``{f,g} = sum_gamma kappa (f d/dp)(d/dq g) - (-1)^{|f||g|} (g d/dp)(d/dq f)``
    with right p-derivatives and left q-derivatives, the ordering under which
    it is the first-order part of the Weyl bracket.
    """
    for s in (f, g):
        if any(m.hbar_exp for m in s.monomials()):
            raise HbarPresent("poisson_bracket needs hbar-free operands")
    w = _check_pair(f, g)
    sig = f.sig
    total = Series(sig, {}, w)
    for i, orbit in enumerate(sig.orbits):
        p = letter_code(P_KIND, i)
        q = p - (1 << KIND_SHIFT)
        for pa, fa in f.parity_parts().items():
            for pb, gb in g.parity_parts().items():
                a = supercommutative_product(
                    letter_derivative(fa, p, "right"), letter_derivative(gb, q, "left")
                )
                b = supercommutative_product(
                    letter_derivative(gb, p, "right"), letter_derivative(fa, q, "left")
                )
                term = add(a, b if pa and pb else -b)
                total = add(total, term.scale(orbit.kappa))
    return total


def genus_expansion(H: Series) -> list:
    """``[(g, H_g)]`` with ``H = sum_g H_g hbar^(g-1)``; each ``H_g`` hbar-free."""
    groups = {}
    for m, c in H.items():
        groups.setdefault(m.hbar_exp + 1, {})[Monomial(0, m.z_exps, m.letters)] = c
    return [(g, Series(H.sig, groups[g])) for g in sorted(groups)]


def hbar_coefficient(f: Series, k: int) -> Series:
    """Coefficient of ``hbar^k`` as an hbar-free series."""
    return Series(
        f.sig,
        {Monomial(0, m.z_exps, m.letters): c for m, c in f.items() if m.hbar_exp == k},
    )


def truncate(f: Series, w: TruncationWindow) -> Series:
    if f.window is not None and not f.window.includes(w):
        raise WindowNotContained(f"{w} is not inside {f.window}")
    return f.with_window(w)


def set_t_zero(f: Series) -> Series:
    """Specialize every descendant variable to zero."""
    return f.filter(lambda m: all(x >> KIND_SHIFT for x in m.letters))


def count_letters(mono: Monomial, kind: int) -> int:
    return sum(1 for x in mono.letters if letter_kind(x) == kind)
