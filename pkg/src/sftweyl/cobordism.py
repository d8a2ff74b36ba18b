"""Cobordisms: the D-space with its left W- and right W+ actions,
exponentials of potentials, ``D^F``, the maps ``F+-`` and their checks.

Everything lives over one doubled :class:`Signature` whose orbits carry
``end="-"`` or ``end="+"``; t, z and hbar are shared by both ends.  A
D-space element only contains ``q-`` and ``p+`` letters.
"""
from __future__ import annotations

import warnings
from fractions import Fraction
from functools import lru_cache

from .core import (
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
    letter_derivative,
    letter_index,
    letter_kind,
    supercommutative_product,
    weyl_bracket,
)
from .errors import (
    FundamentalFails,
    NotDSpace,
    SelfTestFailed,
    ValidationError,
    WrongEnd,
    ZeroWeightMonomial,
)
from .identities import (
    CheckReport,
    FirstOrderOperator,
    Status,
    bracket_interior,
    require_master,
)


def doubled_signature(minus: Signature, plus: Signature) -> Signature:
    """Orbits of ``minus`` tagged ``-`` followed by those of ``plus`` tagged ``+``."""
    if minus.m != plus.m:
        raise ValidationError("the two ends have different dimensions")
    if minus.forms != plus.forms or minus.h2_basis != plus.h2_basis:
        raise ValidationError("the two ends must share forms and the H_2 basis")
    orbits = [Orbit(o.id, o.kappa, o.cz, "-") for o in minus.orbits]
    orbits += [Orbit(o.id, o.kappa, o.cz, "+") for o in plus.orbits]
    return Signature(minus.m, orbits, minus.forms, minus.h2_basis)


def cylinder_signature(sig: Signature) -> Signature:
    return doubled_signature(sig, sig)


def lift(f: Series, sig2: Signature, end: str, window=None) -> Series:
    """Copy a series over a one-ended signature into ``sig2`` at ``end``."""
    src = f.sig
    remap = {}
    for i, o in enumerate(src.orbits):
        j = sig2.orbit_index(o.id, end)
        for k in (Q_KIND, P_KIND):
            remap[letter_code(k, i)] = letter_code(k, j)
    out = {}
    for m, c in f.items():
        word = tuple(sorted(remap.get(x, x) if letter_kind(x) != T_KIND else x
                            for x in m.letters))
        out[Monomial(m.hbar_exp, m.z_exps, word)] = c
    return Series(sig2, out, window if window is not None else f.window)


def _end_of(sig: Signature, x: int) -> str:
    return sig.orbits[letter_index(x)].end


def ends_of(f: Series) -> set:
    """The set of ends whose orbit letters occur in ``f``."""
    sig = f.sig
    return {_end_of(sig, x) for m in f.monomials() for x in m.letters if letter_kind(x) != T_KIND}


def check_end(f: Series, end: str):
    bad = ends_of(f) - {end}
    if bad:
        raise WrongEnd(f"expected letters of the {end} end only, found {sorted(bad)}")


def check_dspace(g: Series):
    sig = g.sig
    for m in g.monomials():
        for x in m.letters:
            k = letter_kind(x)
            if k == T_KIND:
                continue
            end = _end_of(sig, x)
            if (k == Q_KIND and end != "-") or (k == P_KIND and end != "+"):
                raise NotDSpace(f"letter {sig.generator_of(x)} is not allowed in the D-space")


def _shift_hbar(g: Series, k: int) -> Series:
    if not k:
        return g
    return Series(g.sig, {Monomial(m.hbar_exp + k, m.z_exps, m.letters): c for m, c in g.items()},
                  g.window)


def _central(g: Series, mono: Monomial, c) -> Series:
    out = {}
    for m, v in g.items():
        z = tuple(a + b for a, b in zip(m.z_exps, mono.z_exps))
        out[Monomial(m.hbar_exp + mono.hbar_exp, z, m.letters)] = v * c
    return Series(g.sig, out, g.window)


def _letter_series(g: Series, x: int) -> Series:
    return Series(g.sig, {Monomial(0, g.sig.zero_z, (x,)): 1}, g.window)


def _conj(x: int) -> int:
    k = letter_kind(x)
    return letter_code(Q_KIND if k == P_KIND else P_KIND, letter_index(x))


def _left_op(x: int, g: Series) -> Series:
    k = letter_kind(x)
    if k == P_KIND:
        kappa = g.sig.orbits[letter_index(x)].kappa
        return _shift_hbar(letter_derivative(g, _conj(x), "left"), 1).scale(kappa)
    return supercommutative_product(_letter_series(g, x), g)


def _right_op(g: Series, x: int) -> Series:
    k = letter_kind(x)
    if k == Q_KIND:
        kappa = g.sig.orbits[letter_index(x)].kappa
        return _shift_hbar(letter_derivative(g, _conj(x), "right"), 1).scale(kappa)
    return supercommutative_product(g, _letter_series(g, x))


def act_left(f: Series, g: Series, window=None) -> Series:
    """``f -> g``: ``q-`` multiplies from the left, ``p-`` is ``kappa hbar d/dq-``.

    A word ``x1...xn`` acts as ``op(x1) o ... o op(xn)``.
    """
    check_end(f, "-")
    check_dspace(g)
    w = window if window is not None else g.window
    g = g.with_window(w)
    total = Series(g.sig, {}, w)
    for mono, c in f.items():
        acc = g
        for x in reversed(mono.letters):
            acc = _left_op(x, acc)
            if not acc:
                break
        if acc:
            total = add(total, _central(acc, mono, c))
    return total


def act_right(g: Series, f: Series, window=None) -> Series:
    """``g <- f``: ``p+`` multiplies from the right, ``q+`` is ``kappa hbar d/dp+``
    acting from the right; ``g <- x1...xn = ((g <- x1) <- ...) <- xn``."""
    check_end(f, "+")
    check_dspace(g)
    w = window if window is not None else g.window
    g = g.with_window(w)
    total = Series(g.sig, {}, w)
    for mono, c in f.items():
        acc = g
        for x in mono.letters:
            acc = _right_op(acc, x)
            if not acc:
                break
        if acc:
            total = add(total, _central(acc, mono, c))
    return total


def check_potential(F: Series):
    check_dspace(F)
    for m in F.monomials():
        if not m.letters and not any(m.z_exps):
            raise ZeroWeightMonomial("a potential needs at least one letter or z in every term")
        if F.sig.monomial_parity(m):
            raise ValidationError("potentials must be even")


def exp_series(F: Series, w: TruncationWindow) -> Series:
    """``sum F^k / k!`` inside ``w``.

    Every factor adds a letter or a z power, so the sum stops after at most
    ``pq + t + z`` steps.  Powers are formed in a window whose lower hbar
    bound is relaxed by what later factors could still raise.
    """
    check_potential(F)
    sig = F.sig
    if F.is_zero():
        return sig.const(1, w)
    kmax = w.max_pq_letters + w.max_t_letters + w.max_z_total
    hi = max(0, max(m.hbar_exp for m in F.monomials()))
    work = w.adjusted(hbar_lo=hi * kmax)
    Fw = F.with_window(work)
    term = sig.const(1, work)
    total = term
    for k in range(1, kmax + 1):
        term = supercommutative_product(term, Fw).scale(Fraction(1, k))
        if term.is_zero():
            break
        total = add(total, term)
    return total.with_window(w)


def _margin(w: TruncationWindow) -> TruncationWindow:
    # room for terms that can come back into w after contractions
    return w.adjusted(hbar_lo=2, hbar_hi=2, pq=2)


def _pair_exp(F: Series, w: TruncationWindow):
    return exp_series(F, w), exp_series(-F, w)


def _product(a: Series, b: Series) -> Series:
    return supercommutative_product(a, b)


def fundamental_defect(F: Series, Hp: Series, Hm: Series, w: TruncationWindow) -> Series:
    work = _margin(w)
    eF = exp_series(F, work)
    d = add(act_right(eF, Hp.with_window(work)), -act_left(Hm.with_window(work), eF))
    return d.with_window(w)


def _assemble(name, defect, w, message=""):
    if defect.is_zero():
        return CheckReport(name, Status.HOLDS_EXACTLY, defect, None, w, message)
    if defect.with_window(bracket_interior(w)).is_zero():
        return CheckReport(name, Status.HOLDS_WITHIN_WINDOW, defect, None, w,
                           message or "defect confined to the window boundary")
    return CheckReport(name, Status.FAILS, defect, None, w, message)


def _masters(Hp, Hm, w):
    require_master(Hp, w)
    require_master(Hm, w)


def check_fundamental(F: Series, Hp: Series, Hm: Series, w: TruncationWindow) -> CheckReport:
    """``e^F <- H+  -  H- -> e^F``."""
    _masters(Hp, Hm, w)
    return _assemble("fundamental", fundamental_defect(F, Hp, Hm, w), w)


@lru_cache(maxsize=64)
def _fundamental_holds(F, Hp, Hm, w) -> bool:
    return _assemble("fundamental", fundamental_defect(F, Hp, Hm, w), w).holds


def _dF_work(g, F, Hp, Hm, work):
    eF, emF = _pair_exp(F, work)
    g = g.with_window(work)
    Hp = Hp.with_window(work)
    Hm = Hm.with_window(work)
    total = Series(g.sig, {}, work)
    for par, gp in g.parity_parts().items():
        ge = _product(gp, eF)
        left = _product(emF, act_left(Hm, ge))
        right = _product(act_right(ge, Hp), emF)
        total = add(total, add(left, right if par else -right))
    return total


def dF_operator(g: Series, F: Series, Hp: Series, Hm: Series, w: TruncationWindow) -> Series:
    """``D^F g = e^{-F} (H- -> g e^F) - (-1)^{|g|} (g e^F <- H+) e^{-F}``.

    Warns with :class:`FundamentalFails` when the fundamental identity does
    not hold in ``w``; the value is returned regardless.
    """
    check_dspace(g)
    if not _fundamental_holds(F, Hp, Hm, w):
        warnings.warn("fundamental identity fails; D^F o D^F = 0 is not guaranteed",
                      FundamentalWarning, stacklevel=2)
    return _dF_work(g, F, Hp, Hm, _margin(w)).with_window(w)


class FundamentalWarning(UserWarning):
    pass


def _push_work(f, sign, F, work):
    eF, emF = _pair_exp(F, work)
    f = f.with_window(work)
    if sign == "-":
        return _product(emF, act_left(f, eF))
    return _product(act_right(eF, f), emF)


def pushforward(f: Series, sign: str, F: Series, w: TruncationWindow) -> Series:
    """``F-(f) = e^{-F} (f -> e^F)`` and ``F+(f) = (e^F <- f) e^{-F}``."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    check_end(f, sign)
    return _push_work(f, sign, F, _margin(w)).with_window(w)


def _require_fundamental(F, Hp, Hm, w):
    if not _fundamental_holds(F, Hp, Hm, w):
        raise FundamentalFails("the fundamental identity does not hold in the window")


def _probe_ends(f: Series) -> list:
    ends = ends_of(f)
    if len(ends) > 1:
        raise WrongEnd("a probe mixes letters of both ends")
    return sorted(ends) if ends else ["-", "+"]


def check_chain_map(F, Hp, Hm, probes, w: TruncationWindow) -> CheckReport:
    """``F+-(D+- f) = D^F(F+-(f))`` for every probe.

    A probe without orbit letters is checked at both ends.
    """
    _masters(Hp, Hm, w)
    _require_fundamental(F, Hp, Hm, w)
    work = _margin(w)
    sig = F.sig
    worst = None
    for f in probes:
        for end in _probe_ends(f):
            H = (Hm if end == "-" else Hp).with_window(None)
            fw = f.with_window(None)
            Df = weyl_bracket(H, fw).with_window(work)
            lhs = _push_work(Df, end, F, work)
            rhs = _dF_work(_push_work(fw, end, F, work), F, Hp, Hm, work)
            defect = add(lhs, -rhs).with_window(w)
            rep = _assemble("chainmap", defect, w, f"probe {f} at end {end}")
            if worst is None or _rank(rep) > _rank(worst):
                worst = rep
    if worst is None:
        return CheckReport("chainmap", Status.HOLDS_EXACTLY, sig.zero(w), None, w, "no probes")
    return worst


def _rank(rep):
    order = [Status.HOLDS_EXACTLY, Status.HOLDS_IN_HOMOLOGY, Status.HOLDS_WITHIN_WINDOW, Status.FAILS]
    return order.index(rep.status)


def check_covariance(F, Hp, Hm, op, w: TruncationWindow) -> CheckReport:
    """``F+(X H+) - F-(X H-) = (-1)^{|X|} D^F(X F)`` for a first-order
    operator ``X``; ``op`` is a :class:`FirstOrderOperator` or a
    ``(form id, level)`` pair meaning ``d/dt^{form,level}``."""
    if not isinstance(op, FirstOrderOperator):
        form, level = op
        op = FirstOrderOperator(t_form=form, t_level=level)
    _masters(Hp, Hm, w)
    _require_fundamental(F, Hp, Hm, w)
    work = _margin(w)
    XHp = op(Hp.with_window(work))
    XHm = op(Hm.with_window(work))
    XF = op(F.with_window(work))
    sign = -1 if op.parity(F.sig) else 1
    lhs = add(_push_work(XHp, "+", F, work), -_push_work(XHm, "-", F, work))
    rhs = _dF_work(XF, F, Hp, Hm, work).scale(sign)
    return _assemble("covariance", add(lhs, -rhs).with_window(w), w)


def trivial_potential(sig: Signature, w: TruncationWindow) -> Series:
    """``hbar^-1 sum_g kappa_g^-1 q-_g p+_g`` over orbits present at both ends.

    Verified against the fundamental identity for ``H = hbar^-1 q_g`` and
    ``H = hbar^-1 p_g`` on both ends (summands of even degree allowed here).
    """
    terms = {}
    pairs = []
    for i, o in enumerate(sig.orbits):
        if o.end != "-":
            continue
        try:
            j = sig.orbit_index(o.id, "+")
        except KeyError:
            continue
        pairs.append((i, j, o))
        word = tuple(sorted((letter_code(Q_KIND, i), letter_code(P_KIND, j))))
        terms[Monomial(-1, sig.zero_z, word)] = Fraction(1, o.kappa)
    F = Series(sig, terms, w)
    for i, j, o in pairs:
        for kind in (Q_KIND, P_KIND):
            Hm = Series(sig, {Monomial(-1, sig.zero_z, (letter_code(kind, i),)): 1}, w)
            Hp = Series(sig, {Monomial(-1, sig.zero_z, (letter_code(kind, j),)): 1}, w)
            rep = _assemble("fundamental", fundamental_defect(F, Hp, Hm, w), w)
            if not rep.holds:
                name = "q" if kind == Q_KIND else "p"
                raise SelfTestFailed(f"trivial potential fails for H = h^-1 {name}[{o.id}]: "
                                     f"defect {rep.defect}")
    return F
