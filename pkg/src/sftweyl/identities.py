"""Master equation, descendant commutation and the string, dilaton and
divisor equations as defect computations with reports."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import permutations

from .core import (
    P_KIND,
    Q_KIND,
    T_KIND,
    Monomial,
    Series,
    Signature,
    TruncationWindow,
    add,
    letter_code,
    letter_derivative,
    letter_index,
    letter_kind,
    letter_level,
    normal_form,
    set_t_zero,
    supercommutative_product,
    weyl_bracket,
)
from .errors import EvenSummand, MasterFails, NoDivisorForm, NotClosed, ValidationError


class Status(str, Enum):
    HOLDS_EXACTLY = "holds_exactly"
    HOLDS_WITHIN_WINDOW = "holds_within_window"
    HOLDS_IN_HOMOLOGY = "holds_in_homology"
    FAILS = "fails"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CheckReport:
    name: str
    status: Status
    defect: Series
    certificate: Series | None = None
    window: TruncationWindow | None = None
    message: str = ""

    @property
    def holds(self) -> bool:
        return self.status is not Status.FAILS


@dataclass(frozen=True)
class GeometryData:
    """Spanning-surface numbers ``d``, cup constants and the triple pairing.

    ``cup[(g, a, b)]`` is ``c_{g a}^b`` and ``triple[(a, b, c)]`` is
    ``eta_{abc}``, all keyed by form ids.  :meth:`build` validates degrees
    and completes both tensors by graded symmetry.
    """

    sig: Signature
    d: dict = field(default_factory=dict)
    cup: dict = field(default_factory=dict)
    triple: dict = field(default_factory=dict)

    @classmethod
    def zero(cls, sig: Signature) -> "GeometryData":
        return cls.build(sig, d={o.id: 0 for o in sig.orbits})

    @classmethod
    def build(cls, sig: Signature, d=None, cup=None, triple=None) -> "GeometryData":
        deg = {f.id: f.deg for f in sig.forms}
        orbit_ids = {o.id for o in sig.orbits}

        def known(fid):
            if fid not in deg:
                raise ValidationError(f"unknown form {fid!r}")

        dd = {}
        for oid, v in (d or {}).items():
            if oid not in orbit_ids:
                raise ValidationError(f"unknown orbit {oid!r}")
            dd[oid] = Fraction(v)

        full_cup = {}

        def put(table, key, v, what):
            old = table.get(key)
            if old is not None and old != v:
                raise ValidationError(f"inconsistent {what} entry {key}: {old} vs {v}")
            table[key] = v

        for (g, a, b), v in (cup or {}).items():
            for fid in (g, a, b):
                known(fid)
            v = Fraction(v)
            if v and deg[b] != deg[g] + deg[a]:
                raise ValidationError(
                    f"cup {g} {a} -> {b}: degree {deg[b]} != {deg[g]} + {deg[a]}"
                )
            put(full_cup, (g, a, b), v, "cup")
            sign = -1 if (deg[g] * deg[a]) % 2 else 1
            put(full_cup, (a, g, b), sign * v, "cup")

        full_triple = {}
        top = 2 * sig.m - 1
        for key, v in (triple or {}).items():
            for fid in key:
                known(fid)
            v = Fraction(v)
            if v and sum(deg[f] for f in key) != top:
                raise ValidationError(f"triple {key}: degrees do not sum to {top}")
            for perm in permutations(range(3)):
                put(full_triple, tuple(key[i] for i in perm), _koszul(perm, key, deg) * v, "triple")

        return cls(sig, dd, {k: v for k, v in full_cup.items() if v},
                   {k: v for k, v in full_triple.items() if v})

    def d_of(self, orbit_id: str) -> Fraction:
        return self.d.get(orbit_id, Fraction(0))

    @property
    def pairings(self) -> tuple:
        return tuple(Fraction(a.pairing) for a in self.sig.h2_basis)


def _koszul(perm, key, deg) -> int:
    # sign of reordering graded symbols key -> key[perm]
    items = list(perm)
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j] and deg[key[items[i]]] % 2 and deg[key[items[j]]] % 2:
                sign = -sign
    return sign


# building blocks


def _t_letter(sig: Signature, form_id: str, level: int) -> int:
    return letter_code(T_KIND, sig.form_index(form_id), level)


def t_derivative(f: Series, form_id: str, level: int) -> Series:
    return letter_derivative(f, _t_letter(f.sig, form_id, level), "left")


def euler_operator(f: Series) -> Series:
    """``-2 hbar d/dhbar - sum p d/dp - sum q d/dq - sum t d/dt``."""
    return f.map_terms(lambda m, c: c * (-2 * m.hbar_exp - len(m.letters)))


def z_degree_operator(f: Series, pairings=None) -> Series:
    """``sum_i a_i z_i d/dz_i`` with ``a_i`` the divisor pairings."""
    a = pairings if pairings is not None else [Fraction(h.pairing) for h in f.sig.h2_basis]
    return f.map_terms(lambda m, c: c * sum(ai * e for ai, e in zip(a, m.z_exps)))


def _t_levels(f: Series) -> dict:
    """``{form index: set of levels}`` of the t letters occurring in ``f``."""
    out = {}
    for m in f.monomials():
        for x in m.letters:
            if letter_kind(x) == T_KIND:
                out.setdefault(letter_index(x), set()).add(letter_level(x))
    return out


def _t_mult(f: Series, x: int) -> Series:
    t = Series(f.sig, {Monomial(0, f.sig.zero_z, (x,)): 1}, f.window)
    return supercommutative_product(t, f)


def descendant_shift(f: Series, cup=None, gamma: str | None = None) -> Series:
    """``sum_k t^{a,k+1} c_{gamma a}^b df/dt^{b,k}``.

    Without ``cup`` the coefficient is the identity ``delta_a^b`` (the unit
    form acts trivially), which is the string-equation shift.
    """
    sig = f.sig
    total = sig.zero(f.window)
    for bi, levels in sorted(_t_levels(f).items()):
        b = sig.forms[bi].id
        for k in sorted(levels):
            df = letter_derivative(f, letter_code(T_KIND, bi, k), "left")
            if not df:
                continue
            if cup is None:
                targets = [(b, Fraction(1))]
            else:
                targets = [(a, c) for (g, a, bb), c in sorted(cup.items()) if g == gamma and bb == b]
            for a, c in targets:
                total = add(total, _t_mult(df, _t_letter(sig, a, k + 1)).scale(c))
    return total


def constant_term(sig: Signature, triple: dict, form_id: str, window=None) -> Series:
    """``sum_{a,b} eta_{a b form} t^{a,0} t^{b,0}`` (level 0, no factor 1/2)."""
    total = sig.zero(window)
    for (a, b, c), v in sorted(triple.items()):
        if c != form_id:
            continue
        ta = sig.t(a, 0, window)
        tb = sig.t(b, 0, window)
        total = add(total, supercommutative_product(ta, tb).scale(v))
    return total


def build_delta(sig: Signature, geo: GeometryData, window=None) -> Series:
    """``sum d_gamma p_gamma q_gamma``, written as ``d (-1)^{|p||q|} p*q``.

    The sign makes the q-before-p part ``+d q p`` for every orbit; the
    central hbar shift of the normal form is kept.  Orbits missing from
    ``geo.d`` count as ``d = 0``.
    """
    total = sig.zero(window)
    for i, o in enumerate(sig.orbits):
        dg = geo.d.get(o.id, 0)
        if not dg:
            continue
        sign = -1 if sig.p_degree(i) % 2 and sig.q_degree(i) % 2 else 1
        pq = normal_form(sig, [sig.generator_of(letter_code(P_KIND, i)),
                               sig.generator_of(letter_code(Q_KIND, i))], sign * dg, window)
        total = add(total, pq)
    return total


# report assembly


def bracket_interior(w: TruncationWindow, t_shrink: int = 0) -> TruncationWindow:
    """Part of ``w`` unaffected by terms of H beyond the window.

    A contraction lowers the pq length by two and raises the hbar power by
    one, so a missing term just outside the box can reach the last pq slot
    and the lowest hbar slot; derivatives in t reach ``t_shrink`` slots.
    """
    lo = min(w.hbar_min + 1, w.hbar_max)
    return TruncationWindow(
        hbar_min=lo,
        hbar_max=w.hbar_max,
        max_pq_letters=max(0, w.max_pq_letters - 1),
        max_t_letters=max(0, w.max_t_letters - t_shrink),
        max_z_total=w.max_z_total,
        max_t_level=w.max_t_level,
    )


def certificate_window(w: TruncationWindow) -> TruncationWindow:
    """Default source window of the exactness search."""
    return w.adjusted(hbar_lo=1, hbar_hi=1, pq=1)


def _assemble(name, defect, w, interior=None, H=None, certificates=False, message=""):
    defect = defect.with_window(w)
    if defect.is_zero():
        return CheckReport(name, Status.HOLDS_EXACTLY, defect, None, w, message)
    if interior is not None and defect.with_window(interior).is_zero():
        return CheckReport(name, Status.HOLDS_WITHIN_WINDOW, defect, None, w,
                           message or "defect confined to the window boundary")
    if certificates and H is not None:
        from .homology import Inconclusive, is_exact

        try:
            res = is_exact(defect, H, certificate_window(w), w)
        except NotClosed as exc:
            return CheckReport(name, Status.FAILS, defect, None, w, f"defect not closed: {exc}")
        if not isinstance(res, Inconclusive):
            return CheckReport(name, Status.HOLDS_IN_HOMOLOGY, defect, res.preimage, w,
                               "defect is a boundary")
        return CheckReport(name, Status.FAILS, defect, None, w,
                           message or "no preimage found in the search window")
    return CheckReport(name, Status.FAILS, defect, None, w, message)


def _odd_check(H: Series):
    for m in H.monomials():
        if not H.sig.monomial_parity(m):
            raise EvenSummand(f"even summand in Hamiltonian: {Series(H.sig, {m: 1})}")


def check_master(H: Series, w: TruncationWindow) -> CheckReport:
    _odd_check(H)
    Hw = H.with_window(w)
    return _assemble("master", weyl_bracket(Hw, Hw), w, bracket_interior(w))


def require_master(H: Series, w: TruncationWindow):
    rep = check_master(H, w)
    if not rep.holds:
        raise MasterFails(f"[H,H] = {rep.defect} within the window")
    return rep


def check_descendant_commutation(H: Series, a: tuple, b: tuple, w: TruncationWindow):
    """``[H, H_a] = 0`` and ``[H_a, H_b] + (-1)^{|t_a|} [H, H_ab] = 0``.

    ``a`` and ``b`` are ``(form id, level)`` pairs.
    """
    require_master(H, w)
    sig = H.sig
    Hw = H.with_window(w)
    Ha = t_derivative(Hw, *a)
    Hb = t_derivative(Hw, *b)
    Hab = t_derivative(Hb, *a)
    ta = _t_letter(sig, *a)
    sign = -1 if sig.kernel.letter_parity(ta) else 1
    one = _assemble("commute", weyl_bracket(Hw, Ha), w, bracket_interior(w, 1))
    two = add(weyl_bracket(Ha, Hb), weyl_bracket(Hw, Hab).scale(sign))
    return one, _assemble("commute2", two, w, bracket_interior(w, 2))


def _unit_id(sig):
    return sig.forms[sig.unit_form_index].id


def _divisor_id(sig):
    i = sig.divisor_form_index
    if i is None:
        raise NoDivisorForm("the signature declares no divisor form")
    return sig.forms[i].id


def divisor_expression(H: Series, geo: GeometryData, w: TruncationWindow) -> Series:
    sig = H.sig
    div = _divisor_id(sig)
    Hw = H.with_window(w)
    lhs = add(t_derivative(Hw, div, 0), -z_degree_operator(Hw, geo.pairings))
    rhs = add(
        add(constant_term(sig, geo.triple, div, w), descendant_shift(Hw, geo.cup, div)),
        weyl_bracket(Hw, build_delta(sig, geo, w)),
    )
    return add(lhs, -rhs)


def dilaton_expression(H: Series, w: TruncationWindow) -> Series:
    Hw = H.with_window(w)
    return add(t_derivative(Hw, _unit_id(H.sig), 1), -euler_operator(Hw))


def string_expression(H: Series, geo: GeometryData, w: TruncationWindow) -> Series:
    sig = H.sig
    unit = _unit_id(sig)
    Hw = H.with_window(w)
    rhs = add(constant_term(sig, geo.triple, unit, w), descendant_shift(Hw))
    return add(t_derivative(Hw, unit, 0), -rhs)


def divisor_defect(H: Series, geo: GeometryData, w: TruncationWindow, certificates=True):
    _divisor_id(H.sig)
    require_master(H, w)
    return _assemble("divisor", divisor_expression(H, geo, w), w,
                     bracket_interior(w, 1), H, certificates)


def dilaton_defect(H: Series, w: TruncationWindow, certificates=True):
    require_master(H, w)
    return _assemble("dilaton", dilaton_expression(H, w), w,
                     w.adjusted(t=-1), H, certificates)


def string_defect(H: Series, geo: GeometryData, w: TruncationWindow, certificates=True):
    require_master(H, w)
    return _assemble("string", string_expression(H, geo, w), w,
                     w.adjusted(t=-1), H, certificates)


def check_t0_specializations(H: Series, geo: GeometryData, w: TruncationWindow,
                             certificates=True):
    """Divisor, dilaton and string defects with every t set to zero.

    The homology upgrade uses the differential of ``H|_{t=0}``.
    """
    _divisor_id(H.sig)
    require_master(H, w)
    H0 = set_t_zero(H.with_window(w))
    # t = 0 kills everything a window cut in t could have touched
    reports = []
    for name, expr, interior in (
        ("divisor_t0", divisor_expression(H, geo, w), bracket_interior(w)),
        ("dilaton_t0", dilaton_expression(H, w), None),
        ("string_t0", string_expression(H, geo, w), None),
    ):
        reports.append(_assemble(name, set_t_zero(expr), w, interior, H0, certificates))
    return tuple(reports)


@dataclass(frozen=True)
class FirstOrderOperator:
    """``sum_i a_i z_i d/dz_i + sum_k t^{a,k+1} c_{g a}^b d/dt^{b,k}``
    plus optionally a plain ``d/dt^{form,level}``.

    All parts are even derivations except a plain ``d/dt`` of an odd t.
    """

    z_weights: tuple = ()
    cup: dict | None = None
    gamma: str | None = None
    t_form: str | None = None
    t_level: int = 0

    def apply(self, f: Series) -> Series:
        out = f.sig.zero(f.window)
        if any(self.z_weights):
            out = add(out, z_degree_operator(f, self.z_weights))
        if self.cup:
            out = add(out, descendant_shift(f, self.cup, self.gamma))
        if self.t_form is not None:
            out = add(out, t_derivative(f, self.t_form, self.t_level))
        return out

    def parity(self, sig: Signature) -> int:
        if self.t_form is None:
            return 0
        return sig.kernel.letter_parity(_t_letter(sig, self.t_form, self.t_level))

    __call__ = apply
