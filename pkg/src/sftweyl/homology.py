"""The differential ``D = [H, .]`` on finite window spaces: matrices,
``D o D``, homology ranks and exactness certificates."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (
    P_KIND,
    Q_KIND,
    T_KIND,
    Monomial,
    Series,
    Signature,
    TruncationWindow,
    letter_code,
    letter_kind,
    letter_level,
    weyl_bracket,
)
from .errors import NonHomogeneous, NotClosed, WindowTooSmall
from .identities import CheckReport, Status, require_master
from .linalg import SparseMatrix, nullspace, rank, solve
from .textio import print_canonical, sort_key


def _multisets(letters, limit):
    """Canonical words over ``letters`` (``[(code, parity, degree)]``) of
    length at most ``limit``; odd letters appear at most once."""
    out = [((), 0)]
    for code, odd, deg in letters:
        cap = 1 if odd else limit
        nxt = []
        for word, d in out:
            room = limit - len(word)
            for e in range(min(cap, room) + 1):
                nxt.append((word + (code,) * e, d + e * deg))
        out = nxt
    return out


def _z_vectors(n, total):
    if n == 0:
        return [()]
    out = []
    for e in range(total + 1):
        for rest in _z_vectors(n - 1, total - e):
            out.append((e,) + rest)
    return out


def t_letters_of(*series) -> set:
    return {x for f in series for m in f.monomials() for x in m.letters if letter_kind(x) == T_KIND}


class WindowBasis:
    """Ordered monomial basis of a window (or an explicit monomial list).

    The enumeration needs finitely many t letters: either ``t_letters`` is
    given, or the window carries ``max_t_level``.  ``degrees`` restricts to
    the given total degrees.  Order is the canonical print order.
    """

    def __init__(self, sig: Signature, window: TruncationWindow | None = None, *,
                 degrees=None, t_letters=None, monomials=None):
        self.sig = sig
        self.window = window
        if monomials is not None:
            monos = sorted(set(monomials), key=sort_key)
            if degrees is not None:
                degrees = set(degrees)
                monos = [m for m in monos if sig.monomial_degree(m) in degrees]
        else:
            if window is None:
                raise ValueError("need a window or an explicit monomial list")
            monos = self._enumerate(sig, window, degrees, t_letters)
        self.monomials = monos
        self.index = {m: i for i, m in enumerate(monos)}

    @staticmethod
    def _enumerate(sig, w, degrees, t_letters):
        if t_letters is None:
            if w.max_t_letters and w.max_t_level is None:
                raise ValueError("enumerating a window needs max_t_level or a t-letter set")
            lv = w.max_t_level or 0
            t_letters = [letter_code(T_KIND, i, j) for i in range(len(sig.forms))
                         for j in range(lv + 1)]
        tl = sorted(x for x in t_letters
                    if w.max_t_level is None or letter_level(x) <= w.max_t_level)
        kern = sig.kernel
        tw = _multisets([(x, kern.letter_parity(x), sig.letter_degree(x)) for x in tl],
                        w.max_t_letters)
        pql = [letter_code(k, i) for k in (Q_KIND, P_KIND) for i in range(len(sig.orbits))]
        pw = _multisets([(x, kern.letter_parity(x), sig.letter_degree(x)) for x in pql],
                        w.max_pq_letters)
        zs = [(z, sum(e * sig.z_degree(i) for i, e in enumerate(z)))
              for z in _z_vectors(len(sig.h2_basis), w.max_z_total)]
        hs = [(h, h * sig.hbar_degree) for h in range(w.hbar_min, w.hbar_max + 1)]
        words = [(a + b, da + db) for a, da in tw for b, db in pw]
        want = None if degrees is None else set(degrees)
        monos = []
        for (h, dh), (z, dz), (word, dw) in product(hs, zs, words):
            if want is None or dh + dz + dw in want:
                monos.append(Monomial(h, z, word))
        monos.sort(key=sort_key)
        return monos

    def __len__(self):
        return len(self.monomials)

    def __iter__(self):
        return iter(self.monomials)

    def coordinates(self, f: Series) -> dict:
        """``{index: coeff}``; monomials outside the basis are dropped."""
        idx = self.index
        return {idx[m]: c for m, c in f.items() if m in idx}

    def series(self, coords, window=None) -> Series:
        if isinstance(coords, dict):
            items = coords.items()
        else:
            items = enumerate(coords)
        return Series(self.sig, {self.monomials[i]: c for i, c in items if c}, window)

    def degree_of(self, i: int) -> int:
        return self.sig.monomial_degree(self.monomials[i])

    def parity_of(self, i: int) -> int:
        return self.sig.monomial_parity(self.monomials[i])


class _Differential:
    """``[H, .]`` on monomials, cached per word (hbar and z are central)."""

    def __init__(self, H: Series):
        self.H = H.with_window(None)
        self.sig = H.sig
        self._cache = {}

    def word_image(self, word) -> dict:
        got = self._cache.get(word)
        if got is None:
            w = Series(self.sig, {Monomial(0, self.sig.zero_z, word): 1})
            got = dict(weyl_bracket(self.H, w).items())
            self._cache[word] = got
        return got

    def monomial_image(self, mono: Monomial) -> dict:
        img = self.word_image(mono.letters)
        if mono.hbar_exp == 0 and not any(mono.z_exps):
            return img
        out = {}
        for m, c in img.items():
            z = tuple(a + b for a, b in zip(m.z_exps, mono.z_exps))
            out[Monomial(m.hbar_exp + mono.hbar_exp, z, m.letters)] = c
        return out

    def apply(self, f: Series, window=None) -> Series:
        acc = {}
        for mono, c in f.items():
            for m, k in self.monomial_image(mono).items():
                acc[m] = acc.get(m, 0) + c * k
        return Series(self.sig, acc, window)


def _degrees(H: Series) -> set:
    return {H.sig.monomial_degree(m) for m in H.monomials()}


def _as_basis(sig, spec, H, degrees=None, extra=()):
    if isinstance(spec, WindowBasis):
        return spec
    letters = None if spec.max_t_level is not None else t_letters_of(H, *extra)
    return WindowBasis(sig, spec, degrees=degrees, t_letters=letters)


def _matrix(D: _Differential, src: WindowBasis, dst: WindowBasis, check_small=True, cut=None):
    """Columns are truncated images; ``cut`` collects the columns that lost
    terms outside the target window."""
    cols = []
    lost = False
    dwin = dst.window
    for j, mono in enumerate(src.monomials):
        img = D.monomial_image(mono)
        col = {}
        for m, c in img.items():
            i = dst.index.get(m)
            if i is not None:
                col[i] = c
            elif dwin is None or dwin.contains(m):
                continue
            else:
                lost = True
                if cut is not None and (not cut or cut[-1] != j):
                    cut.append(j)
        cols.append(col)
    if check_small and lost and len(src) and not any(cols):
        raise WindowTooSmall("every image lies outside the target window")
    return SparseMatrix(len(dst), cols)


def _master_window(src, dst, H):
    w = dst.window if isinstance(dst, WindowBasis) else dst
    if w is None:
        w = src.window if isinstance(src, WindowBasis) else src
    if w is not None:
        require_master(H, w)


@dataclass(frozen=True)
class DifferentialMatrix:
    matrix: SparseMatrix
    src: WindowBasis
    dst: WindowBasis

    def triplets_text(self) -> str:
        return "\n".join(f"{i} {j} {v}" for i, j, v in self.matrix.triplets())

    def column_series(self, j: int) -> Series:
        return self.dst.series(self.matrix.columns[j])


def differential_matrix(H: Series, src, dst, degree=None) -> DifferentialMatrix:
    """Matrix of ``D`` from ``src`` to ``dst`` (windows or explicit bases).

    With ``degree`` the source is the degree slice and the target the
    slices it can map to.
    """
    sig = H.sig
    _master_window(src, dst, H)
    dH = _degrees(H)
    sdeg = None if degree is None else {degree}
    ddeg = None if degree is None else {degree + h for h in dH} or {degree}
    sb = _as_basis(sig, src, H, sdeg)
    db = _as_basis(sig, dst, H, ddeg)
    return DifferentialMatrix(_matrix(_Differential(H), sb, db), sb, db)


def check_dsquared(H: Series, src, mid, dst, degree=None) -> CheckReport:
    """``D o D`` through the middle window as a product of two matrices.

    A nonzero column whose first image was cut by the middle window is a
    truncation effect; when every nonzero column is of that kind the
    verdict is holds_within_window.  The defect is the image of the first
    bad basis element.
    """
    sig = H.sig
    _master_window(src, dst, H)
    D = _Differential(H)
    dH = _degrees(H)
    sdeg = None if degree is None else {degree}
    mdeg = None if degree is None else {degree + h for h in dH}
    ddeg = None if degree is None else {degree + a + b for a in dH for b in dH}
    sb = _as_basis(sig, src, H, sdeg)
    mb = _as_basis(sig, mid, H, mdeg)
    db = _as_basis(sig, dst, H, ddeg)
    cut = []
    first = _matrix(D, sb, mb, check_small=False, cut=cut)
    second = _matrix(D, mb, db, check_small=False)
    prod = second @ first
    bad = [j for j, col in enumerate(prod.columns) if col]
    w = db.window
    shape = f"{len(sb)}x{len(mb)}x{len(db)}"
    if not bad:
        return CheckReport("dsquared", Status.HOLDS_EXACTLY, sig.zero(w), None, w, shape)
    cutset = set(cut)
    real = [j for j in bad if j not in cutset]
    j = (real or bad)[0]
    defect = db.series(prod.columns[j], w)
    if not real:
        return CheckReport("dsquared", Status.HOLDS_WITHIN_WINDOW, defect, None, w,
                           f"{shape}; {len(bad)} nonzero columns, all cut by the middle window")
    return CheckReport("dsquared", Status.FAILS, defect, None, w,
                       f"D^2 of {print_canonical(sb.series({j: 1}))} is nonzero; "
                       f"{len(real)} bad columns")


@dataclass(frozen=True)
class HomologyResult:
    rank_ker: int
    rank_im: int
    representatives: tuple
    dimension: int

    @property
    def rank(self) -> int:
        return len(self.representatives)


def homology_basis(H: Series, src, dst=None, degree=None) -> HomologyResult:
    """Kernel of ``D: src -> dst`` modulo the image of ``D: src -> src``.

    ``src`` and ``dst`` are windows or explicit :class:`WindowBasis`
    objects; ``dst`` defaults to ``src``.  With ``degree`` the kernel is
    taken on that slice and the image comes from the slice below it.
    """
    sig = H.sig
    dst = src if dst is None else dst
    _master_window(src, dst, H)
    D = _Differential(H)
    if degree is not None:
        dH = _degrees(H)
        if len(dH) > 1:
            raise NonHomogeneous("a degree slice needs a homogeneous Hamiltonian")
        h = next(iter(dH), 0)
        cyc = _as_basis(sig, src, H, {degree})
        tgt = _as_basis(sig, dst, H, {degree + h})
        pre = _as_basis(sig, src, H, {degree - h})
    else:
        cyc = _as_basis(sig, src, H)
        tgt = _as_basis(sig, dst, H)
        pre = cyc
    Dker = _matrix(D, cyc, tgt, check_small=False)
    Dim = _matrix(D, pre, cyc, check_small=False)
    kernel = nullspace(Dker)
    rim = rank(Dim)
    # reduce kernel vectors modulo the image, greedily in order
    image_cols = [c for c in Dim.columns if c]
    reps = []
    current = list(image_cols)
    r0 = rank(SparseMatrix(len(cyc), current)) if current else 0
    for v in kernel:
        trial = current + [v]
        r1 = rank(SparseMatrix(len(cyc), trial))
        if r1 > r0:
            current = trial
            r0 = r1
            reps.append(cyc.series(v))
    return HomologyResult(len(kernel), rim, tuple(reps), len(cyc))


@dataclass(frozen=True)
class ExactnessCertificate:
    preimage: Series
    residual: Series


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    searched: int = 0

    def __bool__(self):
        return False


def apply_differential(H: Series, x: Series, window=None) -> Series:
    return _Differential(H).apply(x, window)


def is_exact(x: Series, H: Series, src, dst):
    """Search ``pre`` with ``D(pre) = x`` over the source basis.

    Returns an :class:`ExactnessCertificate` or :class:`Inconclusive`;
    raises :class:`NotClosed` when ``D(x)`` is nonzero inside ``dst``.
    """
    sig = H.sig
    D = _Differential(H)
    dwin = dst.window if isinstance(dst, WindowBasis) else dst
    closed = D.apply(x, dwin)
    if isinstance(dst, WindowBasis):
        closed = closed.filter(lambda m: m in dst.index)
    if closed:
        raise NotClosed(f"D(x) = {closed}")
    if x.is_zero():
        return ExactnessCertificate(sig.zero(dwin), sig.zero(dwin))
    dH = _degrees(H)
    xdeg = {sig.monomial_degree(m) for m in x.monomials()}
    sdeg = {d - h for d in xdeg for h in dH}
    ddeg = {d + h for d in sdeg for h in dH}
    sb = _as_basis(sig, src, H, sdeg, extra=(x,))
    db = _as_basis(sig, dst, H, ddeg, extra=(x,))
    target = {}
    for m, c in x.items():
        i = db.index.get(m)
        if i is None:
            return Inconclusive(f"target monomial {print_canonical(Series(sig, {m: 1}))} "
                                "is outside the target basis", len(sb))
        target[i] = c
    M = _matrix(D, sb, db, check_small=False)
    sol = solve(M, target)
    if sol is None:
        return Inconclusive("no preimage in the source window", len(sb))
    pre = sb.series({j: v for j, v in enumerate(sol) if v}, None)
    img = D.apply(pre, dwin)
    residual = (x.with_window(dwin) - img)
    if isinstance(dst, WindowBasis):
        residual = residual.filter(lambda m: m in db.index)
    return ExactnessCertificate(pre.with_window(src.window if isinstance(src, WindowBasis)
                                                else src), residual)
