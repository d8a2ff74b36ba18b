"""Text formats: signatures, geometry data, windows and series expressions.

Signature files are line based::

    m 2
    orbit g1 kappa=1 cz=0
    orbit g2 kappa=2 cz=1 base_cz=1     # optional: CZ of the underlying orbit
    form th0 deg=0 unit
    form th1 deg=2 divisor
    h2 A0 c1=0 pair=1
    d g1 1                              # geometry lines, see parse_geometry
    cup th1 th0 -> th1 1
    triple th0 th0 th1 0

Orbits may carry ``end=+`` or ``end=-`` for cobordism files.  Series use::

    expr   := [sign] term { sign term }
    term   := rational | [rational "*"] factor { "*" factor }
    factor := gen ["^" int]
    gen    := p[id] | q[id] | p+[id] | q-[id] | p-[id] | q+[id]
            | t[id,int] | z[id] | h
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    DEFAULT_WINDOW,
    HBAR,
    H2Class,
    Form,
    Generator,
    Orbit,
    P_KIND,
    Q_KIND,
    Series,
    Signature,
    T_KIND,
    TruncationWindow,
    letter_index,
    letter_kind,
    letter_level,
    star,
)
from .errors import ParseError, UnknownGenerator, ValidationError, WindowOverflow

_INT = re.compile(r"[+-]?\d+\Z")
_RATIONAL = re.compile(r"[+-]?\d+(/\d+)?\Z")
_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*\Z")

GEOMETRY_KEYWORDS = ("d", "cup", "triple")


def classify_orbit(cz_underlying: int, cz_cover: int) -> str:
    """``"bad"`` when the cover's CZ parity differs from the underlying orbit's."""
    return "bad" if (cz_cover - cz_underlying) % 2 else "good"


def _tokens(text):
    """Yield ``(line_no, [(col, token), ...])`` for non-empty lines."""
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
        if toks:
            yield n, toks


def _kv(tok, line, col, key, pattern=_INT):
    prefix = key + "="
    if not tok.startswith(prefix):
        raise ParseError(f"expected {prefix}<value>, got {tok!r}", line, col)
    value = tok[len(prefix):]
    if not pattern.match(value):
        raise ParseError(f"bad value for {key}: {value!r}", line, col + len(prefix))
    return value


def _ident(tok, line, col):
    if not _ID.match(tok):
        raise ParseError(f"bad identifier {tok!r}", line, col)
    return tok


def _need(toks, k, line, what):
    if len(toks) <= k:
        col = toks[-1][0] + len(toks[-1][1]) if toks else 1
        raise ParseError(f"missing {what}", line, col)
    return toks[k]


def parse_signature(text: str) -> Signature:
    m = None
    orbits, forms, h2 = [], [], []
    for line, toks in _tokens(text):
        col, kw = toks[0]
        if kw in GEOMETRY_KEYWORDS:
            continue
        if kw == "m":
            c, v = _need(toks, 1, line, "value of m")
            if not _INT.match(v):
                raise ParseError(f"bad integer {v!r}", line, c)
            if m is not None:
                raise ValidationError(f"line {line}: m given twice")
            m = int(v)
            if len(toks) > 2:
                raise ParseError("unexpected token", line, toks[2][0])
        elif kw == "orbit":
            c, oid = _need(toks, 1, line, "orbit id")
            _ident(oid, line, c)
            c, tok = _need(toks, 2, line, "kappa=")
            kappa = int(_kv(tok, line, c, "kappa"))
            c, tok = _need(toks, 3, line, "cz=")
            cz = int(_kv(tok, line, c, "cz"))
            end, base = "", None
            for c, tok in toks[4:]:
                if tok.startswith("end="):
                    end = tok[4:]
                    if end not in ("+", "-"):
                        raise ParseError(f"bad end marker {end!r}", line, c + 4)
                elif tok.startswith("base_cz="):
                    base = int(_kv(tok, line, c, "base_cz"))
                else:
                    raise ParseError(f"unexpected token {tok!r}", line, c)
            if base is not None and classify_orbit(base, cz) == "bad":
                raise ValidationError(
                    f"line {line}: orbit {oid} is bad (CZ {cz} vs underlying {base})"
                )
            orbits.append(Orbit(oid, kappa, cz, end))
        elif kw == "form":
            c, fid = _need(toks, 1, line, "form id")
            _ident(fid, line, c)
            c, tok = _need(toks, 2, line, "deg=")
            deg = int(_kv(tok, line, c, "deg"))
            unit = divisor = False
            for c, tok in toks[3:]:
                if tok == "unit":
                    unit = True
                elif tok == "divisor":
                    divisor = True
                else:
                    raise ParseError(f"unexpected token {tok!r}", line, c)
            forms.append(Form(fid, deg, unit, divisor))
        elif kw == "h2":
            c, bid = _need(toks, 1, line, "h2 id")
            _ident(bid, line, c)
            c, tok = _need(toks, 2, line, "c1=")
            c1 = int(_kv(tok, line, c, "c1"))
            pairing = Fraction(0)
            for c, tok in toks[3:]:
                if tok.startswith("pair="):
                    pairing = Fraction(_kv(tok, line, c, "pair", _RATIONAL))
                else:
                    raise ParseError(f"unexpected token {tok!r}", line, c)
            h2.append(H2Class(bid, c1, pairing))
        else:
            raise ParseError(f"unknown keyword {kw!r}", line, col)
    if m is None:
        raise ValidationError("signature does not set m")
    return Signature(m, orbits, forms, h2)


def parse_geometry(text: str, sig: Signature):
    """Collect ``d``/``cup``/``triple`` lines; other signature lines are skipped."""
    from .identities import GeometryData

    d, cup, triple = {}, {}, {}
    for line, toks in _tokens(text):
        col, kw = toks[0]
        if kw not in GEOMETRY_KEYWORDS:
            continue
        if kw == "d":
            if len(toks) != 3:
                raise ParseError("expected: d <orbit-id> <rational>", line, col)
            (c1, oid), (c2, val) = toks[1], toks[2]
            if not any(o.id == oid for o in sig.orbits):
                raise UnknownGenerator(f"unknown orbit {oid!r}", line, c1)
            if not _RATIONAL.match(val):
                raise ParseError(f"bad rational {val!r}", line, c2)
            d[oid] = Fraction(val)
        elif kw == "cup":
            if len(toks) != 6 or toks[3][1] != "->":
                raise ParseError("expected: cup <form> <form> -> <form> <rational>", line, col)
            ids = []
            for c, fid in (toks[1], toks[2], toks[4]):
                if fid not in sig._form_lookup:
                    raise UnknownGenerator(f"unknown form {fid!r}", line, c)
                ids.append(fid)
            c, val = toks[5]
            if not _RATIONAL.match(val):
                raise ParseError(f"bad rational {val!r}", line, c)
            cup[tuple(ids)] = Fraction(val)
        else:
            if len(toks) != 5:
                raise ParseError("expected: triple <form> <form> <form> <rational>", line, col)
            ids = []
            for c, fid in toks[1:4]:
                if fid not in sig._form_lookup:
                    raise UnknownGenerator(f"unknown form {fid!r}", line, c)
                ids.append(fid)
            c, val = toks[4]
            if not _RATIONAL.match(val):
                raise ParseError(f"bad rational {val!r}", line, c)
            triple[tuple(ids)] = Fraction(val)
    return GeometryData.build(sig, d=d, cup=cup, triple=triple)


# windows


def parse_window(text: str, base: TruncationWindow = DEFAULT_WINDOW) -> TruncationWindow:
    """Parse ``hbar=<lo>..<hi>,pq=<n>,t=<n>,z=<n>[,level=<n>]``.

    Keys left out keep their value from ``base``.
    """
    fields = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        key = key.strip()
        value = value.strip()
        if not sep:
            raise ParseError(f"window item {part!r} needs '='", 1, text.find(part) + 1)
        try:
            if key == "hbar":
                lo, dots, hi = value.partition("..")
                if not dots:
                    raise ValueError
                fields["hbar_min"], fields["hbar_max"] = int(lo), int(hi)
            elif key in ("pq", "t", "z", "level"):
                name = {
                    "pq": "max_pq_letters",
                    "t": "max_t_letters",
                    "z": "max_z_total",
                    "level": "max_t_level",
                }[key]
                fields[name] = int(value)
            else:
                raise ParseError(f"unknown window key {key!r}", 1, text.find(part) + 1)
        except ValueError:
            raise ParseError(f"bad window value {part!r}", 1, text.find(part) + 1) from None
    args = dict(base.__dict__)
    args.update(fields)
    try:
        return TruncationWindow(**args)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def format_window(w: TruncationWindow) -> str:
    s = f"hbar={w.hbar_min}..{w.hbar_max},pq={w.max_pq_letters},t={w.max_t_letters},z={w.max_z_total}"
    if w.max_t_level is not None:
        s += f",level={w.max_t_level}"
    return s


# printing


def _letter_text(sig: Signature, x: int) -> str:
    kind, i = letter_kind(x), letter_index(x)
    if kind == T_KIND:
        return f"t[{sig.forms[i].id},{letter_level(x)}]"
    o = sig.orbits[i]
    return f"{'q' if kind == Q_KIND else 'p'}{o.end}[{o.id}]"


def _power(base: str, n: int) -> str:
    return base if n == 1 else f"{base}^{n}"


def _fraction_text(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def monomial_text(sig: Signature, mono) -> str:
    """Factors of a monomial without coefficient; ``""`` for the unit."""
    groups = []
    if mono.hbar_exp:
        groups.append(_power("h", mono.hbar_exp))
    letters = mono.letters
    if letters:
        parts, i = [], 0
        while i < len(letters):
            j = i
            while j < len(letters) and letters[j] == letters[i]:
                j += 1
            parts.append(_power(_letter_text(sig, letters[i]), j - i))
            i = j
        groups.append("*".join(parts))
    zs = [
        _power(f"z[{sig.h2_basis[i].id}]", e) for i, e in enumerate(mono.z_exps) if e
    ]
    if zs:
        groups.append("*".join(zs))
    return " * ".join(groups)


def sort_key(mono):
    """Total order of printed output: hbar descending, then z, then word."""
    return (-mono.hbar_exp, mono.z_exps, mono.letters)


def print_canonical(f: Series) -> str:
    if f.is_zero():
        return "0"
    out = []
    for mono in sorted(f.monomials(), key=sort_key):
        c = f.coefficient(mono)
        body = monomial_text(f.sig, mono)
        mag = abs(c)
        if not body:
            text = _fraction_text(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{_fraction_text(mag)} * {body}"
        if not out:
            out.append(("-" if c < 0 else "") + text)
        else:
            out.append((" - " if c < 0 else " + ") + text)
    return "".join(out)


# expression parsing


@dataclass
class _Tok:
    kind: str  # NUM, GEN, OP, EOF
    text: str
    line: int
    col: int
    gen: Generator | None = None


_OPS = "+-*/^"


def _lex(text: str):
    toks = []
    line, col, i, n = 1, 1, 0, len(text)

    def advance(k):
        nonlocal i, col
        i += k
        col += k

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            advance(1)
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("NUM", text[i:j], start_line, start_col))
            advance(j - i)
            continue
        if ch in "pq" and i + 1 < n and (
            text[i + 1] == "[" or (text[i + 1] in "+-" and i + 2 < n and text[i + 2] == "[")
        ):
            end = "" if text[i + 1] == "[" else text[i + 1]
            j = text.find("]", i)
            if j < 0 or "\n" in text[i:j]:
                raise ParseError("unterminated generator", start_line, start_col)
            ident = text[i + 2 + len(end):j].strip()
            if not _ID.match(ident):
                raise ParseError(f"bad orbit id {ident!r}", start_line, start_col + 2 + len(end))
            g = Generator("P" if ch == "p" else "Q", ident, 0, end)
            toks.append(_Tok("GEN", text[i:j + 1], start_line, start_col, g))
            advance(j + 1 - i)
            continue
        if ch in "tz" and i + 1 < n and text[i + 1] == "[":
            j = text.find("]", i)
            if j < 0 or "\n" in text[i:j]:
                raise ParseError("unterminated generator", start_line, start_col)
            inner = text[i + 2:j]
            if ch == "t":
                fid, comma, lev = inner.partition(",")
                fid, lev = fid.strip(), lev.strip()
                if not comma or not _ID.match(fid) or not lev.isdigit():
                    raise ParseError(f"bad descendant variable t[{inner}]", start_line, start_col + 2)
                g = Generator("T", fid, int(lev))
            else:
                bid = inner.strip()
                if not _ID.match(bid):
                    raise ParseError(f"bad h2 id {bid!r}", start_line, start_col + 2)
                g = Generator("Z", bid)
            toks.append(_Tok("GEN", text[i:j + 1], start_line, start_col, g))
            advance(j + 1 - i)
            continue
        if ch == "h" and not (i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_")):
            toks.append(_Tok("GEN", "h", start_line, start_col, HBAR))
            advance(1)
            continue
        if ch in _OPS:
            toks.append(_Tok("OP", ch, start_line, start_col))
            advance(1)
            continue
        raise ParseError(f"unexpected character {ch!r}", start_line, start_col)
    toks.append(_Tok("EOF", "", line, col))
    return toks


class _ExprParser:
    def __init__(self, text, sig, window):
        self.toks = _lex(text)
        self.pos = 0
        self.sig = sig
        self.window = window

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t.kind != "OP" or t.text != op:
            raise ParseError(f"expected {op!r}, got {t.text or 'end of input'!r}", t.line, t.col)
        return t

    def parse(self) -> Series:
        terms = []
        sign = 1
        t = self.peek()
        if t.kind == "OP" and t.text in "+-":
            self.take()
            sign = -1 if t.text == "-" else 1
        while True:
            terms.append(self.term(sign))
            t = self.peek()
            if t.kind == "EOF":
                break
            if t.kind == "OP" and t.text in "+-":
                self.take()
                sign = -1 if t.text == "-" else 1
                continue
            raise ParseError(f"unexpected {t.text!r}", t.line, t.col)
        acc = {}
        for s in terms:
            for mono, c in s.items():
                acc[mono] = acc.get(mono, 0) + c
        return Series(self.sig, acc, self.window)

    def rational(self) -> Fraction:
        t = self.take()
        if t.kind != "NUM":
            raise ParseError(f"expected a number, got {t.text!r}", t.line, t.col)
        value = Fraction(int(t.text))
        nxt = self.peek()
        if nxt.kind == "OP" and nxt.text == "/":
            self.take()
            d = self.take()
            if d.kind != "NUM":
                raise ParseError("expected a denominator", d.line, d.col)
            if int(d.text) == 0:
                raise ParseError("zero denominator", d.line, d.col)
            value /= int(d.text)
        return value

    def term(self, sign) -> Series:
        start = self.peek()
        coeff = Fraction(sign)
        if start.kind == "NUM":
            coeff *= self.rational()
            nxt = self.peek()
            if not (nxt.kind == "OP" and nxt.text == "*"):
                return self.sig.const(coeff)
            self.take()
        value = self.sig.const(coeff)
        while True:
            value = star(value, self.factor())
            nxt = self.peek()
            if nxt.kind == "OP" and nxt.text == "*":
                self.take()
                continue
            break
        if self.window is not None:
            for mono in value.monomials():
                if not self.window.contains(mono):
                    raise WindowOverflow(
                        f"term {print_canonical(value)!r} leaves the window", start.line, start.col
                    )
        return value

    def factor(self) -> Series:
        t = self.take()
        if t.kind != "GEN":
            raise ParseError(f"expected a generator, got {t.text or 'end of input'!r}", t.line, t.col)
        power = 1
        nxt = self.peek()
        if nxt.kind == "OP" and nxt.text == "^":
            self.take()
            neg = False
            e = self.peek()
            if e.kind == "OP" and e.text == "-":
                self.take()
                neg = True
                e = self.peek()
            e = self.take()
            if e.kind != "NUM":
                raise ParseError("expected an exponent", e.line, e.col)
            power = -int(e.text) if neg else int(e.text)
            if power < 0 and t.gen.kind != "HBAR":
                raise ParseError("negative exponents are only allowed on h", e.line, e.col)
        try:
            mono = self.sig.monomial(t.gen, power)
        except KeyError as exc:
            raise UnknownGenerator(str(exc.args[0]), t.line, t.col) from None
        if t.gen.kind in ("HBAR", "Z") or power <= 1:
            return Series(self.sig, {mono: 1})
        single = Series(self.sig, {self.sig.monomial(t.gen): 1})
        acc = single
        for _ in range(power - 1):
            acc = star(acc, single)
        return acc


def parse_series(text: str, sig: Signature, window: TruncationWindow | None = None) -> Series:
    """Parse, normal-order and window-check a series expression."""
    return _ExprParser(text, sig, window).parse()
