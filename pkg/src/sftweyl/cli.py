"""Command-line driver.

Exit codes: 0 every requested check holds, 1 a check fails (or one of its
preconditions does), 2 usage error, 3 unreadable, unparsable or invalid
input.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass

from . import cobordism as cob
from . import homology as hom
from . import identities as ids
from .core import DEFAULT_WINDOW, Q_KIND, P_KIND, Monomial, Series, letter_code
from .errors import ParseError, SftWeylError, ValidationError
from .textio import format_window, parse_geometry, parse_series, parse_signature, parse_window
from .textio import print_canonical

CHECKS = ("master", "commute", "string", "dilaton", "divisor", "t0", "dsquared",
          "fundamental", "chainmap", "covariance")


class InputError(Exception):
    """Missing file or input that failed to parse or validate (exit 3)."""


@dataclass
class RunConfig:
    command: str
    check: str | None = None
    sig: str | None = None
    geo: str | None = None
    ham: str | None = None
    ham_plus: str | None = None
    ham_minus: str | None = None
    potential: str | None = None
    series: str | None = None
    window: str | None = None
    certificates: bool = False
    fmt: str = "text"
    probes: tuple = ()
    descendants: tuple = ()
    degree: int | None = None
    count: int = 50


def _read(path: str, what: str) -> str:
    if path is None:
        raise InputError(f"missing --{what}")
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _located(path, fn, *args):
    try:
        return fn(*args)
    except ParseError as exc:
        raise InputError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from None
    except (ValidationError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from None


class _Inputs:
    """Every referenced file, read and parsed before any computation."""

    def __init__(self, cfg: RunConfig, cobordism: bool):
        self.window = (_located("--window", parse_window, cfg.window)
                       if cfg.window else DEFAULT_WINDOW)
        sig_text = _read(cfg.sig, "sig")
        sig = _located(cfg.sig, parse_signature, sig_text)
        if cobordism and not any(o.end for o in sig.orbits):
            sig = cob.cylinder_signature(sig)
        self.sig = sig
        self.geo = None
        if cfg.geo:
            self.geo = _located(cfg.geo, parse_geometry, _read(cfg.geo, "geo"), sig)
        else:
            self.geo = _located(cfg.sig, parse_geometry, sig_text, sig)
        w = self.window

        def series(path, what):
            return _located(path, parse_series, _read(path, what), sig, w)

        self.H = series(cfg.ham, "ham") if cfg.ham else None
        self.Hp = series(cfg.ham_plus, "ham-plus") if cfg.ham_plus else None
        self.Hm = series(cfg.ham_minus, "ham-minus") if cfg.ham_minus else None
        self.F = series(cfg.potential, "potential") if cfg.potential else None
        self.probes = [_located("--probe", parse_series, p, sig, w) for p in cfg.probes]
        self.descendants = []
        for d in cfg.descendants:
            form, _, level = d.partition(",")
            try:
                sig.form_index(form.strip())
                self.descendants.append((form.strip(), int(level)))
            except (KeyError, ValueError):
                raise InputError(f"--descendant {d!r}: expected FORM,LEVEL") from None


def _need(value, flag):
    if value is None:
        raise InputError(f"this command needs {flag}")
    return value


def _emit(rep: ids.CheckReport, fmt: str, out):
    w = format_window(rep.window) if rep.window is not None else ""
    if fmt == "kv":
        out.write(f"check={rep.name}\nstatus={rep.status}\n")
        out.write(f"defect={print_canonical(rep.defect)}\n")
        if rep.certificate is not None:
            out.write(f"certificate={print_canonical(rep.certificate)}\n")
        out.write(f"window={w}\n")
        if rep.message:
            out.write(f"message={rep.message}\n")
    else:
        out.write(f"{rep.name}: {rep.status}\n")
        out.write(f"  defect: {print_canonical(rep.defect)}\n")
        if rep.certificate is not None:
            out.write(f"  certificate: {print_canonical(rep.certificate)}\n")
        out.write(f"  window: {w}\n")
        if rep.message:
            out.write(f"  note: {rep.message}\n")


def _default_probes(sig):
    out = []
    for i, o in enumerate(sig.orbits):
        q = letter_code(Q_KIND, i)
        p = letter_code(P_KIND, i)
        for word in ((p,), (q,), (q, p)):
            out.append(Series(sig, {Monomial(0, sig.zero_z, word): 1}))
    return out


def _run_check(cfg: RunConfig, inp: _Inputs) -> list:
    w = inp.window
    c = cfg.check
    cert = cfg.certificates
    if c in ("fundamental", "chainmap", "covariance"):
        Hp = _need(inp.Hp, "--ham-plus")
        Hm = _need(inp.Hm, "--ham-minus")
        F = _need(inp.F, "--potential")
        if c == "fundamental":
            return [cob.check_fundamental(F, Hp, Hm, w)]
        if c == "chainmap":
            return [cob.check_chain_map(F, Hp, Hm, inp.probes or _default_probes(inp.sig), w)]
        if inp.descendants:
            return [cob.check_covariance(F, Hp, Hm, d, w) for d in inp.descendants]
        op = ids.FirstOrderOperator(z_weights=inp.geo.pairings)
        return [cob.check_covariance(F, Hp, Hm, op, w)]
    H = _need(inp.H, "--ham")
    if c == "master":
        return [ids.check_master(H, w)]
    if c == "commute":
        ds = inp.descendants or [(inp.sig.forms[inp.sig.unit_form_index].id, 1)]
        a = ds[0]
        b = ds[1] if len(ds) > 1 else a
        return list(ids.check_descendant_commutation(H, a, b, w))
    if c == "string":
        return [ids.string_defect(H, inp.geo, w, cert)]
    if c == "dilaton":
        return [ids.dilaton_defect(H, w, cert)]
    if c == "divisor":
        return [ids.divisor_defect(H, inp.geo, w, cert)]
    if c == "t0":
        return list(ids.check_t0_specializations(H, inp.geo, w, cert))
    if c == "dsquared":
        return [hom.check_dsquared(H, w, w, w, cfg.degree)]
    raise InputError(f"unknown check {c!r}")


def _run_homology(cfg, inp, out):
    H = _need(inp.H, "--ham")
    res = hom.homology_basis(H, inp.window, degree=cfg.degree)
    if cfg.fmt == "kv":
        out.write(f"dimension={res.dimension}\nrank_ker={res.rank_ker}\n")
        out.write(f"rank_im={res.rank_im}\nrank_homology={res.rank}\n")
        for r in res.representatives:
            out.write(f"representative={print_canonical(r)}\n")
    else:
        out.write(f"homology: dimension {res.dimension}, ker {res.rank_ker}, "
                  f"im {res.rank_im}, rank {res.rank}\n")
        for r in res.representatives:
            out.write(f"  {print_canonical(r)}\n")
    return 0


def _selftest(cfg, out) -> int:
    from .core import poisson_bracket, star, weyl_bracket, hbar_coefficient
    from .testing import random_homogeneous, random_series, sig1
    from .textio import parse_series as ps

    seed = int(os.environ.get("SFTWEYL_SEED", "0"))
    rng = random.Random(seed)
    sig = sig1()
    failures = 0

    def report(name, ok):
        nonlocal failures
        failures += not ok
        out.write(f"{'PASS' if ok else 'FAIL'} {name}\n")

    ok = True
    for _ in range(cfg.count):
        a, b, c = (random_series(sig, rng, 2, max_pq=2) for _ in range(3))
        ok &= star(star(a, b), c) == star(a, star(b, c))
    report("star associativity", ok)
    ok = True
    for _ in range(cfg.count):
        a, b, c = (random_homogeneous(sig, rng, 2, max_pq=2) for _ in range(3))
        jac = (weyl_bracket(a, weyl_bracket(b, c))
               - weyl_bracket(weyl_bracket(a, b), c)
               - _koszul(a, b) * weyl_bracket(b, weyl_bracket(a, c)))
        ok &= jac.is_zero()
    report("super-Jacobi", ok)
    ok = True
    for _ in range(cfg.count):
        a, b = (random_series(sig, rng, 2, hbar=(0, 0), max_pq=3).filter(lambda m: not m.hbar_exp)
                for _ in range(2))
        br = weyl_bracket(a, b)
        ok &= all(m.hbar_exp >= 1 for m in br.monomials())
        ok &= hbar_coefficient(br, 1) == poisson_bracket(a, b)
    report("weyl-poisson bridge", ok)
    ok = True
    for _ in range(cfg.count):
        a = random_series(sig, rng, 3)
        ok &= print_canonical(ps(print_canonical(a), sig)) == print_canonical(a)
    report("print/parse round trip", ok)
    out.write(f"seed={seed}\n")
    return 1 if failures else 0


def _koszul(a, b) -> int:
    pa = a.sig.monomial_parity(next(iter(a.monomials()))) if a else 0
    pb = b.sig.monomial_parity(next(iter(b.monomials()))) if b else 0
    return -1 if pa and pb else 1


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if cfg.command == "selftest":
            return _selftest(cfg, out)
        if cfg.command == "print":
            text = _read(cfg.series or cfg.ham, "series")
            sig = _located(cfg.sig, parse_signature, _read(cfg.sig, "sig"))
            w = _located("--window", parse_window, cfg.window) if cfg.window else None
            f = _located(cfg.series or cfg.ham, parse_series, text, sig, w)
            out.write(print_canonical(f) + "\n")
            return 0
        cobord = cfg.command == "check" and cfg.check in ("fundamental", "chainmap", "covariance")
        inp = _Inputs(cfg, cobord)
        if cfg.command == "homology":
            return _run_homology(cfg, inp, out)
        reports = _run_check(cfg, inp)
    except InputError as exc:
        err.write(f"error: {exc}\n")
        return 3
    except SftWeylError as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        out.write(f"check={cfg.check}\nstatus=error\nerror={type(exc).__name__}\n"
                  if cfg.fmt == "kv" else f"{cfg.check}: error: {exc}\n")
        return 1
    for rep in reports:
        _emit(rep, cfg.fmt, out)
    return 0 if all(r.holds for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sftweyl", description="Exact SFT Weyl-algebra checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, ham=True):
        p.add_argument("--sig", required=True, help="signature file")
        p.add_argument("--geo", help="geometry file (defaults to geometry lines of --sig)")
        if ham:
            p.add_argument("--ham", help="Hamiltonian series file")
        p.add_argument("--window", help='e.g. "hbar=-2..1,pq=4,t=2,z=2"')
        p.add_argument("--format", dest="fmt", choices=("text", "kv"), default="text")

    pc = sub.add_parser("check", help="run one identity check")
    pc.add_argument("check", choices=CHECKS)
    common(pc)
    pc.add_argument("--ham-plus")
    pc.add_argument("--ham-minus")
    pc.add_argument("--potential")
    pc.add_argument("--certificates", action="store_true",
                    help="search exactness certificates for failing defects")
    pc.add_argument("--probe", action="append", default=[], help="probe series (chainmap)")
    pc.add_argument("--descendant", action="append", default=[], metavar="FORM,LEVEL")
    pc.add_argument("--degree", type=int, help="restrict dsquared to one source degree")

    ph = sub.add_parser("homology", help="homology ranks of D = [H, .] on a window")
    common(ph)
    ph.add_argument("--degree", type=int)

    pp = sub.add_parser("print", help="canonicalize a series file")
    pp.add_argument("series", nargs="?")
    pp.add_argument("--sig", required=True)
    pp.add_argument("--ham")
    pp.add_argument("--window")

    ps = sub.add_parser("selftest", help="randomized algebra checks (seed: SFTWEYL_SEED)")
    ps.add_argument("--count", type=int, default=50)
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    d = vars(ns)
    cfg = RunConfig(
        command=ns.command,
        check=d.get("check"),
        sig=d.get("sig"),
        geo=d.get("geo"),
        ham=d.get("ham"),
        ham_plus=d.get("ham_plus"),
        ham_minus=d.get("ham_minus"),
        potential=d.get("potential"),
        series=d.get("series"),
        window=d.get("window"),
        certificates=d.get("certificates", False),
        fmt=d.get("fmt", "text"),
        probes=tuple(d.get("probe") or ()),
        descendants=tuple(d.get("descendant") or ()),
        degree=d.get("degree"),
        count=d.get("count", 50),
    )
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
