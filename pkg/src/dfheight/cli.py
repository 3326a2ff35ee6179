"""Command-line entry point ``dfheight``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import classify as cl
from .arith import format_element, format_rational
from .auxpoly import BinomialPoly, siegel_vanishing_poly, twist_series
from .corpus import CORPUS, get_entry
from .errors import DFiniteError, SchemaError
from .formats import load_series, read_index_file
from .growth import IndexSet, counterexample_set, growth_profile, kappa_density_check, ALPHAS
from .hankel import hankel_scan, kronecker_guess_details
from .numeric import MP, fmt, log_int
from .polya import DiskBoundInput, polya_soundness, sup_norm_details
from .series import SeriesHandle


def _series(ref: str) -> SeriesHandle:
    if ref.startswith("corpus:"):
        return get_entry(ref[len("corpus:"):]).series()
    return load_series(ref)


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{what}: not a rational number: {text!r}") from None


def _int_list(text: str, what: str) -> List[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise SchemaError(f"{what}: expected comma separated integers, got {text!r}") from None


def _emit_json(obj, out) -> None:
    out.write(json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _emit_rows(header: Sequence[str], rows: Sequence[Sequence[str]], fmt_: str, out) -> None:
    if fmt_ == "json":
        _emit_json([dict(zip(header, r)) for r in rows], out)
        return
    out.write(",".join(header) + "\n")
    for r in rows:
        out.write(",".join(r) + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------
def cmd_coeffs(args, out):
    s = _series(args.series)
    rows = [(str(n), format_element(a)) for n, a in enumerate(s.coefficients(args.n))]
    _emit_rows(("n", "a_n"), rows, args.format, out)


def _exclusion(args, N: int) -> Optional[IndexSet]:
    if not args.exclude:
        return None
    return IndexSet.from_indices(read_index_file(args.exclude), N)


def cmd_profile(args, out):
    s = _series(args.series)
    prof = growth_profile(s, args.n, _exclusion(args, args.n))
    if args.format == "csv":
        out.write(prof.to_csv(args.precision))
        return
    lines = prof.to_csv(args.precision).splitlines()
    header = lines[0].split(",")
    _emit_json([dict(zip(header, ln.split(","))) for ln in lines[1:]], out)


def cmd_density(args, out):
    s = _series(args.series)
    N = args.n
    prof = growth_profile(s, N, _exclusion(args, N))
    kc = kappa_density_check(prof, args.kappa, floor=args.floor)
    rep = {
        "kappa": format_rational(args.kappa),
        "density_top": fmt(MP.mpf(kc.density.top.numerator) / kc.density.top.denominator, args.precision),
        "density_bottom": fmt(MP.mpf(kc.density.bottom.numerator) / kc.density.bottom.denominator,
                              args.precision),
        "monotone": kc.density.monotone,
        "pass": kc.passed,
        "log_lcm_over_n": fmt(prof.log_lcm[N] / N, args.precision),
    }
    if args.beta is not None:
        if args.beta <= 1:
            raise SchemaError("--beta must exceed 1")
        log_beta = log_int(args.beta.numerator) - log_int(args.beta.denominator)
        rep["beta"] = format_rational(args.beta)
        rep["lcm_exceeds_beta_power"] = bool(prof.log_lcm[N] > N * log_beta)
    _emit_json(rep, out)


def cmd_classify(args, out):
    s = _series(args.series)
    N = args.n
    config = cl.ClassifyConfig(band=(args.band_lo, args.band_hi), density_floor=args.density_floor,
                               window=args.fit_window)
    gc = cl.growth_classify(s, N, config)
    qp = cl.quasipolynomial_detect(s, N, args.s_max, args.deg_max)
    kg = kronecker_guess_details(s, args.hankel_n, args.window)
    poles = cl.root_of_unity_poles(kg.rational, args.m_max) if kg.rational is not None else None
    gev = cl.gevrey_estimate(s, N, args.b_max) if N >= 100 else None
    d = gc.to_dict(args.precision)
    rep = {
        "class": d["class"],
        "evidence": d["evidence"],
        "fit": d["fit"],
        "quasipolynomial": qp.to_dict() if qp is not None else None,
        "rational": kg.rational.to_text() if kg.rational is not None else None,
        "poles": str(poles) if poles is not None else None,
        "gevrey": format_rational(gev) if gev is not None else None,
    }
    if args.branches:
        be = cl.branch_evidence(s, N, kappa=args.kappa, floor=args.density_floor,
                                n_max=args.hankel_n, window=args.window)
        rep["branches"] = be.fired()
    _emit_json(rep, out)


def cmd_trichotomy(args, out):
    s = _series(args.series)
    rep = cl.trichotomy_report(s, args.n, args.C, args.window)
    _emit_json(rep.to_dict(args.precision), out)


def cmd_hankel(args, out):
    s = _series(args.series)
    if args.guess is not None:
        kg = kronecker_guess_details(s, args.n, args.guess)
        _emit_json({
            "rational": kg.rational.to_text() if kg.rational is not None else None,
            "run_start": kg.run_start,
            "reconstruction_horizon": kg.reconstruction_horizon,
            "validated_through": kg.validated_through,
            "scanned": kg.scanned,
        }, out)
        return
    scan = hankel_scan(s, args.n)
    if args.format == "csv":
        out.write(scan.to_csv(args.precision))
        return
    lines = scan.to_csv(args.precision).splitlines()
    header = lines[0].split(",")
    _emit_json([dict(zip(header, ln.split(","))) for ln in lines[1:]], out)


def cmd_siegel(args, out):
    indices = _int_list(args.indices, "indices")
    P = siegel_vanishing_poly(indices, args.n)
    out.write(P.to_text() + "\n")


def cmd_twist(args, out):
    s = _series(args.series)
    P = BinomialPoly.parse(args.c)
    g = twist_series(s, P)
    rows = [(str(n), format_element(a)) for n, a in enumerate(g.coefficients(args.n))]
    _emit_rows(("n", "b_n"), rows, args.format, out)


def cmd_polya(args, out):
    s = _series(args.series)
    r = _fraction(args.r, "r")
    maj = _int_or_frac_pair(args.majorant)
    sup = sup_norm_details(s, r, maj, grid=args.grid)
    inp = DiskBoundInput(sup.value, r)
    rows = polya_soundness(s, inp, args.n_max)
    table = [(str(row.n), format_element(row.delta), fmt(row.bound, args.precision), str(int(row.sound)))
             for row in rows]
    if args.format == "json":
        _emit_json({"sup_norm": fmt(sup.value, args.precision), "terms": sup.terms,
                    "rows": [{"n": row.n, "delta_exact": t[1], "bound": t[2], "sound": row.sound}
                             for row, t in zip(rows, table)],
                    "all_sound": all(row.sound for row in rows)}, out)
        return
    _emit_rows(("n", "delta_exact", "bound", "sound"), table, "csv", out)


def _int_or_frac_pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise SchemaError(f"majorant must be 'A,rho', got {text!r}")
    return _fraction(parts[0], "majorant"), _fraction(parts[1], "majorant")


def cmd_counterexample(args, out):
    cs = counterexample_set(args.n, args.alpha)
    if args.format == "json":
        _emit_json({"alpha": cs.alpha, "c": [fmt(MP.mpf(c), args.precision) for c in cs.c],
                    "rows": [{"n": r.n, "count": r.count, "density": fmt(MP.mpf(r.density), args.precision),
                              "ratio": fmt(MP.mpf(r.ratio), args.precision),
                              "log_lcm_over_n": fmt(MP.mpf(r.log_lcm_over_n), args.precision)}
                             for r in cs.rows]}, out)
        return
    out.write(cs.to_csv(args.precision))


def cmd_corpus(args, out):
    if args.name:
        out.write(get_entry(args.name).text())
        return
    for e in CORPUS.values():
        out.write(f"{e.name},{e.description},{e.expected_class or ''},{e.expected_branch or ''}\n")


def cmd_check(args, out):
    from .checks import basis_change_check, siegel_twist_check
    series = [get_entry("exp").series(), get_entry("log1p").series()]
    results = [siegel_twist_check(series, args.count, args.seed),
               basis_change_check(args.count, args.seed)]
    _emit_json({"seed": args.seed, "results": [r.to_dict() for r in results]}, out)
    return 0 if all(r.ok for r in results) else 4


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def _positive_fraction(text: str) -> Fraction:
    v = _fraction(text, "value")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dfheight", description="Heights, denominators and Hankel diagnostics "
                                               "for D-finite power series.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, n_default=None, fmt_=True):
        sp.add_argument("--precision", type=int, default=30, metavar="DIGITS",
                        help="significant digits of decimal output (default 30)")
        if fmt_:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")
        if n_default is not None:
            sp.add_argument("--n", type=int, default=n_default, help=f"horizon (default {n_default})")

    sp = sub.add_parser("coeffs", help="exact coefficients a_0..a_N")
    sp.add_argument("series", help="series JSON file or corpus:NAME")
    common(sp, 10)
    sp.set_defaults(func=cmd_coeffs)

    sp = sub.add_parser("profile", help="height, denominator and running lcm profile")
    sp.add_argument("series")
    sp.add_argument("--exclude", metavar="FILE", help="indices to leave out of the lcm, one per line")
    common(sp, 100)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("density", help="density of {n : den(a_n) >= kappa n} and lcm growth")
    sp.add_argument("series")
    sp.add_argument("--kappa", type=_positive_fraction, default=Fraction(1, 2))
    sp.add_argument("--beta", type=_positive_fraction, default=None)
    sp.add_argument("--floor", type=_positive_fraction, default=Fraction(1, 20))
    sp.add_argument("--exclude", metavar="FILE")
    common(sp, 1000, fmt_=False)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("classify", help="growth class with evidence (JSON)")
    sp.add_argument("series")
    common(sp, 2000, fmt_=False)
    sp.add_argument("--band-lo", type=float, default=0.1)
    sp.add_argument("--band-hi", type=float, default=10.0)
    sp.add_argument("--density-floor", type=float, default=0.1)
    sp.add_argument("--fit-window", type=float, default=0.5, help="fit on [w N, N]")
    sp.add_argument("--s-max", type=int, default=6)
    sp.add_argument("--deg-max", type=int, default=8)
    sp.add_argument("--m-max", type=int, default=60)
    sp.add_argument("--b-max", type=int, default=4)
    sp.add_argument("--hankel-n", type=int, default=30, help="Hankel scan depth for the rational guess")
    sp.add_argument("--window", type=int, default=5)
    sp.add_argument("--kappa", type=_positive_fraction, default=Fraction(1, 10))
    sp.add_argument("--branches", action="store_true", help="also report branch evidence")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("trichotomy", help="three-branch evidence report (JSON)")
    sp.add_argument("series")
    common(sp, 200, fmt_=False)
    sp.add_argument("--C", type=int, default=3)
    sp.add_argument("--window", type=int, default=4)
    sp.set_defaults(func=cmd_trichotomy)

    sp = sub.add_parser("hankel", help="exact Hankel scan, or a rational guess with --guess")
    sp.add_argument("series")
    common(sp, 20)
    sp.add_argument("--guess", type=int, metavar="WINDOW", default=None)
    sp.set_defaults(func=cmd_hankel)

    sp = sub.add_parser("siegel", help="short integer-valued polynomial vanishing on indices")
    sp.add_argument("indices", help="comma separated indices, e.g. 2,4")
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_siegel)

    sp = sub.add_parser("twist", help="coefficients of sum P(n) a_n z^n")
    sp.add_argument("series")
    sp.add_argument("c", help="binomial coefficients c0,c1,...")
    common(sp, 10)
    sp.set_defaults(func=cmd_twist)

    sp = sub.add_parser("polya", help="exact Hankel determinants against the disk bound")
    sp.add_argument("series")
    sp.add_argument("r", help="radius > 1")
    sp.add_argument("majorant", help="A,rho with |a_n| <= A rho^-n")
    sp.add_argument("n_max", type=int)
    sp.add_argument("--grid", type=int, default=256)
    common(sp)
    sp.set_defaults(func=cmd_polya)

    sp = sub.add_parser("counterexample", help="zero-density set with sub-exponential lcm")
    sp.add_argument("n", type=int)
    sp.add_argument("alpha", nargs="?", default="log", choices=sorted(ALPHAS))
    common(sp)
    sp.set_defaults(func=cmd_counterexample)

    sp = sub.add_parser("corpus", help="list the embedded corpus or print one definition")
    sp.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_corpus)

    sp = sub.add_parser("check", help="seeded random property checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20)
    sp.set_defaults(func=cmd_check)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code = args.func(args, out)
    except DFiniteError as exc:
        sys.stderr.write(f"dfheight: error: {exc}\n")
        return exc.exit_code
    return int(code or 0)


if __name__ == "__main__":
    sys.exit(main())
