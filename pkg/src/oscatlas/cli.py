"""Command-line interface: ``oscatlas <command> [options]``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

__version__ = "0.1.0"
from .amplitude import parse_amplitude, tensor
from .campaign import exit_code, load_campaign, run_campaign, write_reports
from .errors import ConfigParse, OscatlasError, PoleError
from .expansion import (PhaseSeries, expand_analytic_phase, expand_full_line,
                        expand_half_line, expand_parity_forms)
from .expansion_nd import PhaseND, expand_nd, omega_set, preset_phase
from .fresnel import coeff_full_line, coeff_minus, fresnel_general
from .jets import Jet, jet_revert
from .numerics import lambert_w0

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _signs(text):
    text = text.replace(",", "")
    return list(text)


def _complex_dict(z):
    return {"re": z.real, "im": z.imag}


def _emit(payload: dict, fmt: str, rows=None, columns=None, pretty=None, out=None):
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in r])
        out.write(buf.getvalue())
    else:
        out.write(pretty + "\n")


def _fmt_complex(z):
    z = complex(z.real + 0.0, z.imag + 0.0)  # drop signed zeros
    return f"{z.real:.15g} {'+' if z.imag >= 0 else '-'} {abs(z.imag):.15g}i"


# ---------------------------------------------------------------------------
# commands

def cmd_fresnel(args):
    z = fresnel_general(args.p, args.q, args.sign)
    payload = {"p": args.p, "q": args.q, "sign": args.sign, "value": _complex_dict(z)}
    _emit(payload, args.format, [[args.p, args.q, args.sign, z.real, z.imag]],
          ["p", "q", "sign", "re", "im"], _fmt_complex(z))
    return EXIT_OK


def cmd_coeff(args):
    fn = coeff_minus if args.minus else coeff_full_line
    z = fn(args.m, args.k, args.sign)
    kind = "minus" if args.minus else "full_line"
    payload = {"m": args.m, "k": args.k, "sign": args.sign, "kind": kind, "value": _complex_dict(z)}
    _emit(payload, args.format, [[args.m, args.k, args.sign, kind, z.real, z.imag]],
          ["m", "k", "sign", "kind", "re", "im"], _fmt_complex(z))
    return EXIT_OK


def _build_expansion(args):
    line = args.line
    if line == "nd":
        if args.preset:
            phase = preset_phase(args.preset, args.n, _signs(args.signs), domain=args.domain)
        else:
            phase = PhaseND(tuple(_floats(args.powers)), tuple(_signs(args.signs)), args.domain)
        amps = args.amplitude or ["gaussian"]
        if len(amps) == 1:
            amps = amps * phase.n
        return expand_nd(phase, tensor(*[parse_amplitude(a) for a in amps]), args.N)
    amp = parse_amplitude((args.amplitude or ["gaussian"])[0])
    if line == "half":
        return expand_half_line(args.p, args.sign, amp, args.N)
    if line == "full":
        return expand_full_line(int(args.m), args.sign, amp, args.N)
    if line in ("odd", "even"):
        return expand_parity_forms(args.l, args.sign, amp, args.N, line)
    if line == "analytic":
        if args.series == "exp":
            series = PhaseSeries.exponential(args.p)
        else:
            series = PhaseSeries(args.p, tuple(_floats(args.series or "")))
        return expand_analytic_phase(series, args.sign, amp, args.N, args.analytic_line)
    raise ConfigParse(f"unknown line {line!r}")


def cmd_expand(args):
    e = _build_expansion(args)
    payload = e.to_dict()
    rows = []
    for t in e.terms:
        idx = ";".join(map(str, t.index)) if isinstance(t.index, tuple) else t.index
        rows.append([idx, t.exponent, t.coeff.real, t.coeff.imag])
    lines = [f"remainder exponent {e.remainder_exponent:.15g}"]
    for r, t in zip(rows, e.terms):
        lines.append(f"[{r[0]}] ({_fmt_complex(t.coeff)}) * lambda^-{t.exponent:.15g}")
    _emit(payload, args.format, rows, ["index", "exponent", "re", "im"], "\n".join(lines))
    return EXIT_OK


def cmd_omega(args):
    om = omega_set(_floats(args.powers), args.N)
    members = [list(a) for a in om.members]
    payload = {"powers": _floats(args.powers), "N": args.N, "threshold": om.threshold,
               "members": members}
    _emit(payload, args.format, [[";".join(map(str, a))] for a in members], ["alpha"],
          f"threshold {om.threshold:.15g}\n" + "\n".join(str(tuple(a)) for a in members))
    return EXIT_OK


def cmd_reverse(args):
    coeffs = _floats(args.coeffs)
    if args.order is not None and args.order + 1 > len(coeffs):
        coeffs = coeffs + [0.0] * (args.order + 1 - len(coeffs))
    phi = jet_revert(Jet(np.array(coeffs)))
    vals = [float(v) for v in phi.coeffs]
    payload = {"input": coeffs, "reverted": vals}
    _emit(payload, args.format, [[k, v] for k, v in enumerate(vals)], ["k", "coeff"],
          "\n".join(f"{k}: {v:.15g}" for k, v in enumerate(vals)))
    return EXIT_OK


def cmd_lambertw(args):
    ys = _floats(args.y)
    ws = [lambert_w0(y) for y in ys]
    payload = {"values": [{"y": y, "w": w, "residual": w * np.exp(w) - y} for y, w in zip(ys, ws)]}
    _emit(payload, args.format, [[y, w] for y, w in zip(ys, ws)], ["y", "w"],
          "\n".join(f"W0({y:g}) = {w:.17g}" for y, w in zip(ys, ws)))
    return EXIT_OK


def cmd_verify(args):
    campaign = load_campaign(args.campaign)
    reports = run_campaign(campaign)
    path = write_reports(reports, campaign, args.out)
    for r in reports:
        slope = "n/a" if r.fitted_slope is None else f"{r.fitted_slope:.3f}"
        line = (f"{r.case_id} N={r.N}: {r.status} slope={slope} "
                f"guaranteed=-{r.guaranteed_exponent:.4g} points={r.used_points}")
        if r.message:
            line += f" ({r.message})"
        print(line)
    print(f"summary written to {path}")
    return exit_code(reports)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscatlas",
                                     description="Oscillatory integrals with monomial phases.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--format", choices=("json", "csv", "pretty"), default="pretty")
        p.set_defaults(func=func)
        return p

    p = add("fresnel", cmd_fresnel, "generalized Fresnel integral")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--sign", default="+")

    p = add("coeff", cmd_coeff, "full-line coefficient c_{m,k}")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--sign", default="+")
    p.add_argument("--minus", action="store_true", help="difference form instead of the sum")

    p = add("expand", cmd_expand, "asymptotic expansion")
    p.add_argument("--line", choices=("half", "full", "odd", "even", "analytic", "nd"),
                   default="half")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--sign", default="+")
    p.add_argument("--amplitude", action="append",
                   help="amplitude, e.g. gaussian or bump:1,2 (repeat per axis for nd)")
    p.add_argument("--series", default=None, help="'exp' or comma separated a_1,a_2,...")
    p.add_argument("--analytic-line", choices=("half", "full"), default="half")
    p.add_argument("--powers", default="2,2")
    p.add_argument("--signs", default="++")
    p.add_argument("--domain", choices=("positive_orthant", "full_space"), default="full_space")
    p.add_argument("--preset", default=None, help="A(k), E6 or E8")
    p.add_argument("--n", type=int, default=2)

    p = add("omega", cmd_omega, "index set of an n-D expansion")
    p.add_argument("--powers", required=True)
    p.add_argument("--N", type=int, required=True)

    p = add("reverse", cmd_reverse, "series reversion of a jet")
    p.add_argument("--coeffs", required=True, help="c0,c1,... with c0 = 0 and c1 != 0")
    p.add_argument("--order", type=int, default=None)

    p = add("lambertw", cmd_lambertw, "principal branch of Lambert W")
    p.add_argument("--y", required=True, help="comma separated arguments")

    p = add("verify", cmd_verify, "run a verification campaign")
    p.add_argument("--campaign", required=True)
    p.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigParse as exc:
        print(json.dumps({"error": "ConfigParse", "message": str(exc)}), file=sys.stderr)
        return EXIT_CONFIG
    except PoleError as exc:
        print(json.dumps({"error": "PoleError", "message": str(exc), "location": exc.location,
                          "order": exc.order}), file=sys.stderr)
        return EXIT_FAIL
    except OscatlasError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
