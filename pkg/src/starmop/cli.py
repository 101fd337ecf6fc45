"""Command-line front end.

Every subcommand prints one JSON document (or a CSV table for
``recurrence --format csv``).  Complex numbers are ``[re, im]`` pairs of
decimal strings.  Exit codes: 0 ok, 1 verification failed, 2 bad input,
3 non-normal index.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .analysis import limit_check, orthogonality_check, zero_locate
from .constructors import (
    DETERMINANT,
    EXPLICIT,
    PATHWAYS,
    RODRIGUES,
    coefficient_distance,
    construct,
    pathway_agreement,
)
from .errors import ClassificationUnavailableError, NonNormalIndexError, ParameterError
from .measures import CHARLIER, MEIXNER, CharlierParams, MeixnerParams, perfectness_check
from .numeric import GaussianRational, PrecisionConfig, format_complex, format_real, parse_complex
from .polynomials import MultiIndex, Poly, index_box, monomial_to_pochhammer, multi_indices
from .recurrence import closed_form_residual_max, coeffs

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_NON_NORMAL = 3

DEFAULT_BETAS = [2 ** k for k in range(4, 13)]


class UsageError(ParameterError):
    pass


# ---------------------------------------------------------------- parsing

def _parse_scalar(item) -> GaussianRational:
    if isinstance(item, list):
        if len(item) != 2:
            raise UsageError(f"complex pair must have two entries, got {item!r}")
        re, im = (Fraction(str(x)) for x in item)
        return GaussianRational(re, im)
    return parse_complex(str(item))


def parse_values(text: str) -> list:
    """``"1,2"``, ``"1+2i, 1/3"`` or a JSON list of numbers, strings or pairs."""
    text = text.strip()
    try:
        if text.startswith("["):
            items = json.loads(text, parse_float=str, parse_int=str)
            if not isinstance(items, list):
                raise UsageError("expected a list")
        else:
            items = [x for x in text.split(",") if x.strip()]
        return [_parse_scalar(x) for x in items]
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse values {text!r}: {exc}") from exc


def parse_ints(text: str) -> list[int]:
    text = text.strip().strip("[]()")
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse integer list {text!r}") from exc


def build_params(args):
    if args.params is None:
        raise UsageError("--params is required")
    values = parse_values(args.params)
    if not values:
        raise UsageError("--params must not be empty")
    if args.r is not None and args.r != len(values):
        raise UsageError(f"--r is {args.r} but {len(values)} parameters were given")
    if args.family == CHARLIER:
        params = CharlierParams(tuple(values))
    else:
        if args.beta is None:
            raise UsageError("meixner needs --beta")
        params = MeixnerParams(tuple(values), _parse_scalar(args.beta))
    check = perfectness_check(params)
    if check.violating_pairs:
        raise UsageError("; ".join(check.problems))
    # divergent moments only matter to the series-based commands
    if params.family == MEIXNER:
        params.validate(convergent=False)
    else:
        params.validate()
    return params


def build_index(text: str, r: int) -> MultiIndex:
    entries = parse_ints(text)
    if len(entries) != r:
        raise UsageError(f"multi-index has {len(entries)} entries but r = {r}")
    try:
        return MultiIndex(entries)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def build_indices(args, r: int, default_total: int):
    if args.n is not None and args.box is not None:
        raise UsageError("give either --n or --box, not both")
    if args.n is not None:
        return [build_index(args.n, r)]
    if args.box is not None:
        bounds = parse_ints(args.box)
        if len(bounds) != r or any(b < 0 for b in bounds):
            raise UsageError(f"--box needs {r} nonnegative bounds")
        return list(index_box(bounds))
    return list(multi_indices(r, default_total))


def _tolerance(args, default: str):
    text = args.tol if args.tol is not None else default
    try:
        tol = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad --tol {text!r}") from exc
    if tol <= 0:
        raise UsageError("--tol must be positive")
    return tol


# ---------------------------------------------------------------- output

def _cx(x, bits):
    return format_complex(x, bits)


def _real(x, bits):
    return None if x is None else format_real(x, bits)


def _params_json(params, bits):
    values = params.a if params.family == CHARLIER else params.c
    return [_cx(v, bits) for v in values]


def _header(params, bits) -> dict:
    out = {"family": params.family, "r": params.r}
    if params.family == MEIXNER:
        out["beta"] = _cx(params.beta, bits)
    out["params"] = _params_json(params, bits)
    return out


def _emit(doc, args):
    text = json.dumps(doc, indent=2) + "\n"
    _write(text, args)


def _write(text, args):
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands

def _agreement_delta(params, n, bits):
    """Max absolute coefficient distance across the three pathways, or None."""
    if params.family == MEIXNER and not params.c_bar < 1:
        return None
    agreement = pathway_agreement(params, n, bits)
    polys = [agreement.reports[p].polynomial for p in PATHWAYS]
    return max(coefficient_distance(p, q, bits)
               for i, p in enumerate(polys) for q in polys[i + 1:])


def cmd_poly(args, bits) -> int:
    params = build_params(args)
    if args.n is None:
        raise UsageError("poly needs --n")
    n = build_index(args.n, params.r)
    report = construct(params, n, args.pathway, bits)
    poly = report.polynomial
    if args.basis == "pochhammer":
        coefficients = monomial_to_pochhammer(poly).coeffs
    else:
        coefficients = poly.coeffs
    doc = _header(params, bits)
    doc.update({
        "multi_index": list(n),
        "basis": args.basis,
        "coefficients": [_cx(c, bits) for c in coefficients],
        "pathway": args.pathway,
        "agreement_max_delta": _real(_agreement_delta(params, n, bits), bits),
    })
    _emit(doc, args)
    return EXIT_OK


def _legs(args, r):
    if args.leg is None or args.leg == "all":
        return list(range(r))
    legs = parse_ints(args.leg)
    if any(not 0 <= k < r for k in legs):
        raise UsageError(f"--leg entries must lie in 0..{r - 1}")
    return legs


def recurrence_rows(params, indices, legs, bits):
    rows = []
    for n in indices:
        for k in legs:
            row = coeffs(params, n, k)
            rows.append({
                "n": list(n),
                "k": k,
                "b": _cx(row.b, bits),
                "d": [_cx(d, bits) for d in row.d],
                "residual_max_coeff": format_real(closed_form_residual_max(params, n, k, bits), bits),
            })
    return rows


def cmd_recurrence(args, bits) -> int:
    params = build_params(args)
    indices = build_indices(args, params.r, 2)
    rows = recurrence_rows(params, indices, _legs(args, params.r), bits)
    if args.format == "csv":
        r = params.r
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = [f"n{i}" for i in range(r)] + ["k", "b_re", "b_im"]
        for j in range(r):
            header += [f"d{j}_re", f"d{j}_im"]
        writer.writerow(header + ["residual_max_coeff"])
        for row in rows:
            line = row["n"] + [row["k"]] + row["b"]
            for d in row["d"]:
                line += d
            writer.writerow(line + [row["residual_max_coeff"]])
        _write(buf.getvalue(), args)
        return EXIT_OK
    doc = _header(params, bits)
    doc["rows"] = rows
    _emit(doc, args)
    return EXIT_OK


def _smoke_grid():
    yield CharlierParams((Fraction(1, 2),)), 3
    yield CharlierParams((1, 2)), 3
    yield CharlierParams((Fraction(1, 2), 2, 3)), 2
    yield MeixnerParams((Fraction(1, 3),), Fraction(1, 2)), 3
    yield MeixnerParams((Fraction(1, 4), Fraction(1, 2)), 3), 3
    yield MeixnerParams((Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)), 1), 2


def verify_cases(params, indices, bits, threshold, perturbation=None):
    """Run the three checks over ``indices``; returns the report dict and a pass flag."""
    cfg = PrecisionConfig(bits)
    tail_tol = threshold / 10 ** 10
    orth_max = cfg.ctx.mpf(0)
    orth_ok = path_ok = rec_ok = True
    path_max = cfg.ctx.mpf(0)
    rec_max = cfg.ctx.mpf(0)
    for n in indices:
        if n.total == 0:
            continue
        agreement = pathway_agreement(params, n, bits)
        path_max = max(path_max, agreement.max_delta)
        path_ok = path_ok and agreement.passed
        p = agreement.reports[EXPLICIT].polynomial
        if perturbation is not None:
            p = p + Poly.constant(perturbation)
        orth = orthogonality_check(params, n, p, tail_tol, bits)
        orth_max = max(orth_max, orth.max_residual)
        orth_ok = orth_ok and orth.passes(threshold)
        for k in range(params.r):
            res = closed_form_residual_max(params, n, k, bits)
            rec_max = max(rec_max, res)
            limit = 0 if params.exact else cfg.equality_tolerance
            rec_ok = rec_ok and res <= limit
    return (orth_max, orth_ok), (path_max, path_ok), (rec_max, rec_ok)


def cmd_verify(args, bits) -> int:
    threshold = _tolerance(args, "1e-50")
    perturbation = None
    if args.perturb is not None:
        perturbation = _parse_scalar(args.perturb)
    if args.params is None:
        jobs = [(params, list(multi_indices(params.r, total))) for params, total in _smoke_grid()]
    else:
        params = build_params(args)
        params.validate()
        jobs = [(params, build_indices(args, params.r, 2))]
    results = [verify_cases(p, idx, bits, threshold, perturbation) for p, idx in jobs]
    sections = {}
    for pos, name in enumerate(("orthogonality", "pathways", "recurrence")):
        worst = max(res[pos][0] for res in results)
        ok = all(res[pos][1] for res in results)
        sections[name] = {"max_residual" if name != "pathways" else "max_delta":
                          format_real(worst, bits), "pass": ok}
    _emit(sections, args)
    return EXIT_OK if all(s["pass"] for s in sections.values()) else EXIT_FAILED


def _roots_json(roots, bits):
    return [_cx(z, bits) for z in roots]


def cmd_zeros(args, bits) -> int:
    params = build_params(args)
    if args.n is None:
        raise UsageError("zeros needs --n")
    n = build_index(args.n, params.r)
    poly = construct(params, n, args.pathway, bits).polynomial
    doc = _header(params, bits)
    doc["multi_index"] = list(n)
    if poly.degree < 1:
        doc.update({"t_roots": [], "multiplicities": [], "all_positive_real_simple": True,
                    "classified": True, "min_separation": None, "star_zeros": []})
        _emit(doc, args)
        return EXIT_OK
    try:
        report = zero_locate(poly, require_classification=True, r=params.r, bits=bits)
    except ClassificationUnavailableError as exc:
        report = exc.roots
    doc.update({
        "t_roots": _roots_json(report.t_roots, bits),
        "multiplicities": report.multiplicities,
        "all_positive_real_simple": report.all_positive_real_simple,
        "classified": report.classified,
        "min_separation": _real(report.min_separation, bits),
        "star_zeros": [{"ray": j, "radius": format_real(rad, bits)} for j, rad in report.star_zeros],
    })
    _emit(doc, args)
    return EXIT_OK


def cmd_limit(args, bits) -> int:
    if args.family not in (None, CHARLIER):
        raise UsageError("limit takes the Charlier parameters a via --params")
    if args.params is None:
        raise UsageError("--params is required")
    a = parse_values(args.params)
    if args.r is not None and args.r != len(a):
        raise UsageError(f"--r is {args.r} but {len(a)} parameters were given")
    if args.n is None:
        raise UsageError("limit needs --n")
    n = build_index(args.n, len(a))
    betas = parse_values(args.betas) if args.betas else [GaussianRational(b) for b in DEFAULT_BETAS]
    for b in betas:
        if b.im:
            raise UsageError("beta values must be real")
    report = limit_check(a, n, [b.re for b in betas], bits)
    doc = {
        "r": len(a),
        "params": [_cx(x, bits) for x in a],
        "multi_index": list(n),
        "beta_values": [_cx(b, bits) for b in report.beta_values],
        "coefficient_distances": [format_real(d, bits) for d in report.coefficient_distances],
        "fitted_rate": report.fitted_rate,
        "halving_ratios": [_real(x, bits) for x in report.halving_ratios],
    }
    _emit(doc, args)
    return EXIT_OK


COMMANDS = {
    "poly": cmd_poly,
    "recurrence": cmd_recurrence,
    "verify": cmd_verify,
    "zeros": cmd_zeros,
    "limit": cmd_limit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starmop",
        description="Multiple Charlier and Meixner polynomials on the r-star.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", choices=[CHARLIER, MEIXNER], default=CHARLIER)
    common.add_argument("--r", type=int, help="number of rays (checked against --params)")
    common.add_argument("--params", help='a (Charlier) or c (Meixner): "1,2", "1+2i,1/3" or JSON')
    common.add_argument("--beta", help="Meixner beta")
    common.add_argument("--n", help='multi-index, e.g. "1,1"')
    common.add_argument("--precision-bits", type=int, dest="bits",
                        help="working precision (default: $MOP_PRECISION_BITS or 256)")
    common.add_argument("--tol", help="tolerance (verify: orthogonality threshold)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="output file (default stdout)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("poly", parents=[common], help="construct one polynomial")
    p.add_argument("--pathway", choices=list(PATHWAYS), default=EXPLICIT)
    p.add_argument("--basis", choices=["monomial_t", "pochhammer"], default="monomial_t")

    p = sub.add_parser("recurrence", parents=[common], help="recurrence coefficient table")
    p.add_argument("--box", help='upper bounds per leg, e.g. "2,2"')
    p.add_argument("--leg", help='raised legs, e.g. "0" or "all"')

    p = sub.add_parser("verify", parents=[common], help="orthogonality, pathway and recurrence checks")
    p.add_argument("--box", help='upper bounds per leg, e.g. "2,2"')
    p.add_argument("--perturb", help="add this constant to every polynomial before the orthogonality check")

    p = sub.add_parser("zeros", parents=[common], help="zeros in t and on the star")
    p.add_argument("--pathway", choices=[EXPLICIT, RODRIGUES, DETERMINANT], default=EXPLICIT)

    p = sub.add_parser("limit", parents=[common], help="Meixner to Charlier limit diagnostics")
    p.add_argument("--betas", help="increasing beta grid (default 2**4 .. 2**12)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        bits = PrecisionConfig.from_env(args.bits).bits
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.format == "csv" and args.command != "recurrence":
        print("error: csv output is only available for recurrence tables", file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[args.command](args, bits)
    except NonNormalIndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_NORMAL
    except (ParameterError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
