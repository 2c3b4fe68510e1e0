"""Command-line front end: parse a series request, run the pipeline, render.

Accepts either flags (``--F "x1^2 - x2" --m 1 --z -1/2 --s 0,1,1``) or a JSON
input file holding one flat record (or a list of them).  The reciprocal
binomial-coefficient shorthand ``--binomial p,k`` stands for the denominator
``n^p * C(n+k, k)``: it expands to the exponent vector ``(p, 1^k)`` with a
``k!`` prefactor.  Output formats are plain text, LaTeX and a JSON object
that round-trips through ``closed_form_from_json``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .engine import (
    ClosedForm,
    ReductionTable,
    SeriesSpec,
    apply_reductions,
    closed_form,
    default_reduction_table,
    load_reduction_table,
    monomial_key,
)
from .expr import ParseError, parse_polynomial
from .reducer import DivergentSeriesError
from .verify import VerificationReport, verify_identity

DISPLAY_MODES = ("raw", "t_values", "reduced")
OUTPUT_FORMATS = ("text", "latex", "json")


class CliError(ValueError):
    pass


@dataclass
class CliRequest:
    spec: SeriesSpec
    output_format: str = "text"
    display_mode: str = "raw"
    verify_n: Optional[int] = None
    tolerance: float = 1e-8
    reduction_table_path: Optional[str] = None
    binomial: Optional[tuple[int, int]] = None
    prefactor: Fraction = Fraction(1)
    echo: Optional[dict] = None


@dataclass
class RenderedIdentity:
    request_echo: dict
    text: str
    payload: Optional[dict] = None
    report: Optional[VerificationReport] = None


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="zetaform",
        description=(
            "Rewrite series of harmonic numbers over shifted-integer "
            "denominators as exact combinations of multiple Hurwitz zeta "
            "values, optionally verifying the identity numerically."
        ),
    )
    p.add_argument("--F", help="numerator polynomial in x1..x9, e.g. 'x1^2 - x2'")
    p.add_argument("--m", type=int, default=1, help="harmonic order (default 1)")
    p.add_argument("--z", default="0", help="rational shift in (-1, 0], e.g. -1/2")
    p.add_argument("--s", help="comma-separated denominator exponents, e.g. 0,1,1")
    p.add_argument(
        "--binomial",
        help="p,k shorthand for denominator n^p * C(n+k,k); implies a k! prefactor",
    )
    p.add_argument("--format", choices=OUTPUT_FORMATS, default="text")
    p.add_argument("--display", choices=DISPLAY_MODES, default="raw")
    p.add_argument("--verify", type=int, metavar="N", help="verify numerically at N")
    p.add_argument("--tolerance", type=float, default=1e-8)
    p.add_argument("--table", help="path to a reduction table JSON file")
    p.add_argument("--input", help="JSON file with one request record or a list")
    return p


def _request_from_record(record: dict) -> CliRequest:
    try:
        f_text = record["F"]
    except KeyError:
        raise CliError("record is missing the numerator expression 'F'")
    try:
        poly = parse_polynomial(f_text)
    except ParseError as exc:
        raise CliError(f"cannot parse F={f_text!r}: {exc}")
    m = record.get("m", 1)
    z_text = str(record.get("z", "0"))
    try:
        z = Fraction(z_text)
    except ValueError:
        raise CliError(f"cannot parse z={z_text!r} as a rational")
    binomial = record.get("binomial")
    s = record.get("s")
    if (binomial is None) == (s is None):
        raise CliError("exactly one of 's' and 'binomial' is required")
    prefactor = Fraction(1)
    if binomial is not None:
        p_exp, k = (int(v) for v in binomial)
        if p_exp < 0 or k < 1:
            raise CliError("binomial shorthand needs p >= 0, k >= 1")
        s_vec = (p_exp,) + (1,) * k
        prefactor = Fraction(math.factorial(k))
        binomial = (p_exp, k)
    else:
        s_vec = tuple(int(v) for v in s)
    try:
        spec = SeriesSpec(poly, int(m), z, s_vec)
    except DivergentSeriesError as exc:
        raise CliError(str(exc))
    except ValueError as exc:
        raise CliError(str(exc))
    fmt = record.get("format", "text")
    display = record.get("display", "raw")
    if fmt not in OUTPUT_FORMATS:
        raise CliError(f"unknown format {fmt!r}")
    if display not in DISPLAY_MODES:
        raise CliError(f"unknown display mode {display!r}")
    verify_n = record.get("verify")
    echo = {
        "F": f_text,
        "m": int(m),
        "z": z_text,
        "s": list(s_vec),
        "binomial": list(binomial) if binomial else None,
        "display": display,
        "format": fmt,
    }
    return CliRequest(
        spec=spec,
        output_format=fmt,
        display_mode=display,
        verify_n=int(verify_n) if verify_n is not None else None,
        tolerance=float(record.get("tolerance", 1e-8)),
        reduction_table_path=record.get("table"),
        binomial=binomial,
        prefactor=prefactor,
        echo=echo,
    )


def _join_dash_values(argv):
    # argparse misreads values that start with '-' (e.g. --z -1/2); fold the
    # affected flag/value pairs into --flag=value form
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in ("--z", "--F") and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def parse_request(argv):
    """Parse CLI arguments into one CliRequest or a list of them."""
    args = _build_parser().parse_args(_join_dash_values(list(argv)))
    if args.input:
        if args.F or args.s or args.binomial:
            raise CliError("--input cannot be combined with --F/--s/--binomial")
        with open(args.input, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        records = data if isinstance(data, list) else [data]
        return [_request_from_record(r) for r in records]
    if not args.F:
        raise CliError("--F is required (or use --input)")
    record = {
        "F": args.F,
        "m": args.m,
        "z": args.z,
        "format": args.format,
        "display": args.display,
        "tolerance": args.tolerance,
        "table": args.table,
    }
    if args.binomial is not None:
        try:
            record["binomial"] = [int(v) for v in args.binomial.split(",")]
        except ValueError:
            raise CliError(f"cannot parse --binomial {args.binomial!r}")
        if len(record["binomial"]) != 2:
            raise CliError("--binomial needs exactly p,k")
    if args.s is not None:
        try:
            record["s"] = [int(v) for v in args.s.split(",")]
        except ValueError:
            raise CliError(f"cannot parse --s {args.s!r}")
    if args.verify is not None:
        record["verify"] = args.verify
    return _request_from_record(record)


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _frac_text(fr: Fraction) -> str:
    return str(fr)


def _frac_latex(fr: Fraction) -> str:
    if fr.denominator == 1:
        return str(fr.numerator)
    sign = "-" if fr < 0 else ""
    return rf"{sign}\frac{{{abs(fr.numerator)}}}{{{fr.denominator}}}"


def _vector_text(vec, shift: Fraction, t_mode: bool) -> str:
    args = ",".join(str(v) for v in vec)
    if t_mode:
        return f"t({args})"
    if shift == 0:
        return f"zeta({args})"
    return f"zeta({args}; {shift})"


def _vector_latex(vec, shift: Fraction, t_mode: bool) -> str:
    args = ",".join(str(v) for v in vec)
    if t_mode:
        return f"t({args})"
    if shift == 0:
        return rf"\zeta({args})"
    return rf"\zeta({args}; {shift})"


def _assemble(parts: list[tuple[Fraction, str]], latex: bool) -> str:
    # parts: (coefficient, symbol-text or "" for the constant)
    chunks = []
    for coeff, symbol in parts:
        if not symbol:
            body = _frac_latex(abs(coeff)) if latex else _frac_text(abs(coeff))
        elif abs(coeff) == 1:
            body = symbol
        else:
            num = _frac_latex(abs(coeff)) if latex else _frac_text(abs(coeff))
            body = f"{num}{symbol}" if latex else f"{num}*{symbol}"
        if not chunks:
            chunks.append(body if coeff >= 0 else f"-{body}")
        else:
            chunks.append(f"+ {body}" if coeff >= 0 else f"- {body}")
    return " ".join(chunks) if chunks else "0"


def _closed_form_parts(cf: ClosedForm, t_mode: bool, latex: bool):
    parts = []
    if cf.constant or not cf.terms:
        parts.append((cf.constant, ""))
    for mono, coeff in cf.sorted_terms():
        shown = coeff
        if t_mode:
            shown = coeff * Fraction(2) ** sum(sum(v) for v in mono)
        render_one = _vector_latex if latex else _vector_text
        symbol = "".join(
            render_one(v, cf.shift, t_mode) for v in mono
        ) if latex else "*".join(render_one(v, cf.shift, t_mode) for v in mono)
        parts.append((shown, symbol))
    return parts


def closed_form_to_json(cf: ClosedForm) -> dict:
    return {
        "constant": str(cf.constant),
        "terms": [
            {"factors": [list(v) for v in mono], "coeff": str(coeff)}
            for mono, coeff in cf.sorted_terms()
        ],
        "z": str(cf.shift),
        "m": cf.order,
    }


def closed_form_from_json(data: dict) -> ClosedForm:
    terms = {
        monomial_key(tuple(tuple(int(e) for e in v) for v in t["factors"])): Fraction(
            t["coeff"]
        )
        for t in data["terms"]
    }
    return ClosedForm(Fraction(data["constant"]), terms, Fraction(data["z"]), int(data["m"]))


def render(
    cf: ClosedForm,
    mode: str = "raw",
    output_format: str = "text",
    *,
    table: Optional[ReductionTable] = None,
    report: Optional[VerificationReport] = None,
    echo: Optional[dict] = None,
) -> RenderedIdentity:
    """Render a closed form in the requested display mode and format."""
    if mode not in DISPLAY_MODES:
        raise CliError(f"unknown display mode {mode!r}")
    if output_format not in OUTPUT_FORMATS:
        raise CliError(f"unknown output format {output_format!r}")
    t_mode = mode == "t_values"
    if t_mode and cf.shift != Fraction(-1, 2):
        raise CliError("t_values display requires shift z = -1/2")
    if mode == "reduced":
        cf = apply_reductions(cf, table if table is not None else default_reduction_table())
    echo = dict(echo or {})
    if output_format == "json":
        payload = closed_form_to_json(cf)
        payload["input"] = echo
        if report is not None:
            payload["verification"] = {
                "passed": report.passed,
                "discrepancy": report.discrepancy,
                "n_used": report.n_used,
                "lhs": mp_str(report.lhs_estimate.value),
                "rhs": mp_str(report.rhs_value.value),
                "message": report.message,
            }
        text = json.dumps(payload, sort_keys=True)
        return RenderedIdentity(echo, text, payload, report)
    latex = output_format == "latex"
    body = _assemble(_closed_form_parts(cf, t_mode, latex), latex)
    lines = []
    if echo:
        s_note = f"s={tuple(echo.get('s', ()))}"
        if echo.get("binomial"):
            pk = echo["binomial"]
            s_note += f" (binomial p={pk[0]}, k={pk[1]})"
        lines.append(
            f"series: F = {echo.get('F')}, m = {echo.get('m')}, "
            f"z = {echo.get('z')}, {s_note}"
        )
    lines.append(f"value = {body}")
    if report is not None:
        status = "PASS" if report.passed else "FAIL"
        lines.append(
            f"verify: {status} (N={report.n_used}, "
            f"discrepancy={report.discrepancy:.3e})"
            + (f" {report.message}" if report.message else "")
        )
    return RenderedIdentity(echo, "\n".join(lines), None, report)


def mp_str(value) -> str:
    from mpmath import nstr

    return nstr(value, 25)


def run(request: CliRequest) -> tuple[int, str]:
    """Execute one request: pipeline, optional verification, rendering."""
    cf = closed_form(request.spec).scaled(request.prefactor)
    table = None
    if request.display_mode == "reduced":
        table = (
            load_reduction_table(request.reduction_table_path)
            if request.reduction_table_path
            else default_reduction_table()
        )
    report = None
    if request.verify_n is not None:
        display_cf = apply_reductions(cf, table) if table is not None else cf
        report = verify_identity(
            request.spec,
            display_cf.scaled(Fraction(1) / request.prefactor)
            if request.prefactor != 1
            else display_cf,
            tol=request.tolerance,
            N=request.verify_n,
        )
    rendered = render(
        cf,
        request.display_mode,
        request.output_format,
        table=table,
        report=report,
        echo=request.echo,
    )
    code = 0
    if report is not None and not report.passed:
        code = 1
    return code, rendered.text


def main(argv=None) -> int:
    try:
        requests = parse_request(argv if argv is not None else sys.argv[1:])
    except (CliError, ParseError, DivergentSeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help / bad flags
        return int(exc.code or 0)
    batch = requests if isinstance(requests, list) else [requests]
    worst = 0
    outputs = []
    for req in batch:
        try:
            code, text = run(req)
        except (CliError, DivergentSeriesError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        outputs.append(text)
        worst = max(worst, code)
    print("\n".join(outputs))
    return worst


if __name__ == "__main__":
    sys.exit(main())
