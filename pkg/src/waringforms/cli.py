"""Command-line front end.

Subcommands: rank, decompose, verify, apolar, oracle, experiment.  All
take a form as a positional argument or one form per line through
--file; verify and apolar take a second positional argument (the
candidate decomposition / the operator).  Output is human-readable text
by default, one stable JSON document per input with --json.

Exit codes: 0 success, 2 parse error, 3 zero form, 4 numeric or oracle
search failure, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import random
import sys

from .apolarity import oracle_report
from .errors import (NumericError, OracleSearchError, ParseError,
                     VerificationError, ZeroFormError)
from .forms import BinaryForm, apply_operator
from .linalg import DEFAULT_TOL
from .parser import (format_decomposition, format_form, format_operator,
                     parse_decomposition, parse_form, parse_operator)
from .scalars import is_exact
from .waring import (AboveD, enumerate_decompositions, verify, waring_rank)

EXIT_PARSE = 2
EXIT_ZERO_FORM = 3
EXIT_NUMERIC = 4
EXIT_VERIFICATION = 5


def _scalar_json(v) -> dict:
    """Complex scalar as {re, im} decimal strings; exact parts render as
    p/q so nothing is rounded on the way out."""
    if is_exact(v):
        return {"re": str(v.re), "im": str(v.im)}
    z = complex(v)
    return {"re": repr(z.real), "im": repr(z.imag)}


def _rank_json(v):
    return "AboveD" if isinstance(v, AboveD) else v


def _certificate_json(cert):
    if cert is None:
        return None
    out = {
        "r": cert.rank,
        "c": [_scalar_json(c) for c in cert.c_vector],
        "certainty": "exact" if cert.certified else "probabilistic",
    }
    if not cert.certified:
        out["failureBound"] = repr(cert.failure_bound)
    return out


def _decomposition_json(dec, residual: float) -> dict:
    return {
        "terms": [{"lambda": _scalar_json(t.weight),
                   "p": _scalar_json(t.x_coef),
                   "q": _scalar_json(t.y_coef)} for t in dec.terms],
        "residual": residual,
    }


def _report_json(text, f, cfg, report, decs) -> dict:
    return {
        "input": text,
        "degree": f.degree,
        "mode": cfg.mode,
        "fRank": _rank_json(report.f_rank),
        "fxRank": report.fx_rank,
        "waringRank": report.waring_rank,
        "branch": report.branch,
        "uniqueMinimal": report.unique_minimal,
        "decompositions": decs,
        "certificate": _certificate_json(report.certificate),
        "seed": cfg.seed,
    }


def _rank_text(report) -> list:
    lines = [f"fRank: {_rank_json(report.f_rank)}",
             f"fxRank: {report.fx_rank}",
             f"waringRank: {report.waring_rank}",
             f"branch: {report.branch}",
             f"uniqueMinimal: {str(report.unique_minimal).lower()}"]
    cert = report.certificate
    if cert is not None:
        certainty = "exact" if cert.certified else \
            f"probabilistic (failure bound {cert.failure_bound!r})"
        c_text = ", ".join(_scalar_text(c) for c in cert.c_vector)
        lines.append(f"certificate: r={cert.rank}, c=({c_text}), "
                     f"certainty={certainty}")
    return lines


def _scalar_text(v) -> str:
    part = _scalar_json(v)
    if part["im"] in ("0", "0.0"):
        return part["re"]
    return f"({part['re']} + {part['im']}i)"


def _parse_one(text: str, cfg) -> BinaryForm:
    f = parse_form(text, exact=(cfg.mode == "exact"))
    return f


def cmd_rank(text: str, cfg, out) -> int:
    f = _parse_one(text, cfg)
    report = waring_rank(f, seed=cfg.seed)
    if cfg.json:
        out.write(json.dumps(_report_json(text, f, cfg, report, []),
                             indent=2) + "\n")
    else:
        out.write(f"form: {format_form(f)}\n")
        out.write(f"degree: {f.degree}\n")
        for line in _rank_text(report):
            out.write(line + "\n")
    return 0


def cmd_decompose(text: str, cfg, out) -> int:
    f = _parse_one(text, cfg)
    report = waring_rank(f, seed=cfg.seed)
    decs = enumerate_decompositions(f, max(1, cfg.count), seed=cfg.seed)
    checked = []
    for dec in decs:
        result = verify(f, dec, tol=cfg.tol, seed=cfg.seed)
        if not result.passed:
            raise VerificationError(
                f"constructed decomposition failed verification "
                f"(residual {result.max_residual:.3e}, "
                f"length_ok={result.length_ok})")
        checked.append((dec, result))
    if cfg.json:
        doc = _report_json(text, f, cfg, report,
                           [_decomposition_json(d, r.max_residual)
                            for d, r in checked])
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"form: {format_form(f)}\n")
        out.write(f"waringRank: {report.waring_rank}\n")
        for k, (dec, result) in enumerate(checked, start=1):
            out.write(f"decomposition {k}: {format_decomposition(dec)}\n")
            out.write(f"  residual: {result.max_residual!r}\n")
    return 0


def cmd_verify(form_text: str, dec_text: str, cfg, out) -> int:
    f = _parse_one(form_text, cfg)
    dec = parse_decomposition(dec_text, exact=(cfg.mode == "exact"))
    result = verify(f, dec, tol=cfg.tol, seed=cfg.seed)
    if cfg.json:
        doc = {
            "input": form_text,
            "decomposition": dec_text,
            "degree": f.degree,
            "mode": cfg.mode,
            "maxResidual": result.max_residual,
            "apolarityResidual": result.apolarity_residual,
            "lengthOk": result.length_ok,
            "passed": result.passed,
            "seed": cfg.seed,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"form: {format_form(f)}\n")
        out.write(f"decomposition: {format_decomposition(dec)}\n")
        out.write(f"maxResidual: {result.max_residual!r}\n")
        out.write(f"apolarityResidual: {result.apolarity_residual!r}\n")
        out.write(f"lengthOk: {str(result.length_ok).lower()}\n")
        out.write(f"passed: {str(result.passed).lower()}\n")
    if not result.passed:
        raise VerificationError("decomposition does not verify against "
                                "the form")
    return 0


def cmd_apolar(form_text: str, op_text: str, cfg, out) -> int:
    f = _parse_one(form_text, cfg)
    g = parse_operator(op_text, exact=(cfg.mode == "exact"))
    if g.degree > f.degree:
        raise ParseError(f"operator order {g.degree} exceeds form degree "
                         f"{f.degree}", 0)
    image = apply_operator(g, f)
    if cfg.json:
        doc = {
            "input": form_text,
            "operator": op_text,
            "degree": f.degree,
            "mode": cfg.mode,
            "image": format_form(image),
            "isZero": image.is_zero,
        }
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"form: {format_form(f)}\n")
        out.write(f"operator: {format_operator(g)}\n")
        out.write(f"image: {format_form(image)}\n")
        out.write(f"isZero: {str(image.is_zero).lower()}\n")
    return 0


def cmd_oracle(text: str, cfg, out) -> int:
    f = _parse_one(text, cfg)
    report = oracle_report(f, seed=cfg.seed)
    certainty = "exact" if report.certified else "probabilistic"
    if cfg.json:
        doc = {
            "input": text,
            "degree": f.degree,
            "mode": cfg.mode,
            "oracleRank": report.rank,
            "certainty": certainty,
            "witness": format_operator(report.witness),
            "seed": cfg.seed,
        }
        if not report.certified:
            doc["failureBound"] = repr(report.failure_bound)
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(f"form: {format_form(f)}\n")
        out.write(f"oracleRank: {report.rank}\n")
        out.write(f"witness: {format_operator(report.witness)}\n")
        out.write(f"certainty: {certainty}\n")
    return 0


def _sample_form(degree: int, bound: int, rng, exact: bool):
    while True:
        m = [rng.randint(-bound, bound) for _ in range(degree + 1)]
        if any(m):
            return BinaryForm.from_monomial(degree, m, exact=exact), m


def cmd_experiment(cfg, out) -> int:
    d = cfg.degree
    if d is None or d < 1:
        raise ParseError("experiment needs --degree >= 1", 0)
    if cfg.samples < 1 or cfg.range < 1:
        raise ParseError("experiment needs --samples >= 1 and --range >= 1",
                         0)
    expected = d // 2 + 1
    histogram = {}
    mismatches = []
    uniqueness_failures = []
    rows = []
    for i in range(cfg.samples):
        stream = f"{cfg.seed}:sample:{i}"
        rng = random.Random(stream)
        f, sampled = _sample_form(d, cfg.range, rng, cfg.mode == "exact")
        report = waring_rank(f, seed=stream)
        rank = report.waring_rank
        histogram[rank] = histogram.get(rank, 0) + 1
        want = 3 if d % 2 == 0 and rank == expected else 1
        decs = enumerate_decompositions(f, want, seed=stream)
        if len(decs) < want:
            uniqueness_failures.append(i)
        residual = max(verify(f, dec, tol=cfg.tol, seed=stream).max_residual
                       for dec in decs)
        oracle_rank_value = ""
        if i < cfg.oracle_subsample:
            oracle_rank_value = oracle_report(f, seed=stream).rank
            if oracle_rank_value != rank:
                mismatches.append(i)
        coeff_text = " ".join(str(v) for v in sampled)
        rows.append([i, coeff_text, _rank_json(report.f_rank),
                     report.fx_rank, rank, oracle_rank_value, len(decs),
                     repr(residual)])
    if cfg.csv:
        target = sys.stdout if cfg.csv == "-" else open(cfg.csv, "w",
                                                        newline="")
        writer = csv.writer(target)
        writer.writerow(["sampleIndex", "coefficients", "fRank", "fxRank",
                         "waringRank", "oracleRank", "decompositionCount",
                         "maxResidual"])
        writer.writerows(rows)
        if target is not sys.stdout:
            target.close()
    summary = {
        "degree": d,
        "samples": cfg.samples,
        "range": cfg.range,
        "seed": cfg.seed,
        "mode": cfg.mode,
        "expectedGenericRank": expected,
        "rankHistogram": {str(k): histogram[k] for k in sorted(histogram)},
        "oracleChecked": min(cfg.oracle_subsample, cfg.samples),
        "mismatches": mismatches,
        "uniquenessFailures": uniqueness_failures,
    }
    if cfg.json:
        out.write(json.dumps(summary, indent=2) + "\n")
    else:
        out.write(f"degree: {d}, samples: {cfg.samples}, "
                  f"range: [-{cfg.range}, {cfg.range}], seed: {cfg.seed}\n")
        out.write(f"expected generic rank: {expected}\n")
        for rank in sorted(histogram):
            out.write(f"  rank {rank}: {histogram[rank]}\n")
        out.write(f"oracle checked: {summary['oracleChecked']}, "
                  f"mismatches: {len(mismatches)}\n")
        out.write(f"uniqueness failures: {len(uniqueness_failures)}\n")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="waringforms",
        description="Waring ranks and minimal power-sum decompositions of "
                    "complex binary forms.")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, form_arg=True):
        if form_arg:
            p.add_argument("form", nargs="?", help="form text, e.g. "
                           "'3x^3-3x^2y+9xy^2-y^3'")
            p.add_argument("--file", help="read one form per line")
        p.add_argument("--mode", choices=("exact", "float"), default="exact")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol", type=float, default=DEFAULT_TOL)
        p.add_argument("--json", action="store_true")

    common(sub.add_parser("rank", help="compute F-ranks and the Waring "
                          "rank"))
    p = sub.add_parser("decompose", help="construct minimal decompositions")
    common(p)
    p.add_argument("--count", type=int, default=1,
                   help="how many distinct decompositions to attempt")

    p = sub.add_parser("verify", help="check a decomposition against a form")
    p.add_argument("form")
    p.add_argument("decomposition")
    common(p, form_arg=False)

    p = sub.add_parser("apolar", help="apply a differential operator")
    p.add_argument("form")
    p.add_argument("operator", help="operator text over dx, dy, e.g. "
                   "'dy^2-dx^2'")
    common(p, form_arg=False)

    common(sub.add_parser("oracle", help="independent rank oracle"))

    p = sub.add_parser("experiment", help="random sampling experiment")
    common(p, form_arg=False)
    p.add_argument("--degree", type=int)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--range", type=int, default=9)
    p.add_argument("--oracle-subsample", type=int, default=0,
                   dest="oracle_subsample")
    p.add_argument("--csv", help="write per-sample rows to this path "
                   "('-' for stdout)")
    return top


def _input_forms(cfg) -> list:
    if getattr(cfg, "file", None):
        with open(cfg.file) as handle:
            lines = [line.strip() for line in handle]
        forms = [line for line in lines if line]
        if not forms:
            raise ParseError(f"no forms found in {cfg.file}", 0)
        return forms
    if getattr(cfg, "form", None) is None:
        raise ParseError("no form given: pass one as an argument or use "
                         "--file", 0)
    return [cfg.form]


def main(argv=None) -> int:
    cfg = _build_parser().parse_args(argv)
    out = sys.stdout
    try:
        if cfg.command == "experiment":
            return cmd_experiment(cfg, out)
        if cfg.command == "verify":
            return cmd_verify(cfg.form, cfg.decomposition, cfg, out)
        if cfg.command == "apolar":
            return cmd_apolar(cfg.form, cfg.operator, cfg, out)
        runner = {"rank": cmd_rank, "decompose": cmd_decompose,
                  "oracle": cmd_oracle}[cfg.command]
        for text in _input_forms(cfg):
            code = runner(text, cfg, out)
            if code:
                return code
        return 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ZeroFormError as exc:
        print(f"zero form: {exc}", file=sys.stderr)
        return EXIT_ZERO_FORM
    except (NumericError, OracleSearchError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION


if __name__ == "__main__":
    sys.exit(main())
