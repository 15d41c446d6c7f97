"""Command-line front end: ``milnor-gamma {psi,matrix,chgamma,verify,oracle,catalog}``.

Every command prints an output document ``{"kind", "payload", ...}``.  JSON
output uses sorted keys and renders numbers as decimal strings with 30
significant digits, so repeated runs are byte-identical.  Exit codes are 0 on
success, 1 when a verification fails and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from . import checks
from .ktheory import ch_gamma, k_basis, k_basis_labels, mir_map
from .lattice import determinant, gram, matrix_to_json, smith_normal_form
from .oracle import ENV_DIGITS, numeric_psi_check
from .periods import catalog_cycles, psi, simple_root_basis, simple_root_labels
from .rootdata import FAMILIES, CatalogError, dual_group_data, normalize_family, singularity_data

NUMERIC_DIGITS = 30
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def render_number(x, digits: int) -> str:
    """30 significant digits; components below the working precision print as 0."""
    x = mpmath.mpf(x)
    if abs(x) < mpmath.mpf(10) ** (-(digits - 5)):
        return "0"
    return mpmath.nstr(x, NUMERIC_DIGITS, strip_zeros=False, min_fixed=-5, max_fixed=NUMERIC_DIGITS)


def render_complex(z, digits: int) -> list[str]:
    z = mpmath.mpc(z)
    scale = max(abs(z), mpmath.mpf(1))
    re = z.real if abs(z.real) > scale * mpmath.mpf(10) ** (-(digits - 5)) else 0
    im = z.imag if abs(z.imag) > scale * mpmath.mpf(10) ** (-(digits - 5)) else 0
    return [render_number(re, digits), render_number(im, digits)]


# ---------------------------------------------------------------------------
# Payload builders
# ---------------------------------------------------------------------------


def _slot_rows(vec, names: Sequence[str], digits: int) -> list[dict]:
    values = vec.values(digits + 10)
    return [
        {
            "slot": i + 1,
            "basis": names[i],
            "coefficient": str(c),
            "coefficient_exact": c.to_json(),
            "gauge": str(g),
            "value": render_complex(v, digits),
        }
        for i, (c, g, v) in enumerate(zip(vec.coeffs, vec.gauges, values))
    ]


def cmd_psi(fam: str, n: int, digits: int) -> dict:
    data = singularity_data(fam, n)
    names = [str(phi) for phi in data.phi_basis]
    rows = []
    for lbl in catalog_cycles(fam, n):
        rows.append({"cycle": str(lbl), "kind": lbl.kind, "k": lbl.k, "a": lbl.a,
                     "slots": _slot_rows(psi(lbl), names, digits)})
    return {"kind": "psi-table", "payload": {"cycles": rows}}


def cmd_matrix(fam: str, n: int, digits: int) -> dict:
    labels = simple_root_labels(fam, n)
    g = gram(simple_root_basis(fam, n))
    diag, _, _ = smith_normal_form(g)
    return {
        "kind": "intersection-matrix",
        "payload": {
            "basis": [str(lbl) for lbl in labels],
            "gram": matrix_to_json(g),
            "determinant": str(determinant(g)),
            "smith": [str(d) for d in diag],
        },
    }


def cmd_chgamma(fam: str, n: int, digits: int) -> dict:
    sectors = [s.label for s in dual_group_data(fam, n).sectors]
    rows = []
    for name, cls in zip(k_basis_labels(fam, n), k_basis(fam, n)):
        rows.append({"class": name, "sectors": _slot_rows(ch_gamma(cls), sectors, digits)})
    return {"kind": "chgamma-table", "payload": {"classes": rows, "mir": mir_map(fam, n).to_json()}}


def cmd_catalog(fam: str, n: int, digits: int) -> dict:
    return {
        "kind": "catalog",
        "payload": {
            "singularity": singularity_data(fam, n).to_json(),
            "dual_group": dual_group_data(fam, n).to_json(),
            "cycles": [str(c) for c in catalog_cycles(fam, n)],
            "simple_roots": [str(c) for c in simple_root_labels(fam, n)],
            "k_basis": k_basis_labels(fam, n),
            "mir": mir_map(fam, n).to_json(),
        },
    }


def cmd_verify(scope: str, family: Optional[str], rank: Optional[int], digits: int) -> dict:
    scopes = checks.SCOPES if scope == "all" else (scope,)
    reports = []
    for sc in scopes:
        for fam, n in checks.targets(sc, family, rank):
            rep = checks.run_scope(sc, fam, n, digits)
            reports.append({"scope": sc, **rep.to_json()})
    passed = all(r["passed"] for r in reports)
    return {"kind": "verification-report", "payload": {"scope": scope, "passed": passed, "reports": reports}}


def cmd_oracle(fam: str, n: int, digits: int, lam: Fraction) -> dict:
    reports = [numeric_psi_check(fam, n, lbl, digits, lam).to_json() for lbl in checks.oracle_labels(fam, n)]
    return {"kind": "oracle-report", "payload": {"lambda": str(lam), "reports": reports}}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _flat_rows(doc: dict) -> tuple[list[str], list[list[str]]]:
    kind, payload = doc["kind"], doc["payload"]
    if kind in ("psi-table", "chgamma-table"):
        key, items = ("cycle", payload["cycles"]) if kind == "psi-table" else ("class", payload["classes"])
        sub = "slots" if kind == "psi-table" else "sectors"
        header = [key, "slot", "basis", "coefficient", "gauge", "re", "im"]
        rows = [
            [item[key], str(s["slot"]), s["basis"], s["coefficient"], s["gauge"], *s["value"]]
            for item in items
            for s in item[sub]
        ]
        return header, rows
    if kind == "intersection-matrix":
        header = [""] + payload["basis"]
        rows = [[lbl] + row for lbl, row in zip(payload["basis"], payload["gram"])]
        rows.append(["determinant", payload["determinant"]])
        rows.append(["smith"] + payload["smith"])
        return header, rows
    if kind == "verification-report":
        header = ["scope", "family", "rank", "check", "passed"]
        rows = [
            [r["scope"], r["family"], str(r["rank"]), c["name"], "pass" if c["passed"] else "FAIL"]
            for r in payload["reports"]
            for c in r["checks"]
        ]
        return header, rows
    if kind == "oracle-report":
        header = ["cycle", "slot", "expected_re", "expected_im", "actual_re", "actual_im", "deviation"]
        rows = [
            [r["label"], str(s["slot"]), *s["expected"], *s["actual"], s["deviation"]]
            for r in payload["reports"]
            for s in r["slots"]
        ]
        return header, rows
    # catalog: a key/value listing
    return ["key", "value"], [[k, json.dumps(v, sort_keys=True)] for k, v in sorted(payload.items())]


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    header, rows = _flat_rows(doc)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            if i < len(widths):
                widths[i] = max(widths[i], len(cell))
            else:
                widths.append(len(cell))
    lines = [f"{doc['kind']}: {doc.get('family', '')}{doc.get('rank', '') if doc.get('family') in ('A', 'D') else ''}"]
    for row in [header] + rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------


def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("lambda must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", type=str.upper, choices=FAMILIES)
    common.add_argument("--rank", type=int)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    common.add_argument("--digits", type=int, help=f"working precision (default ${ENV_DIGITS} or 50)")
    common.add_argument("--out", help="write the document to this path instead of stdout")

    parser = argparse.ArgumentParser(
        prog="milnor-gamma",
        description="Exact period vectors, intersection forms and Gamma-integral structures of ADE singularities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("psi", parents=[common], help="period vectors of all catalog cycles")
    sub.add_parser("matrix", parents=[common], help="Gram matrix of the simple roots")
    sub.add_parser("chgamma", parents=[common], help="ch_Gamma of the K-theory basis")
    sub.add_parser("catalog", parents=[common], help="catalog data of one singularity")
    verify = sub.add_parser("verify", parents=[common], help="run verification scopes")
    verify.add_argument("scope", choices=checks.SCOPES + ("all",))
    oracle = sub.add_parser("oracle", parents=[common], help="numerical period check, slot by slot")
    oracle.add_argument("--lambda", dest="lam", type=_positive_fraction, default=Fraction(1))
    return parser


def _digits(arg: Optional[int]) -> int:
    if arg is not None:
        digits = arg
    else:
        raw = os.environ.get(ENV_DIGITS, "")
        if not raw:
            return 50
        try:
            digits = int(raw)
        except ValueError as exc:
            raise UsageError(f"{ENV_DIGITS} must be an integer, got {raw!r}") from exc
    if digits < NUMERIC_DIGITS:
        raise UsageError(f"precision must be at least {NUMERIC_DIGITS} digits")
    return digits


def run(args: argparse.Namespace) -> tuple[dict, int]:
    digits = _digits(args.digits)
    if args.command == "verify":
        if args.family is None and args.rank is not None:
            raise UsageError("--rank needs --family")
        if args.family is not None:
            normalize_family(args.family, args.rank if args.rank is not None else _default_rank(args.family))
        doc = cmd_verify(args.scope, args.family, args.rank, digits)
        status = EXIT_OK if doc["payload"]["passed"] else EXIT_FAILED
    else:
        if args.family is None:
            raise UsageError("--family is required")
        fam, n = normalize_family(args.family, args.rank)
        if args.command == "oracle":
            doc = cmd_oracle(fam, n, digits, args.lam)
            status = EXIT_OK if all(float(r["max_deviation"]) < 1e-10 for r in doc["payload"]["reports"]) else EXIT_FAILED
        else:
            builder = {"psi": cmd_psi, "matrix": cmd_matrix, "chgamma": cmd_chgamma, "catalog": cmd_catalog}
            doc = builder[args.command](fam, n, digits)
            status = EXIT_OK
        doc["family"], doc["rank"] = fam, n
    doc["digits"] = digits
    return doc, status


def _default_rank(family: str) -> Optional[int]:
    # a bare --family A/D selects the default rank range; validate with its first member
    return {"A": 1, "D": 4}.get(family.upper())


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        doc, status = run(args)
    except (UsageError, CatalogError) as exc:
        print(f"milnor-gamma: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
