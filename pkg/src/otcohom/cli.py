"""Command-line front end: config parsing, presets, pipeline orchestration,
and deterministic table/JSON emission.

Exit codes: 0 success, 1 mathematical/internal error, 2 configuration
error, 3 precision exhausted or admissibility undecided.  Every error
leaves a machine-readable record on stderr; reports go to stdout and are
byte-identical across runs for identical configs.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import cealgebra, cohomology
from .errors import ConfigError, OtcohomError, PrecisionError
from .numfield import PRECISION_CAP, PRECISION_DEFAULT, parse_field
from .otdata import build_ot_structure
from .presets import get_preset, preset_records

_COMPUTE_ALL = ("betti", "hodge", "bottchern", "checks")
_CONFIG_KEYS = {
    "field",
    "units",
    "integral_basis",
    "precision_bits",
    "precision_cap",
    "rank_exponent",
    "compute",
    "output",
    "preset",
}


@dataclass
class RunConfig:
    field_coeffs: tuple | None = None
    units: tuple = ()
    integral_basis: tuple | None = None
    precision_bits: int = PRECISION_DEFAULT
    precision_cap: int = PRECISION_CAP
    rank_exponent: int = 40
    compute: tuple = _COMPUTE_ALL
    output: str = "table"
    preset: str | None = None
    expected: dict = dc_field(default_factory=dict)


def _as_int(value, what: str) -> int:
    if isinstance(value, bool):
        raise ConfigError(f"{what} must be an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip(), 10)
        except ValueError:
            raise ConfigError(f"{what} is not an integer: {value!r}") from None
    raise ConfigError(f"{what} must be an integer, got {type(value).__name__}")


def _as_fraction(value, what: str) -> Fraction:
    if isinstance(value, bool):
        raise ConfigError(f"{what} must be a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{what} is not a rational: {value!r}") from None
    raise ConfigError(f"{what} must be a rational, got {type(value).__name__}")


def parse_config(doc) -> RunConfig:
    """Validate a config document into a RunConfig.

    preset and explicit field/units are mutually exclusive; integer
    values may arrive as strings (exactness over JSON number limits).
    """
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    cfg = RunConfig()
    preset_name = doc.get("preset")
    if preset_name is not None:
        if not isinstance(preset_name, str):
            raise ConfigError("preset must be a string")
        if "field" in doc or "units" in doc:
            raise ConfigError("preset and explicit field/units are mutually exclusive")
        p = get_preset(preset_name)
        cfg.preset = p.name
        cfg.field_coeffs = p.field_coeffs
        cfg.units = p.units
        cfg.expected = p.expected
    else:
        fld = doc.get("field")
        if fld is None:
            raise ConfigError("config needs either a preset or a field")
        if not isinstance(fld, dict) or set(fld) != {"polynomial"}:
            raise ConfigError('field must be an object {"polynomial": [...]}')
        poly = fld["polynomial"]
        if not isinstance(poly, list) or not poly:
            raise ConfigError("field.polynomial must be a nonempty list")
        cfg.field_coeffs = tuple(
            _as_int(c, f"field.polynomial[{i}]") for i, c in enumerate(poly)
        )
        units = doc.get("units")
        if not isinstance(units, list) or not units:
            raise ConfigError("units must be a nonempty list of coordinate vectors")
        parsed_units = []
        for i, u in enumerate(units):
            if not isinstance(u, list) or not u:
                raise ConfigError(f"units[{i}] must be a nonempty list")
            parsed_units.append(
                tuple(_as_int(c, f"units[{i}][{j}]") for j, c in enumerate(u))
            )
        cfg.units = tuple(parsed_units)
    basis = doc.get("integral_basis")
    if basis is not None:
        if not isinstance(basis, list) or not basis:
            raise ConfigError("integral_basis must be a nonempty matrix")
        rows = []
        for i, row in enumerate(basis):
            if not isinstance(row, list) or not row:
                raise ConfigError(f"integral_basis[{i}] must be a nonempty list")
            rows.append(
                tuple(
                    _as_fraction(v, f"integral_basis[{i}][{j}]")
                    for j, v in enumerate(row)
                )
            )
        cfg.integral_basis = tuple(rows)
    if "precision_bits" in doc:
        cfg.precision_bits = _as_int(doc["precision_bits"], "precision_bits")
        if cfg.precision_bits < 4:
            raise ConfigError("precision_bits must be at least 4")
        cfg.precision_cap = max(cfg.precision_bits, cfg.precision_cap)
    if "precision_cap" in doc:
        cfg.precision_cap = _as_int(doc["precision_cap"], "precision_cap")
        if cfg.precision_cap < cfg.precision_bits:
            raise ConfigError("precision_cap must be >= precision_bits")
    if "rank_exponent" in doc:
        cfg.rank_exponent = _as_int(doc["rank_exponent"], "rank_exponent")
        if not 4 <= cfg.rank_exponent <= 52:
            raise ConfigError("rank_exponent must lie in [4, 52]")
    if "compute" in doc:
        req = doc["compute"]
        if not isinstance(req, list) or not req:
            raise ConfigError("compute must be a nonempty list")
        bad = [x for x in req if x not in _COMPUTE_ALL]
        if bad:
            raise ConfigError(f"unknown compute targets: {', '.join(map(str, bad))}")
        cfg.compute = tuple(x for x in _COMPUTE_ALL if x in req)
    if "output" in doc:
        out = doc["output"]
        if out not in ("table", "json"):
            raise ConfigError('output must be "table" or "json"')
        cfg.output = out
    return cfg


def load_config(args) -> RunConfig:
    """Build the effective RunConfig from --config/--preset plus flag
    overrides (flags win over file fields)."""
    if args.config is not None and args.preset is not None:
        raise ConfigError("--config and --preset are mutually exclusive")
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        cfg = parse_config(doc)
    elif args.preset is not None:
        cfg = parse_config({"preset": args.preset})
    else:
        raise ConfigError("need --config or --preset")
    if getattr(args, "precision", None) is not None:
        cfg.precision_bits = _as_int(args.precision, "--precision")
        if cfg.precision_bits < 4:
            raise ConfigError("--precision must be at least 4")
        cfg.precision_cap = max(cfg.precision_bits, cfg.precision_cap)
    if getattr(args, "format", None) is not None:
        cfg.output = args.format
    return cfg


def _build_structure(cfg: RunConfig):
    field = parse_field(cfg.field_coeffs)
    return build_ot_structure(
        field,
        cfg.units,
        precision_bits=cfg.precision_bits,
        precision_cap=cfg.precision_cap,
        integral_basis=cfg.integral_basis,
    )


# --- emission ----------------------------------------------------------------

def canonical_json(obj) -> str:
    """The one serialization used everywhere; loads() then canonical_json()
    reproduces the bytes exactly."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return " ".join(_fmt_value(x) for x in v)
    return str(v)


def format_report_table(report: cohomology.CohomologyReport) -> str:
    """Fixed text layout: grids with p as columns, q as rows, top degree
    in the last row; checks sorted by name."""
    n = report.s + report.t
    lines = [f"s: {report.s}", f"t: {report.t}"]
    if report.betti is not None:
        lines.append("betti: " + " ".join(str(v) for v in report.betti))
    if report.hodge is not None:
        lines.append("hodge (p columns, q rows):")
        for q in range(n + 1):
            lines.append("  " + " ".join(str(report.hodge[p][q]) for p in range(n + 1)))
    if report.bott_chern is not None:
        lines.append("bott_chern (p columns, q rows):")
        for q in range(n + 1):
            lines.append(
                "  " + " ".join(str(report.bott_chern.get((p, q), 0)) for p in range(n + 1))
            )
    if report.checks:
        lines.append("checks:")
        for k in sorted(report.checks):
            lines.append(f"  {k}: {_fmt_value(report.checks[k])}")
    return "\n".join(lines) + "\n"


# --- subcommands -------------------------------------------------------------

def cmd_compute(args) -> int:
    cfg = load_config(args)
    ot = _build_structure(cfg)
    report = cohomology.build_report(ot, compute=cfg.compute, rank_exponent=cfg.rank_exponent)
    if cfg.output == "json":
        sys.stdout.write(canonical_json(report.to_json_dict()))
    else:
        sys.stdout.write(format_report_table(report))
    return 0


def _verify_checks(cfg: RunConfig, ot) -> list[tuple[str, Exception | None]]:
    """Run the verification suite; each entry is (name, None | failure)."""
    rank_tol = 2.0 ** -cfg.rank_exponent
    results: list[tuple[str, Exception | None]] = []

    def run(name, fn):
        try:
            ok = fn()
        except Exception as exc:  # recorded per check, classified at exit
            results.append((name, exc))
            return
        if ok is False:
            results.append((name, OtcohomError("check returned false")))
        else:
            results.append((name, None))

    def d_squared():
        return all(
            cealgebra.d_squared_scan(alg)
            for alg in cealgebra._algebras_for(ot, "both", rank_tol)
        )

    def backend_agreement():
        n = ot.s + ot.t
        for p in range(n + 1):
            for q in range(n + 1):
                cealgebra.cohomology_dim(ot, "dolbeault", (p, q), "both", rank_tol)
                cealgebra.cohomology_dim(ot, "bottchern", (p, q), "both", rank_tol)
        return True

    def branch_invariance():
        field = parse_field(cfg.field_coeffs)
        shifts = tuple(tuple(1 for _ in range(ot.t)) for _ in range(ot.s))
        ot2 = build_ot_structure(
            field,
            cfg.units,
            precision_bits=cfg.precision_bits,
            precision_cap=cfg.precision_cap,
            integral_basis=cfg.integral_basis,
            branch_shifts=shifts,
        )
        same_triples = sorted(cohomology.admissible_triples(ot)) == sorted(
            cohomology.admissible_triples(ot2)
        )
        return same_triples and cohomology.betti_numbers(ot) == cohomology.betti_numbers(ot2)

    def duality():
        n = ot.s + ot.t
        h = cohomology.hodge_numbers(ot)
        b = cohomology.betti_numbers(ot)
        star = all(
            h[p][q] == h[n - p][n - q] for p in range(n + 1) for q in range(n + 1)
        )
        poincare = all(b[k] == b[2 * n - k] for k in range(2 * n + 1))
        return star and poincare

    def frolicher():
        return cohomology.frolicher_check(ot)["equality_holds"]

    def golden():
        exp = cfg.expected
        report = cohomology.build_report(ot, rank_exponent=cfg.rank_exponent)
        if report.betti != exp["betti"] or report.hodge != exp["hodge"]:
            return False
        if report.bott_chern != exp["bott_chern"]:
            return False
        checks = report.checks
        return (
            checks["at_deficiency"] == exp["at_deficiency"]
            and checks["at_failure_set"] == exp["at_failure_set"]
            and checks["bc_rank_matches_closed_form"]
            == exp["bc_rank_matches_closed_form"]
        )

    run("d_squared", d_squared)
    run("star_closure", lambda: cohomology.star_closure_check(ot))
    run("formality", lambda: cohomology.formality_check(ot))
    run("frolicher", frolicher)
    run("backend_agreement", backend_agreement)
    run("branch_invariance", branch_invariance)
    run("duality", duality)
    if cfg.expected:
        run("golden_tables", golden)
    return results


def cmd_verify(args) -> int:
    cfg = load_config(args)
    ot = _build_structure(cfg)
    results = _verify_checks(cfg, ot)
    if cfg.output == "json":
        doc = {
            "checks": {
                name: ("pass" if exc is None else f"fail: {type(exc).__name__}: {exc}")
                for name, exc in results
            },
            "ok": all(exc is None for _, exc in results),
        }
        sys.stdout.write(canonical_json(doc))
    else:
        for name, exc in results:
            if exc is None:
                sys.stdout.write(f"check {name}: pass\n")
            else:
                sys.stdout.write(f"check {name}: FAIL ({type(exc).__name__}: {exc})\n")
        ok = all(exc is None for _, exc in results)
        sys.stdout.write("result: all checks passed\n" if ok else "result: FAILURES\n")
    failures = [exc for _, exc in results if exc is not None]
    if not failures:
        return 0
    if any(isinstance(exc, PrecisionError) for exc in failures):
        return 3
    return 1


def cmd_presets(args) -> int:
    records = preset_records()
    if getattr(args, "format", None) == "json":
        sys.stdout.write(canonical_json(records))
    else:
        for r in records:
            poly = " ".join(str(c) for c in r["polynomial"])
            sys.stdout.write(
                f"{r['name']}  (s={r['s']}, t={r['t']})  polynomial: {poly}\n"
            )
    return 0


# --- entry point -------------------------------------------------------------

def _error_record(exc: Exception, code: int) -> dict:
    pkg_dir = os.path.dirname(os.path.abspath(__file__))
    module = "cli"
    operation = "main"
    tb = exc.__traceback__
    while tb is not None:
        frame_file = os.path.abspath(tb.tb_frame.f_code.co_filename)
        if os.path.dirname(frame_file) == pkg_dir:
            module = os.path.splitext(os.path.basename(frame_file))[0]
            operation = tb.tb_frame.f_code.co_name
        tb = tb.tb_next
    return {
        "error": type(exc).__name__,
        "message": str(exc),
        "module": module,
        "operation": operation,
        "exit_code": code,
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otcohom",
        description="Exact cohomology tables for complex manifolds built "
        "from number-field data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("compute", cmd_compute), ("verify", cmd_verify)):
        sp = sub.add_parser(name)
        sel = sp.add_mutually_exclusive_group(required=True)
        sel.add_argument("--config", help="path to a JSON config file")
        sel.add_argument("--preset", help="named preset")
        sp.add_argument("--format", choices=("table", "json"))
        sp.add_argument("--precision", type=int, metavar="BITS")
        sp.set_defaults(fn=fn)
    sp = sub.add_parser("presets")
    sp.add_argument("--format", choices=("table", "json"))
    sp.set_defaults(fn=cmd_presets)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except OtcohomError as exc:
        if isinstance(exc, ConfigError):
            code = 2
        elif isinstance(exc, PrecisionError):
            code = 3
        else:
            code = 1
        sys.stderr.write(canonical_json(_error_record(exc, code)))
        return code


if __name__ == "__main__":
    sys.exit(main())
