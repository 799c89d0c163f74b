"""Command-line interface: ``bvmcor <command> [options]``.

Exit codes: 0 success, 2 usage or parameter error, 3 series or quadrature
non-convergence, 4 I/O failure, 5 oracle mismatch.

Every run writes one JSON manifest.  With ``--out PATH`` it goes to
``PATH.manifest.json``; when the main output goes to standard output the
manifest is written as a single JSON line on standard error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .estimation import mc_validate, sample_circular_variance, sample_rho_fl, sample_rho_js
from .exceptions import (
    DegenerateDataError,
    DegenerateDistributionError,
    EnvelopeError,
    QuadratureError,
    SeriesConvergenceError,
)
from .moments import correlation_report, normal_approx_rho
from .params import Family, ModelParams, SeriesControl
from .quadrature import GridSpec, compare_with_series
from .sampling import Method, SamplerConfig, density_grid, read_sample_csv, sample_bivariate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4
EXIT_ORACLE = 5

ORACLE_PASS_TOL = 1e-8
ORACLE_FAIL_TOL = 1e-6
ORACLE_MAX_KAPPA = 50.0

TABLE_KAPPAS = (1.0, 0.1, 10.0)
TABLE_COLUMNS = ("kappa1", "kappa2", "assoc", "rho_approx", "rho_js", "rho_fl", "var_theta")


class _Fail(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def table_params(family):
    """The 12 parameter sets of the reference grid, in table order."""
    family = Family(family)
    out = []
    for k in TABLE_KAPPAS:
        for assoc in (k / 2, -k / 2, 2 * k, -2 * k):
            out.append(ModelParams(family, k, k, assoc))
    return out


def fmt_sig(x, digits=2):
    """``x`` rounded to ``digits`` significant figures, trailing zeros kept."""
    if x is None:
        return "NA"
    s = format(x, f"#.{digits}g")
    if "e" in s:
        mant, exp = s.split("e")
        return f"{mant.rstrip('.')}e{int(exp)}"
    return s.rstrip(".")


def _num(x):
    return "NA" if x is None else f"{x:.17g}"


# --- argument handling ------------------------------------------------------


def _add_params(p, needs_params=True):
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    if needs_params:
        p.add_argument("--k1", type=float, required=True, help="kappa1")
        p.add_argument("--k2", type=float, required=True, help="kappa2")
        p.add_argument("--assoc", type=float, required=True, help="lambda (sine) or kappa3 (cosine)")
        p.add_argument("--mu1", type=float, default=0.0)
        p.add_argument("--mu2", type=float, default=0.0)
        p.add_argument("--degrees", action="store_true", help="read --mu1/--mu2 in degrees")
    p.add_argument("--rel-tol", type=float, default=SeriesControl.rel_tol)
    p.add_argument("--max-terms", type=int, default=SeriesControl.max_terms)
    p.add_argument("--out", type=Path, help="output file (default: standard output)")


def _add_sampler(p, default_seed=0):
    p.add_argument("--seed", type=int, default=default_seed)
    p.add_argument("--method", choices=[m.value for m in Method], default=Method.GIBBS.value)
    p.add_argument("--burn-in", type=int, default=SamplerConfig.burn_in)
    p.add_argument("--thin", type=int, default=SamplerConfig.thin)
    p.add_argument("--no-reflect", action="store_true", help="disable the mode-swapping reflection move")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bvmcor",
        description="Circular correlations of bivariate von Mises sine and cosine models.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="analytic correlations and variances as JSON")
    _add_params(p)

    p = sub.add_parser("table", help="analytic columns of the 12-row reference grid as CSV")
    _add_params(p, needs_params=False)
    p.add_argument("--pretty", action="store_true", help="two significant figures")

    p = sub.add_parser("sample", help="draw angle pairs to CSV")
    _add_params(p)
    _add_sampler(p)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("mc-validate", help="replicated estimates against analytic values as CSV")
    _add_params(p)
    _add_sampler(p)
    p.add_argument("--n", type=int, default=10000, help="sample size per replicate")
    p.add_argument("--replicates", type=int, default=100)

    p = sub.add_parser("density-grid", help="normalized density on a uniform grid as CSV")
    _add_params(p)
    p.add_argument("--resolution", type=int, default=256)

    p = sub.add_parser("oracle-check", help="series versus torus quadrature as JSON")
    _add_params(p)

    p = sub.add_parser("estimate", help="sample statistics of a theta,phi CSV as JSON")
    p.add_argument("--in", dest="infile", type=Path, required=True)
    p.add_argument("--out", type=Path)
    return parser


def _params(args):
    mu1, mu2 = args.mu1, args.mu2
    if args.degrees:
        mu1, mu2 = math.radians(mu1), math.radians(mu2)
    return ModelParams(Family(args.family), args.k1, args.k2, args.assoc, mu1, mu2)


def _control(args):
    return SeriesControl(rel_tol=args.rel_tol, max_terms=args.max_terms)


def _sampler(args):
    return SamplerConfig(
        seed=args.seed,
        method=Method(args.method),
        burn_in=args.burn_in,
        thin=args.thin,
        reflect=not args.no_reflect,
    )


# --- commands ---------------------------------------------------------------


def cmd_report(args):
    params, control = _params(args), _control(args)
    report = correlation_report(params, control)
    payload = report.to_dict()
    payload["params"] = params.to_dict()
    text = json.dumps(payload, indent=2) + "\n"
    return text, {"params": params.to_dict(), "control": control.to_dict()}


def table_rows(family, control=SeriesControl()):
    rows = []
    for params in table_params(family):
        rep = correlation_report(params, control)
        rows.append((params.kappa1, params.kappa2, params.assoc,
                     normal_approx_rho(params).value, rep.rho_js, rep.rho_fl, rep.var_t))
    return rows


def cmd_table(args):
    control = _control(args)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for row in table_rows(args.family, control):
        if args.pretty:
            w.writerow([f"{row[0]:g}", f"{row[1]:g}", f"{row[2]:g}"] + [fmt_sig(x) for x in row[3:]])
        else:
            w.writerow([_num(x) for x in row])
    return buf.getvalue(), {"family": args.family, "control": control.to_dict()}


def cmd_sample(args):
    params, config = _params(args), _sampler(args)
    if args.n < 1:
        raise _Fail(EXIT_USAGE, "--n must be at least 1")
    sample = sample_bivariate(params, args.n, config)
    buf = io.StringIO()
    buf.write("theta,phi\n")
    for t, p in zip(sample.theta, sample.phi):
        buf.write(f"{t:.17g},{p:.17g}\n")
    meta = {"params": params.to_dict(), "control": _control(args).to_dict(), "sampler": config.to_dict(), "n": args.n}
    if config.method is Method.REJECTION:
        meta["accepted"] = int(sample.accepted)
        meta["proposed"] = int(sample.proposed)
    return buf.getvalue(), meta


def cmd_mc_validate(args):
    params, config, control = _params(args), _sampler(args), _control(args)
    rows = mc_validate(params, args.n, args.replicates, args.seed, config, control)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["quantity", "analytic", "estimate_mean", "estimate_se", "replicates", "sample_size", "z_score"])
    for r in rows:
        w.writerow([r.quantity.value, _num(r.analytic), _num(r.estimate_mean), _num(r.estimate_se),
                    r.replicates, r.sample_size, _num(r.z_score)])
    meta = {"params": params.to_dict(), "control": control.to_dict(), "sampler": config.to_dict(),
            "sample_size": args.n, "replicates": args.replicates,
            "se_convention": "standard deviation of single-replicate estimates (ddof=1)"}
    return buf.getvalue(), meta


def cmd_density_grid(args):
    params, control = _params(args), _control(args)
    if args.resolution < 8:
        raise _Fail(EXIT_USAGE, "--resolution must be at least 8")
    t, dens = density_grid(params, args.resolution, control)
    buf = io.StringIO()
    buf.write("theta,phi,density\n")
    for i, ti in enumerate(t):
        for j, pj in enumerate(t):
            buf.write(f"{ti:.17g},{pj:.17g},{dens[i, j]:.17g}\n")
    cell = (2.0 * math.pi / args.resolution) ** 2
    meta = {"params": params.to_dict(), "control": control.to_dict(), "resolution": args.resolution,
            "grid_mass": float(dens.sum() * cell)}
    return buf.getvalue(), meta


def cmd_oracle_check(args):
    params, control = _params(args), _control(args)
    if max(params.kappa1, params.kappa2, abs(params.assoc)) > ORACLE_MAX_KAPPA:
        raise _Fail(EXIT_USAGE, f"oracle-check needs every concentration <= {ORACLE_MAX_KAPPA:g}")
    disc = compare_with_series(params, GridSpec(), control)
    worst = max(disc.values())
    payload = {
        "params": params.to_dict(),
        "discrepancies": disc,
        "max_discrepancy": worst,
        "pass": worst <= ORACLE_PASS_TOL,
        "pass_tolerance": ORACLE_PASS_TOL,
        "fail_tolerance": ORACLE_FAIL_TOL,
    }
    meta = {"params": params.to_dict(), "control": control.to_dict()}
    code = EXIT_ORACLE if worst > ORACLE_FAIL_TOL else EXIT_OK
    return json.dumps(payload, indent=2) + "\n", meta, code


def cmd_estimate(args):
    theta, phi = read_sample_csv(args.infile)
    payload = {
        "n": int(theta.size),
        "rho_js": sample_rho_js(theta, phi),
        "rho_fl": sample_rho_fl(theta, phi),
        "var_theta": sample_circular_variance(theta),
        "var_phi": sample_circular_variance(phi),
    }
    return json.dumps(payload, indent=2) + "\n", {"input": str(args.infile)}


COMMANDS = {
    "report": cmd_report,
    "table": cmd_table,
    "sample": cmd_sample,
    "mc-validate": cmd_mc_validate,
    "density-grid": cmd_density_grid,
    "oracle-check": cmd_oracle_check,
    "estimate": cmd_estimate,
}


def _emit(args, argv, text, meta):
    manifest = {"command": args.command, "argv": list(argv), "tool_version": __version__}
    manifest.update(meta)
    if args.out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        manifest["outputs"] = ["<stdout>"]
        sys.stderr.write(json.dumps(manifest, sort_keys=True) + "\n")
        return
    out = Path(args.out)
    manifest_path = out.with_name(out.name + ".manifest.json")
    manifest["outputs"] = [str(out)]
    out.write_text(text)
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    code = EXIT_OK
    try:
        result = COMMANDS[args.command](args)
        if len(result) == 3:
            text, meta, code = result
        else:
            text, meta = result
        _emit(args, argv, text, meta)
    except _Fail as exc:
        print(f"bvmcor: {exc}", file=sys.stderr)
        return exc.code
    except (SeriesConvergenceError, QuadratureError) as exc:
        print(f"bvmcor: not converged: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"bvmcor: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EnvelopeError, DegenerateDistributionError, DegenerateDataError, ValueError) as exc:
        print(f"bvmcor: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
