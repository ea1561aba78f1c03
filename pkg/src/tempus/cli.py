"""Command line front end.

    tempus certify CONFIG            certify one approximate solution
    tempus campaign CONFIG --trials N  randomized certificate campaign
    tempus constants CONFIG --sweep h=0.5,0.25
                                     lemma constants as the grid is refined

Exit codes: 0 pass, 1 certification failure, 2 config error,
3 hypothesis violation (non-regressive coefficient, complex or repeated
roots, Riccati breakdown).
"""
import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

from tempus.config import build_problem, load_config, with_timescale_param
from tempus.errors import CampaignError, ConfigError, HypothesisViolation, TempusError
from tempus.harness import certify_equation, perturb, run_campaign
from tempus.hyers_ulam import lemma_constant, riccati_inner_coefficient
from tempus.solvers import characteristic_roots
from tempus.timescale import Coefficient

CERT_COLUMNS = ("seed", "epsilon", "analytic_constant", "empirical_constant",
                "sup_deviation", "solution_residual", "verdict")
SUMMARY_COLUMNS = ("trials", "pass_count", "max_empirical_constant",
                   "max_analytic_constant", "worst_trial_seed")
CONSTANT_COLUMNS = ("parameter", "value", "points", "inner_constant", "outer_constant",
                    "analytic_constant")

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_HYPOTHESIS = 0, 1, 2, 3


def fmt(value):
    """Shortest round-trip decimal for floats, empty for missing values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row[c]) for c in columns])
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")
    return buf.getvalue()


def write_json(path, doc):
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8", newline="")


def _output(args, cfg):
    out_dir = Path(args.output_dir or cfg.output.get("dir") or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir, args.format or cfg.output["format"]


def cmd_certify(args, cfg):
    problem = build_problem(cfg)
    eq = problem.equation
    seed = None
    if problem.y is not None:
        y = problem.y
    else:
        seed = problem.perturbation.seed
        y = perturb(eq.exact_solution(), problem.perturbation, eq)
    _, cert = certify_equation(eq, y, construction=problem.construction)
    out_dir, form = _output(args, cfg)
    row = dict(cert.to_dict(), seed=seed)
    if form == "csv":
        write_csv(out_dir / "certificate.csv", CERT_COLUMNS, [row])
    else:
        write_json(out_dir / "certificate.json", row)
    print(f"epsilon={fmt(cert.epsilon)} constant={fmt(cert.analytic_constant) or '-'} "
          f"empirical={fmt(cert.empirical_constant)} sup_deviation={fmt(cert.sup_deviation)} "
          f"verdict={cert.verdict}")
    return EXIT_PASS if cert.passed else EXIT_FAIL


def cmd_campaign(args, cfg):
    problem = build_problem(cfg)
    if problem.perturbation is None:
        raise ConfigError("perturbation.kind", "a campaign needs a perturbation spec, not inline y")
    pert = problem.perturbation
    env_seed = os.environ.get("TEMPUS_SEED")
    if env_seed:
        try:
            pert = replace(pert, seed=int(env_seed))
        except ValueError:
            raise ConfigError("TEMPUS_SEED", f"expected an integer, got {env_seed!r}") from None
    if args.trials < 1:
        raise ConfigError("--trials", "must be >= 1")
    report = run_campaign(problem.equation, pert, args.trials, problem.construction)
    out_dir, form = _output(args, cfg)
    rows = [asdict(r) for r in report.rows]
    summary = {c: getattr(report, c) for c in SUMMARY_COLUMNS}
    if form == "csv":
        write_csv(out_dir / "campaign.csv", CERT_COLUMNS, rows)
        write_csv(out_dir / "campaign_summary.csv", SUMMARY_COLUMNS, [summary])
    else:
        write_json(out_dir / "campaign.json", dict(summary, rows=rows))
    print(f"trials={report.trials} passed={report.pass_count} "
          f"max_empirical={fmt(report.max_empirical_constant)} "
          f"max_analytic={fmt(report.max_analytic_constant) or '-'} "
          f"worst_seed={report.worst_trial_seed}")
    return EXIT_PASS if report.all_passed else EXIT_FAIL


def equation_constants(eq):
    """``(inner, outer)`` lemma constants of the factor-twice pipeline.

    First order has a single constant, reported as ``inner``.
    """
    ts = eq.timescale
    if eq.form == "first":
        return lemma_constant(eq.d).L, None
    head = ts.n - 1
    if eq.form in ("cc", "icc"):
        roots = characteristic_roots(eq.alpha, eq.beta)
        inner = lemma_constant(Coefficient.constant(roots.lambda2, ts.head(head))).L
        return inner, lemma_constant(Coefficient.constant(roots.lambda1, ts)).L
    z = eq.riccati().z
    d = riccati_inner_coefficient(z, eq.p)
    inner = lemma_constant(Coefficient(d.fn.head(head))).L
    return inner, lemma_constant(Coefficient(-z)).L


def _parse_sweep(text):
    if not text:
        return None, [None]
    name, sep, values = text.partition("=")
    if not sep or not name.strip():
        raise ConfigError("--sweep", "expected NAME=v1,v2,...")
    try:
        return name.strip(), [float(v) for v in values.split(",") if v.strip()]
    except ValueError:
        raise ConfigError("--sweep", f"bad value list {values!r}") from None


def cmd_constants(args, cfg):
    name, values = _parse_sweep(args.sweep)
    rows = []
    for value in values:
        sub = cfg if name is None else with_timescale_param(cfg, name, value)
        eq = build_problem(sub).equation
        inner, outer = equation_constants(eq)
        rows.append({"parameter": name, "value": value, "points": eq.timescale.n,
                     "inner_constant": inner, "outer_constant": outer,
                     "analytic_constant": inner if outer is None else inner * outer})
    out_dir, form = _output(args, cfg)
    if form == "csv":
        sys.stdout.write(write_csv(out_dir / "constants.csv", CONSTANT_COLUMNS, rows))
    else:
        write_json(out_dir / "constants.json", {"rows": rows})
        print(json.dumps({"rows": rows}, sort_keys=True))
    return EXIT_PASS


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="path to a JSON problem config")
    common.add_argument("--output-dir", metavar="PATH", help="directory for report files")
    common.add_argument("--format", choices=("csv", "json"), help="report format")
    common.add_argument("--dump-config", action="store_true",
                        help="print the normalized config and exit")

    parser = argparse.ArgumentParser(prog="tempus", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("certify", parents=[common], help="certify one approximate solution")
    p.set_defaults(func=cmd_certify)
    p = sub.add_parser("campaign", parents=[common], help="run a randomized campaign")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_campaign)
    p = sub.add_parser("constants", parents=[common], help="tabulate stability constants")
    p.add_argument("--sweep", metavar="NAME=V1,V2,...",
                   help="time scale parameter to vary, e.g. h=0.5,0.25,0.125")
    p.set_defaults(func=cmd_constants)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.dump_config:
            sys.stdout.write(cfg.dumps())
            return EXIT_PASS
        return args.func(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CampaignError as exc:
        kind = "hypothesis violation" if isinstance(exc.cause, HypothesisViolation) else "error"
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS if isinstance(exc.cause, HypothesisViolation) else EXIT_FAIL
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except TempusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
