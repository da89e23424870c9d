"""Command-line interface.

Subcommands expose the estimators, risk curves, the relative-suboptimality
diagnostic, the conjugate beta scan, and the least-favorable-prior search,
emitting plot-ready CSV and JSON artifacts.  Output is deterministic given
flags and seed: floats are printed with 17 significant digits, JSON keys are
sorted, and no timestamps are recorded.

Exit codes: 0 ok, 2 usage error, 3 numeric or input-data failure,
4 least-favorable-prior iteration hit its cap without converging.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import EstimationError
from .estimators import EstimatorKind, bayes_b1, bayes_b2, estimator_table, mle
from .minimax import (
    KempthorneConfig,
    bayes_estimator_for_discrete_prior,
    beta_scan,
    kempthorne,
)
from .posterior import ParticlePosterior, posterior_mean, posterior_update
from .risk import DiscretePrior, pointwise_risk, posterior_risk, relative_suboptimality
from .simplex import LossKind

OUTPUT_DIR_ENV = "BHATBAYES_OUTDIR"

_LOSSES = {"b": LossKind.ONE_MINUS_B, "b2": LossKind.ONE_MINUS_B_SQUARED}


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _resolve_path(path: str) -> str:
    if os.path.isabs(path):
        return path
    base = os.environ.get(OUTPUT_DIR_ENV, "").strip()
    return os.path.join(base, path) if base else path


def _write_text(path, text: str):
    if path is None:
        sys.stdout.write(text)
        return None
    resolved = _resolve_path(path)
    parent = os.path.dirname(resolved)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(resolved, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return resolved


def _emit_json(payload: dict):
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _metadata(command: str, parameters: dict, seed=None) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "version": __version__,
    }


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _emit_csv(args, command: str, parameters: dict, header, rows, seed=None):
    text = _csv(header, rows)
    written = _write_text(args.output, text)
    if written is not None:
        payload = _metadata(command, parameters, seed)
        payload["output"] = args.output
        _emit_json(payload)


def _loss_kind(args) -> LossKind:
    return _LOSSES[args.loss]


def _load_json_file(path: str):
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _particle_from_file(path: str) -> ParticlePosterior:
    raw = _load_json_file(path)
    try:
        points = np.asarray(raw["points"], dtype=float)
        weights = np.asarray(raw["weights"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise EstimationError(f"posterior file {path!r} needs 'points' and 'weights' arrays") from exc
    return ParticlePosterior(points=points, weights=weights)


def _discrete_prior_from_file(path: str) -> DiscretePrior:
    raw = _load_json_file(path)
    try:
        support = np.asarray(raw["support"], dtype=float)
        weights = np.asarray(raw["weights"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise EstimationError(f"prior file {path!r} needs 'support' and 'weights' arrays") from exc
    return DiscretePrior(support=support, weights=weights)


def cmd_estimate(args, parser):
    loss_kind = _loss_kind(args)
    if args.posterior_file is not None:
        if args.estimator == "mle":
            parser.error("--estimator mle needs counts, not a posterior file")
        post = _particle_from_file(args.posterior_file)
        posterior_desc = {
            "type": "particle",
            "points": [[float(x) for x in row] for row in post.points],
            "weights": [float(w) for w in post.weights],
        }
        parameters = {"posterior_file": args.posterior_file, "loss": args.loss, "estimator": args.estimator}
    else:
        missing = [name for name, val in (("--n", args.n), ("--N", args.N)) if val is None]
        if missing:
            parser.error(f"estimate needs {' and '.join(missing)} (or --posterior-file)")
        if args.N < 1 or args.n < 0 or args.n > args.N:
            parser.error(f"need 0 <= n <= N and N >= 1, got n={args.n}, N={args.N}")
        if args.estimator != "mle":
            if args.beta is None:
                parser.error("--beta is required for Bayes-family estimators")
            if args.beta <= 0:
                parser.error(f"--beta must be positive, got {args.beta}")
        if args.estimator == "mle":
            post = None
            posterior_desc = None
        else:
            post = posterior_update(args.beta, args.N, args.n)
            posterior_desc = {"type": "dirichlet", "alpha": [float(a) for a in post.alpha]}
        parameters = {
            "n": args.n,
            "N": args.N,
            "beta": args.beta,
            "loss": args.loss,
            "estimator": args.estimator,
        }

    if args.estimator == "mle":
        estimate = mle(args.n, args.N)
        label = "mle"
    elif args.estimator == "mean":
        estimate = posterior_mean(post)
        label = "mean"
    elif loss_kind is LossKind.ONE_MINUS_B:
        estimate = bayes_b1(post)
        label = "bayes_b1"
    else:
        estimate = bayes_b2(post)
        label = "bayes_b2"

    payload = _metadata("estimate", parameters)
    payload["estimate"] = [float(x) for x in estimate.entries]
    payload["estimator"] = label
    payload["loss"] = args.loss
    payload["posterior"] = posterior_desc
    payload["posterior_risk"] = (
        posterior_risk(post, estimate, loss_kind) if post is not None else None
    )
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    written = _write_text(args.output, text)
    if written is not None:
        _emit_json(payload)
    return 0


_FAMILY_BY_NAME = {"mle": EstimatorKind.MLE, "mean": EstimatorKind.POSTERIOR_MEAN}


def _table_for_name(name: str, n_trials: int, beta, loss_kind: LossKind, parser):
    if name == "bayes":
        kind = (
            EstimatorKind.BAYES_B1
            if loss_kind is LossKind.ONE_MINUS_B
            else EstimatorKind.BAYES_B2
        )
    elif name in _FAMILY_BY_NAME:
        kind = _FAMILY_BY_NAME[name]
    else:
        parser.error(f"unknown estimator {name!r}; choose from mle, mean, bayes")
    prior = None if kind is EstimatorKind.MLE else beta
    return estimator_table(kind, n_trials, prior)


def cmd_risk_curve(args, parser):
    if args.N < 1:
        parser.error(f"--N must be at least 1, got {args.N}")
    if args.beta is not None and args.beta <= 0:
        parser.error(f"--beta must be positive, got {args.beta}")
    if args.grid < 2:
        parser.error(f"--grid needs at least 2 points, got {args.grid}")
    loss_kind = _loss_kind(args)
    names = [name.strip() for name in args.estimators.split(",") if name.strip()]
    if not names:
        parser.error("--estimators must list at least one of mle, mean, bayes")
    if any(name != "mle" for name in names) and args.beta is None:
        parser.error("--beta is required for Bayes-family estimators")
    tables = [_table_for_name(name, args.N, args.beta, loss_kind, parser) for name in names]
    if args.prior_file is not None:
        # Bayes estimator of a discrete prior, e.g. a converged least
        # favorable prior, so its risk curve plots next to the others.
        prior = _discrete_prior_from_file(args.prior_file)
        tables.append(bayes_estimator_for_discrete_prior(prior, args.N, loss_kind))
        names = names + ["discrete"]
    grid = np.linspace(0.0, 1.0, args.grid)
    columns = [[pointwise_risk(float(p), table, loss_kind) for p in grid] for table in tables]
    rows = [[float(p)] + [col[i] for col in columns] for i, p in enumerate(grid)]
    parameters = {
        "N": args.N,
        "beta": args.beta,
        "loss": args.loss,
        "estimators": names,
        "grid": args.grid,
        "prior_file": args.prior_file,
    }
    _emit_csv(args, "risk-curve", parameters, ["p0"] + names, rows)
    return 0


def cmd_reldiff(args, parser):
    if args.N < 1:
        parser.error(f"--N must be at least 1, got {args.N}")
    if args.beta <= 0:
        parser.error(f"--beta must be positive, got {args.beta}")
    rows = []
    for n in range(args.N + 1):
        value = relative_suboptimality(posterior_update(args.beta, args.N, n))
        rows.append([str(n), value])
    parameters = {"N": args.N, "beta": args.beta}
    _emit_csv(args, "reldiff", parameters, ["n", "relative_suboptimality"], rows)
    return 0


def cmd_beta_scan(args, parser):
    if args.N < 1:
        parser.error(f"--N must be at least 1, got {args.N}")
    if not 0 < args.beta_min < args.beta_max:
        parser.error(f"need 0 < --beta-min < --beta-max, got {args.beta_min}, {args.beta_max}")
    if args.resolution < 3:
        parser.error(f"--resolution needs at least 3 points, got {args.resolution}")
    loss_kind = _loss_kind(args)
    family = (
        EstimatorKind.POSTERIOR_MEAN
        if args.family == "mean"
        else (
            EstimatorKind.BAYES_B1
            if loss_kind is LossKind.ONE_MINUS_B
            else EstimatorKind.BAYES_B2
        )
    )
    beta_star, max_risk_star, curve = beta_scan(
        args.N,
        loss_kind,
        family,
        beta_range=(args.beta_min, args.beta_max),
        resolution=args.resolution,
    )
    parameters = {
        "N": args.N,
        "family": args.family,
        "loss": args.loss,
        "beta_min": args.beta_min,
        "beta_max": args.beta_max,
        "resolution": args.resolution,
    }
    payload = _metadata("beta-scan", parameters)
    payload["beta_star"] = beta_star
    payload["max_risk"] = max_risk_star
    if args.curve_output is not None:
        text = _csv(["beta", "max_risk"], curve)
        _write_text(args.curve_output, text)
        payload["curve_output"] = args.curve_output
    _emit_json(payload)
    return 0


def cmd_lfp(args, parser):
    if args.N < 1:
        parser.error(f"--N must be at least 1, got {args.N}")
    if args.tol <= 0:
        parser.error(f"--tol must be positive, got {args.tol}")
    if not 0 < args.alpha < 1:
        parser.error(f"--alpha must lie in (0, 1), got {args.alpha}")
    if args.max_outer < 1:
        parser.error(f"--max-outer must be at least 1, got {args.max_outer}")
    loss_kind = _loss_kind(args)
    config = KempthorneConfig(
        N=args.N,
        loss=loss_kind,
        tol=args.tol,
        alpha_mix=args.alpha,
        max_outer_iters=args.max_outer,
        seed=args.seed,
    )
    init = _discrete_prior_from_file(args.init_file) if args.init_file else None
    result = kempthorne(config, init)
    parameters = {
        "N": args.N,
        "loss": args.loss,
        "tol": args.tol,
        "alpha": args.alpha,
        "max_outer": args.max_outer,
        "init_file": args.init_file,
    }
    payload = _metadata("lfp", parameters, seed=args.seed)
    payload["support"] = [float(x) for x in result.prior.support]
    payload["weights"] = [float(x) for x in result.prior.weights]
    payload["avg_risk"] = result.avg_risk
    payload["max_risk"] = result.max_risk
    payload["diff"] = result.diff
    payload["converged"] = result.converged
    payload["iters"] = result.outer_iters
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    written = _write_text(args.output, text)
    if written is not None:
        _emit_json(payload)
    return 0 if result.converged else 4


def cmd_compare(args, parser):
    if args.N < 1:
        parser.error(f"--N must be at least 1, got {args.N}")
    if args.beta <= 0:
        parser.error(f"--beta must be positive, got {args.beta}")
    table_specs = [
        ("mle", EstimatorKind.MLE, None),
        ("mean", EstimatorKind.POSTERIOR_MEAN, args.beta),
        ("bayes_b2", EstimatorKind.BAYES_B2, args.beta),
        ("bayes_b1", EstimatorKind.BAYES_B1, args.beta),
    ]
    tables = {name: estimator_table(kind, args.N, b) for name, kind, b in table_specs}
    rows = []
    for n in range(args.N + 1):
        rows.append(
            [str(n)]
            + [float(tables[name].rows[n].entries[0]) for name in ("mle", "mean", "bayes_b2", "bayes_b1")]
        )
    parameters = {"N": args.N, "beta": args.beta}
    _emit_csv(args, "compare", parameters, ["n", "mle", "mean", "bayes_b2", "bayes_b1"], rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhatbayes",
        description="Bayes and minimax estimation for binomial/multinomial parameters "
        "under Bhattacharyya losses.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="point estimate for one dataset or posterior")
    est.add_argument("--n", type=int, default=None, help="observed successes")
    est.add_argument("--N", type=int, default=None, help="number of trials")
    est.add_argument("--beta", type=float, default=None, help="conjugate prior concentration")
    est.add_argument("--loss", choices=("b", "b2"), default="b2")
    est.add_argument("--estimator", choices=("bayes", "mean", "mle"), default="bayes")
    est.add_argument("--posterior-file", default=None, help="particle posterior JSON file")
    est.add_argument("--output", default=None, help="write JSON here instead of stdout")
    est.set_defaults(handler=cmd_estimate)

    curve = sub.add_parser("risk-curve", help="pointwise risk of estimators on a p0 grid")
    curve.add_argument("--N", type=int, required=True)
    curve.add_argument("--beta", type=float, default=None)
    curve.add_argument("--loss", choices=("b", "b2"), default="b2")
    curve.add_argument("--estimators", default="mle,mean,bayes", help="comma list: mle,mean,bayes")
    curve.add_argument("--grid", type=int, default=501)
    curve.add_argument(
        "--prior-file",
        default=None,
        help="also plot the Bayes estimator of this discrete prior "
        "(JSON with 'support' and 'weights', e.g. lfp output)",
    )
    curve.add_argument("--output", default=None, help="write CSV here; metadata JSON to stdout")
    curve.set_defaults(handler=cmd_risk_curve)

    rel = sub.add_parser("reldiff", help="relative suboptimality of the mean, per outcome")
    rel.add_argument("--N", type=int, required=True)
    rel.add_argument("--beta", type=float, required=True)
    rel.add_argument("--output", default=None)
    rel.set_defaults(handler=cmd_reldiff)

    scan = sub.add_parser("beta-scan", help="minimax search over conjugate priors")
    scan.add_argument("--N", type=int, required=True)
    scan.add_argument("--family", choices=("bayes", "mean"), default="bayes")
    scan.add_argument("--loss", choices=("b", "b2"), default="b2")
    scan.add_argument("--beta-min", type=float, default=0.05)
    scan.add_argument("--beta-max", type=float, default=2.0)
    scan.add_argument("--resolution", type=int, default=41)
    scan.add_argument("--curve-output", default=None, help="write the (beta, max_risk) CSV here")
    scan.set_defaults(handler=cmd_beta_scan)

    lfp = sub.add_parser("lfp", help="least favorable prior via Kempthorne iteration")
    lfp.add_argument("--N", type=int, required=True)
    lfp.add_argument("--loss", choices=("b", "b2"), default="b2")
    lfp.add_argument("--tol", type=float, default=1e-3)
    lfp.add_argument("--alpha", type=float, default=0.01)
    lfp.add_argument("--seed", type=int, default=0)
    lfp.add_argument("--max-outer", type=int, default=50, help="outer iteration cap")
    lfp.add_argument("--init-file", default=None, help="JSON with 'support' and 'weights'")
    lfp.add_argument("--output", default=None)
    lfp.set_defaults(handler=cmd_lfp)

    comp = sub.add_parser("compare", help="first components of all four estimators per outcome")
    comp.add_argument("--N", type=int, required=True)
    comp.add_argument("--beta", type=float, required=True)
    comp.add_argument("--output", default=None)
    comp.set_defaults(handler=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args, parser)
    except EstimationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
