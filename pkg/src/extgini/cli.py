"""Command-line interface: ``extgini {theoretical,estimate,simulate,fit,heatmap}``.

Every command prints one JSON document on stdout and a short human summary on
stderr. Exit codes: 0 success, 2 usage or domain error, 3 numeric failure or
capacity guard.
"""

import argparse
import json
import math
import sys
import time
from dataclasses import asdict

from . import __version__
from .dataset import load_csv, load_reference_dataset
from .errors import CapacityError, DomainError, ExtGiniError, NumericError
from .estimator import extended_gini_estimate, extended_gini_estimate_naive, heatmap_grid
from .fitting import fit_gamma_mle, gof_bootstrap
from .quadrature import QuadratureConfig
from .simulation import DEFAULT_SEED, SimulationConfig, STUDY_SPEC, run_simulation
from .theory import GammaParams, IndexSpec, index_gamma

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


def fmt(value):
    """Round floats to 10 significant digits; non-finite values become null."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return float(f"{value:.10g}") if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: fmt(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [fmt(v) for v in value]
    if hasattr(value, "item"):
        return fmt(value.item())
    return value


def _envelope(command, inputs, results, started):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "version": __version__,
        "inputs": fmt(inputs),
        "results": fmt(results),
        "timing": {"seconds": fmt(time.perf_counter() - started)},
    }


def _load(args):
    if args.reference:
        return load_reference_dataset()
    return load_csv(args.input)


def _spec(args):
    return IndexSpec(args.m, args.j, args.k)


def cmd_theoretical(args):
    spec = _spec(args)
    params = GammaParams(args.alpha, args.rate)
    quad = QuadratureConfig(abs_tol=args.tol)
    value, diag = index_gamma(spec, params, quad, method=args.method, full_output=True)
    inputs = {"alpha": params.shape, "rate": params.rate, "m": spec.m, "j": spec.j, "k": spec.k,
              "tol": quad.abs_tol, "method": args.method}
    results = {"index": value, "quadrature": asdict(diag)}
    summary = f"IG_{spec.m}({spec.j},{spec.k}) at alpha={params.shape:g}: {value:.10g}"
    return inputs, results, summary


def cmd_estimate(args):
    data = _load(args)
    spec = _spec(args)
    fn = extended_gini_estimate_naive if args.naive else extended_gini_estimate
    est = fn(data.sample, spec)
    inputs = {"input": data.path, "m": spec.m, "j": spec.j, "k": spec.k, "naive": args.naive}
    results = {"estimate": est.value, "n": est.n, "method": est.method}
    summary = f"estimate of IG_{spec.m}({spec.j},{spec.k}) on n={est.n}: {est.value:.10g}"
    return inputs, results, summary


def cmd_simulate(args):
    spec = _spec(args)
    params = GammaParams(args.alpha, args.rate)
    config = SimulationConfig(params, args.n, args.reps, spec, args.seed)
    report = run_simulation(config, workers=args.workers)
    inputs = {"alpha": params.shape, "rate": params.rate, "n": args.n, "reps": args.reps,
              "m": spec.m, "j": spec.j, "k": spec.k, "seed": args.seed}
    results = report.as_dict()
    summary = (f"n={args.n} reps={args.reps}: bias={report.bias:.3e} mse={report.mse:.3e} "
               f"mean={report.mean_estimate:.5f} true={report.true_value:.5f}")
    return inputs, results, summary


def cmd_fit(args):
    data = _load(args)
    fit = fit_gamma_mle(data.sample)
    results = {
        "shape": fit.params.shape, "rate": fit.params.rate,
        "log_likelihood": fit.log_likelihood, "iterations": fit.iterations,
        "converged": fit.converged, "score_residual": fit.score_residual,
    }
    summary = f"gamma MLE: shape={fit.params.shape:.6g} rate={fit.params.rate:.6g}"
    if args.gof:
        gof = gof_bootstrap(data.sample, args.bootstrap, args.seed)
        results["gof"] = asdict(gof)
        summary += f"; KS p={gof.ks_p:.4f}, CvM p={gof.cvm_p:.4f} (bootstrap B={gof.bootstrap_reps})"
    inputs = {"input": data.path, "gof": args.gof, "bootstrap": args.bootstrap, "seed": args.seed}
    return inputs, results, summary


def write_heatmap_csv(grid, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("m,j,k,estimate\n")
        for m, j, k, est in grid.rows:
            fh.write(f"{m},{j},{k},{est:.10g}\n")


def cmd_heatmap(args):
    data = _load(args)
    grid = heatmap_grid(data.sample, args.m_max)
    write_heatmap_csv(grid, args.output)
    inputs = {"input": data.path, "m_max": args.m_max, "output": args.output}
    results = {"rows": len(grid.rows), "output": args.output, "gini": grid.value(2, 1, 2)}
    if args.m_max == data.sample.n:
        results["mth_gini"] = grid.value(args.m_max, 1, args.m_max)
    summary = f"wrote {len(grid.rows)} rows to {args.output}"
    return inputs, results, summary


def _positive_float(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (math.isfinite(val) and val > 0):
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return val


def _spec_flags(parser, defaults=(None, None, None)):
    for name, default in zip("mjk", defaults):
        parser.add_argument(f"--{name}", type=int, default=default, required=default is None)


def _input_flags(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--input", metavar="FILE", help="CSV with one value column or label,value")
    group.add_argument("--reference", action="store_true",
                       help="use the bundled 2023 GDP-per-capita table (n=17)")


def build_parser():
    parser = argparse.ArgumentParser(prog="extgini", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theoretical", help="population index of a gamma distribution")
    p.add_argument("--alpha", type=_positive_float, required=True, help="gamma shape")
    p.add_argument("--rate", type=_positive_float, default=1.0, help="gamma rate (index is rate-free)")
    _spec_flags(p)
    p.add_argument("--tol", type=_positive_float, default=1e-10, help="absolute quadrature tolerance")
    p.add_argument("--method", choices=("auto", "alternating", "beta"), default="auto")
    p.set_defaults(func=cmd_theoretical)

    p = sub.add_parser("estimate", help="sample estimate from a CSV file")
    _input_flags(p)
    _spec_flags(p)
    p.add_argument("--naive", action="store_true", help="enumerate all subsets (slow oracle)")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="Monte Carlo bias and MSE under gamma sampling")
    p.add_argument("--alpha", type=_positive_float, default=2.0)
    p.add_argument("--rate", type=_positive_float, default=1.0)
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--reps", type=int, default=500)
    _spec_flags(p, STUDY_SPEC.as_tuple())
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="gamma maximum-likelihood fit and goodness of fit")
    _input_flags(p)
    p.add_argument("--gof", action="store_true", help="also run KS and CvM bootstrap tests")
    p.add_argument("--bootstrap", type=int, default=1000, metavar="B")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="S")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("heatmap", help="estimates over all (m, j, k) up to --m-max, as CSV")
    _input_flags(p)
    p.add_argument("--m-max", type=int, required=True, dest="m_max")
    p.add_argument("--output", required=True, metavar="OUT.csv")
    p.set_defaults(func=cmd_heatmap)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        inputs, results, summary = args.func(args)
    except DomainError as exc:
        print(f"extgini {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericError, CapacityError) as exc:
        print(f"extgini {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ExtGiniError as exc:
        print(f"extgini {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    json.dump(_envelope(args.command, inputs, results, started), sys.stdout, allow_nan=False)
    sys.stdout.write("\n")
    print(summary, file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
