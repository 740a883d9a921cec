"""Command line entry point producing reproducible JSON reports.

Verbs: ``fit`` (estimate model parameters from CSV data), ``economics``
(optimal debugging stop time), ``faulttol`` (double-execution planning),
``simulate`` (seeded synthetic data), ``predict`` (point predictions from
given parameters).  Exit codes: 0 success, 1 usage error, 2 malformed or
out-of-domain data, 3 estimation failure.  Errors are reported as a single
JSON line on standard error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, debug_economics, fault_tolerance, model_jm, model_nelson
from . import model_schumann, model_weibull
from .errors import DataError, EstimationError
from .failure_data import (
    Outcome,
    intervals_from_epochs,
    parse_debug_periods,
    parse_failure_epochs,
    parse_run_log,
)


class _UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _provenance(inputs: list[tuple[str, str]], seed: int | None) -> dict:
    return {
        "inputs": [
            {"role": role, "path": path, "sha256": _sha256(path)} for role, path in inputs
        ],
        "seed": seed,
        "version": __version__,
        "generated_at": datetime.now(timezone.utc).isoformat(),
    }


def _emit(report: dict, output: str | None) -> None:
    body = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if output:
        Path(output).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _handle_fit_schumann(ns: argparse.Namespace) -> dict:
    periods = parse_debug_periods(_read_text(ns.input))
    fit = model_schumann.fit_mle(periods, ns.instructions, ci_level=ns.confidence)
    fit = model_schumann.covariance(fit, periods)
    ci = model_schumann.confidence_intervals(fit)
    residuals = model_schumann.stationarity_residuals(fit, periods)
    return {
        "model": "schumann",
        "e0": fit.e0_hat,
        "e0_rounded": model_schumann.rounded_e0(fit),
        "c": fit.c_hat,
        "instructions": fit.instructions,
        "var_e0": fit.var_e0,
        "var_c": fit.var_c,
        "rho": fit.rho,
        "confidence": fit.ci_level,
        "ci": {"e0": list(ci["e0"]), "c": list(ci["c"])},
        "residuals": list(residuals),
        "k": len(periods),
        "provenance": _provenance([("input", ns.input)], None),
    }


def _handle_fit_jm(ns: argparse.Namespace) -> dict:
    epochs = parse_failure_epochs(_read_text(ns.input))
    intervals = intervals_from_epochs(epochs)
    fit = model_jm.fit_mle(intervals)
    fit = model_jm.covariance(fit, intervals)
    ci = model_jm.confidence_intervals(fit, level=ns.confidence)
    residual = model_jm.stationarity_residual(fit.e0_hat, intervals)
    return {
        "model": "jm",
        "e0": fit.e0_hat,
        "e0_rounded": int(round(fit.e0_hat)),
        "k": fit.k_hat,
        "k_obs": fit.k_obs,
        "var_e0": fit.var_e0,
        "var_k": fit.var_k,
        "rho": fit.rho,
        "confidence": ns.confidence,
        "ci": {"e0": list(ci["e0"]), "k": list(ci["k"])},
        "residuals": [abs(residual)],
        "provenance": _provenance([("input", ns.input)], None),
    }


def _handle_fit_weibull(ns: argparse.Namespace) -> dict:
    epochs = parse_failure_epochs(_read_text(ns.input))
    intervals = intervals_from_epochs(epochs)
    form = model_weibull.MomentForm(ns.moment_form)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fit = model_weibull.fit_moments(intervals, form)
    report = {
        "model": "weibull",
        "m": fit.m,
        "lambda": fit.lam,
        "mttf": model_weibull.mttf(fit),
        "moment_form": fit.moment_form.value,
        "k_obs": len(intervals),
        "provenance": _provenance([("input", ns.input)], None),
    }
    if caught:
        report["warning"] = str(caught[0].message)
    return report


def _handle_fit_nelson(ns: argparse.Namespace) -> dict:
    profiles = model_nelson.parse_profiles(_read_text(ns.profile))
    qs = [model_nelson.run_failure_prob(p) for p in profiles]
    inputs = [("profile", ns.profile)]
    report = {
        "model": "nelson",
        "runs": len(qs),
        "q": qs,
        "reliability": model_nelson.reliability_n(qs),
        "certain_failure": any(q == 1.0 for q in qs),
    }
    if ns.simplified:
        log = parse_run_log(_read_text(ns.simplified))
        error_free = [1 if r.outcome is Outcome.SUCCESS else 0 for r in log.runs]
        inputs.append(("simplified", ns.simplified))
        if ns.weights:
            weights = model_nelson.parse_weights(_read_text(ns.weights))
            inputs.append(("weights", ns.weights))
        else:
            weights = [1.0] * len(error_free)
        report["simplified"] = model_nelson.simplified_reliability(error_free, weights)
    report["provenance"] = _provenance(inputs, None)
    return report


def _handle_economics(ns: argparse.Namespace) -> dict:
    inputs: list[tuple[str, str]] = []
    report: dict = {}
    eps0, tau0 = ns.eps0, ns.tau0
    if ns.fit:
        observations = debug_economics.parse_discovery(_read_text(ns.fit))
        eps0, tau0 = debug_economics.fit_discovery_curve(observations, ns.size)
        inputs.append(("discovery", ns.fit))
        report["fitted"] = {"eps0": eps0, "tau0": tau0}
    if eps0 is None or tau0 is None:
        raise _UsageError("economics requires --eps0 and --tau0, or --fit with a discovery file")
    params = debug_economics.DiscoveryParams(
        eps0=eps0, tau0=tau0, commands=ns.size, tempo=ns.tempo
    )
    econ = debug_economics.EconParams(
        cost_error=ns.cost_error, cost_test=ns.cost_test, horizon=ns.horizon
    )
    optimum = debug_economics.optimal_debug_time(params, econ)
    report.update(
        {
            "tau_m": optimum.tau_m,
            "cost_at_tau_m": optimum.cost,
            "boundary": optimum.boundary,
            "mttf_at_tau_m": debug_economics.mttf(params, optimum.tau_m),
        }
    )
    report["provenance"] = _provenance(inputs, None)
    return report


def _handle_faulttol(ns: argparse.Namespace) -> dict:
    config = fault_tolerance.DualRunConfig(
        total_time=ns.total_time, overhead=ns.overhead, failure_rate=ns.failure_rate
    )
    plan = fault_tolerance.optimal_module_time(config)
    report = {
        "t_star": plan.t_star,
        "module_count": plan.module_count,
        "tp_min": plan.tp_min,
        "p1_at_t": plan.p1_at_t,
        "boundary": plan.boundary,
    }
    if ns.simulate is not None:
        if ns.seed is None:
            raise _UsageError("--simulate requires --seed")
        t = ns.module_time if ns.module_time is not None else plan.t_star
        result = fault_tolerance.simulate_dual_execution(config, t, ns.simulate, ns.seed)
        report["simulation"] = {
            "module_time": t,
            "modules": ns.simulate,
            "mean_executions": result.mean_executions,
            "histogram": [[i, c] for i, c in sorted(result.histogram.items())],
            "elapsed": result.elapsed,
        }
    report["provenance"] = _provenance([], ns.seed)
    return report


def _handle_simulate_jm(ns: argparse.Namespace) -> dict:
    intervals = model_jm.generate_intervals(ns.e0, ns.k, ns.count, ns.seed)
    epochs = []
    acc = 0.0
    for x in intervals:
        acc += x
        epochs.append(acc)
    return {
        "model": "jm",
        "intervals": intervals,
        "epochs": epochs,
        "provenance": _provenance([], ns.seed),
    }


def _handle_simulate_schumann(ns: argparse.Namespace) -> dict:
    schedule = model_schumann.parse_schedule(_read_text(ns.schedule))
    periods = model_schumann.generate_periods(
        ns.e0, ns.c, ns.instructions, schedule, ns.seed
    )
    return {
        "model": "schumann",
        "periods": [
            {
                "tau": p.tau,
                "corrected": p.corrected,
                "exposure": p.exposure,
                "failures": p.failures,
            }
            for p in periods
        ],
        "provenance": _provenance([("schedule", ns.schedule)], ns.seed),
    }


def _handle_simulate_weibull(ns: argparse.Namespace) -> dict:
    times = model_weibull.generate(ns.shape, ns.scale, ns.count, ns.seed)
    return {
        "model": "weibull",
        "times": times,
        "provenance": _provenance([], ns.seed),
    }


def _handle_predict_schumann(ns: argparse.Namespace) -> dict:
    fit = model_schumann.SchumannFit(
        e0_hat=ns.e0, c_hat=ns.c, instructions=ns.instructions
    )
    eps_b = ns.corrected / ns.instructions
    return {
        "model": "schumann",
        "reliability": model_schumann.reliability(fit, eps_b, ns.time),
        "mttf": model_schumann.mttf(fit, eps_b),
        "provenance": _provenance([], None),
    }


def _handle_predict_jm(ns: argparse.Namespace) -> dict:
    return {
        "model": "jm",
        "intensity": model_jm.intensity(ns.e0, ns.k, ns.index),
        "reliability": model_jm.reliability(ns.e0, ns.k, ns.index, ns.dt),
        "provenance": _provenance([], None),
    }


def _handle_predict_weibull(ns: argparse.Namespace) -> dict:
    fit = model_weibull.WeibullFit(m=ns.shape, lam=ns.scale)
    report = {
        "model": "weibull",
        "reliability": model_weibull.reliability(fit, ns.time),
        "mttf": model_weibull.mttf(fit),
        "provenance": _provenance([], None),
    }
    if ns.time > 0.0 or fit.m >= 1.0:
        report["hazard"] = model_weibull.hazard(fit, ns.time)
    return report


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", help="write the JSON report here instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relgauge",
        description="Reliability estimation for tested software",
    )
    parser.add_argument("--version", action="version", version=f"relgauge {__version__}")
    verbs = parser.add_subparsers(dest="verb", required=True)

    fit = verbs.add_parser("fit", help="estimate model parameters from CSV data")
    fit_models = fit.add_subparsers(dest="model", required=True)

    p = fit_models.add_parser("schumann", help="exponential growth model over debugging periods")
    p.add_argument("--input", required=True, help="periods.csv (tau,corrected,exposure,failures)")
    p.add_argument("--instructions", type=int, required=True, help="program size in instructions")
    p.add_argument("--confidence", type=float, default=0.95)
    _add_output(p)
    p.set_defaults(handler=_handle_fit_schumann)

    p = fit_models.add_parser("jm", help="stepwise intensity model over failure epochs")
    p.add_argument("--input", required=True, help="failures.csv (epoch)")
    p.add_argument("--confidence", type=float, default=0.95)
    _add_output(p)
    p.set_defaults(handler=_handle_fit_jm)

    p = fit_models.add_parser("weibull", help="Weibull moment fit over failure epochs")
    p.add_argument("--input", required=True, help="failures.csv (epoch)")
    p.add_argument(
        "--moment-form",
        choices=[f.value for f in model_weibull.MomentForm],
        default=model_weibull.MomentForm.CV_CORRECTED.value,
    )
    _add_output(p)
    p.set_defaults(handler=_handle_fit_weibull)

    p = fit_models.add_parser("nelson", help="input-profile reliability estimate")
    p.add_argument("--profile", required=True, help="profile.csv (p,y or run,p,y)")
    p.add_argument("--simplified", help="runs.csv for the weighted run-fraction estimate")
    p.add_argument("--weights", help="w.csv (weight) matching the runs file")
    _add_output(p)
    p.set_defaults(handler=_handle_fit_nelson)

    p = verbs.add_parser("economics", help="optimal debugging stop time")
    p.add_argument("--eps0", type=float, help="initial error count")
    p.add_argument("--tau0", type=float, help="discovery decay time constant")
    p.add_argument("--size", type=int, required=True, help="program size in commands")
    p.add_argument("--tempo", type=float, required=True, help="commands executed per time unit")
    p.add_argument("--cost-error", type=float, required=True, help="loss per in-service failure")
    p.add_argument("--cost-test", type=float, required=True, help="cost per debugging time unit")
    p.add_argument("--horizon", type=float, required=True, help="planned operating time")
    p.add_argument("--fit", help="discovery.csv (tau,corrected) to fit eps0 and tau0 from")
    _add_output(p)
    p.set_defaults(handler=_handle_economics)

    p = verbs.add_parser("faulttol", help="double-execution module planning")
    p.add_argument("--total-time", type=float, required=True, help="single-pass program time")
    p.add_argument("--overhead", type=float, required=True, help="per-module comparison overhead")
    p.add_argument("--failure-rate", type=float, required=True, help="failure intensity")
    p.add_argument("--simulate", type=int, help="also simulate this many modules")
    p.add_argument("--seed", type=int, help="seed for --simulate")
    p.add_argument("--module-time", type=float, help="simulate at this module time instead of t*")
    _add_output(p)
    p.set_defaults(handler=_handle_faulttol)

    simulate = verbs.add_parser("simulate", help="generate seeded synthetic data")
    sim_models = simulate.add_subparsers(dest="model", required=True)

    p = sim_models.add_parser("jm", help="inter-failure intervals")
    p.add_argument("--e0", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_output(p)
    p.set_defaults(handler=_handle_simulate_jm)

    p = sim_models.add_parser("schumann", help="debugging-period failure counts")
    p.add_argument("--e0", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--instructions", type=int, required=True)
    p.add_argument("--schedule", required=True, help="schedule.csv (tau,corrected,exposure)")
    p.add_argument("--seed", type=int, required=True)
    _add_output(p)
    p.set_defaults(handler=_handle_simulate_schumann)

    p = sim_models.add_parser("weibull", help="failure times")
    p.add_argument("--shape", type=float, required=True)
    p.add_argument("--scale", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_output(p)
    p.set_defaults(handler=_handle_simulate_weibull)

    predict = verbs.add_parser("predict", help="point predictions from given parameters")
    pred_models = predict.add_subparsers(dest="model", required=True)

    p = pred_models.add_parser("schumann")
    p.add_argument("--e0", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--instructions", type=int, required=True)
    p.add_argument("--corrected", type=int, required=True, help="errors corrected so far")
    p.add_argument("--time", type=float, required=True, help="exposure to survive")
    _add_output(p)
    p.set_defaults(handler=_handle_predict_schumann)

    p = pred_models.add_parser("jm")
    p.add_argument("--e0", type=float, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--index", type=int, required=True, help="failure index being awaited")
    p.add_argument("--dt", type=float, required=True, help="time beyond the last failure")
    _add_output(p)
    p.set_defaults(handler=_handle_predict_jm)

    p = pred_models.add_parser("weibull")
    p.add_argument("--shape", type=float, required=True)
    p.add_argument("--scale", type=float, required=True)
    p.add_argument("--time", type=float, required=True)
    _add_output(p)
    p.set_defaults(handler=_handle_predict_weibull)

    return parser


def _fail(exc: BaseException, code: int) -> int:
    line = json.dumps(
        {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    )
    print(line, file=sys.stderr)
    return code


def run_cli(args: list[str]) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(args)
    except SystemExit as exc:
        # argparse exits 0 for --help/--version and 2 for usage problems;
        # usage problems are exit code 1 in this tool.
        return 0 if exc.code in (None, 0) else 1
    try:
        report = ns.handler(ns)
    except _UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except DataError as exc:
        return _fail(exc, 2)
    except EstimationError as exc:
        return _fail(exc, 3)
    except OSError as exc:
        return _fail(exc, 2)
    _emit(report, ns.output)
    return 0


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
