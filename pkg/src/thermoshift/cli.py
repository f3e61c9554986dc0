"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 numerical failure.  Errors go
to stderr as one JSON object.  Outputs embed the config digest and the tool
version; identical config + seed give byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, default_p, load_config
from .ergopt import (
    cohomologous_tilt,
    conditional_minima,
    ground_support_test,
    m_value,
    subaction,
)
from .kms import (
    GaugeSpec,
    gibbs_state,
    kms_check,
    kms_iterate,
    projection_steps,
    random_start,
)
from .monomial import (
    AlgebraContext,
    AlgebraElement,
    adjoint,
    gauge,
    multiply,
    represent,
    state_eval,
)
from .renewal import RenewalModel, phase_transition_report, pressure_curve
from .shiftspace import CylinderFunction, ShiftSpaceError, admissible_words, point_mass
from .transfer import ConvergenceError, TransferOperator, rpf_solve
from .verify import verify_all


def _word_key(w) -> str:
    return "".join(str(s) for s in w)


def _fn_table(f) -> dict:
    return {_word_key(w): float(np.real(v)) for w, v in f.as_dict().items()}


def _emit(config: RunConfig, payload: dict) -> str:
    doc = {
        "tool": "thermoshift",
        "version": __version__,
        "config_digest": config.digest(),
        **payload,
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return text


def _emit_csv(config: RunConfig, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# thermoshift {__version__} config_digest={config.digest()}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _write(config: RunConfig, text: str):
    if config.out_path:
        with open(config.out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _gauge_spec(config: RunConfig) -> GaugeSpec:
    p = config.p if config.p is not None else default_p(config.model)
    H = config.H if config.H is not None else CylinderFunction.constant(config.model, 1.0)
    return GaugeSpec(config.model, H, p, config.beta)


def _task_rpf(config: RunConfig) -> str:
    model = config.model
    if config.H is not None:
        weight = config.H ** (-config.beta)
    elif config.p is not None:
        weight = config.p
    else:
        weight = CylinderFunction.constant(model, 1.0)
    sol = rpf_solve(TransferOperator(model, weight), depth=config.numeric.depth,
                    tol=config.numeric.tol, max_iter=config.numeric.max_iter)
    return _emit(config, {
        "eigenvalue": sol.eigenvalue,
        "pressure": sol.pressure,
        "eigenfunction": _fn_table(sol.eigenfunction),
        "eigenmeasure": {_word_key(w): v for w, v in sol.eigenmeasure.as_dict().items()},
        "iterations": sol.iterations,
        "residual": sol.residual,
        "dual_residual": sol.dual_residual,
    })


def _task_kms(config: RunConfig) -> str:
    spec = _gauge_spec(config)
    num = config.numeric
    depth = num.depth or spec.working_depth(num.N)
    rng = np.random.default_rng(num.seed)
    steps = projection_steps(spec, depth)
    results = []
    for _ in range(num.starts):
        phi0 = random_start(spec, depth, rng)
        results.append(kms_iterate(spec, phi0, steps, tol=num.tol))
    pairwise = max(
        (results[i].state.total_variation(results[j].state)
         for i in range(len(results)) for j in range(i + 1, len(results))),
        default=0.0)
    state = results[0].state
    report = kms_check(spec, state, num.N)
    return _emit(config, {
        "state": {_word_key(w): v for w, v in state.as_dict().items()},
        "residual_per_n": {str(n): v for n, v in report["fixed_point_defect"].items()},
        "per_start_agreement": pairwise,
        "iterations": [r.iterations for r in results],
        "residual": max(r.residual for r in results),
    })


def _task_monomial_check(config: RunConfig) -> str:
    spec = _gauge_spec(config)
    ctx = AlgebraContext(spec.model, spec.p)
    rng = np.random.default_rng(config.numeric.seed)
    depth = config.numeric.depth or (spec.working_depth(3) + 1)
    phi = gibbs_state(spec, depth=depth)

    def random_fn():
        n = len(admissible_words(spec.model, 1))
        return CylinderFunction(spec.model, 1, rng.random(n) + 0.2)

    def random_elem():
        level = int(rng.integers(0, 3))
        return AlgebraElement.monomial(ctx, random_fn(), level, random_fn())

    hom_defect = 0.0
    kms_defect = 0.0
    for _ in range(50):
        x, y = random_elem(), random_elem()
        d = max(x.max_level(), y.max_level()) + 2
        hom_defect = max(hom_defect, float(np.abs(
            represent(multiply(x, y), d) - represent(x, d) @ represent(y, d)).max()))
        lhs = state_eval(phi, multiply(x, gauge(spec, y, 1j * spec.beta)))
        rhs = state_eval(phi, multiply(y, x))
        kms_defect = max(kms_defect, abs(lhs - rhs))
    return _emit(config, {
        "homomorphism_defect": hom_defect,
        "kms_equality_defect": kms_defect,
        "samples": 50,
    })


def _task_optimize(config: RunConfig) -> str:
    model = config.model
    opt = m_value(model, config.H)
    V = subaction(model, config.H, m=opt.m)
    tilted = cohomologous_tilt(model, config.H, V)
    gsets = {n: sorted(_word_key(w) for w in conditional_minima(model, config.H, n).members)
             for n in range(1, 5)}
    fbar = -config.H.log() - opt.m
    from .shiftspace import alpha_power

    slack = alpha_power(V, 1) - V - fbar
    eq_words = [
        _word_key(w) for w, s in slack.as_dict().items() if abs(s) <= 1e-10]
    return _emit(config, {
        "m": opt.m,
        "witness": _word_key(opt.witness_cycle),
        "ties": [_word_key(w) for w in opt.all_witnesses],
        "V": _fn_table(V),
        "equality_set": sorted(eq_words),
        "tilted_H": _fn_table(tilted),
        "ground_sets": {str(n): ws for n, ws in gsets.items()},
    })


def _task_subaction(config: RunConfig) -> str:
    model = config.model
    opt = m_value(model, config.H)
    V = subaction(model, config.H, m=opt.m)
    return _emit(config, {"m": opt.m, "V": _fn_table(V),
                          "witness": _word_key(opt.witness_cycle)})


def _task_ground(config: RunConfig) -> str:
    spec = _gauge_spec(config)
    n = config.numeric.N
    depth = config.numeric.depth or spec.working_depth(n)
    opt = m_value(config.model, spec.H)
    mu = point_mass(config.model, opt.witness_cycle, depth)
    report = ground_support_test(config.model, spec.p, spec.H, mu, n)
    report["witness_cycle"] = _word_key(opt.witness_cycle)
    if report["witness"] is not None:
        report["witness"] = _word_key(report["witness"])
    return _emit(config, report)


def _task_renewal(config: RunConfig) -> str:
    m = RenewalModel(config.renewal_gamma, config.renewal_K)
    curve = pressure_curve(m, config.renewal_beta_grid)
    if config.out_format == "csv":
        return _emit_csv(config, ("beta", "pressure", "root_residual"),
                         [(f"{b:.10g}", f"{p:.12g}", f"{r:.3g}")
                          for b, p, r in curve.as_rows()])
    report = phase_transition_report(m)
    return _emit(config, {
        "gamma": m.gamma,
        "K": m.K,
        "curve": [{"beta": b, "pressure": p, "root_residual": r}
                  for b, p, r in curve.as_rows()],
        "transition": report,
    })


def _task_verify_all(config: RunConfig) -> str:
    report = verify_all(config)
    text = _emit(config, report)
    if not report["all_pass"]:
        _write(config, text)
        failing = [tag for tag, entry in report["tags"].items() if not entry["pass"]]
        raise ConvergenceError(f"verification failed for tags: {failing}")
    return text


_TASK_RUNNERS = {
    "rpf": _task_rpf,
    "kms": _task_kms,
    "monomial-check": _task_monomial_check,
    "optimize": _task_optimize,
    "subaction": _task_subaction,
    "ground": _task_ground,
    "renewal": _task_renewal,
    "verify-all": _task_verify_all,
}


def run(config: RunConfig) -> int:
    """Execute a validated config; returns the process exit code."""
    try:
        text = _TASK_RUNNERS[config.task](config)
    except (ConfigError, ShiftSpaceError) as exc:
        sys.stderr.write(json.dumps({"error": "validation", "detail": str(exc)}) + "\n")
        return 2
    except ConvergenceError as exc:
        sys.stderr.write(json.dumps(
            {"error": "numerical", "detail": str(exc),
             "residual": getattr(exc, "residual", None)}) + "\n")
        return 3
    _write(config, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thermoshift",
        description="Numerics for transfer operators, equilibrium states and "
                    "ergodic optimization on subshifts of finite type.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="task", required=True)
    for task in _TASK_RUNNERS:
        name = "verify-all" if task == "verify-all" else task
        sp = sub.add_parser(name, help=f"run the {task} task")
        sp.add_argument("--config", required=True, help="path to a JSON config")
        sp.add_argument("--out", default=None, help="output file (default stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; execution is sequential")
        if task == "kms":
            sp.add_argument("--starts", type=int, default=None)
        if task == "renewal":
            sp.add_argument("--gamma", type=float, default=None)
            sp.add_argument("--K", type=int, default=None)
            sp.add_argument("--beta-grid", type=str, default=None,
                            help="comma-separated betas")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
    except (OSError, ConfigError) as exc:
        sys.stderr.write(json.dumps({"error": "validation", "detail": str(exc)}) + "\n")
        return 2
    overrides = dict(config.raw)
    overrides["task"] = args.task
    if args.out is not None:
        overrides.setdefault("output", {})
        overrides["output"] = {**overrides.get("output", {}), "path": args.out}
    if args.format is not None:
        overrides["output"] = {**overrides.get("output", {}), "format": args.format}
    if args.seed is not None:
        overrides["numeric"] = {**overrides.get("numeric", {}), "seed": args.seed}
    if getattr(args, "starts", None) is not None:
        overrides["numeric"] = {**overrides.get("numeric", {}), "starts": args.starts}
    if getattr(args, "gamma", None) is not None:
        overrides["renewal"] = {**overrides.get("renewal", {}), "gamma": args.gamma}
    if getattr(args, "K", None) is not None:
        overrides["renewal"] = {**overrides.get("renewal", {}), "K": args.K}
    if getattr(args, "beta_grid", None) is not None:
        grid = [float(b) for b in args.beta_grid.split(",")]
        overrides["renewal"] = {**overrides.get("renewal", {}), "beta_grid": grid}
    from .config import parse_config

    try:
        config = parse_config(overrides)
    except ConfigError as exc:
        sys.stderr.write(json.dumps({"error": "validation", "detail": str(exc)}) + "\n")
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
