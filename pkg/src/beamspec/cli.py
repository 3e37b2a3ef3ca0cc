"""Command-line front end.

Subcommands: spectrum | sweep | simulate | eigenfunction | resolvent |
riesz | critical.  Beam parameters come from flags, optionally seeded
from a JSON config file (flags override).  Every run writes its
effective configuration next to its outputs so it can be reproduced
with --config.

Exit codes: 0 ok, 2 invalid configuration, 3 numeric failure,
4 irreconcilable contour audit.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .eigenfunctions import eigenfunction_residuals, eval_phi, riesz_tail_report
from .errors import AuditMismatch, BeamError
from .model import BeamParams, GridFunction
from .resolvent import ResolventInput, resolvent_apply, resolvent_residual
from .simulator import dissipation_check, fit_decay_rate, simulate
from .spectrum import (
    compute_spectrum,
    critical_alpha_double,
    n0_index,
    undamped_spectrum,
    xi_special_report,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_AUDIT = 4

PI = math.pi

_DEFAULTS = {
    "a": 1.0,
    "b": 1.0,
    "alpha": 0.0,
    "beta": 0.0,
    "xi": 0.7071067811865476,
    "n_max": 8,
    "grid": 1024,
    "modes": 64,
    "time": 40.0,
    "samples": 2001,
    "out": ".",
    "format": "csv",
    "jobs": 1,
    "n": 1,
    "sign": "+",
    "mu_re": 1.0,
    "mu_im": 1.0,
    "n0": 4,
    "tail": 0.5,
    "alphas": None,
    "betas": None,
    "xis": None,
    "bs": None,
}


def _add_common(sub):
    sub.add_argument("--config", type=str, default=None,
                     help="JSON file with default option values")
    for name in ("a", "b", "alpha", "beta", "xi"):
        sub.add_argument("--%s" % name, type=float, default=None)
    sub.add_argument("--n-max", dest="n_max", type=int, default=None)
    sub.add_argument("--grid", type=int, default=None)
    sub.add_argument("--modes", type=int, default=None)
    sub.add_argument("--time", type=float, default=None)
    sub.add_argument("--samples", type=int, default=None)
    sub.add_argument("--out", type=str, default=None)
    sub.add_argument("--format", choices=("csv", "json"), default=None)
    sub.add_argument("--jobs", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="beamspec",
                                 description="damped-beam spectral toolkit")
    ap.add_argument("--version", action="version", version=__version__)
    subs = ap.add_subparsers(dest="command", required=True)

    for name in ("spectrum", "sweep", "simulate", "eigenfunction",
                 "resolvent", "riesz", "critical"):
        sub = subs.add_parser(name)
        _add_common(sub)
        if name == "sweep":
            sub.add_argument("--alphas", type=str, default=None,
                             help="comma-separated damper coefficients")
            sub.add_argument("--betas", type=str, default=None)
            sub.add_argument("--xis", type=str, default=None)
            sub.add_argument("--bs", type=str, default=None)
        if name == "eigenfunction":
            sub.add_argument("--n", type=int, default=None)
            sub.add_argument("--sign", choices=("+", "-"), default=None)
        if name == "resolvent":
            sub.add_argument("--mu-re", dest="mu_re", type=float, default=None)
            sub.add_argument("--mu-im", dest="mu_im", type=float, default=None)
        if name == "riesz":
            sub.add_argument("--n0", type=int, default=None)
        if name == "simulate":
            sub.add_argument("--tail", type=float, default=None)
    return ap


def _effective_config(args) -> dict:
    cfg = dict(_DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            loaded = json.load(fh)
        for k, v in loaded.items():
            if k in cfg:
                cfg[k] = v
    for k in cfg:
        v = getattr(args, k, None)
        if v is not None:
            cfg[k] = v
    cfg["command"] = args.command
    return cfg


def _params(cfg) -> BeamParams:
    return BeamParams(a=cfg["a"], b=cfg["b"], alpha=cfg["alpha"],
                      beta=cfg["beta"], xi=cfg["xi"])


def _write_config(cfg, outdir) -> None:
    path = os.path.join(outdir, "run_config.json")
    with open(path, "w") as fh:
        json.dump(cfg, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _decay_bound_line(a: float, b: float) -> str:
    if b <= 2.0 * math.sqrt(a) * PI * PI:
        return ("decay-rate bound: Re mu <= %.17e + eps "
                "(regime b <= 2 sqrt(a) pi^2)" % (-b / 2.0))
    bound = 0.5 * (-b + math.sqrt(b * b - 4.0 * a * PI ** 4))
    return ("decay-rate bound: Re mu <= %.17e + eps "
            "(regime b > 2 sqrt(a) pi^2)" % bound)


def cmd_spectrum(cfg) -> int:
    params = _params(cfg)
    result = compute_spectrum(params, cfg["n_max"], jobs=cfg["jobs"])
    out = cfg["out"]
    with open(os.path.join(out, "spectrum.json"), "w") as fh:
        fh.write(result.to_json())
        fh.write("\n")
    result.to_csv(os.path.join(out, "spectrum.csv"))
    print("eigenvalues: %d   abscissa: %.17e" % (len(result.eigenvalues),
                                                 result.abscissa))
    print(_decay_bound_line(params.a, params.b))
    return EXIT_OK


def _parse_grid_list(text, fallback):
    if text is None:
        return [fallback]
    return [float(tok) for tok in str(text).split(",") if tok != ""]


def _sweep_point(task):
    a, b, alpha, beta, xi, n_max = task
    try:
        params = BeamParams(a=a, b=b, alpha=alpha, beta=beta, xi=xi)
        res = compute_spectrum(params, n_max)
        return (alpha, beta, xi, b, res.abscissa, "ok")
    except BeamError as exc:
        return (alpha, beta, xi, b, float("nan"), type(exc).__name__)
    except ValueError as exc:
        return (alpha, beta, xi, b, float("nan"), "invalid:%s" % exc)


def cmd_sweep(cfg) -> int:
    alphas = _parse_grid_list(cfg["alphas"], cfg["alpha"])
    betas = _parse_grid_list(cfg["betas"], cfg["beta"])
    xis = _parse_grid_list(cfg["xis"], cfg["xi"])
    bs = _parse_grid_list(cfg["bs"], cfg["b"])
    total = len(alphas) * len(betas) * len(xis) * len(bs)
    if total == 0 or total > 100000:
        raise ValueError("sweep size %d outside (0, 1e5]" % total)
    tasks = [(cfg["a"], b, al, be, xi, cfg["n_max"])
             for al in alphas for be in betas for xi in xis for b in bs]
    if cfg["jobs"] > 1:
        with ProcessPoolExecutor(max_workers=cfg["jobs"]) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]

    out = cfg["out"]
    with open(os.path.join(out, "sweep.csv"), "w") as fh:
        fh.write("alpha,beta,xi,b,abscissa,status\n")
        for al, be, xi, b, absc, status in rows:
            fh.write("%.17e,%.17e,%.17e,%.17e,%.17e,%s\n"
                     % (al, be, xi, b, absc, status))
    ok_rows = [r for r in rows if r[5] == "ok"]
    summary = {"points": total, "failures": total - len(ok_rows)}
    if ok_rows:
        best = min(ok_rows, key=lambda r: r[4])
        base = max(r.mu.real for r in undamped_spectrum(cfg["a"], best[3], cfg["n_max"]))
        summary.update({
            "best": {"alpha": best[0], "beta": best[1], "xi": best[2],
                     "b": best[3], "abscissa": best[4]},
            "undamped_abscissa_at_best_b": base,
            "beats_undamped": bool(best[4] < base),
        })
        print("best abscissa %.17e at alpha=%g beta=%g xi=%g b=%g (beats "
              "undamped: %s)" % (best[4], best[0], best[1], best[2], best[3],
                                 "yes" if summary["beats_undamped"] else "no"))
    with open(os.path.join(out, "sweep_summary.json"), "w") as fh:
        json.dump(summary, fh, sort_keys=True, indent=1)
        fh.write("\n")
    return EXIT_OK


def cmd_simulate(cfg) -> int:
    params = _params(cfg)
    n_modes = cfg["modes"]
    k = np.arange(1, n_modes + 1)
    init = (1.0 / k ** 2, np.zeros(n_modes))
    traj = simulate(params, init, cfg["time"], cfg["samples"], n_modes)
    traj.to_csv(os.path.join(cfg["out"], "trajectory.csv"))
    omega = fit_decay_rate(traj, cfg["tail"])
    spec = compute_spectrum(params, min(n_modes, 16), jobs=cfg["jobs"])
    rel = abs(omega - spec.abscissa) / abs(spec.abscissa)
    print("fitted omega: %.17e   abscissa: %.17e" % (omega, spec.abscissa))
    print("decay fit within 5%% of abscissa: %s" % ("yes" if rel <= 0.05 else "no"))
    return EXIT_OK


def cmd_eigenfunction(cfg) -> int:
    params = _params(cfg)
    sign = +1 if cfg["sign"] == "+" else -1
    n = cfg["n"]
    spec = compute_spectrum(params, max(n, 1), jobs=cfg["jobs"])
    rec = next(r for r in spec.eigenvalues if r.n == n and r.sign == sign)
    pair = eval_phi(params, rec.point, cfg["grid"])
    pair.first.to_csv(os.path.join(cfg["out"], "eigenfunction.csv"))
    rep = eigenfunction_residuals(params, rec)
    worst = max(rep.values())
    with open(os.path.join(cfg["out"], "eigenfunction_residuals.json"), "w") as fh:
        json.dump(rep, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print("mode (n=%d, %s): mu = %.17e %+.17ej" % (n, cfg["sign"],
                                                   rec.mu.real, rec.mu.imag))
    print("residual suite max: %.3e (pass: %s)"
          % (worst, "yes" if worst < 1e-3 else "no"))
    return EXIT_OK


def cmd_resolvent(cfg) -> int:
    params = _params(cfg)
    mu = complex(cfg["mu_re"], cfg["mu_im"])
    inp = ResolventInput.from_callables(
        lambda x: np.sin(PI * x), lambda x: np.zeros_like(x), mu, m=cfg["grid"])
    out = resolvent_apply(params, inp, cfg["grid"])
    res = resolvent_residual(params, inp, out)
    out.diagnostics["residuals"] = res
    with open(os.path.join(cfg["out"], "resolvent.json"), "w") as fh:
        fh.write(out.to_json())
        fh.write("\n")
    out.u.to_csv(os.path.join(cfg["out"], "resolvent_u.csv"))
    worst = max(v for v in res.values() if isinstance(v, float) and v == v)
    print("resolvent at mu = %s: residual suite max %.3e (pass: %s)"
          % (mu, worst, "yes" if worst < 1e-3 else "no"))
    return EXIT_OK


def cmd_riesz(cfg) -> int:
    params = _params(cfg)
    rep = riesz_tail_report(params, cfg["n0"], cfg["n_max"], cfg["grid"])
    with open(os.path.join(cfg["out"], "riesz.json"), "w") as fh:
        json.dump(rep, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print("closeness decay exponent: %.4f  verdict: %s"
          % (rep["fitted_exponent"], rep["verdict"]))
    return EXIT_OK


def cmd_critical(cfg) -> int:
    params = _params(cfg)
    ca = critical_alpha_double(params.a, params.b, params.xi)
    doc = {
        "alpha_star": ca.alpha_star,
        "admissible": ca.admissible,
        "degenerate": ca.degenerate,
        "xi_report": xi_special_report(params.a, params.b,
                                       params.alpha if params.alpha > 0 else ca.alpha_star
                                       if ca.alpha_star > 0 else 1.0),
        "n0": n0_index(params.a, params.b),
    }
    with open(os.path.join(cfg["out"], "critical.json"), "w") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")
    print("alpha* = %.17e (admissible: %s, degenerate: %s)"
          % (ca.alpha_star, ca.admissible, ca.degenerate))
    rep = doc["xi_report"]
    print("special locations (alpha*b = %.6g): %d root(s) %s"
          % (rep["alpha_b"], rep["root_count"],
             ["%.6f" % r for r in rep["roots"]]))
    return EXIT_OK


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "eigenfunction": cmd_eigenfunction,
    "resolvent": cmd_resolvent,
    "riesz": cmd_riesz,
    "critical": cmd_critical,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _effective_config(args)
        os.makedirs(cfg["out"], exist_ok=True)
        _write_config(cfg, cfg["out"])
        return _COMMANDS[args.command](cfg)
    except AuditMismatch as exc:
        print("audit mismatch: %s" % exc, file=sys.stderr)
        return EXIT_AUDIT
    except BeamError as exc:
        print("numeric failure (%s): %s" % (type(exc).__name__, exc), file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, KeyError, StopIteration) as exc:
        print("invalid configuration: %s" % exc, file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
