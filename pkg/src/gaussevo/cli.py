"""Command-line front end.

Subcommands: ``evolve`` (CSV trajectory), ``analyze`` (JSON stationary
report), ``classify``, ``threshold`` (bisection on one parameter) and
``figure`` (CSV bundle for a figure preset). Exit codes: 0 success, 1
configuration error, 2 numerical failure, 3 stationary state requested but
nonexistent.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from .catalog import classify, cp_boundary_margin, cp_decompose
from .config import FIGURES, ScenarioConfig, figure_configs, parse_config, preset_config
from .errors import ConfigError, DomainViolation, NoSignChange, NumericError, UnsupportedRealization
from .evolution import min_nu_scan, trajectory
from .propagator import omega_of
from .stationary import dekker_vs_generic, stationary_params

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_NO_STATIONARY = 0, 1, 2, 3
CRITERIA = ("stationary_nu_zero", "overdamped_boundary", "cp_boundary", "min_traj_nu_zero")


@dataclass(frozen=True)
class ThresholdSpec:
    scan: str
    lo: float
    hi: float
    criterion: str = "stationary_nu_zero"
    tol: float = 1e-6


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def write_csv(stream, t, mu, kappa, nu) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(("t", "mu", "kappa", "nu"))
    for row in zip(t, mu, kappa, nu):
        w.writerow(tuple(_fmt(x) for x in row))


def cmd_evolve(cfg: ScenarioConfig, out=None, check_stationary: bool = False) -> int:
    """Write the closed-form trajectory as CSV."""
    out = out or sys.stdout
    if check_stationary and not stationary_params(cfg.coefficients).exists:
        print("error: stationary state does not exist", file=sys.stderr)
        return EXIT_NO_STATIONARY
    times = np.linspace(0.0, cfg.t_max, cfg.samples)
    tr = trajectory(cfg.coefficients, cfg.init, times)
    buf = io.StringIO()
    write_csv(buf, tr.t, tr.mu, tr.kappa, tr.nu)
    out.write(buf.getvalue())
    if check_stationary:
        rep = stationary_params(cfg.coefficients)
        dev = max(abs(tr.mu[-1] - rep.mu_st), abs(tr.kappa[-1] - rep.kappa_st), abs(tr.nu[-1] - rep.nu_st))
        print(f"max deviation of last row from stationary state: {dev:.3g}", file=sys.stderr)
    return EXIT_OK


def _none_or_float(x):
    return None if x is None else float(x)


def analyze(cfg: ScenarioConfig) -> dict:
    """Stationary and classification summary as a JSON-ready dict."""
    c = cfg.coefficients
    om = omega_of(c)
    rep = stationary_params(c)
    if rep.gamma_vec is None and c.gamma != 0:
        raise NumericError("Gamma is undefined at gamma**2 = omega**2")
    cls = None
    if c.gamma > 0 and c.theta_arr[0] > 0:
        cls = classify(c).value
    dekker = generic = None
    if c.gamma > 0:
        dekker, generic = dekker_vs_generic(c)
    witness = None
    if c.gamma > 0:
        try:
            w = cp_decompose(c)
        except UnsupportedRealization:
            w = None
        if w is not None:
            witness = {"c": w.c, "s1": float(w.s1), "s2": float(w.s2)}
    return {
        "class": cls,
        "omega_sq": om.omega_sq,
        "regime": om.regime,
        "exists": rep.exists,
        "reason": rep.reason,
        "gamma_vec": None if rep.gamma_vec is None else [float(x) for x in rep.gamma_vec],
        "mu_st": _none_or_float(rep.mu_st),
        "kappa_st": _none_or_float(rep.kappa_st),
        "nu_st": _none_or_float(rep.nu_st),
        "well_behaved": rep.well_behaved,
        "positive": rep.positive,
        "factorized_residual": float(rep.factorized_residual),
        "gibbs": rep.gibbs,
        "dekker_ok": dekker,
        "generic_positive_ok": generic,
        "cp_witness": witness,
    }


def cmd_analyze(cfg: ScenarioConfig, out=None) -> int:
    out = out or sys.stdout
    json.dump(analyze(cfg), out, indent=2)
    out.write("\n")
    return EXIT_OK


def criterion_function(spec: ThresholdSpec, base: ScenarioConfig) -> Callable[[float], float]:
    """Scalar function of the scanned parameter whose root is the threshold."""
    if spec.criterion not in CRITERIA:
        raise ConfigError(f"unknown criterion {spec.criterion!r}; expected one of {CRITERIA}")

    def f(x: float) -> float:
        cfg = base.with_param(spec.scan, x, strict=False)
        c = cfg.coefficients
        if spec.criterion == "stationary_nu_zero":
            # -Gamma.Gamma - 1 has the sign of nu_st when well behaved and no pole elsewhere
            rep = stationary_params(c)
            if rep.positivity_margin is None:
                raise NumericError(f"Gamma undefined at {spec.scan} = {x}")
            return rep.positivity_margin
        if spec.criterion == "overdamped_boundary":
            return omega_of(c).omega_sq
        if spec.criterion == "cp_boundary":
            return cp_boundary_margin(c)
        return min_nu_scan(c, cfg.init)[1]

    return f


def cmd_threshold(spec: ThresholdSpec, base: ScenarioConfig) -> float:
    """Bisection root of the criterion over [lo, hi] to |hi - lo| <= tol."""
    f = criterion_function(spec, base)
    flo, fhi = f(spec.lo), f(spec.hi)
    if flo == 0:
        return spec.lo
    if fhi == 0:
        return spec.hi
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(
            f"{spec.criterion} has the same sign at {spec.scan} = {spec.lo} ({flo:.3g}) and {spec.hi} ({fhi:.3g})"
        )
    return float(optimize.bisect(f, spec.lo, spec.hi, xtol=spec.tol))


def _curve_summary(tag: str, cfg: ScenarioConfig, out_dir: Path) -> dict:
    times = np.linspace(0.0, cfg.t_max, cfg.samples)
    tr = trajectory(cfg.coefficients, cfg.init, times)
    path = out_dir / f"{tag}.csv"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        write_csv(fh, tr.t, tr.mu, tr.kappa, tr.nu)
    rep = stationary_params(cfg.coefficients)
    _, nu_min = min_nu_scan(cfg.coefficients, cfg.init)
    return {"file": path.name, "min_nu": nu_min, "nu_end": float(tr.nu[-1]), "nu_st": rep.nu_st}


def cmd_figure(figure: str, out_dir: Path, t_max: float = 40.0, samples: int = 801, out=None) -> int:
    """Write one CSV per curve of a figure preset and print a summary table."""
    out = out or sys.stdout
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = figure_configs(figure, t_max=t_max, samples=samples)
    with ThreadPoolExecutor() as pool:
        rows = list(pool.map(lambda tc: _curve_summary(tc[0], tc[1], out_dir), curves))
    for r in rows:
        nu_st = "nan" if r["nu_st"] is None else _fmt(r["nu_st"])
        out.write(f"{r['file']}\tmin_nu={_fmt(r['min_nu'])}\tnu_end={_fmt(r['nu_end'])}\tnu_st={nu_st}\n")
    return EXIT_OK


def _load(args) -> ScenarioConfig:
    if args.config and args.preset:
        raise ConfigError("give either --config or --preset")
    mode = "raw" if args.raw else None
    if args.preset:
        cfg = preset_config(args.preset, **({"validation": mode} if mode else {}))
    elif args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
        cfg = parse_config(text, mode)
    else:
        raise ConfigError("one of --config or --preset is required")
    overrides = {}
    if getattr(args, "t_max", None) is not None:
        if not args.t_max > 0:
            raise ConfigError("--t-max must be positive")
        overrides["t_max"] = args.t_max
    if getattr(args, "samples", None) is not None:
        if args.samples < 2:
            raise ConfigError("--samples must be >= 2")
        overrides["samples"] = args.samples
    return replace(cfg, **overrides)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaussevo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", metavar="PATH")
        sp.add_argument("--preset", metavar="NAME")
        sp.add_argument("--raw", action="store_true", help="disable physical validation")
        sp.add_argument("--tol", type=float, default=None)

    ev = sub.add_parser("evolve", help="closed-form trajectory as CSV")
    common(ev)
    ev.add_argument("--t-max", type=float)
    ev.add_argument("--samples", type=int)
    ev.add_argument("--check-stationary", action="store_true", help="exit 3 if no stationary state exists")
    common(sub.add_parser("analyze", help="stationary report as JSON"))
    common(sub.add_parser("classify", help="print the equation class"))
    th = sub.add_parser("threshold", help="bisection for a threshold value")
    common(th)
    th.add_argument("--scan", required=True, help="coefficient or class parameter to vary")
    th.add_argument("--lo", type=float, required=True)
    th.add_argument("--hi", type=float, required=True)
    th.add_argument("--criterion", choices=CRITERIA, default="stationary_nu_zero")
    fg = sub.add_parser("figure", help="CSV bundle for a figure preset")
    fg.add_argument("--preset", required=True, choices=sorted(FIGURES))
    fg.add_argument("--out", required=True, metavar="DIR")
    fg.add_argument("--t-max", type=float, default=40.0)
    fg.add_argument("--samples", type=int, default=801)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figure":
            return cmd_figure(args.preset, Path(args.out), args.t_max, args.samples)
        cfg = _load(args)
        if args.command == "evolve":
            return cmd_evolve(cfg, check_stationary=args.check_stationary)
        if args.command == "analyze":
            return cmd_analyze(cfg)
        if args.command == "classify":
            tol = 1e-9 if args.tol is None else args.tol
            print(classify(cfg.coefficients, tol).value)
            return EXIT_OK
        spec = ThresholdSpec(args.scan, args.lo, args.hi, args.criterion, 1e-6 if args.tol is None else args.tol)
        print(repr(cmd_threshold(spec, cfg)))
        return EXIT_OK
    except (ConfigError, DomainViolation, NoSignChange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
