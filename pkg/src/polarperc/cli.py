"""Command-line front end.

Subcommands: analytic, polarize, dk, pc, beta, scaling, report.  Every
randomized command requires an explicit seed (flag or config); outputs are
JSON/CSV files carrying the full configuration for replay.

Exit codes: 0 success, 2 configuration error, 3 numerical/convergence error,
4 resource error.
"""

import argparse
import configparser
import json
import os
import sys

import numpy as np

from . import dk, fits, golden, polarization, report, scaling
from .errors import (
    BracketError,
    ConvergenceError,
    ExtinctionError,
    FitError,
    ResourceLimitError,
)

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_RESOURCE = 4


class ConfigError(Exception):
    pass


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _load_section(path, section):
    if path is None:
        return {}
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    if not parser.has_section(section):
        return {}
    return dict(parser.items(section))


def _parse(raw, key, kind, default):
    if key not in raw:
        return default
    text = raw.pop(key)
    try:
        if kind is bool:
            if text.lower() in ("1", "true", "yes", "on"):
                return True
            if text.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        return kind(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for config key {key!r}: {text!r}") from exc


def _reject_unknown(raw):
    if raw:
        key = sorted(raw)[0]
        raise ConfigError(f"unknown config key {key!r}")


def _require_seed(args, raw):
    seed = _parse(raw, "seed", int, None)
    if args.seed is not None:
        seed = args.seed
    if seed is None:
        raise ConfigError("missing required config key 'seed' (or --seed flag)")
    return seed


def _out_path(args, name):
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def cmd_analytic(args):
    g = golden.GoldenConstants()
    r = golden.ReferenceConstants()
    rows = [row.as_dict() for row in report.constant_rows()]
    payload = {
        "command": "analytic",
        "phi": g.phi,
        "phi_conj": g.phi_conj,
        "beta_analytic": g.beta_analytic,
        "mu_analytic": g.mu_analytic,
        "beta_num": r.beta_num,
        "beta_num_inverse": 1.0 / r.beta_num,
        "mu_num": r.mu_num,
        "bounds": {
            "mu_lower": r.mu_lower,
            "mu_upper": r.mu_upper,
            "mu_closed_lower": r.mu_closed_lower,
            "mu_bmsc_upper": r.mu_bmsc_upper,
        },
        "rows": rows,
    }
    path = _write_json(_out_path(args, "analytic.json"), payload)
    print(f"phi            = {g.phi!r}")
    print(f"beta_analytic  = {g.beta_analytic!r}")
    print(f"mu_analytic    = {g.mu_analytic!r}")
    print(f"beta_num^-1    = {1.0 / r.beta_num!r}")
    print(f"wrote {path}")
    return 0


def cmd_polarize(args):
    raw = _load_section(args.config, "polarize")
    mode = _parse(raw, "mode", str, "iteration")
    if mode == "iteration":
        nodes = _parse(raw, "grid_nodes", int, polarization.DEFAULT_GRID_NODES)
        c = _parse(raw, "interval_low", float, 0.1)
        d = _parse(raw, "interval_high", float, 0.9)
        tol = _parse(raw, "tol", float, 1e-10)
        max_iters = _parse(raw, "max_iters", int, 2000)
        doubling = _parse(raw, "grid_doubling", bool, False)
        _reject_unknown(raw)
        iv = polarization.Interval(c, d)
        est = polarization.dominant_decay(
            polarization.GridFunction.indicator(iv, nodes), max_iters, tol
        )
        payload = {
            "command": "polarize",
            "mode": mode,
            "config": {
                "grid_nodes": nodes,
                "interval": [c, d],
                "tol": tol,
                "max_iters": max_iters,
            },
            "decay_ratio": est.decay_ratio,
            "mu": est.mu,
            "iterations": est.iterations,
            "convergence_residual": est.convergence_residual,
        }
        if doubling:
            est2 = polarization.dominant_decay(
                polarization.GridFunction.indicator(iv, 2 * (nodes - 1) + 1),
                max_iters,
                tol,
            )
            payload["mu_doubled_grid"] = est2.mu
            payload["mu_grid_difference"] = abs(est2.mu - est.mu)
        payload["rows"] = [
            report.ReportRow(
                "mu_polarization_iteration",
                est.mu,
                "polarization_iteration",
                {"config_hash": report.config_hash(payload["config"])},
            ).as_dict()
        ]
        path = _write_json(_out_path(args, "polarize.json"), payload)
        print(f"decay ratio = {est.decay_ratio!r}")
        print(f"mu          = {est.mu!r}")
        if doubling:
            print(f"mu (doubled grid) = {payload['mu_doubled_grid']!r}")
        print(f"wrote {path}")
        return 0
    if mode == "mc":
        z0 = _parse(raw, "z0", float, 0.5)
        c = _parse(raw, "interval_low", float, 0.1)
        d = _parse(raw, "interval_high", float, 0.9)
        n_min = _parse(raw, "n_min", int, 8)
        n_max = _parse(raw, "n_max", int, 30)
        trials = _parse(raw, "trials", int, 10**6)
        seed = _require_seed(args, raw)
        _reject_unknown(raw)
        iv = polarization.Interval(c, d)
        series = polarization.mc_unpolarized_series(
            z0, iv, range(n_min, n_max + 1), trials, seed
        )
        fit = fits.decay_rate([(n, p) for n, p, _ in series if p > 0.0])
        mu = 1.0 / fit.value
        config = {
            "z0": z0,
            "interval": [c, d],
            "n_min": n_min,
            "n_max": n_max,
            "trials": trials,
            "seed": seed,
        }
        payload = {
            "command": "polarize",
            "mode": mode,
            "config": config,
            "series": [[n, p, s] for n, p, s in series],
            "decay_rate_fit": fit.as_dict(method="tail-half log2 regression"),
            "mu": mu,
            "rows": [
                report.ReportRow(
                    "mu_polarization_mc",
                    mu,
                    "polarization_mc",
                    {"seed": seed, "config_hash": report.config_hash(config)},
                ).as_dict()
            ],
        }
        path = _write_json(_out_path(args, "polarize_mc.json"), payload)
        print(f"decay rate = {fit.value!r}")
        print(f"mu         = {mu!r}")
        print(f"wrote {path}")
        return 0
    raise ConfigError(f"bad value for config key 'mode': {mode!r}")


_FAMILIES = {
    "bond": dk.DKParams.bond,
    "site": dk.DKParams.site,
    "compact": dk.DKParams.compact,
    "w18": dk.DKParams.w18,
}


def _family(raw):
    name = _parse(raw, "family", str, "bond")
    if name not in _FAMILIES:
        raise ConfigError(f"bad value for config key 'family': {name!r}")
    return name, _FAMILIES[name]


def cmd_dk(args):
    raw = _load_section(args.config, "dk")
    name, family = _family(raw)
    p_min = _parse(raw, "p_min", float, 0.65)
    p_max = _parse(raw, "p_max", float, 0.75)
    n_points = _parse(raw, "n_points", int, 11)
    big_l = _parse(raw, "lattice_width", int, 4096)
    t_max = _parse(raw, "t_max", int, 4096)
    seed = _require_seed(args, raw)
    _reject_unknown(raw)
    ps = np.linspace(p_min, p_max, n_points)
    curve = dk.density_curve(family, ps, big_l, t_max, seed, threads=args.threads)
    path = _out_path(args, f"dk_density_{name}.csv")
    curve.to_csv(path)
    config = {
        "family": name,
        "p_min": p_min,
        "p_max": p_max,
        "n_points": n_points,
        "lattice_width": big_l,
        "t_max": t_max,
        "seed": seed,
    }
    _write_json(_out_path(args, "dk.json"), {"command": "dk", "config": config, "curve_csv": path})
    print(f"wrote {path}")
    return 0


def cmd_pc(args):
    raw = _load_section(args.config, "pc")
    name, family = _family(raw)
    t_max = _parse(raw, "t_max", int, 10**4)
    trials = _parse(raw, "trials", int, 10**4)
    tol = _parse(raw, "tol", float, 2e-3)
    seed = _require_seed(args, raw)
    _reject_unknown(raw)
    est = fits.find_threshold(family, t_max, trials, tol, seed)
    config = {
        "family": name,
        "t_max": t_max,
        "trials": trials,
        "tol": tol,
        "seed": seed,
    }
    payload = {
        "command": "pc",
        "config": config,
        "p_c": est.p_c,
        "bracket": list(est.bracket),
        "trials_per_probe": est.trials_per_probe,
    }
    path = _write_json(_out_path(args, f"pc_{name}.json"), payload)
    print(f"p_c({name}) = {est.p_c!r} bracket {est.bracket}")
    print(f"wrote {path}")
    return 0


def cmd_beta(args):
    raw = _load_section(args.config, "beta")
    name, family = _family(raw)
    p_c = _parse(raw, "p_c", float, golden.ReferenceConstants().pc_bond)
    window_low = _parse(raw, "window_low", float, 0.005)
    window_high = _parse(raw, "window_high", float, 0.06)
    n_points = _parse(raw, "n_points", int, 12)
    big_l = _parse(raw, "lattice_width", int, 4000)
    t_max = _parse(raw, "t_max", int, 4000)
    seed = _require_seed(args, raw)
    _reject_unknown(raw)
    # geometric spacing gives the log-log fit even leverage across the window
    ps = p_c + np.geomspace(window_low, window_high, n_points)
    curve = dk.density_curve(family, ps, big_l, t_max, seed, threads=args.threads)
    fit = fits.fit_beta(curve, p_c, (window_low, window_high))
    csv_path = _out_path(args, f"beta_curve_{name}.csv")
    curve.to_csv(csv_path)
    config = {
        "family": name,
        "p_c": p_c,
        "window": [window_low, window_high],
        "n_points": n_points,
        "lattice_width": big_l,
        "t_max": t_max,
        "seed": seed,
    }
    payload = {
        "command": "beta",
        "config": config,
        "beta_fit": fit.as_dict(method="log-log density fit, auto-weighted"),
        "mu_from_beta": 1.0 / fit.value,
        "curve_csv": csv_path,
        "rows": [
            report.ReportRow(
                "mu_percolation_simulation",
                1.0 / fit.value,
                "percolation_numeric",
                {"seed": seed, "config_hash": report.config_hash(config)},
            ).as_dict()
        ],
    }
    path = _write_json(_out_path(args, f"beta_{name}.json"), payload)
    print(f"beta = {fit.value!r} +- {fit.stderr!r}")
    print(f"wrote {path}")
    return 0


def cmd_scaling(args):
    raw = _load_section(args.config, "scaling")
    z0 = _parse(raw, "z0", float, 0.5)
    pe_target = _parse(raw, "pe_target", float, 1e-3)
    n_min = _parse(raw, "n_min", int, 10)
    n_max = _parse(raw, "n_max", int, 22)
    _reject_unknown(raw)
    points = [
        scaling.max_rate(scaling.synthetic_spectrum(z0, n), pe_target)
        for n in range(n_min, n_max + 1)
    ]
    fit = scaling.fit_scaling_exponent(points)
    config = {"z0": z0, "pe_target": pe_target, "n_min": n_min, "n_max": n_max}
    payload = {
        "command": "scaling",
        "config": config,
        "points": [
            {
                "n": p.n,
                "N": p.block_length,
                "rate": p.rate,
                "gap": p.gap,
                "degenerate": p.degenerate,
            }
            for p in points
        ],
        "mu_fit": fit.as_dict(method="log2 N vs log2 gap least squares"),
        "warning": "finite-size bias: fitted exponent converges slowly in n",
        "rows": [
            report.ReportRow(
                "mu_blocklength_fit",
                fit.value,
                "blocklength_fit",
                {"config_hash": report.config_hash(config)},
            ).as_dict()
        ],
    }
    path = _write_json(_out_path(args, "scaling.json"), payload)
    print(f"mu (blocklength fit) = {fit.value!r} +- {fit.stderr!r}")
    print(payload["warning"], file=sys.stderr)
    print(f"wrote {path}")
    return 0


def cmd_report(args):
    fragments = []
    for path in args.fragments:
        with open(path) as fh:
            payload = json.load(fh)
        fragments.append(payload.get("rows", []))
    merged = report.merge_reports(fragments)
    path = _write_json(_out_path(args, "report.json"), merged.as_dict())
    for row in merged.rows:
        print(f"{row.label:32s} {row.mu_value!r:24s} [{row.source}]")
    print(f"{'penalty':32s} {merged.penalty!r}")
    print(f"wrote {path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polarperc",
        description="Polarization / directed-percolation scaling-exponent toolkit",
    )
    parser.add_argument("--config", default=None, help="INI config file")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (required for randomized commands)")
    parser.add_argument("--threads", type=int, default=1, help="worker threads (never affects results)")
    parser.add_argument("--out", default=".", help="output directory")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analytic").set_defaults(func=cmd_analytic)
    sub.add_parser("polarize").set_defaults(func=cmd_polarize)
    sub.add_parser("dk").set_defaults(func=cmd_dk)
    sub.add_parser("pc").set_defaults(func=cmd_pc)
    sub.add_parser("beta").set_defaults(func=cmd_beta)
    sub.add_parser("scaling").set_defaults(func=cmd_scaling)
    rep = sub.add_parser("report")
    rep.add_argument("fragments", nargs="*", help="JSON fragments to merge")
    rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, FitError, BracketError, ExtinctionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
