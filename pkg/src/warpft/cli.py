"""Command-line front end.

Subcommands::

    warpft warp eval|invert|check-bracket
    warpft gft
    warpft chirp synth|harmonize|estimate
    warpft diffuse run|msd

Exit codes: 0 success, 1 numeric failure, 2 usage/validation error.
Options may also come from ``--config file.json``; command-line values win.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from warpft import chirp, diffusion, gft
from warpft.errors import UsageError, WarpftError
from warpft.signals import GridSpec, SampledSignal, fmt
from warpft.svg import polyline_svg
from warpft.warp import PhaseSpacePoint, identity, poisson_bracket, warp_from_dict


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _json_arg(value, what):
    if value is None or isinstance(value, (dict, list)):
        return value
    if isinstance(value, str) and os.path.isfile(value):
        with open(value) as fh:
            value = fh.read()
    try:
        return json.loads(value)
    except (TypeError, json.JSONDecodeError) as exc:
        raise UsageError(f"{what}: not valid JSON ({exc})") from exc


def _warp(value, what="--warp", default=None):
    d = _json_arg(value, what)
    if d is None:
        if default is None:
            raise UsageError(f"{what} is required")
        return default
    return warp_from_dict(d)


def _grid(value, what, default=None):
    d = _json_arg(value, what)
    if d is None:
        if default is None:
            raise UsageError(f"{what} is required")
        return default
    return GridSpec.from_dict(d)


def _float(value, what):
    if value is None:
        raise UsageError(f"{what} is required")
    try:
        return float(value)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{what}: expected a number, got {value!r}") from exc


def _emit(obj):
    print(json.dumps(obj, allow_nan=False))


def _write_json(path, obj):
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, allow_nan=False, indent=2) + "\n")


def _out_path(args, name):
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


# -- warp -------------------------------------------------------------------

def cmd_warp(args):
    w = _warp(args.warp)
    if args.action == "eval":
        _emit({"W": w(_float(args.x, "--x"))})
    elif args.action == "invert":
        _emit({"x": w.invert(_float(args.value, "--value"))})
    else:
        b = float(poisson_bracket(w, PhaseSpacePoint(_float(args.x, "--x"), _float(args.p, "--p"))))
        _emit({"bracket": b, "residual": abs(b - 1.0)})
    return 0


# -- gft --------------------------------------------------------------------

def _kernel_spec(value):
    d = _json_arg(value, "--kernel") or {}
    try:
        return gft.MixedKernelSpec(
            warp_from_dict(d["source_warp"]) if "source_warp" in d else identity(),
            warp_from_dict(d["target_warp"]) if "target_warp" in d else identity(),
            int(d.get("sign", 1)),
            d.get("source", "x"),
            d.get("target", "k"),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"--kernel: {exc}") from exc


def cmd_gft(args):
    spec = _kernel_spec(args.kernel)
    coord = args.coord or spec.source
    if args.input:
        f = SampledSignal.from_csv(args.input, coord)
    elif args.source_grid is not None:
        f = SampledSignal.from_function(coord, _grid(args.source_grid, "--source-grid"),
                                        lambda u: np.exp(-0.5 * u * u))
    else:
        raise UsageError("need --input or --source-grid")
    target = _grid(args.target_grid, "--target-grid")
    check = not args.allow_truncation
    g = gft.forward(spec, f, target, target_mode=args.target_mode, method=args.method,
                    check=check, threads=args.threads)
    g.to_csv(args.output or _out_path(args, "gft.csv"))
    summary = {}
    if args.check_gaussian:
        K = g.nodes if args.target_mode == "warped" else spec.target_warp(g.nodes)
        summary["max_error"] = float(np.max(np.abs(g.samples - np.exp(-0.5 * K * K))))
    if args.round_trip:
        mode = "warped" if f.is_warped else "raw"
        back = gft.inverse(spec, g, f.nodes, source_mode=mode, check=check, threads=args.threads)
        summary["round_trip_error"] = float(np.max(np.abs(back.samples - f.samples)))
    if summary:
        _emit(summary)
    return 0


# -- chirp ------------------------------------------------------------------

def cmd_chirp(args):
    if args.action == "synth":
        spec = chirp.ChirpSpec(_warp(args.warp))
        s = chirp.synthesize(spec, _grid(args.t_grid, "--t-grid", chirp.DEFAULT_T_GRID),
                             sampling=args.sampling, check=not args.allow_truncation)
        path = args.output or _out_path(args, "chirp.csv")
        s.to_csv(path)
        _emit({"output": path, "coord": s.coord, "count": int(s.nodes.size)})
        return 0

    if not args.input:
        raise UsageError("--input is required")
    S = SampledSignal.from_csv(args.input, args.coord)

    if args.action == "harmonize":
        T = _warp(args.warp)
        omega_warp = _warp(args.omega_warp, "--omega-warp", identity())
        t_grid = None
        if args.t_grid is not None:
            t_grid = _grid(args.t_grid, "--t-grid")
        s_hat, report, _, s_omega = chirp.harmonize(
            S, T, omega_warp,
            omega_big_grid=_grid(args.omega_big_grid, "--omega-big-grid", chirp.DEFAULT_OMEGA_BIG_GRID),
            t_grid=t_grid,
            omega_grid=_grid(args.omega_grid, "--omega-grid", chirp.DEFAULT_OMEGA_GRID),
            check=not args.allow_truncation, threads=args.threads)
        s_hat.to_csv(_out_path(args, "harmonized.csv"))
        s_omega.to_csv(_out_path(args, "spectrum.csv"))
        _write_json(_out_path(args, "report.json"), report.to_dict())
        if args.svg:
            polyline_svg(s_omega.nodes, np.abs(s_omega.samples), _out_path(args, "spectrum.svg"),
                         title="|S(omega)|")
        _emit(report.to_dict())
        return 0

    axes = _json_arg(args.axes, "--axes")
    if axes is None:
        raise UsageError("--axes is required (list of coefficient lists)")
    est = chirp.estimate_warp(S, axes, seed=args.seed, threads=args.threads)
    _write_json(_out_path(args, "estimate.json"), est.to_dict())
    _emit(est.to_dict())
    return 0


# -- diffuse ----------------------------------------------------------------

def cmd_diffuse(args):
    if args.action == "msd":
        if not args.input:
            raise UsageError("--input is required")
        rho = diffusion.DensityProfile.from_csv(args.input, coord="x", measure=args.measure)
        _emit({"msd": diffusion.msd(rho), "mass": rho.mass})
        return 0

    w = _warp(args.warp)
    D = _float(args.D, "--D")
    times = _json_arg(args.times, "--times")
    times = diffusion.default_times() if times is None else np.asarray(times, dtype=float)
    mode = args.mode or "dx"
    profiles = []
    series = diffusion.msd_experiment(w, D, times, mode=mode, threads=args.threads,
                                      profiles=profiles)
    series.to_csv(_out_path(args, "msd.csv"))
    if not args.no_profiles:
        for i, rho in enumerate(profiles):
            rho.to_csv(_out_path(args, f"profile_{i:03d}.csv"))
    if args.svg:
        polyline_svg(series.times, series.msd, _out_path(args, "msd.svg"),
                     title="MSD vs t", logx=True, logy=True)
    slopes = series.local_slopes
    _emit({"first_slope": float(slopes[0]), "last_slope": float(slopes[-1]),
           "points": int(series.times.size)})
    return 0


# -- parser -----------------------------------------------------------------

def build_parser():
    p = _Parser(prog="warpft", description=__doc__.split("\n\n")[0])
    p.add_argument("--config", help="JSON file supplying option defaults")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--seed", type=int, default=None,
                   help="shuffles search order only; results do not depend on it")
    p.add_argument("--threads", type=int, default=1)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    pw = sub.add_parser("warp", help="evaluate, invert, or check a warp")
    pw.add_argument("action", choices=["eval", "invert", "check-bracket"])
    pw.add_argument("--warp")
    pw.add_argument("--x")
    pw.add_argument("--value")
    pw.add_argument("--p")
    pw.set_defaults(func=cmd_warp)

    pg = sub.add_parser("gft", help="generalized/mixed Fourier transform of a CSV signal")
    pg.add_argument("--input")
    pg.add_argument("--coord", help="label of the input nodes (x, W, t, T, ...)")
    pg.add_argument("--source-grid", help="synthesize exp(-u^2/2) on this grid instead of --input")
    pg.add_argument("--kernel")
    pg.add_argument("--target-grid")
    pg.add_argument("--target-mode", choices=["warped", "raw"], default="warped")
    pg.add_argument("--method", choices=["direct", "fft"], default="direct")
    pg.add_argument("--output")
    pg.add_argument("--check-gaussian", action="store_true")
    pg.add_argument("--round-trip", action="store_true")
    pg.add_argument("--allow-truncation", action="store_true")
    pg.set_defaults(func=cmd_gft)

    pc = sub.add_parser("chirp", help="synthesize, harmonize, or estimate chirps")
    pc.add_argument("action", choices=["synth", "harmonize", "estimate"])
    pc.add_argument("--warp")
    pc.add_argument("--omega-warp")
    pc.add_argument("--input")
    pc.add_argument("--coord", default="t")
    pc.add_argument("--sampling", choices=["t", "T"], default="t")
    pc.add_argument("--t-grid")
    pc.add_argument("--omega-big-grid")
    pc.add_argument("--omega-grid")
    pc.add_argument("--axes")
    pc.add_argument("--output")
    pc.add_argument("--svg", action="store_true")
    pc.add_argument("--allow-truncation", action="store_true")
    pc.set_defaults(func=cmd_chirp)

    pd = sub.add_parser("diffuse", help="warped diffusion and MSD scaling")
    pd.add_argument("action", choices=["run", "msd"])
    pd.add_argument("--warp")
    pd.add_argument("--D")
    pd.add_argument("--times")
    pd.add_argument("--mode", choices=["dx", "dW"])
    pd.add_argument("--input")
    pd.add_argument("--measure", choices=["dx", "dW"], default="dx")
    pd.add_argument("--no-profiles", action="store_true", help="skip the per-time profile CSVs")
    pd.add_argument("--svg", action="store_true")
    pd.set_defaults(func=cmd_diffuse)
    return p


def _apply_config(args):
    if not args.config:
        return
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"--config: {exc}") from exc
    if not isinstance(cfg, dict):
        raise UsageError("--config must hold a JSON object")
    for key, value in cfg.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) in (None, False):
            setattr(args, attr, value)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        _apply_config(args)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WarpftError, ValueError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
