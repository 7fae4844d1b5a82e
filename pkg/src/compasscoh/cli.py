"""Command-line interface.

Angles cross this boundary as theta/pi; outputs are byte-stable for a
fixed configuration and embed the fully-resolved config (defaults
included) plus the tool version.  Errors go to stderr as one-line JSON
{"code", "message"}; exit status is 0 on success, 1 for usage problems,
2 for computational failures such as exceeding the exact-backend size.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__, families
from .codes import (InvalidCodeError, build_code, family_rotated_surface,
                    family_x_shor, family_z_shor, family_z_stacked,
                    load_coloring, random_coloring, save_coloring, validate)
from .decoder import build_matching_graph, decode_bruteforce, decode_mwpm
from .exact import MIN_WEIGHT, TooLargeError, get_backend
from .experiments import (AnalyticFamilySource, CodeSource, find_crossings,
                          interpolation_curve, read_csv, source_for_rows,
                          sweep, table_to_json, write_csv)
from .ptm import kappa, r1

_FAMILY_ALIASES = {"rep": families.REPETITION, "zshor": families.Z_SHOR,
                   "xshor": families.X_SHOR, "zstacked": families.Z_STACKED}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_thetas(text: str) -> list[float]:
    try:
        parts = [float(x) for x in text.split(":")]
    except ValueError as exc:
        raise UsageError(f"bad --thetas {text!r}: {exc}") from exc
    if len(parts) != 3:
        raise UsageError("--thetas expects A:B:STEP in units of pi")
    a, b, step = parts
    if step <= 0 or b < a:
        raise UsageError("--thetas needs STEP > 0 and B >= A")
    count = int(round((b - a) / step)) + 1
    return [round(a + k * step, 10) for k in range(count)]


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"bad {flag} {text!r}: {exc}") from exc


def _parse_float_list(text: str, flag: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"bad {flag} {text!r}: {exc}") from exc


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required here")


def _config_dict(args, command: str) -> dict:
    skip = {"func", "config", "command", "subcommand"}
    out = {"command": command, "version": __version__}
    for key, value in sorted(vars(args).items()):
        if key in skip or callable(value):
            continue
        out[key] = value
    return out


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


# ---------------------------------------------------------------------------
# Subcommands

def _gen_coloring(args):
    family = args.family
    if family == "zshor":
        _require(args, "dx", "dz")
        return family_z_shor(args.dx, args.dz)
    if family == "xshor":
        _require(args, "dx", "dz")
        return family_x_shor(args.dx, args.dz)
    if family == "rsc":
        _require(args, "dx")
        if args.dz is not None and args.dz != args.dx:
            raise UsageError("rsc is square; --dz must match --dx")
        return family_rotated_surface(args.dx)
    if family == "zstacked":
        _require(args, "dx", "h")
        if args.dz is not None and args.dz != args.dx:
            raise UsageError("zstacked is square; --dz must match --dx")
        return family_z_stacked(args.dx, args.h)
    if family == "random":
        _require(args, "dx", "dz", "q_shor")
        return random_coloring(args.dx, args.dz, args.q_shor, args.seed)
    raise UsageError(f"unknown family {family!r}")


def _cmd_code_gen(args):
    _require(args, "out")
    coloring = _gen_coloring(args)
    save_coloring(coloring, args.out, meta=_config_dict(args, "code gen"))
    return 0


def _cmd_code_validate(args):
    code = build_code(load_coloring(args.file))
    report = validate(code)
    _print_json({
        "config": _config_dict(args, "code validate"),
        "passed": report.passed,
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                   for c in report.checks],
        "n": code.n,
        "num_stabilizers": len(code.x_stabilizers) + len(code.z_stabilizers)})
    return 0


def _cmd_decode(args):
    _require(args, "code", "syndrome")
    code = build_code(load_coloring(args.code))
    if args.oracle:
        corr = decode_bruteforce(code, args.syndrome)
    else:
        corr = decode_mwpm(build_matching_graph(code), args.syndrome)
    print(corr.to_bits())
    return 0


def _cmd_channel_exact(args):
    _require(args, "code", "theta_over_pi")
    code = build_code(load_coloring(args.code))
    backend = get_backend(code)
    theta = args.theta_over_pi * math.pi
    ch = backend.channel(theta, args.recovery)
    if args.dump_distribution:
        dist = backend.distribution(theta, args.recovery)
        with open(args.dump_distribution, "w") as fh:
            json.dump([{"syndrome": bits, "p": p, "theta_s": ts}
                       for bits, p, ts in dist.entries], fh, indent=2)
            fh.write("\n")
    _print_json({"epsilon": ch.epsilon, "delta": ch.delta, "kappa": kappa(ch),
                 "r1": r1(ch), "config": _config_dict(args, "channel exact")})
    return 0


def _cmd_channel_analytic(args):
    _require(args, "family", "theta_over_pi")
    theta = args.theta_over_pi * math.pi
    fam = args.family
    if fam == "rep":
        _require(args, "l")
        ch = families.repetition_exact(args.l, theta, args.recovery)
    elif fam == "zshor":
        _require(args, "dx", "dz")
        ch = families.z_shor_channel(args.dx, args.dz, theta, args.recovery)
    elif fam == "xshor":
        _require(args, "dx", "dz")
        ch = families.x_shor_channel(args.dx, args.dz, theta)
    elif fam == "zstacked":
        _require(args, "l", "h")
        ch = families.z_stacked_channel(args.l, args.h, theta)
    else:
        raise UsageError(f"unknown analytic family {fam!r}")
    _print_json({"epsilon": ch.epsilon, "delta": ch.delta, "kappa": kappa(ch),
                 "r1": r1(ch), "config": _config_dict(args, "channel analytic")})
    return 0


def _make_sweep_source(args):
    if args.family == "rsc":
        return CodeSource("rsc", lambda l: build_code(family_rotated_surface(l)),
                          args.recovery)
    fam = _FAMILY_ALIASES.get(args.family)
    if fam is None:
        raise UsageError(f"unknown sweep family {args.family!r}")
    if fam == families.Z_STACKED:
        _require(args, "h")
    return AnalyticFamilySource(fam, args.recovery, args.h)


def _cmd_sweep(args):
    _require(args, "family", "thetas", "distances", "out")
    source = _make_sweep_source(args)
    table = sweep(source, _parse_thetas(args.thetas),
                  _parse_int_list(args.distances, "--distances"))
    config = _config_dict(args, "sweep")
    if args.format == "json":
        with open(args.out, "w") as fh:
            fh.write(table_to_json(table, config))
            fh.write("\n")
    else:
        write_csv(table, args.out, config)
    return 0


def _cmd_threshold(args):
    _require(args, "in_path")
    table = read_csv(args.in_path)
    estimate = find_crossings(table, args.metric, source=source_for_rows(table))
    _print_json({
        "config": _config_dict(args, "threshold"),
        "metric": estimate.metric,
        "lower_over_pi": estimate.lower_over_pi,
        "upper_over_pi": estimate.upper_over_pi,
        "one_sided": estimate.one_sided,
        "crossings": [{"d_low": c.d_low, "d_high": c.d_high,
                       "lo_over_pi": c.lo_over_pi, "hi_over_pi": c.hi_over_pi}
                      for c in estimate.crossings]})
    return 0


def _cmd_interpolate(args):
    _require(args, "q_shors", "d", "out")
    table, estimates = interpolation_curve(
        _parse_int_list(args.d, "--d"),
        _parse_float_list(args.q_shors, "--q-shors"),
        _parse_thetas(args.thetas), args.codes, args.seed,
        args.recovery, args.samples, args.jobs)
    config = _config_dict(args, "interpolate")
    if args.format == "json":
        with open(args.out, "w") as fh:
            fh.write(table_to_json(table, config))
            fh.write("\n")
    else:
        write_csv(table, args.out, config)
    _print_json({
        "config": config,
        "estimates": {str(q): {"lower_over_pi": e.lower_over_pi,
                               "upper_over_pi": e.upper_over_pi,
                               "one_sided": e.one_sided}
                      for q, e in estimates.items()}})
    return 0


# ---------------------------------------------------------------------------
# Parser assembly

def _build_parser() -> _Parser:
    parser = _Parser(prog="compasscoh", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file supplying default flag values")
        p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                       help="parallel workers (results are identical for any value)")

    code = sub.add_parser("code", help="generate and validate code files")
    code_sub = code.add_subparsers(dest="subcommand", required=True)
    gen = code_sub.add_parser("gen")
    common(gen)
    gen.add_argument("--family", choices=["zshor", "xshor", "rsc", "zstacked", "random"])
    gen.add_argument("--dx", type=int)
    gen.add_argument("--dz", type=int)
    gen.add_argument("--h", type=int)
    gen.add_argument("--q-shor", dest="q_shor", type=float)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out")
    gen.set_defaults(func=_cmd_code_gen)
    val = code_sub.add_parser("validate")
    common(val)
    val.add_argument("file")
    val.set_defaults(func=_cmd_code_validate)

    dec = sub.add_parser("decode", help="minimum-weight decode one syndrome")
    common(dec)
    dec.add_argument("--code")
    dec.add_argument("--syndrome", help="bit string, X check 0 first")
    dec.add_argument("--oracle", action="store_true",
                     help="use the brute-force decoder (n <= 20)")
    dec.set_defaults(func=_cmd_decode)

    chan = sub.add_parser("channel", help="logical channel parameters")
    chan_sub = chan.add_subparsers(dest="subcommand", required=True)
    cex = chan_sub.add_parser("exact")
    common(cex)
    cex.add_argument("--code")
    cex.add_argument("--theta-over-pi", dest="theta_over_pi", type=float)
    cex.add_argument("--recovery", choices=["minweight", "ml"], default=MIN_WEIGHT)
    cex.add_argument("--dump-distribution", dest="dump_distribution")
    cex.set_defaults(func=_cmd_channel_exact)
    can = chan_sub.add_parser("analytic")
    common(can)
    can.add_argument("--family", choices=["rep", "zshor", "xshor", "zstacked"])
    can.add_argument("--l", type=int)
    can.add_argument("--dx", type=int)
    can.add_argument("--dz", type=int)
    can.add_argument("--h", type=int)
    can.add_argument("--theta-over-pi", dest="theta_over_pi", type=float)
    can.add_argument("--recovery", choices=["minweight", "ml"], default=MIN_WEIGHT)
    can.set_defaults(func=_cmd_channel_analytic)

    sw = sub.add_parser("sweep", help="grid a family over (distance, theta)")
    common(sw)
    sw.add_argument("--family", choices=["rep", "zshor", "xshor", "zstacked", "rsc"])
    sw.add_argument("--h", type=int)
    sw.add_argument("--recovery", choices=["minweight", "ml"], default=MIN_WEIGHT)
    sw.add_argument("--thetas", help="A:B:STEP in units of pi")
    sw.add_argument("--distances", help="comma-separated distances")
    sw.add_argument("--out")
    sw.add_argument("--format", choices=["csv", "json"], default="csv")
    sw.set_defaults(func=_cmd_sweep)

    th = sub.add_parser("threshold", help="crossing bounds from a sweep file")
    common(th)
    th.add_argument("--in", dest="in_path")
    th.add_argument("--metric", choices=["r1", "diamond"], default="r1")
    th.set_defaults(func=_cmd_threshold)

    ip = sub.add_parser("interpolate",
                        help="random-code ensembles across q_shor densities")
    common(ip)
    ip.add_argument("--q-shors", dest="q_shors")
    ip.add_argument("--d", help="comma-separated distances (exact backend sizes)")
    ip.add_argument("--codes", type=int, default=200)
    ip.add_argument("--samples", type=int, default=200)
    ip.add_argument("--seed", type=int, default=0)
    ip.add_argument("--thetas", default="0.05:0.45:0.05")
    ip.add_argument("--recovery", choices=["minweight", "ml"], default=MIN_WEIGHT)
    ip.add_argument("--out")
    ip.add_argument("--format", choices=["csv", "json"], default="csv")
    ip.set_defaults(func=_cmd_interpolate)
    return parser


def _apply_config(args, argv) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        raise UsageError("--config file must hold a JSON object")
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise UsageError(f"config key {key!r} is not a flag of this command")
        given = f"--{key}" in argv or f"--{dest.replace('_', '-')}" in argv
        if not given:
            setattr(args, dest, value)


def _fail(exit_code: int, code: str, message: str) -> int:
    sys.stderr.write(json.dumps({"code": code, "message": message}) + "\n")
    return exit_code


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, argv)
        return args.func(args)
    except UsageError as exc:
        return _fail(1, "usage", str(exc))
    except FileNotFoundError as exc:
        return _fail(1, "missing-file", str(exc))
    except (InvalidCodeError, json.JSONDecodeError) as exc:
        return _fail(1, "invalid-input", str(exc))
    except ValueError as exc:
        return _fail(1, "invalid-value", str(exc))
    except (TooLargeError, MemoryError) as exc:
        return _fail(2, "computational", str(exc))


if __name__ == "__main__":
    sys.exit(main())
