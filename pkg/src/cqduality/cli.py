"""Command-line front end.

Every subcommand prints a JSON object on stdout (the suite prints a table and
writes JSON only with ``--json``). Exit status: 0 when every check passes,
1 when a check fails, 2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from . import becduality, bsccoding, bscsecrecy, entropyduality, psccoding, pscsecrecy
from .channelmodels import ChannelVector
from .codebook import as_message, load_code
from .errors import ConfigError, DualityError
from .gf2core import CodePair, build_pair
from .suite import DEFAULT_CODES, DEFAULT_THETAS, SuiteConfig, _jsonable, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def parse_angle(text: str) -> float:
    """Radians, or degrees written as ``deg:x``."""
    text = text.strip()
    try:
        if text.startswith("deg:"):
            return math.radians(float(text[4:]))
        return float(text)
    except ValueError as exc:
        raise ConfigError(f"cannot parse angle {text!r}") from exc


def parse_floats(text: str, angle: bool = False) -> list[float]:
    parts = [t for t in text.split(",") if t.strip()]
    if not parts:
        raise ConfigError("empty value list")
    if angle:
        return [parse_angle(t) for t in parts]
    try:
        return [float(t) for t in parts]
    except ValueError as exc:
        raise ConfigError(f"cannot parse number list {text!r}") from exc


def parse_positions(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse positions {text!r}") from exc


def _channel(args: argparse.Namespace, n: int) -> ChannelVector:
    if args.theta is not None:
        return ChannelVector.from_thetas(parse_floats(args.theta, angle=True), n)
    if args.p is not None:
        return ChannelVector.from_ps(parse_floats(args.p), n)
    raise ConfigError("one of --theta or --p is required")


def _pair(args: argparse.Namespace) -> CodePair:
    if not args.code:
        raise ConfigError("--code is required")
    return build_pair(load_code(args.code))


def _vector(x) -> list[float]:
    return [float(v) for v in np.asarray(x).ravel()]


# subcommands --------------------------------------------------------------------


def cmd_pe(args) -> tuple[dict, bool]:
    pair = _pair(args)
    ch = _channel(args, pair.n)
    spec = psccoding.spectral(pair, ch)
    pe = psccoding.block_error_psc(pair, ch)
    out = {"pe_closed_form": pe, "pe_oracle": None, "residual": None, "shat": _vector(spec.shat)}
    ok = True
    if args.oracle:
        oracle = psccoding.oracle_srm(pair, ch, args.oracle_cap)
        out["pe_oracle"] = oracle.pe
        out["residual"] = abs(oracle.pe - pe)
        ok = out["residual"] <= 1e-8
    return out, ok


def cmd_secrecy_bsc(args) -> tuple[dict, bool]:
    pair = _pair(args)
    ch = _channel(args, pair.n)
    received = as_message(args.received, pair.n) if args.received else 0
    post = bscsecrecy.posterior(pair, ch, received)
    b = bscsecrecy.bhattacharyya_uniform(post)
    pe = psccoding.block_error_psc(pair, ch)
    ok = abs(b * b - (1.0 - pe)) <= 1e-10
    return {"posterior": _vector(post), "bhattacharyya": b, "b_squared": b * b, "matches_pe": ok}, ok


def cmd_coding_bsc(args) -> tuple[dict, bool]:
    pair = _pair(args)
    ch = _channel(args, pair.n)
    map_s = bsccoding.map_success_bsc(pair, ch)
    srm_s = bsccoding.srm_success_bsc(pair, ch)
    return {"map_success": map_s, "srm_success": srm_s, "gap": map_s - srm_s}, srm_s <= map_s + 1e-12


def cmd_secrecy_psc(args) -> tuple[dict, bool]:
    pair = _pair(args)
    ch = _channel(args, pair.n)
    opt = pscsecrecy.optimal_fidelity(pair, ch).fidelity
    avg = pscsecrecy.suboptimal_fidelity_avg(pair, ch)
    ident = pscsecrecy.trivial_fidelity_identity_sigma(pair, ch)[1]
    induced = pscsecrecy.srm_induced_distributions(pair, ch)
    uniform = 2.0 ** (pair.k - pair.n)
    ok = (
        ident <= avg + 1e-10
        and avg <= opt + 1e-10
        and float(np.max(np.abs(induced.d - uniform))) <= 1e-10
        and float(np.max(np.abs(induced.f - uniform))) <= 1e-10
    )
    out = {
        "optimal_fidelity": opt,
        "avg_sigma_fidelity": avg,
        "identity_sigma_fidelity": ident,
        "srm_d": _vector(induced.d),
        "srm_f": _vector(induced.f),
    }
    return out, ok


def cmd_entropy(args) -> tuple[dict, bool]:
    pair = _pair(args)
    ch = _channel(args, pair.n)
    rep = entropyduality.entropy_report(pair, ch)
    out = {
        "h_y_given_s0": rep.h_y_given_s0,
        "h_sprime_given_yprime": rep.h_sprime_given_yprime,
        "secrecy_residual": rep.secrecy_residual,
        "h_u_given_y_s0": rep.h_u_given_y_s0,
        "h_uprime_given_yprime_sprime": rep.h_uprime_given_yprime_sprime,
        "coding_rhs": rep.coding_rhs,
        "coding_residual": rep.coding_residual,
    }
    ok = rep.secrecy_residual <= 1e-10 and rep.coding_residual <= 1e-9
    if args.gexit_bit is not None:
        i = args.gexit_bit - 1
        g = entropyduality.gexit_duality_check(pair, ch, i, args.step)
        e = entropyduality.exit_endpoint_check(pair, ch, i)
        out["gexit"] = {
            "bit": args.gexit_bit,
            "h_prime": g.h_prime,
            "step": g.step,
            "g_dual": g.g_dual,
            "g_primal": g.g_primal,
            "total": g.total,
            "total_half_step": g.total_half,
            "total_richardson": g.total_richardson,
            "residual": g.residual,
        }
        out["exit_endpoint"] = {
            "dual_entropy": e.dual_entropy,
            "primal_entropy": e.primal_entropy,
            "total": e.total,
            "residual": e.residual,
        }
        ok = ok and g.passed and e.passed
    return out, ok


def cmd_bec(args) -> tuple[dict, bool]:
    pair = _pair(args)
    E = becduality.ErasurePattern.of(pair.n, parse_positions(args.erase))
    out = becduality.report_dict(pair, E)
    ok = all(out[key]["passed"] for key in ("entropy_duality", "secrecy_coding_sum", "guessing"))
    return out, ok


def cmd_suite(args) -> int:
    codes = DEFAULT_CODES if args.codes is None else tuple(c for c in args.codes.split(";") if c.strip())
    if args.theta is not None:
        thetas = tuple(parse_floats(args.theta, angle=True))
    else:
        thetas = DEFAULT_THETAS
    kwargs = {"codes": codes, "thetas": thetas, "seed": args.seed, "include_timing": args.timing,
              "workers": args.workers}
    if args.oracle_cap is not None:
        kwargs["oracle_cap"] = args.oracle_cap
    report = run_suite(SuiteConfig(**kwargs))
    print(report.table())
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


COMMANDS = {
    "pe": cmd_pe,
    "secrecy-bsc": cmd_secrecy_bsc,
    "coding-bsc": cmd_coding_bsc,
    "secrecy-psc": cmd_secrecy_psc,
    "entropy": cmd_entropy,
    "bec": cmd_bec,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--code", help="named code (rep:n, even:n, hamming:n,k, e8, full:n, zero:n) or generator file")
    chan = common.add_mutually_exclusive_group()
    chan.add_argument("--theta", help="PSC angle in radians or deg:x; comma list for per-bit values")
    chan.add_argument("--p", help="BSC crossover probability; comma list for per-bit values")
    common.add_argument("--json", metavar="PATH", help="also write the JSON report to PATH")
    common.add_argument("--oracle-cap", type=int, default=None, help="largest n for dense oracles")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sub-suites")

    parser = argparse.ArgumentParser(prog="cqduality", description="Duality checks for binary linear codes on PSC/BSC.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("pe", parents=[common], help="PSC block error under the SRM")
    p.add_argument("--oracle", action="store_true", help="also run the dense SVD oracle")
    p = sub.add_parser("secrecy-bsc", parents=[common], help="BSC secret-key posterior")
    p.add_argument("--received", help="received word as a bit string, position 1 first")
    sub.add_parser("coding-bsc", parents=[common], help="MAP and SRM success on the BSC")
    sub.add_parser("secrecy-psc", parents=[common], help="PSC secrecy fidelities")
    p = sub.add_parser("entropy", parents=[common], help="entropy dualities, optionally GEXIT at one bit")
    p.add_argument("--gexit-bit", type=int, help="1-based bit position for the GEXIT and EXIT checks")
    p.add_argument("--step", type=float, default=1e-3, help="finite-difference step in h'")
    p = sub.add_parser("bec", parents=[common], help="erasure-channel identities")
    p.add_argument("--erase", required=True, help="1-based erased positions, comma separated (may be empty)")
    p = sub.add_parser("suite", parents=[common], help="run every cross-module check")
    p.add_argument("--codes", help="semicolon-separated code list (default: rep:3;even:3;hamming:7,4;e8)")
    p.add_argument("--timing", action="store_true", help="record per-check wall time")
    p.add_argument("--workers", type=int, default=1, help="run instances on this many threads")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.seed < 0 or args.seed >= 1 << 64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "suite":
            return cmd_suite(args)
        if args.oracle_cap is None:
            args.oracle_cap = psccoding.DEFAULT_ORACLE_CAP
        out, ok = COMMANDS[args.command](args)
    except DualityError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = json.dumps(_jsonable(out), sort_keys=True, indent=2)
    print(text)
    if args.json:
        Path(args.json).write_text(text + "\n")
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
