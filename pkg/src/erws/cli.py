"""Command-line surface: simulate | ensemble | exact | specfun | verify.

Formats are pinned for reproducibility: CSV with a header row, '.' decimal
separator and '\\n' newlines; JSON with stable key order. Any documented
command with a fixed seed reruns byte-identically.

Exit codes: 0 success (or verification PASS), 1 verification FAIL,
2 usage or parameter error.
"""

import argparse
import json
import secrets
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .ensemble import run_ensemble
from .errors import ErwsError, IoError
from .exact_moments import QUANTITIES, moment_value
from .martingale import lil_series, track
from .oracle import MAX_ORACLE_HORIZON, oracle_moment_table
from .params import WalkParams, validate_params
from .simulator import default_checkpoint_grid, simulate_path
from .specfun import (SeriesControl, coeff_a, coeff_b, coeff_bm, log_gamma,
                      ml_density, ml_mgf, ml_moment, pochhammer, stirling1u,
                      v_limit, v_partial)
from .stats import moment_with_se
from .verify import VERIFY_DEFAULTS, run_verify


@dataclass(frozen=True)
class RunConfig:
    """Flat bag of CLI settings; round-trips through JSON unchanged."""
    command: str | None = None
    test: str | None = None
    p: float | None = None
    q: float | None = None
    r: float | None = None
    s: float | None = None
    n: int | None = None
    reps: int | None = None
    seed: int | None = None
    out: str | None = None
    checkpoints: str | None = None
    threads: int | None = None
    m_far: int | None = None
    fresh_seed: bool = False

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        return cls(**json.loads(text))


def read_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise IoError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise IoError(f"config {path} must hold a JSON object")
    return data


def write_report(report: dict, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(report, indent=2) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write report {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _csv(rows, header) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erws",
                                     description="elephant random walk with stops: "
                                                 "simulation and verification lab")
    parser.add_argument("--version", action="version", version=f"erws {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, reps=False):
        sp.add_argument("--p", type=float)
        sp.add_argument("--q", type=float)
        sp.add_argument("--r", type=float)
        sp.add_argument("--s", type=float)
        sp.add_argument("--n", type=int)
        if reps:
            sp.add_argument("--reps", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--out")
        sp.add_argument("--config")
        sp.add_argument("--threads", type=int)

    sp = sub.add_parser("simulate", help="one path; checkpoint CSV + JSON sidecar")
    add_common(sp)
    sp.add_argument("--checkpoints", help="comma-separated checkpoint times (default geometric)")
    sp.add_argument("--martingale", action="store_true",
                    help="append M,N,predvar,quadvar,lil_stat columns")

    sp = sub.add_parser("ensemble", help="replicate ensemble; JSON summary, optional CSV")
    add_common(sp, reps=True)
    sp.add_argument("--m-far", dest="m_far", type=int,
                    help="continue each path to this secondary horizon")

    sp = sub.add_parser("exact", help="exact moment table as CSV")
    add_common(sp)
    sp.add_argument("--no-oracle", action="store_true",
                    help="skip the brute-force oracle column")

    sp = sub.add_parser("specfun", help="spot-evaluate a special function")
    sp.add_argument("fn", choices=["log-gamma", "coeff-a", "coeff-b", "coeff-bm",
                                   "pochhammer", "stirling", "ml-mgf", "ml-density",
                                   "ml-moment", "v-partial", "v-limit"])
    sp.add_argument("--x", type=float)
    sp.add_argument("--t", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--a", type=float)
    sp.add_argument("--b", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--rel-tol", dest="rel_tol", type=float)
    sp.add_argument("--max-terms", dest="max_terms", type=int)

    sp = sub.add_parser("verify", help="statistical verification of one limit theorem")
    sp.add_argument("test", choices=sorted(VERIFY_DEFAULTS))
    add_common(sp, reps=True)
    sp.add_argument("--m-far", dest="m_far", type=int)
    sp.add_argument("--fresh-seed", dest="fresh_seed", action="store_true",
                    help="draw a random seed instead of the published default")
    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the JSON config file; flags win."""
    path = getattr(args, "config", None)
    if not path:
        return args
    config = read_config(path)
    for key, value in config.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) in (None, False):
            setattr(args, attr, value)
    return args


def _require_params(args) -> WalkParams:
    missing = [f"--{k}" for k in ("p", "q", "r", "s") if getattr(args, k) is None]
    if missing:
        raise ErwsError(f"missing required parameter flags: {' '.join(missing)}")
    params = WalkParams(args.p, args.q, args.r, args.s)
    validate_params(params)
    return params


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ErwsError(f"missing required flags: {' '.join(missing)}")


def _cmd_simulate(args) -> int:
    params = _require_params(args)
    _require(args, "n", "seed")
    c = validate_params(params)
    if args.checkpoints:
        grid = [int(tok) for tok in str(args.checkpoints).split(",") if tok.strip()]
    else:
        grid = default_checkpoint_grid(args.n)
    path = simulate_path(params, args.n, args.seed, replicate=0,
                         checkpoint_grid=grid, record_increments=bool(args.martingale))
    if args.martingale:
        tr = track(path, c)
        lil = lil_series(tr.S, tr.Sigma, c.regime)
        rows = zip(tr.ns, tr.S, tr.Sigma, tr.M, tr.N, tr.predvar, tr.quadvar, lil)
        text = _csv(rows, ["n", "S", "Sigma", "M", "N", "predvar", "quadvar", "lil_stat"])
    else:
        text = _csv(zip(path.ns, path.S, path.Sigma), ["n", "S", "Sigma"])
    if args.out:
        _write_text(args.out, text)
        sidecar = {
            "params": params.as_dict(),
            "base_seed": args.seed,
            "replicate": 0,
            "horizon": args.n,
            "martingale_columns": bool(args.martingale),
            "version": __version__,
        }
        write_report(sidecar, args.out + ".meta.json")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_ensemble(args) -> int:
    params = _require_params(args)
    _require(args, "n", "reps", "seed")
    stats = run_ensemble(params, args.n, args.reps, args.seed,
                         threads=args.threads, m_far=args.m_far)
    mean_S_est, mean_S_se = moment_with_se(stats.S.astype(np.float64), 1)
    mean_Sig_est, mean_Sig_se = moment_with_se(stats.Sigma.astype(np.float64), 1)
    summary = {
        "params": params.as_dict(),
        "n": args.n,
        "R": args.reps,
        "base_seed": args.seed,
        "m_far": args.m_far,
        "mean_S": mean_S_est,
        "mean_S_se": mean_S_se,
        "mean_Sigma": mean_Sig_est,
        "mean_Sigma_se": mean_Sig_se,
        "version": __version__,
    }
    if args.out:
        if args.m_far is not None:
            rows = zip(range(args.reps), stats.S, stats.Sigma, stats.S_far, stats.Sigma_far)
            text = _csv(rows, ["replicate", "S", "Sigma", "S_far", "Sigma_far"])
        else:
            text = _csv(zip(range(args.reps), stats.S, stats.Sigma),
                        ["replicate", "S", "Sigma"])
        _write_text(args.out, text)
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return 0


def _cmd_exact(args) -> int:
    params = _require_params(args)
    _require(args, "n")
    with_oracle = (not args.no_oracle) and args.n <= MAX_ORACLE_HORIZON
    oracle_values = oracle_moment_table(params, args.n) if with_oracle else None
    rows = []
    for horizon in range(1, args.n + 1):
        for quantity in QUANTITIES:
            value = moment_value(params, quantity, horizon)
            if oracle_values is not None:
                o = float(oracle_values[quantity][horizon - 1])
                rows.append((quantity, horizon, value, o, abs(value - o)))
            else:
                rows.append((quantity, horizon, value, None, None))
    text = _csv(rows, ["quantity", "n", "closed_form", "oracle", "abs_err"])
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_specfun(args) -> int:
    ctl = SeriesControl(rel_tol=args.rel_tol or 1e-14,
                        max_terms=args.max_terms or 10 ** 6)

    def need(*names):
        _require(args, *names)

    fn = args.fn
    if fn == "log-gamma":
        need("x"); value = log_gamma(args.x)
    elif fn == "coeff-a":
        need("n", "a"); value = coeff_a(args.n, args.a)
    elif fn == "coeff-b":
        need("n", "b"); value = coeff_b(args.n, args.b)
    elif fn == "coeff-bm":
        need("n", "m", "b"); value = coeff_bm(args.n, args.m, args.b)
    elif fn == "pochhammer":
        need("x", "m"); value = pochhammer(args.x, args.m)
    elif fn == "stirling":
        need("m", "k"); value = stirling1u(args.m, args.k)
    elif fn == "ml-mgf":
        need("alpha", "t"); value = ml_mgf(args.alpha, args.t, ctl)
    elif fn == "ml-density":
        need("alpha", "x"); value = ml_density(args.alpha, args.x, ctl)
    elif fn == "ml-moment":
        need("alpha", "m"); value = ml_moment(args.alpha, args.m)
    elif fn == "v-partial":
        need("n", "a", "b"); value = v_partial(args.n, args.a, args.b)
    else:
        need("a", "b"); value = v_limit(args.a, args.b, ctl)
    sys.stdout.write(f"{value!r}\n")
    return 0


def _cmd_verify(args) -> int:
    defaults = VERIFY_DEFAULTS[args.test]
    given = [getattr(args, k) for k in ("p", "q", "r", "s")]
    if any(v is not None for v in given):
        params = _require_params(args)
    else:
        params = defaults.params
    n = args.n if args.n is not None else defaults.n
    reps = args.reps if args.reps is not None else defaults.R
    if args.fresh_seed:
        seed = secrets.randbits(63)
    elif args.seed is not None:
        seed = args.seed
    else:
        seed = defaults.seed
    m_far = args.m_far if args.m_far is not None else defaults.m_far
    report = run_verify(args.test, params, n, reps, seed,
                        m_far=m_far, threads=args.threads)
    payload = report.as_dict()
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    if args.out:
        write_report(payload, args.out)
    return 0 if report.verdict == "PASS" else 1


_COMMANDS = {
    "simulate": _cmd_simulate,
    "ensemble": _cmd_ensemble,
    "exact": _cmd_exact,
    "specfun": _cmd_specfun,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return _COMMANDS[args.command](args)
    except ErwsError as exc:
        print(f"erws: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
