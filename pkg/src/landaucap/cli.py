"""Batch front end: read a JSON experiment record, run one pipeline, emit a table.

Commands map one-to-one onto the library layers: `capacity` runs the
minimax-norm ladder, `orthopoly` the monic orthogonalization, `toeplitz` the
level-q compression spectrum, `predict` the capacity-based limit predictions,
and `verify` a named cross-check suite. Results go to one CSV or JSON table;
every linear column has a log-domain twin because the spectra decay below
any fixed-precision linear representation within a few dozen eigenvalues.

Exit codes: 0 success, 1 a verify check failed, 2 malformed config or an
invariant violation, 3 an iterative solver did not converge, 4 the moment
matrix degenerated at the working precision.

The environment variable LANDAUCAP_THREADS caps the worker pool used for
independent ladder degrees; results are reduced in index order, so output
files are bit-identical for any thread count.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional

from mpmath import mp

from .chebyshev import capacity_estimate
from .errors import DegenerateMomentError, NonConvergenceError
from .landau import radial_oracle, theorem_predictions, toeplitz_spectrum
from .orthopoly import monic_orthogonalize, rho_estimates
from .region import capacity_known, region_from_config
from .verify import SUITE_NAMES, run_suite
from .weight import emission_digits, mixed_moments, weight_from_config

ALLOWED_PRECISIONS = (64, 128, 256, 512)
COMMANDS = ("capacity", "orthopoly", "toeplitz", "verify", "predict")


class ConfigError(ValueError):
    """A config record is missing, malformed, or out of documented range."""


def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"config is missing the {key!r} record")
    return cfg[key]


def _dec(x, digits: int) -> str:
    """Decimal string at the emission digit count; logs of zero print -inf."""
    if x == mp.ninf:
        return "-inf"
    return mp.nstr(mp.mpf(x), digits, strip_zeros=False)


def _log_dec(x, digits: int) -> str:
    """log of a linear value, or empty when the log is undefined."""
    x = mp.mpf(x)
    if x <= 0:
        return ""
    return mp.nstr(mp.log(x), digits, strip_zeros=False)


def _render_csv(header: List[str], rows: List[list], summary: List[tuple]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow(["true" if v is True else "false" if v is False else v for v in row])
    # summary trailer: keys carry a "# " prefix so table rows parse cleanly
    for key, val in summary:
        wr.writerow([f"# {key}", "true" if val is True else "false" if val is False else val]
                    + [""] * max(0, len(header) - 2))
    return buf.getvalue()


def _render_json(command: str, precision: int, header: List[str],
                 rows: List[list], summary: List[tuple]) -> str:
    payload = {
        "command": command,
        "precision_bits": precision,
        "rows": [dict(zip(header, row)) for row in rows],
        "summary": dict(summary),
    }
    return json.dumps(payload, indent=1) + "\n"


def _emit(command: str, precision: int, fmt: str, output: Optional[str],
          header: List[str], rows: List[list], summary: List[tuple]) -> None:
    if fmt == "json":
        text = _render_json(command, precision, header, rows, summary)
    else:
        text = _render_csv(header, rows, summary)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_degrees(cfg: dict) -> list:
    spec = cfg.get("degrees", [4, 8, 12, 16, 20, 24, 28, 32])
    if isinstance(spec, dict):
        try:
            spec = list(range(int(spec["start"]), int(spec["stop"]) + 1, int(spec.get("step", 2))))
        except KeyError as e:
            raise ConfigError(f"degree ladder record missing key {e}") from e
    if not isinstance(spec, list) or not all(isinstance(d, int) and d >= 1 for d in spec):
        raise ConfigError("degrees must be a list of integers >= 1 or a start/stop/step record")
    return spec


# ------------------------------------------------------------------ commands

def cmd_capacity(cfg: dict, precision: int, fmt: str, output: Optional[str]) -> int:
    region = region_from_config(_require(cfg, "region"))
    degrees = _parse_degrees(cfg)
    mult = int(cfg.get("m_multiplier", 16))
    if mult < 1:
        raise ConfigError("m_multiplier must be a positive integer")
    tol = float(cfg.get("tol", 2e-3))
    est = capacity_estimate(region, degrees, m_rule=lambda n: mult * n, tol=tol)
    digits = emission_digits(precision)
    rows = []
    for deg, val, conv in zip(est.degrees, est.values, est.converged):
        rows.append([deg, mult * deg, _dec(val, digits), _log_dec(val, digits), conv])
    summary = [("extrapolated", _dec(est.extrapolated, digits)),
               ("log_extrapolated", _log_dec(est.extrapolated, digits)),
               ("fit_degrees", " ".join(str(d) for d in est.fit_degrees))]
    known = capacity_known(region)
    if known is not None:
        summary.append(("known_value", _dec(known, digits)))
    _emit("capacity", precision, fmt, output,
          ["degree", "boundary_points", "tn_nth_root", "log_tn_nth_root", "converged"],
          rows, summary)
    return 0


def cmd_orthopoly(cfg: dict, precision: int, fmt: str, output: Optional[str]) -> int:
    w = weight_from_config(_require(cfg, "weight"))
    N = int(cfg.get("N", 24))
    table = mixed_moments(w, "plain", maxdeg=N, precision_bits=precision)
    basis = monic_orthogonalize(table)
    rho = rho_estimates(basis, n_min=int(cfg.get("n_min", 1)))
    digits = emission_digits(precision)
    rows = []
    with mp.workprec(precision + 10):
        for n in range(N + 1):
            log_mn = basis.log_norms[n]
            nth = _dec(mp.exp(log_mn / n), digits) if n >= 1 else ""
            rows.append([n, _dec(log_mn, digits), _dec(mp.exp(log_mn), digits), nth])
        summary = [("rho_plus_hat", _dec(rho.rho_plus_hat, digits)),
                   ("rho_minus_hat", _dec(rho.rho_minus_hat, digits)),
                   ("rho_extrapolated", _dec(rho.extrapolated, digits)),
                   ("tail_window", f"{rho.window[0]} {rho.window[1]}")]
    _emit("orthopoly", precision, fmt, output,
          ["n", "log_Mn", "Mn", "Mn_nth_root"], rows, summary)
    return 0


def cmd_toeplitz(cfg: dict, precision: int, fmt: str, output: Optional[str],
                 oracle: bool) -> int:
    w = weight_from_config(_require(cfg, "weight"))
    q = int(cfg.get("q", 0))
    b0 = float(cfg.get("b0", 2.0))
    N = int(cfg.get("N", 48))
    sp = toeplitz_spectrum(w, q, b0, N, precision)
    orc = radial_oracle(w, b0, N, precision, q=q) if oracle else None
    digits = emission_digits(precision)
    rows = []
    max_dev = mp.mpf(0)
    with mp.workprec(precision + 10):
        for i, lg in enumerate(sp.log_eigs):
            row = [i + 1, _dec(lg, digits), _dec(mp.exp(lg), digits), i < sp.trusted_count]
            if orc is not None:
                if i < min(sp.trusted_count, orc.trusted_count):
                    dev = abs(mp.exp(lg) - mp.exp(orc.log_eigs[i])) / mp.exp(orc.log_eigs[i])
                    max_dev = max(max_dev, dev)
                    row += [_dec(orc.log_eigs[i], digits), _dec(dev, 6)]
                else:
                    row += ["", ""]
            rows.append(row)
        summary = [("trusted_count", sp.trusted_count),
                   ("matrix_residual", _dec(sp.matrix_residual, 6)),
                   ("q", q), ("b0", _dec(b0, digits))]
        if orc is not None:
            summary.append(("max_oracle_rel_dev", _dec(max_dev, 6)))
    header = ["n", "log_sn", "sn", "trusted"]
    if orc is not None:
        header += ["oracle_log_sn", "oracle_rel_dev"]
    _emit("toeplitz", precision, fmt, output, header, rows, summary)
    return 0


def cmd_predict(cfg: dict, precision: int, fmt: str, output: Optional[str]) -> int:
    w = weight_from_config(_require(cfg, "weight"))
    q = int(cfg.get("q", 0))
    b0 = float(cfg.get("b0", 2.0))
    N = int(cfg.get("N", 24))
    basis = monic_orthogonalize(mixed_moments(w, "plain", maxdeg=N, precision_bits=precision))
    rho = rho_estimates(basis, n_min=int(cfg.get("n_min", 1)))
    est = capacity_estimate(w.support, _parse_degrees(cfg), tol=float(cfg.get("tol", 2e-3)))
    preds = theorem_predictions(w, q, b0, rho, est)
    digits = emission_digits(precision)
    rows = []

    def add(name, val):
        rows.append([name, _dec(val, digits), _log_dec(val, digits)])

    t1, t3 = preds["theorem1"], preds["theorem3"]
    add("nth_root_limsup", t1["limsup"])
    add("nth_root_liminf", t1["liminf"])
    if "extrapolated" in t1:
        add("nth_root_extrapolated", t1["extrapolated"])
    add("level_limit", preds["theorem2"]["limit"])
    add("squared_limsup", t3["limsup"])
    add("squared_liminf", t3["liminf"])
    if "extrapolated" in t3:
        add("squared_extrapolated", t3["extrapolated"])
    la = preds["log_asymptote"]
    add("log_asymptote_nlogn_coefficient", la["nlogn_coefficient"])
    add("log_asymptote_linear_coefficient", la["linear_coefficient"])
    summary = [("capacity_extrapolated", _dec(est.extrapolated, digits)),
               ("rho_extrapolated", _dec(rho.extrapolated, digits)),
               ("q", q), ("b0", _dec(b0, digits)),
               ("weight", preds["provenance"]["weight"]),
               ("support", preds["provenance"]["support"])]
    _emit("predict", precision, fmt, output,
          ["quantity", "value", "log_value"], rows, summary)
    return 0


def cmd_verify(cfg: dict, precision: int, fmt: str, output: Optional[str]) -> int:
    suite = _require(cfg, "suite")
    results = run_suite(suite)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        sys.stdout.write(f"[{suite}] {status} {r.name}: measured {r.measured}, "
                         f"expected {r.expected}\n")
    rows = [[suite, r.name, "PASS" if r.passed else "FAIL", r.measured, r.expected]
            for r in results]
    all_pass = all(r.passed for r in results)
    summary = [("checks", len(results)), ("failed", sum(not r.passed for r in results))]
    if output:
        _emit("verify", precision, fmt, output,
              ["suite", "check", "result", "measured", "expected"], rows, summary)
    return 0 if all_pass else 1


# ---------------------------------------------------------------- entry point

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="landaucap",
        description="Spectral tails of weighted Landau-level compressions, monic "
                    "minimal norms, and logarithmic capacity from one config record.",
        epilog=f"Verify suites: {', '.join(SUITE_NAMES)}. "
               "LANDAUCAP_THREADS caps the ladder worker pool.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="JSON experiment record")
    p.add_argument("--output", help="write the table here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), dest="fmt")
    p.add_argument("--precision", type=int, help=f"working precision bits {ALLOWED_PRECISIONS}")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check a radial toeplitz run against the 1d quadrature oracle")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
    except OSError as e:
        sys.stderr.write(f"landaucap: cannot read config: {e}\n")
        return 2
    except json.JSONDecodeError as e:
        sys.stderr.write(f"landaucap: config is not valid JSON: {e}\n")
        return 2

    precision = args.precision if args.precision is not None else cfg.get("precision_bits", 128)
    fmt = args.fmt or cfg.get("format", "csv")
    output = args.output or cfg.get("output")
    try:
        if precision not in ALLOWED_PRECISIONS:
            raise ConfigError(f"precision_bits must be one of {ALLOWED_PRECISIONS}, got {precision}")
        if fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {fmt!r}")
        if args.command == "capacity":
            return cmd_capacity(cfg, precision, fmt, output)
        if args.command == "orthopoly":
            return cmd_orthopoly(cfg, precision, fmt, output)
        if args.command == "toeplitz":
            return cmd_toeplitz(cfg, precision, fmt, output, args.oracle)
        if args.command == "predict":
            return cmd_predict(cfg, precision, fmt, output)
        return cmd_verify(cfg, precision, fmt, output)
    except DegenerateMomentError as e:
        sys.stderr.write(f"landaucap: degenerate moment matrix: {e}\n")
        return 4
    except NonConvergenceError as e:
        sys.stderr.write(f"landaucap: solver did not converge: {e}\n")
        return 3
    except (ConfigError, ValueError, TypeError, KeyError) as e:
        sys.stderr.write(f"landaucap: invalid config: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
