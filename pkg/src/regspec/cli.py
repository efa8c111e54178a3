"""Command-line front end.

Subcommands
-----------
periodogram
    Estimate a spectrum from a CSV signal and write it as CSV or JSON.
fit
    Fit the regularization weight (for a named window) or the pair of
    derivative weights (on a log grid) by marginal likelihood.
simulate
    Run the seeded UP vs RLS+ML benchmark and write report files.
windows
    Tabulate a named window's coefficients.

All numbers are printed with 12 significant digits and a ``.`` decimal
separator so outputs are byte-stable.  Exit codes: 0 ok, 2 bad input file,
3 bad configuration, 4 degenerate data, 5 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import estimator, likelihood, penalty, simulate
from .fourier import TimeSeries, adjoint_synthesis_cf, uniform_grid

__all__ = ["main"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CONFIG = 3
EXIT_DEGENERATE = 4
EXIT_IO = 5


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fmt(x: float) -> str:
    """12 significant digits, locale independent."""
    return format(float(x), ".12g")


def _read_signal(path: str) -> TimeSeries:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise _CliError(EXIT_INPUT, f"{path}: empty file")
            cols = [c.strip().lower() for c in header]
            if cols[:2] != ["index", "re"] or (len(cols) > 2 and cols[2] != "im"):
                raise _CliError(EXIT_INPUT, f"{path}: expected header index,re[,im]")
            values = []
            for row_num, row in enumerate(reader):
                if not row:
                    continue
                try:
                    idx = int(row[0])
                    re = float(row[1])
                    im = float(row[2]) if len(row) > 2 and row[2] != "" else 0.0
                except (ValueError, IndexError) as exc:
                    raise _CliError(EXIT_INPUT, f"{path}: malformed row {row_num + 1}") from exc
                if idx != row_num:
                    raise _CliError(EXIT_INPUT, f"{path}: indices must run 0..N-1 contiguously")
                values.append(complex(re, im))
    except OSError as exc:
        raise _CliError(EXIT_INPUT, f"{path}: {exc.strerror or exc}") from exc
    if not values:
        raise _CliError(EXIT_INPUT, f"{path}: no samples")
    try:
        return TimeSeries(np.array(values))
    except ValueError as exc:
        raise _CliError(EXIT_INPUT, f"{path}: {exc}") from exc


def _write_text(path: str | None, text: str) -> None:
    try:
        if path is None:
            sys.stdout.write(text)
        else:
            Path(path).write_text(text)
    except OSError as exc:
        raise _CliError(EXIT_IO, f"{path}: {exc.strerror or exc}") from exc


def _spectrum_csv(grid: np.ndarray, values: np.ndarray, power: np.ndarray) -> str:
    lines = ["nu,re,im,power"]
    for nu, v, p in zip(grid, values, power):
        lines.append(f"{_fmt(nu)},{_fmt(v.real)},{_fmt(v.imag)},{_fmt(p)}")
    return "\n".join(lines) + "\n"


def _spectrum_json(grid, values, power, meta: dict) -> str:
    payload = {
        "grid": [_fmt(x) for x in grid],
        "re": [_fmt(v.real) for v in values],
        "im": [_fmt(v.imag) for v in values],
        "power": [_fmt(p) for p in power],
        "meta": meta,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _parse_alphas(text: str) -> np.ndarray:
    try:
        alphas = np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise _CliError(EXIT_CONFIG, f"bad alpha list {text!r}") from exc
    if alphas.size < 1 or np.any(alphas < 0) or not np.any(alphas > 0):
        raise _CliError(EXIT_CONFIG, "alpha list must be nonnegative with a positive entry")
    return alphas


def _parse_axis(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise _CliError(EXIT_CONFIG, f"bad grid axis {text!r}, expected lo:hi:n")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise _CliError(EXIT_CONFIG, f"bad grid axis {text!r}") from exc
    if not (0 < lo <= hi) or n < 1:
        raise _CliError(EXIT_CONFIG, f"bad grid axis {text!r}")
    return np.logspace(np.log10(lo), np.log10(hi), n) if n > 1 else np.array([lo])


def _parse_alpha_grid(text: str) -> tuple[np.ndarray, np.ndarray]:
    sep = "x" if "x" in text else "×"
    parts = text.split(sep)
    if len(parts) != 2:
        raise _CliError(EXIT_CONFIG, f"bad alpha grid {text!r}, expected lo:hi:nxlo:hi:n")
    return _parse_axis(parts[0]), _parse_axis(parts[1])


def _threads() -> int:
    raw = os.environ.get("REGSPEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _window_evals(name: str, n: int, pad: int | None) -> np.ndarray:
    name = name.replace("-", "_")
    if name not in penalty.WINDOW_NAMES:
        raise _CliError(EXIT_CONFIG, f"unknown window {name!r}; choose from "
                        + ", ".join(penalty.WINDOW_NAMES))
    return penalty.named_window_eigenvalues(name, n, pad)


def _cmd_periodogram(args) -> int:
    y = _read_signal(args.input)
    n = len(y)
    lam = args.lam
    if lam < 0:
        raise _CliError(EXIT_CONFIG, "--lambda must be >= 0")
    meta: dict = {"lambda": _fmt(lam), "n_samples": n}
    if args.pad is not None:
        # Discrete-frequency estimate on nu_p = p/P.
        if args.pad < n:
            raise _CliError(EXIT_CONFIG, "--pad must be >= the signal length")
        grid = uniform_grid(args.pad)
        if args.window:
            evals = _window_evals(args.window, n, args.pad)
            spec = penalty.PenaltySpec.tabulated(
                np.concatenate([evals, np.zeros(max(0, args.pad - evals.size))])
            )
            result = estimator.windowed_periodogram_df(y, args.pad, lam, spec)
            values = result.spectrum.amps
            meta["window"] = args.window
        elif args.alpha:
            alphas = _parse_alphas(args.alpha)
            spec = penalty.PenaltySpec.sobolev(alphas)
            result = estimator.windowed_periodogram_df(y, args.pad, lam, spec)
            values = result.spectrum.amps
            meta["penalty"] = [_fmt(a) for a in alphas]
        else:
            values = estimator.usual_periodogram_df(y, args.pad, lam).amps
        meta["pad"] = args.pad
    else:
        grid = uniform_grid(args.grid or estimator.default_pad(n))
        if args.window:
            evals = _window_evals(args.window, n, args.pad)
            window = penalty.window_from_eigenvalues(evals, lam, n)
            values = adjoint_synthesis_cf(window.coeffs * y.samples, grid).values
            meta["window"] = args.window
        elif args.alpha:
            alphas = _parse_alphas(args.alpha)
            result = estimator.windowed_periodogram_cf(y, lam, alphas, grid)
            values = result.spectrum.values
            meta["penalty"] = [_fmt(a) for a in alphas]
        else:
            values = estimator.usual_periodogram_cf(y, lam, grid).values
    power = np.abs(values) ** 2
    text = (
        _spectrum_json(grid, values, power, meta)
        if args.format == "json"
        else _spectrum_csv(grid, values, power)
    )
    _write_text(args.out, text)
    return EXIT_OK


def _report_json(fit: likelihood.FitReport, include_trace: bool = False) -> str:
    payload = {
        "lambda": _fmt(fit.hyperparams.lam),
        "r_a": _fmt(fit.hyperparams.r_a),
        "r_b": _fmt(fit.hyperparams.r_b),
        "cll": _fmt(fit.cll_value),
        "flags": list(fit.flags),
    }
    if fit.window_name is not None:
        payload["window"] = fit.window_name
        payload["window_index"] = fit.window_index
    if fit.alpha0 is not None:
        payload["alpha0"] = _fmt(fit.alpha0)
        payload["alpha1"] = _fmt(fit.alpha1)
    if include_trace:
        payload["trace"] = [[_fmt(lam), _fmt(cll)] for lam, cll in fit.search_trace]
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _cmd_fit(args) -> int:
    y = _read_signal(args.input)
    lam_lo, lam_hi, points = 1e-8, 1e8, 200
    if args.lambda_range:
        axis = _parse_axis(args.lambda_range)
        lam_lo, lam_hi, points = float(axis[0]), float(axis[-1]), axis.size
    try:
        if args.window:
            evals = _window_evals(args.window, len(y), None)
            fit = likelihood.fit_lambda(
                y, evals, lam_lo=lam_lo, lam_hi=lam_hi, points=max(3, points)
            )
            fit = likelihood.FitReport(
                fit.hyperparams,
                fit.cll_value,
                window_name=args.window.replace("-", "_"),
                flags=fit.flags,
                search_trace=fit.search_trace,
            )
        else:
            if args.alpha_grid:
                a0, a1 = _parse_alpha_grid(args.alpha_grid)
            else:
                a0 = a1 = np.logspace(-10, 10, 30)
            fit = likelihood.fit_alpha_grid(y, a0, a1).report
    except likelihood.DegenerateDataError as exc:
        raise _CliError(EXIT_DEGENERATE, str(exc)) from exc
    _write_text(args.out, _report_json(fit, include_trace=args.trace))
    return EXIT_OK


def _cmd_simulate(args) -> int:
    try:
        config = simulate.SimConfig(
            n_samples=args.n,
            taps=tuple(float(t) for t in args.taps.split(",")),
            realizations=args.realizations,
            master_seed=args.seed,
            grid_size=args.grid,
            alpha_points=args.alpha_points,
        )
    except ValueError as exc:
        raise _CliError(EXIT_CONFIG, str(exc)) from exc
    report = simulate.run_experiment(config, threads=_threads())
    out_dir = Path(args.out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "report.json").write_text(report.to_json() + "\n")
        table = "\n".join(",".join(row) for row in report.table_rows()) + "\n"
        (out_dir / "table.csv").write_text(table)
        spectra_dir = out_dir / "spectra"
        spectra_dir.mkdir(exist_ok=True)
        _write_spectra(spectra_dir, config, report)
    except OSError as exc:
        raise _CliError(EXIT_IO, f"{args.out_dir}: {exc.strerror or exc}") from exc
    sys.stdout.write(table)
    return EXIT_OK


def _write_spectra(spectra_dir: Path, config, report) -> None:
    """Plot-ready per-realization spectra: truth, UP and the fitted estimate."""
    m = config.spectrum_grid_size
    grid = uniform_grid(m)
    truth = simulate.true_spectrum(config.taps, grid)
    for row in report.realizations:
        y = simulate.gen_signal(config, row.index)
        periodogram = np.abs(np.fft.fft(y.samples, m)) ** 2 / len(y)
        acov = simulate.sample_autocovariance(y)
        n_idx = np.arange(len(y), dtype=float)
        eps = row.alpha0 + 4.0 * np.pi**2 * row.alpha1 * n_idx**2
        s_ml = simulate.lag_window_spectrum(acov, 1.0 / (1.0 + eps), m)
        lines = ["nu,true,up,ml"]
        for k in range(m):
            lines.append(
                f"{_fmt(grid[k])},{_fmt(truth.values[k])},"
                f"{_fmt(periodogram[k])},{_fmt(s_ml[k])}"
            )
        (spectra_dir / f"realization_{row.index:03d}.csv").write_text("\n".join(lines) + "\n")


def _cmd_windows(args) -> int:
    if args.lam < 0:
        raise _CliError(EXIT_CONFIG, "--lambda must be >= 0")
    evals = _window_evals(args.window, args.n, args.pad)
    window = penalty.window_from_eigenvalues(evals, args.lam, args.n)
    lines = ["n,omega"]
    for n, w in enumerate(window.coeffs):
        lines.append(f"{n},{_fmt(w)}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regspec",
        description="Regularized least-squares periodograms with likelihood-based selection",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("periodogram", help="estimate a spectrum from a CSV signal")
    p.add_argument("input", help="CSV signal with header index,re[,im]")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--pad", type=int, default=None, help="discrete grid size P (>= N)")
    p.add_argument("--window", default=None, help="named window family")
    p.add_argument("--alpha", default=None, help="derivative weights a0,a1,...")
    p.add_argument("--grid", type=int, default=None, help="continuous grid size (default 8N)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_periodogram)

    p = sub.add_parser("fit", help="fit hyperparameters by marginal likelihood")
    p.add_argument("input")
    p.add_argument("--window", default=None, help="fit lambda for this named window")
    p.add_argument("--alpha-grid", default=None, help="lo:hi:nxlo:hi:n grid specification")
    p.add_argument("--lambda-range", default=None, help="lo:hi:points for the lambda search")
    p.add_argument("--trace", action="store_true", help="include the search trace")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("simulate", help="run the seeded UP vs RLS+ML benchmark")
    p.add_argument("--n", type=int, default=512)
    p.add_argument("--taps", default="1,-2,3,-2,1")
    p.add_argument("--realizations", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--alpha-points", type=int, default=30)
    p.add_argument("--out-dir", default="regspec-report")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("windows", help="tabulate a named window")
    p.add_argument("--window", required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--pad", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_windows)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"regspec: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        print(f"regspec: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
