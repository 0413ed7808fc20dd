"""Command-line front end.

Subcommands: synth, denoise, lcurve, metrics, wav-denoise, oracle-check.
Exit status is 0 on success, 1 on a runtime failure and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .audio_io import AudioClip, denoise_windowed, read_wav, synth_vuvuzela, write_wav
from .errors import DomainError, NoCornerError, NumericError, UnsupportedFormatError, WavParseError
from .lcurve import Solver, corner, sweep
from .metrics import rmse, snr_db, snr_improvement_db
from .oracle import denoise_exact
from .signal_io import emit_signal, emit_table, parse_signal
from .signal_model import NoiseSpec, Signal, add_noise, gen_square, gen_step
from .tv_clip import DenoiseParams, check_optimality, denoise_clip, lambda_max

log = logging.getLogger("tvclip")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2
SWEEP_COLUMNS = ["lambda", "residual_norm", "tv_norm", "cost"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _finite(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _nonneg(text):
    v = _finite(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _positive(text):
    v = _finite(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def _lambda_arg(text):
    if text == "auto":
        return text
    return _nonneg(text)


def _add_solver_flags(p, iters_default):
    p.add_argument("--iters", type=_positive_int, default=iters_default, help="clipping iterations (Nit)")
    p.add_argument("--alpha", type=_finite, default=4.0, help="step scale, >= 4")
    p.add_argument("--tol", type=_nonneg, default=0.0, help="early stop on relative cost decrease (0 = off)")


def _add_sweep_flags(p, require=False):
    p.add_argument("--lo", type=_positive, required=require, default=None, help="smallest lambda (default 1e-2)")
    p.add_argument("--hi", type=_positive, required=require, default=None, help="largest lambda (default 2*lambda_max)")
    p.add_argument("--count", type=_positive_int, default=30)
    p.add_argument("--workers", type=_positive_int, default=1)


def _unknown_flags(parser, argv):
    # argparse reports missing required flags before unknown ones; surface
    # the unknown token first.
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    if not argv or argv[0] not in sub.choices:
        return []
    known = {s for a in sub.choices[argv[0]]._actions for s in a.option_strings}
    return [t for t in argv[1:] if t.startswith("--") and t.split("=", 1)[0] not in known]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tvclip", description="1D total-variation denoising by iterative clipping")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="generate a synthetic test signal")
    p.add_argument("--kind", choices=["step", "square", "vuvuzela"], required=True)
    p.add_argument("--n", type=_positive_int, default=256)
    p.add_argument("--edge", type=_positive_int, default=None, help="first high sample of a step (default n/2)")
    p.add_argument("--low", type=_finite, default=0.0)
    p.add_argument("--high", type=_finite, default=1.0)
    p.add_argument("--period", type=_positive_int, default=64)
    p.add_argument("--amplitude", type=_positive, default=1.0)
    p.add_argument("--noise", choices=["none", "gaussian", "laplacian"], default="none")
    p.add_argument("--level", type=_nonneg, default=10.0, help="noise std as percent of peak-to-peak")
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--duration", type=_positive, default=10.0, help="vuvuzela clip length in seconds")
    p.add_argument("--rate", type=_positive_int, default=8000, help="vuvuzela sample rate in Hz")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--clean-out", type=Path, default=None, help="also write the noise-free signal")

    p = sub.add_parser("denoise", help="denoise a CSV signal")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--lambda", dest="lam", type=_lambda_arg, required=True, help="weight, or 'auto' for the L-curve corner")
    p.add_argument("--solver", choices=["clip", "exact"], default="clip")
    _add_solver_flags(p, 100)
    _add_sweep_flags(p)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--history", type=Path, default=None, help="write the per-iteration cost")
    p.add_argument("--clean", type=Path, default=None, help="reference signal for the SNR/RMSE report")
    p.add_argument("--report", type=Path, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("lcurve", help="sweep lambda and locate the L-curve corner")
    p.add_argument("--in", dest="input", type=Path, required=True)
    _add_sweep_flags(p)
    p.add_argument("--solver", choices=["clip", "exact"], default="exact")
    _add_solver_flags(p, 2000)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("metrics", help="RMSE and SNR of an estimate against a clean signal")
    p.add_argument("--clean", type=Path, required=True)
    p.add_argument("--estimate", type=Path, required=True)
    p.add_argument("--noisy", type=Path, default=None, help="adds the SNR improvement over this input")
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("wav-denoise", help="denoise a 16-bit PCM WAV file")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--lambda", dest="lam", type=_lambda_arg, default="auto")
    p.add_argument("--solver", choices=["clip", "exact"], default="clip")
    _add_solver_flags(p, 2000)
    _add_sweep_flags(p)
    p.add_argument("--window", type=_nonneg_int, default=0, help="overlap-add frame length (0 = whole signal)")
    p.add_argument("--clean", type=Path, default=None, help="reference WAV for the report")
    p.add_argument("--report", type=Path, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")

    p = sub.add_parser("oracle-check", help="compare the clipping solver against the exact solver")
    p.add_argument("--in", dest="input", type=Path, required=True)
    p.add_argument("--lambda", dest="lam", type=_nonneg, required=True)
    _add_solver_flags(p, 20000)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    return parser


def _read_text(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {str(path)!r}: {exc.strerror}") from None


def _read_bytes(path: Path) -> bytes:
    try:
        return path.read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {str(path)!r}: {exc.strerror}") from None


def _read_signal(path: Path) -> Signal:
    return parse_signal(_read_text(path))


def _write(dest: Path | None, payload, stdout):
    if dest is None:
        if isinstance(payload, bytes):
            stdout.buffer.write(payload)
        else:
            stdout.write(payload)
        return
    if isinstance(payload, bytes):
        dest.write_bytes(payload)
    else:
        dest.write_text(payload)


def _params(args, lam) -> DenoiseParams:
    return DenoiseParams(lam=lam, max_iter=args.iters, alpha=args.alpha, tol=args.tol)


def _sweep_for(y, args, solver=Solver.EXACT):
    lm = lambda_max(y)
    lo = args.lo if args.lo is not None else 1e-2
    hi = args.hi if args.hi is not None else 2.0 * lm
    if not lo < hi:
        raise UsageError(f"--lo ({lo}) must be below --hi ({hi})")
    template = DenoiseParams(lam=0.0, max_iter=args.iters, alpha=args.alpha, tol=args.tol)
    return sweep(y, lo, hi, args.count, solver, template, args.workers), lm


def _auto_lambda(y, args, stderr):
    sw, lm = _sweep_for(y, args)
    lam = corner(sw)
    ratio = lam / lm if lm > 0 else float("nan")
    print(f"corner lambda={lam!r} lambda/lambda_max={ratio!r}", file=stderr)
    return lam, lm


def _solve(y, lam, args):
    if args.solver == "exact":
        return denoise_exact(y, lam), None
    res = denoise_clip(y, _params(args, lam))
    log.info("clip: %d iterations, converged=%s", res.iterations_run, res.converged)
    return res.x, res


def _quality_rows(clean, noisy, denoised, lam, lm):
    snr_in = snr_db(clean, noisy)
    snr_out = snr_db(clean, denoised)
    return [{
        "lambda": lam,
        "lambda_over_lambda_max": lam / lm if lm > 0 else float("nan"),
        "rmse_noisy": rmse(noisy, clean),
        "rmse_denoised": rmse(denoised, clean),
        "snr_noisy_db": snr_in,
        "snr_denoised_db": snr_out,
        "snr_improvement_db": snr_improvement_db(clean, noisy, denoised),
    }]


def _emit_report(rows, args, stderr):
    text = emit_table(rows, list(rows[0]), args.format)
    if args.report is not None:
        args.report.write_text(text)
    else:
        stderr.write(text)


def cmd_synth(args, stdout, stderr):
    if args.kind == "vuvuzela":
        if args.out is None:
            raise UsageError("synth --kind vuvuzela requires --out")
        clean, noisy = synth_vuvuzela(args.duration, args.rate, args.seed)
        args.out.write_bytes(write_wav(noisy))
        if args.clean_out is not None:
            args.clean_out.write_bytes(write_wav(clean))
        return
    if args.kind == "step":
        edge = args.edge if args.edge is not None else args.n // 2
        clean = gen_step(args.n, edge, args.low, args.high)
    else:
        clean = gen_square(args.n, args.period, args.amplitude)
    out = clean
    if args.noise != "none":
        out = add_noise(clean, NoiseSpec(args.noise, args.level, args.seed))
    _write(args.out, emit_signal(out), stdout)
    if args.clean_out is not None:
        args.clean_out.write_text(emit_signal(clean))


def cmd_denoise(args, stdout, stderr):
    y = _read_signal(args.input)
    clean = _read_signal(args.clean) if args.clean is not None else None
    lm = lambda_max(y)
    lam = args.lam
    if lam == "auto":
        lam, lm = _auto_lambda(y, args, stderr)
    x, res = _solve(y, lam, args)
    _write(args.out, emit_signal(x), stdout)
    if args.history is not None:
        hist = res.cost_history if res is not None else np.array([])
        args.history.write_text(emit_table(
            [{"iteration": i + 1, "cost": float(j)} for i, j in enumerate(hist)], ["iteration", "cost"], "csv"))
    if clean is not None:
        _emit_report(_quality_rows(clean, y, x, lam, lm), args, stderr)


def cmd_lcurve(args, stdout, stderr):
    y = _read_signal(args.input)
    sw, lm = _sweep_for(y, args, Solver(args.solver))
    rows = [{"lambda": p.lam, "residual_norm": p.residual_norm, "tv_norm": p.tv_norm, "cost": p.cost} for p in sw.points]
    _write(args.out, emit_table(rows, SWEEP_COLUMNS, args.format), stdout)
    try:
        lam = corner(sw)
        ratio = lam / lm if lm > 0 else float("nan")
        print(f"corner lambda={lam!r} lambda/lambda_max={ratio!r}", file=stderr)
    except NoCornerError as exc:
        print(f"no corner: {exc}", file=stderr)


def cmd_metrics(args, stdout, stderr):
    clean = _read_signal(args.clean)
    est = _read_signal(args.estimate)
    row = {"rmse": rmse(clean, est), "snr_db": snr_db(clean, est)}
    if args.noisy is not None:
        noisy = _read_signal(args.noisy)
        row["rmse_noisy"] = rmse(clean, noisy)
        row["snr_noisy_db"] = snr_db(clean, noisy)
        row["snr_improvement_db"] = snr_improvement_db(clean, noisy, est)
    _write(args.out, emit_table([row], list(row), args.format), stdout)


def cmd_wav_denoise(args, stdout, stderr):
    clip = read_wav(_read_bytes(args.input))
    clean = read_wav(_read_bytes(args.clean)) if args.clean is not None else None
    if args.window and (args.window < 4 or args.window % 2):
        raise UsageError(f"--window must be 0 or an even integer >= 4, got {args.window}")
    y = clip.signal
    lm = lambda_max(y)
    lam = args.lam
    if lam == "auto":
        lam, lm = _auto_lambda(y, args, stderr)
    if args.window:
        x = denoise_windowed(y, args.window, lambda seg: _solve(seg, lam, args)[0].samples)
    else:
        x, _ = _solve(y, lam, args)
    out = AudioClip(Signal(np.clip(x.samples, -1.0, 1.0)), clip.sample_rate)
    payload = write_wav(out)
    args.out.write_bytes(payload)
    if clean is not None:
        written = read_wav(payload).signal
        _emit_report(_quality_rows(clean.signal, y, written, lam, lm), args, stderr)


def cmd_oracle_check(args, stdout, stderr):
    y = _read_signal(args.input)
    lam = args.lam
    res = denoise_clip(y, _params(args, lam))
    ex = denoise_exact(y, lam)
    scale = float(np.ptp(y.samples))
    rows = []
    for name, x in (("clip", res.x), ("exact", ex)):
        cert = check_optimality(y, x, lam)
        rows.append({
            "solver": name,
            "iterations": res.iterations_run if name == "clip" else 0,
            "feasibility": cert.max_feasibility_violation,
            "complementarity": cert.max_complementarity_violation,
            "balance": cert.balance_residual,
            "worst_over_ptp": cert.worst / scale if scale > 0 else cert.worst,
        })
    d = res.x.samples - ex.samples
    norm_ex = float(np.linalg.norm(ex.samples))
    for r in rows:
        r["l2_disagreement"] = float(np.linalg.norm(d)) if r["solver"] == "clip" else 0.0
        r["rel_l2_disagreement"] = (r["l2_disagreement"] / norm_ex) if norm_ex > 0 else r["l2_disagreement"]
        r["max_abs_disagreement"] = float(np.abs(d).max()) if r["solver"] == "clip" else 0.0
    _write(args.out, emit_table(rows, list(rows[0]), args.format), stdout)


COMMANDS = {
    "synth": cmd_synth,
    "denoise": cmd_denoise,
    "lcurve": cmd_lcurve,
    "metrics": cmd_metrics,
    "wav-denoise": cmd_wav_denoise,
    "oracle-check": cmd_oracle_check,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        unknown = _unknown_flags(parser, argv)
        if unknown:
            raise UsageError(f"tvclip {argv[0]}: unrecognized arguments: {' '.join(unknown)}")
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=stderr,
                            format="%(name)s: %(message)s")
        COMMANDS[args.command](args, stdout, stderr)
    except UsageError as exc:
        print(exc, file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    except (DomainError, NumericError, WavParseError, UnsupportedFormatError, OSError) as exc:
        print(f"tvclip: error: {exc}", file=stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
