"""One-dimensional total-variation denoising by iterative clipping."""

from .errors import (
    DomainError,
    NoCornerError,
    NumericError,
    RefusalError,
    UnsupportedFormatError,
    WavParseError,
)
from .lcurve import LCurvePoint, LCurveSweep, Solver, corner, corner_index, sweep
from .metrics import EXACT_MATCH, rmse, snr_db, snr_improvement_db
from .oracle import denoise_bruteforce, denoise_exact
from .signal_model import NoiseKind, NoiseSpec, Signal, add_noise, gen_square, gen_step
from .tv_clip import (
    DenoiseParams,
    DenoiseResult,
    OptimalityCertificate,
    adjoint_diff,
    check_optimality,
    cost,
    denoise_clip,
    forward_diff,
    lambda_max,
    tv_seminorm,
)

__version__ = "0.1.0"
