"""Quality measures for denoising experiments."""

from __future__ import annotations

import enum
import math

import numpy as np

from .errors import DomainError
from .signal_model import as_signal

__all__ = ["EXACT_MATCH", "ExactMatch", "rmse", "snr_db", "snr_improvement_db"]


class ExactMatch(enum.Enum):
    """Sentinel for an SNR with zero error energy."""

    EXACT = "exact"

    def __str__(self):
        return self.value


EXACT_MATCH = ExactMatch.EXACT


def _pair(a, b):
    a = as_signal(a).samples
    b = as_signal(b).samples
    if a.size != b.size:
        raise DomainError(f"length mismatch: {a.size} vs {b.size}")
    return a, b


def rmse(a, b) -> float:
    a, b = _pair(a, b)
    d = a - b
    return math.sqrt(float(d @ d) / d.size)


def snr_db(clean, estimate) -> float | ExactMatch:
    """``10 log10(sum clean^2 / sum (clean - estimate)^2)``.

    Returns `EXACT_MATCH` instead of infinity when the estimate equals the
    clean signal exactly.
    """
    c, e = _pair(clean, estimate)
    signal_energy = float(c @ c)
    if signal_energy == 0.0:
        raise DomainError("clean signal has zero energy")
    d = c - e
    err = float(d @ d)
    if err == 0.0:
        return EXACT_MATCH
    return 10.0 * math.log10(signal_energy / err)


def snr_improvement_db(clean, noisy, denoised) -> float | ExactMatch:
    """SNR of ``denoised`` minus SNR of ``noisy``, both against ``clean``."""
    after = snr_db(clean, denoised)
    before = snr_db(clean, noisy)
    if after is EXACT_MATCH:
        return EXACT_MATCH
    if before is EXACT_MATCH:
        raise DomainError("noisy input already equals the clean signal")
    return after - before
