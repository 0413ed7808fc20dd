"""Signals, synthetic test inputs and seeded noise injection.

Noise draws come from numpy's ``PCG64`` bit generator seeded with
``NoiseSpec.seed``. Gaussian samples use ``Generator.standard_normal``
(ziggurat transform of the uniform stream) and Laplacian samples use
``Generator.laplace``; both are drawn at unit standard deviation and then
multiplied by the target sigma, so the realisation is a pure function of the
spec and the clean signal length.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "Signal",
    "NoiseKind",
    "NoiseSpec",
    "as_signal",
    "gen_step",
    "gen_square",
    "noise_sigma",
    "draw_noise",
    "add_noise",
]


@dataclass(frozen=True, eq=False)
class Signal:
    """A finite, non-empty real sequence with an optional sample rate in Hz."""

    samples: np.ndarray
    sample_rate: float | None = field(default=None)

    def __post_init__(self):
        arr = np.array(self.samples, dtype=np.float64).reshape(-1)
        if arr.size < 1:
            raise DomainError("a signal needs at least one sample")
        if not np.all(np.isfinite(arr)):
            raise DomainError("signal samples must be finite")
        if self.sample_rate is not None and not (self.sample_rate > 0 and np.isfinite(self.sample_rate)):
            raise DomainError(f"sample_rate must be positive, got {self.sample_rate!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return self.samples.size

    def __array__(self, dtype=None, copy=None):
        return self.samples if dtype is None else self.samples.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return self.sample_rate == other.sample_rate and np.array_equal(self.samples, other.samples)

    def with_samples(self, samples) -> Signal:
        return Signal(samples, self.sample_rate)


def as_signal(value) -> Signal:
    """Wrap array-likes as a `Signal`; signals pass through unchanged."""
    if isinstance(value, Signal):
        return value
    return Signal(value)


class NoiseKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    LAPLACIAN = "laplacian"


@dataclass(frozen=True)
class NoiseSpec:
    """Distribution of additive noise.

    ``level_percent`` is the noise standard deviation expressed as a percentage
    of the clean signal's peak-to-peak range.
    """

    kind: NoiseKind = NoiseKind.GAUSSIAN
    level_percent: float = 10.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", NoiseKind(self.kind))
        if not (self.level_percent >= 0 and np.isfinite(self.level_percent)):
            raise DomainError(f"level_percent must be >= 0, got {self.level_percent!r}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise DomainError(f"seed must be a non-negative integer, got {self.seed!r}")


def gen_step(n: int, edge: int, low: float = 0.0, high: float = 1.0) -> Signal:
    """Step from ``low`` to ``high`` at index ``edge`` (0-based, first high sample)."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not 1 <= edge <= n - 1:
        raise DomainError(f"edge must lie in [1, {n - 1}], got {edge}")
    out = np.full(n, float(low))
    out[edge:] = high
    return Signal(out)


def gen_square(n: int, period: int, amplitude: float = 1.0) -> Signal:
    """Square wave starting at ``+amplitude``; each half-period is ``period // 2`` samples.

    Odd periods put the extra sample in the negative half.
    """
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if period < 2:
        raise DomainError(f"period must be >= 2, got {period}")
    if not amplitude > 0:
        raise DomainError(f"amplitude must be positive, got {amplitude}")
    phase = np.arange(n) % period
    return Signal(np.where(phase < period // 2, float(amplitude), -float(amplitude)))


def noise_sigma(clean: Signal, spec: NoiseSpec) -> float:
    """Standard deviation implied by ``spec`` for this clean signal."""
    x = as_signal(clean).samples
    return spec.level_percent / 100.0 * float(x.max() - x.min())


def _unit_draws(n: int, spec: NoiseSpec) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(int(spec.seed)))
    if spec.kind is NoiseKind.GAUSSIAN:
        return rng.standard_normal(n)
    # Laplace(0, b) has variance 2 b^2.
    return rng.laplace(0.0, 1.0 / np.sqrt(2.0), n)


def draw_noise(clean: Signal, spec: NoiseSpec) -> np.ndarray:
    """The noise realisation ``w`` that `add_noise` adds to ``clean``."""
    clean = as_signal(clean)
    sigma = noise_sigma(clean, spec)
    if sigma == 0.0:
        return np.zeros(len(clean))
    return sigma * _unit_draws(len(clean), spec)


def add_noise(clean: Signal, spec: NoiseSpec) -> Signal:
    """Return ``clean + w`` with ``w`` drawn according to ``spec``."""
    clean = as_signal(clean)
    w = draw_noise(clean, spec)
    if not w.any():
        return clean
    return clean.with_samples(clean.samples + w)
