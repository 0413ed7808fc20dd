"""Total-variation denoising by iterative clipping.

The problem solved here is

    minimize  J(x) = ||y - x||_2^2 + lam * ||D x||_1

where ``D`` is the (N-1) x N first-difference matrix. The clipping iteration
works on a dual vector ``z`` of length N-1 with ``x = y - D^T z`` and keeps
every ``|z[k]| <= lam / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError
from .signal_model import Signal, as_signal

__all__ = [
    "DenoiseParams",
    "DenoiseResult",
    "OptimalityCertificate",
    "forward_diff",
    "adjoint_diff",
    "tv_seminorm",
    "cost",
    "denoise_clip",
    "check_optimality",
    "lambda_max",
]


def forward_diff(x) -> np.ndarray:
    """``D x``: consecutive differences ``x[k+1] - x[k]`` (length N-1)."""
    return np.diff(np.asarray(x, dtype=np.float64).reshape(-1))


def adjoint_diff(z) -> np.ndarray:
    """``D^T z`` for a dual vector of length M (output length M+1).

    ``out[0] = -z[0]``, ``out[j] = z[j-1] - z[j]``, ``out[M] = z[M-1]``;
    an empty ``z`` maps to ``[0.0]``.
    """
    z = np.asarray(z, dtype=np.float64).reshape(-1)
    # Subtracting from an explicit 0.0 keeps out[0] == +0.0 when z[0] == 0,
    # so y - D^T 0 reproduces y bit-for-bit (signed zeros included).
    padded = np.zeros(z.size + 1)
    padded[1:] = z
    padded[:-1] -= z
    return padded


def tv_seminorm(x) -> float:
    """Total variation ``sum |x[k+1] - x[k]|``."""
    return float(np.abs(forward_diff(as_signal(x).samples)).sum())


def _check_lambda(lam):
    if not (lam >= 0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be a finite non-negative number, got {lam!r}")


def _pair(y, x):
    y = as_signal(y).samples
    x = as_signal(x).samples
    if y.size != x.size:
        raise DomainError(f"length mismatch: y has {y.size} samples, x has {x.size}")
    return y, x


def cost(y, x, lam: float) -> float:
    """``||y - x||^2 + lam * TV(x)``."""
    _check_lambda(lam)
    y, x = _pair(y, x)
    r = y - x
    return float(r @ r) + lam * float(np.abs(np.diff(x)).sum())


@dataclass(frozen=True)
class DenoiseParams:
    """Settings for `denoise_clip`.

    ``alpha`` must be at least 4, the bound on the spectral radius of
    ``D D^T``; this keeps ``||y - D^T z||^2`` non-increasing and the
    iteration convergent. The primal cost itself may rise slightly between
    iterations. ``tol`` stops the iteration
    once the relative cost decrease falls below it; 0 runs all ``max_iter``
    iterations.
    """

    lam: float = 1.0
    max_iter: int = 100
    alpha: float = 4.0
    tol: float = 0.0

    def __post_init__(self):
        _check_lambda(self.lam)
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise DomainError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if not (self.alpha >= 4 and math.isfinite(self.alpha)):
            raise DomainError(f"alpha must be >= 4, got {self.alpha!r}")
        if not (self.tol >= 0 and math.isfinite(self.tol)):
            raise DomainError(f"tol must be >= 0, got {self.tol!r}")

    @property
    def threshold(self) -> float:
        return self.lam / 2.0


@dataclass(frozen=True, eq=False)
class DenoiseResult:
    x: Signal
    z: np.ndarray
    cost_history: np.ndarray
    iterations_run: int
    converged: bool


def denoise_clip(y, params: DenoiseParams, callback=None) -> DenoiseResult:
    """Iterative clipping TV denoiser.

    Each iteration computes ``x = y - D^T z``, records ``J(x)``, then updates
    ``z <- clip(z + D x / alpha, -lam/2, lam/2)``. The returned ``x`` is the
    last primal iterate and ``z`` the dual after its final update.

    Parameters
    ----------
    y : Signal or array_like
        Noisy observation.
    params : DenoiseParams
    callback : callable, optional
        Called as ``callback(k, x, z)`` after iteration ``k`` (1-based) with
        that iteration's primal iterate and updated dual.
    """
    if not isinstance(params, DenoiseParams):
        raise DomainError("params must be a DenoiseParams instance")
    sig = as_signal(y)
    y = sig.samples
    lam = float(params.lam)
    thresh = params.threshold
    step = 1.0 / params.alpha

    z = np.zeros(y.size - 1)
    history = np.empty(params.max_iter)
    converged = False
    k = 0
    x = y
    with np.errstate(over="ignore", invalid="ignore"):
        while k < params.max_iter:
            x = y - adjoint_diff(z)
            dx = np.diff(x)
            r = y - x
            j = float(r @ r) + lam * float(np.abs(dx).sum())
            if not math.isfinite(j):
                raise NumericError(f"non-finite cost at iteration {k + 1}")
            history[k] = j
            k += 1
            z += step * dx
            if thresh == 0.0:
                z[:] = 0.0
            else:
                np.clip(z, -thresh, thresh, out=z)
            if callback is not None:
                callback(k, x, z)
            if params.tol > 0 and k >= 2:
                prev = history[k - 2]
                if prev == 0.0 or (prev - j) < params.tol * prev:
                    converged = True
                    break

    return DenoiseResult(
        x=sig.with_samples(x),
        z=z,
        cost_history=history[:k].copy(),
        iterations_run=k,
        converged=converged,
    )


@dataclass(frozen=True, eq=False)
class OptimalityCertificate:
    """KKT residuals of a candidate minimiser.

    ``dual`` is the unique ``z`` with ``x = y - D^T z`` on its first N-1
    equations; ``balance_residual`` is what is left over in the last one.
    """

    dual: np.ndarray
    max_feasibility_violation: float
    max_complementarity_violation: float
    balance_residual: float

    @property
    def worst(self) -> float:
        return max(
            self.max_feasibility_violation,
            self.max_complementarity_violation,
            abs(self.balance_residual),
        )


def check_optimality(y, x, lam: float, active_tol: float | None = None) -> OptimalityCertificate:
    """Certify ``x`` as the minimiser of ``J`` for ``(y, lam)``.

    A difference ``(D x)[k]`` counts as active (a genuine jump) when its
    magnitude exceeds ``active_tol``; the default is ``1e-8`` times the
    peak-to-peak range of ``x``.
    """
    _check_lambda(lam)
    y, x = _pair(y, x)
    if active_tol is None:
        active_tol = 1e-8 * float(np.ptp(x))
    elif not active_tol >= 0:
        raise DomainError(f"active_tol must be >= 0, got {active_tol!r}")

    r = y - x
    dual = -np.cumsum(r[:-1])
    half = lam / 2.0
    feas = float(np.max(np.abs(dual) - half, initial=0.0))
    feas = max(feas, 0.0)

    dx = np.diff(x)
    active = np.abs(dx) > active_tol
    if active.any():
        comp = float(np.max(np.abs(dual[active] - half * np.sign(dx[active]))))
    else:
        comp = 0.0
    return OptimalityCertificate(
        dual=dual,
        max_feasibility_violation=feas,
        max_complementarity_violation=comp,
        balance_residual=float(r.sum()),
    )


def lambda_max(y) -> float:
    """Smallest ``lam`` whose minimiser is the constant mean signal."""
    y = as_signal(y).samples
    if y.size == 1:
        return 0.0
    partial = np.cumsum(y - y.mean())[:-1]
    return 2.0 * float(np.abs(partial).max())
