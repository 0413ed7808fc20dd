"""Exact minimisers of the 1D TV cost, used to check the iterative solver.

`denoise_exact` follows the taut-string picture: the running sum of the
solution is the shortest path through a tube of half-width ``lam / 2``
around the running sum of ``y``. It is evaluated with the linear-time direct
scan of L. Condat (2013), which walks the signal once while tracking the
upper and lower admissible levels of the current segment.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import DomainError, RefusalError
from .signal_model import Signal, as_signal
from .tv_clip import _check_lambda, cost

__all__ = ["denoise_exact", "denoise_bruteforce", "BRUTEFORCE_MAX_N"]

BRUTEFORCE_MAX_N = 5
_BLOCK = 1 << 20


def _direct_tv(y: list[float], lam: float) -> list[float]:
    # Solves min 0.5 ||y - x||^2 + lam ||D x||_1 for lam > 0.
    n = len(y)
    x = [0.0] * n
    k = k0 = kminus = kplus = 0
    vmin = y[0] - lam
    vmax = y[0] + lam
    umin = lam
    umax = -lam
    twolam = 2.0 * lam
    while True:
        while k == n - 1:
            if umin < 0.0:
                while k0 <= kminus:
                    x[k0] = vmin
                    k0 += 1
                k = kminus = k0
                vmin = y[k]
                umin = lam
                umax = vmin + umin - vmax
            elif umax > 0.0:
                while k0 <= kplus:
                    x[k0] = vmax
                    k0 += 1
                k = kplus = k0
                vmax = y[k]
                umax = -lam
                umin = vmax + umax - vmin
            else:
                vmin += umin / (k - k0 + 1)
                while k0 <= k:
                    x[k0] = vmin
                    k0 += 1
                return x
        umin += y[k + 1] - vmin
        if umin < -lam:
            while k0 <= kminus:
                x[k0] = vmin
                k0 += 1
            k = kminus = kplus = k0
            vmin = y[k]
            vmax = vmin + twolam
            umin = lam
            umax = -lam
            continue
        umax += y[k + 1] - vmax
        if umax > lam:
            while k0 <= kplus:
                x[k0] = vmax
                k0 += 1
            k = kminus = kplus = k0
            vmax = y[k]
            vmin = vmax - twolam
            umin = lam
            umax = -lam
            continue
        k += 1
        if umin >= lam:
            kminus = k
            vmin += (umin - lam) / (kminus - k0 + 1)
            umin = lam
        if umax <= -lam:
            kplus = k
            vmax += (umax + lam) / (kplus - k0 + 1)
            umax = -lam


def denoise_exact(y, lam: float) -> Signal:
    """Global minimiser of ``||y - x||^2 + lam * TV(x)``.

    Runs in O(N) time on typical inputs.
    """
    _check_lambda(lam)
    sig = as_signal(y)
    if lam == 0.0 or len(sig) == 1:
        return sig.with_samples(sig.samples.copy())
    # The direct scan works with the halved-fidelity cost, hence lam / 2.
    x = _direct_tv(sig.samples.tolist(), lam / 2.0)
    return sig.with_samples(np.array(x))


def denoise_bruteforce(y, lam: float, grid_lo: float, grid_hi: float, grid_steps: int) -> Signal:
    """Exhaustive minimisation of the TV cost over a uniform lattice.

    Every point of ``linspace(grid_lo, grid_hi, grid_steps) ** N`` is
    evaluated; ties go to the lexicographically smallest point.

    Raises
    ------
    RefusalError
        If ``len(y) > 5``.
    DomainError
        For an empty or degenerate grid.
    """
    _check_lambda(lam)
    sig = as_signal(y)
    n = len(sig)
    if n > BRUTEFORCE_MAX_N:
        raise RefusalError(f"brute force limited to N <= {BRUTEFORCE_MAX_N}, got N = {n}")
    if not grid_lo < grid_hi:
        raise DomainError(f"need grid_lo < grid_hi, got [{grid_lo}, {grid_hi}]")
    if int(grid_steps) != grid_steps or grid_steps < 2:
        raise DomainError(f"grid_steps must be an integer >= 2, got {grid_steps!r}")

    axis = np.linspace(grid_lo, grid_hi, int(grid_steps))
    total = int(grid_steps) ** n
    yv = sig.samples
    best_val = np.inf
    best_idx = 0
    # Flat C-order indices enumerate lattice points lexicographically, and
    # argmin returns the first minimum, so strict improvement across blocks
    # preserves the tie-break.
    for start in range(0, total, _BLOCK):
        flat = np.arange(start, min(start + _BLOCK, total))
        pts = axis[np.stack(np.unravel_index(flat, (int(grid_steps),) * n), axis=1)]
        r = pts - yv
        vals = np.einsum("ij,ij->i", r, r) + lam * np.abs(np.diff(pts, axis=1)).sum(axis=1)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = vals[i]
            best_idx = int(flat[i])
    point = axis[np.array(np.unravel_index(best_idx, (int(grid_steps),) * n))]
    return sig.with_samples(point)
