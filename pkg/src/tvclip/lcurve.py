"""L-curve sweeps and corner selection for the regularisation weight."""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoCornerError
from .oracle import denoise_exact
from .signal_model import as_signal
from .tv_clip import DenoiseParams, cost, denoise_clip, tv_seminorm

__all__ = [
    "Solver",
    "LCurvePoint",
    "LCurveSweep",
    "lambda_grid",
    "sweep",
    "menger_curvature",
    "corner_index",
    "corner",
    "COLLINEAR_TOL",
]

COLLINEAR_TOL = 1e-12


class Solver(str, enum.Enum):
    CLIP = "clip"
    EXACT = "exact"


@dataclass(frozen=True)
class LCurvePoint:
    lam: float
    residual_norm: float
    tv_norm: float
    cost: float


@dataclass(frozen=True)
class LCurveSweep:
    points: tuple[LCurvePoint, ...]
    solver: Solver = Solver.EXACT

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "solver", Solver(self.solver))
        if len(self.points) < 3:
            raise DomainError(f"a sweep needs at least 3 points, got {len(self.points)}")
        lams = [p.lam for p in self.points]
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise DomainError("sweep lambdas must be strictly increasing")

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([p.lam for p in self.points])


def lambda_grid(lambda_lo: float, lambda_hi: float, count: int) -> np.ndarray:
    """``count`` logarithmically spaced values on ``[lambda_lo, lambda_hi]``."""
    if not (0 < lambda_lo < lambda_hi and math.isfinite(lambda_hi)):
        raise DomainError(f"need 0 < lambda_lo < lambda_hi, got [{lambda_lo}, {lambda_hi}]")
    if int(count) != count or count < 3:
        raise DomainError(f"count must be an integer >= 3, got {count!r}")
    grid = np.geomspace(lambda_lo, lambda_hi, int(count))
    grid[0], grid[-1] = lambda_lo, lambda_hi
    return grid


def sweep(
    y,
    lambda_lo: float,
    lambda_hi: float,
    count: int,
    solver=Solver.EXACT,
    solver_params: DenoiseParams | None = None,
    workers: int = 1,
) -> LCurveSweep:
    """Solve the TV problem on a log-spaced lambda grid and record the L-curve.

    ``solver_params`` supplies ``max_iter``, ``alpha`` and ``tol`` for the
    clipping solver; its ``lam`` is replaced by each grid value. ``workers``
    above 1 evaluates grid points concurrently; points are always returned in
    lambda order.
    """
    y = as_signal(y)
    solver = Solver(solver)
    grid = lambda_grid(lambda_lo, lambda_hi, count)
    template = solver_params or DenoiseParams(max_iter=2000)

    def evaluate(lam):
        lam = float(lam)
        if solver is Solver.EXACT:
            x = denoise_exact(y, lam)
        else:
            x = denoise_clip(y, DenoiseParams(lam, template.max_iter, template.alpha, template.tol)).x
        r = y.samples - x.samples
        return LCurvePoint(lam, math.sqrt(float(r @ r)), tv_seminorm(x), cost(y, x, lam))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(evaluate, grid))
    else:
        points = [evaluate(lam) for lam in grid]
    return LCurveSweep(tuple(points), solver)


def menger_curvature(a, b, c) -> float:
    """Reciprocal circumradius of a planar triangle (0 for collinear points)."""
    (ax, ay), (bx, by), (cx, cy) = a, b, c
    cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    ab = math.hypot(bx - ax, by - ay)
    bc = math.hypot(cx - bx, cy - by)
    ca = math.hypot(ax - cx, ay - cy)
    denom = ab * bc * ca
    if denom == 0.0:
        return 0.0
    return 2.0 * abs(cross) / denom


def corner_index(sweep: LCurveSweep) -> int:
    """Index into ``sweep.points`` of the maximum-curvature vertex.

    Points with zero residual or zero TV have no log coordinates and are
    skipped. Ties go to the smaller lambda.
    """
    usable = [i for i, p in enumerate(sweep.points) if p.residual_norm > 0 and p.tv_norm > 0]
    if len(usable) < 3:
        raise NoCornerError(f"need 3 points with positive residual and TV, have {len(usable)}")
    coords = [(math.log(sweep.points[i].residual_norm), math.log(sweep.points[i].tv_norm)) for i in usable]
    best, best_k = 0.0, None
    for k in range(1, len(coords) - 1):
        kappa = menger_curvature(coords[k - 1], coords[k], coords[k + 1])
        if kappa > best:
            best, best_k = kappa, k
    if best_k is None or best <= COLLINEAR_TOL:
        raise NoCornerError("all L-curve triples are collinear")
    return usable[best_k]


def corner(sweep: LCurveSweep) -> float:
    """Lambda at the L-curve corner."""
    return sweep.points[corner_index(sweep)].lam
