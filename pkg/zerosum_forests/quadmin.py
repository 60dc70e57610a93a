"""Numerical certificate for the quadratic bound behind the P4-factor argument.

f is minimized over the simplex x1+...+x5 = 1, x ≥ 0, cut by the half-space
3x1 + x2 − x3 − x4 − 3x5 ≥ 0. The minimum is 5/256 at (1/4, 0, 0, 3/4, 0).
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from zerosum_forests.lib import log
from zerosum_forests.schemas import Lemma1Certificate
from zerosum_forests.sweep import run_map
from zerosum_forests.utils import convert_numpy_list_to_python

EXPECTED_POINT = (0.25, 0.0, 0.0, 0.75, 0.0)
EXPECTED_VALUE = Fraction(5, 256)
HALFSPACE = np.array([3.0, 1.0, -1.0, -1.0, -3.0])
FEASIBLE_TOL = 1e-12
STEP_FLOOR = 1e-9

# f(x) = x^T Q x with Q symmetric
Q = np.array(
    [
        [1 / 2, 1 / 2, 1 / 2, 1 / 4, 1 / 4],
        [1 / 2, 1 / 2, 1 / 2, 0, 0],
        [1 / 2, 1 / 2, 1 / 2, 0, 0],
        [1 / 4, 0, 0, -3 / 16, -1 / 4],
        [1 / 4, 0, 0, -1 / 4, -1 / 2],
    ]
)


@dataclass(frozen=True)
class SimplexPoint:
    x: tuple[float, ...]

    @property
    def sum_residual(self) -> float:
        return abs(sum(self.x) - 1.0)

    @property
    def halfspace_residual(self) -> float:
        """How far the half-space constraint is violated, 0 when it holds."""
        return max(0.0, -float(HALFSPACE @ np.asarray(self.x)))

    def feasible(self, tol: float = FEASIBLE_TOL) -> bool:
        return (
            len(self.x) == 5
            and min(self.x) >= -tol
            and self.sum_residual <= tol
            and self.halfspace_residual <= tol
        )


def f_eval(x: Sequence[float]) -> float:
    x1, x2, x3, x4, x5 = x
    return (
        x1 * x1 / 2
        + x2 * x2 / 2
        + x3 * x3 / 2
        - 3 * x4 * x4 / 16
        - x5 * x5 / 2
        + x1 * x2
        + x1 * x3
        + x2 * x3
        + x1 * x4 / 2
        + x1 * x5 / 2
        - x4 * x5 / 2
    )


def f_exact(x: Sequence[Fraction | int]) -> Fraction:
    return Fraction(f_eval([Fraction(v) for v in x]))  # pyright: ignore[reportArgumentType]


def f_values(X: np.ndarray) -> np.ndarray:
    """f on every row of an (m, 5) array."""
    return np.einsum("ij,jk,ik->i", X, Q, X)


def _grid_chunk(args: tuple[int, int, tuple[int, ...]]) -> tuple[float, list[float], int]:
    """Best feasible grid point with x1 = a1/resolution, plus the number of points scanned."""
    resolution, a1, face = args
    rest = resolution - a1
    a = np.arange(rest + 1)
    a2, a3, a4 = np.meshgrid(a, a, a, indexing="ij")
    a2, a3, a4 = a2.ravel(), a3.ravel(), a4.ravel()
    keep = a2 + a3 + a4 <= rest
    a2, a3, a4 = a2[keep], a3[keep], a4[keep]
    a5 = rest - a2 - a3 - a4
    A = np.stack([np.full_like(a2, a1), a2, a3, a4, a5], axis=1)
    for i in face:
        A = A[A[:, i] == 0]
    A = A[A @ HALFSPACE >= 0]
    if len(A) == 0:
        return float("inf"), [], 0
    X = A / resolution
    values = f_values(X)
    best = int(np.argmin(values))
    return float(values[best]), convert_numpy_list_to_python(X[best]), len(A)


def grid_sweep(resolution: int = 64, face: Sequence[int] = (), jobs: int = 1) -> tuple[float, list[float], int]:
    """Minimum of f over the feasible grid of the given resolution.

    Args:
        resolution: Grid step is 1/resolution
        face: Coordinates (0-based) held at zero
        jobs: Worker processes, one chunk per value of x1

    Returns:
        (value, point, number of feasible grid points)
    """
    chunks = run_map(_grid_chunk, [(resolution, a1, tuple(face)) for a1 in range(resolution + 1)], jobs)
    value, point, _ = min(chunks, key=lambda c: c[0])
    total = sum(c[2] for c in chunks)
    return value, point, total


def descend(
    x0: Sequence[float], step: float, free: Sequence[int] = range(5), floor: float = STEP_FLOOR
) -> tuple[list[float], float, float]:
    """Pairwise mass transfers x_i → x_j, halving the step down to floor.

    Only feasible strict improvements are accepted.

    Returns:
        (point, value, largest constraint residual over accepted points)
    """
    x = np.array(x0, dtype=float)
    value = f_eval(x)
    worst = 0.0
    pairs = list(permutations(free, 2))
    h = step
    while h >= floor:
        improved = True
        while improved:
            improved = False
            for i, j in pairs:
                t = min(h, x[i])
                if t <= 0:
                    continue
                y = x.copy()
                y[i] -= t
                y[j] += t
                if HALFSPACE @ y < -FEASIBLE_TOL:
                    continue
                fy = f_eval(y)
                if fy < value - 1e-15:
                    x, value = y, fy
                    point = SimplexPoint(tuple(x))
                    worst = max(worst, point.sum_residual, point.halfspace_residual)
                    improved = True
        h /= 2
    return convert_numpy_list_to_python(x), value, worst


def minimize(resolution: int = 64, face: Sequence[int] = (), jobs: int = 1) -> tuple[SimplexPoint, float]:
    """Grid search at 1/resolution, then pairwise-transfer descent from the best grid point."""
    _, start, _ = grid_sweep(resolution, face, jobs)
    free = [i for i in range(5) if i not in set(face)]
    point, value, _ = descend(start, 1 / resolution, free)
    return SimplexPoint(tuple(point)), value


def proof_identities(point: SimplexPoint) -> dict[str, float]:
    """Residuals of the relations the minimizer satisfies: x2 = x3 = x5 = 0 and 3x1 = x4."""
    x1, x2, x3, x4, x5 = point.x
    return {"x2": abs(x2), "x3": abs(x3), "x5": abs(x5), "3x1-x4": abs(3 * x1 - x4)}


def aggregate_bound(n: int) -> float:
    """(5/256)n² − (7/2)n, the lower bound on c(E(K_n)) a stuck P4-factor forces."""
    return float(Fraction(5, 256) * n * n - Fraction(7, 2) * n)


def certify(resolution: int = 64, jobs: int = 1) -> Lemma1Certificate:
    point, value = minimize(resolution, jobs=jobs)
    distance = float(np.linalg.norm(np.array(point.x) - np.array(EXPECTED_POINT)))
    exact = f_exact([Fraction(1, 4), 0, 0, Fraction(3, 4), 0])
    certified = (
        value >= float(EXPECTED_VALUE) - 1e-9
        and distance <= 1e-4
        and exact == EXPECTED_VALUE
        and point.feasible(1e-9)
    )
    log("VERIFY", "quadratic bound", f"value={value!r} distance={distance:.2e}", success=certified)
    return Lemma1Certificate(
        point=list(point.x),
        value=value,
        exact_value=f"{exact.numerator}/{exact.denominator}",
        sum_residual=point.sum_residual,
        halfspace_residual=point.halfspace_residual,
        distance_to_expected=distance,
        certified=certified,
    )
