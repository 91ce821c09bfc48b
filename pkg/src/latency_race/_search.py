"""Deterministic 1-D maximisation: a fixed bracketing grid refined by golden section."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI2 = (3 - math.sqrt(5)) / 2


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Return the midpoint of a bracket of width <= tol around a local maximum of f on [a, b]."""
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        return 0.5 * (a + b)
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI2 * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)
    for _ in range(n - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            h *= INV_PHI
            c = a + INV_PHI2 * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h *= INV_PHI
            d = a + INV_PHI * h
            yd = f(d)
    if yc > yd:
        return 0.5 * (a + d)
    return 0.5 * (c + b)


def grid_then_golden(
    f_scalar: Callable[[float], float],
    f_vector: Callable[[np.ndarray], np.ndarray],
    grid: np.ndarray,
    lo: float,
    hi: float,
    tol: float,
) -> tuple[float, float]:
    """Maximise over ``grid`` then refine between the best point's neighbours.

    The refined point is kept only if it is at least as good as the best grid
    point, so the result never loses to the grid. Returns ``(x, f(x))``.
    """
    values = f_vector(grid)
    i = int(np.argmax(values))
    left = grid[i - 1] if i > 0 else lo
    right = grid[i + 1] if i < len(grid) - 1 else hi
    x = golden_section_max(f_scalar, left, right, tol)
    fx = f_scalar(x)
    best_x = float(grid[i])
    best_f = f_scalar(best_x)
    if fx >= best_f:
        return x, fx
    return best_x, best_f
