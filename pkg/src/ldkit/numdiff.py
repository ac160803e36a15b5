"""Central finite-difference helpers shared across the package."""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["gradient_step", "central_gradient", "central_jacobian"]


def gradient_step(x: np.ndarray, scale: float = 1e-6) -> float:
    """Step size scale * max(1, |x|) used for all first derivatives."""
    return scale * max(1.0, float(np.linalg.norm(x)))


def central_gradient(fn: Callable[[np.ndarray], float], x: np.ndarray,
                     step: float | None = None) -> np.ndarray:
    """Central-difference gradient of a scalar function at ``x``."""
    h = gradient_step(x) if step is None else step
    grad = np.empty(x.shape[0])
    probe = x.astype(float, copy=True)
    for i in range(x.shape[0]):
        xi = probe[i]
        probe[i] = xi + h
        hi = fn(probe)
        probe[i] = xi - h
        lo = fn(probe)
        probe[i] = xi
        grad[i] = (hi - lo) / (2.0 * h)
    return grad


def central_jacobian(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                     step: float | None = None) -> np.ndarray:
    """Central-difference Jacobian of a vector function at ``x``.

    Returns a (len(fn(x)), len(x)) matrix.
    """
    h = gradient_step(x) if step is None else step
    probe = x.astype(float, copy=True)
    cols = []
    for i in range(x.shape[0]):
        xi = probe[i]
        probe[i] = xi + h
        hi = np.asarray(fn(probe), dtype=float)
        probe[i] = xi - h
        lo = np.asarray(fn(probe), dtype=float)
        probe[i] = xi
        cols.append((hi - lo) / (2.0 * h))
    return np.column_stack(cols) if cols else np.zeros((0, 0))
