"""Exact linear algebra over fractions."""

from fractions import Fraction
from typing import Sequence

import numpy as np


def fraction_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    """Object-dtype array of Fractions."""
    return np.array([[Fraction(v) for v in row] for row in rows], dtype=object).reshape(
        len(rows), len(rows[0]) if len(rows) else 0)


def identity_matrix(n: int) -> np.ndarray:
    return np.array([[Fraction(i == j) for j in range(n)] for i in range(n)], dtype=object).reshape(n, n)


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve a @ x = b exactly by Gauss-Jordan elimination.

    `b` may hold several right-hand sides as columns. Pivots are chosen by
    largest magnitude in the column.
    """
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"matrix is not square: {a.shape}")
    x = a.copy()
    y = b.copy().reshape(n, -1)

    for i in range(n):
        pivot = max(range(i, n), key=lambda r: abs(x[r, i]))
        if x[pivot, i] == 0:
            raise ValueError("matrix is singular")
        if pivot != i:
            x[[i, pivot]] = x[[pivot, i]]
            y[[i, pivot]] = y[[pivot, i]]

        y[i, :] /= x[i, i]
        x[i, :] /= x[i, i]

        for j in range(n):
            if j != i and x[j, i] != 0:
                factor = x[j, i]
                y[j, :] -= factor * y[i, :]
                x[j, :] -= factor * x[i, :]

    return y if b.ndim > 1 else y[:, 0]
