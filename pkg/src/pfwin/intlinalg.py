"""Exact integer and rational matrix helpers on numpy object arrays."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CertificationError


def as_int_matrix(rows: Sequence[Sequence[int]]) -> np.ndarray:
    a = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            a[i, j] = int(x)
    return a


def zeros(n: int, m: int | None = None) -> np.ndarray:
    a = np.empty((n, n if m is None else m), dtype=object)
    a[...] = 0
    return a


def identity(n: int) -> np.ndarray:
    a = zeros(n)
    for i in range(n):
        a[i, i] = 1
    return a


def to_lists(a: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in a]


def _row_reduce(a: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    rows = len(a)
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: np.ndarray) -> int:
    a = [[Fraction(int(x)) for x in row] for row in m]
    _, pivots = _row_reduce(a, m.shape[1])
    return len(pivots)


def solve_rational(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve ``m x = b`` for square invertible ``m``; ``b`` may have several columns."""
    n = m.shape[0]
    b2 = b.reshape(n, -1)
    k = b2.shape[1]
    aug = [[Fraction(int(x)) for x in m[i]] + [Fraction(int(x)) for x in b2[i]] for i in range(n)]
    red, pivots = _row_reduce(aug, n)
    if pivots != list(range(n)):
        raise CertificationError("singular system")
    out = np.empty((n, k), dtype=object)
    for i in range(n):
        for j in range(k):
            out[i, j] = red[i][n + j]
    return out if b.ndim == 2 else out[:, 0]


def solve_integer(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """As ``solve_rational`` but insists on an integral solution."""
    x = solve_rational(m, b)
    flat = x.reshape(-1)
    if any(v.denominator != 1 for v in flat):
        raise CertificationError("solution is not integral")
    out = np.empty(x.shape, dtype=object)
    out.reshape(-1)[:] = [int(v) for v in flat]
    return out


def inverse_integer(m: np.ndarray) -> np.ndarray:
    return solve_integer(m, identity(m.shape[0]))


def det(m: np.ndarray) -> int:
    n = m.shape[0]
    a = [[Fraction(int(x)) for x in row] for row in m]
    sign = 1
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    out = sign * d
    assert out.denominator == 1
    return int(out)


def is_unit_upper_triangular(m: np.ndarray) -> bool:
    n = m.shape[0]
    return all(m[i, i] == 1 for i in range(n)) and all(
        m[i, j] == 0 for i in range(n) for j in range(i)
    )


def is_nilpotent(m: np.ndarray) -> bool:
    p = m.copy()
    for _ in range(m.shape[0]):
        p = p.dot(m)
    return not p.any()


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(int(x) == int(y) for x, y in zip(a.reshape(-1), b.reshape(-1)))
