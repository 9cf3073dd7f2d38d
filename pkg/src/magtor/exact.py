"""Small dense exact linear algebra over the rationals.

Matrices are numpy object arrays holding ``int`` or ``Fraction`` entries, so
``@`` and ``.T`` work unchanged. Dimensions here are tiny (at most a dozen),
so plain Gauss-Jordan elimination is fast enough.
"""

from fractions import Fraction
from math import isqrt

import numpy as np


def parse_rational(value):
    """Parse an int, a ``Fraction`` or a ``"p/q"`` string into a ``Fraction``.

    Floats are rejected so that no binary64 rounding sneaks into exact data.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected int or 'p/q' string, got {type(value).__name__}")


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def as_exact(rows):
    """Convert a nested sequence to an object array of Fractions."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = parse_rational(v)
    return out


def as_integer(rows):
    """Convert a nested sequence to an object array of Python ints."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            if isinstance(v, Fraction) and v.denominator == 1:
                v = v.numerator
            else:
                raise TypeError(f"non-integer entry {v!r}")
        out[idx] = int(v)
    return out


def identity(n):
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def zeros(n, k=None):
    return np.zeros((n, n if k is None else k), dtype=object)


def to_float(M):
    return np.array(M, dtype=float)


def equal(A, B):
    """Exact entrywise equality."""
    A = np.asarray(A, dtype=object)
    B = np.asarray(B, dtype=object)
    return A.shape == B.shape and all(a == b for a, b in zip(A.flat, B.flat))


def is_symmetric(M):
    return equal(M, M.T)


def is_skew(M):
    return equal(M, -M.T)


def det(M):
    """Exact determinant by fraction-valued Gaussian elimination."""
    A = np.array(M, dtype=object)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("determinant of a non-square matrix")
    A = np.vectorize(Fraction, otypes=[object])(A) if n else A
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r, col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            A[[col, pivot]] = A[[pivot, col]]
            sign = -sign
        p = A[col, col]
        result *= p
        for r in range(col + 1, n):
            if A[r, col] != 0:
                A[r, col:] = A[r, col:] - (A[r, col] / p) * A[col, col:]
    return sign * result


def inverse(M):
    """Exact inverse by Gauss-Jordan elimination; raises on singular input."""
    A = np.array(M, dtype=object)
    n = A.shape[0]
    aug = np.empty((n, 2 * n), dtype=object)
    for i in range(n):
        for j in range(n):
            aug[i, j] = Fraction(A[i, j])
            aug[i, n + j] = Fraction(int(i == j))
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r, col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] = aug[col] / aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0:
                aug[r] = aug[r] - aug[r, col] * aug[col]
    return aug[:, n:]


def leading_minors_positive(M):
    """Sylvester's criterion: every leading principal minor is > 0."""
    n = np.asarray(M).shape[0]
    return all(det(np.asarray(M, dtype=object)[:k, :k]) > 0 for k in range(1, n + 1))


def exact_sqrt(x):
    """Square root of a nonnegative rational that is a perfect square, else None."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = isqrt(x.numerator), isqrt(x.denominator)
    if p * p == x.numerator and q * q == x.denominator:
        return Fraction(p, q)
    return None


def trace(M):
    return sum((M[i, i] for i in range(M.shape[0])), Fraction(0))
