"""Flat tori carrying a translation-invariant magnetic field.

A system is the pair of Gram matrices (metric, magnetic form) on R^{2m} with
the standard lattice Z^{2m}.  The metric is exact rational, the magnetic form
is an integer skew matrix.  Everything algebraic is done exactly; only the
eigenvalue extraction in :func:`spectral_signature` uses binary64.
"""

from dataclasses import dataclass, field
from math import isqrt

import numpy as np
import scipy.linalg

from magtor import exact
from magtor.errors import (
    DimensionMismatch,
    MagneticDegenerate,
    MagneticNotInteger,
    MagneticNotSkew,
    MetricNotPositiveDefinite,
    MetricNotSymmetric,
    NotPerfectSquare,
    PairingFailure,
    ValidationError,
)

DEFAULT_TOL = 1e-9


def _freeze(arr):
    return tuple(tuple(row) for row in arr)


@dataclass(frozen=True)
class MetricGram:
    """Gram matrix of a translation-invariant metric, exact rational entries."""

    entries: tuple

    @classmethod
    def from_rows(cls, rows):
        arr = exact.as_exact(rows)
        n, k = arr.shape
        if n != k or n == 0 or n % 2:
            raise DimensionMismatch(f"metric must be square of even size, got {n}x{k}")
        return cls(_freeze(arr))

    @property
    def dim(self):
        return len(self.entries)

    @property
    def matrix(self):
        return np.array(self.entries, dtype=object)

    def to_float(self):
        return exact.to_float(self.entries)


@dataclass(frozen=True)
class SymplecticGram:
    """Gram matrix of an integral translation-invariant 2-form."""

    entries: tuple

    @classmethod
    def from_rows(cls, rows):
        arr = exact.as_integer(rows)
        n, k = arr.shape
        if n != k or n == 0 or n % 2:
            raise DimensionMismatch(f"magnetic form must be square of even size, got {n}x{k}")
        return cls(_freeze(arr))

    @property
    def dim(self):
        return len(self.entries)

    @property
    def matrix(self):
        return np.array(self.entries, dtype=object)

    def to_float(self):
        return exact.to_float(self.entries)


@dataclass(frozen=True)
class TorusMagneticSystem:
    m: int
    metric: MetricGram
    magnetic: SymplecticGram

    def __post_init__(self):
        if self.m < 1:
            raise DimensionMismatch("m must be positive")
        if not (self.metric.dim == self.magnetic.dim == 2 * self.m):
            raise DimensionMismatch(
                f"expected {2 * self.m}x{2 * self.m} matrices, got metric "
                f"{self.metric.dim} and magnetic {self.magnetic.dim}"
            )

    @classmethod
    def from_rows(cls, metric, magnetic):
        h = MetricGram.from_rows(metric)
        w = SymplecticGram.from_rows(magnetic)
        return cls(h.dim // 2, h, w)


@dataclass(frozen=True)
class SpectralSignature:
    """Sorted values d_j^2 together with the symplectic volume."""

    d_squared: tuple
    sympl_volume: float
    m: int = field(default=0)

    def __post_init__(self):
        d2 = tuple(sorted(float(x) for x in self.d_squared))
        object.__setattr__(self, "d_squared", d2)
        object.__setattr__(self, "sympl_volume", float(self.sympl_volume))
        if self.m == 0:
            object.__setattr__(self, "m", len(d2))
        if len(d2) != self.m or self.m < 1:
            raise ValueError("d_squared must hold exactly m >= 1 values")
        if any(x <= 0 for x in d2) or self.sympl_volume <= 0:
            raise ValueError("signature values must be positive")

    def close_to(self, other, tol=DEFAULT_TOL):
        """Multiset comparison of d^2 (relative tol) and volumes."""
        if self.m != other.m:
            return False
        pairs = zip(self.d_squared, other.d_squared)
        if any(abs(a - b) > tol * max(1.0, abs(a), abs(b)) for a, b in pairs):
            return False
        v1, v2 = self.sympl_volume, other.sympl_volume
        return abs(v1 - v2) <= tol * max(1.0, v1, v2)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self):
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def raise_if_invalid(self):
        for c in self.checks:
            if not c.passed:
                raise _ERRORS[c.name](c.detail or c.name)

    def as_dict(self):
        return {
            "valid": self.ok,
            "checks": [{"check": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


_ERRORS = {
    "MetricNotSymmetric": MetricNotSymmetric,
    "MetricNotPositiveDefinite": MetricNotPositiveDefinite,
    "MagneticNotSkew": MagneticNotSkew,
    "MagneticNotInteger": MagneticNotInteger,
    "MagneticDegenerate": MagneticDegenerate,
}


def validate_system(sys):
    """Check every structural invariant of ``sys`` in exact arithmetic."""
    h = sys.metric.matrix
    w = sys.magnetic.matrix
    checks = []

    sym = exact.is_symmetric(h)
    checks.append(Check("MetricNotSymmetric", sym, "" if sym else "metric is not symmetric"))
    if sym:
        minors = [exact.det(h[:k, :k]) for k in range(1, h.shape[0] + 1)]
        bad = next((k for k, d in enumerate(minors, 1) if d <= 0), None)
        detail = "" if bad is None else f"leading minor of order {bad} is {minors[bad - 1]}"
        checks.append(Check("MetricNotPositiveDefinite", bad is None, detail))
    else:
        checks.append(Check("MetricNotPositiveDefinite", False, "skipped: metric not symmetric"))

    integral = all(isinstance(v, int) for v in w.flat)
    checks.append(Check("MagneticNotInteger", integral, "" if integral else "non-integer entry"))
    skew = exact.is_skew(w)
    checks.append(Check("MagneticNotSkew", skew, "" if skew else "magnetic form is not skew"))
    d = exact.det(w)
    checks.append(Check("MagneticDegenerate", d != 0, "" if d != 0 else "det(omega) = 0"))
    return ValidationReport(tuple(checks))


def check_system(sys):
    """Raise the first violated invariant of ``sys`` as a typed error."""
    validate_system(sys).raise_if_invalid()
    return sys


def f_matrix(sys):
    """The exact matrix of F = h^{-1} omega."""
    return exact.inverse(sys.metric.matrix) @ sys.magnetic.matrix


def symplectic_volume(magnetic):
    """sqrt(det(omega)) as an exact integer."""
    d = exact.det(magnetic.matrix)
    if d.denominator != 1 or d <= 0:
        raise NotPerfectSquare(f"det(omega) = {d} is not a positive integer square")
    root = isqrt(d.numerator)
    if root * root != d.numerator:
        raise NotPerfectSquare(f"det(omega) = {d} is not a perfect square")
    return root


def skew_congruent(h, w):
    """S = L^{-1} w L^{-T} for the Cholesky factor h = L L^T (binary64)."""
    L = np.linalg.cholesky(np.asarray(h, dtype=float))
    X = scipy.linalg.solve_triangular(L, np.asarray(w, dtype=float), lower=True)
    S = scipy.linalg.solve_triangular(L, X.T, lower=True).T
    return 0.5 * (S - S.T)


def spectral_signature(sys, tol=DEFAULT_TOL):
    """The multiset {d_j^2} of F = h^{-1} omega and the symplectic volume.

    F is similar to the skew matrix S = L^{-1} omega L^{-T}, whose singular
    values come in equal pairs d_1^2, d_1^2, d_2^2, d_2^2, ...
    """
    return signature_from_matrices(sys.metric.to_float(), sys.magnetic, tol)


def signature_from_matrices(h, magnetic, tol=DEFAULT_TOL):
    """Signature for a binary64 metric ``h`` and an exact magnetic form."""
    m = magnetic.dim // 2
    sigma = np.linalg.svd(skew_congruent(h, magnetic.to_float()), compute_uv=False)
    scale = max(1.0, sigma[0])
    d2 = []
    for j in range(m):
        a, b = sigma[2 * j], sigma[2 * j + 1]
        if abs(a - b) > tol * scale:
            raise PairingFailure(f"singular values {a!r} and {b!r} do not pair")
        d2.append(b)
    return SpectralSignature(tuple(d2), float(symplectic_volume(magnetic)), m)


def standard_form(m):
    """J0 = [[0, I], [-I, 0]] in (x_1..x_m, y_1..y_m) order."""
    return block_form([1] * m)


def block_form(r):
    """Gram matrix of sum_j r_j dx_j ^ dy_j in (x_1..x_m, y_1..y_m) order."""
    m = len(r)
    out = exact.zeros(2 * m)
    for j, rj in enumerate(r):
        out[j, m + j] = int(rj)
        out[m + j, j] = -int(rj)
    return out


def interleaved_form(r):
    """Gram matrix of sum_j r_j dx_j ^ dy_j in (x_1, y_1, ..., x_m, y_m) order."""
    m = len(r)
    out = exact.zeros(2 * m)
    for j, rj in enumerate(r):
        out[2 * j, 2 * j + 1] = int(rj)
        out[2 * j + 1, 2 * j] = -int(rj)
    return out


__all__ = [
    "DEFAULT_TOL",
    "MetricGram",
    "SymplecticGram",
    "TorusMagneticSystem",
    "SpectralSignature",
    "ValidationError",
    "ValidationReport",
    "validate_system",
    "check_system",
    "f_matrix",
    "symplectic_volume",
    "spectral_signature",
    "signature_from_matrices",
    "standard_form",
    "block_form",
    "interleaved_form",
]
