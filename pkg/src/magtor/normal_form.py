"""Normal form of integral skew forms under unimodular congruence.

Every nondegenerate integer skew matrix W can be brought by an integer change
of basis A to block form [[0, R], [-R, 0]] with R = diag(r_1, ..., r_m) and
r_1 | r_2 | ... | r_m.  The r_j are the Chern invariant factors.

Orientation matters: Pf(A^T W A) = det(A) Pf(W), so a determinant +1 witness
exists only when Pf(W) has the sign of Pf(block form), i.e. the sign of
(-1)^{m(m-1)/2}.  For the other half of all forms only a determinant -1
witness exists; :func:`chern_invariant_factors` reports that case as
:class:`~magtor.errors.OrientationReversed`.
"""

import enum
from dataclasses import dataclass

import numpy as np

from magtor import exact
from magtor.core import SymplecticGram, block_form
from magtor.errors import DegenerateInput, DimensionMismatch, OrientationReversed


@dataclass(frozen=True)
class ChernFactors:
    r: tuple

    def __post_init__(self):
        r = tuple(int(x) for x in self.r)
        object.__setattr__(self, "r", r)
        if not r or any(x < 1 for x in r):
            raise ValueError("Chern factors must be positive integers")
        if any(b % a for a, b in zip(r, r[1:])):
            raise ValueError(f"{r} is not a divisibility chain")

    @property
    def m(self):
        return len(self.r)

    @property
    def volume(self):
        out = 1
        for x in self.r:
            out *= x
        return out


@dataclass(frozen=True)
class UnimodularTransform:
    A: tuple

    def __post_init__(self):
        arr = exact.as_integer(self.A)
        object.__setattr__(self, "A", tuple(tuple(row) for row in arr))
        if exact.det(arr) != 1:
            raise ValueError("unimodular transform must have determinant +1")

    @property
    def matrix(self):
        return np.array(self.A, dtype=object)


class _Reducer:
    """Congruence reduction W -> E^T W E, tracking the basis A (columns)."""

    def __init__(self, w):
        self.W = np.array(w, dtype=object)
        self.n = self.W.shape[0]
        self.A = exact.identity(self.n)

    def swap(self, i, j):
        if i == j:
            return
        self.A[:, [i, j]] = self.A[:, [j, i]]
        self.W[:, [i, j]] = self.W[:, [j, i]]
        self.W[[i, j], :] = self.W[[j, i], :]

    def add(self, k, c, src):
        """Replace basis vector k by e_k + c e_src."""
        if c == 0:
            return
        self.A[:, k] = self.A[:, k] + c * self.A[:, src]
        self.W[:, k] = self.W[:, k] + c * self.W[:, src]
        self.W[k, :] = self.W[k, :] + c * self.W[src, :]

    def pivot(self, start):
        """Smallest |entry| above the diagonal; ties by row, then column."""
        best = None
        for i in range(start, self.n):
            for j in range(i + 1, self.n):
                v = self.W[i, j]
                if v != 0 and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        return best

    def reduce_block(self, a0):
        b0 = a0 + 1
        n, W = self.n, self.W
        while True:
            found = self.pivot(a0)
            if found is None:
                raise DegenerateInput("magnetic form is degenerate")
            _, i, j = found
            self.swap(a0, i)
            self.swap(b0, j)
            if W[a0, b0] < 0:
                self.swap(a0, b0)
            a = W[a0, b0]
            for k in range(b0 + 1, n):
                self.add(k, -(W[a0, k] // a), b0)
                self.add(k, W[b0, k] // a, a0)
            if any(W[a0, k] or W[b0, k] for k in range(b0 + 1, n)):
                continue
            bad = next(
                ((k, l) for k in range(b0 + 1, n) for l in range(k + 1, n) if W[k, l] % a),
                None,
            )
            if bad is None:
                return a
            self.add(a0, 1, bad[0])


def reduce_skew(magnetic):
    """Return (r, A) with A^T W A = block_form(r), A in GL(2m, Z).

    det(A) is +1 or -1 depending on the orientation of W; no check is made.
    """
    w = magnetic.matrix if isinstance(magnetic, SymplecticGram) else np.array(magnetic, dtype=object)
    n = w.shape[0]
    if n % 2 or w.shape != (n, n):
        raise DimensionMismatch("magnetic form must be square of even size")
    if exact.det(w) == 0:
        raise DegenerateInput("det(omega) = 0")
    red = _Reducer(w)
    r = [red.reduce_block(2 * t) for t in range(n // 2)]
    order = list(range(0, n, 2)) + list(range(1, n, 2))
    return tuple(int(x) for x in r), red.A[:, order]


def chern_factors(magnetic):
    """Only the invariant factors; works for either orientation."""
    r, _ = reduce_skew(magnetic)
    return ChernFactors(r)


def chern_invariant_factors(magnetic, allow_reversed=False):
    """Chern factors r and an integer A with det(A) = +1 and A^T W A = block_form(r).

    If W is negatively oriented no determinant +1 witness exists; by default
    this raises :class:`OrientationReversed` carrying the factors and the
    determinant -1 witness.  With ``allow_reversed=True`` the pair
    ``(ChernFactors, A)`` is returned with A a plain integer array instead.
    """
    r, A = reduce_skew(magnetic)
    factors = ChernFactors(r)
    if exact.det(A) == 1:
        return factors, UnimodularTransform(A)
    if allow_reversed:
        return factors, A
    raise OrientationReversed(
        f"magnetic form with factors {r} has the opposite orientation to its "
        "block normal form; only a det -1 witness exists",
        factors=factors,
        transform=A,
    )


def verify_normal_form(magnetic, r, A):
    """True iff A^T W A equals block_form(r) exactly, det(A) = +1 and r is a chain."""
    w = magnetic.matrix if isinstance(magnetic, SymplecticGram) else np.array(magnetic, dtype=object)
    rr = r.r if isinstance(r, ChernFactors) else tuple(r)
    mat = A.matrix if isinstance(A, UnimodularTransform) else np.array(A, dtype=object)
    if mat.shape != w.shape or 2 * len(rr) != w.shape[0]:
        return False
    if any(x < 1 for x in rr) or any(b % a for a, b in zip(rr, rr[1:])):
        return False
    if exact.det(mat) != 1:
        return False
    return exact.equal(mat.T @ w @ mat, block_form(rr))


def orientation(magnetic):
    """+1 if a determinant +1 normal-form witness exists, else -1."""
    _, A = reduce_skew(magnetic)
    return int(exact.det(A))


class Obstruction(enum.Enum):
    NOT_SYMPLECTOMORPHIC = "NotSymplectomorphic"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ObstructionResult:
    verdict: Obstruction
    factors1: ChernFactors
    factors2: ChernFactors

    def as_dict(self):
        return {
            "verdict": self.verdict.value,
            "factors1": list(self.factors1.r),
            "factors2": list(self.factors2.r),
        }


def phase_space_obstruction(magnetic1, magnetic2):
    """Compare Chern factors of two magnetic forms.

    Different factors mean the twisted cotangent bundles are not
    symplectomorphic, with or without the zero section.  Equal factors decide
    nothing, since forms with equal factors need not be cohomologous.
    """
    if magnetic1.dim != magnetic2.dim:
        raise DimensionMismatch(f"dimensions {magnetic1.dim} and {magnetic2.dim} differ")
    r1, r2 = chern_factors(magnetic1), chern_factors(magnetic2)
    verdict = Obstruction.NOT_SYMPLECTOMORPHIC if r1 != r2 else Obstruction.INCONCLUSIVE
    return ObstructionResult(verdict, r1, r2)
