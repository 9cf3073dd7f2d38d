"""Truncated length spectra of flat tori Z^n \\ R^n.

Squared lengths v^T h v of nonzero lattice vectors are enumerated inside the
ellipsoid v^T h v <= bound with the Fincke-Pohst recursion, after an LLL
reduction of the Gram matrix.  For an exact (rational) metric the returned
values are exact ``Fraction`` objects; for a binary64 metric they are floats.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from magtor import exact
from magtor.core import MetricGram
from magtor.errors import BoundTooLarge


@dataclass(frozen=True)
class LengthSpectrum:
    values: tuple  # ascending, with multiplicity
    bound: object
    truncated: bool

    def counts(self):
        """[(value, multiplicity), ...] for exact spectra."""
        out = []
        for v in self.values:
            if out and out[-1][0] == v:
                out[-1][1] += 1
            else:
                out.append([v, 1])
        return [tuple(x) for x in out]


def _gso(G):
    n = G.shape[0]
    mu = np.zeros((n, n))
    B = np.zeros(n)
    for i in range(n):
        for j in range(i):
            mu[i, j] = (G[i, j] - sum(mu[j, l] * mu[i, l] * B[l] for l in range(j))) / B[j]
        B[i] = G[i, i] - sum(mu[i, l] ** 2 * B[l] for l in range(i))
    return mu, B


def lll_reduce(G, delta=0.75):
    """Integer unimodular U such that U^T G U is LLL-reduced (binary64 Gram)."""
    G = np.array(G, dtype=float)
    n = G.shape[0]
    U = np.eye(n, dtype=np.int64)

    def add(k, c, j):
        U[:, k] += c * U[:, j]
        G[:, k] += c * G[:, j]
        G[k, :] += c * G[j, :]

    k, guard = 1, 0
    while k < n:
        guard += 1
        if guard > 10000:
            break
        for j in range(k - 1, -1, -1):
            mu, _ = _gso(G)
            c = round(mu[k, j])
            if c:
                add(k, -c, j)
        mu, B = _gso(G)
        if B[k] >= (delta - mu[k, k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            U[:, [k - 1, k]] = U[:, [k, k - 1]]
            G[:, [k - 1, k]] = G[:, [k, k - 1]]
            G[[k - 1, k], :] = G[[k, k - 1], :]
            k = max(k - 1, 1)
    return U


def _fincke_pohst(G, bound, budget):
    """Integer vectors v != 0 with v^T G v <= bound (small float slack)."""
    n = G.shape[0]
    R = np.linalg.cholesky(G).T  # G = R^T R, R upper triangular
    d = np.diag(R) ** 2
    Q = R / np.diag(R)[:, None]
    limit = bound * (1 + 1e-9) + 1e-12
    found = []
    v = np.zeros(n, dtype=np.int64)
    visited = 0

    def recurse(i, rest):
        nonlocal visited
        c = -float(Q[i, i + 1 :] @ v[i + 1 :])
        r = math.sqrt(max(rest, 0.0) / d[i])
        for x in range(math.ceil(c - r - 1e-9), math.floor(c + r + 1e-9) + 1):
            visited += 1
            if visited > budget:
                raise BoundTooLarge(f"enumeration exceeded {budget} candidates")
            v[i] = x
            left = rest - d[i] * (x - c) ** 2
            if left < -1e-9 * (1 + bound):
                continue
            if i == 0:
                if v.any():
                    found.append(v.copy())
            else:
                recurse(i - 1, left)
        v[i] = 0

    recurse(n - 1, limit)
    return found


def length_spectrum(h, bound, max_count=10000):
    """All squared lengths v^T h v <= bound of nonzero v in Z^n, ascending.

    At most ``max_count`` values are kept (smallest first) and ``truncated``
    says whether any were dropped.  Raises BoundTooLarge when the enumeration
    would visit more than ``100 * max_count`` candidates.
    """
    is_exact = isinstance(h, MetricGram)
    hf = h.to_float() if is_exact else np.asarray(h, dtype=float)
    U = lll_reduce(hf)
    if is_exact:
        Uo = np.array(U.tolist(), dtype=object)
        G = Uo.T @ h.matrix @ Uo
        Gf = exact.to_float(G)
        exact_bound = Fraction(bound)
    else:
        Gf = U.T @ hf @ U
    vectors = _fincke_pohst(Gf, float(bound), 100 * max_count)
    if is_exact:
        vals = []
        for v in vectors:
            vo = np.array([int(x) for x in v], dtype=object)
            val = vo @ G @ vo
            if val <= exact_bound:
                vals.append(val)
    else:
        vals = [float(v @ Gf @ v) for v in vectors]
        vals = [x for x in vals if x <= bound * (1 + 1e-12)]
    vals.sort()
    truncated = len(vals) > max_count
    return LengthSpectrum(tuple(vals[:max_count]), bound, truncated)


def spectra_match(a, b, tol=1e-9):
    """Multiset equality of two length spectra (relative tol for floats)."""
    if len(a.values) != len(b.values):
        return False
    for x, y in zip(a.values, b.values):
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            if x != y:
                return False
        elif abs(float(x) - float(y)) > tol * max(1.0, abs(float(x))):
            return False
    return True
