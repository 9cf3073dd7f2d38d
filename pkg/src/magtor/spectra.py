"""Landau levels, quantum equivalence and the inverse spectral reconstruction.

For the k-th power of the line bundle the spectrum consists of the values
(1/k) nu(j), nu(j) = pi * sum_i d_i^2 (2 j_i + 1) over nonnegative integer
tuples j, each with multiplicity k^m V.  Levels that coincide numerically are
merged and their multiplicities summed.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from magtor import exact
from magtor.core import (
    DEFAULT_TOL,
    SpectralSignature,
    check_system,
    f_matrix,
    spectral_signature,
)
from magtor.errors import (
    CutoffTooSmall,
    DimensionMismatch,
    InconsistentSpectrum,
    InsufficientCutoff,
    NonIntegralVolume,
)

MERGE_TOL = 1e-9


def _same_level(a, b, tol=MERGE_TOL):
    return abs(a - b) <= tol * (1.0 + max(abs(a), abs(b)))


@dataclass(frozen=True)
class LandauSpectrum:
    k: int
    cutoff: float
    levels: tuple  # ((energy, multiplicity), ...) strictly increasing energies

    @property
    def energies(self):
        return [e for e, _ in self.levels]

    @property
    def multiplicities(self):
        return [n for _, n in self.levels]

    def truncate(self, cutoff):
        keep = tuple((e, n) for e, n in self.levels if e <= cutoff or _same_level(e, cutoff))
        return LandauSpectrum(self.k, min(cutoff, self.cutoff), keep)

    def as_dict(self):
        return {
            "k": self.k,
            "cutoff": self.cutoff,
            "levels": [[e, str(n)] for e, n in self.levels],
        }

    @classmethod
    def from_dict(cls, data):
        levels = tuple((float(e), int(n)) for e, n in data["levels"])
        return cls(int(data["k"]), float(data["cutoff"]), levels)


def _merge(values):
    """Cluster sorted (nu, count) values into levels."""
    out = []
    for nu, count in values:
        if out and _same_level(out[-1][0], nu):
            out[-1][1] += count
        else:
            out.append([nu, count])
    return out


def _enumerate_nu(d_squared, nu_max):
    """All nu(j) <= nu_max with j >= 0, as a sorted list (with repeats).

    nu is monotone in each j_i, so j_i <= (nu_max/pi - sum d^2) / (2 d_i^2).
    """
    base = sum(d_squared)
    slack = nu_max / math.pi - base
    if slack < 0 and not _same_level(nu_max, math.pi * base):
        return []
    slack = max(slack, 0.0)
    bounds = [int(math.floor(slack / (2 * d) * (1 + 1e-12) + 1e-12)) for d in d_squared]
    d = np.asarray(d_squared, dtype=float)
    out = []
    for j in itertools.product(*(range(b + 1) for b in bounds)):
        nu = math.pi * float(np.dot(d, 2 * np.asarray(j) + 1))
        if nu <= nu_max or _same_level(nu, nu_max):
            out.append(nu)
    out.sort()
    return out


def _level_unit(sig, k):
    v = sig.sympl_volume
    rv = round(v)
    if rv < 1 or abs(v - rv) > 1e-9 * max(1.0, v):
        raise NonIntegralVolume(f"symplectic volume {v!r} is not an integer")
    return k ** sig.m * rv


def landau_spectrum(sig, k, cutoff):
    """Spectrum of the k-th quantization up to ``cutoff``.

    Energies are nu / k with nu computed independently of k, so scaling the
    level by k is exact in floating point.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    unit = _level_unit(sig, k)
    nus = _enumerate_nu(sig.d_squared, k * cutoff)
    if not nus:
        raise CutoffTooSmall(
            f"lowest level {math.pi * sum(sig.d_squared) / k!r} exceeds cutoff {cutoff!r}"
        )
    levels = _merge((nu, unit) for nu in nus)
    return LandauSpectrum(int(k), float(cutoff), tuple((nu / k, n) for nu, n in levels))


@dataclass(frozen=True)
class Comparison:
    """Boolean verdict with an explanation; truthy iff ``equal``."""

    equal: bool
    detail: str = ""
    data: tuple = ()

    def __bool__(self):
        return self.equal


def spectra_equal(s1, s2, tol=DEFAULT_TOL):
    """Compare two spectra below the smaller cutoff."""
    if s1.k != s2.k:
        raise ValueError(f"spectra at different levels k={s1.k} and k={s2.k}")
    c = min(s1.cutoff, s2.cutoff)
    a, b = s1.truncate(c).levels, s2.truncate(c).levels
    # a level sitting on the cutoff may survive truncation on one side only
    for i, ((e1, n1), (e2, n2)) in enumerate(zip(a, b)):
        if abs(e1 - e2) > tol * (1.0 + max(abs(e1), abs(e2))):
            return Comparison(False, f"LevelMismatch at level {i}: energy {e1!r} vs {e2!r}")
        if n1 != n2:
            return Comparison(False, f"LevelMismatch at level {i}: multiplicity {n1} vs {n2}")
    if len(a) != len(b):
        longer = a if len(a) > len(b) else b
        extra = longer[min(len(a), len(b))]
        if not _same_level(extra[0], c):
            return Comparison(False, f"LevelMismatch: level count {len(a)} vs {len(b)}")
    return Comparison(True, f"{min(len(a), len(b))} levels agree below {c!r}")


def quantum_equivalent(sys1, sys2, tol=DEFAULT_TOL):
    """Equal d^2 multisets and equal symplectic volumes.

    A true verdict means the spectra agree at every quantization level k.
    """
    if sys1.m != sys2.m:
        raise DimensionMismatch(f"dimensions {2 * sys1.m} and {2 * sys2.m} differ")
    check_system(sys1)
    check_system(sys2)
    g1, g2 = spectral_signature(sys1, tol), spectral_signature(sys2, tol)
    data = (("signature1", g1), ("signature2", g2))
    if round(g1.sympl_volume) != round(g2.sympl_volume):
        return Comparison(
            False, f"volumes differ: {g1.sympl_volume:g} vs {g2.sympl_volume:g}", data
        )
    for a, b in zip(g1.d_squared, g2.d_squared):
        if abs(a - b) > tol * max(1.0, a, b):
            return Comparison(False, f"d^2 multisets differ: {a!r} vs {b!r}", data)
    return Comparison(True, "same d^2 multiset and symplectic volume", data)


def is_kahler(sys, tol=DEFAULT_TOL):
    """Whether all eigenvalues of F = h^{-1} omega are +-i.

    The binary64 test decides negatives; a pass that is not at round-off level
    is confirmed by checking F^2 = -I exactly.
    """
    check_system(sys)
    dev = max(abs(x - 1.0) for x in spectral_signature(sys, tol).d_squared)
    if dev > tol:
        return False
    if dev <= 1e-12:
        return True
    F = f_matrix(sys)
    return exact.equal(F @ F, -exact.identity(2 * sys.m))


@dataclass(frozen=True)
class ReconstructionResult:
    signature: SpectralSignature
    levels_consumed: int
    consistent: bool


def reconstruct_signature(spec):
    """Recover {d_j^2} and V from a truncated spectrum.

    Works on nu = k E.  The ground level gives sum d^2 and the unit
    multiplicity k^m V.  Repeatedly: remove everything explained by the d^2
    found so far; the lowest unexplained level nu* gives a new value
    (nu* - nu_0) / (2 pi) with count mult(nu*) / unit.  Stops once the found
    values add up to nu_0 / pi, which also fixes m.
    """
    if not spec.levels:
        raise InsufficientCutoff("empty spectrum")
    k = spec.k
    nu_cut = k * spec.cutoff
    levels = [(k * e, n) for e, n in spec.levels]
    nu0, unit = levels[0]
    total = nu0 / math.pi
    found = []
    consumed = 1

    while not (found and _same_level(sum(found), total)):
        if sum(found) > total * (1 + MERGE_TOL):
            raise InconsistentSpectrum("recovered d^2 values exceed the ground-level sum")
        remaining = _subtract(levels, _explained(found, total, nu_cut, unit))
        if not remaining:
            raise InsufficientCutoff(
                f"need a level beyond the cutoff {spec.cutoff!r} to continue"
            )
        nu_star, mult = remaining[0]
        if mult % unit:
            raise InconsistentSpectrum(
                f"multiplicity {mult} is not a multiple of the ground multiplicity {unit}"
            )
        found.extend([(nu_star - nu0) / (2 * math.pi)] * (mult // unit))
        consumed = 1 + sum(1 for nu, _ in levels if nu <= nu_star * (1 + MERGE_TOL))

    m = len(found)
    if unit % k ** m:
        raise InconsistentSpectrum(f"ground multiplicity {unit} is not divisible by k^m = {k ** m}")
    sig = SpectralSignature(tuple(found), unit // k ** m, m)
    try:
        regenerated = landau_spectrum(sig, k, spec.cutoff)
        consistent = bool(spectra_equal(regenerated, spec))
    except CutoffTooSmall:
        consistent = False
    return ReconstructionResult(sig, consumed, consistent)


def _explained(found, total, nu_cut, unit):
    """Levels produced by the d^2 found so far, other coordinates at j = 0."""
    if not found:
        return [[math.pi * total, unit]]
    shift = math.pi * (total - sum(found))
    return [[nu + shift, unit] for nu in _enumerate_nu(found, nu_cut - shift)]


def _subtract(levels, explained):
    """Multiset difference of merged levels, as a sorted list of (nu, mult)."""
    remaining = [[nu, n] for nu, n in levels]
    i = 0
    for nu, n in sorted(explained):
        while i < len(remaining) and remaining[i][0] < nu and not _same_level(remaining[i][0], nu):
            i += 1
        if i == len(remaining) or not _same_level(remaining[i][0], nu):
            raise InconsistentSpectrum(f"expected a level at {nu!r} that is missing")
        remaining[i][1] -= n
        if remaining[i][1] < 0:
            raise InconsistentSpectrum(f"level at {nu!r} has too small a multiplicity")
    return [(nu, n) for nu, n in remaining if n > 0]


def all_k_consistency(sys1, sys2, k_max, cutoff, tol=DEFAULT_TOL):
    """Check that spectra_equal at k = 1..k_max agrees with quantum_equivalent.

    Returns the conjunction of the k-wise comparisons together with the
    per-k details; the verdict is True iff every level matched.
    """
    g1, g2 = spectral_signature(sys1, tol), spectral_signature(sys2, tol)
    details = []
    verdict = True
    for k in range(1, k_max + 1):
        c = spectra_equal(landau_spectrum(g1, k, cutoff), landau_spectrum(g2, k, cutoff), tol)
        details.append((k, c.equal, c.detail))
        if not c:
            verdict = False
            break
    return Comparison(verdict, "; ".join(f"k={k}: {d}" for k, _, d in details), tuple(details))
