import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest

from conftest import diag, system
from magtor import exact
from magtor.classical import sample_symplectic_integer
from magtor.core import SpectralSignature, TorusMagneticSystem, standard_form
from magtor.errors import (
    CutoffTooSmall,
    DimensionMismatch,
    InconsistentSpectrum,
    InsufficientCutoff,
    NonIntegralVolume,
)
from magtor.spectra import (
    LandauSpectrum,
    all_k_consistency,
    is_kahler,
    landau_spectrum,
    quantum_equivalent,
    reconstruct_signature,
    spectra_equal,
)

PI = math.pi


def brute_levels(d2, V, k, cutoff_over_pi, box=40):
    """Oracle: enumerate a fixed large box of index tuples.

    With integer d^2 every energy is pi/k times an integer, so levels are
    keyed exactly by that integer.
    """
    counts = Counter()
    for j in itertools.product(range(box), repeat=len(d2)):
        s = sum(d * (2 * x + 1) for d, x in zip(d2, j))
        if Fraction(s, k) <= cutoff_over_pi:
            counts[s] += k ** len(d2) * V
    return sorted(counts.items())


def sig(d2, V):
    return SpectralSignature(tuple(d2), V)


def test_m1_ladder():
    spec = landau_spectrum(sig([1], 1), 1, 10 * PI)
    assert [n for _, n in spec.levels] == [1] * 5
    np.testing.assert_allclose(spec.energies, [PI, 3 * PI, 5 * PI, 7 * PI, 9 * PI], rtol=1e-15)


def test_example_i_ground_level():
    spec = landau_spectrum(sig([1, 2], 4), 1, 10 * PI)
    assert spec.levels[0][0] == pytest.approx(3 * PI, rel=1e-15)
    assert spec.levels[0][1] == 4


def test_example_i_k2():
    spec = landau_spectrum(sig([1, 2], 4), 2, 3 * PI)
    assert spec.levels[0] == (pytest.approx(1.5 * PI, rel=1e-15), 16)


@pytest.mark.parametrize("d2,V,k", [([1, 2], 4, 1), ([1, 2], 4, 3), ([1, 1, 2], 6, 1), ([2, 3], 1, 2), ([1, 1], 2, 2)])
def test_levels_match_brute_force(d2, V, k):
    # integer d^2 produce many coincident index tuples, exercising merging
    cutoff = 25 * PI / k * 1.0001
    spec = landau_spectrum(sig(d2, V), k, cutoff)
    expected = brute_levels(d2, V, k, Fraction(25, k) * Fraction(10001, 10000))
    assert [n for _, n in spec.levels] == [n for _, n in expected]
    np.testing.assert_allclose(spec.energies, [PI * s / k for s, _ in expected], rtol=1e-13)


def test_multiplicities_are_multiples_of_unit():
    spec = landau_spectrum(sig([0.7, 1.9, 2.6], 3), 2, 40)
    unit = 2 ** 3 * 3
    assert all(n % unit == 0 for _, n in spec.levels)
    assert all(e <= 40 for e in spec.energies)
    assert all(a < b for a, b in zip(spec.energies, spec.energies[1:]))


def test_scaling_law_exact():
    s = sig([0.8, 1.3, 2.9], 5)
    for k in (2, 3, 4):
        a = landau_spectrum(s, k, 20.0)
        b = landau_spectrum(s, 1, k * 20.0)
        assert [e for e in a.energies] == [e / k for e in b.energies]
        assert a.multiplicities == [n * k ** 3 for n in b.multiplicities]


def test_errors():
    with pytest.raises(NonIntegralVolume):
        landau_spectrum(sig([1], 1.5), 1, 10)
    with pytest.raises(CutoffTooSmall):
        landau_spectrum(sig([1, 2], 4), 1, 2 * PI)


def test_spectra_equal():
    s = landau_spectrum(sig([1, 2], 4), 1, 25 * PI)
    assert spectra_equal(s, s)
    t = landau_spectrum(sig([1, 3], 4), 1, 25 * PI)
    res = spectra_equal(s, t)
    assert not res and "LevelMismatch" in res.detail
    u = landau_spectrum(sig([1, 2], 4), 1, 40 * PI)
    assert spectra_equal(s, u)
    w = landau_spectrum(sig([1, 2], 2), 1, 25 * PI)
    assert not spectra_equal(s, w)
    with pytest.raises(ValueError):
        spectra_equal(s, landau_spectrum(sig([1, 2], 4), 2, 25 * PI))


def test_spectra_equal_example_i(ex_i):
    from magtor.core import spectral_signature

    a, b = (landau_spectrum(spectral_signature(s), 1, 25 * PI) for s in ex_i)
    assert spectra_equal(a, b)


def test_quantum_equivalent_examples(ex_i, ex_ii):
    assert quantum_equivalent(*ex_i)
    assert quantum_equivalent(*ex_ii)


def test_quantum_equivalent_scaled_metric(ex_i):
    a = ex_i[0]
    h4 = (4 * a.metric.matrix).tolist()
    b = TorusMagneticSystem.from_rows(h4, a.magnetic.matrix.tolist())
    res = quantum_equivalent(a, b)
    assert not res and "d^2" in res.detail
    with pytest.raises(DimensionMismatch):
        quantum_equivalent(a, system(diag(1, 1), [1]))


def test_quantum_equivalent_volume_clause():
    a = system(diag(1, 1, 1, 1), [1, 2])
    b = system(diag(1, 1, 1, 2), [1, 2])
    c = system(diag(1, 1, 2, 2), [1, 4])
    # a and c share d^2 = {1, 2} but have volumes 2 and 4
    res = quantum_equivalent(a, c)
    assert not res and "volume" in res.detail
    assert not quantum_equivalent(a, b)


def test_kahler_examples(ex_i, ex_ii):
    assert not any(is_kahler(s) for s in ex_i)
    assert all(is_kahler(s) for s in ex_ii)
    assert is_kahler(TorusMagneticSystem.from_rows(diag(1, 1), standard_form(1).tolist()))


def test_kahler_exact_confirmation():
    # d^2 = 1 - 1e-10: inside a loose tolerance, rejected by the exact F^2 = -I check
    b = Fraction(10**10 + 1, 10**10)
    s = TorusMagneticSystem.from_rows(diag(1, b * b), [[0, 1], [-1, 0]])
    assert not is_kahler(s, tol=1e-6)
    assert not is_kahler(s)


def test_kahler_volume_class(rng):
    """Kahler structures of equal volume are quantum equivalent."""
    systems = []
    for r, base in (((2, 2), diag(1, 4, 1, 4)), ((1, 4), diag(1, 1, 4, 4))):
        from magtor.core import interleaved_form

        w = interleaved_form(r)
        for _ in range(4):
            P = _interleaved_symplectic(r, rng)
            h = P.T @ exact.as_exact(base) @ P
            systems.append(TorusMagneticSystem.from_rows(h, w.tolist()))
    assert all(is_kahler(s) for s in systems)
    for a, b in itertools.combinations(systems, 2):
        assert quantum_equivalent(a, b)


def _interleaved_symplectic(r, rng):
    """An integer symplectic matrix for the interleaved form of r."""
    m = len(r)
    perm = [2 * j for j in range(m)] + [2 * j + 1 for j in range(m)]
    P = exact.zeros(2 * m)
    for col, row in enumerate(perm):
        P[row, col] = 1
    B = sample_symplectic_integer(r, rng.randint(0, 10**6), 5)
    return P @ B @ P.T


def test_reconstruct_round_trip_examples():
    res = reconstruct_signature(landau_spectrum(sig([1, 2], 4), 1, 30 * PI))
    assert res.consistent and res.signature.sympl_volume == 4
    np.testing.assert_allclose(res.signature.d_squared, [1, 2], rtol=1e-12)
    res = reconstruct_signature(landau_spectrum(sig([1, 1, 2], 6), 1, 40 * PI))
    np.testing.assert_allclose(res.signature.d_squared, [1, 1, 2], rtol=1e-12)
    assert res.signature.sympl_volume == 6 and res.consistent


def test_reconstruct_handmade_ladder():
    spec = LandauSpectrum(1, 5 * PI, ((PI, 1), (3 * PI, 1), (5 * PI, 1)))
    res = reconstruct_signature(spec)
    assert res.signature.d_squared == pytest.approx((1.0,))
    assert res.signature.sympl_volume == 1 and res.consistent


def test_reconstruct_with_k(nprng):
    for k in (2, 3):
        s = sig([0.9, 1.7], 3)
        res = reconstruct_signature(landau_spectrum(s, k, 30.0 / k))
        np.testing.assert_allclose(res.signature.d_squared, s.d_squared, rtol=1e-9)
        assert res.signature.sympl_volume == 3


def test_reconstruct_errors():
    spec = landau_spectrum(sig([1, 5], 2), 1, 8 * PI)  # needs a level at 6 pi + 10 pi
    with pytest.raises(InsufficientCutoff):
        reconstruct_signature(spec)
    bad = LandauSpectrum(1, 10 * PI, ((PI, 2), (3 * PI, 3)))
    with pytest.raises(InconsistentSpectrum):
        reconstruct_signature(bad)


def test_all_k_consistency(ex_i, ex_ii):
    assert all_k_consistency(*ex_i, 4, 25 * PI)
    assert all_k_consistency(*ex_ii, 4, 25 * PI)
    a = ex_i[0]
    b = TorusMagneticSystem.from_rows((4 * a.metric.matrix).tolist(), a.magnetic.matrix.tolist())
    res = all_k_consistency(a, b, 4, 25 * PI)
    assert not res and res.data[0][0] == 1 and len(res.data) == 1
