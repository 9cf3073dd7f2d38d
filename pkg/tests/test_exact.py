from fractions import Fraction

import pytest
import sympy

from magtor import exact


def test_parse_rational():
    assert exact.parse_rational("3/6") == Fraction(1, 2)
    assert exact.parse_rational(-4) == -4
    assert exact.format_rational(Fraction(-6, 4)) == "-3/2"
    assert exact.format_rational(Fraction(5)) == "5"
    with pytest.raises(TypeError):
        exact.parse_rational(0.5)
    with pytest.raises(TypeError):
        exact.parse_rational(True)


def test_as_integer_rejects_fractions():
    with pytest.raises(TypeError):
        exact.as_integer([[0, Fraction(1, 2)], [0, 0]])
    assert exact.as_integer([[Fraction(2), 1]])[0, 0] == 2


def test_det_and_inverse_match_sympy(rng):
    for _ in range(40):
        n = rng.randint(1, 5)
        M = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        ref = sympy.Matrix(M)
        assert exact.det(M) == ref.det()
        if ref.det() != 0:
            inv = exact.inverse(M)
            assert exact.equal(inv, [[Fraction(int(x.p), int(x.q)) for x in row] for row in ref.inv().tolist()])


def test_inverse_singular():
    with pytest.raises(ZeroDivisionError):
        exact.inverse([[1, 2], [2, 4]])


def test_exact_sqrt():
    assert exact.exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact.exact_sqrt(2) is None
    assert exact.exact_sqrt(-1) is None


def test_sylvester():
    assert exact.leading_minors_positive([[2, 1], [1, 2]])
    assert not exact.leading_minors_positive([[1, 2], [2, 1]])
