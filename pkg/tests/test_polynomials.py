from fractions import Fraction

import pytest
import sympy

from prefstab.analysis.polynomials import (
    EpsPolynomial,
    PolynomialError,
    T,
    box_samples,
    box_validity,
    diagonal_samples,
    diagonal_validity,
    eps_symbol,
    eventually_nonnegative,
    holds_on_box,
    lowest_coefficient,
    smallest_positive_root,
)

E1, E2 = eps_symbol(0), eps_symbol(1)


def test_diagonal_and_multilinearity():
    polynomial = EpsPolynomial(E1 * E2 + E1, (0, 1))
    assert polynomial.is_multilinear()
    assert polynomial.degree() == 2
    assert polynomial.diagonal() == sympy.Poly(T + T ** 2, T, domain="QQ")
    assert not EpsPolynomial(E1 ** 2, (0,)).is_multilinear()


def test_evaluate_is_exact():
    polynomial = EpsPolynomial(sympy.Rational(1, 3) * E1 - E2, (0, 1))
    assert polynomial.evaluate({0: Fraction(3, 4), 1: Fraction(1, 8)}) == Fraction(1, 8)


def test_stray_symbols_are_rejected():
    with pytest.raises(PolynomialError):
        EpsPolynomial(E1 + sympy.Symbol("p"), (0,))


def test_coefficient_map_is_ordered():
    polynomial = EpsPolynomial(3 * E1 * E2 - E2 + 2, (0, 1))
    assert list(polynomial.coefficient_map().items()) == [("(0, 0)", "2"), ("(0, 1)", "-1"), ("(1, 1)", "3")]


def test_equality_against_expressions():
    assert EpsPolynomial(E1 * (1 + E2), (0, 1)) == E1 + E1 * E2
    assert EpsPolynomial(0, (0,)).is_zero()


def test_lowest_coefficient_decides_sign_near_zero():
    assert lowest_coefficient(sympy.Poly(7 * T ** 2 - T ** 3, T)) == 7
    assert eventually_nonnegative(sympy.Poly(T + 6 * T ** 2, T))
    assert not eventually_nonnegative(sympy.Poly(-T + 100 * T ** 2, T))
    assert eventually_nonnegative(sympy.Poly(0, T))


def test_smallest_positive_root():
    assert smallest_positive_root(sympy.Poly(T - 2 * T ** 2, T)) == (Fraction(1, 2), True)
    assert smallest_positive_root(sympy.Poly(T + 1, T)) == (None, True)
    bound, exact = smallest_positive_root(sympy.Poly(2 * T - T ** 3, T))
    assert not exact
    assert 1 < bound <= Fraction(14143, 10000)


def test_diagonal_validity():
    first = EpsPolynomial(E1 - 2 * E1 * E2, (0, 1))
    second = EpsPolynomial(E2 - 3 * E2 ** 2, (0, 1))
    assert diagonal_validity([first, second]) == (Fraction(1, 3), True)
    assert diagonal_validity([EpsPolynomial(-E1, (0,))]) == (None, True)
    assert diagonal_validity([EpsPolynomial(E1, (0,))], Fraction(1, 5)) == (Fraction(1, 5), True)


def test_holds_on_box():
    polynomial = EpsPolynomial(1 - E1 - E2, (0, 1))
    assert not holds_on_box(polynomial)
    assert holds_on_box(polynomial, Fraction(1, 2))
    with pytest.raises(PolynomialError):
        holds_on_box(EpsPolynomial(E1 ** 2, (0,)))


def test_diagonal_samples_are_interior():
    samples = diagonal_samples(Fraction(1, 2))
    assert samples == [Fraction(1, 8), Fraction(1, 4), Fraction(3, 8)]


def test_box_validity_halves_until_corners_hold():
    assert box_validity([EpsPolynomial(1 - 3 * E1, (0,))]) == Fraction(1, 4)
    assert box_validity([EpsPolynomial(1 - E1 - E2, (0, 1)), EpsPolynomial(E1 * E2, (0, 1))]) == Fraction(1, 2)
    assert box_validity([EpsPolynomial(E1, (0,))], Fraction(1, 3)) == Fraction(1, 3)


def test_diagonal_advantage_without_a_box():
    # positive along eps1 = eps2 but negative whenever eps1 = 0 < eps2
    polynomial = EpsPolynomial(E1 - E2 + E1 * E2, (0, 1))
    bound, _ = diagonal_validity([polynomial])
    assert bound == 1
    assert box_validity([polynomial]) is None
    assert box_validity([EpsPolynomial(E1 ** 2, (0,))]) is None


def test_box_samples_have_unequal_shares():
    points = box_samples((0, 1), Fraction(1, 2))
    assert len(points) == 3
    assert all(0 < v < Fraction(1, 2) for point in points for v in point.values())
    assert all(point[0] != point[1] for point in points)
