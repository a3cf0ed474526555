"""Exact polynomials in the mutant shares.

Fitness differences and equilibrium slacks of a post-entry configuration are
polynomials in the shares eps_j of the entering mutants, multilinear in each
eps_j. They are held as sympy ``Poly`` objects over QQ; sign questions near
zero are answered along the diagonal eps_j = t.
"""

import itertools
import logging
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy

logger = logging.getLogger(__name__)

T = sympy.Symbol("t", positive=True)

# Bisection steps when the smallest positive root is irrational
ROOT_REFINEMENT_STEPS = 40

# Halvings of the box side before giving up on a box
BOX_HALVINGS = 20


class PolynomialError(Exception):
    """Exception raised for malformed share polynomials."""
    pass


def eps_symbol(population: int) -> sympy.Symbol:
    return sympy.Symbol(f"eps{population + 1}", positive=True)


def eps_symbols(coalition: Sequence[int]) -> Tuple[sympy.Symbol, ...]:
    return tuple(eps_symbol(j) for j in coalition)


def to_sympy(value: Any) -> sympy.Expr:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    return sympy.sympify(value)


def to_fraction(value: Any) -> Fraction:
    value = sympy.nsimplify(to_sympy(value))
    if not value.is_Rational:
        raise PolynomialError(f"{value} is not rational")
    return Fraction(int(value.p), int(value.q))


class EpsPolynomial:
    """A polynomial with rational coefficients in the shares of a coalition."""

    def __init__(self, expr: Any, coalition: Sequence[int]):
        self.coalition = tuple(coalition)
        self.symbols = eps_symbols(self.coalition)
        expr = sympy.expand(to_sympy(expr))
        stray = expr.free_symbols - set(self.symbols)
        if stray:
            raise PolynomialError(f"Unexpected symbols {sorted(map(str, stray))} in share polynomial")
        self.poly = sympy.Poly(expr, *self.symbols, domain="QQ")

    def __repr__(self) -> str:
        return f"EpsPolynomial({self.expr})"

    def __str__(self) -> str:
        return str(self.expr)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, EpsPolynomial):
            return self.coalition == other.coalition and sympy.expand(self.expr - other.expr) == 0
        return sympy.expand(self.expr - to_sympy(other)) == 0

    def __hash__(self) -> int:
        return hash((self.coalition, self.expr))

    @property
    def expr(self) -> sympy.Expr:
        return self.poly.as_expr()

    def is_zero(self) -> bool:
        return self.poly.is_zero

    def degree(self) -> int:
        return self.poly.total_degree()

    def is_multilinear(self) -> bool:
        return all(max(e) <= 1 for e in self.poly.monoms()) if not self.is_zero() else True

    def evaluate(self, shares: Mapping[int, Any]) -> Fraction:
        """Exact value at ``shares`` (population -> eps)."""
        values = {s: to_sympy(shares[j]) for j, s in zip(self.coalition, self.symbols)}
        return to_fraction(self.poly.as_expr().subs(values))

    def diagonal(self) -> sympy.Poly:
        """Restriction to eps_j = t for every j in the coalition."""
        return sympy.Poly(self.expr.subs({s: T for s in self.symbols}), T, domain="QQ")

    def coefficient_map(self) -> Dict[str, str]:
        """Coefficients keyed by exponent tuples, lexicographically ordered."""
        terms = sorted(zip(self.poly.monoms(), self.poly.coeffs()))
        return {str(tuple(m)): str(c) for m, c in terms}


def lowest_coefficient(poly: sympy.Poly) -> Optional[Fraction]:
    """Lowest-order nonzero coefficient of a univariate polynomial, None for zero."""
    if poly.is_zero:
        return None
    for (exponent,), coefficient in sorted(zip(poly.monoms(), poly.coeffs())):
        if coefficient != 0:
            return to_fraction(coefficient)
    return None


def eventually_nonnegative(poly: sympy.Poly) -> bool:
    """True iff the polynomial is >= 0 on some interval (0, c)."""
    lowest = lowest_coefficient(poly)
    return lowest is None or lowest > 0


def smallest_positive_root(poly: sympy.Poly) -> Tuple[Optional[Fraction], bool]:
    """A lower bound on the smallest positive root, and whether it is the exact root.

    Returns (None, True) when there is no positive root.
    """
    if poly.is_zero or poly.degree() <= 0:
        return None, True
    positives = [r for r in sympy.real_roots(poly) if r > 0]
    if not positives:
        return None, True
    root = min(positives)
    if root.is_Rational:
        return Fraction(int(root.p), int(root.q)), True
    lowest = min(e for (e,), c in zip(poly.monoms(), poly.coeffs()) if c != 0)
    if lowest:
        poly = sympy.Poly(sympy.expand(poly.as_expr() / poly.gen ** lowest), poly.gen, domain="QQ")
    low, high = sympy.Integer(0), sympy.Integer(1)
    while poly.count_roots(0, high) == 0:
        high *= 2
    for _ in range(ROOT_REFINEMENT_STEPS):
        middle = (low + high) / 2
        if poly.count_roots(0, middle) > 0:
            high = middle
        else:
            low = middle
    return Fraction(int(low.p), int(low.q)), False


def diagonal_validity(polys: Sequence[EpsPolynomial], cap: Fraction = Fraction(1)) -> Tuple[Optional[Fraction], bool]:
    """Largest c <= cap such that every polynomial stays >= 0 for eps_j = t in (0, c).

    Returns (None, True) when some polynomial is eventually negative.
    """
    bound, exact = cap, True
    for polynomial in polys:
        diagonal = polynomial.diagonal()
        if not eventually_nonnegative(diagonal):
            return None, True
        if diagonal.is_zero:
            continue
        root, root_exact = smallest_positive_root(diagonal)
        if root is not None and root < bound:
            bound, exact = root, root_exact
    return bound, exact


def holds_on_box(polynomial: EpsPolynomial, upper: Any = 1) -> bool:
    """True iff a multilinear polynomial is >= 0 on the closed box [0, upper]^J."""
    if not polynomial.is_multilinear():
        raise PolynomialError(f"{polynomial} is not multilinear in the shares")
    upper = to_sympy(upper)
    for corner in itertools.product((0, upper), repeat=len(polynomial.coalition)):
        if polynomial.evaluate(dict(zip(polynomial.coalition, corner))) < 0:
            return False
    return True


def box_validity(polys: Sequence[EpsPolynomial], cap: Fraction = Fraction(1)) -> Optional[Fraction]:
    """Side b of a box [0, b]^J on which every polynomial is >= 0, or None.

    Starts from ``cap`` and halves b until every corner check passes. A
    nonzero multilinear polynomial that is >= 0 on the box is > 0 in its
    interior.
    """
    side = cap
    for _ in range(BOX_HALVINGS + 1):
        try:
            if all(holds_on_box(p, side) for p in polys):
                return side
        except PolynomialError as e:
            logger.debug(f"No box validity: {str(e)}")
            return None
        side /= 2
    return None


def box_samples(coalition: Sequence[int], side: Fraction, count: int = 3) -> List[Dict[int, Fraction]]:
    """``count`` interior points of (0, side]^J whose coordinates differ when |J| > 1."""
    points = []
    for m in range(count):
        points.append({j: side * Fraction((m + position) % count + 1, count + 1)
                       for position, j in enumerate(coalition)})
    return points


def diagonal_samples(bound: Fraction, count: int = 3) -> List[Fraction]:
    """``count`` rational points strictly inside (0, bound)."""
    return [bound * Fraction(k, count + 1) for k in range(1, count + 1)]
