from fractions import Fraction

import sympy as sp

from hmtriple.config import build_lie
from hmtriple.lie import CurrentElement, LieStructure, builtin_sl2, current_bracket
from hmtriple.scalars import BiLaurentPoly
from hmtriple.suites import BROKEN_SL2


def _matrix(name):
    return {
        "e": sp.Matrix([[0, 1], [0, 0]]),
        "h": sp.Matrix([[1, 0], [0, -1]]),
        "f": sp.Matrix([[0, 0], [1, 0]]),
    }[name]


def test_sl2_constants_match_matrices():
    L = builtin_sl2()
    mats = [_matrix(n) for n in L.names]
    for a in range(3):
        for b in range(3):
            comm = mats[a] * mats[b] - mats[b] * mats[a]
            expect = sum((v * mats[c] for c, v in L.bracket_basis(a, b).items()), sp.zeros(2))
            assert comm == expect
            assert L.kappa(a, b) == (mats[a] * mats[b]).trace()


def test_sl2_verifies():
    assert builtin_sl2().verify() == []


def test_broken_table_is_caught():
    problems = build_lie(BROKEN_SL2).verify()
    assert any("Jacobi" in p for p in problems)


def test_from_tables_fills_antisymmetric_partner():
    L = LieStructure.from_tables(2, {(0, 1): {1: 1}}, [[1, 0], [0, 1]])
    assert L.bracket_basis(1, 0) == {1: Fraction(-1)}


def test_current_bracket_multiplies_coefficients():
    L = builtin_sl2()
    x = CurrentElement.basis(3, 0, BiLaurentPoly.monomial(1, 0))
    y = CurrentElement.basis(3, 2, BiLaurentPoly.monomial(-1, 2))
    got = current_bracket(x, y, L)
    assert got.to_coeffs() == {(1, (0, 2)): Fraction(1)}
