import random
from fractions import Fraction
from math import comb

import pytest

from hmtriple import ExpansionWindow, LocalTripleContext
from hmtriple.envelope import (
    SymElement,
    TensorWord,
    TriangularElement,
    _bad_positions,
    _rewrite_at,
    g_perp_basis,
    gdx_letters,
    ordered_monomial_count,
    pbw_straighten,
    sl2_dual_numbers,
    sl2_graded,
    sl2_truncated_forms,
    sym_d,
    sym_homotopy,
    tensor_quotient_dim,
    triangular_homotopy,
    word_d,
)
from hmtriple.local import _edge_element, local_I, local_P

from conftest import seeds


@pytest.fixture(scope="module")
def small(L):
    return LocalTripleContext(L, ExpansionWindow.square(1))


@pytest.fixture(scope="module")
def perp(small):
    return g_perp_basis(small, 2)


@pytest.fixture(scope="module")
def letters(small):
    return gdx_letters(small, 2)


def _ip(ctx, x):
    return local_I(ctx, *local_P(ctx, x))


def test_complement_kills_constants(small):
    c = local_I(small, {(0, (1, 0)): 1}, None)
    assert (c - _ip(small, c)).is_zero()


def test_complement_fixes_mixed_sector(small):
    key = (0, (1, -1))
    el = _edge_element(small.gDx, {1: {key: 1}}, {1: {key: 1}})
    assert el - _ip(small, el) == el


def test_complement_projector_idempotent(small, letters):
    for l in letters:
        y = l.element - _ip(small, l.element)
        assert y - _ip(small, y) == y


def test_letters_split_into_three_blocks(small, letters, perp):
    blocks = {b: [l for l in letters if l.block == b] for b in "-0+"}
    assert len(blocks["0"]) == len(perp)
    assert len(blocks["+"]) == len(small.positive_keys())
    assert all(l.key[1][0] < 0 and l.key[1][1] < 0 for l in blocks["-"])


def test_koszul_signs(perp):
    degs = tuple(perp.degrees)
    odd = [k for k, d in enumerate(degs) if d % 2][:2]
    even = [k for k, d in enumerate(degs) if not d % 2][:2]
    a, b = odd
    assert SymElement.monomial(degs, [a, b]) == SymElement.monomial(degs, [b, a]).scale(-1)
    assert SymElement.monomial(degs, [a, a]).is_zero()
    c, e = even
    assert SymElement.monomial(degs, [c, e]) == SymElement.monomial(degs, [e, c])


def test_sym_degree_zero(perp):
    one = SymElement.monomial(tuple(perp.degrees), [])
    assert sym_homotopy(one, perp).is_zero()
    assert sym_d(one, perp).is_zero()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sym_homotopy_is_identity(perp, n):
    degs = tuple(perp.degrees)
    for rng in seeds(50, f"sym{n}"):
        x = SymElement.monomial(degs, [rng.randrange(len(perp)) for _ in range(n)], rng.randint(1, 9))
        assert sym_d(sym_homotopy(x, perp), perp) + sym_homotopy(sym_d(x, perp), perp) == x


def test_sym_one_is_h(perp):
    degs = tuple(perp.degrees)
    for k in range(len(perp)):
        x = SymElement.monomial(degs, [k])
        assert sym_homotopy(x, perp).terms == {(j,): v for j, v in perp.h_matrix[k].items()}


def test_sym_overflow(perp):
    x = SymElement.monomial(tuple(perp.degrees), [0, 0, 0, 0])
    with pytest.raises(OverflowError):
        sym_homotopy(x, perp, max_degree=3)


def test_bimodule_linearity(letters, perp):
    outer = [l.degree for l in letters]
    minus = [k for k, l in enumerate(letters) if l.block == "-"]
    plus = [k for k, l in enumerate(letters) if l.block == "+"]
    for rng in seeds(50, "bimod"):
        t = TriangularElement()
        t.add((rng.choice(minus),), (rng.randrange(len(perp)),), (rng.choice(plus),), Fraction(rng.randint(1, 9)))
        a, b = rng.choice(minus), rng.choice(plus)
        base = triangular_homotopy(t, perp, outer)
        assert triangular_homotopy(t.left_mul(a), perp, outer).terms == base.left_mul(a).scale((-1) ** outer[a]).terms
        assert triangular_homotopy(t.right_mul(b), perp, outer).terms == base.right_mul(b).terms


ALGEBRAS = [sl2_graded(), sl2_dual_numbers(), sl2_truncated_forms()]


@pytest.mark.parametrize("g", ALGEBRAS, ids=["sl2", "sl2_eps", "sl2_forms"])
def test_graded_lie_axioms(g):
    assert g.verify() == []


def test_ordered_word_is_fixed():
    g = sl2_graded()
    f, h, e = 2, 1, 0
    w = TensorWord.word([f, h, e])
    assert pbw_straighten(w, g) == w


def test_single_rewrite():
    g = sl2_graded()
    e, h, f = 0, 1, 2
    got = pbw_straighten(TensorWord.word([e, f]), g)
    assert got.terms == {(f, e): 1, (h,): 1}


def test_odd_square_is_half_bracket():
    g = sl2_dual_numbers()
    x = g.names.index("eeps")
    got = pbw_straighten(TensorWord.word([x, x]), g)
    assert got.terms == {}


def _all_outcomes(word: tuple, g):
    """Normal form reached by every rewrite sequence; fails if two sequences disagree."""
    bad = _bad_positions(word, g)
    if not bad:
        return {word: Fraction(1)}
    results = []
    for p in bad:
        acc: dict = {}
        for w2, c in _rewrite_at(word, p, g):
            for w3, v in _all_outcomes(w2, g).items():
                acc[w3] = acc.get(w3, 0) + c * v
        results.append({k: v for k, v in acc.items() if v})
    assert all(r == results[0] for r in results), word
    return results[0]


@pytest.mark.parametrize("g", ALGEBRAS, ids=["sl2", "sl2_eps", "sl2_forms"])
def test_confluence_exhaustive(g):
    rng = random.Random(f"conf{g.dim}")
    for _ in range(100):
        w = tuple(rng.randrange(g.dim) for _ in range(rng.randint(1, 3)))
        assert pbw_straighten(TensorWord.word(w), g).terms == _all_outcomes(w, g)
        assert pbw_straighten(TensorWord.word(w), g, rng=rng).terms == _all_outcomes(w, g)


def test_straightening_commutes_with_d():
    g = sl2_truncated_forms()
    for rng in seeds(100, "dstr"):
        w = TensorWord.word([rng.randrange(g.dim) for _ in range(rng.randint(1, 3))])
        nf = pbw_straighten(w, g)
        assert pbw_straighten(word_d(w, g), g) == pbw_straighten(word_d(nf, g), g)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_ordered_counts_closed_form(k):
    assert ordered_monomial_count(sl2_graded(), k) == comb(k + 2, 2)
    assert ordered_monomial_count(sl2_dual_numbers(), k) == sum(comb(3, j) * comb(k - j + 2, 2) for j in range(min(3, k) + 1))


@pytest.mark.parametrize("g", ALGEBRAS, ids=["sl2", "sl2_eps", "sl2_forms"])
def test_pbw_counts_match_quotient(g):
    for d in (1, 2, 3):
        assert tensor_quotient_dim(g, d) == sum(ordered_monomial_count(g, k) for k in range(d + 1))


def test_word_overflow():
    with pytest.raises(OverflowError):
        pbw_straighten(TensorWord.word([0, 0, 0, 0]), sl2_graded())
