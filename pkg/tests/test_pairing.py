import random

from hmtriple.local import W_EDGE, Z_EDGE, constant_element, h1_retract
from hmtriple.pairing import (
    global_pairing,
    gram_cohomology,
    integrate_over_sigma,
    invariance_check,
    local_pairing,
    manin_triple_report,
)
from hmtriple.randgen import random_element
from hmtriple.tw import TWElement

from conftest import seeds


def _h1(ctx, key, c=1):
    return TWElement(ctx.gDx, h1_retract(ctx, "i", {key: c}).forms)


def test_sigma_normalization(ctx):
    key = (0, (0, 0))
    el = TWElement.from_top(ctx.gDx, {W_EDGE: {((0,), (0,)): {key: 1}}, Z_EDGE: {((0,), (0,)): {key: -1}}})
    assert integrate_over_sigma(el) == {key: 2}


def test_pairing_constant_with_representative(ctx, L):
    # <a (x) 1, b (x) w^-1 z^-1 (ds, -ds)> = kappa(a, b); the H^1 map carries a factor 1/2
    for a in range(3):
        for b in range(3):
            x = constant_element(ctx.gDx, {(a, (0, 0)): 1})
            y = _h1(ctx, (b, (-1, -1)), 2)
            assert local_pairing(x, y).value == L.kappa(a, b)


def test_degree_mismatch_is_zero(ctx):
    x = constant_element(ctx.gDx, {(0, (0, 0)): 1})
    y = constant_element(ctx.gDx, {(2, (-1, -1)): 1})
    assert local_pairing(x, y).value == 0


def test_graded_symmetry_and_invariance(ctx):
    keys = ctx.keys()
    for rng in seeds(50, "inv"):
        dx, dy = rng.choice(((0, 0), (0, 1), (1, 0)))
        x = random_element(ctx.gDx, rng, dx, keys)
        y = random_element(ctx.gDx, rng, dy, keys)
        z = random_element(ctx.gDx, rng, 1 - dx - dy, keys)
        ok, res = invariance_check(x, y, z)
        assert ok, res
        a = random_element(ctx.gDx, rng, 0, keys)
        b = random_element(ctx.gDx, rng, 1, keys)
        assert local_pairing(a, b) == local_pairing(b, a)


def test_gram_entries_and_rank(ctx, L):
    g = gram_cohomology(ctx)
    assert g.square and g.invertible and g.h0_block_zero and g.h1_block_zero
    for r, (a, m) in enumerate(g.h0_basis):
        for c, (b, n) in enumerate(g.h1_basis):
            want = L.kappa(a, b) / 2 if (m[0] + n[0], m[1] + n[1]) == (-1, -1) else 0
            assert g.matrix[r][c] == want


def test_wrong_orientation_degenerates(ctx):
    bad = ((W_EDGE, 1), (Z_EDGE, 1))
    assert gram_cohomology(ctx, bad).rank == 0


def test_global_pairing_is_diagonal_sum(ctx):
    zero = TWElement.zero(ctx.gDx)
    x = constant_element(ctx.gDx, {(0, (0, 0)): 1})
    y = _h1(ctx, (2, (-1, -1)))
    assert global_pairing([x, zero], [zero, y]).value == 0
    assert global_pairing([x], [y]) == local_pairing(x, y)
    assert global_pairing([x, x], [y, y]).value == 2 * local_pairing(x, y).value


def test_local_manin_report(ctx):
    rep = manin_triple_report("local", ctx, random.Random(1), 50)
    assert rep.passed, rep.as_dict()
    assert [c.name for c in rep.conditions] == [
        "i_cohomology_isomorphism", "ii_invariant_symmetric", "iii_nondegenerate", "iv_isotropic",
    ]


def test_global_manin_report(G2):
    rep = manin_triple_report("global", G2, random.Random(1), 50)
    assert rep.passed, rep.as_dict()


def test_sabotaged_orientation_fails_report(ctx):
    rep = manin_triple_report("local", ctx, random.Random(1), 10, ((W_EDGE, 1), (Z_EDGE, 1)))
    bad = [c for c in rep.conditions if not c.passed]
    assert bad and all(c.counterexample for c in bad)
