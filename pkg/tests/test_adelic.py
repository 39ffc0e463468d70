import pytest

from hmtriple.adelic import adelic_cohomology, build_adelic, integration_defect, relative_cochain_ranks
from hmtriple.randgen import random_element
from hmtriple.scalars import ExpansionWindow, Sector
from hmtriple.tw import cohomology_ranks

from conftest import seeds


def test_levels(ctx):
    w = ExpansionWindow.square(2)
    A = build_adelic(ctx.gD.assignment, w)
    assert [len(A.product.level(n)) for n in range(3)] == [4, 5, 2]
    Ax = build_adelic(ctx.gDx.assignment, w)
    assert [len(Ax.product.level(n)) for n in range(3)] == [3, 2, 0]


def test_examples(ctx, L):
    w = ExpansionWindow.square(2)
    assert adelic_cohomology(build_adelic(ctx.gDx.assignment, w), L) == [(0, 27), (1, 12), (2, 0)]
    assert adelic_cohomology(build_adelic(ctx.gD.assignment, w), L) == [(0, 27), (1, 0), (2, 0)]


def test_relative_ranks_of_empty_forbidden_set(ctx):
    # the full closed polydisc is contractible
    assert relative_cochain_ranks(ctx.gD.assignment, frozenset()) == [1, 0, 0]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_agreement_with_thom_whitney(L, m):
    from hmtriple import LocalTripleContext

    w = ExpansionWindow.square(m)
    c = LocalTripleContext(L, w)
    for model in (c.gD, c.gDx, c.gm):
        assert adelic_cohomology(build_adelic(model.assignment, w), L) == cohomology_ranks(model.assignment, w, L)


def test_global_agreement(G2, L):
    keys = G2.atom_monomials()
    A = build_adelic(G2.gG.assignment, keys=keys)
    assert adelic_cohomology(A, L) == cohomology_ranks(G2.gG.assignment, None, L, coefficient_keys=keys)


def test_d_squared_random(ctx):
    A = build_adelic(ctx.gD.assignment, ExpansionWindow.square(2))
    opts = A.level_keys(0)
    for rng in seeds(50, "ad2"):
        c: dict = {}
        for _ in range(4):
            f, m = rng.choice(opts)
            c.setdefault(f, {})[(rng.randrange(3), m)] = rng.randint(1, 9)
        assert A.d(1, A.d(0, c)) == {}


def test_integration_intertwines(ctx):
    for model, keys in ((ctx.gD, ctx.keys()), (ctx.gDx, ctx.keys()), (ctx.gm, ctx.keys({Sector.MM}))):
        for rng in seeds(50, "adint" + model.name):
            x = random_element(model, rng, rng.randint(0, model.complex.dim), keys)
            assert integration_defect(x) == {}


def test_window_or_keys_required(ctx):
    with pytest.raises(ValueError):
        build_adelic(ctx.gD.assignment)
