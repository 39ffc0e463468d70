from hmtriple.deform import CollapseChain, homotopy_by_class
from hmtriple.flags import ClosedPoint, Generic, WLine, ZLine
from hmtriple.randgen import random_element
from hmtriple.tw import validate

from conftest import seeds


def test_cone_to_generic_point(ctx):
    # collapse everything to E on the closed polydisc: [d, K] = id - r^*
    cx = ctx.gD.complex
    chain = CollapseChain(cx, [{p: Generic() for p in cx.points}], "cone")
    assert chain.check() == []
    assert chain.final_points == frozenset({Generic()})
    keys = ctx.keys()
    for rng in seeds(50, "cone"):
        x = random_element(ctx.gD, rng, rng.randint(0, 2), keys)
        assert chain.homotopy(x).d() + chain.homotopy(x.d()) == x - chain.retraction(x)


def test_two_stage_chain(ctx):
    cx = ctx.gD.complex
    stages = [{ZLine(0): Generic()}, {ClosedPoint(0, 0): WLine(0)}]
    chain = CollapseChain(cx, stages, "two")
    assert chain.check() == []
    for rng in seeds(50, "two"):
        x = random_element(ctx.gD, rng, rng.randint(0, 2), ctx.keys())
        assert chain.homotopy(x).d() + chain.homotopy(x.d()) == x - chain.retraction(x)


def test_non_contiguous_stage_reported(ctx):
    cx = ctx.gD.complex
    chain = CollapseChain(cx, [{WLine(0): ZLine(0)}])
    assert any("contiguous" in p for p in chain.check())


def test_chain_preserves_forbidden_set(G2):
    for k, l in G2.pairs():
        ch = G2.diag_chain(k) if k == l else G2.offdiag_chain(k, l)
        assert ch.check([G2.gG.assignment.forbidden_points((k, l))]) == []


def test_homotopy_by_class_stays_in_model(G2):
    keys = G2.atom_keys()
    for rng in seeds(50, "bycls"):
        mu = random_element(G2.gG, rng, rng.randint(0, 2), keys)
        assert validate(G2.h_global(mu))[0]
        assert homotopy_by_class(mu, lambda cls: None).is_zero()
