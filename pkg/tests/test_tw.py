from fractions import Fraction

import pytest
import sympy as sp

from hmtriple.adelic import integration_defect
from hmtriple.local import W_EDGE
from hmtriple.polyforms import integrate_top
from hmtriple.randgen import random_element
from hmtriple.scalars import ExpansionWindow, Sector
from hmtriple.suites import dg_identity_case
from hmtriple.tw import TWElement, cohomology_ranks, integrate_to_cochain, validate

from conftest import seeds


@pytest.mark.parametrize("a,b", [(0, 0), (1, 0), (0, 2), (2, 3)])
def test_integrate_top_against_sympy(a, b):
    s, u = sp.symbols("s u")
    # s^a u^b ds ^ du over s, u >= 0, s + u <= 1; the dt1 ^ dt2 orientation flips the sign
    val = sp.integrate(sp.integrate(s**a * u**b, (u, 0, 1 - s)), (s, 0, 1))
    assert integrate_top(2, (a, b)) == -Fraction(str(val))


def test_integrate_top_edge():
    assert integrate_top(1, (3,)) == Fraction(1, 4)


def _models(ctx, G2):
    yield ctx.gD, ctx.keys(), 2
    yield ctx.gDx, ctx.keys(), 1
    yield ctx.gm, ctx.keys({Sector.MM}), 1
    yield G2.gG, G2.atom_keys(), 1
    for m in G2.big_models.values():
        yield m, G2.local.keys(), 1


def test_random_elements_validate(ctx, G2):
    for model, keys, top in _models(ctx, G2):
        for rng in seeds(50, model.name):
            assert validate(random_element(model, rng, rng.randint(0, top), keys, checked=False))[0]


def test_dg_identities_every_model(ctx, G2):
    for model, keys, top in _models(ctx, G2):
        case = dg_identity_case(model, keys, top)
        for rng in seeds(50, "dg" + model.name):
            assert case(rng) is None


def test_integration_is_cochain_map(ctx, G2):
    for model, keys, top in _models(ctx, G2):
        for rng in seeds(50, "int" + model.name):
            x = random_element(model, rng, rng.randint(0, min(top, model.complex.dim)), keys)
            assert integration_defect(x) == {}


def test_constant_integrates_to_itself(ctx):
    c = TWElement.constant(ctx.gDx, {(0, (0, 0)): 3})
    cochain = integrate_to_cochain(c)
    assert all(v == {(0, (0, 0)): 3} for v in cochain[0].values())
    assert cochain[1] == {}


def test_boundary_violation_is_reported(ctx):
    bad = TWElement.constant(ctx.gDx, {(0, (-1, 0)): 1})
    ok, diags = validate(bad, verbose=True)
    assert not ok and any("boundary" in d for d in diags)


def test_incompatible_faces_reported(ctx):
    el = TWElement(ctx.gDx, {W_EDGE: {((), (1,)): {(0, (0, 0)): 1}}})
    assert not validate(el)[0]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_cohomology_closed_form(L, m):
    from hmtriple.local import LocalTripleContext

    w = ExpansionWindow.square(m)
    c = LocalTripleContext(L, w)
    assert dict(cohomology_ranks(c.gDx.assignment, w, L)) == {0: 3 * (m + 1) ** 2, 1: 3 * m * m, 2: 0}
    assert dict(cohomology_ranks(c.gD.assignment, w, L)) == {0: 3 * (m + 1) ** 2, 1: 0, 2: 0}


def test_global_cohomology_is_degree_one(G2, L):
    ranks = dict(cohomology_ranks(G2.gG.assignment, None, L, coefficient_keys=G2.atom_monomials()))
    assert ranks[0] == 0 and ranks[2] == 0 and ranks[1] > 0


def test_pole_model_needs_keys(G2, L):
    with pytest.raises(ValueError):
        cohomology_ranks(G2.gG.assignment, None, L)
