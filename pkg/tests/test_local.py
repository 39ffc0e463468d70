from fractions import Fraction

import pytest

from hmtriple.local import (
    W_EDGE,
    Z_EDGE,
    _edge_element,
    constant_element,
    disc_retract,
    h1_retract,
    local_I,
    local_P,
    local_h,
)
from hmtriple.randgen import random_element, random_vector
from hmtriple.scalars import Sector
from hmtriple.tw import TWElement, validate

from conftest import seeds

E_, H_, F_ = 0, 1, 2


def _ip(ctx, x):
    p, q = local_P(ctx, x)
    return local_I(ctx, p, q)


def test_I_of_constant(ctx):
    el = local_I(ctx, {(E_, (0, 0)): 1}, None)
    assert el == constant_element(ctx.gDx, {(E_, (0, 0)): 1})
    for edge in (W_EDGE, Z_EDGE):
        assert el.form(edge) == {((), (0,)): {(E_, (0, 0)): 1}}


def test_I_embeds_negative_part(ctx):
    x = h1_retract(ctx, "i", {(H_, (-1, -1)): 2})
    assert local_I(ctx, None, x).forms == x.forms


def test_P_of_negative_representative(ctx):
    x = TWElement(ctx.gDx, h1_retract(ctx, "i", {(H_, (-1, -1)): 2}).forms)
    p, q = local_P(ctx, x)
    assert p == {} and q.forms == x.forms


def test_P_kills_mixed_sector(ctx):
    key = (E_, (1, -1))
    el = _edge_element(ctx.gDx, {1: {key: 1}}, {1: {key: 1}})
    p, q = local_P(ctx, el)
    assert p == {} and q.is_zero()


def test_h_on_mixed_sector_example(ctx):
    # omega = a w^-1 (ds, 0)  gives  h = a w^-1 (s, 1)
    key = (E_, (-1, 0))
    om = _edge_element(ctx.gDx, {}, {}, {0: {key: 1}}, {})
    want = _edge_element(ctx.gDx, {1: {key: 1}}, {0: {key: 1}})
    h = local_h(ctx, om)
    assert h == want
    assert h.d() + local_h(ctx, om.d()) == om


def test_h_vanishes_on_constants_and_negative_part(ctx):
    assert local_h(ctx, constant_element(ctx.gDx, {(H_, (1, 2)): 5})).is_zero()
    x = TWElement(ctx.gDx, h1_retract(ctx, "i", {(F_, (-2, -1)): 1}).forms)
    assert local_h(ctx, x).is_zero()


def test_local_retract_identities(ctx):
    keys, mm, pp = ctx.keys(), ctx.keys({Sector.MM}), ctx.positive_keys()
    for rng in seeds(50, "prop62"):
        xp = random_vector(rng, pp)
        xm = random_element(ctx.gm, rng, rng.randint(0, 1), mm)
        assert local_P(ctx, local_I(ctx, xp, xm)) == (xp, xm)
        x = random_element(ctx.gDx, rng, rng.randint(0, 1), keys)
        h = local_h(ctx, x)
        assert validate(h)[0]
        assert h.d() + local_h(ctx, x.d()) == x - _ip(ctx, x)
        assert local_h(ctx, h).is_zero()
        assert local_h(ctx, _ip(ctx, x)).is_zero()
        p, q = local_P(ctx, h)
        assert p == {} and q.is_zero()


def test_h1_examples(ctx):
    v = {(E_, (-1, -1)): 1}
    x = h1_retract(ctx, "i", v)
    assert h1_retract(ctx, "p", x) == v
    assert h1_retract(ctx, "h", x).is_zero()
    half = {(E_, (-1, -1)): Fraction(1, 2)}
    assert x.form(W_EDGE) == {((0,), (0,)): half}


def test_h1_on_closed_zero_forms(ctx):
    # (f, g) with f(1) = g(1), f(0) = g(0) = 0
    key = (H_, (-2, -1))
    om = _edge_element(ctx.gm, {1: {key: 1}, 2: {key: 2}}, {1: {key: 3}})
    assert h1_retract(ctx, "h", om.d()) == om


def test_h1_retract_identities(ctx):
    mm = ctx.keys({Sector.MM})
    for rng in seeds(50, "prop63"):
        v = random_vector(rng, mm)
        assert h1_retract(ctx, "p", h1_retract(ctx, "i", v)) == v
        deg = rng.randint(0, 1)
        x = random_element(ctx.gm, rng, deg, mm)
        ip = h1_retract(ctx, "i", h1_retract(ctx, "p", x)) if deg else TWElement.zero(ctx.gm)
        assert h1_retract(ctx, "h", x).d() + h1_retract(ctx, "h", x.d()) == x - ip


def test_h1_rejects_other_sectors(ctx):
    with pytest.raises(ValueError):
        h1_retract(ctx, "i", {(E_, (0, -1)): 1})


@pytest.mark.parametrize("variant", ["vertex", "generic"])
def test_disc_retract_identities(ctx, variant):
    keys, pp = ctx.keys(), ctx.positive_keys()
    for rng in seeds(50, "prop67" + variant):
        f = random_vector(rng, pp)
        assert disc_retract(ctx, "P", disc_retract(ctx, "I", f), variant) == f
        x = random_element(ctx.gD, rng, rng.randint(0, 2), keys)
        h = disc_retract(ctx, "h", x, variant)
        assert validate(h)[0]
        ip = disc_retract(ctx, "I", disc_retract(ctx, "P", x, variant))
        assert h.d() + disc_retract(ctx, "h", x.d(), variant) == x - ip


def test_disc_constant(ctx):
    c = constant_element(ctx.gD, {(E_, (1, 1)): 4})
    assert disc_retract(ctx, "P", c) == {(E_, (1, 1)): 4}
    assert disc_retract(ctx, "h", c).is_zero()


def test_disc_variant_name_checked(ctx):
    with pytest.raises(ValueError):
        disc_retract(ctx, "P", TWElement.zero(ctx.gD), "corner")
