from fractions import Fraction

import pytest

from hmtriple.local import h1_retract
from hmtriple.randgen import random_element, random_vector
from hmtriple.scalars import GlobalRationalFn, laurent_expand
from hmtriple.suites import _global_retract_cases
from hmtriple.tw import TWElement, validate

from conftest import seeds


@pytest.mark.parametrize("which", ["G2", "G3"])
def test_global_retract_package(which, request):
    G = request.getfixturevalue(which)
    case = _global_retract_cases(G)
    for rng in seeds(50, "globret" + which):
        assert case(rng) is None


def test_offdiag_empty_for_two_points(G2):
    for rng in seeds(50, "empty"):
        mu = random_element(G2.gG, rng, rng.randint(0, 1), G2.atom_keys())
        assert not any(G2.P_discs(G2.I_global_all(mu)))
        assert all(not v for v in G2.h_offdiag(mu))


def test_I_global_of_zero(G2):
    assert all(x.is_zero() for x in G2.I_global_all(TWElement.zero(G2.gG)))


def test_expand_atom_matches_rational_expansion(G2):
    # single atom (w - w_1)^-1 (z - z_0)^-2 expanded at the point 0
    atom = (1, 0, 1, 2)
    got = G2.expand_atom(atom, (0, 0))
    r = GlobalRationalFn(G2.complex.marked_w, G2.complex.marked_z, {atom: 1})
    poly = laurent_expand(r, 0, G2.window)
    assert {m: c for m, c in got.items() if G2.window.contains(m)} == {
        m: poly.coeff(*m) for m in G2.window.monomials() if poly.coeff(*m)
    }


def test_P_global_of_negative_representatives(G2):
    om = tuple(TWElement(G2.local.gDx, h1_retract(G2.local, "i", {(0, (-1, -1)): 1}).forms) for _ in range(2))
    pg = G2.P_global(om)
    assert validate(pg)[0]
    assert not pg.is_zero()


def test_P_discs_of_I_discs(G2):
    f = ({(0, (0, 0)): 1, (1, (1, 2)): 3}, {(2, (2, 0)): Fraction(-1, 2)})
    assert G2.P_discs(G2.I_discs(f)) == f


def test_cohomology_retract_roundtrip(G2):
    for i in range(G2.N):
        x = {(1, (-1, -1)): 1}
        rep = G2.cohomology_retract("f", i, x)
        assert validate(rep)[0]
        for k in range(G2.N):
            assert G2.cohomology_retract("g", k, rep) == (x if k == i else {})


def test_big_disc_retracts(G2):
    lk = G2.local.keys()
    for rng in seeds(50, "bigdisc"):
        (i, j), m = rng.choice(sorted(G2.big_models.items()))
        x = random_element(m, rng, rng.randint(0, 2), lk)
        f = G2.big_model_maps("f_ij", i, j, x)
        g = G2.big_model_maps("g_ij", i, j, f)
        assert validate(g)[0]
        assert G2.big_model_maps("f_ij", i, j, g) == f
        h = G2.big_model_maps("h_ij", i, j, x)
        assert h.d() + G2.big_model_maps("h_ij", i, j, x.d()) == x - g


def test_big_model_constant_paints_constant(G2):
    (i, j) = (0, 1)
    m = G2.big_models[(i, j)]
    c = TWElement.constant(m, {(0, (0, 0)): 2})
    f = G2.big_model_maps("f_ij", i, j, c)
    assert G2.big_model_maps("g_ij", i, j, f) == c


def test_big_model_global_retract(G2):
    lk, ak, pp = G2.local.keys(), G2.atom_keys(), G2.local.positive_keys()
    for rng in seeds(50, "bigglobal"):
        deg = rng.randint(0, 2)
        om = {ij: random_element(m, rng, deg, lk) for ij, m in sorted(G2.big_models.items())}
        h = G2.global_retract("h", om)
        hd = G2.global_retract("h", {k: v.d() for k, v in om.items()})
        ip = G2.global_retract("I", G2.global_retract("P", om))
        for ij in om:
            assert h[ij].d() + hd[ij] == om[ij] - ip[ij]
        assert all(v.is_zero() for v in G2.global_retract("h", h).values())
        mu = random_element(G2.gG, rng, deg, ak)
        f = {ij: random_vector(rng, pp, 1) for ij in G2.pairs()} if deg == 0 else {}
        back = G2.global_retract("P", G2.global_retract("I", (mu, f)))
        assert back[0] == mu
        assert all(back[1][ij] == f.get(ij, {}) for ij in G2.pairs())
