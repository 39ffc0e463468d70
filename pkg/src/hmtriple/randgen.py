"""Seeded random Thom-Whitney elements built from barycentric hat functions.

A term is ``c * key * t_{v1} ... t_{vk} dt_{u1} ^ ...`` where the ``t_v`` are the
barycentric "hat" functions of flag points.  Such a product is automatically
compatible across faces; it satisfies the boundary condition for ``key`` as soon
as one of the involved points lies outside the forbidden set of the key's class.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .polyforms import barycentric_polys, wedge_sign
from .tw import TWElement, TWModel, validate

__all__ = ["hat_term", "random_element", "random_keys", "random_vector"]


def _scalar_hat_form(flag: tuple, hats: Sequence, dhats: Sequence) -> dict:
    """Scalar form ``prod t_v * dt_u1 ^ dt_u2`` on the simplex ``flag``."""
    n = len(flag) - 1
    if any(v not in flag for v in list(hats) + list(dhats)):
        return {}
    t = barycentric_polys(n, n, 0)
    pos = {p: k for k, p in enumerate(flag)}
    form = {((), (0,) * n): Fraction(1)}
    for v in hats:
        poly = t[pos[v]]
        prod: dict = {}
        for (w, e), c in form.items():
            for e2, c2 in poly.items():
                key = (w, tuple(a + b for a, b in zip(e, e2)))
                prod[key] = prod.get(key, 0) + c * c2
        form = _collect(prod)
    for u in dhats:
        poly = t[pos[u]]
        new: dict = {}
        for (w, e), c in form.items():
            for e2, c2 in poly.items():
                for var in range(n):
                    if not e2[var]:
                        continue
                    sign, wd = wedge_sign(w, (var,))
                    if not sign:
                        continue
                    e3 = tuple(a + b for a, b in zip(e, e2))
                    e3 = e3[:var] + (e3[var] - 1,) + e3[var + 1 :]
                    key = (wd, e3)
                    new[key] = new.get(key, 0) + sign * c * c2 * e2[var]
        form = _collect(new)
    return form


def _collect(form: dict) -> dict:
    return {k: v for k, v in form.items() if v}


def hat_term(model: TWModel, key, coeff, hats: Sequence, dhats: Sequence = ()) -> TWElement:
    """The element ``coeff * key * prod(hats) * d(dhats)`` (not validated)."""
    forms = {}
    for f in model.complex.all_simplices():
        sf = _scalar_hat_form(f, hats, dhats)
        if sf:
            forms[f] = {k: {key: Fraction(coeff) * c} for k, c in sf.items()}
    return TWElement(model, forms)


def random_vector(rng: random.Random, keys: Sequence, n_terms: int = 2) -> dict:
    out = {}
    for _ in range(n_terms):
        k = rng.choice(list(keys))
        c = rng.randint(-9, 9)
        if c:
            out[k] = out.get(k, 0) + c
    return {k: Fraction(v) for k, v in out.items() if v}


def random_keys(model: TWModel, monomials: Sequence) -> list:
    return [(a, m) for a in range(model.lie.dim) for m in monomials]


def random_element(
    model: TWModel,
    rng: random.Random,
    degree: int,
    keys: Sequence,
    n_terms: int = 3,
    max_poly: int = 2,
    checked: bool = True,
) -> TWElement:
    """Random homogeneous element of the given form degree; coefficients in [-9, 9]."""
    tops = [F for F in model._maximal if len(F) - 1 >= degree]
    if not tops or not keys:
        return TWElement.zero(model)
    acc = TWElement.zero(model)
    keys = list(keys)
    for _ in range(n_terms):
        key = rng.choice(keys)
        forbidden = model.assignment.forbidden_points(model.class_of(key))
        cands = [F for F in tops if any(p not in forbidden for p in F)]
        if not cands:
            continue
        F = rng.choice(cands)
        free = [p for p in F if p not in forbidden]
        anchor = rng.choice(free)
        dhats = rng.sample(list(F), degree) if degree else []
        n_hats = rng.randint(0, max(0, max_poly - degree))
        hats = [rng.choice(F) for _ in range(n_hats)]
        if anchor not in dhats:
            if len(hats) + degree < max_poly or not hats:
                hats.append(anchor)
            else:
                hats[0] = anchor
        c = rng.randint(-9, 9) or 1
        acc = acc + hat_term(model, key, c, hats, dhats)
    if checked:
        ok, diags = validate(acc)
        if not ok:
            raise AssertionError("generated element failed validation: " + diags[0])
    return acc
