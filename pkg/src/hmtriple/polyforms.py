"""Scalar polynomial differential forms on standard simplices.

Coordinates: a 1-simplex uses ``s`` (barycentric ``t1``), a 2-simplex uses
``(s, u) = (t2, t1)`` so ``t = s + u = 1 - t0``.  An optional extra variable ``tau``
(index 0) parametrises homotopies.

A scalar form is a dict ``(wedge, exps) -> Fraction`` where ``wedge`` is a sorted
tuple of variable indices and ``exps`` the exponent tuple of the monomial.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

Poly = dict  # exps -> Fraction

__all__ = [
    "coord_names",
    "barycentric_polys",
    "affine_pullback_basis",
    "integrate_top",
    "wedge_sign",
]


def coord_names(dim: int) -> tuple[str, ...]:
    return ("s", "u")[:dim] if dim == 2 else (("s",) if dim == 1 else ())


# barycentric index of each coordinate
_COORD_BARY = {0: (), 1: (1,), 2: (2, 1)}


def _padd(acc: Poly, p: Poly, c=1) -> None:
    for e, v in p.items():
        x = acc.get(e, 0) + c * v
        if x:
            acc[e] = x
        else:
            acc.pop(e, None)


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for e1, a in p.items():
        for e2, b in q.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            v = out.get(e, 0) + a * b
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _pderiv(p: Poly, v: int) -> Poly:
    out: Poly = {}
    for e, c in p.items():
        if e[v]:
            e2 = e[:v] + (e[v] - 1,) + e[v + 1 :]
            out[e2] = out.get(e2, 0) + c * e[v]
    return {e: c for e, c in out.items() if c}


def _var(nv: int, k: int) -> Poly:
    return {tuple(1 if m == k else 0 for m in range(nv)): Fraction(1)}


def _const(nv: int, c) -> Poly:
    return {(0,) * nv: Fraction(c)} if c else {}


def barycentric_polys(dim: int, nvars: int, offset: int) -> list[Poly]:
    """Barycentric coordinates ``t_0..t_dim`` of a ``dim``-simplex as polynomials.

    The simplex coordinates occupy variables ``offset, offset+1, ...`` out of ``nvars``.
    """
    t = [None] * (dim + 1)
    for c, b in enumerate(_COORD_BARY[dim]):
        t[b] = _var(nvars, offset + c)
    t0 = _const(nvars, 1)
    for c in range(dim):
        _padd(t0, _var(nvars, offset + c), -1)
    t[0] = t0
    return t


def wedge_sign(a: tuple, b: tuple):
    """Sign and sorted index tuple of ``dx_a ^ dx_b``, or ``(0, None)`` if they overlap."""
    if set(a) & set(b):
        return 0, None
    seq = list(a + b)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


@lru_cache(maxsize=None)
def _map_polys(src_dim: int, tgt_dim: int, images: tuple, with_tau: bool):
    """Target coordinates as polynomials in (tau?, source coordinates)."""
    nv = src_dim + (1 if with_tau else 0)
    off = 1 if with_tau else 0
    t_src = barycentric_polys(src_dim, nv, off)
    tau = _var(nv, 0) if with_tau else None
    T = [dict() for _ in range(tgt_dim + 1)]
    for k, img in enumerate(images):
        for j, (c0, c1) in enumerate(img):
            coef: Poly = _const(nv, c0)
            if c1:
                if tau is None:
                    raise ValueError("tau-dependent image without tau variable")
                _padd(coef, tau, c1)
            if coef:
                _padd(T[j], _pmul(t_src[k], coef))
    X = [T[b] for b in _COORD_BARY[tgt_dim]]
    dX = [[_pderiv(x, v) for v in range(nv)] for x in X]
    return nv, X, dX


@lru_cache(maxsize=None)
def _power(src_dim: int, tgt_dim: int, images: tuple, with_tau: bool, c: int, e: int):
    nv, X, _ = _map_polys(src_dim, tgt_dim, images, with_tau)
    if e == 0:
        return _const(nv, 1)
    return _pmul(_power(src_dim, tgt_dim, images, with_tau, c, e - 1), X[c])


@lru_cache(maxsize=None)
def affine_pullback_basis(src_dim: int, tgt_dim: int, images: tuple, with_tau: bool, wedge: tuple, exps: tuple):
    """Pull back ``x^exps dx_wedge`` along an affine map given by vertex images.

    ``images[k][j] = (c0, c1)`` is the ``j``-th target barycentric coordinate of source
    vertex ``k`` as ``c0 + c1 * tau``.  Returns a scalar form (as a tuple of items).
    """
    nv, X, dX = _map_polys(src_dim, tgt_dim, images, with_tau)
    poly = _const(nv, 1)
    for c, e in enumerate(exps):
        if e:
            poly = _pmul(poly, _power(src_dim, tgt_dim, images, with_tau, c, e))
    # forms: dict wedge -> Poly
    form = {(): poly}
    for w in wedge:
        new: dict = {}
        for wd, p in form.items():
            for v in range(nv):
                q = dX[w][v]
                if not q:
                    continue
                sign, wd2 = wedge_sign(wd, (v,))
                if not sign:
                    continue
                acc = new.setdefault(wd2, {})
                _padd(acc, _pmul(p, q), sign)
        form = {k: v for k, v in new.items() if v}
    out = []
    for wd, p in form.items():
        for e, c in p.items():
            out.append(((wd, e), c))
    return tuple(out)


def integrate_top(dim: int, exps: tuple) -> Fraction:
    """Integral of the top-degree monomial form over the standard simplex, barycentric orientation.

    With ``(s, u) = (t2, t1)`` the orientation ``dt1 ^ dt2`` equals ``-ds ^ du``.
    """
    if dim == 0:
        return Fraction(1)
    if dim == 1:
        return Fraction(1, exps[0] + 1)
    a, b = exps
    return -Fraction(factorial(a) * factorial(b), factorial(a + b + 2))
