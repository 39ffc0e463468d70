"""The local retracts on the punctured and unpunctured formal polydisc.

On the punctured disc an element is a pair of forms on the two edges
``((w=0), E)`` and ``((z=0), E)``, each ``f(s) + F(s) ds`` with ``s`` running from
the line (s=0) to ``E`` (s=1).  Positive vectors (elements of ``g (x) C[[w, z]]``)
are plain dicts ``(lie_index, monomial) -> coefficient``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .flags import (
    ClosedPoint,
    Generic,
    WLine,
    ZLine,
    assign_algebra,
    build_pdisc_flags,
)
from .lie import LieStructure
from .scalars import ExpansionWindow, Sector, sector_of
from .tw import TWElement, TWModel, _vadd

__all__ = [
    "LocalTripleContext",
    "local_I",
    "local_P",
    "local_h",
    "h1_retract",
    "disc_retract",
    "W_EDGE",
    "Z_EDGE",
    "sector_part",
    "constant_element",
]

W_EDGE = (WLine(0), Generic())
Z_EDGE = (ZLine(0), Generic())
TRI_W = (ClosedPoint(0, 0), WLine(0), Generic())
TRI_Z = (ClosedPoint(0, 0), ZLine(0), Generic())


@dataclass
class LocalTripleContext:
    """Models for ``g_D^x``, ``g_-`` and ``g_D`` over one Lie structure and window."""

    L: LieStructure
    window: ExpansionWindow
    gDx: TWModel = field(init=False)
    gm: TWModel = field(init=False)
    gD: TWModel = field(init=False)

    def __post_init__(self):
        punct = build_pdisc_flags(True)
        self.gDx = TWModel(assign_algebra(punct, "A_Dx"), self.L, "g_Dx")
        self.gm = TWModel(assign_algebra(punct, "A_mm"), self.L, "g_minus")
        self.gD = TWModel(assign_algebra(build_pdisc_flags(False), "A_D"), self.L, "g_D")

    def keys(self, sectors=None) -> list:
        return [
            (a, m)
            for a in range(self.L.dim)
            for m in self.window.monomials()
            if sectors is None or sector_of(m) in sectors
        ]

    def positive_keys(self) -> list:
        return self.keys({Sector.PP})


def sector_part(vec: Mapping, sector: Sector) -> dict:
    return {k: v for k, v in vec.items() if sector_of(k[1]) == sector}


def constant_element(model: TWModel, vec: Mapping) -> TWElement:
    return TWElement.constant(model, {k: Fraction(v) for k, v in vec.items() if v})


# ---------------------------------------------------------------------------
# one-variable polynomial helpers: {exponent: vector}
# ---------------------------------------------------------------------------


def _edge_parts(el: TWElement, edge) -> tuple[dict, dict]:
    """``(f, F)`` with ``form = f(s) + F(s) ds`` on the edge."""
    f: dict = {}
    F: dict = {}
    for (wedge, exps), vec in el.form(edge).items():
        (f if not wedge else F)[exps[0]] = vec
    return f, F


def _integral01(poly: Mapping[int, dict]) -> dict:
    out: dict = {}
    for e, vec in poly.items():
        _vadd(out, vec, Fraction(1, e + 1))
    return out


def _antideriv(poly: Mapping[int, dict], base: int) -> dict:
    """``s -> int_base^s poly``."""
    out: dict = {}
    for e, vec in poly.items():
        out[e + 1] = {k: v / (e + 1) for k, v in vec.items()}
    if base == 1:
        out[0] = {k: -v for k, v in _integral01(poly).items()}
    return {e: v for e, v in out.items() if v}


def _padd(*polys) -> dict:
    out: dict = {}
    for p in polys:
        for e, vec in p.items():
            acc = out.setdefault(e, {})
            _vadd(acc, vec)
    return {e: v for e, v in out.items() if v}


def _pscale(p: Mapping[int, dict], c) -> dict:
    return {e: {k: c * v for k, v in vec.items()} for e, vec in p.items()}


def _const_poly(vec: Mapping) -> dict:
    return {0: dict(vec)} if vec else {}


def _linear(vec: Mapping, c=1) -> dict:
    """``c * vec * s``."""
    return {1: {k: c * v for k, v in vec.items()}} if vec else {}


def _pfilter(p: Mapping[int, dict], sector: Sector) -> dict:
    out = {e: sector_part(v, sector) for e, v in p.items()}
    return {e: v for e, v in out.items() if v}


def _peval(p: Mapping[int, dict], s: int) -> dict:
    out: dict = {}
    for e, vec in p.items():
        if s == 1 or e == 0:
            _vadd(out, vec)
    return out


def _edge_element(model: TWModel, fW: dict, fZ: dict, FW: dict | None = None, FZ: dict | None = None) -> TWElement:
    """Assemble an element from edge polynomials (0-form parts and ds parts)."""
    top = {W_EDGE: {}, Z_EDGE: {}}
    for edge, f, F in ((W_EDGE, fW, FW or {}), (Z_EDGE, fZ, FZ or {})):
        for e, vec in f.items():
            top[edge][((), (e,))] = dict(vec)
        for e, vec in F.items():
            top[edge][((0,), (e,))] = dict(vec)
    return TWElement.from_top(model, top)


# ---------------------------------------------------------------------------
# the punctured-disc retract
# ---------------------------------------------------------------------------


def local_I(ctx: LocalTripleContext, xp: Mapping | None, xm: TWElement | None) -> TWElement:
    """``i_+ (+) i_-``: constants plus the canonical embedding of ``g_-``."""
    out = TWElement.zero(ctx.gDx)
    if xp:
        bad = [k for k in xp if sector_of(k[1]) != Sector.PP]
        if bad:
            raise ValueError(f"positive part has non-regular monomials {bad[:3]}")
        out = out + constant_element(ctx.gDx, xp)
    if xm is not None and not xm.is_zero():
        if xm.classes() - {Sector.MM}:
            raise ValueError("negative part must lie in the MM sector")
        out = out + TWElement(ctx.gDx, xm.forms)
    return out


def local_P(ctx: LocalTripleContext, el: TWElement) -> tuple[dict, TWElement]:
    """``(omega^{++} at E, omega^{--})``."""
    at_e = sector_part(el.degree_part(0).value_at(Generic()), Sector.PP)
    mm = el.class_part(Sector.MM)
    return at_e, TWElement(ctx.gm, mm.forms)


def local_h(ctx: LocalTripleContext, el: TWElement) -> TWElement:
    """Sector-wise homotopy with ``[d, h] = id - I P``."""
    _, FW = _edge_parts(el, W_EDGE)
    _, FZ = _edge_parts(el, Z_EDGE)
    hW: list = []
    hZ: list = []
    S = Sector
    fw, fz = _pfilter(FW, S.PP), _pfilter(FZ, S.PP)
    hW.append(_antideriv(fw, 1))
    hZ.append(_antideriv(fz, 1))
    fw, fz = _pfilter(FW, S.MP), _pfilter(FZ, S.MP)
    hW.append(_antideriv(fw, 0))
    hZ.append(_padd(_const_poly(_integral01(fw)), _antideriv(fz, 1)))
    fw, fz = _pfilter(FW, S.PM), _pfilter(FZ, S.PM)
    hW.append(_padd(_const_poly(_integral01(fz)), _antideriv(fw, 1)))
    hZ.append(_antideriv(fz, 0))
    return _edge_element(el.model, _padd(*hW), _padd(*hZ))


# ---------------------------------------------------------------------------
# the H^1 retract of g_-
# ---------------------------------------------------------------------------


def h1_retract(ctx: LocalTripleContext, direction: str, arg):
    """``i``: vector -> half (ds, -ds) form; ``p``: form -> vector; ``h``: homotopy on ``g_-``."""
    if direction == "i":
        vec = {k: Fraction(v) for k, v in arg.items() if v}
        if any(sector_of(k[1]) != Sector.MM for k in vec):
            raise ValueError("H^1 representatives live in the MM sector")
        half = {k: v / 2 for k, v in vec.items()}
        return _edge_element(ctx.gm, {}, {}, _const_poly(half), _const_poly({k: -v for k, v in half.items()}))
    if arg.classes() - {Sector.MM}:
        raise ValueError("argument must lie in the MM sector")
    _, FW = _edge_parts(arg, W_EDGE)
    _, FZ = _edge_parts(arg, Z_EDGE)
    c = _integral01(_padd(FW, _pscale(FZ, -1)))
    if direction == "p":
        return c
    if direction == "h":
        half = {k: v / 2 for k, v in c.items()}
        hW = _padd(_antideriv(FW, 0), _linear(half, -1))
        hZ = _padd(_antideriv(FZ, 0), _linear(half, 1))
        return _edge_element(arg.model, hW, hZ)
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# the unpunctured-disc retract
# ---------------------------------------------------------------------------


def _triangle_h(form: dict) -> dict:
    """The triangle homotopy: integrate ds-components from s=0, then du-components along s=0."""
    out: dict = {}

    def put(key, vec, c):
        acc = out.setdefault(key, {})
        _vadd(acc, vec, c)
        if not acc:
            del out[key]

    for (wedge, (a, b)), vec in form.items():
        if wedge == (0,):
            put(((), (a + 1, b)), vec, Fraction(1, a + 1))
        elif wedge == (0, 1):
            put(((1,), (a + 1, b)), vec, Fraction(1, a + 1))
        elif wedge == (1,) and a == 0:
            put(((), (0, b + 1)), vec, Fraction(1, b + 1))
    return out


def disc_retract(ctx: LocalTripleContext, direction: str, arg, variant: str = "vertex"):
    """``I``, ``P``, ``h`` for ``g_+ <-> g_D``; ``variant`` selects the base vertex of ``P``."""
    if variant not in ("vertex", "generic"):
        raise ValueError(f"unknown variant {variant!r}")
    if direction == "I":
        if any(sector_of(k[1]) != Sector.PP for k in arg):
            raise ValueError("g_+ elements are regular")
        return constant_element(ctx.gD, arg)
    if direction == "P":
        zero = arg.degree_part(0)
        if variant == "vertex":
            return zero.value_at(ClosedPoint(0, 0))
        return sector_part(zero.value_at(Generic()), Sector.PP)
    if direction == "h":
        top = {T: _triangle_h(arg.form(T)) for T in (TRI_W, TRI_Z)}
        out = TWElement.from_top(arg.model, top)
        if variant == "generic":
            # add the constant  int_1^0 f_s(s', 0)^{++} ds'  along the edge (0,0) -> E
            edge = (ClosedPoint(0, 0), Generic())
            c: dict = {}
            for (wedge, (e,)), vec in arg.form(edge).items():
                if wedge == (0,):
                    _vadd(c, sector_part(vec, Sector.PP), Fraction(-1, e + 1))
            if c:
                out = out + constant_element(arg.model, c)
        return out
    raise ValueError(f"unknown direction {direction!r}")
