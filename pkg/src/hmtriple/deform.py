"""Homotopies from chains of vertex collapses.

A stage is a vertex map ``r`` on the current point set that is idempotent onto
its image, contiguous to the identity (``sigma`` together with ``r(sigma)`` is
still a flag) and maps every forbidden set into itself.  The straight-line
deformation from ``r`` to the identity gives a homotopy ``K`` with
``[d, K] = id - r*``.  Stages compose: with ``R_t`` the composite of the first
``t`` stages and ``rho_t`` restriction to the surviving points,

    h = sum_t R_t^* K_t rho_t,      [d, h] = id - R_T^* rho_T.

These are the per-simplex path integrals behind every pictorial homotopy used by
the global and big-model retracts; the tables of stages are data and are
checked by the identities, not trusted.
"""

from __future__ import annotations

from typing import Callable, Iterable, Mapping, Sequence

from .flags import FlagComplex, FlagPoint, closure_le, flag_str
from .tw import (
    TWElement,
    TWModel,
    sf_add,
    sf_map_coeffs,
    sf_pullback,
    sf_tau_integrate,
)

__all__ = ["CollapseChain", "vertex_pullback", "homotopy_by_class"]


def _chain(points: Iterable[FlagPoint]) -> tuple | None:
    pts = sorted(set(points), key=lambda p: (p.rank, p))
    for a, b in zip(pts, pts[1:]):
        if not closure_le(a, b) or a == b:
            return None
    return tuple(pts)


def _images(src: tuple, tgt: tuple, start: Mapping, end: Mapping | None = None) -> tuple:
    """Barycentric images of the source vertices; with ``end`` the image moves from ``start`` (tau=0) to ``end`` (tau=1)."""
    pos = {p: k for k, p in enumerate(tgt)}
    imgs = []
    for v in src:
        row = [[0, 0] for _ in tgt]
        a = start[v]
        if end is None or end[v] == a:
            row[pos[a]][0] += 1
        else:
            row[pos[a]][0] += 1
            row[pos[a]][1] -= 1
            row[pos[end[v]]][1] += 1
        imgs.append(tuple((c0, c1) for c0, c1 in row))
    return tuple(imgs)


def vertex_pullback(
    source_form: Callable[[tuple], dict],
    target_simplices: Iterable[tuple],
    vmap: Mapping[FlagPoint, FlagPoint],
) -> dict:
    """Forms ``(vmap^* omega)_sigma`` for every target simplex ``sigma``."""
    out = {}
    for sigma in target_simplices:
        img = _chain(vmap[v] for v in sigma)
        if img is None:
            raise ValueError(f"vertex map does not send {flag_str(sigma)} to a flag")
        a = source_form(img)
        if not a:
            continue
        images = _images(sigma, img, vmap)
        out[sigma] = sf_pullback(a, len(sigma) - 1, len(img) - 1, images)
    return out


class CollapseChain:
    """A sequence of collapse stages starting from the point set of ``complex``.

    Each stage is a dict sending some of the current points to other current
    points; unlisted points stay fixed.
    """

    def __init__(self, complex: FlagComplex, stages: Sequence[Mapping[FlagPoint, FlagPoint]], name: str = ""):
        self.complex = complex
        self.name = name
        pts = set(complex.points)
        self.stage_maps: list[dict] = []
        self.point_sets: list[frozenset] = [frozenset(pts)]
        for st in stages:
            r = {p: st.get(p, p) for p in pts}
            self.stage_maps.append(r)
            pts = set(r.values())
            self.point_sets.append(frozenset(pts))
        self.complexes = [complex.subcomplex(P) for P in self.point_sets]
        # composites R_t : S_0 -> S_t
        self.composites: list[dict] = [{p: p for p in complex.points}]
        for r in self.stage_maps:
            prev = self.composites[-1]
            self.composites.append({p: r[q] for p, q in prev.items()})

    @property
    def final_points(self) -> frozenset:
        return self.point_sets[-1]

    @property
    def final_map(self) -> dict:
        return self.composites[-1]

    def check(self, forbidden_sets: Iterable[frozenset] = ()) -> list[str]:
        """Idempotence, contiguity and preservation of forbidden sets for every stage."""
        problems = []
        forbidden_sets = list(forbidden_sets)
        for t, r in enumerate(self.stage_maps):
            cx = self.complexes[t]
            for p, q in r.items():
                if r[q] != q:
                    problems.append(f"stage {t}: not idempotent at {p}")
            for sigma in cx.all_simplices():
                if _chain(list(sigma) + [r[v] for v in sigma]) is None:
                    problems.append(f"stage {t}: {flag_str(sigma)} and its image are not contiguous")
            for Q in forbidden_sets:
                for p in Q & self.point_sets[t]:
                    if r[p] not in Q:
                        problems.append(f"stage {t}: {p} leaves a forbidden set")
                        break
        return problems

    def stage_homotopy(self, t: int, form_of: Callable[[tuple], dict]) -> dict:
        """``K_t`` on the complex of stage ``t``: forms keyed by its simplices."""
        r = self.stage_maps[t]
        ident = {p: p for p in r}
        out = {}
        for sigma in self.complexes[t].all_simplices():
            big = _chain(list(sigma) + [r[v] for v in sigma])
            if big == _chain(sigma) and all(r[v] == v for v in sigma):
                continue
            a = form_of(big)
            if not a:
                continue
            images = _images(sigma, big, r, ident)
            pulled = sf_pullback(a, len(sigma) - 1, len(big) - 1, images, with_tau=True)
            k = sf_tau_integrate(pulled)
            if k:
                out[sigma] = k
        return out

    def homotopy(self, el: TWElement) -> TWElement:
        """``h = sum_t R_t^* K_t rho_t``; ``[d, h] = id - R^* rho`` on the full complex."""
        total: dict = {}
        targets = self.complex.all_simplices()
        for t in range(len(self.stage_maps)):
            k = self.stage_homotopy(t, el.form)
            if not k:
                continue
            pulled = vertex_pullback(lambda f: k.get(f, {}), targets, self.composites[t])
            for f, a in pulled.items():
                total[f] = sf_add(total[f], a) if f in total else a
        return TWElement(el.model, total)

    def retraction(self, el: TWElement, model: TWModel | None = None, coeff_fn=None) -> TWElement:
        """``R^* rho`` of an element, optionally transported to another model."""
        def form_of(f):
            a = el.form(f)
            return sf_map_coeffs(a, coeff_fn) if coeff_fn and a else a

        forms = vertex_pullback(form_of, self.complex.all_simplices(), self.final_map)
        return TWElement(model or el.model, forms)

    def paint(self, source: Callable[[tuple], dict], model: TWModel, coeff_fn=None) -> TWElement:
        """Pull back forms given on the final sub-complex along the composite collapse."""
        def form_of(f):
            a = source(f)
            return sf_map_coeffs(a, coeff_fn) if coeff_fn and a else a

        return TWElement(model, vertex_pullback(form_of, self.complex.all_simplices(), self.final_map))


def homotopy_by_class(el: TWElement, chain_for_class: Callable[[object], CollapseChain | None]) -> TWElement:
    """Apply the chain homotopy of each coefficient class to that class's part of ``el``."""
    out = TWElement.zero(el.model)
    for cls in sorted(el.classes(), key=str):
        chain = chain_for_class(cls)
        if chain is None:
            continue
        out = out + chain.homotopy(el.class_part(cls))
    return out
