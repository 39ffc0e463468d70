"""Global models over ``N`` marked points and their retracts.

``g_Global`` lives on the rectilinear flag complex with pure-polar coefficients;
``g_PDiscs^x`` is a tuple of ``N`` punctured-disc elements (one per diagonal point);
``g_PDiscs`` is a tuple of ``N`` regular vectors.  The big models ``g^{ij}`` put
Laurent coefficients centred at ``(w_i, z_j)`` on the whole rectilinear complex.

The pictorial homotopies are :class:`~hmtriple.deform.CollapseChain` tables built
from the actual complex, so degenerate cases need no special handling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .deform import CollapseChain, homotopy_by_class
from .flags import (
    ClosedPoint,
    FlagPoint,
    Generic,
    WLine,
    ZLine,
    assign_algebra,
    build_rect_flags,
)
from .lie import LieStructure
from .local import (
    LocalTripleContext,
    constant_element,
    disc_retract,
    h1_retract,
    local_h,
    sector_part,
)
from .scalars import ExpansionWindow, Sector, as_scalar, expand_pole
from .tw import TWElement, TWModel, _vadd, sf_map_coeffs

__all__ = ["GlobalContext"]

E = Generic()


def _rename_flags(forms: Mapping[tuple, dict], rename: Mapping[FlagPoint, FlagPoint]) -> dict:
    out = {}
    for f, a in forms.items():
        if all(p in rename for p in f):
            out[tuple(rename[p] for p in f)] = a
    return out


@dataclass
class GlobalContext:
    L: LieStructure
    marked_w: Sequence
    marked_z: Sequence
    window: ExpansionWindow
    local: LocalTripleContext = field(init=False)

    def __post_init__(self):
        self.marked_w = tuple(as_scalar(x) for x in self.marked_w)
        self.marked_z = tuple(as_scalar(x) for x in self.marked_z)
        self.N = len(self.marked_w)
        if len(self.marked_z) != self.N:
            raise ValueError("need as many z-coordinates as w-coordinates")
        self.complex = build_rect_flags(self.N, self.marked_w, self.marked_z)
        self.gG = TWModel(assign_algebra(self.complex, "A_RectN"), self.L, "g_Global")
        self.local = LocalTripleContext(self.L, self.window)
        self._expand_cache: dict = {}

    # -- models and chains --------------------------------------------------
    @cached_property
    def big_models(self) -> dict:
        return {
            (i, j): TWModel(assign_algebra(self.complex, "A_ij", (i, j)), self.L, f"g^{i}{j}")
            for i in range(self.N)
            for j in range(self.N)
        }

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.N) for j in range(self.N)]

    def _pts(self):
        return self.complex.points

    def diag_chain(self, i: int) -> CollapseChain:
        """Collapse ``Rect`` onto the punctured disc at ``(w_i, z_i)``."""
        return self._cached_chain(("diag", i))

    def offdiag_chain(self, k: int, l: int) -> CollapseChain:
        """Collapse ``Rect`` onto the closed point ``(w_k, z_l)``, ``k != l``."""
        return self._cached_chain(("off", k, l))

    def udisc_chain(self, i: int, j: int) -> CollapseChain:
        """Collapse ``Rect`` onto the unpunctured disc at ``(w_i, z_j)``, ``i != j``."""
        return self._cached_chain(("udisc", i, j))

    def sector_chain(self, i: int, j: int, sector: Sector) -> CollapseChain | None:
        return None if sector == Sector.MM else self._cached_chain(("sector", i, j, sector))

    @cached_property
    def _chains(self) -> dict:
        return {}

    def _cached_chain(self, key) -> CollapseChain:
        ch = self._chains.get(key)
        if ch is None:
            ch = self._chains[key] = self._build_chain(key)
        return ch

    def _build_chain(self, key) -> CollapseChain:
        pts = self._pts()
        lines = [p for p in pts if p.kind in ("w", "z")]
        closed = [p for p in pts if p.kind == "pt"]
        kind = key[0]
        if kind == "diag":
            i = key[1]
            keepW, keepZ = WLine(i), ZLine(i)
            st1 = {p: E for p in lines if p not in (keepW, keepZ)}
            st2 = {p: keepW if p.i == i else keepZ if p.j == i else E for p in closed}
            return CollapseChain(self.complex, [st1, st2], f"diag{i}")
        if kind in ("off", "udisc"):
            k, l = key[1], key[2]
            keepW, keepZ, c = WLine(k), ZLine(l), ClosedPoint(k, l)
            st1 = {p: E for p in lines if p not in (keepW, keepZ)}
            st2 = {p: keepW if p.i == k else keepZ if p.j == l else E for p in closed if p != c}
            if kind == "udisc":
                return CollapseChain(self.complex, [st1, st2], f"udisc{k}{l}")
            return CollapseChain(self.complex, [st1, st2, {keepW: c, keepZ: c}, {E: c}], f"off{k}{l}")
        if kind == "sector":
            i, j, sector = key[1], key[2], key[3]
            if sector == Sector.PP:
                return CollapseChain(self.complex, [{p: E for p in pts}], f"cone{i}{j}")
            if sector == Sector.MP:
                keep = WLine(i)
                st1 = {p: E for p in lines if p != keep}
                st2 = {p: keep if p.i == i else E for p in closed}
                return CollapseChain(self.complex, [st1, st2, {E: keep}], f"wline{i}{j}")
            keep = ZLine(j)
            st1 = {p: E for p in lines if p != keep}
            st2 = {p: keep if p.j == j else E for p in closed}
            return CollapseChain(self.complex, [st1, st2, {E: keep}], f"zline{i}{j}")
        raise KeyError(key)

    def disc_rename(self, i: int) -> dict:
        return {WLine(i): WLine(0), ZLine(i): ZLine(0), E: E}

    def udisc_rename(self, i: int, j: int) -> dict:
        return {ClosedPoint(i, j): ClosedPoint(0, 0), WLine(i): WLine(0), ZLine(j): ZLine(0), E: E}

    # -- coefficient maps ---------------------------------------------------
    def expand_atom(self, atom, center: tuple[int, int]) -> dict:
        """Local monomials of ``(w - w_k)^-a (z - z_l)^-b`` at ``(w_i, z_j)`` inside the window."""
        key = (atom, center)
        out = self._expand_cache.get(key)
        if out is None:
            k, l, a, b = atom
            i, j = center
            W = self.window
            ew = expand_pole(self.marked_w, (k, a), i, W.w_max)
            ez = expand_pole(self.marked_z, (l, b), j, W.z_max)
            out = {}
            for m, cw in ew.items():
                for n, cz in ez.items():
                    if W.contains((m, n)) and cw * cz:
                        out[(m, n)] = cw * cz
            self._expand_cache[key] = out
        return out

    def expand_vec(self, vec: Mapping, center: tuple[int, int]) -> dict:
        out: dict = {}
        for (lie, atom), c in vec.items():
            for mono, v in self.expand_atom(atom, center).items():
                k = (lie, mono)
                x = out.get(k, 0) + c * v
                if x:
                    out[k] = x
                else:
                    out.pop(k, None)
        return out

    @staticmethod
    def mm_to_atoms(vec: Mapping, block: tuple[int, int]) -> dict:
        """Read MM local monomials at ``block`` as pure-polar atoms."""
        k, l = block
        return {(lie, (k, l, -m, -n)): c for (lie, (m, n)), c in vec.items() if m < 0 and n < 0}

    # -- global retract maps --------------------------------------------------
    def I_global(self, mu: TWElement, i: int) -> TWElement:
        forms = _rename_flags(mu.forms, self.disc_rename(i))
        return TWElement(
            self.local.gDx, {f: sf_map_coeffs(a, lambda v: self.expand_vec(v, (i, i))) for f, a in forms.items()}
        )

    def I_global_all(self, mu: TWElement) -> tuple:
        return tuple(self.I_global(mu, i) for i in range(self.N))

    def I_discs(self, f: Sequence[Mapping]) -> tuple:
        return tuple(constant_element(self.local.gDx, v) for v in f)

    def P_global(self, omega: Sequence[TWElement]) -> TWElement:
        out = TWElement.zero(self.gG)
        for i, w in enumerate(omega):
            mm = w.class_part(Sector.MM)
            if mm.is_zero():
                continue
            inv = {v: k for k, v in self.disc_rename(i).items()}
            src = _rename_flags(mm.forms, inv)
            out = out + self.diag_chain(i).paint(
                lambda f: src.get(f, {}), self.gG, lambda v, i=i: self.mm_to_atoms(v, (i, i))
            )
        return out

    def tilde(self, omega: Sequence[TWElement]) -> tuple:
        back = self.I_global_all(self.P_global(omega))
        return tuple(w - b for w, b in zip(omega, back))

    def P_discs(self, omega: Sequence[TWElement]) -> tuple:
        return tuple(
            sector_part(t.degree_part(0).value_at(E), Sector.PP) for t in self.tilde(omega)
        )

    def h_global(self, mu: TWElement) -> TWElement:
        def chain(cls):
            k, l = cls
            return self.diag_chain(k) if k == l else self.offdiag_chain(k, l)

        return homotopy_by_class(mu, chain)

    def h_discsx(self, omega: Sequence[TWElement]) -> tuple:
        return tuple(local_h(self.local, t) for t in self.tilde(omega))

    def h_offdiag(self, mu: TWElement) -> tuple:
        out = []
        for i in range(self.N):
            acc: dict = {}
            for k in range(self.N):
                for l in range(self.N):
                    if k == l or i in (k, l):
                        continue
                    edge = (ClosedPoint(k, l), E)
                    block = {}
                    for (wedge, (e,)), vec in mu.form(edge).items():
                        if wedge == (0,):
                            part = {key: v for key, v in vec.items() if key[1][:2] == (k, l)}
                            _vadd(block, part, Fraction(1, e + 1))
                    _vadd(acc, self.expand_vec(block, (i, i)))
            out.append(acc)
        return tuple(out)

    def cohomology_retract(self, direction: str, i: int, arg):
        """``f^i``: H^1 vector at point ``i`` -> ``g_Global``; ``g^i``: ``g_Global`` -> H^1 vector at ``i``."""
        if direction == "f":
            omega = [TWElement.zero(self.local.gDx) for _ in range(self.N)]
            omega[i] = TWElement(self.local.gDx, h1_retract(self.local, "i", arg).forms)
            return self.P_global(omega)
        if direction == "g":
            mm = self.I_global(arg, i).class_part(Sector.MM)
            return h1_retract(self.local, "p", TWElement(self.local.gm, mm.forms))
        raise ValueError(f"unknown direction {direction!r}")

    # -- big models ---------------------------------------------------------
    def I_big(self, mu: TWElement, ij: tuple[int, int]) -> TWElement:
        model = self.big_models[ij]
        return TWElement(model, {f: sf_map_coeffs(a, lambda v: self.expand_vec(v, ij)) for f, a in mu.forms.items()})

    def big_model_maps(self, which: str, i: int, j: int, arg):
        """``f_ij``, ``g_ij``, ``h_ij`` retracting ``g^{ij}`` onto ``g_D^x`` (i = j) or ``g_+`` (i != j)."""
        model = self.big_models[(i, j)]
        if i == j:
            chain = self.diag_chain(i)
            if which == "f_ij":
                return TWElement(self.local.gDx, _rename_flags(arg.forms, self.disc_rename(i)))
            if which == "g_ij":
                inv = {v: k for k, v in self.disc_rename(i).items()}
                src = _rename_flags(arg.forms, inv)
                return chain.paint(lambda f: src.get(f, {}), model)
            if which == "h_ij":
                return chain.homotopy(arg)
        else:
            if which == "f_ij":
                return sector_part(arg.degree_part(0).value_at(E), Sector.PP)
            if which == "g_ij":
                return constant_element(model, arg)
            if which == "h_ij":
                chain = self.udisc_chain(i, j)
                rename = self.udisc_rename(i, j)
                inv = {v: k for k, v in rename.items()}
                rho = TWElement(self.local.gD, _rename_flags(arg.forms, rename))
                inner = disc_retract(self.local, "h", rho, "generic")
                src = _rename_flags(inner.forms, inv)
                return chain.homotopy(arg) + chain.paint(lambda f: src.get(f, {}), model)
        raise ValueError(f"unknown map {which!r}")

    # -- big-model retract -------------------------------------------------
    def big_P_global(self, omega: Mapping) -> TWElement:
        out = TWElement.zero(self.gG)
        for ij, w in omega.items():
            mm = w.class_part(Sector.MM)
            if not mm.is_zero():
                out = out + TWElement(self.gG, {f: sf_map_coeffs(a, lambda v: self.mm_to_atoms(v, ij)) for f, a in mm.forms.items()})
        return out

    def big_tilde(self, omega: Mapping) -> dict:
        mu = self.big_P_global(omega)
        return {ij: omega[ij] - self.I_big(mu, ij) for ij in self.pairs()}

    def global_retract(self, direction: str, arg):
        """``I``: (mu, f) -> big element; ``P``: big element -> (mu, f); ``h``: big element -> big element."""
        if direction == "I":
            mu, f = arg
            return {
                ij: self.I_big(mu, ij) + constant_element(self.big_models[ij], f.get(ij, {}))
                for ij in self.pairs()
            }
        if direction == "P":
            t = self.big_tilde(arg)
            return self.big_P_global(arg), {
                ij: sector_part(t[ij].degree_part(0).value_at(E), Sector.PP) for ij in self.pairs()
            }
        if direction == "h":
            t = self.big_tilde(arg)
            return {
                ij: homotopy_by_class(t[ij], lambda s, ij=ij: self.sector_chain(ij[0], ij[1], s))
                for ij in self.pairs()
            }
        raise ValueError(f"unknown direction {direction!r}")

    # -- fixed-window helpers ----------------------------------------------
    def atom_monomials(self, blocks=None) -> list:
        A, B = -self.window.w_min, -self.window.z_min
        blocks = blocks if blocks is not None else self.pairs()
        return [(k, l, a, b) for (k, l) in blocks for a in range(1, A + 1) for b in range(1, B + 1)]

    def atom_keys(self, blocks=None) -> list:
        """Coefficient keys of ``g_Global`` whose expansions at their own point fit the window."""
        A, B = -self.window.w_min, -self.window.z_min
        blocks = blocks if blocks is not None else self.pairs()
        return [
            (lie, (k, l, a, b))
            for lie in range(self.L.dim)
            for (k, l) in blocks
            for a in range(1, A + 1)
            for b in range(1, B + 1)
        ]
