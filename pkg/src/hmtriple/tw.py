"""Thom-Whitney elements: compatible polynomial forms valued in ``g (x) coefficients``.

A simplex form is stored as ``{(wedge, exps): {(lie_index, monomial): coeff}}``.  An
element keeps a form for every simplex (missing means zero) so that compatibility
with face pullbacks can be checked directly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .flags import FlagAlgebraAssignment, FlagComplex, flag_str
from .lie import LieStructure
from .linalg import Indexer, nullspace, sparse_rank
from .polyforms import affine_pullback_basis, coord_names, integrate_top, wedge_sign
from .scalars import ExpansionWindow

__all__ = [
    "TWModel",
    "TWElement",
    "validate",
    "tw_d",
    "tw_bracket",
    "pullback",
    "face_images",
    "integrate_to_cochain",
    "cohomology_ranks",
    "scalar_tw_ranks",
]

SForm = dict


# ---------------------------------------------------------------------------
# simplex-form primitives
# ---------------------------------------------------------------------------


def _vadd(acc: dict, vec: Mapping, c=1) -> None:
    for k, v in vec.items():
        x = acc.get(k, 0) + c * v
        if x:
            acc[k] = x
        else:
            acc.pop(k, None)


def sf_add(a: SForm, b: SForm, c=1) -> SForm:
    out = {k: dict(v) for k, v in a.items()}
    for key, vec in b.items():
        acc = out.setdefault(key, {})
        _vadd(acc, vec, c)
        if not acc:
            del out[key]
    return out


def sf_scale(a: SForm, c) -> SForm:
    if c == 0:
        return {}
    return {k: {q: c * v for q, v in vec.items()} for k, vec in a.items()}


def sf_clean(a: SForm) -> SForm:
    out = {}
    for k, vec in a.items():
        v = {q: x for q, x in vec.items() if x != 0}
        if v:
            out[k] = v
    return out


def sf_d(a: SForm) -> SForm:
    out: SForm = {}
    for (wedge, exps), vec in a.items():
        for v, e in enumerate(exps):
            if not e:
                continue
            sign, wd = wedge_sign((v,), wedge)
            if not sign:
                continue
            exps2 = exps[:v] + (e - 1,) + exps[v + 1 :]
            acc = out.setdefault((wd, exps2), {})
            _vadd(acc, vec, sign * e)
            if not acc:
                del out[(wd, exps2)]
    return out


def sf_wedge(a: SForm, b: SForm, mul: Callable) -> SForm:
    out: SForm = {}
    for (w1, e1), v1 in a.items():
        for (w2, e2), v2 in b.items():
            sign, wd = wedge_sign(w1, w2)
            if not sign:
                continue
            key = (wd, tuple(x + y for x, y in zip(e1, e2)))
            acc = out.setdefault(key, {})
            for k1, c1 in v1.items():
                for k2, c2 in v2.items():
                    for k, c in mul(k1, k2).items():
                        x = acc.get(k, 0) + sign * c1 * c2 * c
                        if x:
                            acc[k] = x
                        else:
                            acc.pop(k, None)
            if not acc:
                del out[key]
    return out


def sf_pullback(a: SForm, src_dim: int, tgt_dim: int, images: tuple, with_tau: bool = False) -> SForm:
    out: SForm = {}
    for (wedge, exps), vec in a.items():
        for key, c in affine_pullback_basis(src_dim, tgt_dim, images, with_tau, wedge, exps):
            acc = out.setdefault(key, {})
            _vadd(acc, vec, c)
            if not acc:
                del out[key]
    return out


def sf_tau_integrate(a: SForm) -> SForm:
    """Given ``H*omega = alpha + dtau ^ beta`` in variables (tau, y), return ``int_0^1 beta dtau``."""
    out: SForm = {}
    for (wedge, exps), vec in a.items():
        if not wedge or wedge[0] != 0:
            continue
        wd = tuple(w - 1 for w in wedge[1:])
        key = (wd, exps[1:])
        acc = out.setdefault(key, {})
        _vadd(acc, vec, Fraction(1, exps[0] + 1))
        if not acc:
            del out[key]
    return out


def sf_map_coeffs(a: SForm, fn: Callable[[dict], dict]) -> SForm:
    out = {}
    for key, vec in a.items():
        v = fn(vec)
        v = {k: x for k, x in v.items() if x != 0}
        if v:
            out[key] = v
    return out


def sf_degree(a: SForm, p: int) -> SForm:
    return {k: v for k, v in a.items() if len(k[0]) == p}


def face_images(n: int, i: int) -> tuple:
    """Vertex images of the face map deleting vertex ``i`` of an ``n``-simplex."""
    imgs = []
    for k in range(n):
        src = k if k < i else k + 1
        imgs.append(tuple((1 if j == src else 0, 0) for j in range(n + 1)))
    return tuple(imgs)


def vertex_map_images(src: tuple, tgt: tuple, vmap: Callable) -> tuple:
    """Images for the affine map ``src -> tgt`` sending each vertex ``v`` to ``vmap(v)``."""
    pos = {p: k for k, p in enumerate(tgt)}
    return tuple(
        tuple((1 if j == pos[vmap(v)] else 0, 0) for j in range(len(tgt))) for v in src
    )


def sf_eval_vertex(a: SForm) -> dict:
    """Value of a 0-simplex form."""
    return dict(a.get(((), ()), {}))


# ---------------------------------------------------------------------------
# models and elements
# ---------------------------------------------------------------------------


class TWModel:
    """``Th(g (x) A)`` for an assignment ``A`` and Lie structure ``g``."""

    def __init__(self, assignment: FlagAlgebraAssignment, lie: LieStructure, name: str = ""):
        self.assignment = assignment
        self.lie = lie
        self.complex: FlagComplex = assignment.complex
        self.algebra = assignment.algebra
        self.name = name or assignment.family
        self._mul: dict = {}
        self._cofaces = {s: self.complex.cofaces(s) for s in self.complex.all_simplices()}
        self._maximal = self.complex.maximal_simplices()

    def coeff_mul(self, k1, k2) -> dict:
        key = (k1, k2)
        out = self._mul.get(key)
        if out is None:
            (a, m), (b, n) = k1, k2
            out = {}
            br = self.lie.bracket_basis(a, b)
            if br:
                for mono, c in self.algebra.mul(m, n).items():
                    for lie_c, v in br.items():
                        k = (lie_c, mono)
                        out[k] = out.get(k, 0) + c * v
                out = {k: v for k, v in out.items() if v != 0}
            self._mul[key] = out
        return out

    def class_of(self, ckey):
        return self.algebra.class_of(ckey[1])

    def __repr__(self) -> str:
        return f"TWModel({self.name})"


class TWElement:
    __slots__ = ("model", "forms")

    def __init__(self, model: TWModel, forms: Mapping[tuple, SForm] | None = None):
        self.model = model
        self.forms: dict[tuple, SForm] = {}
        for f, a in (forms or {}).items():
            a = sf_clean(a)
            if a:
                self.forms[tuple(f)] = a

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, model: TWModel) -> "TWElement":
        return cls(model)

    @classmethod
    def from_top(cls, model: TWModel, top: Mapping[tuple, SForm]) -> "TWElement":
        """Fill in every simplex by pulling back from the given maximal-simplex forms."""
        forms: dict[tuple, SForm] = {tuple(k): v for k, v in top.items()}
        cx = model.complex
        for n in (1, 0):
            for f in cx.simplices[n]:
                if f in forms:
                    continue
                for F, i in model._cofaces[f]:
                    if F in forms:
                        forms[f] = sf_pullback(forms[F], n, n + 1, face_images(n + 1, i))
                        break
        return cls(model, forms)

    @classmethod
    def constant(cls, model: TWModel, vec: Mapping) -> "TWElement":
        top = {}
        for F in model._maximal:
            top[F] = {((), (0,) * (len(F) - 1)): dict(vec)} if vec else {}
        return cls.from_top(model, top)

    # algebra ----------------------------------------------------------------
    def _check(self, other: "TWElement") -> None:
        if other.model is not self.model:
            raise ValueError("elements belong to different models")

    def __add__(self, other: "TWElement") -> "TWElement":
        self._check(other)
        forms = dict(self.forms)
        for f, a in other.forms.items():
            forms[f] = sf_add(forms[f], a) if f in forms else a
        return TWElement(self.model, forms)

    def __neg__(self) -> "TWElement":
        return self.scale(-1)

    def __sub__(self, other: "TWElement") -> "TWElement":
        self._check(other)
        forms = dict(self.forms)
        for f, a in other.forms.items():
            forms[f] = sf_add(forms[f], a, -1) if f in forms else sf_scale(a, -1)
        return TWElement(self.model, forms)

    def scale(self, c) -> "TWElement":
        c = Fraction(c)
        return TWElement(self.model, {f: sf_scale(a, c) for f, a in self.forms.items()})

    def is_zero(self) -> bool:
        return not self.forms

    def __eq__(self, other) -> bool:
        if not isinstance(other, TWElement):
            return NotImplemented
        return self.model is other.model and self.forms == other.forms

    def __hash__(self):
        return id(self)

    def form(self, flag) -> SForm:
        return self.forms.get(tuple(flag), {})

    def degree_part(self, p: int) -> "TWElement":
        return TWElement(self.model, {f: sf_degree(a, p) for f, a in self.forms.items()})

    def degrees(self) -> set[int]:
        return {len(k[0]) for a in self.forms.values() for k in a}

    def map_coeffs(self, fn: Callable[[dict], dict], model: TWModel | None = None) -> "TWElement":
        return TWElement(model or self.model, {f: sf_map_coeffs(a, fn) for f, a in self.forms.items()})

    def filter_coeffs(self, keep: Callable) -> "TWElement":
        return self.map_coeffs(lambda v: {k: x for k, x in v.items() if keep(k)})

    def class_part(self, cls) -> "TWElement":
        m = self.model
        return self.filter_coeffs(lambda k: m.class_of(k) == cls)

    def classes(self) -> set:
        m = self.model
        return {m.class_of(k) for a in self.forms.values() for v in a.values() for k in v}

    def truncated(self, window: ExpansionWindow) -> "TWElement":
        """Keep Laurent coefficients with exponents inside ``window``."""
        return self.filter_coeffs(lambda k: window.contains(k[1]))

    def below_top(self, window: ExpansionWindow) -> "TWElement":
        return self.filter_coeffs(lambda k: window.below_top(k[1]))

    def value_at(self, point) -> dict:
        return sf_eval_vertex(self.form((point,)))

    def max_poly_degree(self) -> int:
        return max((sum(k[1]) for a in self.forms.values() for k in a), default=0)

    def d(self) -> "TWElement":
        return tw_d(self)

    def bracket(self, other: "TWElement") -> "TWElement":
        return tw_bracket(self, other)

    def __repr__(self) -> str:
        return describe(self)


def describe(el: TWElement, limit: int = 12) -> str:
    """Compact human-readable rendering (used in counterexample payloads)."""
    lie_names = el.model.lie.names
    parts = []
    for f in sorted(el.forms, key=lambda s: (len(s), s)):
        names = coord_names(len(f) - 1)
        for (wedge, exps), vec in sorted(el.forms[f].items()):
            mon = "*".join(f"{names[v]}^{e}" if e > 1 else names[v] for v, e in enumerate(exps) if e)
            dif = "^".join("d" + names[w] for w in wedge)
            for (a, m), c in sorted(vec.items(), key=str):
                parts.append(f"{flag_str(f)}: {c}*{lie_names[a]}{m}{'*' + mon if mon else ''}{' ' + dif if dif else ''}")
    if len(parts) > limit:
        parts = parts[:limit] + [f"... ({len(parts) - limit} more terms)"]
    return "TWElement[" + "; ".join(parts) + "]" if parts else "TWElement[0]"


def validate(el: TWElement, verbose: bool = False):
    """Return ``(ok, diagnostics)`` for compatibility and boundary conditions."""
    model = el.model
    cx = model.complex
    asg = model.assignment
    diags = []
    for f in el.forms:
        if f not in cx:
            diags.append(f"form stored on {flag_str(f)} which is not a simplex")
    for n in (0, 1, 2):
        for f in cx.simplices[n]:
            lab = asg.label_of(f)
            a = el.form(f)
            for key, vec in a.items():
                if len(key[0]) > n or (n == 0 and key[1] != ()) or (n > 0 and len(key[1]) != n):
                    diags.append(f"malformed term {key} on {flag_str(f)}")
                for (lie_idx, mono) in vec:
                    if not lab.allows(mono):
                        diags.append(f"boundary condition: monomial {mono} not allowed on {flag_str(f)} (label {lab})")
                        break
            for F, i in model._cofaces[f]:
                pulled = sf_pullback(el.form(F), n, n + 1, face_images(n + 1, i))
                if sf_clean(pulled) != sf_clean(a):
                    diags.append(f"compatibility: pullback of {flag_str(F)} to face {i} differs from {flag_str(f)}")
        if diags and not verbose:
            break
    return (not diags), diags


def tw_d(el: TWElement) -> TWElement:
    return TWElement(el.model, {f: sf_d(a) for f, a in el.forms.items()})


def tw_bracket(x: TWElement, y: TWElement, L: LieStructure | None = None) -> TWElement:
    x._check(y)
    if L is not None and L is not x.model.lie:
        raise ValueError("Lie structure mismatch")
    mul = x.model.coeff_mul
    out = {}
    for f, a in x.forms.items():
        b = y.forms.get(f)
        if b:
            out[f] = sf_wedge(a, b, mul)
    return TWElement(x.model, out)


def pullback(form: SForm, big_dim: int, face_index: int) -> SForm:
    """Pull a form on a ``big_dim``-simplex back along the face map deleting ``face_index``."""
    return sf_clean(sf_pullback(form, big_dim - 1, big_dim, face_images(big_dim, face_index)))


def integrate_to_cochain(el: TWElement) -> dict[int, dict[tuple, dict]]:
    """Degree-``n`` part integrated over each ``n``-simplex: ``{n: {flag: vector}}``."""
    out: dict[int, dict[tuple, dict]] = {0: {}, 1: {}, 2: {}}
    for f, a in el.forms.items():
        n = len(f) - 1
        acc: dict = {}
        for (wedge, exps), vec in a.items():
            if len(wedge) != n:
                continue
            _vadd(acc, vec, integrate_top(n, exps))
        if acc:
            out[n][f] = acc
    return out


# ---------------------------------------------------------------------------
# cohomology of the windowed complex
# ---------------------------------------------------------------------------


def _scalar_coords(cx: FlagComplex, p: int, cap: int, skip: frozenset) -> list:
    """Coordinates ``(flag, wedge, exps)`` of scalar p-forms with coefficient degree <= cap - p."""
    from itertools import combinations, product

    coords = []
    for n in range(p, 3):
        for f in cx.simplices[n]:
            if f in skip:
                continue
            for wedge in combinations(range(n), p):
                for exps in product(range(cap - p + 1), repeat=n):
                    if sum(exps) <= cap - p:
                        coords.append((f, wedge, exps))
    return coords


def scalar_tw_ranks(cx: FlagComplex, forbidden: frozenset, cap: int = 2) -> list[int]:
    """Cohomology ranks of scalar polynomial forms on ``cx`` vanishing on chains of ``forbidden``.

    0-forms have coefficient degree <= cap, 1-forms <= cap-1, 2-forms <= cap-2; this
    filtration is a subcomplex with the same cohomology once ``cap >= 2``.
    """
    zero_flags = frozenset(f for f in cx.all_simplices() if all(q in forbidden for q in f))
    bases = []
    indexers = []
    for p in range(3):
        coords = _scalar_coords(cx, p, cap, zero_flags)
        idx = Indexer(coords)
        rows = []
        for n in range(max(p, 1), 3):
            for F in cx.simplices[n]:
                for i in range(n + 1):
                    f = cx.face(F, i)
                    if n - 1 < p:
                        continue
                    # pullback of F coordinates minus f coordinates, grouped by f-coordinate
                    acc: dict = {}
                    for (g, wedge, exps) in coords:
                        if g != F:
                            continue
                        for (key, c) in affine_pullback_basis(n - 1, n, face_images(n, i), False, wedge, exps):
                            acc.setdefault(key, {})[idx((F, wedge, exps))] = acc.setdefault(key, {}).get(idx((F, wedge, exps)), 0) + c
                    if f not in zero_flags:
                        for (g, wedge, exps) in coords:
                            if g == f:
                                acc.setdefault((wedge, exps), {})
                                col = idx((f, wedge, exps))
                                acc[(wedge, exps)][col] = acc[(wedge, exps)].get(col, 0) - 1
                    rows.extend(r for r in acc.values() if any(v != 0 for v in r.values()))
        basis = nullspace(rows, len(idx)) if len(idx) else []
        bases.append(basis)
        indexers.append((coords, idx))
    # differential matrices, expressed in ambient coordinates
    ranks_d = []
    for p in range(3):
        coords, idx = indexers[p]
        if p == 2 or not bases[p]:
            ranks_d.append(0)
            continue
        _, idx_next = indexers[p + 1]
        rows = []
        for vec in bases[p]:
            row: dict = {}
            for col, c in vec.items():
                f, wedge, exps = coords[col]
                for v, e in enumerate(exps):
                    if not e:
                        continue
                    sign, wd = wedge_sign((v,), wedge)
                    if not sign:
                        continue
                    exps2 = exps[:v] + (e - 1,) + exps[v + 1 :]
                    k = idx_next((f, wd, exps2))
                    row[k] = row.get(k, 0) + sign * e * c
            rows.append(row)
        ranks_d.append(sparse_rank(rows, len(idx_next)))
    dims = [len(b) for b in bases]
    return [dims[p] - ranks_d[p] - (ranks_d[p - 1] if p else 0) for p in range(3)]


def cohomology_ranks(
    assignment: FlagAlgebraAssignment,
    window: ExpansionWindow | None,
    L: LieStructure,
    cap: int = 2,
    share_blocks: bool = True,
    coefficient_keys: Iterable | None = None,
) -> list[tuple[int, int]]:
    """Exact ranks of H^0, H^1, H^2 of the windowed Thom-Whitney complex.

    The complex splits into one block per (basis vector, coefficient); each block is
    the scalar form complex relative to the points whose label forbids the
    coefficient.  Laurent models take their coefficients from ``window``; pole
    models need explicit ``coefficient_keys``.  Identical blocks are reduced once.
    """
    if coefficient_keys is None:
        if assignment.algebra.kind != "laurent" or window is None:
            raise ValueError("pass coefficient_keys for non-Laurent models")
        coefficient_keys = window.monomials()
    totals = [0, 0, 0]
    cache: dict = {}
    for mono in coefficient_keys:
        cls = assignment.algebra.class_of(mono)
        forbidden = assignment.forbidden_points(cls)
        if share_blocks and forbidden in cache:
            r = cache[forbidden]
        else:
            r = cache[forbidden] = scalar_tw_ranks(assignment.complex, forbidden, cap)
        for p in range(3):
            totals[p] += L.dim * r[p]
    return [(p, totals[p]) for p in range(3)]
