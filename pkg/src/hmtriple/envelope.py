"""Triangular decomposition at desk scale: the complement, the Sym homotopy, PBW straightening.

The windowed local model ``V_D`` keeps 0-forms of polynomial degree ``<= D`` and
1-forms of degree ``<= D - 1`` on each edge; it is closed under ``d``, ``h``, ``I``
and ``P``.  It splits as ``g_- (+) g_perp (+) g_+`` with ``g_perp = (id - I P) V_D``.

PBW straightening needs a bracket that closes on a finite basis, which a windowed
current algebra does not; :class:`GradedLie` carries a finite-dimensional graded
(optionally differential) Lie algebra with a block order for the rewriting.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .lie import LieStructure, builtin_sl2
from .linalg import Indexer, solve_in_span, sparse_rank
from .local import (
    LocalTripleContext,
    _edge_element,
    local_I,
    local_P,
    local_h,
)
from .scalars import Sector, sector_of
from .tw import TWElement

__all__ = [
    "Letter",
    "PerpBasis",
    "gdx_letters",
    "g_perp_basis",
    "SymElement",
    "sym_d",
    "sym_homotopy",
    "sym_derivation",
    "GradedLie",
    "TensorWord",
    "pbw_straighten",
    "ordered_monomial_count",
    "tensor_quotient_dim",
    "sl2_graded",
    "sl2_dual_numbers",
    "sl2_truncated_forms",
    "TriangularElement",
    "triangular_homotopy",
]


# ---------------------------------------------------------------------------
# the windowed local model and its complement
# ---------------------------------------------------------------------------


@dataclass
class Letter:
    label: str
    degree: int
    block: str  # "-", "0" or "+"
    element: TWElement
    key: tuple


def _flatten(el: TWElement) -> dict:
    return {(f, k, c): v for f, a in el.forms.items() for k, vec in a.items() for c, v in vec.items()}


def _raw_basis(ctx: LocalTripleContext, key, D: int) -> list[tuple[str, int, TWElement]]:
    """Basis of the ``key`` component of ``V_D``: hats, bubbles and edge 1-forms."""
    m = ctx.gDx
    sec = sector_of(key[1])
    one = {key: Fraction(1)}
    out = []
    if sec in (Sector.PP, Sector.PM):
        out.append(("hatW", 0, _edge_element(m, {0: one, 1: {key: Fraction(-1)}}, {})))
    if sec in (Sector.PP, Sector.MP):
        out.append(("hatZ", 0, _edge_element(m, {}, {0: one, 1: {key: Fraction(-1)}})))
    out.append(("hatE", 0, _edge_element(m, {1: one}, {1: one})))
    for k in range(D - 1):
        bub = {k + 1: one, k + 2: {key: Fraction(-1)}}
        out.append((f"bubW{k}", 0, _edge_element(m, bub, {})))
        out.append((f"bubZ{k}", 0, _edge_element(m, {}, bub)))
    for k in range(D):
        out.append((f"dsW{k}", 1, _edge_element(m, {}, {}, {k: one}, {})))
        out.append((f"dsZ{k}", 1, _edge_element(m, {}, {}, {}, {k: one})))
    return out


def _independent(cands: list, coords) -> list:
    idx = Indexer()
    rows: list = []
    keep = []
    r = 0
    for c in cands:
        row = idx.row(coords(c))
        if not row:
            continue
        if sparse_rank(rows + [row]) > r:
            rows.append(row)
            keep.append(c)
            r += 1
    return keep


def _ip(ctx, el):
    p, q = local_P(ctx, el)
    return local_I(ctx, p, q)


def gdx_letters(ctx: LocalTripleContext, D: int = 2) -> list[Letter]:
    """Ordered basis of ``V_D``: the ``g_-`` letters, then ``g_perp``, then the constants of ``g_+``."""
    minus, perp, plus = [], [], []
    lie_names = ctx.L.names
    for key in ctx.keys():
        sec = sector_of(key[1])
        name = f"{lie_names[key[0]]}{key[1]}"
        raw = _raw_basis(ctx, key, D)
        if sec == Sector.MM:
            minus += [Letter(f"{name}:{lab}", deg, "-", el, key) for lab, deg, el in raw]
            continue
        imgs = [(lab, deg, el - _ip(ctx, el)) for lab, deg, el in raw]
        for lab, deg, el in _independent(imgs, lambda c: _flatten(c[2])):
            perp.append(Letter(f"{name}:{lab}", deg, "0", el, key))
        if sec == Sector.PP:
            plus.append(Letter(f"{name}:const", 0, "+", TWElement.constant(ctx.gDx, {key: Fraction(1)}), key))
    return minus + perp + plus


@dataclass
class PerpBasis:
    letters: list[Letter]
    d_matrix: list[dict]  # d(b_k) = sum_j c_j b_j
    h_matrix: list[dict]

    @property
    def degrees(self) -> list[int]:
        return [l.degree for l in self.letters]

    def __len__(self) -> int:
        return len(self.letters)


def g_perp_basis(ctx: LocalTripleContext, D: int = 2) -> PerpBasis:
    """Basis of ``(id - I P) V_D`` with the matrices of ``d`` and ``h`` in it."""
    letters = [l for l in gdx_letters(ctx, D) if l.block == "0"]
    by_key: dict = {}
    for n, l in enumerate(letters):
        by_key.setdefault(l.key, []).append(n)
    dm, hm = [], []
    for l in letters:
        cols = by_key[l.key]
        columns = [_flatten(letters[c].element) for c in cols]
        for op, acc in ((lambda e: e.d(), dm), (lambda e: local_h(ctx, e), hm)):
            target = _flatten(op(l.element))
            sol = solve_in_span(columns, target) if target else [0] * len(cols)
            if sol is None:
                raise ArithmeticError(f"image of {l.label} leaves the complement")
            acc.append({cols[k]: v for k, v in enumerate(sol) if v})
    return PerpBasis(letters, dm, hm)


# ---------------------------------------------------------------------------
# graded symmetric algebra
# ---------------------------------------------------------------------------


def _sort_with_sign(letters: Sequence[int], degrees: Sequence[int]):
    """Sort a graded-commutative monomial; ``(0, None)`` if an odd letter repeats."""
    seq = list(letters)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            a, b = seq[j], seq[j + 1]
            if a > b:
                seq[j], seq[j + 1] = b, a
                if degrees[a] % 2 and degrees[b] % 2:
                    sign = -sign
    for a, b in zip(seq, seq[1:]):
        if a == b and degrees[a] % 2:
            return 0, None
    return sign, tuple(seq)


@dataclass
class SymElement:
    """Combination of sorted monomials in the letters of a graded basis."""

    degrees: tuple
    terms: dict = field(default_factory=dict)

    @classmethod
    def monomial(cls, degrees, letters: Sequence[int], c=1) -> "SymElement":
        sign, mono = _sort_with_sign(letters, degrees)
        return cls(tuple(degrees), {mono: Fraction(sign * c)} if sign else {})

    def add_term(self, letters, c) -> None:
        sign, mono = _sort_with_sign(letters, self.degrees)
        if not sign or not c:
            return
        v = self.terms.get(mono, 0) + sign * c
        if v:
            self.terms[mono] = v
        else:
            self.terms.pop(mono, None)

    def __add__(self, other: "SymElement") -> "SymElement":
        out = SymElement(self.degrees, dict(self.terms))
        for m, c in other.terms.items():
            out.add_term(m, c)
        return out

    def __sub__(self, other: "SymElement") -> "SymElement":
        return self + other.scale(-1)

    def scale(self, c) -> "SymElement":
        return SymElement(self.degrees, {m: c * v for m, v in self.terms.items() if c * v})

    def is_zero(self) -> bool:
        return not self.terms

    def max_length(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, SymElement) and self.terms == other.terms


def sym_derivation(el: SymElement, matrix: Sequence[Mapping[int, Fraction]], odd: bool) -> SymElement:
    """Extend a linear map on letters as a (graded, if ``odd``) derivation."""
    out = SymElement(el.degrees)
    deg = el.degrees
    for mono, c in el.terms.items():
        sign = 1
        for pos, x in enumerate(mono):
            for y, v in matrix[x].items():
                out.add_term(mono[:pos] + (y,) + mono[pos + 1 :], sign * c * v)
            if odd and deg[x] % 2:
                sign = -sign
    return out


def sym_d(el: SymElement, basis: PerpBasis) -> SymElement:
    return sym_derivation(el, basis.d_matrix, True)


def sym_homotopy(el: SymElement, basis: PerpBasis, max_degree: int = 3) -> SymElement:
    """``(1/n) h`` on ``Sym^n``, with ``h`` extended as a derivation; zero on ``Sym^0``."""
    if el.max_length() > max_degree:
        raise OverflowError(f"symmetric degree above {max_degree}")
    out = SymElement(el.degrees)
    for mono, c in el.terms.items():
        if not mono:
            continue
        part = sym_derivation(SymElement(el.degrees, {mono: c}), basis.h_matrix, True)
        out = out + part.scale(Fraction(1, len(mono)))
    return out


@dataclass
class TriangularElement:
    """Combination of ``(minus word, Sym monomial, plus word)`` triples."""

    terms: dict = field(default_factory=dict)

    def add(self, minus: tuple, mono: tuple, plus: tuple, c) -> None:
        k = (minus, mono, plus)
        v = self.terms.get(k, 0) + c
        if v:
            self.terms[k] = v
        else:
            self.terms.pop(k, None)

    def scale(self, c) -> "TriangularElement":
        return TriangularElement({k: c * v for k, v in self.terms.items() if c * v})

    def left_mul(self, letter: int) -> "TriangularElement":
        """Multiply by a negative-block letter on the left."""
        return TriangularElement({((letter,) + m, s, p): c for (m, s, p), c in self.terms.items()})

    def right_mul(self, letter: int) -> "TriangularElement":
        """Multiply by a positive-block letter on the right."""
        return TriangularElement({(m, s, p + (letter,)): c for (m, s, p), c in self.terms.items()})


def triangular_homotopy(
    el: TriangularElement, basis: PerpBasis, outer_degrees: Sequence[int], max_degree: int = 3
) -> TriangularElement:
    """``id (x) h~ (x) id`` with the Koszul sign of passing the left word."""
    out = TriangularElement()
    degs = tuple(basis.degrees)
    for (mw, mono, pw), c in el.terms.items():
        sign = (-1) ** sum(outer_degrees[a] for a in mw)
        h = sym_homotopy(SymElement(degs, {mono: Fraction(c)}), basis, max_degree)
        for m2, v in h.terms.items():
            out.add(mw, m2, pw, sign * v)
    return out


# ---------------------------------------------------------------------------
# finite graded Lie algebras and PBW straightening
# ---------------------------------------------------------------------------


@dataclass
class GradedLie:
    """Basis letters with degrees, block labels, bracket table and an optional differential."""

    names: tuple
    degrees: tuple
    blocks: tuple  # "-", "0", "+"
    bracket: Mapping  # (a, b) -> {c: coeff}
    differential: Mapping = field(default_factory=dict)  # a -> {c: coeff}

    @property
    def dim(self) -> int:
        return len(self.names)

    def order_key(self, a: int):
        return ("-0+".index(self.blocks[a]), a)

    def br(self, a: int, b: int) -> dict:
        return dict(self.bracket.get((a, b), {}))

    def verify(self) -> list[str]:
        """Graded antisymmetry, graded Jacobi, and (if present) d^2 = 0 with Leibniz."""
        n, deg = self.dim, self.degrees
        problems = []

        def brv(x: dict, y: dict) -> dict:
            out: dict = {}
            for a, u in x.items():
                for b, v in y.items():
                    for c, w in self.br(a, b).items():
                        out[c] = out.get(c, 0) + u * v * w
            return {c: v for c, v in out.items() if v}

        def dv(x: dict) -> dict:
            out: dict = {}
            for a, u in x.items():
                for c, w in self.differential.get(a, {}).items():
                    out[c] = out.get(c, 0) + u * w
            return {c: v for c, v in out.items() if v}

        for a, b in product(range(n), repeat=2):
            s = (-1) ** (deg[a] * deg[b] + 1)
            if self.br(a, b) != {c: s * v for c, v in self.br(b, a).items()}:
                problems.append(f"antisymmetry fails on ({self.names[a]},{self.names[b]})")
            if self.br(a, b) and any(deg[c] != deg[a] + deg[b] for c in self.br(a, b)):
                problems.append(f"bracket not graded on ({self.names[a]},{self.names[b]})")
        for a, b, c in product(range(n), repeat=3):
            x, y, z = {a: 1}, {b: 1}, {c: 1}
            lhs = brv(x, brv(y, z))
            r1 = brv(brv(x, y), z)
            r2 = brv(y, brv(x, z))
            s = (-1) ** (deg[a] * deg[b])
            tot = dict(lhs)
            for k, v in r1.items():
                tot[k] = tot.get(k, 0) - v
            for k, v in r2.items():
                tot[k] = tot.get(k, 0) - s * v
            if any(tot.values()):
                problems.append(f"Jacobi fails on ({self.names[a]},{self.names[b]},{self.names[c]})")
        if self.differential:
            for a in range(n):
                if dv(dv({a: 1})):
                    problems.append(f"d^2 != 0 on {self.names[a]}")
            for a, b in product(range(n), repeat=2):
                lhs = dv(brv({a: 1}, {b: 1}))
                rhs = brv(dv({a: 1}), {b: 1})
                for k, v in brv({a: 1}, dv({b: 1})).items():
                    rhs[k] = rhs.get(k, 0) + (-1) ** deg[a] * v
                if {k: v for k, v in rhs.items() if v} != lhs:
                    problems.append(f"Leibniz fails on ({self.names[a]},{self.names[b]})")
        return problems


def _from_lie(L: LieStructure, blocks: Sequence[str]) -> GradedLie:
    return GradedLie(tuple(L.names), (0,) * L.dim, tuple(blocks), {k: dict(v) for k, v in L.bracket_constants.items()})


def sl2_graded() -> GradedLie:
    """``sl2`` with ``f`` negative, ``h`` in the middle and ``e`` positive."""
    return _from_lie(builtin_sl2(), ("+", "0", "-"))


def _tensor_cdga(L: LieStructure, alg_names, alg_degrees, alg_mul, alg_d, blocks_of) -> GradedLie:
    names, degrees, blocks = [], [], []
    index = {}
    for a in range(L.dim):
        for u, (un, ud) in enumerate(zip(alg_names, alg_degrees)):
            index[(a, u)] = len(names)
            names.append(f"{L.names[a]}{un}")
            degrees.append(ud)
            blocks.append(blocks_of(a, u))
    br: dict = {}
    for (a, u), x in index.items():
        for (b, v), y in index.items():
            prod_uv = alg_mul.get((u, v), {})
            out: dict = {}
            for c, w in L.bracket_basis(a, b).items():
                for t, m in prod_uv.items():
                    out[index[(c, t)]] = out.get(index[(c, t)], 0) + w * m
            out = {k: Fraction(v) for k, v in out.items() if v}
            if out:
                # [a (x) u, b (x) v] = (-1)^{|u||b|}[a,b] (x) uv, with |b| = 0 here
                br[(x, y)] = out
    dmap: dict = {}
    for (a, u), x in index.items():
        out = {index[(a, t)]: Fraction(m) for t, m in alg_d.get(u, {}).items() if m}
        if out:
            dmap[x] = out
    return GradedLie(tuple(names), tuple(degrees), tuple(blocks), br, dmap)


def sl2_dual_numbers() -> GradedLie:
    """``sl2 (x) Lambda[eps]`` with ``eps`` odd of degree 1; graded, zero differential."""
    L = builtin_sl2()
    mul = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}
    side = ("+", "0", "-")
    return _tensor_cdga(L, ("", "eps"), (0, 1), mul, {}, lambda a, u: side[a])


def sl2_truncated_forms() -> GradedLie:
    """``sl2 (x) A`` with ``A = span(1, t, dt)``, ``t^2 = t dt = 0``, ``d t = dt``: a dg Lie algebra."""
    L = builtin_sl2()
    mul = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}
    side = ("+", "0", "-")
    return _tensor_cdga(L, ("", "t", "dt"), (0, 0, 1), mul, {1: {2: 1}}, lambda a, u: side[a])


@dataclass
class TensorWord:
    """Combination of words in the letters of a :class:`GradedLie`."""

    terms: dict = field(default_factory=dict)

    @classmethod
    def word(cls, letters: Sequence[int], c=1) -> "TensorWord":
        return cls({tuple(letters): Fraction(c)})

    def add(self, w: tuple, c) -> None:
        v = self.terms.get(w, 0) + c
        if v:
            self.terms[w] = v
        else:
            self.terms.pop(w, None)

    def __add__(self, other: "TensorWord") -> "TensorWord":
        out = TensorWord(dict(self.terms))
        for w, c in other.terms.items():
            out.add(w, c)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorWord) and self.terms == other.terms

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)


def _is_ordered(word: tuple, g: GradedLie) -> bool:
    for a, b in zip(word, word[1:]):
        ka, kb = g.order_key(a), g.order_key(b)
        if ka > kb or (a == b and g.degrees[a] % 2):
            return False
    return True


def _rewrite_at(word: tuple, pos: int, g: GradedLie) -> list[tuple[tuple, Fraction]]:
    """One rewrite of the adjacent pair at ``pos``: swap (Koszul sign) plus the bracket."""
    x, y = word[pos], word[pos + 1]
    pre, post = word[:pos], word[pos + 2 :]
    out = []
    if x == y:
        # odd x: x x = 1/2 [x, x]
        for c, v in g.br(x, x).items():
            out.append((pre + (c,) + post, Fraction(v) / 2))
        return out
    sign = (-1) ** (g.degrees[x] * g.degrees[y])
    out.append((pre + (y, x) + post, Fraction(sign)))
    for c, v in g.br(x, y).items():
        out.append((pre + (c,) + post, Fraction(v)))
    return out


def _bad_positions(word: tuple, g: GradedLie) -> list[int]:
    out = []
    for p, (a, b) in enumerate(zip(word, word[1:])):
        if g.order_key(a) > g.order_key(b) or (a == b and g.degrees[a] % 2):
            out.append(p)
    return out


def pbw_straighten(word: TensorWord, g: GradedLie, max_degree: int = 3, rng: random.Random | None = None) -> TensorWord:
    """Rewrite into ordered words (negative, middle, positive letters).

    With ``rng`` the rewrite position is chosen at random, which is how the
    confluence check explores different rewrite orders.
    """
    if word.max_length() > max_degree:
        raise OverflowError(f"word length above {max_degree}")
    pending = dict(word.terms)
    done = TensorWord()
    steps = 0
    while pending:
        w, c = pending.popitem()
        bad = _bad_positions(w, g)
        if not bad:
            done.add(w, c)
            continue
        pos = rng.choice(bad) if rng is not None else bad[0]
        for w2, v in _rewrite_at(w, pos, g):
            nv = pending.get(w2, 0) + c * v
            if nv:
                pending[w2] = nv
            else:
                pending.pop(w2, None)
        steps += 1
        if steps > 100000:
            raise RuntimeError("straightening did not terminate")
    return done


def word_d(word: TensorWord, g: GradedLie) -> TensorWord:
    """The differential extended to words as a graded derivation."""
    out = TensorWord()
    for w, c in word.terms.items():
        sign = 1
        for pos, x in enumerate(w):
            for y, v in g.differential.get(x, {}).items():
                out.add(w[:pos] + (y,) + w[pos + 1 :], sign * c * v)
            if g.degrees[x] % 2:
                sign = -sign
    return out


def ordered_monomial_count(g: GradedLie, length: int) -> int:
    """Number of ordered words of the given length (odd letters not repeated)."""
    order = sorted(range(g.dim), key=g.order_key)
    count = 0

    def rec(start: int, left: int) -> None:
        nonlocal count
        if left == 0:
            count += 1
            return
        for k in range(start, len(order)):
            a = order[k]
            rec(k + 1 if g.degrees[a] % 2 else k, left - 1)

    rec(0, length)
    return count


def tensor_quotient_dim(g: GradedLie, max_len: int) -> int:
    """``dim`` of words of length ``<= max_len`` modulo the ideal ``x y - (-1)^{|x||y|} y x - [x, y]``.

    The ideal part is spanned by ``u r v`` with total length ``<= max_len``; the rank
    is exact.
    """
    idx = Indexer()
    words = [()]
    for n in range(1, max_len + 1):
        words += list(product(range(g.dim), repeat=n))
    for w in words:
        idx(w)
    rows = []
    for x in range(g.dim):
        for y in range(g.dim):
            rel = {(x, y): Fraction(1)}
            s = (-1) ** (g.degrees[x] * g.degrees[y])
            rel[(y, x)] = rel.get((y, x), 0) - s
            for c, v in g.br(x, y).items():
                rel[(c,)] = rel.get((c,), 0) - v
            rel = {k: v for k, v in rel.items() if v}
            if not rel:
                continue
            for lu in range(max_len - 1):
                for lv in range(max_len - 1 - lu):
                    for u in product(range(g.dim), repeat=lu):
                        for v in product(range(g.dim), repeat=lv):
                            rows.append({idx(u + k + v): c for k, c in rel.items()})
    return len(idx) - sparse_rank(rows, len(idx))
