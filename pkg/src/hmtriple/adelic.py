"""Finite adelic (cosimplicial product) complexes and their exact cohomology."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .flags import CosimplicialProduct, FlagAlgebraAssignment, cosimplicial_product
from .lie import LieStructure
from .linalg import sparse_rank
from .scalars import ExpansionWindow
from .tw import TWElement, integrate_to_cochain

__all__ = [
    "AdelicComplex",
    "build_adelic",
    "adelic_cohomology",
    "relative_cochain_ranks",
    "integration_defect",
]


@dataclass
class AdelicComplex:
    """Level ``n`` is the product of labelled spaces over ``n``-flags, in the given window."""

    assignment: FlagAlgebraAssignment
    product: CosimplicialProduct
    keys: tuple

    def level_keys(self, n: int) -> list[tuple[tuple, object]]:
        """Available coordinates ``(flag, monomial)`` at level ``n``."""
        return [
            (f, m)
            for f, lab in self.product.level(n)
            for m in self.keys
            if lab.allows(m)
        ]

    def d(self, n: int, c: Mapping[tuple, Mapping]) -> dict:
        return self.product.differential(n, c)


def build_adelic(assignment: FlagAlgebraAssignment, window: ExpansionWindow | None = None, keys: Iterable | None = None) -> AdelicComplex:
    if keys is None:
        if window is None:
            raise ValueError("pass a window or explicit coefficient keys")
        keys = window.monomials()
    return AdelicComplex(assignment, cosimplicial_product(assignment), tuple(keys))


def relative_cochain_ranks(assignment: FlagAlgebraAssignment, forbidden: frozenset) -> list[int]:
    """Ranks of simplicial cochains on the flags that are not inside ``forbidden``."""
    cx = assignment.complex
    live = [
        [f for f in cx.simplices[n] if not all(p in forbidden for p in f)]
        for n in range(3)
    ]
    pos = [{f: k for k, f in enumerate(level)} for level in live]
    ranks = []
    for n in range(2):
        rows = []
        for F in live[n + 1]:
            row: dict = {}
            for i in range(n + 2):
                f = cx.face(F, i)
                if f in pos[n]:
                    row[pos[n][f]] = row.get(pos[n][f], 0) + (-1) ** i
            row = {k: v for k, v in row.items() if v}
            if row:
                rows.append(row)
        ranks.append(sparse_rank(rows, len(live[n])) if rows else 0)
    dims = [len(level) for level in live]
    return [
        dims[0] - ranks[0],
        dims[1] - ranks[0] - ranks[1],
        dims[2] - ranks[1],
    ]


def adelic_cohomology(complex_: AdelicComplex, L: LieStructure) -> list[tuple[int, int]]:
    """Exact ranks of ``H^0, H^1, H^2``; the complex splits into one block per coefficient."""
    asg = complex_.assignment
    totals = [0, 0, 0]
    cache: dict = {}
    for m in complex_.keys:
        forbidden = asg.forbidden_points(asg.algebra.class_of(m))
        if forbidden not in cache:
            cache[forbidden] = relative_cochain_ranks(asg, forbidden)
        for p, r in enumerate(cache[forbidden]):
            totals[p] += L.dim * r
    return [(p, totals[p]) for p in range(3)]


def integration_defect(el: TWElement) -> dict:
    """``int(d el) - delta(int el)`` on each level; empty when integration is a cochain map."""
    prod = cosimplicial_product(el.model.assignment)
    lhs = integrate_to_cochain(el.d())
    rhs_src = integrate_to_cochain(el)
    out = {}
    for n in (1, 2):
        rhs = prod.differential(n - 1, rhs_src[n - 1])
        keys = set(lhs[n]) | set(rhs)
        for F in keys:
            a, b = lhs[n].get(F, {}), rhs.get(F, {})
            diff = {k: Fraction(a.get(k, 0)) - Fraction(b.get(k, 0)) for k in set(a) | set(b)}
            diff = {k: v for k, v in diff.items() if v}
            if diff:
                out[(n, F)] = diff
    return out
