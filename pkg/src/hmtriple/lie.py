"""Lie algebras by structure constants and current-algebra elements."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .scalars import BiLaurentPoly, as_scalar

__all__ = ["LieStructure", "builtin_sl2", "CurrentElement", "current_bracket"]


@dataclass(frozen=True)
class LieStructure:
    """Basis brackets ``[e_a, e_b] = sum_c C[a, b][c] e_c`` and a symmetric form ``kappa``."""

    dim: int
    bracket_constants: Mapping[tuple[int, int], Mapping[int, Fraction]]
    form: tuple[tuple[Fraction, ...], ...]
    names: tuple[str, ...] = field(default=())

    @classmethod
    def from_tables(cls, dim: int, brackets: Mapping, form: Sequence[Sequence], names=None):
        """Build from sparse brackets ``{(a, b): {c: coeff}}``; antisymmetric partners are filled in."""
        consts: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (a, b), out in brackets.items():
            row = {c: as_scalar(v) for c, v in out.items() if v != 0}
            if not row:
                continue
            consts[(a, b)] = row
            if (b, a) not in brackets:
                consts[(b, a)] = {c: -v for c, v in row.items()}
        kappa = tuple(tuple(as_scalar(x) for x in r) for r in form)
        names = tuple(names) if names else tuple(f"x{k}" for k in range(dim))
        return cls(dim, consts, kappa, names)

    def bracket_basis(self, a: int, b: int) -> Mapping[int, Fraction]:
        return self.bracket_constants.get((a, b), {})

    def bracket_vec(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for a, xa in x.items():
            for b, yb in y.items():
                for c, v in self.bracket_basis(a, b).items():
                    out[c] = out.get(c, 0) + xa * yb * v
        return {c: v for c, v in out.items() if v != 0}

    def kappa(self, a: int, b: int) -> Fraction:
        return self.form[a][b]

    def verify(self) -> list[str]:
        """Return human-readable violations of antisymmetry, Jacobi, invariance, nondegeneracy."""
        problems: list[str] = []
        n = self.dim
        basis = [{k: Fraction(1)} for k in range(n)]
        for a, b in product(range(n), repeat=2):
            ab = self.bracket_vec(basis[a], basis[b])
            ba = self.bracket_vec(basis[b], basis[a])
            if {c: -v for c, v in ba.items()} != ab:
                problems.append(f"antisymmetry fails on ({self.names[a]},{self.names[b]})")
        for a, b, c in product(range(n), repeat=3):
            x, y, z = basis[a], basis[b], basis[c]
            total: dict[int, Fraction] = {}
            for term in (
                self.bracket_vec(x, self.bracket_vec(y, z)),
                self.bracket_vec(y, self.bracket_vec(z, x)),
                self.bracket_vec(z, self.bracket_vec(x, y)),
            ):
                for k, v in term.items():
                    total[k] = total.get(k, 0) + v
            if any(v != 0 for v in total.values()):
                problems.append(f"Jacobi fails on ({self.names[a]},{self.names[b]},{self.names[c]})")
        for a, b in product(range(n), repeat=2):
            if self.form[a][b] != self.form[b][a]:
                problems.append(f"form not symmetric at ({a},{b})")
        for a, b, c in product(range(n), repeat=3):
            lhs = sum(v * self.form[k][c] for k, v in self.bracket_basis(a, b).items())
            rhs = sum(v * self.form[b][k] for k, v in self.bracket_basis(a, c).items())
            if lhs + rhs != 0:
                problems.append(f"form not invariant on ({self.names[a]},{self.names[b]},{self.names[c]})")
        from .linalg import rank

        if n and rank([list(r) for r in self.form]) != n:
            problems.append("form is degenerate")
        return problems


def builtin_sl2() -> LieStructure:
    """sl2 in the basis (e, h, f) with the trace form."""
    e, h, f = 0, 1, 2
    brackets = {(h, e): {e: 2}, (h, f): {f: -2}, (e, f): {h: 1}}
    form = [[0, 0, 1], [0, 2, 0], [1, 0, 0]]
    return LieStructure.from_tables(3, brackets, form, names=("e", "h", "f"))


@dataclass(frozen=True)
class CurrentElement:
    """Element of ``g (x) C((w)) (x) C((z))``: one Laurent polynomial per basis vector."""

    components: tuple[BiLaurentPoly, ...]

    @classmethod
    def zero(cls, dim: int) -> "CurrentElement":
        return cls(tuple(BiLaurentPoly() for _ in range(dim)))

    @classmethod
    def basis(cls, dim: int, a: int, p: BiLaurentPoly) -> "CurrentElement":
        comps = [BiLaurentPoly() for _ in range(dim)]
        comps[a] = p
        return cls(tuple(comps))

    def __add__(self, other: "CurrentElement") -> "CurrentElement":
        return CurrentElement(tuple(x + y for x, y in zip(self.components, other.components)))

    def __neg__(self):
        return CurrentElement(tuple(-x for x in self.components))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "CurrentElement":
        return CurrentElement(tuple(x.scale(c) for x in self.components))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.components)

    def to_coeffs(self) -> dict[tuple[int, tuple[int, int]], Fraction]:
        return {
            (a, m): c for a, p in enumerate(self.components) for m, c in p.terms.items()
        }

    @classmethod
    def from_coeffs(cls, dim: int, coeffs: Mapping) -> "CurrentElement":
        comps: list[dict] = [{} for _ in range(dim)]
        for (a, m), c in coeffs.items():
            comps[a][m] = comps[a].get(m, 0) + c
        return cls(tuple(BiLaurentPoly(t) for t in comps))


def current_bracket(x: CurrentElement, y: CurrentElement, L: LieStructure) -> CurrentElement:
    if len(x.components) != L.dim or len(y.components) != L.dim:
        raise ValueError("dimension mismatch with the Lie structure")
    out = [BiLaurentPoly() for _ in range(L.dim)]
    for a, p in enumerate(x.components):
        if p.is_zero():
            continue
        for b, q in enumerate(y.components):
            if q.is_zero():
                continue
            pq = None
            for c, v in L.bracket_basis(a, b).items():
                pq = p * q if pq is None else pq
                out[c] = out[c] + pq.scale(v)
    return CurrentElement(tuple(out))
