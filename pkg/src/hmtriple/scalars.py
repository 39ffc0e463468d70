"""Exact scalars, bivariate Laurent polynomials and global rational functions.

Scalars are :class:`fractions.Fraction`.  A :class:`BiLaurentPoly` is a finitely
supported map ``(i, j) -> coefficient`` standing for ``sum c w^i z^j``.  A
:class:`GlobalRationalFn` is a finite sum of pure-polar atoms
``c (w - w_k)^(-a) (z - z_l)^(-b)`` with ``a, b >= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

ExactScalar = Fraction

__all__ = [
    "ExactScalar",
    "ExpansionWindow",
    "Sector",
    "sector_of",
    "BiLaurentPoly",
    "blp_arith",
    "sector_project",
    "residue_wz",
    "GlobalRationalFn",
    "rational_mul",
    "partial_fractions_atoms",
    "laurent_expand",
    "expand_pole",
    "polar_product",
]


def as_scalar(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class ExpansionWindow:
    """Exponent bounds ``w_min <= 0 <= w_max`` and ``z_min <= 0 <= z_max``."""

    w_min: int
    w_max: int
    z_min: int
    z_max: int

    def __post_init__(self):
        if not (self.w_min <= 0 <= self.w_max and self.z_min <= 0 <= self.z_max):
            raise ValueError(f"window must straddle the origin: {self}")

    @classmethod
    def square(cls, m: int) -> "ExpansionWindow":
        return cls(-m, m, -m, m)

    @classmethod
    def parse(cls, text: str) -> "ExpansionWindow":
        """Parse ``"wmin:wmax,zmin:zmax"``."""
        try:
            wpart, zpart = text.split(",")
            w_lo, w_hi = (int(t) for t in wpart.split(":"))
            z_lo, z_hi = (int(t) for t in zpart.split(":"))
        except ValueError as exc:
            raise ValueError(f"bad window {text!r}; expected 'wmin:wmax,zmin:zmax'") from exc
        return cls(w_lo, w_hi, z_lo, z_hi)

    def contains(self, mono: tuple[int, int]) -> bool:
        i, j = mono
        return self.w_min <= i <= self.w_max and self.z_min <= j <= self.z_max

    def below_top(self, mono: tuple[int, int]) -> bool:
        """True when the exponent does not exceed the upper bounds."""
        return mono[0] <= self.w_max and mono[1] <= self.z_max

    def monomials(self) -> list[tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.w_min, self.w_max + 1)
            for j in range(self.z_min, self.z_max + 1)
        ]

    def shrink_top(self, delta: int) -> "ExpansionWindow":
        return ExpansionWindow(
            self.w_min, max(0, self.w_max - delta), self.z_min, max(0, self.z_max - delta)
        )

    def __str__(self) -> str:
        return f"{self.w_min}:{self.w_max},{self.z_min}:{self.z_max}"


class Sector(str, Enum):
    """Sign pattern of a monomial: P means regular (exponent >= 0), M polar."""

    PP = "PP"
    MP = "MP"
    PM = "PM"
    MM = "MM"

    @property
    def w_regular(self) -> bool:
        return self in (Sector.PP, Sector.PM)

    @property
    def z_regular(self) -> bool:
        return self in (Sector.PP, Sector.MP)


def sector_of(mono: tuple[int, int]) -> Sector:
    i, j = mono
    if i >= 0:
        return Sector.PP if j >= 0 else Sector.PM
    return Sector.MP if j >= 0 else Sector.MM


def _clean(terms: Mapping) -> dict:
    return {k: as_scalar(v) for k, v in terms.items() if v != 0}


class BiLaurentPoly:
    """Finitely supported Laurent polynomial in ``w`` and ``z``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = _clean(terms or {})

    @classmethod
    def monomial(cls, i: int, j: int, c=1) -> "BiLaurentPoly":
        return cls({(i, j): c})

    @classmethod
    def w(cls) -> "BiLaurentPoly":
        return cls.monomial(1, 0)

    @classmethod
    def z(cls) -> "BiLaurentPoly":
        return cls.monomial(0, 1)

    @classmethod
    def constant(cls, c) -> "BiLaurentPoly":
        return cls.monomial(0, 0, c)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "BiLaurentPoly") -> "BiLaurentPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BiLaurentPoly(out)

    def __neg__(self) -> "BiLaurentPoly":
        return BiLaurentPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "BiLaurentPoly") -> "BiLaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "BiLaurentPoly":
        if not isinstance(other, BiLaurentPoly):
            return self.scale(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, 0) + a * b
        return BiLaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiLaurentPoly":
        out = BiLaurentPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "BiLaurentPoly":
        c = as_scalar(c)
        return BiLaurentPoly({k: c * v for k, v in self.terms.items()})

    def coeff(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def support(self) -> set[tuple[int, int]]:
        return set(self.terms)

    def restrict(self, keep) -> "BiLaurentPoly":
        return BiLaurentPoly({k: v for k, v in self.terms.items() if keep(k)})

    def truncate(self, window: ExpansionWindow) -> "BiLaurentPoly":
        return self.restrict(window.contains)

    def d_dw(self) -> "BiLaurentPoly":
        return BiLaurentPoly({(i - 1, j): i * v for (i, j), v in self.terms.items()})

    def d_dz(self) -> "BiLaurentPoly":
        return BiLaurentPoly({(i, j - 1): j * v for (i, j), v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, BiLaurentPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items()):
            mon = "".join(
                f"{v}^{e}" if e != 1 else v for v, e in (("w", i), ("z", j)) if e != 0
            )
            parts.append(f"{c}{'*' + mon if mon else ''}")
        return " + ".join(parts)


def blp_arith(a: BiLaurentPoly, b, op: str) -> BiLaurentPoly:
    """``op`` is one of ``add``, ``mul``, ``scale`` (``b`` a scalar for scale)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def sector_project(p: BiLaurentPoly, s: Sector) -> BiLaurentPoly:
    s = Sector(s)
    return p.restrict(lambda m: sector_of(m) is s)


def residue_wz(p: BiLaurentPoly) -> Fraction:
    return p.coeff(-1, -1)


# ---------------------------------------------------------------------------
# one-variable pole algebra
# ---------------------------------------------------------------------------


def _neg_binom(a: int, n: int) -> int:
    """Binomial coefficient C(-a, n) = (-1)^n C(a + n - 1, n)."""
    return (-1) ** n * comb(a + n - 1, n)


def polar_product(points, p: tuple[int, int], q: tuple[int, int]) -> dict[tuple[int, int], Fraction]:
    """Partial fractions of ``(x - x_k)^-a (x - x_l)^-c`` for poles ``p=(k,a)``, ``q=(l,c)``."""
    (k, a), (l, c) = p, q
    if k == l:
        return {(k, a + c): Fraction(1)}
    diff = as_scalar(points[k]) - as_scalar(points[l])
    out: dict[tuple[int, int], Fraction] = {}
    for m in range(1, a + 1):
        n = a - m
        out[(k, m)] = _neg_binom(c, n) * diff ** (-c - n)
    for m in range(1, c + 1):
        n = c - m
        out[(l, m)] = _neg_binom(a, n) * (-diff) ** (-a - n)
    return out


def expand_pole(points, pole: tuple[int, int], center: int, top: int) -> dict[int, Fraction]:
    """Laurent expansion of ``(x - x_k)^-a`` in ``y = x - x_center`` up to ``y^top``."""
    k, a = pole
    if k == center:
        return {-a: Fraction(1)}
    d = as_scalar(points[center]) - as_scalar(points[k])
    return {n: _neg_binom(a, n) * d ** (-a - n) for n in range(0, top + 1)}


# ---------------------------------------------------------------------------
# global rational functions
# ---------------------------------------------------------------------------


class GlobalRationalFn:
    """Sum of atoms ``c (w - w_i)^-a (z - z_j)^-b``; indices are 0-based."""

    __slots__ = ("marked_w", "marked_z", "atoms")

    def __init__(self, marked_w: Iterable, marked_z: Iterable, atoms: Mapping | None = None):
        self.marked_w = tuple(as_scalar(x) for x in marked_w)
        self.marked_z = tuple(as_scalar(x) for x in marked_z)
        if len(set(self.marked_w)) != len(self.marked_w) or len(set(self.marked_z)) != len(self.marked_z):
            raise ValueError("marked points must be pairwise distinct in each coordinate")
        atoms = _clean(atoms or {})
        n_w, n_z = len(self.marked_w), len(self.marked_z)
        for (i, j, a, b) in atoms:
            if not (0 <= i < n_w and 0 <= j < n_z and a >= 1 and b >= 1):
                raise ValueError(f"invalid atom {(i, j, a, b)}")
        self.atoms: dict[tuple[int, int, int, int], Fraction] = atoms

    @classmethod
    def atom(cls, marked_w, marked_z, i: int, j: int, a: int = 1, b: int = 1, c=1):
        return cls(marked_w, marked_z, {(i, j, a, b): c})

    def _same_points(self, other: "GlobalRationalFn") -> None:
        if self.marked_w != other.marked_w or self.marked_z != other.marked_z:
            raise ValueError("marked-point lists differ")

    def _new(self, atoms) -> "GlobalRationalFn":
        return GlobalRationalFn(self.marked_w, self.marked_z, atoms)

    def is_zero(self) -> bool:
        return not self.atoms

    def __add__(self, other: "GlobalRationalFn") -> "GlobalRationalFn":
        self._same_points(other)
        out = dict(self.atoms)
        for k, v in other.atoms.items():
            out[k] = out.get(k, 0) + v
        return self._new(out)

    def __neg__(self) -> "GlobalRationalFn":
        return self._new({k: -v for k, v in self.atoms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "GlobalRationalFn":
        c = as_scalar(c)
        return self._new({k: c * v for k, v in self.atoms.items()})

    def __mul__(self, other):
        if isinstance(other, GlobalRationalFn):
            return rational_mul(self, other)
        return self.scale(other)

    def max_polar_order(self) -> int:
        return max((max(a, b) for (_, _, a, b) in self.atoms), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GlobalRationalFn):
            return NotImplemented
        return (self.marked_w, self.marked_z, self.atoms) == (other.marked_w, other.marked_z, other.atoms)

    def __hash__(self) -> int:
        return hash((self.marked_w, self.marked_z, frozenset(self.atoms.items())))

    def __repr__(self) -> str:
        if not self.atoms:
            return "0"
        return " + ".join(
            f"{c}*(w-w{i})^-{a}(z-z{j})^-{b}" for (i, j, a, b), c in sorted(self.atoms.items())
        )


def atom_product(marked_w, marked_z, x: tuple, y: tuple) -> dict[tuple, Fraction]:
    """Product of two atom keys ``(i, j, a, b)`` as a dict of atom keys."""
    wpart = polar_product(marked_w, (x[0], x[2]), (y[0], y[2]))
    zpart = polar_product(marked_z, (x[1], x[3]), (y[1], y[3]))
    out: dict[tuple, Fraction] = {}
    for (i, a), cw in wpart.items():
        for (j, b), cz in zpart.items():
            key = (i, j, a, b)
            out[key] = out.get(key, 0) + cw * cz
    return out


def rational_mul(r1: GlobalRationalFn, r2: GlobalRationalFn) -> GlobalRationalFn:
    r1._same_points(r2)
    out: dict[tuple, Fraction] = {}
    for k1, c1 in r1.atoms.items():
        for k2, c2 in r2.atoms.items():
            for k, c in atom_product(r1.marked_w, r1.marked_z, k1, k2).items():
                out[k] = out.get(k, 0) + c1 * c2 * c
    return r1._new(out)


def partial_fractions_atoms(r: GlobalRationalFn) -> list[tuple[int, int, BiLaurentPoly]]:
    """Group atoms by pole pair; each piece is a polynomial in the local inverse coordinates.

    The piece for ``(i, j)`` stores ``(w - w_i)^-a (z - z_j)^-b`` as exponent ``(-a, -b)``.
    """
    groups: dict[tuple[int, int], dict] = {}
    for (i, j, a, b), c in r.atoms.items():
        groups.setdefault((i, j), {})[(-a, -b)] = c
    return [(i, j, BiLaurentPoly(t)) for (i, j), t in sorted(groups.items())]


def laurent_expand(r: GlobalRationalFn, center, window: ExpansionWindow) -> BiLaurentPoly:
    """Expand in ``(w - w_i, z - z_j)``; ``center`` is ``i`` (meaning ``(i, i)``) or ``(i, j)``.

    Coefficients are exact for every exponent up to the window's upper bounds.
    """
    ci, cj = (center, center) if isinstance(center, int) else center
    if not (0 <= ci < len(r.marked_w) and 0 <= cj < len(r.marked_z)):
        raise ValueError(f"center {center} is not a marked point")
    out: dict[tuple[int, int], Fraction] = {}
    wcache: dict = {}
    zcache: dict = {}
    for (i, j, a, b), c in r.atoms.items():
        we = wcache.get((i, a))
        if we is None:
            we = wcache[(i, a)] = expand_pole(r.marked_w, (i, a), ci, window.w_max)
        ze = zcache.get((j, b))
        if ze is None:
            ze = zcache[(j, b)] = expand_pole(r.marked_z, (j, b), cj, window.z_max)
        for m, cw in we.items():
            for n, cz in ze.items():
                out[(m, n)] = out.get((m, n), 0) + c * cw * cz
    return BiLaurentPoly(out)
