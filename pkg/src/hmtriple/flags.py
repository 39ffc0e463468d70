"""Rectilinear flag complexes and their algebra assignments.

Points are closed points ``(w_i, z_j)``, lines ``w = w_i`` and ``z = z_j``, and the
generic point ``E``.  Flags are strictly increasing chains in the closure order and
are stored as tuples sorted from the smallest point to the largest.

An assignment gives every flag a :class:`SpaceLabel`, the support constraint its
coefficients must satisfy.  The label of a flag is the label of its largest point,
which makes every face inclusion an embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, NamedTuple, Sequence

from .scalars import Sector, as_scalar, atom_product, sector_of

__all__ = [
    "FlagPoint",
    "ClosedPoint",
    "WLine",
    "ZLine",
    "Generic",
    "FlagComplex",
    "SpaceLabel",
    "LaurentAlgebra",
    "PoleAlgebra",
    "FlagAlgebraAssignment",
    "build_pdisc_flags",
    "build_rect_flags",
    "assign_algebra",
    "cosimplicial_product",
    "restrict_assignment",
]

_RANK = {"pt": 0, "w": 1, "z": 1, "E": 2}


class FlagPoint(NamedTuple):
    kind: str  # "pt", "w", "z" or "E"
    i: int = -1
    j: int = -1

    @property
    def rank(self) -> int:
        return _RANK[self.kind]

    def __str__(self) -> str:
        if self.kind == "pt":
            return f"(w{self.i},z{self.j})"
        if self.kind == "w":
            return f"(w=w{self.i})"
        if self.kind == "z":
            return f"(z=z{self.j})"
        return "E"


def ClosedPoint(i: int, j: int) -> FlagPoint:
    return FlagPoint("pt", i, j)


def WLine(i: int) -> FlagPoint:
    return FlagPoint("w", i, -1)


def ZLine(j: int) -> FlagPoint:
    return FlagPoint("z", -1, j)


def Generic() -> FlagPoint:
    return FlagPoint("E")


def closure_le(p: FlagPoint, q: FlagPoint) -> bool:
    """``p <= q``: ``p`` lies in the closure of ``q``."""
    if p == q or q.kind == "E":
        return True
    if p.kind == "pt":
        return (q.kind == "w" and q.i == p.i) or (q.kind == "z" and q.j == p.j)
    return False


def flag_str(flag: Sequence[FlagPoint]) -> str:
    return "(" + ",".join(str(p) for p in flag) + ")"


@dataclass(frozen=True)
class FlagComplex:
    """All chains in a finite set of points, graded by dimension."""

    points: tuple[FlagPoint, ...]
    simplices: tuple[tuple[tuple[FlagPoint, ...], ...], ...]
    marked_w: tuple[Fraction, ...] = ()
    marked_z: tuple[Fraction, ...] = ()

    @classmethod
    def from_points(cls, points: Iterable[FlagPoint], marked_w=(), marked_z=()) -> "FlagComplex":
        pts = tuple(sorted(set(points), key=lambda p: (p.rank, p)))
        levels: list[list[tuple[FlagPoint, ...]]] = [[], [], []]
        for n in range(1, 4):
            for combo in combinations(pts, n):
                chain = tuple(sorted(combo, key=lambda p: p.rank))
                if all(closure_le(chain[k], chain[k + 1]) and chain[k] != chain[k + 1] for k in range(n - 1)):
                    levels[n - 1].append(chain)
        return cls(pts, tuple(tuple(sorted(l)) for l in levels), tuple(marked_w), tuple(marked_z))

    @property
    def dim(self) -> int:
        return max((n for n in range(3) if self.simplices[n]), default=0)

    def counts(self) -> tuple[int, int, int]:
        return tuple(len(s) for s in self.simplices)

    def all_simplices(self) -> list[tuple[FlagPoint, ...]]:
        return [s for level in self.simplices for s in level]

    def __contains__(self, flag) -> bool:
        flag = tuple(flag)
        n = len(flag) - 1
        return 0 <= n <= 2 and flag in self._index[n]

    @property
    def _index(self):
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = tuple(frozenset(level) for level in self.simplices)
            object.__setattr__(self, "_index_cache", cache)
        return cache

    @staticmethod
    def face(flag: tuple, i: int) -> tuple:
        """Face map: delete entry ``i``."""
        return flag[:i] + flag[i + 1 :]

    def maximal_simplices(self) -> list[tuple[FlagPoint, ...]]:
        out = []
        for n in range(3):
            higher = self.simplices[n + 1] if n < 2 else ()
            covered = {self.face(F, i) for F in higher for i in range(len(F))}
            out.extend(s for s in self.simplices[n] if s not in covered)
        return out

    def cofaces(self, flag: tuple) -> list[tuple[tuple, int]]:
        """Pairs ``(F, i)`` with ``face(F, i) == flag``."""
        n = len(flag) - 1
        if n >= 2:
            return []
        return [
            (F, i) for F in self.simplices[n + 1] for i in range(len(F)) if self.face(F, i) == flag
        ]

    def subcomplex(self, points: Iterable[FlagPoint]) -> "FlagComplex":
        keep = set(points)
        if not keep <= set(self.points):
            raise ValueError("points outside the complex")
        return FlagComplex.from_points(keep, self.marked_w, self.marked_z)

    def check_identities(self) -> list[str]:
        """Face-closure and the semisimplicial identities on every simplex."""
        problems = []
        for n in (1, 2):
            for F in self.simplices[n]:
                for i in range(n + 1):
                    if self.face(F, i) not in self:
                        problems.append(f"face {i} of {flag_str(F)} missing")
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        if self.face(self.face(F, j), i) != self.face(self.face(F, i), j - 1):
                            problems.append(f"identity d{i}d{j} fails on {flag_str(F)}")
        return problems


def build_pdisc_flags(punctured: bool) -> FlagComplex:
    pts = [WLine(0), ZLine(0), Generic()]
    if not punctured:
        pts.append(ClosedPoint(0, 0))
    return FlagComplex.from_points(pts, (Fraction(0),), (Fraction(0),))


def build_rect_flags(N: int, w: Sequence, z: Sequence) -> FlagComplex:
    if N < 1 or len(w) != N or len(z) != N:
        raise ValueError("need N >= 1 and N coordinates per variable")
    w = [as_scalar(x) for x in w]
    z = [as_scalar(x) for x in z]
    if len(set(w)) != N or len(set(z)) != N:
        raise ValueError("repeated marked coordinates")
    pts = [ClosedPoint(i, j) for i in range(N) for j in range(N) if i != j]
    pts += [WLine(i) for i in range(N)] + [ZLine(j) for j in range(N)] + [Generic()]
    return FlagComplex.from_points(pts, w, z)


# ---------------------------------------------------------------------------
# coefficient algebras and labels
# ---------------------------------------------------------------------------


class LaurentAlgebra:
    """Laurent monomials ``(i, j)`` in local coordinates."""

    kind = "laurent"

    def __init__(self, center: tuple[int, int] = (0, 0)):
        self.center = center

    def mul(self, m1, m2) -> dict:
        return {(m1[0] + m2[0], m1[1] + m2[1]): Fraction(1)}

    def class_of(self, mono) -> Sector:
        return sector_of(mono)

    def __eq__(self, other):
        return isinstance(other, LaurentAlgebra) and other.center == self.center

    def __hash__(self):
        return hash(("laurent", self.center))


class PoleAlgebra:
    """Pure-polar atoms ``(k, l, a, b)`` for ``(w - w_k)^-a (z - z_l)^-b``."""

    kind = "poles"

    def __init__(self, marked_w, marked_z):
        self.marked_w = tuple(as_scalar(x) for x in marked_w)
        self.marked_z = tuple(as_scalar(x) for x in marked_z)
        self._cache: dict = {}

    def mul(self, m1, m2) -> dict:
        key = (m1, m2)
        out = self._cache.get(key)
        if out is None:
            out = self._cache[key] = atom_product(self.marked_w, self.marked_z, m1, m2)
        return out

    def class_of(self, mono) -> tuple[int, int]:
        return (mono[0], mono[1])

    def __eq__(self, other):
        return isinstance(other, PoleAlgebra) and (other.marked_w, other.marked_z) == (
            self.marked_w,
            self.marked_z,
        )

    def __hash__(self):
        return hash(("poles", self.marked_w, self.marked_z))


_ALL = frozenset(Sector)


@dataclass(frozen=True)
class SpaceLabel:
    """Support constraint.  Laurent labels list allowed sectors; pole labels list excluded poles."""

    name: str
    sectors: frozenset | None = None
    w_excluded: frozenset = field(default_factory=frozenset)
    z_excluded: frozenset = field(default_factory=frozenset)

    def allows(self, mono) -> bool:
        if self.sectors is not None:
            return sector_of(mono) in self.sectors
        return mono[0] not in self.w_excluded and mono[1] not in self.z_excluded

    def allows_class(self, cls) -> bool:
        if self.sectors is not None:
            return cls in self.sectors
        return cls[0] not in self.w_excluded and cls[1] not in self.z_excluded

    def __le__(self, other: "SpaceLabel") -> bool:
        if (self.sectors is None) != (other.sectors is None):
            return False
        if self.sectors is not None:
            return self.sectors <= other.sectors
        return self.w_excluded >= other.w_excluded and self.z_excluded >= other.z_excluded

    def __str__(self) -> str:
        return self.name


TaylorTaylor = SpaceLabel("TaylorTaylor", frozenset({Sector.PP}))
TaylorLaurent = SpaceLabel("TaylorLaurent", frozenset({Sector.PP, Sector.PM}))
LaurentTaylor = SpaceLabel("LaurentTaylor", frozenset({Sector.PP, Sector.MP}))
LaurentLaurent = SpaceLabel("LaurentLaurent", _ALL)
MMOnly = SpaceLabel("MMOnly", frozenset({Sector.MM}))
ZeroSpace = SpaceLabel("Zero", frozenset())


def GlobalReg(w_excluded=(), z_excluded=()) -> SpaceLabel:
    we, ze = frozenset(w_excluded), frozenset(z_excluded)
    name = "GlobalReg(w!=" + ",".join(map(str, sorted(we))) + ";z!=" + ",".join(map(str, sorted(ze))) + ")"
    return SpaceLabel(name, None, we, ze)


def _intersect(a: SpaceLabel, b: SpaceLabel) -> SpaceLabel:
    sectors = a.sectors & b.sectors
    for lab in (TaylorTaylor, TaylorLaurent, LaurentTaylor, LaurentLaurent, MMOnly, ZeroSpace):
        if lab.sectors == sectors:
            return lab
    return SpaceLabel("Sectors(" + ",".join(sorted(s.value for s in sectors)) + ")", sectors)


@dataclass(frozen=True)
class FlagAlgebraAssignment:
    complex: FlagComplex
    point_labels: Mapping[FlagPoint, SpaceLabel]
    algebra: object
    family: str

    def label_of(self, flag: tuple) -> SpaceLabel:
        return self.point_labels[flag[-1]]

    def labels(self) -> dict[tuple, SpaceLabel]:
        return {s: self.label_of(s) for s in self.complex.all_simplices()}

    def forbidden_points(self, cls) -> frozenset:
        """Points whose label excludes the coefficient class ``cls`` (a down-closed set)."""
        return frozenset(p for p, lab in self.point_labels.items() if not lab.allows_class(cls))

    def check_functorial(self) -> list[str]:
        problems = []
        cx = self.complex
        for n in (1, 2):
            for F in cx.simplices[n]:
                for i in range(n + 1):
                    f = cx.face(F, i)
                    if not self.label_of(f) <= self.label_of(F):
                        problems.append(f"label of {flag_str(f)} not inside label of {flag_str(F)}")
        return problems


def assign_algebra(complex: FlagComplex, which: str, ij: tuple[int, int] | None = None) -> FlagAlgebraAssignment:
    """``which`` is one of A_D, A_Dx, A_mm, A_RectN, A_ij (with ``ij``)."""
    pts = set(complex.points)
    local_pts = {WLine(0), ZLine(0), Generic()}
    labels: dict[FlagPoint, SpaceLabel] = {}
    if which in ("A_D", "A_Dx", "A_mm"):
        expected = local_pts | ({ClosedPoint(0, 0)} if which == "A_D" else set())
        if pts != expected:
            raise ValueError(f"{which} needs the {'unpunctured' if which == 'A_D' else 'punctured'} polydisc complex")
        if which == "A_mm":
            labels = {WLine(0): ZeroSpace, ZLine(0): ZeroSpace, Generic(): MMOnly}
        else:
            labels = {WLine(0): TaylorLaurent, ZLine(0): LaurentTaylor, Generic(): LaurentLaurent}
            if which == "A_D":
                labels[ClosedPoint(0, 0)] = TaylorTaylor
        return FlagAlgebraAssignment(complex, labels, LaurentAlgebra(), which)
    if not complex.marked_w or Generic() not in pts or any(p.kind == "pt" and p.i == p.j for p in pts):
        raise ValueError(f"{which} needs a Rect2(N) complex")
    if which == "A_RectN":
        for p in pts:
            if p.kind == "pt":
                labels[p] = GlobalReg({p.i}, {p.j})
            elif p.kind == "w":
                labels[p] = GlobalReg({p.i}, ())
            elif p.kind == "z":
                labels[p] = GlobalReg((), {p.j})
            else:
                labels[p] = GlobalReg()
        return FlagAlgebraAssignment(complex, labels, PoleAlgebra(complex.marked_w, complex.marked_z), which)
    if which == "A_ij":
        if ij is None:
            raise ValueError("A_ij needs the pair (i, j)")
        i, j = ij
        line_label = {}
        for p in pts:
            if p.kind == "w":
                line_label[p] = TaylorLaurent if p.i == i else LaurentLaurent
            elif p.kind == "z":
                line_label[p] = LaurentTaylor if p.j == j else LaurentLaurent
        for p in pts:
            if p.kind == "pt":
                labels[p] = _intersect(line_label[WLine(p.i)], line_label[ZLine(p.j)])
            elif p.kind == "E":
                labels[p] = LaurentLaurent
            else:
                labels[p] = line_label[p]
        return FlagAlgebraAssignment(complex, labels, LaurentAlgebra((i, j)), f"A_ij{(i, j)}")
    raise ValueError(f"unknown assignment family {which!r}")


# ---------------------------------------------------------------------------
# semicosimplicial products and restriction
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CosimplicialProduct:
    """Level ``n`` is the product of the labelled spaces over all ``n``-flags.

    A level-``n`` element is a dict ``flag -> vector`` where a vector is a dict of
    coefficient keys ``(lie_index, monomial)``.
    """

    assignment: FlagAlgebraAssignment

    def level(self, n: int) -> list[tuple[tuple, SpaceLabel]]:
        return [(f, self.assignment.label_of(f)) for f in self.assignment.complex.simplices[n]]

    def coface(self, n: int, i: int, c: Mapping[tuple, Mapping]) -> dict[tuple, dict]:
        """``(d_i c)_F = c_{face_i F}`` via the inclusion of labelled spaces."""
        cx = self.assignment.complex
        out = {}
        for F in cx.simplices[n + 1]:
            v = c.get(cx.face(F, i))
            if v:
                out[F] = dict(v)
        return out

    def differential(self, n: int, c: Mapping[tuple, Mapping]) -> dict[tuple, dict]:
        out: dict[tuple, dict] = {}
        for i in range(n + 2):
            sign = -1 if i % 2 else 1
            for F, v in self.coface(n, i, c).items():
                acc = out.setdefault(F, {})
                for k, x in v.items():
                    acc[k] = acc.get(k, 0) + sign * x
        return {F: {k: x for k, x in v.items() if x != 0} for F, v in out.items() if any(x != 0 for x in v.values())}


def cosimplicial_product(assignment: FlagAlgebraAssignment) -> CosimplicialProduct:
    return CosimplicialProduct(assignment)


def restrict_assignment(assignment: FlagAlgebraAssignment, subcomplex: FlagComplex):
    """Restrict to a face-closed subcomplex; return the new assignment and the projection."""
    cx = assignment.complex
    for s in subcomplex.all_simplices():
        if s not in cx:
            raise ValueError(f"{flag_str(s)} is not a simplex of the ambient complex")
    if subcomplex.check_identities():
        raise ValueError("subcomplex is not closed under faces")
    labels = {p: assignment.point_labels[p] for p in subcomplex.points}
    sub = FlagAlgebraAssignment(subcomplex, labels, assignment.algebra, assignment.family)
    keep = set(subcomplex.all_simplices())

    def projection(c: Mapping[tuple, Mapping]) -> dict[tuple, dict]:
        return {f: dict(v) for f, v in c.items() if f in keep}

    return sub, projection
