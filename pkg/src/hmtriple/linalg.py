"""Exact rational linear algebra on sparse rows, backed by sympy's DomainMatrix over QQ."""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.sdm import SDM

__all__ = ["rank", "sparse_rank", "nullspace", "Indexer", "solve_in_span"]


def _q(x) -> object:
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ.convert(x)


def _f(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _matrix(rows: Sequence[Mapping[int, object]], ncols: int) -> DomainMatrix:
    data = {}
    for r, row in enumerate(rows):
        entries = {c: _q(v) for c, v in row.items() if v != 0}
        if entries:
            data[r] = entries
    return DomainMatrix.from_rep(SDM(data, (len(rows), ncols), QQ))


class Indexer:
    """Assigns consecutive column indices to hashable keys."""

    def __init__(self, keys: Iterable[Hashable] = ()):
        self.index: dict[Hashable, int] = {}
        for k in keys:
            self(k)

    def __call__(self, key: Hashable) -> int:
        idx = self.index.get(key)
        if idx is None:
            idx = self.index[key] = len(self.index)
        return idx

    def __len__(self) -> int:
        return len(self.index)

    def row(self, vec: Mapping[Hashable, object]) -> dict[int, object]:
        return {self(k): v for k, v in vec.items() if v != 0}


def sparse_rank(rows: Sequence[Mapping[int, object]], ncols: int | None = None) -> int:
    rows = [r for r in rows if any(v != 0 for v in r.values())]
    if not rows:
        return 0
    if ncols is None:
        ncols = 1 + max(c for r in rows for c in r)
    return _matrix(rows, ncols).rank()


def rank(dense: Sequence[Sequence[object]]) -> int:
    rows = [{c: v for c, v in enumerate(r) if v != 0} for r in dense]
    ncols = max((len(r) for r in dense), default=0)
    return sparse_rank(rows, ncols) if ncols else 0


def nullspace(rows: Sequence[Mapping[int, object]], ncols: int) -> list[dict[int, Fraction]]:
    """Basis of ``{x : A x = 0}`` for the sparse row matrix ``A``."""
    if ncols == 0:
        return []
    rows = [r for r in rows if any(v != 0 for v in r.values())]
    if not rows:
        return [{c: Fraction(1)} for c in range(ncols)]
    ns = _matrix(rows, ncols).nullspace().to_sdm()
    return [{c: _f(v) for c, v in vec.items()} for _, vec in sorted(ns.items())]


def solve_in_span(columns: Sequence[Mapping[Hashable, object]], target: Mapping[Hashable, object]):
    """Coefficients ``x`` with ``sum x_k columns[k] = target``, or ``None`` if no solution."""
    idx = Indexer()
    for col in columns:
        for k in col:
            idx(k)
    for k in target:
        idx(k)
    n = len(columns)
    # rows of [A | -b] over unknowns (x, t); solutions with t = 1
    rows: dict[int, dict[int, object]] = {}
    for c, col in enumerate(columns):
        for k, v in col.items():
            if v != 0:
                rows.setdefault(idx(k), {})[c] = v
    for k, v in target.items():
        if v != 0:
            rows.setdefault(idx(k), {})[n] = -v
    ns = nullspace(list(rows.values()), n + 1) if rows else [{c: Fraction(1)} for c in range(n + 1)]
    for vec in ns:
        t = vec.get(n, 0)
        if t != 0:
            return [vec.get(c, Fraction(0)) / t for c in range(n)]
    return None
