"""The residue pairing and the homotopy-Manin-triple evidence reports."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .linalg import rank
from .local import W_EDGE, Z_EDGE, LocalTripleContext, constant_element, h1_retract, local_I, local_P, local_h
from .scalars import ExpansionWindow, Sector
from .tw import TWElement, _vadd, cohomology_ranks, describe, sf_wedge
from .polyforms import integrate_top

__all__ = [
    "PairingValue",
    "local_pairing",
    "global_pairing",
    "invariance_check",
    "gram_cohomology",
    "GramReport",
    "ConditionRecord",
    "ManinTripleReport",
    "manin_triple_report",
    "SIGMA",
    "integrate_over_sigma",
]

# the 1-chain ((w=0),E) - ((z=0),E)
SIGMA = ((W_EDGE, 1), (Z_EDGE, -1))


@dataclass(frozen=True)
class PairingValue:
    """Value of the pairing, placed in degree -1 (the shifted line)."""

    value: Fraction
    degree_shift: int = -1

    def __bool__(self) -> bool:
        return self.value != 0


def element_degree(el: TWElement) -> int:
    degs = el.degrees()
    if len(degs) > 1:
        raise ValueError("element is not homogeneous")
    return degs.pop() if degs else 0


def local_pairing(a: TWElement, b: TWElement, sigma=SIGMA) -> PairingValue:
    """``1/2 kappa(.,.) int_Sigma res_w res_z (omega ^ lambda)``."""
    if a.model is not b.model:
        raise ValueError("context mismatch")
    L = a.model.lie

    def mul(k1, k2):
        (x, m), (y, n) = k1, k2
        if m[0] + n[0] == -1 and m[1] + n[1] == -1:
            c = L.kappa(x, y)
            return {0: c} if c else {}
        return {}

    total = Fraction(0)
    for edge, sign in sigma:
        fa, fb = a.form(edge), b.form(edge)
        ma = {m for vec in fa.values() for _, m in vec}
        if not any((-1 - m[0], -1 - m[1]) in ma for vec in fb.values() for _, m in vec):
            continue
        prod = sf_wedge(fa, fb, mul)
        for (wedge, exps), vec in prod.items():
            if len(wedge) == 1:
                total += sign * vec.get(0, 0) * integrate_top(1, exps)
    return PairingValue(total / 2)


def global_pairing(A: Sequence[TWElement], B: Sequence[TWElement], sigma=SIGMA) -> PairingValue:
    if len(A) != len(B):
        raise ValueError("context mismatch")
    return PairingValue(sum((local_pairing(x, y, sigma).value for x, y in zip(A, B)), Fraction(0)))


def invariance_check(x: TWElement, y: TWElement, z: TWElement, sigma=SIGMA) -> tuple[bool, dict]:
    """Both invariance identities; returns ``(ok, residuals)``."""
    px, py = element_degree(x), element_degree(y)
    r1 = local_pairing(x.bracket(y), z, sigma).value + (-1) ** (px * py) * local_pairing(y, x.bracket(z), sigma).value
    r2 = local_pairing(x.d(), y, sigma).value + (-1) ** px * local_pairing(x, y.d(), sigma).value
    return r1 == 0 and r2 == 0, {"bracket": r1, "differential": r2}


@dataclass
class GramReport:
    h0_basis: list
    h1_basis: list
    matrix: list
    rank: int
    h0_block_zero: bool
    h1_block_zero: bool

    @property
    def square(self) -> bool:
        return len(self.h0_basis) == len(self.h1_basis)

    @property
    def invertible(self) -> bool:
        return self.square and self.rank == len(self.h0_basis)


def _matched_monomials(window: ExpansionWindow) -> list:
    mw = min(window.w_max + 1, -window.w_min)
    mz = min(window.z_max + 1, -window.z_min)
    return [(i, j) for i in range(mw) for j in range(mz)]


def gram_cohomology(ctx: LocalTripleContext, sigma=SIGMA) -> GramReport:
    """Gram matrix between constants ``a w^i z^j`` and the H^1 representatives ``i(s^-1 b w^-i-1 z^-j-1)``.

    Only monomials whose partner also lies in the window are used, so the matrix is square.
    """
    L = ctx.L
    monos = _matched_monomials(ctx.window)
    h0 = [(a, m) for m in monos for a in range(L.dim)]
    h1 = [(b, (-m[0] - 1, -m[1] - 1)) for m in monos for b in range(L.dim)]
    h0_el = [constant_element(ctx.gDx, {k: 1}) for k in h0]
    h1_el = [TWElement(ctx.gDx, h1_retract(ctx, "i", {k: 1}).forms) for k in h1]
    matrix = [[local_pairing(x, y, sigma).value for y in h1_el] for x in h0_el]
    z0 = all(local_pairing(x, y, sigma).value == 0 for x in h0_el for y in h0_el)
    z1 = all(local_pairing(x, y, sigma).value == 0 for x in h1_el for y in h1_el)
    return GramReport(h0, h1, matrix, rank(matrix) if matrix else 0, z0, z1)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass
class ConditionRecord:
    name: str
    passed: bool
    evidence: dict = field(default_factory=dict)
    counterexample: str | None = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "evidence": self.evidence}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class ManinTripleReport:
    which: str
    conditions: list[ConditionRecord]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def as_dict(self) -> dict:
        return {"which": self.which, "passed": self.passed, "conditions": [c.as_dict() for c in self.conditions]}


def _first_failure(cases, check) -> tuple[int, str | None]:
    """Run ``check`` on every case; return (count, first counterexample description)."""
    n = 0
    for case in cases:
        n += 1
        bad = check(case)
        if bad:
            return n, bad
    return n, None


def manin_triple_report(which: str, ctx, rng: random.Random, samples: int = 50, sigma=SIGMA) -> ManinTripleReport:
    """Evidence for the four conditions (retract/cohomology, invariance, nondegeneracy, isotropy)."""
    if which == "local":
        return _local_report(ctx, rng, samples, sigma)
    if which == "global":
        return _global_report(ctx, rng, samples, sigma)
    raise ValueError(f"unknown triple {which!r}")


def _local_report(ctx: LocalTripleContext, rng, samples, sigma) -> ManinTripleReport:
    from .randgen import random_element

    keys = ctx.keys()
    mm_keys = ctx.keys({Sector.MM})
    conds = []

    # (i') the inclusions induce an isomorphism on cohomology: a retract plus matching ranks
    ranks_x = dict(cohomology_ranks(ctx.gDx.assignment, ctx.window, ctx.L))
    ranks_m = dict(cohomology_ranks(ctx.gm.assignment, ctx.window, ctx.L))
    plus = len(ctx.positive_keys())
    expected = {0: plus + ranks_m[0], 1: ranks_m[1], 2: ranks_m[2]}

    def retract_case(deg):
        x = random_element(ctx.gDx, rng, deg, keys)
        p, q = local_P(ctx, x)
        ip = local_I(ctx, p, q)
        lhs = local_h(ctx, x).d() + local_h(ctx, x.d())
        if lhs != x - ip:
            return f"[d,h] != id - IP on {describe(x)}"
        p2, q2 = local_P(ctx, ip)
        if p2 != p or q2 != q:
            return f"P I != id on {describe(ip)}"
        return None

    n, bad = _first_failure((rng.choice((0, 1)) for _ in range(samples)), retract_case)
    ok = bad is None and ranks_x == expected
    conds.append(ConditionRecord(
        "i_cohomology_isomorphism", ok,
        {"H(g_Dx)": ranks_x, "H(g_+) + H(g_-)": expected, "retract_samples": n},
        bad if bad else (None if ok else f"ranks {ranks_x} differ from {expected}"),
    ))

    # (ii) graded symmetry and invariance
    def inv_case(_):
        dx, dy = rng.choice(((0, 0), (0, 1), (1, 0)))
        x = random_element(ctx.gDx, rng, dx, keys)
        y = random_element(ctx.gDx, rng, dy, keys)
        z = random_element(ctx.gDx, rng, 1 - dx - dy if dx + dy <= 1 else 0, keys)
        okk, res = invariance_check(x, y, z, sigma)
        if not okk:
            return f"residuals {res} on x={describe(x)}, y={describe(y)}, z={describe(z)}"
        a = random_element(ctx.gDx, rng, 0, keys)
        b = random_element(ctx.gDx, rng, 1, keys)
        if local_pairing(a, b, sigma) != local_pairing(b, a, sigma):
            return f"not symmetric on a={describe(a)}, b={describe(b)}"
        return None

    n, bad = _first_failure(range(samples), inv_case)
    conds.append(ConditionRecord("ii_invariant_symmetric", bad is None, {"samples": n}, bad))

    # (iii') nondegeneracy on cohomology
    g = gram_cohomology(ctx, sigma)
    fixture = _sigma_fixture(ctx, sigma)
    ok = g.invertible and fixture == 2
    conds.append(ConditionRecord(
        "iii_nondegenerate", ok,
        {"gram_size": [len(g.h0_basis), len(g.h1_basis)], "gram_rank": g.rank, "int_sigma_(ds,-ds)": fixture},
        None if ok else f"gram rank {g.rank} of {len(g.h0_basis)}; int_Sigma(ds,-ds) = {fixture}",
    ))

    # (iv') isotropy of both summands on cohomology
    def iso_case(_):
        x = random_element(ctx.gm, rng, 0, mm_keys)
        y = random_element(ctx.gm, rng, 1, mm_keys)
        xe, ye = TWElement(ctx.gDx, x.forms), TWElement(ctx.gDx, y.forms)
        if local_pairing(xe, ye, sigma):
            return f"g_- not isotropic on {describe(x)}, {describe(y)}"
        return None

    n, bad = _first_failure(range(samples), iso_case)
    ok = bad is None and g.h0_block_zero and g.h1_block_zero
    conds.append(ConditionRecord(
        "iv_isotropic", ok,
        {"H0_H0_zero": g.h0_block_zero, "H1_H1_zero": g.h1_block_zero, "samples": n},
        bad if bad else (None if ok else "diagonal gram blocks are not zero"),
    ))
    return ManinTripleReport("local", conds)


def integrate_over_sigma(el: TWElement, sigma=SIGMA) -> dict:
    """``int_Sigma`` of the 1-form part, as a coefficient vector."""
    out: dict = {}
    for edge, sign in sigma:
        for (wedge, exps), vec in el.form(edge).items():
            if len(wedge) == 1:
                _vadd(out, vec, sign * integrate_top(1, exps))
    return out


def _sigma_fixture(ctx: LocalTripleContext, sigma) -> Fraction:
    """``int_Sigma (ds, -ds)`` for a unit coefficient."""
    key = (0, (0, 0))
    el = TWElement.from_top(ctx.gDx, {W_EDGE: {((0,), (0,)): {key: 1}}, Z_EDGE: {((0,), (0,)): {key: -1}}})
    return integrate_over_sigma(el, sigma).get(key, Fraction(0))


def _global_report(G, rng, samples, sigma) -> ManinTripleReport:
    from .randgen import random_element

    ctx = G.local
    N = G.N
    lk = ctx.keys()
    ak = G.atom_keys()
    conds = []

    ranks_x = dict(cohomology_ranks(ctx.gDx.assignment, ctx.window, ctx.L))
    ranks_glob = dict(cohomology_ranks(G.gG.assignment, None, ctx.L, coefficient_keys=G.atom_monomials()))
    plus = len(ctx.positive_keys())
    expected_total = {p: N * ranks_x[p] for p in range(3)}
    summed = {0: ranks_glob[0] + N * plus, 1: ranks_glob[1], 2: ranks_glob[2]}

    def retract_case(deg):
        om = tuple(random_element(ctx.gDx, rng, deg, lk) for _ in range(N))
        h = G.h_discsx(om)
        hd = G.h_discsx(tuple(x.d() for x in om))
        IG = G.I_global_all(G.P_global(om))
        ID = G.I_discs(G.P_discs(om))
        for i in range(N):
            if h[i].d() + hd[i] != om[i] - IG[i] - ID[i]:
                return f"[d,h_Discsx] identity fails at point {i} on {describe(om[i])}"
        mu = random_element(G.gG, rng, deg, ak)
        if G.h_global(mu).d() + G.h_global(mu.d()) != mu - G.P_global(G.I_global_all(mu)):
            return f"[d,h_Global] identity fails on {describe(mu)}"
        return None

    n, bad = _first_failure((rng.choice((0, 1)) for _ in range(samples)), retract_case)
    ok = bad is None and summed == expected_total
    conds.append(ConditionRecord(
        "i_cohomology_isomorphism", ok,
        {"H(g_PDiscsx)": expected_total, "H(g_Global) + H(g_PDiscs)": summed, "retract_samples": n},
        bad if bad else (None if ok else f"ranks {summed} differ from {expected_total}"),
    ))

    def inv_case(_):
        dx, dy = rng.choice(((0, 0), (0, 1), (1, 0)))
        dz = 1 - dx - dy
        xs = [random_element(ctx.gDx, rng, dx, lk) for _ in range(N)]
        ys = [random_element(ctx.gDx, rng, dy, lk) for _ in range(N)]
        zs = [random_element(ctx.gDx, rng, dz, lk) for _ in range(N)]
        r1 = global_pairing([x.bracket(y) for x, y in zip(xs, ys)], zs, sigma).value + (-1) ** (dx * dy) * global_pairing(
            ys, [x.bracket(z) for x, z in zip(xs, zs)], sigma).value
        r2 = global_pairing([x.d() for x in xs], ys, sigma).value + (-1) ** dx * global_pairing(xs, [y.d() for y in ys], sigma).value
        if r1 or r2:
            return f"residuals {r1}, {r2} on x={[describe(x) for x in xs]}"
        a = [random_element(ctx.gDx, rng, 0, lk) for _ in range(N)]
        b = [random_element(ctx.gDx, rng, 1, lk) for _ in range(N)]
        if global_pairing(a, b, sigma) != global_pairing(b, a, sigma):
            return "pairing not symmetric"
        return None

    n, bad = _first_failure(range(samples), inv_case)
    conds.append(ConditionRecord("ii_invariant_symmetric", bad is None, {"samples": n}, bad))

    g = gram_cohomology(ctx, sigma)
    ok = g.invertible and _sigma_fixture(ctx, sigma) == 2
    # block-diagonal across points: distinct points pair to zero
    cross_zero = True
    if N > 1:
        a = [constant_element(ctx.gDx, {(0, (0, 0)): 1})] + [TWElement.zero(ctx.gDx)] * (N - 1)
        b = [TWElement.zero(ctx.gDx), TWElement(ctx.gDx, h1_retract(ctx, "i", {(ctx.L.dim - 1, (-1, -1)): 1}).forms)] + [TWElement.zero(ctx.gDx)] * (N - 2)
        cross_zero = global_pairing(a, b, sigma).value == 0
    ok = ok and cross_zero
    conds.append(ConditionRecord(
        "iii_nondegenerate", ok,
        {"gram_rank": N * g.rank, "gram_size": N * len(g.h0_basis), "cross_point_zero": cross_zero},
        None if ok else f"gram rank {g.rank} of {len(g.h0_basis)} per point",
    ))

    # (iv') H(g_Global) sits in degree 1 and H(g_PDiscs) in degree 0, so each is isotropic;
    # checked on the representatives produced by the cohomology retract.
    reps_ok = True
    witness = None
    for _ in range(min(samples, 10)):
        i, j = rng.randrange(N), rng.randrange(N)
        x = {(rng.randrange(ctx.L.dim), (-1, -1)): 1}
        y = {(rng.randrange(ctx.L.dim), (-1, -1)): 1}
        fx = G.I_global_all(G.cohomology_retract("f", i, x))
        fy = G.I_global_all(G.cohomology_retract("f", j, y))
        if global_pairing(fx, fy, sigma).value:
            reps_ok, witness = False, f"representatives at {i},{j} pair nontrivially"
            break
        for k in range(N):
            back = G.cohomology_retract("g", k, G.cohomology_retract("f", i, x))
            if back != (x if k == i else {}):
                reps_ok, witness = False, f"g^{k} f^{i} != {'id' if k == i else '0'}"
                break
    ok = reps_ok and ranks_glob[0] == 0
    conds.append(ConditionRecord(
        "iv_isotropic", ok, {"H(g_Global)": ranks_glob, "retract_representatives": reps_ok}, witness,
    ))
    return ManinTripleReport("global", conds)
