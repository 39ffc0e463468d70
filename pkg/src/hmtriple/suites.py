"""Verification suites: each one is a list of exact checks with reproducible counterexamples."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable

from .adelic import adelic_cohomology, build_adelic, integration_defect
from .config import RunConfig, build_lie
from .envelope import (
    SymElement,
    TensorWord,
    TriangularElement,
    g_perp_basis,
    gdx_letters,
    ordered_monomial_count,
    pbw_straighten,
    sl2_dual_numbers,
    sl2_graded,
    sl2_truncated_forms,
    sym_d,
    sym_homotopy,
    tensor_quotient_dim,
    triangular_homotopy,
    word_d,
)
from .flags import FlagAlgebraAssignment, LaurentLaurent, WLine
from .globalmodels import GlobalContext
from .lie import LieStructure
from .local import (
    LocalTripleContext,
    W_EDGE,
    Z_EDGE,
    constant_element,
    disc_retract,
    h1_retract,
    local_I,
    local_P,
    local_h,
)
from .pairing import SIGMA, global_pairing, gram_cohomology, invariance_check, local_pairing, manin_triple_report
from .randgen import random_element, random_vector
from .scalars import ExpansionWindow, Sector
from .tw import TWElement, TWModel, cohomology_ranks, describe, validate

__all__ = ["CheckResult", "SuiteResult", "RunState", "run_suite", "SUITE_FUNCTIONS", "case_rng"]


def case_rng(seed: int, suite: str, check: str, index: int) -> random.Random:
    """Independent stream per case, derived from (seed, suite, case)."""
    return random.Random(f"{seed}|{suite}|{check}|{index}")


@dataclass
class CheckResult:
    name: str
    passed: bool
    samples: int = 1
    evidence: dict = field(default_factory=dict)
    counterexample: dict | None = None

    def as_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "samples": self.samples}
        if self.evidence:
            out["evidence"] = self.evidence
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteResult:
    name: str
    checks: list
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "checks": [c.as_dict() for c in self.checks],
        }


BROKEN_SL2 = {"dim": 3, "names": ["e", "h", "f"], "brackets": [[1, 0, {0: 2}], [1, 2, {2: -1}], [0, 2, {1: 1}]],
              "form": [[0, 0, 1], [0, 2, 0], [1, 0, 0]]}


class RunState:
    """Lazily built contexts shared by the suites of one run; applies sabotage fixtures."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.samples = config.samples_per_property
        self.sigma = ((W_EDGE, 1), (Z_EDGE, 1)) if config.sabotage == "wrong_sigma" else SIGMA

    @cached_property
    def L(self) -> LieStructure:
        return build_lie(BROKEN_SL2 if self.config.sabotage == "broken_jacobi" else self.config.lie)

    @property
    def window(self) -> ExpansionWindow:
        return self.config.window

    def local_context(self, window: ExpansionWindow | None = None) -> LocalTripleContext:
        ctx = LocalTripleContext(self.L, window or self.window)
        if self.config.sabotage == "drop_boundary":
            asg = ctx.gDx.assignment
            labels = dict(asg.point_labels)
            labels[WLine(0)] = LaurentLaurent
            broken = FlagAlgebraAssignment(asg.complex, labels, asg.algebra, asg.family)
            ctx.gDx = TWModel(broken, self.L, "g_Dx")
        return ctx

    @cached_property
    def local(self) -> LocalTripleContext:
        return self.local_context()

    @cached_property
    def glob(self) -> GlobalContext:
        return GlobalContext(self.L, self.config.marked_w, self.config.marked_z, self.window)

    @cached_property
    def glob3(self) -> GlobalContext:
        w, z = self.config.marked_w, self.config.marked_z
        while len(w) < 3:
            w, z = w + (max(w) + 1,), z + (max(z) + 1,)
        return GlobalContext(self.L, w[:3], z[:3], self.window)

    @cached_property
    def glob2(self) -> GlobalContext:
        c = self.glob
        if c.N == 2:
            return c
        w, z = self.config.marked_w, self.config.marked_z
        if len(w) < 2:
            w, z = w + (max(w) + 1,), z + (max(z) + 1,)
        return GlobalContext(self.L, w[:2], z[:2], self.window)


def _property(state: RunState, suite: str, name: str, fn: Callable, samples: int | None = None, evidence=None) -> CheckResult:
    """Run ``fn(rng) -> None | str`` on seeded cases; the first failure becomes the counterexample."""
    n = state.samples if samples is None else samples
    for k in range(n):
        rng = case_rng(state.config.seed, suite, name, k)
        try:
            bad = fn(rng)
        except Exception as exc:  # a crash inside a case is a reported failure
            bad = f"{type(exc).__name__}: {exc}"
        if bad:
            cx = {"case_seed": [state.config.seed, suite, name, k], "detail": bad}
            return CheckResult(name, False, k + 1, evidence or {}, cx)
    return CheckResult(name, True, n, evidence or {})


def _single(state: RunState, suite: str, name: str, fn: Callable) -> CheckResult:
    """A deterministic check: ``fn() -> (ok, evidence, detail)``."""
    try:
        ok, evidence, detail = fn()
    except Exception as exc:
        ok, evidence, detail = False, {}, f"{type(exc).__name__}: {exc}"
    cx = None if ok else {"case_seed": [state.config.seed, suite, name, 0], "detail": detail}
    return CheckResult(name, ok, 1, evidence, cx)


def _manin(state: RunState, suite: str, which: str, ctx) -> list[CheckResult]:
    rng = case_rng(state.config.seed, suite, "manin", 0)
    try:
        rep = manin_triple_report(which, ctx, rng, state.samples, state.sigma)
    except Exception as exc:
        cx = {"case_seed": [state.config.seed, suite, "manin", 0], "detail": f"{type(exc).__name__}: {exc}"}
        return [CheckResult(f"manin_{which}", False, 0, {}, cx)]
    out = []
    for c in rep.conditions:
        cx = None
        if not c.passed:
            cx = {"case_seed": [state.config.seed, suite, "manin", 0], "detail": c.counterexample or "condition failed"}
        out.append(CheckResult(f"manin_{which}_{c.name}", c.passed, 1, _jsonable(c.evidence), cx))
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    return obj


# ---------------------------------------------------------------------------
# dg identities
# ---------------------------------------------------------------------------


def dg_identity_case(model: TWModel, keys, max_degree: int) -> Callable:
    def case(rng):
        dx, dy, dz = (rng.randint(0, max_degree) for _ in range(3))
        x, y, z = (random_element(model, rng, d, keys, n_terms=2) for d in (dx, dy, dz))
        if not x.d().d().is_zero():
            return f"d^2 != 0 on {describe(x)}"
        ok, diags = validate(x.d())
        if not ok:
            return f"d leaves the model on {describe(x)}: {diags[0]}"
        xy = x.bracket(y)
        ok, diags = validate(xy)
        if not ok:
            return f"bracket leaves the model on {describe(x)}, {describe(y)}: {diags[0]}"
        sign = (-1) ** (dx * dy)
        if xy != y.bracket(x).scale(-sign):
            return f"graded antisymmetry fails on x={describe(x)}, y={describe(y)}"
        if x.bracket(y.bracket(z)) != xy.bracket(z) + y.bracket(x.bracket(z)).scale(sign):
            return f"graded Jacobi fails on x={describe(x)}, y={describe(y)}, z={describe(z)}"
        if xy.d() != x.d().bracket(y) + x.bracket(y.d()).scale((-1) ** dx):
            return f"Leibniz fails on x={describe(x)}, y={describe(y)}"
        return None

    return case


def _lie_check(state: RunState, suite: str) -> CheckResult:
    def run():
        problems = state.L.verify()
        return not problems, {"dim": state.L.dim}, "; ".join(problems[:3])

    return _single(state, suite, "lie_structure_constants", run)


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_local_triple(state: RunState) -> list[CheckResult]:
    s = "local_triple"
    ctx = state.local
    keys = ctx.keys()
    out = [_lie_check(state, s)]
    for model, deg in ((ctx.gD, 2), (ctx.gDx, 1), (ctx.gm, 1)):
        k = keys if model is not ctx.gm else ctx.keys({Sector.MM})
        out.append(_property(state, s, f"dg_identities_{model.name}", dg_identity_case(model, k, deg)))
    out += _manin(state, s, "local", ctx)
    return out


def suite_global_triple(state: RunState) -> list[CheckResult]:
    s = "global_triple"
    G = state.glob
    out = [_lie_check(state, s)]
    out.append(_property(state, s, "dg_identities_g_Global", dg_identity_case(G.gG, G.atom_keys(), 1)))
    G2 = state.glob2
    lk = G2.local.keys()
    for (i, j), m in G2.big_models.items():
        out.append(_property(state, s, f"dg_identities_g_{i}{j}", dg_identity_case(m, lk, 1)))
    out += _manin(state, s, "global", G)
    return out


def suite_retract_local(state: RunState) -> list[CheckResult]:
    s = "retract_local"
    ctx = state.local
    keys = ctx.keys()
    mm = ctx.keys({Sector.MM})
    pp = ctx.positive_keys()

    def ip(x):
        p, q = local_P(ctx, x)
        return local_I(ctx, p, q)

    def punctured_case(rng):
        xp = random_vector(rng, pp, 2)
        xm = random_element(ctx.gm, rng, rng.randint(0, 1), mm)
        p, q = local_P(ctx, local_I(ctx, xp, xm))
        if p != xp or q != xm:
            return f"P I != id on ({xp}, {describe(xm)})"
        x = random_element(ctx.gDx, rng, rng.randint(0, 1), keys)
        h = local_h(ctx, x)
        if not validate(h)[0]:
            return f"h leaves the model on {describe(x)}"
        if h.d() + local_h(ctx, x.d()) != x - ip(x):
            return f"[d,h] != id - IP on {describe(x)}"
        if not local_h(ctx, h).is_zero():
            return f"h^2 != 0 on {describe(x)}"
        if not local_h(ctx, ip(x)).is_zero():
            return f"h I != 0 on {describe(x)}"
        p, q = local_P(ctx, h)
        if p or not q.is_zero():
            return f"P h != 0 on {describe(x)}"
        return None

    def negative_case(rng):
        v = random_vector(rng, mm, 2)
        if h1_retract(ctx, "p", h1_retract(ctx, "i", v)) != v:
            return f"p i != id on {v}"
        deg = rng.randint(0, 1)
        x = random_element(ctx.gm, rng, deg, mm)
        h = h1_retract(ctx, "h", x)
        ipx = h1_retract(ctx, "i", h1_retract(ctx, "p", x)) if deg == 1 else TWElement.zero(ctx.gm)
        if h.d() + h1_retract(ctx, "h", x.d()) != x - ipx:
            return f"[d,h] != id - ip on {describe(x)}"
        return None

    def disc_case(variant):
        def case(rng):
            v = random_vector(rng, pp, 2)
            if disc_retract(ctx, "P", disc_retract(ctx, "I", v), variant) != v:
                return f"P I != id on {v}"
            x = random_element(ctx.gD, rng, rng.randint(0, 2), keys)
            h = disc_retract(ctx, "h", x, variant)
            if not validate(h)[0]:
                return f"h leaves g_D on {describe(x)}"
            rhs = x - disc_retract(ctx, "I", disc_retract(ctx, "P", x, variant))
            if h.d() + disc_retract(ctx, "h", x.d(), variant) != rhs:
                return f"[d,h] != id - IP on {describe(x)}"
            return None

        return case

    return [
        _property(state, s, "disc_punctured_retract", punctured_case),
        _property(state, s, "negative_part_H1_retract", negative_case),
        _property(state, s, "disc_retract_vertex", disc_case("vertex")),
        _property(state, s, "disc_retract_generic", disc_case("generic")),
    ]


def _global_retract_cases(G: GlobalContext):
    lk = G.local.keys()
    ak = G.atom_keys()
    pp = G.local.positive_keys()

    def case(rng):
        deg = rng.randint(0, 2)
        mu = random_element(G.gG, rng, deg, ak)
        h = G.h_global(mu)
        if not validate(h)[0]:
            return f"h_Global leaves g_Global on {describe(mu)}"
        if h.d() + G.h_global(mu.d()) != mu - G.P_global(G.I_global_all(mu)):
            return f"[d,h_Global] != id - P I on {describe(mu)}"
        if deg == 0 and G.h_offdiag(mu.d()) != G.P_discs(G.I_global_all(mu)):
            return f"h_offdiag d != P_Discs I_Global on {describe(mu)}"
        d2 = rng.randint(0, 1)
        om = tuple(random_element(G.local.gDx, rng, d2, lk) for _ in range(G.N))
        h = G.h_discsx(om)
        hd = G.h_discsx(tuple(x.d() for x in om))
        IG = G.I_global_all(G.P_global(om))
        ID = G.I_discs(G.P_discs(om))
        for i in range(G.N):
            if h[i].d() + hd[i] != om[i] - IG[i] - ID[i]:
                return f"[d,h_Discsx] identity fails at point {i} on {describe(om[i])}"
        f = tuple(random_vector(rng, pp, 2) for _ in range(G.N))
        if G.P_discs(G.I_discs(f)) != f:
            return f"P_Discs I_Discs != id on {f}"
        return None

    return case


def suite_retract_global(state: RunState) -> list[CheckResult]:
    s = "retract_global"
    out = []
    for G in (state.glob2, state.glob3):
        out.append(_property(state, s, f"global_retract_N{G.N}", _global_retract_cases(G)))
    G = state.glob2

    def empty_index(rng):
        mu = random_element(G.gG, rng, 0, G.atom_keys())
        got = G.P_discs(G.I_global_all(mu))
        if any(got):
            return f"P_Discs I_Global != 0 on {describe(mu)}"
        return None

    out.append(_property(state, s, "offdiag_empty_N2", empty_index))
    lk = G.local.keys()

    def big_disc_case(rng):
        (i, j), m = rng.choice(sorted(G.big_models.items()))
        x = random_element(m, rng, rng.randint(0, 2), lk)
        f = G.big_model_maps("f_ij", i, j, x)
        g = G.big_model_maps("g_ij", i, j, f)
        if G.big_model_maps("f_ij", i, j, g) != f:
            return f"f g != id at ({i},{j}) on {describe(x)}"
        h = G.big_model_maps("h_ij", i, j, x)
        if not validate(h)[0]:
            return f"h_ij leaves the model at ({i},{j})"
        if h.d() + G.big_model_maps("h_ij", i, j, x.d()) != x - g:
            return f"[d,h_ij] != id - g f at ({i},{j}) on {describe(x)}"
        return None

    out.append(_property(state, s, "big_disc_retracts", big_disc_case))
    ak = G.atom_keys()
    pp = G.local.positive_keys()

    def big_global_case(rng):
        deg = rng.randint(0, 2)
        om = {ij: random_element(m, rng, deg, lk) for ij, m in sorted(G.big_models.items())}
        h = G.global_retract("h", om)
        hd = G.global_retract("h", {k: v.d() for k, v in om.items()})
        IP = G.global_retract("I", G.global_retract("P", om))
        for ij in om:
            if h[ij].d() + hd[ij] != om[ij] - IP[ij]:
                return f"[d,h] != id - IP at {ij} on {describe(om[ij])}"
        mu = random_element(G.gG, rng, deg, ak)
        f = {ij: random_vector(rng, pp, 1) for ij in G.pairs()} if deg == 0 else {}
        P = G.global_retract("P", G.global_retract("I", (mu, f)))
        if P[0] != mu or any(P[1][ij] != f.get(ij, {}) for ij in G.pairs()):
            return f"P I != id on {describe(mu)}"
        if any(not v.is_zero() for v in G.global_retract("h", h).values()):
            return "h^2 != 0"
        if any(not v.is_zero() for v in G.global_retract("h", G.global_retract("I", (mu, f))).values()):
            return "h I != 0"
        Ph = G.global_retract("P", h)
        if not Ph[0].is_zero() or any(Ph[1].values()):
            return "P h != 0"
        return None

    out.append(_property(state, s, "big_model_global_retract", big_global_case))
    return out


def _sweep_letters(state: RunState):
    ctx = state.local_context(ExpansionWindow.square(1))
    return ctx, gdx_letters(ctx, 1)


def suite_pairing(state: RunState) -> list[CheckResult]:
    s = "pairing"
    ctx = state.local
    sig = state.sigma
    keys = ctx.keys()
    L = ctx.L
    out = []

    def fixture():
        a, b = 0, L.dim - 1
        x = constant_element(ctx.gDx, {(a, (0, 0)): 1})
        y = TWElement(ctx.gDx, h1_retract(ctx, "i", {(b, (-1, -1)): 2}).forms)
        one = TWElement.from_top(ctx.gDx, {W_EDGE: {((0,), (0,)): {(a, (0, 0)): 1}}, Z_EDGE: {((0,), (0,)): {(a, (0, 0)): -1}}})
        from .pairing import integrate_over_sigma

        val = integrate_over_sigma(one, sig).get((a, (0, 0)), 0)
        pv = local_pairing(x, y, sig).value
        ok = val == 2 and pv == L.kappa(a, b)
        ev = {"int_sigma_(ds,-ds)": _jsonable(val), "pairing_a_with_b_ds": _jsonable(pv)}
        return ok, ev, f"int_Sigma(ds,-ds) = {val}, <a, b (ds,-ds)> = {pv}, kappa = {L.kappa(a, b)}"

    out.append(_single(state, s, "sigma_normalization", fixture))

    def degree_rule(rng):
        x, y = (random_element(ctx.gDx, rng, 0, keys) for _ in range(2))
        if local_pairing(x, y, sig):
            return f"degree-(0,0) pair is nonzero: {describe(x)}, {describe(y)}"
        a = random_element(ctx.gDx, rng, 0, keys)
        b = random_element(ctx.gDx, rng, 1, keys)
        if local_pairing(a, b, sig) != local_pairing(b, a, sig):
            return f"not graded symmetric on {describe(a)}, {describe(b)}"
        c = rng.randint(-9, 9)
        b2 = random_element(ctx.gDx, rng, 1, keys)
        if local_pairing(a, b + b2.scale(c), sig).value != local_pairing(a, b, sig).value + c * local_pairing(a, b2, sig).value:
            return "not bilinear"
        return None

    out.append(_property(state, s, "symmetry_bilinearity_degree", degree_rule))

    def inv(rng):
        dx, dy = rng.choice(((0, 0), (0, 1), (1, 0)))
        x = random_element(ctx.gDx, rng, dx, keys)
        y = random_element(ctx.gDx, rng, dy, keys)
        z = random_element(ctx.gDx, rng, 1 - dx - dy, keys)
        ok, res = invariance_check(x, y, z, sig)
        if not ok:
            return f"residuals {_jsonable(res)} on x={describe(x)}, y={describe(y)}, z={describe(z)}"
        return None

    out.append(_property(state, s, "invariance_random", inv))

    def sweep():
        sctx, letters = _sweep_letters(state)
        els = [(l.label, l.degree, TWElement(sctx.gDx, l.element.forms)) for l in letters]
        deg0 = [e for e in els if e[1] == 0]
        n = 0
        for lx, _, x in deg0:
            dx = x.d()
            for ly, _, y in deg0:
                n += 1
                r = local_pairing(dx, y, sig).value + local_pairing(x, y.d(), sig).value
                if r:
                    return False, {"pairs": n}, f"<dx,y> + <x,dy> = {r} for x={lx}, y={ly}"
        m = 0
        brackets: dict = {}

        def br(i, j):
            if (i, j) not in brackets:
                brackets[(i, j)] = els[i][2].bracket(els[j][2])
            return brackets[(i, j)]

        for ix, (lx, px, x) in enumerate(els):
            for iy, (ly, py, y) in enumerate(els):
                if px + py > 1:
                    continue
                xy = br(ix, iy)
                for iz, (lz, pz, z) in enumerate(els):
                    if px + py + pz != 1:
                        continue
                    m += 1
                    r = local_pairing(xy, z, sig).value + (-1) ** (px * py) * local_pairing(y, br(ix, iz), sig).value
                    if r:
                        return False, {"pairs": n, "triples": m}, f"bracket invariance residual {r} for {lx}, {ly}, {lz}"
        return True, {"pairs": n, "triples": m, "basis_size": len(els)}, ""

    out.append(_single(state, s, "invariance_basis_sweep", sweep))

    def gram():
        g = gram_cohomology(ctx, sig)
        entries_ok = all(
            g.matrix[r][c] == (L.kappa(g.h0_basis[r][0], g.h1_basis[c][0])
                               if (g.h0_basis[r][1][0] + g.h1_basis[c][1][0], g.h0_basis[r][1][1] + g.h1_basis[c][1][1]) == (-1, -1)
                               else 0) * Fraction(1, 2)
            for r in range(len(g.h0_basis)) for c in range(len(g.h1_basis))
        )
        ok = g.invertible and g.h0_block_zero and g.h1_block_zero and entries_ok
        ev = {"size": [len(g.h0_basis), len(g.h1_basis)], "rank": g.rank, "H0_H0_zero": g.h0_block_zero,
              "H1_H1_zero": g.h1_block_zero, "entries_match_kappa": entries_ok}
        return ok, ev, f"gram rank {g.rank} of {len(g.h0_basis)}, blocks zero {g.h0_block_zero}/{g.h1_block_zero}, entries {entries_ok}"

    out.append(_single(state, s, "gram_nondegenerate", gram))

    G = state.glob

    def distinct(rng):
        x = random_element(G.local.gDx, rng, 0, keys)
        y = random_element(G.local.gDx, rng, 1, keys)
        zero = TWElement.zero(G.local.gDx)
        A = [x] + [zero] * (G.N - 1)
        B = [zero] * (G.N - 1) + [y]
        if G.N > 1 and global_pairing(A, B, sig):
            return "elements at distinct points pair nontrivially"
        A1 = [x] + [zero] * (G.N - 1)
        B1 = [TWElement(G.local.gDx, y.forms)] + [zero] * (G.N - 1)
        if global_pairing(A1, B1, sig).value != local_pairing(x, y, sig).value:
            return "global pairing does not restrict to the local pairing"
        return None

    out.append(_property(state, s, "global_pairing_diagonal", distinct))
    return out


def _formula_ranks(L: LieStructure, w: ExpansionWindow) -> dict:
    return {
        "g_Dx": {0: L.dim * (w.w_max + 1) * (w.z_max + 1), 1: L.dim * (-w.w_min) * (-w.z_min), 2: 0},
        "g_D": {0: L.dim * (w.w_max + 1) * (w.z_max + 1), 1: 0, 2: 0},
        "g_minus": {0: 0, 1: L.dim * (-w.w_min) * (-w.z_min), 2: 0},
    }


def suite_cohomology(state: RunState) -> list[CheckResult]:
    s = "cohomology"
    out = []
    windows = [state.window] + [ExpansionWindow.square(m) for m in (1, 3) if ExpansionWindow.square(m) != state.window]
    for w in windows:
        ctx = state.local_context(w)
        expected = _formula_ranks(ctx.L, w)
        for m in (ctx.gDx, ctx.gD, ctx.gm):
            def run(m=m, w=w, ctx=ctx):
                tw = dict(cohomology_ranks(m.assignment, w, ctx.L))
                ad = dict(adelic_cohomology(build_adelic(m.assignment, w), ctx.L))
                ok = tw == expected[m.name] == ad
                ev = {"thom_whitney": _jsonable(tw), "adelic": _jsonable(ad), "closed_form": _jsonable(expected[m.name])}
                return ok, ev, f"ranks TW {tw}, adelic {ad}, expected {expected[m.name]}"

            out.append(_single(state, s, f"ranks_{m.name}_{w}", run))
    return out


def suite_adelic(state: RunState) -> list[CheckResult]:
    s = "adelic_crosscheck"
    ctx = state.local
    G = state.glob2
    keys = ctx.keys()
    models = [(ctx.gD, keys, state.window, None), (ctx.gDx, keys, state.window, None),
              (ctx.gm, ctx.keys({Sector.MM}), state.window, None),
              (G.gG, G.atom_keys(), None, G.atom_monomials())]
    models += [(m, G.local.keys(), state.window, None) for _, m in sorted(G.big_models.items())]
    out = []
    for m, k, w, mons in models:
        def ranks(m=m, w=w, mons=mons):
            A = build_adelic(m.assignment, w, mons)
            ad = dict(adelic_cohomology(A, ctx.L))
            tw = dict(cohomology_ranks(m.assignment, w, ctx.L, coefficient_keys=mons))
            return ad == tw, {"adelic": ad, "thom_whitney": tw}, f"adelic {ad} != TW {tw}"

        out.append(_single(state, s, f"rank_agreement_{m.name}", ranks))

        def d2(rng, m=m, w=w, mons=mons):
            A = build_adelic(m.assignment, w, mons)
            n = rng.randint(0, 1)
            opts = A.level_keys(n)
            c: dict = {}
            for _ in range(3):
                f, mono = rng.choice(opts)
                c.setdefault(f, {})[(rng.randrange(ctx.L.dim), mono)] = Fraction(rng.randint(-9, 9) or 1)
            dd = A.d(n + 1, A.d(n, c)) if n == 0 else {}
            return f"d^2 != 0 on level-{n} cochain" if dd else None

        out.append(_property(state, s, f"adelic_d_squared_{m.name}", d2))

        def integ(rng, m=m, k=k):
            x = random_element(m, rng, rng.randint(0, min(2, m.complex.dim)), k)
            bad = integration_defect(x)
            return f"integration is not a cochain map on {describe(x)}" if bad else None

        out.append(_property(state, s, f"integration_cochain_map_{m.name}", integ))
    return out


def suite_envelope(state: RunState) -> list[CheckResult]:
    s = "envelope"
    ctx = state.local_context(ExpansionWindow.square(1))
    keys = ctx.keys()
    out = []

    def ip(x):
        p, q = local_P(ctx, x)
        return local_I(ctx, p, q)

    def side(rng):
        x = random_element(ctx.gDx, rng, rng.randint(0, 1), keys)
        h = local_h(ctx, x)
        if not local_h(ctx, h).is_zero() or not local_h(ctx, ip(x)).is_zero():
            return f"h^2 or h I nonzero on {describe(x)}"
        p, q = local_P(ctx, h)
        if p or not q.is_zero():
            return f"P h != 0 on {describe(x)}"
        return None

    out.append(_property(state, s, "retract_side_conditions", side))

    holder: dict = {}

    def perp():
        letters = gdx_letters(ctx, 2)
        B = g_perp_basis(ctx, 2)
        holder["B"], holder["letters"] = B, letters
        for l in letters:
            y = l.element - ip(l.element)
            if y - ip(y) != y:
                return False, {}, f"id - IP not idempotent on {l.label}"
            if l.block == "+" and not y.is_zero():
                return False, {}, f"constant {l.label} has a nonzero complement part"
            if l.block == "0" and y != l.element:
                return False, {}, f"complement letter {l.label} is not fixed by id - IP"
        pm = [l for l in letters if l.block == "0" and l.label.endswith("hatE")
              and l.key[1][0] >= 0 > l.key[1][1]]
        sample = pm[0] if pm else None
        ok_pm = sample is None or sample.element - ip(sample.element) == sample.element
        counts = {b: sum(1 for l in letters if l.block == b) for b in "-0+"}
        ev = {"blocks": counts, "perp": len(B)}
        return ok_pm, ev, "PM element moved by id - IP"

    out.append(_single(state, s, "complement_basis", perp))
    if "B" not in holder:
        return out
    B = holder["B"]
    degs = tuple(B.degrees)

    for n in range(4):
        def sym_case(rng, n=n):
            mono = [rng.randrange(len(B)) for _ in range(n)]
            x = SymElement.monomial(degs, mono, rng.randint(1, 9))
            lhs = sym_d(sym_homotopy(x, B), B) + sym_homotopy(sym_d(x, B), B)
            want = x if n else SymElement(degs)
            if lhs != want:
                return f"[d, h~] != {'id' if n else '0'} on Sym^{n} monomial {[B.letters[k].label for k in mono]}"
            return None

        out.append(_property(state, s, f"sym_homotopy_degree_{n}", sym_case))

    letters = holder["letters"]
    outer_deg = [l.degree for l in letters]
    minus_idx = [k for k, l in enumerate(letters) if l.block == "-"]
    plus_idx = [k for k, l in enumerate(letters) if l.block == "+"]

    def bimodule(rng):
        mw = tuple(rng.choice(minus_idx) for _ in range(rng.randint(0, 1)))
        pw = tuple(rng.choice(plus_idx) for _ in range(rng.randint(0, 1)))
        mono = tuple(sorted(rng.randrange(len(B)) for _ in range(rng.randint(1, 2))))
        t = TriangularElement()
        t.add(mw, mono, pw, Fraction(rng.randint(1, 9)))
        a, b = rng.choice(minus_idx), rng.choice(plus_idx)
        base = triangular_homotopy(t, B, outer_deg)
        left = triangular_homotopy(t.left_mul(a), B, outer_deg)
        right = triangular_homotopy(t.right_mul(b), B, outer_deg)
        if left.terms != base.left_mul(a).scale((-1) ** outer_deg[a]).terms:
            return f"h~ not left-linear for {letters[a].label}"
        if right.terms != base.right_mul(b).terms:
            return f"h~ not right-linear for {letters[b].label}"
        return None

    out.append(_property(state, s, "bimodule_linearity", bimodule))

    for g, gname in ((sl2_graded(), "sl2"), (sl2_dual_numbers(), "sl2_eps"), (sl2_truncated_forms(), "sl2_forms")):
        def lie_ok(g=g):
            p = g.verify()
            return not p, {"dim": g.dim}, "; ".join(p[:3])

        out.append(_single(state, s, f"graded_lie_{gname}", lie_ok))

        def confluence(rng, g=g):
            w = TensorWord.word([rng.randrange(g.dim) for _ in range(rng.randint(1, 3))])
            a = pbw_straighten(w, g)
            b = pbw_straighten(w, g, rng=rng)
            if a != b:
                return f"rewrite orders disagree on {[g.names[x] for x in next(iter(w.terms))]}"
            if pbw_straighten(a, g) != a:
                return "straightening is not idempotent"
            if g.differential and pbw_straighten(word_d(w, g), g) != pbw_straighten(word_d(a, g), g):
                return f"straightening does not commute with d on {[g.names[x] for x in next(iter(w.terms))]}"
            return None

        out.append(_property(state, s, f"pbw_confluence_{gname}", confluence, samples=max(100, state.samples)))

        def counts(g=g):
            ev = {}
            ok = True
            for d in (1, 2, 3):
                tq = tensor_quotient_dim(g, d)
                om = sum(ordered_monomial_count(g, k) for k in range(d + 1))
                ev[str(d)] = {"ordered_monomials": om, "tensor_quotient": tq}
                ok = ok and tq == om
            return ok, ev, f"counts differ: {ev}"

        out.append(_single(state, s, f"pbw_counts_{gname}", counts))
    return out


SUITE_FUNCTIONS = {
    "local_triple": suite_local_triple,
    "global_triple": suite_global_triple,
    "retract_local": suite_retract_local,
    "retract_global": suite_retract_global,
    "pairing": suite_pairing,
    "cohomology": suite_cohomology,
    "adelic_crosscheck": suite_adelic,
    "envelope": suite_envelope,
}


def run_suite(name: str, state: RunState) -> SuiteResult:
    t0 = time.perf_counter()
    checks = SUITE_FUNCTIONS[name](state)
    return SuiteResult(name, checks, time.perf_counter() - t0)
