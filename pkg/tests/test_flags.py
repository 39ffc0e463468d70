from itertools import combinations

import pytest

from hmtriple.flags import (
    ClosedPoint,
    Generic,
    WLine,
    ZLine,
    assign_algebra,
    build_pdisc_flags,
    build_rect_flags,
    cosimplicial_product,
    restrict_assignment,
)


def _brute_chains(points):
    """Independent enumeration: chains in the closure order point < line < E."""
    def below(p, q):
        if q.kind == "E":
            return p.kind != "E"
        if p.kind == "pt":
            return (q.kind == "w" and q.i == p.i) or (q.kind == "z" and q.j == p.j)
        return False

    out = [0, 0, 0]
    for n in (1, 2, 3):
        for combo in combinations(points, n):
            order = sorted(combo, key=lambda p: {"pt": 0, "w": 1, "z": 1, "E": 2}[p.kind])
            if all(below(order[k], order[k + 1]) for k in range(n - 1)):
                out[n - 1] += 1
    return tuple(out)


def test_pdisc_counts():
    assert build_pdisc_flags(True).counts() == (3, 2, 0)
    assert build_pdisc_flags(False).counts() == (4, 5, 2)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_rect_counts_match_brute_force(N):
    cx = build_rect_flags(N, list(range(N)), [2 * k for k in range(N)])
    assert cx.counts() == _brute_chains(cx.points)
    assert cx.check_identities() == []


def test_rect_excludes_diagonal_points():
    cx = build_rect_flags(2, [0, 1], [0, 2])
    assert ClosedPoint(0, 0) not in cx.points and ClosedPoint(0, 1) in cx.points


@pytest.mark.parametrize("which", ["A_D", "A_Dx", "A_mm"])
def test_local_assignments_functorial(which):
    cx = build_pdisc_flags(which != "A_D")
    asg = assign_algebra(cx, which)
    assert asg.check_functorial() == []


def test_global_assignments_functorial(G2):
    assert G2.gG.assignment.check_functorial() == []
    for m in G2.big_models.values():
        assert m.assignment.check_functorial() == []


def test_forbidden_points_are_down_closed(G2):
    asg = G2.gG.assignment
    for cls in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        Q = asg.forbidden_points(cls)
        for F in asg.complex.simplices[1]:
            if F[1] in Q:
                assert F[0] in Q


def test_punctured_mismatch_raises():
    with pytest.raises(ValueError):
        assign_algebra(build_pdisc_flags(True), "A_D")


def test_cosimplicial_d_squared():
    asg = assign_algebra(build_pdisc_flags(False), "A_D")
    prod = cosimplicial_product(asg)
    c = {f: {(0, (1, 0)): k + 1} for k, f in enumerate(asg.complex.simplices[0])}
    assert prod.differential(1, prod.differential(0, c)) == {}


def test_restriction_projects():
    cx = build_pdisc_flags(False)
    asg = assign_algebra(cx, "A_D")
    sub = cx.subcomplex([ClosedPoint(0, 0), WLine(0), Generic()])
    sub_asg, proj = restrict_assignment(asg, sub)
    c = {f: {(0, (0, 0)): 1} for f in cx.all_simplices()}
    assert set(proj(c)) == set(sub.all_simplices())
    assert ZLine(0) not in sub_asg.point_labels
