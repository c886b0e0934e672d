from fractions import Fraction as F

import pytest

from tropd import (CycleNotRealized, Feature, NoCommonSection, QPoint, Section,
                   find_crossing_cycles, portrait, portrait_signature,
                   return_map, separatrices, singularities, splitting_constant,
                   stability_report, trace_orbit)
from tropd.analysis import NotASeparatrixCarrier, feature_affine_point
from tropd.dynamics import HYBRID_CENTER, SINK, SOURCE
from tropd.exact import AffineQ, solve2x2
from conftest import build_autocat, build_crossing1, build_crossing2


def sing_feature(tds, which=0):
    s = singularities(tds)[which]
    return Feature("singularity", s.location, tuple(sorted(s.host_u + s.host_v)), s)


def vertex_feature(tds, members):
    port = portrait(tds)
    for v in port.curves["I"].vertices:
        if set(v.maximizers) == set(members):
            return Feature("vertex", v.point, tuple(sorted(v.maximizers)))
    raise AssertionError(f"no vertex {members}")


# -- return maps -------------------------------------------------------------

def test_return_map_crossing1(crossing1_25):
    rm = return_map(crossing1_25, [1, 4, 2, 3], Section.of("v", 0))
    assert rm.multiplier_c == F(4, 9)
    assert rm.offset.eval(crossing1_25.alphas()) == F(10, 9)
    assert rm.fixed_point == 2
    assert rm.verdict == "hyperbolic-stable"
    # offset coefficients sum to zero over all pairs (translation invariance)
    assert rm.offset.coeff_sum() == 0


def test_return_map_not_realized_at_minus_20():
    with pytest.raises(CycleNotRealized):
        return_map(build_crossing1(-20), [1, 4, 2, 3], Section.of("v", 0))


def test_return_map_identity_crossing2(crossing2_4):
    rm = return_map(crossing2_4, [1, 4, 2, 3], Section.of("v", 0, (F(0), F(1, 4))))
    assert rm.multiplier_c == 1
    assert rm.offset.eval(crossing2_4.alphas()) == 0
    assert all(c == 0 for c in rm.offset.lin.values())
    assert rm.verdict == "band"
    assert rm.fixed_point is None


def test_return_map_composition_matches_tracing(crossing1_25):
    rm = return_map(crossing1_25, [1, 4, 2, 3], Section.of("v", 0))
    x0 = F(5, 2)
    o = trace_orbit(crossing1_25, QPoint.of(x0, 0))
    # collect successive upward crossings of v = 0
    hits = [o.start.u]
    for a, b in zip(o.vertices, o.vertices[1:]):
        if a.u == b.u and a.v < 0 <= b.v:
            hits.append(a.u)
    alphas = crossing1_25.alphas()
    assert hits[1] == rm.apply(hits[0], alphas)
    c_emp = (rm.apply(rm.apply(x0, alphas), alphas) - rm.apply(x0, alphas)) / (rm.apply(x0, alphas) - x0)
    assert c_emp == rm.multiplier_c


def test_find_crossing_cycles(crossing1_25, crossing2_4):
    recs = find_crossing_cycles(crossing1_25)
    assert len(recs) == 1
    assert set(recs[0].regions) == {1, 4, 2, 3}
    assert recs[0].multiplier == F(4, 9)
    assert find_crossing_cycles(build_crossing1(-15)) == []
    assert find_crossing_cycles(build_autocat(F(-1, 4))) == []
    band = find_crossing_cycles(crossing2_4)
    assert len(band) == 1 and band[0].verdict == "band"


# -- separatrices ------------------------------------------------------------

def test_autocat_persistence_identity():
    for a in (F(3, 5), F(3, 4), F(9, 10)):
        t = build_autocat(a)
        f = sing_feature(t)
        assert f.payload.kind == SINK
        seps = separatrices(t, f)
        arrivals = [o for o in seps if o.orientation == "Backward"]
        assert len(arrivals) == 2
        hit36 = [o for o in arrivals if len(o.vertices) >= 2 and o.vertices[1].u > o.start.u]
        assert len(hit36) == 1
        orbit = hit36[0]
        # meets the crossing line v = u + 1 at u = alpha - 1
        assert orbit.vertices[1] == QPoint.of(a - 1, a)
        # and terminates exactly on the vertex that shares this u-coordinate
        assert orbit.vertices[-1] == QPoint.of(a - 1, 1 - a)
        port = portrait(t)
        vertex_us = {v.point.u for v in port.curves["I"].vertices
                     if set(v.maximizers) == {1, 4, 6}}
        assert vertex_us == {a - 1}


def test_source_has_two_departures(autocat_quarter):
    f = sing_feature(autocat_quarter)
    assert f.payload.kind == SOURCE
    seps = separatrices(autocat_quarter, f)
    forwards = [o for o in seps if o.orientation == "Forward"]
    assert len(forwards) == 2


def test_hybrid_point_has_no_separatrices(crossing2_4):
    sings = singularities(crossing2_4)
    hybrid = [s for s in sings if s.kind == HYBRID_CENTER][0]
    f = Feature("singularity", hybrid.location, (), hybrid)
    assert separatrices(crossing2_4, f) == []


# -- affine feature coordinates (vertex model) --------------------------------

def test_vertex_alpha_dependence_crossing1():
    t = build_crossing1(-25)
    f = vertex_feature(t, (2, 4, 5))
    ap = feature_affine_point(t, f)
    # coefficient rows sum to zero over the three defining pairs
    assert ap.u.coeff_sum() == 0 and ap.v.coeff_sum() == 0
    # symbolic solve agrees with fresh numeric solves at five parameter values
    for a in (-25, -24, F(-47, 2), -20, F(-61, 5)):
        t2 = build_crossing1(a)
        vals = t2.alphas()
        got = ap.eval(vals)
        f2 = vertex_feature(t2, (2, 4, 5))
        assert got == f2.point
        assert got == QPoint.of(F(-15, 4) - F(a) / 4, F(5, 4) - F(a) / 4)


def test_singularity_affine_coordinates(autocat_quarter):
    f = sing_feature(autocat_quarter)
    ap = feature_affine_point(autocat_quarter, f)
    for a in (F(1, 8), F(1, 4), F(2, 5)):
        t2 = build_autocat(a)
        assert ap.eval(t2.alphas()) == QPoint.of(-a, a)


# -- splitting constants -----------------------------------------------------

def test_crossing2_homoclinic_has_zero_splitting(crossing2_4):
    p245 = vertex_feature(crossing2_4, (2, 4, 5))
    delta, form = splitting_constant(crossing2_4, p245, p245)
    assert delta == 0
    assert all(c == 0 for c in form.lin.values())


def test_crossing1_connection_roots():
    # at the bifurcation the gap root lands exactly on the published value
    t = build_crossing1(-14)
    q = sing_feature(t)
    p245 = vertex_feature(t, (2, 4, 5))
    delta, form = splitting_constant(t, q, p245, Section.of("v", 3))
    coef = form.coeff(5)
    assert coef != 0
    rest = form.const + sum(c * t[k].alpha.value for k, c in form.lin.items() if k != 5)
    root = -rest / coef
    assert root == -13
    # homoclinic root from the vertex departure side
    t2 = build_crossing1(F(-45, 2))
    delta2, form2 = splitting_constant(t2, vertex_feature(t2, (2, 4, 5)),
                                       vertex_feature(t2, (2, 4, 5)), Section.of("v", 3))
    coef2 = form2.coeff(5)
    root2 = -(form2.const + sum(c * t2[k].alpha.value for k, c in form2.lin.items() if k != 5)) / coef2
    assert root2 == -23


def test_splitting_constant_proportional_across_sections(crossing2_4):
    p245 = vertex_feature(crossing2_4, (2, 4, 5))
    _, f1 = splitting_constant(crossing2_4, p245, p245, Section.of("v", F(1, 2)))
    _, f2 = splitting_constant(crossing2_4, p245, p245, Section.of("u", F(1, 8)))
    # both identically zero here: proportional with any nonzero ratio
    assert all(c == 0 for c in f1.lin.values())
    assert all(c == 0 for c in f2.lin.values())
    # a live example: gaps for the crossing1 connection measured on two sections
    t = build_crossing1(-14)
    q = sing_feature(t)
    p = vertex_feature(t, (2, 4, 5))
    _, g1 = splitting_constant(t, q, p, Section.of("v", 3))
    _, g2 = splitting_constant(t, q, p, Section.of("v", F(7, 2)))
    ratio = None
    for k in set(g1.lin) | set(g2.lin):
        c1, c2 = g1.coeff(k), g2.coeff(k)
        assert (c1 == 0) == (c2 == 0)
        if c1 != 0:
            r = c2 / c1
            assert ratio is None or r == ratio
            ratio = r
    assert ratio not in (None, 0)


def test_no_common_section_error(autocat_quarter):
    # the sink of the negative-parameter system never meets the fold vertex
    t = build_autocat(F(-1, 4))
    f = sing_feature(t)
    v456 = vertex_feature(t, (4, 5, 6))
    with pytest.raises(NoCommonSection):
        splitting_constant(t, v456, f, Section.of("v", -50))


# -- stability reports and signatures ----------------------------------------

def test_stability_reports():
    assert stability_report(build_autocat(F(1, 4))).overall == "StructurallyStable"
    rep_half = stability_report(build_autocat(F(1, 2)))
    assert rep_half.overall == "ViolationFound"
    assert "gp1" in rep_half.witness
    rep_13 = stability_report(build_crossing1(-13))
    assert rep_13.overall == "ViolationFound"
    assert "b != 0" in rep_13.witness
    assert stability_report(build_crossing1(-25)).overall == "StructurallyStable"
    assert stability_report(build_crossing2(-4)).overall == "StructurallyStable"


def test_signature_same_chamber_and_translation():
    s1 = portrait_signature(build_autocat(F(1, 4)))
    s2 = portrait_signature(build_autocat(F(3, 8)))
    assert s1 == s2
    s3 = portrait_signature(build_autocat(F(3, 4)))
    assert s1 != s3
    shifted = build_autocat(F(1, 4)).translated(F(22, 7))
    assert portrait_signature(shifted) == s1


def test_connections_detected(crossing2_4):
    port = portrait(crossing2_4)
    assert len(port.connections) == 1
    conn = port.connections[0]
    assert conn.persistent
    assert conn.depart.point == conn.arrive.point == QPoint.of(F(1, 4), F(5, 4))


def test_degenerate_singularity_is_not_a_carrier():
    from tropd.dynamics import DEGENERATE
    t = build_autocat(0)
    s = singularities(t)[0]
    assert s.kind == DEGENERATE
    f = Feature("singularity", s.location, (), s)
    with pytest.raises(NotASeparatrixCarrier):
        separatrices(t, f)


def test_full_support_degree_four_pipeline():
    import random
    from tropd import full_support_tds
    from tropd.core import full_support_enumeration
    rng = random.Random(4)
    sup = full_support_enumeration(4)
    du = [rng.choice([1, -1]) for _ in sup]
    dv = [rng.choice([1, -1]) for _ in sup]
    ua = [F(-((a - 1) ** 2 + b * b), 3) + F(rng.randrange(1, 10**6), 10**9) for a, b in sup]
    va = [F(-(a * a + (b - 1) ** 2), 3) + F(rng.randrange(1, 10**6), 10**9) for a, b in sup]
    t = full_support_tds(4, du, dv, ua, va)
    rep = stability_report(t)
    assert rep.overall in ("StructurallyStable", "ViolationFound", "Inconclusive")
    assert portrait_signature(t)
