"""Randomized robustness: small random systems must never crash the pipeline
and must keep the structural invariants that hold for every input."""

from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from tropd import (QPoint, TropCoeff, TropicalPair, general_position, make_tds,
                   regular_subdivision, singularities, stability_report,
                   trace_orbit, trop_field, tropical_curve)
from tropd.exact import dot

alpha_st = st.fractions(min_value=-4, max_value=4).map(lambda f: F(f).limit_denominator(16))


def system_strategy():
    def build(u_rows, v_rows):
        pairs = []
        idx = 1
        seen_u, seen_v = set(), set()
        for delta, n, m, a in u_rows:
            if (n, m) in seen_u:
                continue
            seen_u.add((n, m))
            pairs.append(TropicalPair(idx, "U", delta, (n - 1, m), TropCoeff.of(a)))
            idx += 1
        for delta, n, m, a in v_rows:
            if (n, m) in seen_v:
                continue
            seen_v.add((n, m))
            pairs.append(TropicalPair(idx, "V", delta, (n, m - 1), TropCoeff.of(a)))
            idx += 1
        return make_tds(pairs)

    row = st.tuples(st.sampled_from([1, -1]), st.integers(0, 2), st.integers(0, 2), alpha_st)
    return st.builds(build,
                     st.lists(row, min_size=1, max_size=4),
                     st.lists(row, min_size=1, max_size=4))


@settings(max_examples=60, deadline=None)
@given(tds=system_strategy())
def test_random_system_pipeline_is_total(tds):
    for f in ("U", "V", "I"):
        sub = regular_subdivision(tds, f)
        curve = tropical_curve(tds, f)
        # duality: one curve vertex per face, edges counted once
        assert len(curve.vertices) == len(sub.faces)
        pts = {p.id: p for p in sub.points}
        for e in sub.edges:
            i, j = pts[e.a].dominant[0], pts[e.b].dominant[0]
            te = curve.edge_for(i, j)
            if te is None:
                continue
            d = (pts[e.b].degree[0] - pts[e.a].degree[0],
                 pts[e.b].degree[1] - pts[e.a].degree[1])
            assert dot(d, te.tangent()) == 0
    general_position(tds)
    sings = singularities(tds)
    for s in sings:
        assert trop_field(tds, s.location).contains_zero()
    stability_report(tds)


@settings(max_examples=40, deadline=None)
@given(tds=system_strategy(),
       u=st.fractions(min_value=-5, max_value=5),
       v=st.fractions(min_value=-5, max_value=5))
def test_random_orbits_terminate_cleanly(tds, u, v):
    orbit = trace_orbit(tds, QPoint.of(F(u), F(v)))
    assert orbit.termination
    for s in orbit.segments:
        assert abs(s.direction[0]) + abs(s.direction[1]) == 1
