"""Separatrices, splitting constants, return maps, cycles, stability report.

Everything here rides on two engines: the exact tracer (concrete orbits) and
an affine re-tracer that replays a concrete crossing route with coordinates
kept affine in the tropical coefficients.  Bifurcation values then fall out
as exact roots of affine gap functions.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .core import TropError, TropicalSystem, I, U, V
from .dynamics import (CROSSING, DEGENERATE, HYBRID_CENTER, HYBRID_SADDLE,
                       SINK, STRONG_STABLE_SADDLE, Singularity, classify_edge,
                       singularities)
from .exact import AffinePoint, AffineQ, QPoint, dot, frac, solve2x2
from .geometry import (GeneralPositionReport, TropEdge, TropicalCurve,
                       general_position, tropical_curve)
from .graph import CrossingGraph, build_graph, enumerate_cycles
from .orbits import (BACKWARD, CROSSING_POLICY, CANONICAL_POLICY, FORWARD,
                     Limits, Orbit, TERM_HYBRID, TERM_SINGULARITY, TERM_VERTEX,
                     _reversed, _Tracer, trace_orbit)


class NotASeparatrixCarrier(TropError):
    pass


class NoCommonSection(TropError):
    pass


class CycleNotRealized(TropError):
    pass


class NotACrossingCycle(TropError):
    pass


@dataclass(frozen=True)
class Section:
    """Axis-aligned section: the line {axis = level} (axis 'u' or 'v')."""

    axis: str
    level: Fraction
    interval: tuple | None = None

    @staticmethod
    def of(axis: str, level, interval=None) -> "Section":
        return Section(axis, frac(level), interval)


@dataclass(frozen=True)
class Feature:
    kind: str            # "vertex" | "singularity"
    point: QPoint
    members: tuple[int, ...]
    payload: object = None   # Singularity for kind == "singularity"

    def label(self, tds) -> tuple:
        if self.kind == "vertex":
            return ("P", tuple(sorted((tds[k].axis, tds[k].degree) for k in self.members)))
        return ("Q", self.payload.invariant_record(tds))


# ---------------------------------------------------------------------------
# Affine feature coordinates and symbolic separatrix traces
# ---------------------------------------------------------------------------

def _tie_row(tds, i, j):
    """Equation (deg_i - deg_j) . x = alpha_j - alpha_i as (a1, a2, AffineQ)."""
    ni, mi = tds[i].degree
    nj, mj = tds[j].degree
    rhs = AffineQ.symbol(j) - AffineQ.symbol(i)
    return (frac(ni - nj), frac(mi - mj), rhs)


def feature_affine_point(tds, feature: Feature) -> AffinePoint:
    """Coordinates of a vertex/singularity as affine forms of the coefficients."""
    if feature.kind == "vertex":
        mem = sorted(feature.members)
        i, j, l = mem[0], mem[1], mem[2]
        r1 = _tie_row(tds, i, j)
        r2 = _tie_row(tds, i, l)
    else:
        s: Singularity = feature.payload
        r1 = _tie_row(tds, *s.host_u)
        r2 = _tie_row(tds, *s.host_v)
    sol = solve2x2(r1[0], r1[1], r2[0], r2[1], r1[2], r2[2])
    if sol is None:
        raise TropError("degenerate feature equations")
    uu = sol[0] if isinstance(sol[0], AffineQ) else AffineQ(sol[0])
    vv = sol[1] if isinstance(sol[1], AffineQ) else AffineQ(sol[1])
    return AffinePoint(uu, vv)


@dataclass
class SymbolicTrace:
    """Affine replay of one crossing-only route."""

    flights: list          # (region, flow, AffinePoint start)
    crossings: list        # (edge_key (i,j), AffineQ u-coordinate on the edge)
    complete: bool         # False when the route hit a loop marker

    def first_crossing(self, key):
        for k, coord in self.crossings:
            if k == key:
                return coord
        return None

    def section_crossings(self, tds, section: Section) -> list:
        """(region, affine coordinate) for every crossing of an axis section."""
        alphas = tds.alphas()
        level = section.level
        out = []
        for idx, (region, d, start) in enumerate(self.flights):
            moving = d[1] if section.axis == "v" else d[0]
            if moving == 0:
                continue
            a0 = start.v.eval(alphas) if section.axis == "v" else start.u.eval(alphas)
            nxt = self._flight_end(idx, alphas, section.axis)
            if nxt is None:
                crossed = (a0 <= level) if moving > 0 else (a0 >= level)
            else:
                crossed = min(a0, nxt) <= level <= max(a0, nxt)
            if crossed:
                out.append((region, start.u if section.axis == "v" else start.v))
        return out

    def section_coordinate(self, tds, section: Section, occurrence: int = 0):
        hits = self.section_crossings(tds, section)
        return hits[occurrence][1] if occurrence < len(hits) else None

    def _flight_end(self, idx, alphas, axis):
        if idx + 1 < len(self.flights):
            p = self.flights[idx + 1][2]
            return p.v.eval(alphas) if axis == "v" else p.u.eval(alphas)
        return None


def symbolic_retrace(tds, start: AffinePoint, first: tuple, orbit: Orbit) -> SymbolicTrace:
    """Replay the crossing route of a traced orbit with affine coordinates.

    `first` is (region, flow) of the initial flight.  Stops at the first loop
    marker; later coordinates depend on the winding count and are not affine.
    """
    region, d = first
    pt = start
    flights = [(region, d, pt)]
    crossings = []
    complete = True
    for tok in orbit.route:
        if tok[0] == "x":
            i, j = tok[1]
            ni, mi = tds[i].degree
            nj, mj = tds[j].degree
            A, B = frac(nj - ni), frac(mj - mi)
            Csym = AffineQ.symbol(j) - AffineQ.symbol(i)
            if d[1] != 0:
                hit_u = pt.u
                hit_v = (Csym + hit_u * A) / (-B)
            else:
                hit_v = pt.v
                hit_u = (Csym + hit_v * B) / (-A)
            pt = AffinePoint(hit_u, hit_v)
            crossings.append(((i, j), hit_u))
            region = tok[2] if len(tok) > 2 else (j if region == i else i)
            d = tds[region].flow
            flights.append((region, d, pt))
        elif tok[0] == "loop":
            complete = False
            break
        elif tok[0] == "end":
            break
        else:
            complete = False
            break
    return SymbolicTrace(flights, crossings, complete)


# ---------------------------------------------------------------------------
# Separatrices
# ---------------------------------------------------------------------------

def _vertex_flight_departures(tds, members, point) -> list[tuple[int, tuple]]:
    out = []
    mem = sorted(members)
    degs = {k: tds[k].degree for k in mem}
    for r in mem:
        dflow = tds[r].flow
        if all((degs[r][0] - degs[c][0]) * dflow[0] + (degs[r][1] - degs[c][1]) * dflow[1] > 0
               for c in mem if c != r):
            out.append((r, dflow))
    return out


def _singularity_flight_departures(tds, s: Singularity) -> list[tuple[int, tuple]]:
    if s.kind in (SINK, STRONG_STABLE_SADDLE):
        return []
    if s.kind in (HYBRID_CENTER, HYBRID_SADDLE, DEGENERATE):
        return []
    host = s.host_u if s.t_host_axis == U else s.host_v
    i, j = host
    ni, mi = tds[i].degree
    nj, mj = tds[j].degree
    n = (frac(nj - ni), frac(mj - mi))
    out = []
    if dot(tds[i].flow, n) < 0:
        out.append((i, tds[i].flow))
    if dot(tds[j].flow, n) > 0:
        out.append((j, tds[j].flow))
    return out


def _departure_starts(tds, feature: Feature):
    if feature.kind == "vertex":
        return _vertex_flight_departures(tds, feature.members, feature.point)
    return _singularity_flight_departures(tds, feature.payload)


@dataclass
class SeparatrixBundle:
    feature: Feature
    direction: str                   # Forward (departure) / Backward (arrival)
    orbits: list[Orbit]
    symbolic: list[SymbolicTrace]


def _trace_separatrices(tds, feature: Feature, direction: str, limits: Limits) -> SeparatrixBundle:
    sys_ = tds if direction == FORWARD else _reversed(tds)
    feat_sys = feature if direction == FORWARD else _mirror_feature(sys_, feature)
    starts = _departure_starts(sys_, feat_sys)
    start_affine = feature_affine_point(tds, feature)
    tracer = _Tracer(sys_, CROSSING_POLICY, limits)
    orbits, traces = [], []
    for region, dflow in starts:
        orbit = tracer.run(feature.point, direction, initial_state=("flight", region, dflow))
        orbits.append(orbit)
        traces.append(symbolic_retrace(sys_, start_affine, (region, dflow), orbit))
    return SeparatrixBundle(feature, direction, orbits, traces)


def _mirror_feature(rev_tds, feature: Feature) -> Feature:
    """The same geometric feature seen by the time-reversed system."""
    if feature.kind == "vertex":
        return feature
    revs = [s for s in singularities(rev_tds) if s.location == feature.point]
    if not revs:
        raise NotASeparatrixCarrier(f"no singularity at {feature.point} after reversal")
    return Feature("singularity", feature.point, feature.members, revs[0])


def separatrices(tds: TropicalSystem, at: Feature, limits: Limits | None = None) -> list[Orbit]:
    """Departure and arrival separatrices of a vertex or singularity.

    Crossing-flow orbits only; they stop at sliding edges, vertices, or run
    unbounded.  Hybrid points have none.
    """
    limits = limits or Limits()
    if at.kind == "singularity" and at.payload.kind in (HYBRID_CENTER, HYBRID_SADDLE):
        return []
    if at.kind == "singularity" and at.payload.kind == DEGENERATE:
        raise NotASeparatrixCarrier(f"degenerate singularity at {at.point}")
    dep = _trace_separatrices(tds, at, FORWARD, limits)
    arr = _trace_separatrices(tds, at, BACKWARD, limits)
    return dep.orbits + arr.orbits


# ---------------------------------------------------------------------------
# Portrait: one-stop analysis bundle
# ---------------------------------------------------------------------------

@dataclass
class Connection:
    depart: Feature
    arrive: Feature
    b: dict                 # sparse splitting coefficients (pair index -> Fraction)
    delta: AffineQ          # gap on the chosen section
    persistent: bool        # all coefficients vanish


@dataclass
class CycleRecord:
    regions: tuple[int, ...]
    multiplier: Fraction
    offset: AffineQ
    fixed_point: Fraction | None
    section_edge: tuple[int, int]
    witness: QPoint
    verdict: str            # "hyperbolic-stable" | "hyperbolic-unstable" | "band"


@dataclass
class Portrait:
    tds: TropicalSystem
    curves: dict
    gp: GeneralPositionReport
    edge_classes: dict
    sings: list
    graph: CrossingGraph
    features: list
    bundles: dict
    connections: list
    cycles: list
    vertex_orbits: list
    inconclusive: bool


@functools.lru_cache(maxsize=256)
def portrait(tds: TropicalSystem, max_segments: int = 10_000) -> Portrait:
    limits = Limits(max_segments=max_segments)
    curves = {f: tropical_curve(tds, f) for f in (U, V, I)}
    gp = general_position(tds)
    edge_classes = {e.key: classify_edge(tds, e) for e in curves[I].edges}
    sings = singularities(tds)
    graph = build_graph(tds, curves[I].subdivision)

    features: list[Feature] = []
    for v in curves[I].vertices:
        if len(v.maximizers) == 3:
            features.append(Feature("vertex", v.point, tuple(sorted(v.maximizers))))
    for s in sings:
        features.append(Feature("singularity", s.location, tuple(sorted(s.host_u + s.host_v)), s))

    bundles = {}
    inconclusive = False
    for f in features:
        if f.kind == "singularity" and f.payload.kind in (HYBRID_CENTER, HYBRID_SADDLE, DEGENERATE):
            continue
        dep = _trace_separatrices(tds, f, FORWARD, limits)
        arr = _trace_separatrices(tds, f, BACKWARD, limits)
        bundles[f.label(tds) + (str(f.point),)] = (f, dep, arr)
        for o in dep.orbits + arr.orbits:
            if o.termination[0] == "SegmentCap":
                inconclusive = True

    connections = _find_connections(tds, bundles)
    cycles = find_crossing_cycles(tds, curves[I], graph)
    vertex_orbits = []
    for v in curves[I].vertices:
        o = trace_orbit(tds, v.point, FORWARD, policy=CANONICAL_POLICY, limits=limits)
        vertex_orbits.append((tuple(sorted(v.maximizers)), o))
        if o.termination[0] == "SegmentCap":
            inconclusive = True
    return Portrait(tds, curves, gp, edge_classes, sings, graph, features,
                    bundles, connections, cycles, vertex_orbits, inconclusive)


def _feature_at_point(tds, port_features, p_str):
    for f in port_features:
        if str(f.point) == p_str:
            return f
    return None


def _find_connections(tds, bundles) -> list[Connection]:
    """Departure separatrices that terminate exactly on another carrier."""
    out = []
    feats = [f for (f, _, _) in bundles.values()]
    for f, dep, arr in bundles.values():
        for orbit, sym in zip(dep.orbits, dep.symbolic):
            kind = orbit.termination[0]
            if kind not in (TERM_VERTEX, TERM_SINGULARITY, TERM_HYBRID):
                continue
            target = _feature_at_point(tds, feats, orbit.termination[1])
            if target is None:
                continue
            delta, bvec = _connection_gap(tds, f, target, sym, orbit)
            if delta is None:
                continue
            out.append(Connection(f, target, bvec, delta, all(c == 0 for c in bvec.values())))
    return out


def _connection_gap(tds, src: Feature, dst: Feature, sym: SymbolicTrace, orbit: Orbit):
    """Gap between the final flight line of a departure and its target feature."""
    if not sym.flights or not sym.complete:
        return None, None
    region, d, pt = sym.flights[-1]
    q = feature_affine_point(tds, dst)
    delta = (pt.u - q.u) if d[1] != 0 else (pt.v - q.v)
    return delta, dict(delta.lin)


def splitting_constant(tds: TropicalSystem, depart: Feature, arrive: Feature,
                       section: Section | None = None, limits: Limits | None = None):
    """Signed gap between a departure and an arrival separatrix, affine in the
    coefficients; returns (delta value at the current alphas, AffineQ form).

    With an explicit section the gap is measured where both orbits cross it;
    otherwise the first commonly crossed edge (or shared flight line) is used.
    """
    limits = limits or Limits()
    dep = _trace_separatrices(tds, depart, FORWARD, limits)
    arr = _trace_separatrices(tds, arrive, BACKWARD, limits)
    alphas = tds.alphas()
    candidates = []
    for d_orb, d_sym in zip(dep.orbits, dep.symbolic):
        for a_orb, a_sym in zip(arr.orbits, arr.symbolic):
            if section is not None:
                a_hits = a_sym.section_crossings(tds, section)
                for region_d, cd in d_sym.section_crossings(tds, section):
                    for region_a, ca in a_hits:
                        if region_d == region_a:
                            candidates.append(cd - ca)
                continue
            for key, coord in d_sym.crossings:
                ca = a_sym.first_crossing(key)
                if ca is not None:
                    candidates.append(coord - ca)
                    break
            else:
                gap = _flight_line_gap(tds, d_sym, a_sym)
                if gap is not None:
                    candidates.append(gap)
    if not candidates:
        raise NoCommonSection(f"no shared section between {depart.kind} and {arrive.kind}")
    best = min(candidates, key=lambda g: abs(g.eval(alphas)))
    return best.eval(alphas), best


def _flight_line_gap(tds, d_sym: SymbolicTrace, a_sym: SymbolicTrace):
    """Gap between two flight lines of the same region (parallel by construction)."""
    for region_d, dd, pd in reversed(d_sym.flights):
        for region_a, _da, pa in a_sym.flights:
            if region_d != region_a:
                continue
            return (pd.u - pa.u) if dd[1] != 0 else (pd.v - pa.v)
    return None


# ---------------------------------------------------------------------------
# Crossing cycles and return maps
# ---------------------------------------------------------------------------

def _cycle_edges(tds, curve_i: TropicalCurve, regions):
    edges = []
    n = len(regions)
    for idx in range(n):
        a, b = regions[idx], regions[(idx + 1) % n]
        e = curve_i.edge_for(a, b)
        if e is None:
            raise NotACrossingCycle(f"no tropical edge between regions {a} and {b}")
        if classify_edge(tds, e).kind != CROSSING:
            raise NotACrossingCycle(f"edge {e.key} is not of crossing type")
        edges.append(e)
    return edges


def _compose_cycle(tds, regions, edges):
    """Composed return map on the first edge: coordinate -> coordinate."""
    from .dynamics import transit_map

    slope = Fraction(1)
    offset = AffineQ(0)
    n = len(regions)
    for idx in range(n):
        leave = regions[(idx + 1) % n]
        e = edges[idx]
        axis_in = V if tds[regions[idx]].flow[1] != 0 else U
        m = transit_map(tds, e, axis_in)
        slope = m.slope * slope
        offset = m.slope * offset + m.offset
    return slope, offset


def _edge_coord_interval_chain(tds, regions, edges, alphas):
    """Open interval of first-edge coordinates whose whole lap stays on-edge."""
    lo, hi = None, None
    slope = Fraction(1)
    offset = Fraction(0)
    from .dynamics import transit_map

    n = len(regions)
    for idx in range(n + 1):
        e = edges[idx % n]
        # current coordinate on edge e equals slope * x + offset (x on edge 0)
        elo, ehi = _edge_extent_in_transit_coord(tds, e, regions[idx % n], alphas)
        for bound, is_lo in ((elo, True), (ehi, False)):
            if bound is None:
                continue
            # slope*x + offset >(or <) bound
            if slope > 0:
                b = (bound - offset) / slope
                if is_lo:
                    lo = b if lo is None or b > lo else lo
                else:
                    hi = b if hi is None or b < hi else hi
            else:
                b = (bound - offset) / slope
                if is_lo:
                    hi = b if hi is None or b < hi else hi
                else:
                    lo = b if lo is None or b > lo else lo
        if idx == n:
            break
        axis_in = V if tds[regions[idx % n]].flow[1] != 0 else U
        m = transit_map(tds, e, axis_in)
        slope_new = m.slope * slope
        offset = m.slope * offset + m.offset.eval(alphas)
        slope = slope_new
    return lo, hi


def _edge_extent_in_transit_coord(tds, e: TropEdge, incoming_region, alphas):
    """Extent of the edge expressed in the incoming flight's preserved coordinate."""
    lo, hi = e.coord_interval()
    pres_is_u = tds[incoming_region].flow[1] != 0
    param_is_u = e.param_axis() == "u"
    if pres_is_u == param_is_u:
        return lo, hi
    A, B, C = e.line_coeffs()
    s = (-A / B) if param_is_u else (-B / A)

    def conv(c):
        return (-(A * c + C) / B) if param_is_u else (-(B * c + C) / A)

    if lo is None and hi is None:
        return None, None
    if lo is not None and hi is not None:
        a, b = conv(lo), conv(hi)
        return (min(a, b), max(a, b))
    bound = conv(lo if lo is not None else hi)
    orig_is_lo = lo is not None
    new_is_lo = orig_is_lo == (s > 0)
    return (bound, None) if new_is_lo else (None, bound)


@dataclass(frozen=True)
class ReturnMap:
    """P(x) = c*x + offset(alpha) on the section coordinate."""

    section: Section
    multiplier_c: Fraction
    offset: AffineQ
    fixed_point: Fraction | None
    section_edge: tuple[int, int]
    witness: QPoint
    regions: tuple[int, ...]
    verdict: str

    def apply(self, x, alphas) -> Fraction:
        return self.multiplier_c * frac(x) + self.offset.eval(alphas)


def return_map(tds: TropicalSystem, graph_cycle, section: Section,
               curve_i: TropicalCurve | None = None) -> ReturnMap:
    """First-return map of a crossing cycle on an axis section.

    Flights preserve the section coordinate up to the first crossing, so the
    composed edge-transit chain IS the section return map.  Realization is
    decided by exact interval propagation and confirmed by a trace.
    """
    curve_i = curve_i or tropical_curve(tds, I)
    regions = list(graph_cycle)
    sec_is_horizontal_line = section.axis == "v"   # {v = level}, crossed by vertical flights
    rot = None
    for idx, r in enumerate(regions):
        if (tds[r].flow[1] != 0) == sec_is_horizontal_line:
            rot = idx
            break
    if rot is None:
        raise NotACrossingCycle("no flight of the cycle crosses the section")
    regions = regions[rot:] + regions[:rot]
    edges = _cycle_edges(tds, curve_i, regions)
    alphas = tds.alphas()

    lo, hi = _edge_coord_interval_chain(tds, regions, edges, alphas)
    if lo is not None and hi is not None and lo >= hi:
        raise CycleNotRealized(f"empty realization interval for cycle {tuple(graph_cycle)}")

    c, offset = _compose_cycle(tds, regions, edges)
    if c <= 0:
        raise NotACrossingCycle("cycle composition has non-positive multiplier")
    off_val = offset.eval(alphas)

    if c != 1:
        fixed = off_val / (1 - c)
        if (lo is not None and fixed <= lo) or (hi is not None and fixed >= hi):
            raise CycleNotRealized(f"fixed point off the realized interval for {tuple(graph_cycle)}")
        wit_coord = fixed
    else:
        if off_val != 0:
            raise CycleNotRealized("multiplier 1 with nonzero drift never closes")
        fixed = None
        if section.interval:
            a, b = section.interval
            wit_coord = (frac(a) + frac(b)) / 2
        elif lo is None and hi is None:
            wit_coord = frac(0)
        elif lo is None:
            wit_coord = hi - 1
        elif hi is None:
            wit_coord = lo + 1
        else:
            wit_coord = (lo + hi) / 2

    witness = _edge_point_from_transit_coord(tds, edges[0], regions[0], wit_coord)
    verify = trace_orbit(tds, witness, FORWARD, policy=CANONICAL_POLICY)
    if not verify.periodic:
        raise CycleNotRealized(f"trace from {witness} is not periodic")
    mode_regions = [m[1] for m in verify.mode_sequence() if m[0] == "region"]
    if set(mode_regions) != set(regions):
        raise CycleNotRealized("trace wanders off the requested cycle")

    verdict = "band" if c == 1 else ("hyperbolic-stable" if c < 1 else "hyperbolic-unstable")
    return ReturnMap(section, c, offset, fixed, edges[0].key, witness, tuple(regions), verdict)


def _edge_point_from_transit_coord(tds, e: TropEdge, incoming_region, coord) -> QPoint:
    A, B, C = e.line_coeffs()
    vertical_in = tds[incoming_region].flow[1] != 0
    if vertical_in:   # preserved coordinate is u
        return QPoint(coord, -(A * coord + C) / B)
    return QPoint(-(B * coord + C) / A, coord)


def find_crossing_cycles(tds: TropicalSystem, curve_i: TropicalCurve | None = None,
                         graph: CrossingGraph | None = None) -> list[CycleRecord]:
    """Graph cycles that are geometrically realized, with their return data."""
    curve_i = curve_i or tropical_curve(tds, I)
    graph = graph or build_graph(tds, curve_i.subdivision)
    cycles, _truncated = enumerate_cycles(graph, min_len=4)
    deg2pair = {}
    for node in graph.nodes:
        deg2pair[node.degree] = node.pair_index
    out = []
    alphas = tds.alphas()
    for cyc in cycles:
        regions = tuple(deg2pair[d] for d in cyc)
        try:
            edges = _cycle_edges(tds, curve_i, regions)
        except NotACrossingCycle:
            continue
        slope, offset = _compose_cycle(tds, regions, edges)
        lo, hi = _edge_coord_interval_chain(tds, regions, edges, alphas)
        if lo is not None and hi is not None and lo >= hi:
            continue
        off_val = offset.eval(alphas)
        if slope == 1:
            if off_val != 0:
                continue
            if lo is None and hi is None:
                w = frac(0)
            elif lo is None:
                w = hi - 1
            elif hi is None:
                w = lo + 1
            else:
                w = (lo + hi) / 2
            fixed = None
            verdict = "band"
        else:
            w = off_val / (1 - slope)
            if (lo is not None and w <= lo) or (hi is not None and w >= hi):
                continue
            fixed = w
            verdict = "hyperbolic-stable" if slope < 1 else "hyperbolic-unstable"
        witness = _edge_point_from_transit_coord(tds, edges[0], regions[0], w)
        check = trace_orbit(tds, witness, FORWARD, policy=CANONICAL_POLICY)
        if not check.periodic:
            continue
        out.append(CycleRecord(regions, slope, offset, fixed, edges[0].key, witness, verdict))
    return out


# ---------------------------------------------------------------------------
# Stability report and signature
# ---------------------------------------------------------------------------

@dataclass
class StabilityReport:
    general_position: GeneralPositionReport
    singularity_kinds: list
    crossing_cycles: list
    separatrix_connections: list
    overall: str          # "StructurallyStable" | "Inconclusive" | "ViolationFound"
    witness: str | None = None


def stability_report(tds: TropicalSystem, max_segments: int = 10_000) -> StabilityReport:
    """Checklist: general position, singularity kinds, cycle hyperbolicity,
    vanishing splitting constants; any failure carries a witness.

    Searches truncated by max_segments downgrade the verdict to Inconclusive
    rather than guessing."""
    port = portrait(tds, max_segments)
    violations = []
    if not port.gp.all_ok:
        which = [name for name, ok in (("gp1", port.gp.gp1), ("gp2", port.gp.gp2), ("gp3", port.gp.gp3)) if not ok]
        violations.append(f"general position fails: {', '.join(which)}")
    for s in port.sings:
        if s.kind == DEGENERATE:
            violations.append(f"degenerate singularity at {s.location}")
    for cyc in port.cycles:
        if cyc.verdict == "band":
            if any(c != 0 for c in cyc.offset.lin.values()):
                violations.append(f"nonhyperbolic cycle with drifting offset through {cyc.regions}")
    for conn in port.connections:
        if not conn.persistent:
            violations.append(
                f"separatrix connection {conn.depart.kind}@{conn.depart.point} -> "
                f"{conn.arrive.kind}@{conn.arrive.point} with b != 0")
    if violations:
        verdict = "ViolationFound"
    elif port.inconclusive:
        verdict = "Inconclusive"
    else:
        verdict = "StructurallyStable"
    return StabilityReport(
        port.gp,
        [(str(s.location), s.kind) for s in port.sings],
        [(cyc.regions, cyc.multiplier, cyc.verdict) for cyc in port.cycles],
        [(str(c.depart.point), str(c.arrive.point), c.persistent) for c in port.connections],
        verdict,
        violations[0] if violations else None,
    )


def _desc_route(tds, route, winding_blind: bool = False) -> tuple:
    """Convert an index-based route into a coordinate-free descriptor route.

    With winding_blind, maximal crossing runs collapse to their visited-state
    set plus exit state, which identifies "wound once" with "wound many
    times".  Orbits emitted by curve vertices use this quotient, so only the
    onset of winding (never its depth) separates chambers; orbits emitted by
    singularities keep full fidelity.
    """
    def members_desc(members):
        return tuple(sorted((tds[k].axis, tds[k].degree) for k in members))

    def x_state(tok):
        """Crossing transits are homotopy-visible only through the flow change,
        so the entered flow (not the edge label) is the descriptor."""
        region = tok[2] if len(tok) > 2 else tok[1][0]
        return tds[region].flow

    out = []
    run: list = []
    truncated = False

    def flush_run() -> bool:
        """Returns True when the remainder of the route must be dropped."""
        if not run:
            return False
        if winding_blind:
            states = []
            wound = False
            for t in run:
                if t[0] == "x":
                    states.append(x_state(t))
                else:
                    wound = True
                    states.extend(x_state(w) for w in t[1])
            state_set = tuple(sorted(set(states)))
            # any closed crossing lap takes at least four transits, so a run
            # visiting four states is already one winding deep
            wound = wound or len(state_set) >= 4
            out.append(("run", state_set))
            run.clear()
            if wound:
                # past the first winding, exit legs and landings depend on
                # the winding count; drop them so the depth stays invisible
                out.append(("wound",))
                return True
            return False
        for t in run:
            if t[0] == "x":
                out.append(("x", x_state(t)))
            else:
                out.append(("loop", tuple(("x", x_state(w)) for w in t[1])))
        run.clear()
        return False

    for tok in route:
        if truncated:
            break
        if tok[0] in ("x", "loop"):
            run.append(tok)
            continue
        if flush_run():
            truncated = True
            break
        if tok[0] == "slide":
            # the edge carries the line orientation; the sliding sense is not
            # class-separating (both approaches to an attractor coexist)
            out.append(("slide", members_desc(tok[1])))
        elif tok[0] == "vertex":
            out.append(("vertex", members_desc(tok[1])))
        elif tok[0] == "end":
            if len(tok) >= 3 and isinstance(tok[2], tuple):
                out.append(("end", tok[1], members_desc(tok[2])))
            else:
                out.append(tok)
        else:
            out.append(tok)
    if not truncated:
        flush_run()
    return tuple(out)


def portrait_signature(tds: TropicalSystem) -> tuple:
    """Canonical combinatorial record of the phase portrait.

    Equal signatures are reported as the same equivalence class; the record
    deliberately excludes inert data (empty-region labels, subdominant pair
    identities) so relabelings that do not move any orbit compare equal.
    """
    port = portrait(tds)

    def sub_sig(f):
        s = port.curves[f].subdivision
        faces = []
        for ms in (s.face_members if not s.collinear else ()):
            faces.append(tuple(sorted(
                (s.points[m].degree, tuple(sorted(tds[k].flow for k in s.points[m].dominant)))
                for m in ms)))
        chain = tuple(sorted(
            (p.degree, tuple(sorted(tds[k].flow for k in p.dominant)))
            for p in s.points if p.on_envelope)) if s.collinear else ()
        return (tuple(sorted(faces, key=repr)), chain)

    edge_sig = tuple(sorted(
        ((_desc_route(tds, (("x", key),))[0][1], cls.kind, cls.stability)
         for key, cls in port.edge_classes.items()),
        key=repr))
    sing_sig = tuple(sorted((s.invariant_record(tds) for s in port.sings), key=repr))
    graph_sig = (tuple((n.degree, n.flow) for n in port.graph.nodes), port.graph.arcs)
    cycle_sig = tuple(sorted(
        ((_canon_cycle(tuple(tds[r].degree for r in c.regions)), c.multiplier, c.verdict)
         for c in port.cycles),
        key=repr))
    # departures carry the connection structure; arrivals mirror the same
    # events from the target side and add only winding noise, so they stay out
    sep_sig = []
    for key, (f, dep, _arr) in sorted(port.bundles.items(), key=lambda kv: repr(kv[0])):
        blind = f.kind == "vertex"
        for o in dep.orbits:
            sep_sig.append((f.label(tds), "dep", _desc_route(tds, o.route, winding_blind=blind)))
    conn_sig = tuple(sorted(
        ((c.depart.label(tds), c.arrive.label(tds), c.persistent) for c in port.connections),
        key=repr))
    orbit_sig = tuple(sorted(
        ((tuple(sorted((tds[k].axis, tds[k].degree) for k in mem)),
          _desc_route(tds, o.route, winding_blind=True))
         for mem, o in port.vertex_orbits),
        key=repr))
    return (
        ("subdivisions", tuple(sub_sig(f) for f in (U, V, I))),
        ("edges", edge_sig),
        ("singularities", sing_sig),
        ("graph", graph_sig),
        ("cycles", cycle_sig),
        ("separatrices", tuple(sorted(sep_sig))),
        ("connections", conn_sig),
        ("vertex_orbits", orbit_sig),
        ("gp", (port.gp.gp1, port.gp.gp2, port.gp.gp3)),
    )


def _canon_cycle(seq: tuple) -> tuple:
    k = seq.index(min(seq))
    return seq[k:] + seq[:k]


def signatures_equal(a: tuple, b: tuple) -> bool:
    return a == b


def connection_gap_candidates(tds: TropicalSystem) -> list:
    """Affine gap forms between every departure and every arrival separatrix;
    their roots locate connection bifurcations near the current coefficients."""
    port = portrait(tds)
    gaps = []
    bundles = list(port.bundles.values())
    for _fd, depd, _arrd in bundles:
        for d_sym in depd.symbolic:
            for _fa, _depa, arra in bundles:
                for a_sym in arra.symbolic:
                    for key, coord in d_sym.crossings:
                        ca = a_sym.first_crossing(key)
                        if ca is not None:
                            gaps.append(coord - ca)
                            break
                    g = _flight_line_gap(tds, d_sym, a_sym)
                    if g is not None:
                        gaps.append(g)
    return gaps
