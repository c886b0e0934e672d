"""Lifted point configurations, regular subdivisions and dual curves.

The upper envelope is computed by exact gift wrapping over the rational lift
(degree point, coefficient); coplanar facets are kept as polygon faces so a
coarse subdivision stays distinguishable from a triangulation.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import AllNegInf, TropError, TropicalSystem, I, U, V
from .exact import QPoint, Vec, cross, dot, frac, solve2x2, vadd, vsub


# ---------------------------------------------------------------------------
# Subdivision data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubdivPoint:
    """One distinct degree point of the filtered configuration."""

    id: int
    degree: tuple[int, int]
    height: Fraction | None            # max finite coefficient at this degree
    pair_indices: tuple[int, ...]      # every pair sitting at this degree
    dominant: tuple[int, ...]          # pairs attaining the height
    on_envelope: bool = False
    corner: bool = False               # extreme on the envelope => region nonempty


@dataclass(frozen=True)
class SubdivEdge:
    a: int                             # SubdivPoint ids
    b: int
    faces: tuple[int, ...]             # incident face ids (0, 1 or 2)


@dataclass(frozen=True)
class Subdivision:
    axis_filter: str
    points: tuple[SubdivPoint, ...]
    faces: tuple[tuple[int, ...], ...]   # CCW boundary polygons over point ids
    face_members: tuple[frozenset[int], ...]  # every point on the face plane
    planes: tuple[tuple[Fraction, Fraction, Fraction], ...]  # z = c + a*x + b*y
    edges: tuple[SubdivEdge, ...]
    collinear: bool                      # 1-D degenerate configuration

    def point_by_degree(self, degree: tuple[int, int]) -> SubdivPoint | None:
        for p in self.points:
            if p.degree == degree:
                return p
        return None


def _hull_ccw(pts: list[tuple[int, Vec]], keep_collinear: bool) -> list[int]:
    """Andrew's monotone chain; returns point ids in CCW boundary order."""
    pts = sorted(pts, key=lambda e: (e[1][0], e[1][1]))
    if len(pts) <= 2:
        return [e[0] for e in pts]

    def build(seq):
        out: list[tuple[int, Vec]] = []
        for e in seq:
            while len(out) >= 2:
                c = cross(vsub(out[-1][1], out[-2][1]), vsub(e[1], out[-1][1]))
                if c < 0 or (c == 0 and not keep_collinear):
                    out.pop()
                else:
                    break
            out.append(e)
        return out

    lower = build(pts)
    upper = build(pts[::-1])
    return [e[0] for e in lower[:-1]] + [e[0] for e in upper[:-1]]


def _plane_through(p1, p2, p3):
    """Exact plane z = c + a*x + b*y through three lifted, 2D-independent points."""
    (x1, y1, h1), (x2, y2, h2), (x3, y3, h3) = p1, p2, p3
    sol = solve2x2(x2 - x1, y2 - y1, x3 - x1, y3 - y1, h2 - h1, h3 - h1)
    if sol is None:
        raise TropError("degenerate plane request")
    a, b = sol
    return (h1 - a * x1 - b * y1, a, b)


def _upper_chain(entries) -> list[int]:
    """1-D upper concave majorant; entries are (id, arclength, height), sorted by arclength."""
    out: list[tuple] = []
    for e in entries:
        while len(out) >= 2:
            (_, s1, h1), (_, s2, h2) = out[-2], out[-1]
            if (h2 - h1) * (e[1] - s2) <= (e[2] - h2) * (s2 - s1):
                out.pop()
            else:
                break
        out.append(e)
    return [e[0] for e in out]


@functools.lru_cache(maxsize=4096)
def regular_subdivision(tds: TropicalSystem, axis_filter: str = I) -> Subdivision:
    """Project the upper envelope of the lifted configuration.

    Faces come out as polygons (never forcibly triangulated); pairs shadowed
    by a higher coefficient at the same degree never reach the envelope.
    """
    groups: dict[tuple[int, int], list] = {}
    for k in tds.indices(axis_filter):
        groups.setdefault(tds[k].degree, []).append(tds[k])
    pts: list[SubdivPoint] = []
    for pid, (deg, members) in enumerate(sorted(groups.items())):
        finite = [p for p in members if p.alpha.finite]
        height = max((p.alpha.value for p in finite), default=None)
        dom = tuple(sorted(p.index for p in finite if p.alpha.value == height)) if height is not None else ()
        pts.append(SubdivPoint(pid, deg, height, tuple(sorted(p.index for p in members)), dom))
    live = [p for p in pts if p.height is not None]
    if not live:
        raise AllNegInf(f"no finite coefficients in filter {axis_filter}")

    lifted = {p.id: (frac(p.degree[0]), frac(p.degree[1]), p.height) for p in live}
    flat = {p.id: (frac(p.degree[0]), frac(p.degree[1])) for p in live}

    def finish(faces, members, planes, edges, collinear, envelope_ids, corner_ids):
        new_pts = tuple(
            SubdivPoint(p.id, p.degree, p.height, p.pair_indices, p.dominant,
                        p.id in envelope_ids, p.id in corner_ids)
            for p in pts
        )
        return Subdivision(axis_filter, new_pts, tuple(faces), tuple(members),
                           tuple(planes), tuple(edges), collinear)

    if len(live) == 1:
        pid = live[0].id
        return finish([], [], [], [], True, {pid}, {pid})

    base = flat[live[0].id]
    direction = None
    for p in live[1:]:
        d = vsub(flat[p.id], base)
        if d != (0, 0):
            direction = d
            break
    is_collinear = all(cross(vsub(flat[p.id], base), direction) == 0 for p in live)

    if is_collinear:
        entries = sorted(
            ((p.id, dot(vsub(flat[p.id], base), direction), lifted[p.id][2]) for p in live),
            key=lambda e: e[1],
        )
        chain = _upper_chain(entries)
        chain_set = set(chain)
        edges = [SubdivEdge(a, b, ()) for a, b in zip(chain, chain[1:])]
        pos = {pid: s for pid, s, _ in entries}
        hei = {pid: h for pid, _, h in entries}
        envelope = set(chain)
        for pid, s, h in entries:
            if pid in chain_set:
                continue
            for a, b in zip(chain, chain[1:]):
                sa, sb = pos[a], pos[b]
                if sa < s < sb and (hei[b] - hei[a]) * (s - sa) == (h - hei[a]) * (sb - sa):
                    envelope.add(pid)
        return finish([], [], [], edges, True, envelope, chain_set)

    # --- full 2-D configuration: gift-wrap the upper envelope -------------
    def plane_of(a: int, b: int, r: int):
        return _plane_through(lifted[a], lifted[b], lifted[r])

    def height_above(plane, pid: int) -> Fraction:
        c, pa, pb = plane
        x, y, h = lifted[pid]
        return h - (c + pa * x + pb * y)

    def find_face(a: int, b: int):
        """Face on the left of directed a->b, or None."""
        pa, pb = flat[a], flat[b]
        cands = [p.id for p in live if p.id not in (a, b) and cross(vsub(pb, pa), vsub(flat[p.id], pa)) > 0]
        if not cands:
            return None
        r = cands[0]
        for s in cands[1:]:
            if height_above(plane_of(a, b, r), s) > 0:
                r = s
        plane = plane_of(a, b, r)
        members = frozenset(p.id for p in live if height_above(plane, p.id) == 0)
        assert all(height_above(plane, p.id) <= 0 for p in live)
        poly = _hull_ccw([(m, flat[m]) for m in members], keep_collinear=True)
        return tuple(poly), members, plane

    faces: list[tuple[int, ...]] = []
    face_members: list[frozenset] = []
    planes: list[tuple] = []
    seen_faces: dict[frozenset, int] = {}
    queue: list[tuple[int, int]] = []
    done_edges: set[tuple[int, int]] = set()

    # seed the wrap with the lifted boundary chain of every hull side
    hull = _hull_ccw([(p.id, flat[p.id]) for p in live], keep_collinear=True)
    strict_set = set(_hull_ccw([(p.id, flat[p.id]) for p in live], keep_collinear=False))
    start = next(idx for idx, h in enumerate(hull) if h in strict_set)
    order = hull[start:] + hull[:start]
    sides: list[list[int]] = []
    cur_side = [order[0]]
    for pid in order[1:] + [order[0]]:
        cur_side.append(pid)
        if pid in strict_set:
            sides.append(cur_side)
            cur_side = [pid]
    for side in sides:
        origin = flat[side[0]]
        d = vsub(flat[side[-1]], origin)
        entries = sorted(
            ((pid, dot(vsub(flat[pid], origin), d), lifted[pid][2]) for pid in side),
            key=lambda e: e[1],
        )
        chain = _upper_chain(entries)
        for aa, bb in zip(chain, chain[1:]):
            queue.append((aa, bb))

    while queue:
        a, b = queue.pop()
        if (a, b) in done_edges:
            continue
        done_edges.add((a, b))
        got = find_face(a, b)
        if got is None:
            continue
        poly, members, plane = got
        if members not in seen_faces:
            seen_faces[members] = len(faces)
            faces.append(poly)
            face_members.append(members)
            planes.append(plane)
            ring = list(poly) + [poly[0]]
            for p, q in zip(ring, ring[1:]):
                done_edges.add((p, q))
                if (q, p) not in done_edges:
                    queue.append((q, p))

    # deterministic face order: lexicographic by member degrees
    perm = sorted(range(len(faces)), key=lambda fid: tuple(sorted(pts[m].degree for m in faces[fid])))
    faces = [faces[i] for i in perm]
    face_members = [face_members[i] for i in perm]
    planes = [planes[i] for i in perm]

    edge_faces: dict[tuple[int, int], list[int]] = {}
    for fid, poly in enumerate(faces):
        ring = list(poly) + [poly[0]]
        for p, q in zip(ring, ring[1:]):
            edge_faces.setdefault((min(p, q), max(p, q)), []).append(fid)
    edges = [SubdivEdge(a, b, tuple(sorted(fs))) for (a, b), fs in sorted(edge_faces.items())]

    envelope_ids = {m for ms in face_members for m in ms}
    corner_ids: set[int] = set()
    for poly in faces:
        ring = [poly[-1]] + list(poly) + [poly[0]]
        for idx in range(1, len(ring) - 1):
            if cross(vsub(flat[ring[idx]], flat[ring[idx - 1]]), vsub(flat[ring[idx + 1]], flat[ring[idx]])) != 0:
                corner_ids.add(ring[idx])
    return finish(faces, face_members, planes, edges, False, envelope_ids, corner_ids)


def is_triangulation(s: Subdivision) -> bool:
    """True when every envelope cell is a simplex with no extra coplanar point."""
    if s.collinear:
        return all(p.corner for p in s.points if p.on_envelope)
    if not s.faces:
        return False
    return all(len(ms) == 3 for ms in s.face_members)


# ---------------------------------------------------------------------------
# Dual curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveVertex:
    point: QPoint
    maximizers: frozenset[int]
    face_id: int


@dataclass(frozen=True)
class TropEdge:
    """Dual of one subdivision edge: a maximal 2-maximizer locus."""

    i: int
    j: int
    axis_filter: str
    geom_kind: str                 # "segment" | "ray" | "line"
    p1: QPoint
    p2: QPoint | None
    direction: Vec | None
    normal: tuple[Fraction, Fraction]   # degree(j) - degree(i)
    degenerate: bool = False

    @property
    def key(self) -> tuple[int, int]:
        return (self.i, self.j)

    def line_coeffs(self):
        """(A, B, C) with A*u + B*v + C = 0 along the edge."""
        A, B = self.normal
        C = -(A * self.p1.u + B * self.p1.v)
        return (A, B, C)

    def tangent(self) -> Vec:
        a, b = self.normal
        return (-b, a)

    def param_axis(self) -> str:
        return "v" if self.normal[1] == 0 else "u"

    def coord_of(self, p: QPoint) -> Fraction:
        return p.v if self.param_axis() == "v" else p.u

    def point_at(self, c: Fraction) -> QPoint:
        A, B, Cc = self.line_coeffs()
        if self.param_axis() == "v":
            return QPoint(-(B * c + Cc) / A, c)
        return QPoint(c, -(A * c + Cc) / B)

    def coord_interval(self):
        """Extent in the parameter coordinate: (lo, hi), None meaning unbounded."""
        pick = (lambda q: q.v) if self.param_axis() == "v" else (lambda q: q.u)
        if self.geom_kind == "segment":
            a, b = pick(self.p1), pick(self.p2)
            return (min(a, b), max(a, b))
        if self.geom_kind == "ray":
            d = self.direction[1] if self.param_axis() == "v" else self.direction[0]
            if d > 0:
                return (pick(self.p1), None)
            if d < 0:
                return (None, pick(self.p1))
            return (pick(self.p1), pick(self.p1))
        return (None, None)

    def contains_interior(self, p: QPoint) -> bool:
        A, B, C = self.line_coeffs()
        if A * p.u + B * p.v + C != 0:
            return False
        lo, hi = self.coord_interval()
        c = self.coord_of(p)
        if lo is not None and c <= lo:
            return False
        if hi is not None and c >= hi:
            return False
        return True


@dataclass(frozen=True)
class Region:
    pair_index: int
    witness: QPoint | None   # None = empty region

    @property
    def empty(self) -> bool:
        return self.witness is None


@dataclass(frozen=True)
class TropicalCurve:
    axis_filter: str
    vertices: tuple[CurveVertex, ...]
    edges: tuple[TropEdge, ...]
    regions: tuple[Region, ...]
    subdivision: Subdivision

    def edge_for(self, i: int, j: int) -> TropEdge | None:
        key = (min(i, j), max(i, j))
        for e in self.edges:
            if e.key == key:
                return e
        return None

    def region(self, k: int) -> Region:
        for r in self.regions:
            if r.pair_index == k:
                return r
        raise KeyError(k)


def _dual_vertex(plane) -> QPoint:
    c, a, b = plane
    return QPoint(-a, -b)


@functools.lru_cache(maxsize=4096)
def tropical_curve(tds: TropicalSystem, axis_filter: str = I) -> TropicalCurve:
    """Dual curve of the regular subdivision, with exact vertices/edges/regions."""
    from .core import argmax_set

    sub = regular_subdivision(tds, axis_filter)
    by_id = {p.id: p for p in sub.points}

    vertices = []
    for fid in range(len(sub.faces)):
        pt = _dual_vertex(sub.planes[fid])
        maxi = frozenset(argmax_set(tds, axis_filter, pt))
        vertices.append(CurveVertex(pt, maxi, fid))

    edges = []
    for e in sub.edges:
        pa, pb = by_id[e.a], by_id[e.b]
        degenerate = len(pa.dominant) != 1 or len(pb.dominant) != 1
        i = pa.dominant[0] if pa.dominant else pa.pair_indices[0]
        j = pb.dominant[0] if pb.dominant else pb.pair_indices[0]
        if i > j:
            i, j = j, i
        normal = (frac(tds[j].degree[0] - tds[i].degree[0]),
                  frac(tds[j].degree[1] - tds[i].degree[1]))
        if len(e.faces) == 2:
            q1 = vertices[e.faces[0]].point
            q2 = vertices[e.faces[1]].point
            if q1 == q2:
                degenerate = True
            edges.append(TropEdge(i, j, axis_filter, "segment", q1, q2, None, normal, degenerate))
        elif len(e.faces) == 1:
            fid = e.faces[0]
            origin = vertices[fid].point
            t = (-normal[1], normal[0])
            chosen = None
            for m in sub.face_members[fid]:
                pm = by_id[m]
                if pm.id in (e.a, e.b) or not pm.dominant:
                    continue
                dm = (frac(pm.degree[0] - tds[i].degree[0]),
                      frac(pm.degree[1] - tds[i].degree[1]))
                sgn = dot(dm, t)
                if sgn != 0:
                    chosen = t if sgn < 0 else (-t[0], -t[1])
                    break
            if chosen is None:
                degenerate = True
                chosen = t
            edges.append(TropEdge(i, j, axis_filter, "ray", origin, None, chosen, normal, degenerate))
        else:
            # 1-D configuration: the tie locus is a full line
            ai = tds[i].alpha.value
            aj = tds[j].alpha.value
            A, B = normal
            Cval = ai - aj
            base = QPoint(Cval / A, frac(0)) if A != 0 else QPoint(frac(0), Cval / B)
            edges.append(TropEdge(i, j, axis_filter, "line", base, None, (-B, A), normal, degenerate))

    regions = []
    for k in sorted(tds.indices(axis_filter)):
        regions.append(Region(k, _region_witness(tds, axis_filter, k, sub, vertices, edges)))
    return TropicalCurve(axis_filter, tuple(vertices), tuple(edges), tuple(regions), sub)


def _region_witness(tds, axis_filter, k, sub, vertices, edges) -> QPoint | None:
    from .core import argmax_set

    tp = tds[k]
    if not tp.alpha.finite:
        return None
    home = None
    for p in sub.points:
        if k in p.dominant:
            home = p
            break
    if home is None or not home.corner or len(home.dominant) != 1:
        return None

    def candidates():
        seeds: list[QPoint] = []
        incident = [fid for fid in range(len(sub.faces)) if home.id in sub.face_members[fid]]
        duals = [vertices[fid].point for fid in incident]
        if duals:
            n = len(duals)
            centroid = QPoint(sum((q.u for q in duals), frac(0)) / n,
                              sum((q.v for q in duals), frac(0)) / n)
            yield centroid
            seeds.append(centroid)
            rays = [e.direction for e in edges
                    if k in e.key and e.geom_kind in ("ray", "line") and e.direction]
            rsum = (frac(0), frac(0))
            for r in rays:
                rsum = vadd(rsum, r)
            if rsum != (0, 0):
                for s in (1, 2, 8, 128, 4096):
                    yield centroid.moved(frac(s), rsum)
            for r in rays:
                for s in (1, 4, 64):
                    yield centroid.moved(frac(s), r)
        for e in edges:
            if k in e.key:
                seeds.append(e.p1)
                yield e.p1
        compass = [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, 1), (-1, -1), (1, -1)]
        for c in seeds:
            for dx, dy in compass:
                step = frac(1)
                for _ in range(7):
                    yield QPoint(c.u + step * dx, c.v + step * dy)
                    step /= 4

    for cand in candidates():
        if argmax_set(tds, axis_filter, cand) == {k}:
            return cand
    return _witness_by_lp(tds, axis_filter, k)


def _witness_by_lp(tds, axis_filter, k) -> QPoint | None:
    """Brute-force exact interior-point search; rarely-needed fallback."""
    from .core import argmax_set

    tp = tds[k]
    cons = [(frac(0), frac(0), frac(1), frac(1))]  # t <= 1
    for j in tds.finite_indices(axis_filter):
        if j == k:
            continue
        tj = tds[j]
        cons.append((frac(tj.degree[0] - tp.degree[0]),
                     frac(tj.degree[1] - tp.degree[1]),
                     frac(1),
                     tp.alpha.value - tj.alpha.value))

    def det3(c1, c2, c3):
        return (c1[0] * (c2[1] * c3[2] - c2[2] * c3[1])
                - c1[1] * (c2[0] * c3[2] - c2[2] * c3[0])
                + c1[2] * (c2[0] * c3[1] - c2[1] * c3[0]))

    best = None
    for trio in combinations(range(len(cons)), 3):
        rows = [cons[t][:3] for t in trio]
        rhs = [cons[t][3] for t in trio]
        d0 = det3(*rows)
        if d0 == 0:
            continue
        dx = det3((rhs[0], rows[0][1], rows[0][2]), (rhs[1], rows[1][1], rows[1][2]), (rhs[2], rows[2][1], rows[2][2]))
        dy = det3((rows[0][0], rhs[0], rows[0][2]), (rows[1][0], rhs[1], rows[1][2]), (rows[2][0], rhs[2], rows[2][2]))
        dt = det3((rows[0][0], rows[0][1], rhs[0]), (rows[1][0], rows[1][1], rhs[1]), (rows[2][0], rows[2][1], rhs[2]))
        x, y, t = dx / d0, dy / d0, dt / d0
        if t <= 0:
            continue
        if all(gx * x + gy * y + gt * t <= r for gx, gy, gt, r in cons):
            if best is None or t > best[0]:
                best = (t, QPoint(x, y))
    if best is not None and argmax_set(tds, axis_filter, best[1]) == {k}:
        return best[1]
    return None


# ---------------------------------------------------------------------------
# General position
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralPositionReport:
    gp1: bool
    gp2: bool
    gp3: bool
    gp1_offenders: tuple = ()
    gp2_offenders: tuple = ()
    gp3_offenders: tuple = ()

    @property
    def all_ok(self) -> bool:
        return self.gp1 and self.gp2 and self.gp3


def sliding_capable(tds, e: TropEdge) -> bool:
    """Opposite flows along one axis: the only edges that can carry nullcline sliding."""
    return tds[e.i].axis == tds[e.j].axis and tds[e.i].flow != tds[e.j].flow


def _edge_point_position(e: TropEdge, p: QPoint) -> str:
    lo, hi = e.coord_interval()
    c = e.coord_of(p)
    if (lo is not None and c < lo) or (hi is not None and c > hi):
        return "off"
    if (lo is not None and c == lo) or (hi is not None and c == hi):
        return "endpoint"
    return "interior"


def edge_pair_intersections(eu: TropEdge, ev: TropEdge):
    """Exact intersections of two edges: [(point, posU, posV)] or 'overlap'."""
    Au, Bu, Cu = eu.line_coeffs()
    Av, Bv, Cv = ev.line_coeffs()
    det = Au * Bv - Av * Bu
    if det == 0:
        if Au * ev.p1.u + Bu * ev.p1.v + Cu != 0:
            return []
        lo_u, hi_u = eu.coord_interval()
        lo_v, hi_v = ev.coord_interval()
        lo = max((x for x in (lo_u, lo_v) if x is not None), default=None)
        hi = min((x for x in (hi_u, hi_v) if x is not None), default=None)
        if lo is None or hi is None or lo <= hi:
            return "overlap"
        return []
    sol = solve2x2(Au, Bu, Av, Bv, -Cu, -Cv)
    p = QPoint(sol[0], sol[1])
    pu = _edge_point_position(eu, p)
    pv = _edge_point_position(ev, p)
    if pu == "off" or pv == "off":
        return []
    return [(p, pu, pv)]


@functools.lru_cache(maxsize=2048)
def general_position(tds: TropicalSystem) -> GeneralPositionReport:
    """Three exact sub-checks: triangulated subdivisions, distinct cross-axis
    coefficients on shared degrees, transversal sliding-curve intersections."""
    gp1_off = []
    for f in (U, V, I):
        s = regular_subdivision(tds, f)
        if not is_triangulation(s):
            bad = tuple(tuple(sorted(s.points[m].degree for m in ms)) for ms in s.face_members if len(ms) != 3)
            if s.collinear:
                bad = tuple((p.degree,) for p in s.points if p.on_envelope and not p.corner)
            gp1_off.append((f, bad))
    gp2_off = []
    for pu in tds.pairs:
        for pv in tds.pairs:
            if pu.axis == U and pv.axis == V and pu.degree == pv.degree:
                if pu.alpha.finite and pv.alpha.finite and pu.alpha.value == pv.alpha.value:
                    gp2_off.append((pu.index, pv.index))
    gp3_off = []
    cu = tropical_curve(tds, U)
    cv = tropical_curve(tds, V)
    for eu in cu.edges:
        if not sliding_capable(tds, eu):
            continue
        for ev in cv.edges:
            if not sliding_capable(tds, ev):
                continue
            hits = edge_pair_intersections(eu, ev)
            if hits == "overlap":
                gp3_off.append((eu.key, ev.key, "overlap"))
                continue
            for p, pu_, pv_ in hits:
                if pu_ != "interior" or pv_ != "interior":
                    gp3_off.append((eu.key, ev.key, str(p)))
    return GeneralPositionReport(
        not gp1_off, not gp2_off, not gp3_off,
        tuple(gp1_off), tuple(gp2_off), tuple(gp3_off),
    )
