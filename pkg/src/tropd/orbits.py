"""Event-driven tracing of polygonal orbits.

The tracer walks exact flight/slide events; every event time is the minimal
positive rational root of a monomial gap, so periodicity and feature hits are
detected by equality, never by tolerance.  A crossing-only mode implements
the flow used for separatrices and cycle realization.  When lap collapsing is
enabled, a completed crossing lap is replaced by a single loop marker and the
remaining windings are fast-forwarded through the closed-form affine
iteration, which keeps itineraries canonical across a chamber and spares one
event per winding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import TropError, TropicalSystem, I, U, V, argmax_along_ray, argmax_set
from .dynamics import (CROSSING, FILIPPOV_TANGENTIAL, FILIPPOV_TRANSVERSAL,
                       NON_SWITCHING, NULLCLINE_TANGENTIAL, NULLCLINE_TRANSVERSAL,
                       filippov_vector)
from .exact import QPoint, Vec, cross, dot, frac, unit1

FORWARD = "Forward"
BACKWARD = "Backward"

TERM_UNBOUNDED = "Unbounded"
TERM_SINGULARITY = "Singularity"
TERM_HYBRID = "HybridPoint"
TERM_PERIODIC = "Periodic"
TERM_SEGMENT_CAP = "SegmentCap"
TERM_SLIDING = "SlidingReached"     # crossing-only traces
TERM_VERTEX = "VertexReached"       # crossing-only traces
TERM_SPIRAL = "SpiralsToCycle"      # collapsed crossing traces
TERM_STUCK = "StuckAtDegeneracy"


class StuckAtDegeneracy(TropError):
    pass


@dataclass(frozen=True)
class TracePolicy:
    crossing_only: bool = False      # stop at sliding edges and vertices
    collapse_laps: bool = False      # canonical loop markers + fast forward
    enter_tangential_slides: bool = True


DEFAULT_POLICY = TracePolicy()
CROSSING_POLICY = TracePolicy(crossing_only=True, collapse_laps=True)
CANONICAL_POLICY = TracePolicy(collapse_laps=True)


@dataclass(frozen=True)
class Limits:
    max_segments: int = 10_000
    clip: Fraction = Fraction(10**6)


DEFAULT_LIMITS = Limits()


@dataclass
class Segment:
    direction: Vec
    mode: tuple      # ("region", k) | ("filippov", (i,j)) | ("nullcline", (i,j))


@dataclass
class Orbit:
    start: QPoint
    orientation: str
    vertices: list[QPoint] = field(default_factory=list)
    segments: list[Segment] = field(default_factory=list)
    termination: tuple = ()
    route: tuple = ()                  # canonical combinatorial itinerary
    loop_jumps: list = field(default_factory=list)  # (vertex index, word, laps skipped)

    @property
    def periodic(self) -> bool:
        return bool(self.termination) and self.termination[0] == TERM_PERIODIC

    def mode_sequence(self) -> list[tuple]:
        return [s.mode for s in self.segments]


def _prim(v) -> tuple[int, int]:
    a, b = frac(v[0]), frac(v[1])
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    xx, yy = int(a * den), int(b * den)
    g = math.gcd(abs(xx), abs(yy))
    if g:
        xx, yy = xx // g, yy // g
    return (xx, yy)


class _Tracer:
    def __init__(self, tds: TropicalSystem, policy: TracePolicy, limits: Limits):
        self.tds = tds
        self.policy = policy
        self.limits = limits
        self.finite = [tds[k] for k in tds.finite_indices(I)]

    # -- value helpers ------------------------------------------------------

    def val(self, k: int, p: QPoint) -> Fraction:
        tp = self.tds[k]
        return tp.alpha.value + tp.degree[0] * p.u + tp.degree[1] * p.v

    def zero_in_field(self, p: QPoint):
        """(zero admissible?, host tangential?) at the given point."""
        arg_u = argmax_set(self.tds, U, p)
        arg_v = argmax_set(self.tds, V, p)
        fu = {self.tds[k].flow for k in arg_u}
        fv = {self.tds[k].flow for k in arg_v}
        if fu != {(1, 0), (-1, 0)} or fv != {(0, 1), (0, -1)}:
            return (False, False)
        arg_i = argmax_set(self.tds, I, p)
        if len(arg_i) == 2:
            i, j = sorted(arg_i)
            n = self.pair_normal(i, j)
            return (True, dot(self.tds[i].flow, n) == 0)
        return (True, False)

    # -- event scans --------------------------------------------------------

    def flight_event(self, x: QPoint, d: Vec, cur: int):
        fcur = self.val(cur, x)
        deg_c = self.tds[cur].degree
        best_t = None
        hitters: list[int] = []
        for tp in self.finite:
            if tp.index == cur:
                continue
            g0 = fcur - (tp.alpha.value + tp.degree[0] * x.u + tp.degree[1] * x.v)
            g1 = (deg_c[0] - tp.degree[0]) * d[0] + (deg_c[1] - tp.degree[1]) * d[1]
            if g0 == 0:
                if g1 < 0:
                    raise StuckAtDegeneracy(f"flight from {x} immediately loses dominance to {tp.index}")
                continue
            if g1 >= 0:
                continue
            t = g0 / (-g1)
            if best_t is None or t < best_t:
                best_t, hitters = t, [tp.index]
            elif t == best_t:
                hitters.append(tp.index)
        if best_t is None:
            return None
        return best_t, hitters

    def slide_event(self, x: QPoint, s: Vec, host: tuple[int, int], sub: int | None):
        """('end'|'sub', t, indices) for the next slide event, or None."""
        i, j = host
        fi = self.val(i, x)
        deg_i = self.tds[i].degree
        t_end = None
        end_hit: list[int] = []
        for tp in self.finite:
            if tp.index in (i, j):
                continue
            g0 = fi - (tp.alpha.value + tp.degree[0] * x.u + tp.degree[1] * x.v)
            g1 = (deg_i[0] - tp.degree[0]) * s[0] + (deg_i[1] - tp.degree[1]) * s[1]
            if g0 == 0:
                if g1 < 0:
                    raise StuckAtDegeneracy(f"slide from {x} immediately loses dominance to {tp.index}")
                continue
            if g1 >= 0:
                continue
            t = g0 / (-g1)
            if t_end is None or t < t_end:
                t_end, end_hit = t, [tp.index]
            elif t == t_end:
                end_hit.append(tp.index)
        t_sub = None
        sub_hit: list[int] = []
        if sub is not None:
            fl = self.val(sub, x)
            deg_l = self.tds[sub].degree
            axis_b = self.tds[sub].axis
            for tp in self.finite:
                if tp.index == sub or tp.axis != axis_b:
                    continue
                g0 = fl - (tp.alpha.value + tp.degree[0] * x.u + tp.degree[1] * x.v)
                g1 = (deg_l[0] - tp.degree[0]) * s[0] + (deg_l[1] - tp.degree[1]) * s[1]
                if g0 <= 0 or g1 >= 0:
                    continue
                t = g0 / (-g1)
                if t_sub is None or t < t_sub:
                    t_sub, sub_hit = t, [tp.index]
                elif t == t_sub:
                    sub_hit.append(tp.index)
        if t_end is None and t_sub is None:
            return None
        if t_sub is None or (t_end is not None and t_end <= t_sub):
            return ("end", t_end, end_hit)
        return ("sub", t_sub, sub_hit)

    # -- classification helpers --------------------------------------------

    def pair_normal(self, i: int, j: int) -> Vec:
        return (frac(self.tds[j].degree[0] - self.tds[i].degree[0]),
                frac(self.tds[j].degree[1] - self.tds[i].degree[1]))

    def classify_tie(self, i: int, j: int) -> str:
        di, dj = self.tds[i].flow, self.tds[j].flow
        if di == dj:
            return NON_SWITCHING
        n = self.pair_normal(i, j)
        si, sj = dot(di, n), dot(dj, n)
        if si * sj > 0:
            return CROSSING
        if dot(di, dj) == 0:
            return FILIPPOV_TANGENTIAL if si * sj == 0 else FILIPPOV_TRANSVERSAL
        return NULLCLINE_TANGENTIAL if si * sj == 0 else NULLCLINE_TRANSVERSAL

    def subdominant_at(self, x: QPoint, other_axis: str, along: Vec | None):
        if along is not None:
            arg = argmax_along_ray(self.tds, other_axis, x, along)
        else:
            arg = argmax_set(self.tds, other_axis, x)
        flows = {self.tds[k].flow for k in arg}
        if len(flows) != 1:
            return None
        return sorted(arg)[0]

    def vertex_continuations(self, x: QPoint, members: set[int]):
        """Admissible continuations at a >=3-fold tie, ordered by default policy:
        stable slides first, then flights, then unstable and tangential slides."""
        out = []
        mem = sorted(members)
        degs = {k: self.tds[k].degree for k in mem}
        for r in mem:
            d = self.tds[r].flow
            if all((degs[r][0] - degs[c][0]) * d[0] + (degs[r][1] - degs[c][1]) * d[1] > 0
                   for c in mem if c != r):
                out.append((2, (r,), "flight", (r, d)))
        for ai in range(len(mem)):
            for bj in range(ai + 1, len(mem)):
                a, b = mem[ai], mem[bj]
                n = self.pair_normal(a, b)
                if n == (0, 0):
                    continue
                base_t = (-n[1], n[0])
                for t in (base_t, (-base_t[0], -base_t[1])):
                    ok = all((degs[a][0] - degs[c][0]) * t[0] + (degs[a][1] - degs[c][1]) * t[1] > 0
                             for c in mem if c not in (a, b))
                    if not ok:
                        continue
                    kind = self.classify_tie(a, b)
                    if kind in (FILIPPOV_TRANSVERSAL, FILIPPOV_TANGENTIAL):
                        dfp = filippov_vector(self.tds[a].flow, self.tds[b].flow, n)
                        if dot(dfp, t) > 0:
                            si, sj = dot(self.tds[a].flow, n), dot(self.tds[b].flow, n)
                            stable = (si > 0 and sj < 0) or (si * sj == 0 and (si > 0 or sj < 0))
                            out.append((1 if stable else 3, (a, b), "slide", ((a, b), dfp, None)))
                    elif kind == NULLCLINE_TRANSVERSAL:
                        other = V if self.tds[a].axis == U else U
                        sub = self.subdominant_at(x, other, t)
                        if sub is None:
                            continue
                        e1 = unit1(t)
                        sgn = dot(self.tds[sub].flow, e1)
                        if sgn == 0:
                            continue
                        dnc = e1 if sgn > 0 else (-e1[0], -e1[1])
                        if dot(dnc, t) > 0:
                            si, sj = dot(self.tds[a].flow, n), dot(self.tds[b].flow, n)
                            stable = si > 0 and sj < 0
                            out.append((1 if stable else 3, (a, b), "slide", ((a, b), dnc, sub)))
                    elif kind == NULLCLINE_TANGENTIAL and self.policy.enter_tangential_slides:
                        for f in (self.tds[a].flow, self.tds[b].flow):
                            if cross(f, t) == 0 and dot(f, t) > 0:
                                other = V if self.tds[a].axis == U else U
                                sub = self.subdominant_at(x, other, t)
                                out.append((4, (a, b), "slide", ((a, b), unit1(t), sub)))
                                break
                    elif kind == NON_SWITCHING:
                        f = self.tds[a].flow
                        if cross(f, t) == 0 and dot(f, t) > 0:
                            out.append((2, (a, b), "flight", (a, f)))
        out.sort(key=lambda e: (e[0], e[1]))
        return out

    # -- main loop -----------------------------------------------------------

    def run(self, start: QPoint, orientation: str = FORWARD, initial_state=None) -> Orbit:
        orbit = Orbit(start, orientation, vertices=[start])
        route: list[tuple] = []
        seen_states: dict = {}
        lap_memo: dict = {}

        def finish(kind, detail=None, desc=None):
            tok = ("end", kind) if desc is None else ("end", kind, desc)
            route.append(tok)
            orbit.termination = (kind,) if detail is None else (kind, detail)
            orbit.route = tuple(route)
            return orbit

        def add_segment(x_new: QPoint, d: Vec, mode: tuple):
            if orbit.segments and orbit.segments[-1].direction == d and orbit.segments[-1].mode[0] == mode[0]:
                orbit.vertices[-1] = x_new
            else:
                orbit.segments.append(Segment(d, mode))
                orbit.vertices.append(x_new)

        state = initial_state if initial_state is not None else self._initial_state(start)
        if state[0] == "end":
            return finish(state[1], state[2])

        steps = 0
        while True:
            steps += 1
            if steps > self.limits.max_segments:
                return finish(TERM_SEGMENT_CAP)
            x = orbit.vertices[-1]
            if abs(x.u) > self.limits.clip or abs(x.v) > self.limits.clip:
                return finish(TERM_UNBOUNDED, "clip")

            if state[0] == "flight":
                _, region, d = state
                seg_key = (x, d, ("region",))
                rep = seen_states.get(seg_key)
                if rep is not None:
                    return finish(TERM_PERIODIC, rep)
                seen_states[seg_key] = len(orbit.vertices) - 1
                try:
                    ev = self.flight_event(x, d, region)
                except StuckAtDegeneracy as exc:
                    return finish(TERM_STUCK, str(exc))
                if ev is None:
                    add_segment(self._clip_exit(x, d), d, ("region", region))
                    return finish(TERM_UNBOUNDED, "clip")
                t, hitters = ev
                x_new = x.moved(t, d)
                add_segment(x_new, d, ("region", region))
                ties = set(hitters) | {region}
                n_route = len(route)
                state, stop = self._after_flight(x_new, d, region, ties, route)
                if stop is not None:
                    return finish(*stop)
                crossed = len(route) > n_route and route[-1][0] == "x"
                if crossed and self.policy.collapse_laps:
                    res = self._loop_step(orbit, route, seen_states, lap_memo, state, ties)
                    if res is not None:
                        if res[0] == "end":
                            return finish(res[1], res[2])
                        state = res[1]
            elif state[0] == "slide":
                _, host, s, sub, mode_tag = state
                seg_key = (x, s, (mode_tag, host))
                rep = seen_states.get(seg_key)
                if rep is not None:
                    return finish(TERM_PERIODIC, rep)
                seen_states[seg_key] = len(orbit.vertices) - 1
                tok = ("slide", host, _prim(s))
                if not route or route[-1] != tok:
                    route.append(tok)
                try:
                    ev = self.slide_event(x, s, host, sub)
                except StuckAtDegeneracy as exc:
                    return finish(TERM_STUCK, str(exc))
                if ev is None:
                    add_segment(self._clip_exit(x, s), s, (mode_tag, host))
                    return finish(TERM_UNBOUNDED, "clip")
                what, t, movers = ev
                x_new = x.moved(t, s)
                add_segment(x_new, s, (mode_tag, host))
                if what == "sub":
                    new_flows = {self.tds[m].flow for m in movers}
                    if new_flows == {self.tds[sub].flow}:
                        other = self.tds[sub].axis
                        nxt = sorted(argmax_along_ray(self.tds, other, x_new, s))[0]
                        state = ("slide", host, s, nxt, mode_tag)
                        continue
                    singular, tangential = self.zero_in_field(x_new)
                    if singular:
                        desc = tuple(sorted(argmax_set(self.tds, I, x_new)))
                        return finish(TERM_HYBRID if tangential else TERM_SINGULARITY, str(x_new), desc)
                    return finish(TERM_STUCK, str(x_new))
                ties = set(movers) | set(host)
                singular, tangential = self.zero_in_field(x_new)
                if singular:
                    desc = tuple(sorted(argmax_set(self.tds, I, x_new)))
                    return finish(TERM_HYBRID if tangential else TERM_SINGULARITY, str(x_new), desc)
                state, stop = self._continue_at_vertex(x_new, ties, route)
                if stop is not None:
                    return finish(*stop)
            else:
                raise TropError(f"unknown tracer state {state[0]}")

    # -- state transitions ---------------------------------------------------

    def _initial_state(self, x: QPoint):
        singular, tangential = self.zero_in_field(x)
        if singular:
            return ("end", TERM_HYBRID if tangential else TERM_SINGULARITY, str(x))
        arg = argmax_set(self.tds, I, x)
        if len(arg) == 1:
            r = next(iter(arg))
            return ("flight", r, self.tds[r].flow)
        if len(arg) == 2:
            i, j = sorted(arg)
            if self.tds[i].degree == self.tds[j].degree:
                return ("end", TERM_STUCK, f"coincident monomials {i},{j}")
            kind = self.classify_tie(i, j)
            if kind == CROSSING:
                n = self.pair_normal(i, j)
                into = j if dot(self.tds[i].flow, n) > 0 else i
                return ("flight", into, self.tds[into].flow)
            if kind == NON_SWITCHING:
                r = sorted(argmax_along_ray(self.tds, I, x, self.tds[i].flow))[0]
                return ("flight", r, self.tds[i].flow)
            if self.policy.crossing_only:
                return ("end", TERM_SLIDING, str(x))
            return self._enter_slide(x, (i, j), kind)
        if self.policy.crossing_only:
            return ("end", TERM_VERTEX, str(x))
        conts = self.vertex_continuations(x, arg)
        if not conts:
            return ("end", TERM_STUCK, str(x))
        return self._continuation_state(conts[0])

    def _continuation_state(self, cont):
        _, _, kind, payload = cont
        if kind == "flight":
            r, d = payload
            return ("flight", r, d)
        host, s, sub = payload
        tag = ("filippov"
               if self.classify_tie(*host) in (FILIPPOV_TRANSVERSAL, FILIPPOV_TANGENTIAL)
               else "nullcline")
        return ("slide", host, s, sub, tag)

    def _enter_slide(self, x: QPoint, host, kind):
        i, j = host
        n = self.pair_normal(i, j)
        if kind in (FILIPPOV_TRANSVERSAL, FILIPPOV_TANGENTIAL):
            dfp = filippov_vector(self.tds[i].flow, self.tds[j].flow, n)
            return ("slide", host, dfp, None, "filippov")
        if kind == NULLCLINE_TRANSVERSAL:
            other = V if self.tds[i].axis == U else U
            sub = self.subdominant_at(x, other, None)
            if sub is None:
                return ("end", TERM_SINGULARITY, str(x))
            t1 = unit1((-n[1], n[0]))
            sgn = dot(self.tds[sub].flow, t1)
            if sgn == 0:
                return ("end", TERM_STUCK, str(x))
            dnc = t1 if sgn > 0 else (-t1[0], -t1[1])
            # ties at the entry point resolve to whoever dominates just ahead
            sub = sorted(argmax_along_ray(self.tds, other, x, dnc))[0]
            return ("slide", host, dnc, sub, "nullcline")
        # tangential nullcline: ride the lower-indexed tangent flow
        other = V if self.tds[i].axis == U else U
        f = self.tds[i].flow
        sub = self.subdominant_at(x, other, f)
        return ("slide", host, f, sub, "nullcline")

    def _after_flight(self, x: QPoint, d: Vec, region: int, ties: set[int], route):
        if len(ties) == 2:
            i, j = sorted(ties)
            if self.tds[i].degree == self.tds[j].degree:
                return None, (TERM_STUCK, f"coincident monomials {i},{j}")
            kind = self.classify_tie(i, j)
            if kind == NON_SWITCHING:
                other = (ties - {region}).pop()
                return ("flight", other, d), None
            if kind == CROSSING:
                other = (ties - {region}).pop()
                route.append(("x", (i, j), other))
                return ("flight", other, self.tds[other].flow), None
            singular, tangential = self.zero_in_field(x)
            if singular:
                desc = tuple(sorted(argmax_set(self.tds, I, x)))
                return None, (TERM_HYBRID if tangential else TERM_SINGULARITY, str(x), desc)
            if self.policy.crossing_only:
                return None, (TERM_SLIDING, str(x), (i, j))
            st = self._enter_slide(x, (i, j), kind)
            if st[0] == "end":
                return None, st[1:]
            return st, None
        singular, tangential = self.zero_in_field(x)
        if singular:
            desc = tuple(sorted(argmax_set(self.tds, I, x)))
            return None, (TERM_HYBRID if tangential else TERM_SINGULARITY, str(x), desc)
        return self._continue_at_vertex(x, ties, route)

    def _continue_at_vertex(self, x: QPoint, ties: set[int], route):
        if self.policy.crossing_only:
            return None, (TERM_VERTEX, str(x), tuple(sorted(ties)))
        route.append(("vertex", tuple(sorted(ties))))
        conts = self.vertex_continuations(x, ties)
        if not conts:
            return None, (TERM_STUCK, str(x))
        return self._continuation_state(conts[0]), None

    def _clip_exit(self, x: QPoint, d: Vec) -> QPoint:
        ts = []
        c = self.limits.clip
        if d[0] != 0:
            ts.append(((c if d[0] > 0 else -c) - x.u) / frac(d[0]))
        if d[1] != 0:
            ts.append(((c if d[1] > 0 else -c) - x.v) / frac(d[1]))
        pos = [tt for tt in ts if tt > 0]
        return x.moved(min(pos), d) if pos else x

    # -- crossing-lap collapse ------------------------------------------------

    def _transit_point(self, i: int, j: int, new_d: Vec, coord: Fraction) -> QPoint:
        """Point on edge {i,j} whose preserved coordinate (for a flight along
        new_d) equals coord; crossing edges are never axis-parallel."""
        ni, mi = self.tds[i].degree
        nj, mj = self.tds[j].degree
        A, B = frac(nj - ni), frac(mj - mi)
        C = self.tds[j].alpha.value - self.tds[i].alpha.value
        if new_d[1] != 0:   # vertical flight preserves u
            return QPoint(coord, -(A * coord + C) / B)
        return QPoint(-(B * coord + C) / A, coord)

    def _loop_step(self, orbit, route, seen_states, lap_memo, state, ties):
        """Called right after a crossing transit; collapses a completed lap."""
        _, region, d = state
        i, j = sorted(ties)
        x = orbit.vertices[-1]
        coord = x.u if d[1] != 0 else x.v
        key = (route[-1][1], region)
        idx = len(route) - 1
        hist = lap_memo.setdefault(key, [])
        hist.append((idx, coord))
        if len(hist) < 2:
            return None
        (i1, c1), (i2, c2) = hist[-2], hist[-1]
        seg = route[i1:i2]
        if any(tok[0] != "x" for tok in seg):
            del hist[:-1]
            return None
        if c1 == c2:
            return None   # exact periodicity; the segment-state table reports it
        word = tuple(seg)
        word_sim = tuple(route[i1 + 1:i2 + 1])
        # the lap from c1 completed historically, so its affine map must exist
        x1 = self._transit_point(i, j, d, c1)
        ok, slope, off, _ = self._simulate_lap(region, d, x1, c1, word_sim, (i, j))
        if not ok or slope * c1 + off != c2:
            del hist[:-1]
            return None

        def coord_at(k: int) -> Fraction:
            if slope == 1:
                return c2 + k * off
            return slope**k * c2 + off * (slope**k - 1) / (slope - 1)

        def lap_ok(cc: Fraction) -> bool:
            xx = self._transit_point(i, j, d, cc)
            good, _, _, _ = self._simulate_lap(region, d, xx, cc, word_sim, (i, j))
            return good

        # canonicalize the route: completed laps become one marker
        del route[i1:]
        route.append(("loop", word))
        lap_memo.clear()
        seen_states.clear()

        if slope != 1 and abs(slope) < 1:
            fix = off / (1 - slope)
            if lap_ok(fix):
                return ("end", TERM_SPIRAL, word)
        res, laps = self._exit_laps(coord_at, lap_ok, contracting=abs(slope) < 1)
        if res == "spiral":
            return ("end", TERM_SPIRAL, word)
        if res == "clip":
            return ("end", TERM_UNBOUNDED, "clip")
        if laps > 0:
            x_new = self._transit_point(i, j, d, coord_at(laps))
            orbit.loop_jumps.append((len(orbit.vertices) - 1, word, laps))
            orbit.vertices[-1] = x_new
        return ("state", ("flight", region, d))

    def _exit_laps(self, coord_at, lap_ok, contracting: bool):
        """Smallest k >= 0 whose lap breaks; 'spiral' when no finite lap does."""
        if not lap_ok(coord_at(0)):
            return ("exit", 0)
        cap = max(64, self.limits.max_segments)
        k = 1
        while lap_ok(coord_at(k)):
            if contracting:
                # iterates approach the fixed point; beyond the cap the tail
                # is indistinguishable from the limit cycle itself
                if k > cap:
                    return ("spiral", 0)
            elif abs(coord_at(k)) > self.limits.clip * 4 or k > (1 << 40):
                return ("clip", 0)
            k *= 2
        lo, hi = k // 2, k
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if lap_ok(coord_at(mid)):
                lo = mid
            else:
                hi = mid
        return ("exit", hi)

    def _simulate_lap(self, region, d, x0, coord, word_sim, edge):
        """Virtually run one lap; (ok, slope, offset, end point)."""
        slope = Fraction(1)
        off = Fraction(0)
        x, r, dd = x0, region, d
        togo = list(word_sim)
        guard = 0
        while togo:
            guard += 1
            if guard > 4 * len(word_sim) + 8:
                return False, None, None, None
            try:
                ev = self.flight_event(x, dd, r)
            except StuckAtDegeneracy:
                return False, None, None, None
            if ev is None:
                return False, None, None, None
            t, hitters = ev
            ties = set(hitters) | {r}
            if len(ties) != 2:
                return False, None, None, None
            a, b = sorted(ties)
            x = x.moved(t, dd)
            kind = self.classify_tie(a, b)
            if kind == NON_SWITCHING:
                r = (ties - {r}).pop()
                continue
            if kind != CROSSING or togo[0][:2] != ("x", (a, b)):
                return False, None, None, None
            togo.pop(0)
            m = self._transit_affine(a, b, dd)
            slope = m[0] * slope
            off = m[0] * off + m[1]
            r = (ties - {r}).pop()
            dd = self.tds[r].flow
        return True, slope, off, x

    def _transit_affine(self, i, j, incoming_d):
        ni, mi = self.tds[i].degree
        nj, mj = self.tds[j].degree
        dai = self.tds[j].alpha.value - self.tds[i].alpha.value
        if incoming_d[1] != 0:   # vertical flight: u in, v out
            den = mi - mj
            return (Fraction(nj - ni, den), dai / den)
        den = ni - nj
        return (Fraction(mj - mi, den), dai / den)


def _reversed(tds: TropicalSystem) -> TropicalSystem:
    from .core import TropicalPair, make_tds

    return make_tds([TropicalPair(p.index, p.axis, -p.delta, p.degree, p.alpha) for p in tds.pairs])


def trace_orbit(
    tds: TropicalSystem,
    start: QPoint,
    direction: str = FORWARD,
    policy: TracePolicy | None = None,
    limits: Limits | None = None,
) -> Orbit:
    """Trace the polygonal orbit from a point under the default selection policy.

    Backward orbits reuse the forward machinery on the sign-reversed system.
    """
    policy = policy or DEFAULT_POLICY
    limits = limits or DEFAULT_LIMITS
    sys_ = tds if direction == FORWARD else _reversed(tds)
    return _Tracer(sys_, policy, limits).run(start, direction)


def trace_orbit_branches(
    tds: TropicalSystem,
    start: QPoint,
    direction: str = FORWARD,
    max_branches: int = 16,
    limits: Limits | None = None,
) -> list[Orbit]:
    """Bounded enumeration over vertex-continuation choices (canard search)."""
    limits = limits or DEFAULT_LIMITS
    sys_ = tds if direction == FORWARD else _reversed(tds)
    results: list[Orbit] = []
    queue: list[tuple[int, ...]] = [()]
    seen_choice_keys = set()
    while queue and len(results) < max_branches:
        choices = queue.pop(0)
        tracer = _BranchTracer(sys_, DEFAULT_POLICY, limits, choices)
        orbit = tracer.run(start, direction)
        results.append(orbit)
        for depth, n_opts in tracer.branch_log:
            if depth >= len(choices):
                for alt in range(1, n_opts):
                    nxt = choices + (0,) * (depth - len(choices)) + (alt,)
                    if nxt not in seen_choice_keys:
                        seen_choice_keys.add(nxt)
                        queue.append(nxt)
                break
    return results


class _BranchTracer(_Tracer):
    def __init__(self, tds, policy, limits, choices):
        super().__init__(tds, policy, limits)
        self.choices = choices
        self.branch_log: list[tuple[int, int]] = []

    def _continue_at_vertex(self, x, ties, route):
        if self.policy.crossing_only:
            return None, (TERM_VERTEX, str(x), tuple(sorted(ties)))
        route.append(("vertex", tuple(sorted(ties))))
        conts = self.vertex_continuations(x, ties)
        if not conts:
            return None, (TERM_STUCK, str(x))
        depth = len(self.branch_log)
        self.branch_log.append((depth, len(conts)))
        pick = self.choices[depth] if depth < len(self.choices) else 0
        return self._continuation_state(conts[min(pick, len(conts) - 1)]), None
