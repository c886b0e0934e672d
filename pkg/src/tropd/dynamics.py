"""Switching-edge classification, the set-valued field, and singularities."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (AllNegInf, InvalidEps, TropError, TropicalSystem, I, U, V,
                   argmax_along_ray, argmax_set)
from .exact import AffineQ, QPoint, Vec, cross, dot, frac, sign, unit1
from .geometry import TropEdge, tropical_curve

# edge kinds
NON_SWITCHING = "NonSwitching"
CROSSING = "Crossing"
FILIPPOV_TRANSVERSAL = "FilippovTransversal"
FILIPPOV_TANGENTIAL = "FilippovTangential"
NULLCLINE_TRANSVERSAL = "NullclineTransversal"
NULLCLINE_TANGENTIAL = "NullclineTangential"

# stability
STABLE = "Stable"
UNSTABLE = "Unstable"
NOT_APPLICABLE = "NotApplicable"

# singularity kinds
SINK = "Sink"
SOURCE = "Source"
STRONG_STABLE_SADDLE = "StrongStableSaddle"
STRONG_UNSTABLE_SADDLE = "StrongUnstableSaddle"
HYBRID_CENTER = "HybridCenter"
HYBRID_SADDLE = "HybridSaddle"
DEGENERATE = "Degenerate"

SLIDING_KINDS = (FILIPPOV_TRANSVERSAL, FILIPPOV_TANGENTIAL,
                 NULLCLINE_TRANSVERSAL, NULLCLINE_TANGENTIAL)


class NotAnEdge(TropError):
    pass


class NotFilippov(TropError):
    pass


class TangentialEdge(TropError):
    pass


class NotCrossing(TropError):
    pass


@dataclass(frozen=True)
class EdgeClass:
    kind: str
    stability: str
    dominant_axis: str   # "U" / "V" / NotApplicable


def classify_edge(tds: TropicalSystem, e: TropEdge) -> EdgeClass:
    """Switching type of a 2-maximizer edge, per the flow/normal sign tests.

    Stability convention: with normal = deg(j) - deg(i), region i sits on the
    negative side, so d_i points toward the edge iff d_i.n > 0 and d_j points
    toward iff d_j.n < 0.
    """
    try:
        pi, pj = tds[e.i], tds[e.j]
    except KeyError as exc:
        raise NotAnEdge(f"unknown pair index {exc}")
    di, dj = pi.flow, pj.flow
    n = e.normal
    if di == dj:
        return EdgeClass(NON_SWITCHING, NOT_APPLICABLE, NOT_APPLICABLE)
    si = dot(di, n)
    sj = dot(dj, n)
    if si * sj > 0:
        return EdgeClass(CROSSING, NOT_APPLICABLE, NOT_APPLICABLE)
    ddot = dot(di, dj)
    axis = pi.axis if pi.axis == pj.axis else NOT_APPLICABLE
    if ddot == 0:
        kind = FILIPPOV_TANGENTIAL if si * sj == 0 else FILIPPOV_TRANSVERSAL
    else:
        kind = NULLCLINE_TANGENTIAL if si * sj == 0 else NULLCLINE_TRANSVERSAL
    if kind == NULLCLINE_TANGENTIAL:
        stability = NOT_APPLICABLE
    elif si * sj != 0:
        stability = STABLE if (si > 0 and sj < 0) else UNSTABLE
    else:
        nonzero = si if si != 0 else -sj
        stability = STABLE if nonzero > 0 else UNSTABLE
    return EdgeClass(kind, stability, axis)


def filippov_vector(d_i, d_j, n) -> Vec:
    """Convex combination of the two flows tangent to their shared edge."""
    si = frac(dot(d_i, n))
    sj = frac(dot(d_j, n))
    if dot(d_i, d_j) != 0 or si * sj > 0 or (si == 0 and sj == 0):
        raise NotFilippov(f"flows {d_i}, {d_j} with normal {n} are not a sliding pair")
    q = sj / (sj - si)
    out = (q * d_i[0] + (1 - q) * d_j[0], q * d_i[1] + (1 - q) * d_j[1])
    assert dot(out, n) == 0
    return out


def nullcline_vector(e: TropEdge, d_l) -> Vec:
    """Unit tangent of a transversal nullcline edge, oriented by the subdominant flow."""
    t = unit1(e.tangent())
    s = dot(d_l, t)
    if s == 0:
        raise TangentialEdge(f"subdominant flow {d_l} is orthogonal to edge {e.key}")
    return t if s > 0 else (-t[0], -t[1])


@dataclass(frozen=True)
class AffineMap1D:
    """out = slope * x + offset, with the offset affine in the coefficients."""

    slope: Fraction
    offset: AffineQ

    def offset_value(self, tds: TropicalSystem) -> Fraction:
        return self.offset.eval(tds.alphas())

    def apply(self, x, tds: TropicalSystem | None = None):
        if isinstance(x, AffineQ):
            return x * self.slope + self.offset
        return self.slope * frac(x) + self.offset_value(tds)


def transit_map(tds: TropicalSystem, e: TropEdge, incoming_axis: str) -> AffineMap1D:
    """Crossing transition: preserved coordinate in -> preserved coordinate out.

    A vertical flight preserves u and leaves with v preserved (and vice
    versa); the formula is symmetric in the edge's pair order.
    """
    ni, mi = tds[e.i].degree
    nj, mj = tds[e.j].degree
    sym = AffineQ.symbol(e.j) - AffineQ.symbol(e.i)
    if incoming_axis == V:  # vertical flight: u in, v out
        den = mi - mj
        if den == 0:
            raise NotCrossing(f"edge {e.key} is horizontal; no vertical transit")
        return AffineMap1D(Fraction(nj - ni, den), sym / den)
    den = ni - nj
    if den == 0:
        raise NotCrossing(f"edge {e.key} is vertical; no horizontal transit")
    return AffineMap1D(Fraction(mj - mi, den), sym / den)


def crossing_map(tds: TropicalSystem, e: TropEdge) -> AffineMap1D:
    """Transition map across a crossing edge for a vertical incoming flow."""
    if classify_edge(tds, e).kind != CROSSING:
        raise NotCrossing(f"edge {e.key} is not of crossing type")
    return transit_map(tds, e, V)


# ---------------------------------------------------------------------------
# The set-valued field
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldValue:
    """Exact description of the admissible velocity set at one point."""

    tag: str      # singleton | crossing | filippov | nullcline_fan | diamond_zero | vertex_fan
    data: tuple

    def generators(self) -> tuple[Vec, ...]:
        if self.tag == "singleton":
            return (self.data[0],)
        if self.tag in ("crossing", "filippov"):
            return (self.data[0], self.data[1])
        if self.tag == "nullcline_fan":
            di, dj, dl = self.data[0], self.data[1], self.data[2]
            return (di, dj, dl)
        if self.tag == "diamond_zero":
            return ((frac(1), frac(0)), (frac(-1), frac(0)),
                    (frac(0), frac(1)), (frac(0), frac(-1)), (frac(0), frac(0)))
        return tuple(self.data[0])

    def contains(self, w) -> bool:
        w = (frac(w[0]), frac(w[1]))
        if self.tag == "singleton":
            return w == tuple(map(frac, self.data[0]))
        if self.tag in ("crossing", "filippov"):
            return _in_segment_pair(w, self.data[0], self.data[1])
        if self.tag == "nullcline_fan":
            dl = self.data[2]
            return abs(w[0]) + abs(w[1]) == 1 and dot(w, dl) >= 0
        if self.tag == "diamond_zero":
            return w == (0, 0) or abs(w[0]) + abs(w[1]) == 1
        gens = self.data[0]
        horiz = [g for g in gens if g[1] == 0]
        verts = [g for g in gens if g[0] == 0]
        return any(_in_segment_pair(w, t, s) for t in horiz for s in verts)

    def contains_zero(self) -> bool:
        return self.tag == "diamond_zero"


def _in_segment_pair(w, t, s) -> bool:
    """Membership of w in conv(t, s) for one horizontal and one vertical unit flow."""
    if t[0] == 0:
        t, s = s, t
    q = frac(w[0]) / t[0]
    if q < 0 or q > 1:
        return False
    if s[1] == 0:
        return False
    return frac(w[1]) == (1 - q) * s[1]


def trop_field(tds: TropicalSystem, p: QPoint) -> FieldValue:
    """Case analysis of the admissible-velocity set at a point."""
    arg_u = argmax_set(tds, U, p)
    arg_v = argmax_set(tds, V, p)
    arg_i = argmax_set(tds, I, p)
    flows_i = {tds[k].flow for k in arg_i}
    if len(flows_i) == 1:
        return FieldValue("singleton", (next(iter(flows_i)),))
    flows_u = {tds[k].flow for k in arg_u}
    flows_v = {tds[k].flow for k in arg_v}
    if flows_u == {(1, 0), (-1, 0)} and flows_v == {(0, 1), (0, -1)}:
        return FieldValue("diamond_zero", ())
    if len(arg_i) == 2:
        i, j = sorted(arg_i)
        pi, pj = tds[i], tds[j]
        n = (frac(pj.degree[0] - pi.degree[0]), frac(pj.degree[1] - pi.degree[1]))
        di, dj = pi.flow, pj.flow
        if pi.axis == pj.axis:
            other = V if pi.axis == U else U
            sub_flows = flows_v if other == V else flows_u
            dl = next(iter(sub_flows))
            tangent = (-n[1], n[0])
            dnc = None
            if dot(dl, tangent) != 0:
                t1 = unit1(tangent)
                dnc = t1 if dot(dl, t1) > 0 else (-t1[0], -t1[1])
            return FieldValue("nullcline_fan", (di, dj, dl, dnc))
        si, sj = dot(di, n), dot(dj, n)
        if si * sj > 0:
            return FieldValue("crossing", (di, dj))
        return FieldValue("filippov", (di, dj, filippov_vector(di, dj, n)))
    gens = tuple(sorted(flows_u | flows_v))
    return FieldValue("vertex_fan", (gens,))


# ---------------------------------------------------------------------------
# Singularities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Singularity:
    location: QPoint
    kind: str
    host_u: tuple[int, int]          # U-axis tie pair
    host_v: tuple[int, int]          # V-axis tie pair
    t_host_axis: str | None          # which host carries the full-system edge
    host_stability: str | None
    side_subdominant: tuple[Vec, ...]   # subdominant flows on the two host sides
    nc_toward: bool | None           # sliding direction points toward the point

    def invariant_record(self, tds) -> tuple:
        """Coordinate-free description; stable across inert re-labelings."""
        normal = None
        if self.t_host_axis in (U, V):
            host = self.host_u if self.t_host_axis == U else self.host_v
            normal = _primitive(_host_normal(tds, host))
        return (
            self.kind,
            self.t_host_axis,
            normal,
            self.host_stability,
            tuple(sorted(self.side_subdominant)),
            self.nc_toward,
        )


def _host_normal(tds, pair_key):
    i, j = pair_key
    return (frac(tds[j].degree[0] - tds[i].degree[0]),
            frac(tds[j].degree[1] - tds[i].degree[1]))


def _primitive(v) -> tuple[int, int]:
    """Canonical integer direction of a rational vector (sign-normalized)."""
    a, b = frac(v[0]), frac(v[1])
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    x, y = int(a * den), int(b * den)
    g = math.gcd(abs(x), abs(y))
    if g:
        x, y = x // g, y // g
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    return (x, y)


@functools.lru_cache(maxsize=2048)
def singularities(tds: TropicalSystem) -> tuple[Singularity, ...]:
    """All points where the zero vector is admissible, classified exactly.

    Points hosted on curve vertices, or with non-transverse host lines,
    come back flagged Degenerate instead of being rejected.
    """
    cu = tropical_curve(tds, U)
    cv = tropical_curve(tds, V)
    found: dict[QPoint, Singularity] = {}
    for eu in cu.edges:
        if tds[eu.i].flow == tds[eu.j].flow:
            continue
        for ev in cv.edges:
            if tds[ev.i].flow == tds[ev.j].flow:
                continue
            Au, Bu, Cu = eu.line_coeffs()
            Av, Bv, Cv = ev.line_coeffs()
            det = Au * Bv - Av * Bu
            if det == 0:
                continue
            x = _solve_lines(Au, Bu, Cu, Av, Bv, Cv)
            arg_u = argmax_set(tds, U, x)
            arg_v = argmax_set(tds, V, x)
            flows_u = {tds[k].flow for k in arg_u}
            flows_v = {tds[k].flow for k in arg_v}
            if flows_u != {(1, 0), (-1, 0)} or flows_v != {(0, 1), (0, -1)}:
                continue
            if x in found:
                continue
            found[x] = _classify_singularity(tds, x, arg_u, arg_v, cu, cv)
    return tuple(sorted(found.values(), key=lambda s: (s.location.u, s.location.v)))


def _solve_lines(Au, Bu, Cu, Av, Bv, Cv) -> QPoint:
    det = Au * Bv - Av * Bu
    return QPoint((Bu * Cv - Bv * Cu) / det, (Av * Cu - Au * Cv) / det)


def _classify_singularity(tds, x, arg_u, arg_v, cu, cv) -> Singularity:
    if len(arg_u) != 2 or len(arg_v) != 2:
        return Singularity(x, DEGENERATE, tuple(sorted(arg_u))[:2], tuple(sorted(arg_v))[:2],
                           None, None, (), None)
    hu = tuple(sorted(arg_u))
    hv = tuple(sorted(arg_v))
    arg_i = argmax_set(tds, I, x)
    if arg_i == set(hu):
        axis, host_pair, other_axis = U, hu, V
    elif arg_i == set(hv):
        axis, host_pair, other_axis = V, hv, U
    else:
        return Singularity(x, DEGENERATE, hu, hv, None, None, (), None)
    n = _host_normal(tds, host_pair)
    di = tds[host_pair[0]].flow
    dj = tds[host_pair[1]].flow
    si, sj = dot(di, n), dot(dj, n)
    tangent = (-n[1], n[0])
    g_pos = _side_subdominant(tds, other_axis, x, tangent)
    g_neg = _side_subdominant(tds, other_axis, x, (-tangent[0], -tangent[1]))
    if g_pos is None or g_neg is None:
        return Singularity(x, DEGENERATE, hu, hv, axis, None, (), None)
    if si * sj == 0:
        kind = _hybrid_subtype(di, dj, n, tangent, g_pos, g_neg)
        return Singularity(x, kind, hu, hv, axis, NOT_APPLICABLE, (g_pos, g_neg), None)
    stability = STABLE if (si > 0 and sj < 0) else UNSTABLE
    t1 = unit1(tangent)
    s_pos = dot(g_pos, t1)
    if s_pos == 0:
        return Singularity(x, DEGENERATE, hu, hv, axis, stability, (g_pos, g_neg), None)
    toward = s_pos < 0   # sliding on the +tangent side points back at x
    if stability == STABLE:
        kind = SINK if toward else STRONG_STABLE_SADDLE
    else:
        kind = STRONG_UNSTABLE_SADDLE if toward else SOURCE
    return Singularity(x, kind, hu, hv, axis, stability, (g_pos, g_neg), toward)


def _side_subdominant(tds, axis, x, direction):
    arg = argmax_along_ray(tds, axis, x, direction)
    flows = {tds[k].flow for k in arg}
    if len(flows) != 1:
        return None
    return next(iter(flows))


def _hybrid_subtype(di, dj, n, tangent, g_pos, g_neg) -> str:
    """Center- vs saddle-type hybrid from the rotation sense of the four sectors.

    Walking the sectors counterclockwise (+n, +t, -n, -t; the dominant flow
    on the n-positive side is d_j, the subdominant flows sit on the tangent
    sides), a flow that co-rotates with the position circulates (center-like),
    one that counter-rotates has inflow and outflow quadrants (saddle-like).
    """
    seq = [dj, g_pos, di, g_neg]
    signs = []
    for a, b in zip(seq, seq[1:] + seq[:1]):
        c = cross(a, b)
        if c == 0:
            return DEGENERATE
        signs.append(sign(c))
    if all(s > 0 for s in signs):
        return HYBRID_CENTER
    if all(s < 0 for s in signs):
        return HYBRID_SADDLE
    return DEGENERATE


# ---------------------------------------------------------------------------
# Smoothed field
# ---------------------------------------------------------------------------

def smooth_field(tds: TropicalSystem, p: QPoint, eps: float) -> tuple[float, float]:
    """Float evaluation of the normalized exponential field; log-sum-exp stabilized."""
    if eps <= 0:
        raise InvalidEps(f"eps must be positive, got {eps}")
    u, v = float(p.u), float(p.v)
    vals = []
    for tp in tds.pairs:
        if not tp.alpha.finite:
            continue
        f = float(tp.alpha.value) + tp.degree[0] * u + tp.degree[1] * v
        vals.append((tp, f))
    if not vals:
        raise AllNegInf("all coefficients are -inf")
    m = max(f for _, f in vals)
    den = 0.0
    num_u = 0.0
    num_v = 0.0
    for tp, f in vals:
        w = math.exp((f - m) / eps)
        den += w
        if tp.axis == U:
            num_u += tp.delta * w
        else:
            num_v += tp.delta * w
    return (num_u / den, num_v / den)
