"""System definition: exact tropical coefficients, monomial pairs, validation.

A planar system is a finite list of pairs (flow vector, affine monomial),
split into a horizontal family (axis "U", driving u') and a vertical family
(axis "V", driving v').  Everything downstream consumes the immutable
:class:`TropicalSystem` built by :func:`make_tds`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import QPoint, RatLike, frac, frac_str

U, V, I = "U", "V", "I"

DEFAULT_SNAP_DENOMINATOR = 10**6


class TropError(Exception):
    """Base class for domain errors raised by this package."""


class EmptyAxis(TropError):
    pass


class DuplicateDegreeInAxis(TropError):
    pass


class BadDegreeRange(TropError):
    pass


class InvalidEps(TropError):
    pass


class AllNegInf(TropError):
    pass


@dataclass(frozen=True)
class TropCoeff:
    """A rational coefficient extended with minus infinity (value None)."""

    value: Fraction | None = None

    @staticmethod
    def of(x: RatLike | None) -> "TropCoeff":
        return NEG_INF if x is None else TropCoeff(frac(x))

    @property
    def finite(self) -> bool:
        return self.value is not None

    def __add__(self, other):
        o = other.value if isinstance(other, TropCoeff) else frac(other)
        if self.value is None or o is None:
            return NEG_INF
        return TropCoeff(self.value + o)

    def __lt__(self, other):
        o = other.value if isinstance(other, TropCoeff) else frac(other)
        if self.value is None:
            return o is not None
        if o is None:
            return False
        return self.value < o

    def __str__(self) -> str:
        return "-inf" if self.value is None else frac_str(self.value)


NEG_INF = TropCoeff(None)


@dataclass(frozen=True)
class TropicalPair:
    """One term of the system: an axis-aligned unit flow plus an affine monomial."""

    index: int
    axis: str  # "U" or "V"
    delta: int  # +1 or -1, the sign carried by the flow vector
    degree: tuple[int, int]  # coefficients (n, m) of the affine monomial
    alpha: TropCoeff

    def __post_init__(self):
        if self.axis not in (U, V):
            raise TropError(f"axis must be 'U' or 'V', got {self.axis!r}")
        if self.delta not in (1, -1):
            raise TropError(f"delta must be +1 or -1, got {self.delta!r}")

    @property
    def flow(self) -> tuple[int, int]:
        return (self.delta, 0) if self.axis == U else (0, self.delta)

    def value_at(self, p: QPoint) -> TropCoeff:
        if not self.alpha.finite:
            return NEG_INF
        n, m = self.degree
        return TropCoeff(self.alpha.value + n * p.u + m * p.v)


def pair(index: int, axis: str, delta: int, degree: tuple[int, int], alpha: RatLike | None) -> TropicalPair:
    return TropicalPair(index, axis, delta, (int(degree[0]), int(degree[1])), TropCoeff.of(alpha))


@dataclass(frozen=True)
class TropicalSystem:
    """Validated, immutable system; the single source of truth downstream."""

    pairs: tuple[TropicalPair, ...]
    degree_n: int

    def __post_init__(self):
        object.__setattr__(self, "_by_index", {p.index: p for p in self.pairs})

    def __getitem__(self, index: int) -> TropicalPair:
        return self._by_index[index]

    def indices(self, axis_filter: str = I) -> tuple[int, ...]:
        if axis_filter == I:
            return tuple(p.index for p in self.pairs)
        return tuple(p.index for p in self.pairs if p.axis == axis_filter)

    def finite_indices(self, axis_filter: str = I) -> tuple[int, ...]:
        return tuple(k for k in self.indices(axis_filter) if self[k].alpha.finite)

    def alphas(self) -> dict[int, Fraction]:
        return {p.index: p.alpha.value for p in self.pairs if p.alpha.finite}

    def with_alpha(self, updates: dict[int, RatLike | None]) -> "TropicalSystem":
        new_pairs = []
        for p in self.pairs:
            if p.index in updates:
                p = TropicalPair(p.index, p.axis, p.delta, p.degree, TropCoeff.of(updates[p.index]))
            new_pairs.append(p)
        return make_tds(new_pairs)

    def translated(self, a: RatLike) -> "TropicalSystem":
        a = frac(a)
        return self.with_alpha({p.index: p.alpha.value + a for p in self.pairs if p.alpha.finite})

    def cache_key(self) -> tuple:
        return tuple((p.index, p.axis, p.delta, p.degree, p.alpha.value) for p in self.pairs)


TDS = TropicalSystem


def make_tds(pairs: Sequence[TropicalPair]) -> TropicalSystem:
    """Validate a pair list and compute the system degree.

    Raises EmptyAxis, DuplicateDegreeInAxis or BadDegreeRange on a malformed
    input; pair order (and user-supplied indices) are preserved.
    """
    pairs = tuple(pairs)
    if not pairs:
        raise EmptyAxis("pair list is empty")
    seen: set[int] = set()
    for p in pairs:
        if p.index in seen:
            raise DuplicateDegreeInAxis(f"pair index {p.index} used twice")
        seen.add(p.index)
    for axis in (U, V):
        members = [p for p in pairs if p.axis == axis]
        if not members:
            raise EmptyAxis(f"axis {axis} has no pairs")
        degs = [p.degree for p in members]
        if len(set(degs)) != len(degs):
            raise DuplicateDegreeInAxis(f"axis {axis} repeats a degree")
    for p in pairs:
        n, m = p.degree
        if p.axis == U and (n < -1 or m < 0):
            raise BadDegreeRange(f"U-pair {p.index} has degree {p.degree}")
        if p.axis == V and (n < 0 or m < -1):
            raise BadDegreeRange(f"V-pair {p.index} has degree {p.degree}")
    degree_n = max(abs(p.degree[0]) + abs(p.degree[1]) for p in pairs) + 1
    return TropicalSystem(pairs, degree_n)


def eval_monomial(p: TropicalPair, point: QPoint) -> TropCoeff:
    """Value of the pair's affine monomial at a point (NEG_INF stays NEG_INF)."""
    return p.value_at(point)


def argmax_set(tds: TropicalSystem, axis_filter: str, p: QPoint) -> set[int]:
    """Exact maximizer set of the filtered monomial family at a point."""
    best: Fraction | None = None
    out: set[int] = set()
    for k in tds.indices(axis_filter):
        tp = tds[k]
        if not tp.alpha.finite:
            continue
        val = tp.alpha.value + tp.degree[0] * p.u + tp.degree[1] * p.v
        if best is None or val > best:
            best, out = val, {k}
        elif val == best:
            out.add(k)
    if best is None:
        raise AllNegInf(f"every monomial in filter {axis_filter} is -inf")
    return out


def argmax_along_ray(tds: TropicalSystem, axis_filter: str, p: QPoint, d) -> set[int]:
    """Maximizer set at p + eps*d for infinitesimally small eps > 0.

    Lexicographic (value, directional slope) comparison; exact.
    """
    best: tuple[Fraction, Fraction] | None = None
    out: set[int] = set()
    for k in tds.indices(axis_filter):
        tp = tds[k]
        if not tp.alpha.finite:
            continue
        val = tp.alpha.value + tp.degree[0] * p.u + tp.degree[1] * p.v
        slope = tp.degree[0] * d[0] + tp.degree[1] * d[1]
        key = (val, slope)
        if best is None or key > best:
            best, out = key, {k}
        elif key == best:
            out.add(k)
    if best is None:
        raise AllNegInf(f"every monomial in filter {axis_filter} is -inf")
    return out


def tropicalize(
    u_coeffs: Iterable[tuple[float, int, int]],
    v_coeffs: Iterable[tuple[float, int, int]],
    eps: RatLike,
    snap_denominator: int = DEFAULT_SNAP_DENOMINATOR,
) -> TropicalSystem:
    """Build the system from classical polynomial coefficients.

    Each entry (a, n, m) is a term a*x^n*y^m; the sign becomes the flow
    direction and eps*log|a| (snapped to a rational) becomes the coefficient.
    Zero coefficients map to NEG_INF and yield empty regions downstream.
    """
    eps = frac(eps)
    if eps <= 0:
        raise InvalidEps(f"eps must be positive, got {eps}")
    pairs: list[TropicalPair] = []
    idx = 1

    def emit(axis: str, a, n: int, m: int):
        nonlocal idx
        if a == 0:
            alpha: TropCoeff = NEG_INF
            delta = 1
        else:
            delta = 1 if a > 0 else -1
            raw = float(eps) * math.log(abs(float(a)))
            alpha = TropCoeff(Fraction(raw).limit_denominator(snap_denominator))
        deg = (n - 1, m) if axis == U else (n, m - 1)
        pairs.append(TropicalPair(idx, axis, delta, deg, alpha))
        idx += 1

    for a, n, m in u_coeffs:
        emit(U, a, int(n), int(m))
    for a, n, m in v_coeffs:
        emit(V, a, int(n), int(m))
    return make_tds(pairs)


def count_coefficients(n: int) -> int:
    """Number of monomials of a full planar polynomial of the given degree."""
    return (n + 2) * (n + 1) // 2


def full_support_enumeration(n: int) -> list[tuple[int, int]]:
    """Canonical (n_k, m_k) enumeration of a full degree-n support, row by row."""
    out = []
    for level in range(n + 1):
        for a in range(n - level + 1):
            out.append((a, level))
    return out


def full_support_tds(
    n: int,
    u_deltas: Sequence[int] | None = None,
    v_deltas: Sequence[int] | None = None,
    u_alphas: Sequence[RatLike | None] | None = None,
    v_alphas: Sequence[RatLike | None] | None = None,
) -> TropicalSystem:
    """Degree-n system with every monomial present in both families.

    U-pairs get indices 1..M and degrees (n_k-1, m_k); V-pairs get M+1..2M and
    degrees (n_k, m_k-1), following the canonical support enumeration.
    """
    support = full_support_enumeration(n)
    m_count = len(support)
    u_deltas = list(u_deltas) if u_deltas is not None else [1] * m_count
    v_deltas = list(v_deltas) if v_deltas is not None else [1] * m_count
    u_alphas = list(u_alphas) if u_alphas is not None else [0] * m_count
    v_alphas = list(v_alphas) if v_alphas is not None else [0] * m_count
    pairs = []
    for j, (nk, mk) in enumerate(support):
        pairs.append(TropicalPair(j + 1, U, int(u_deltas[j]), (nk - 1, mk), TropCoeff.of(u_alphas[j])))
    for j, (nk, mk) in enumerate(support):
        pairs.append(TropicalPair(m_count + j + 1, V, int(v_deltas[j]), (nk, mk - 1), TropCoeff.of(v_alphas[j])))
    return make_tds(pairs)


def i_configuration_size(n: int) -> int:
    """Distinct degree points of the combined full-support configuration."""
    return (n + 1) * (n + 4) // 2


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def tds_to_json(tds: TropicalSystem) -> dict:
    return {
        "degreeN": tds.degree_n,
        "pairs": [
            {
                "index": p.index,
                "axis": p.axis,
                "delta": p.delta,
                "degree": [p.degree[0], p.degree[1]],
                "alpha": None if not p.alpha.finite else frac_str(p.alpha.value),
            }
            for p in tds.pairs
        ],
    }


def tds_from_json(data: dict | str) -> TropicalSystem:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        raw_pairs = data["pairs"]
    except (KeyError, TypeError):
        raise TropError("TDS JSON must contain a 'pairs' list")
    pairs = []
    for rp in raw_pairs:
        try:
            alpha = rp["alpha"]
            pairs.append(
                TropicalPair(
                    int(rp["index"]),
                    str(rp["axis"]),
                    int(rp["delta"]),
                    (int(rp["degree"][0]), int(rp["degree"][1])),
                    TropCoeff.of(None if alpha is None else alpha),
                )
            )
        except (KeyError, ValueError, IndexError, TypeError) as exc:
            raise TropError(f"malformed pair entry {rp!r}: {exc}")
    tds = make_tds(pairs)
    declared = data.get("degreeN")
    if declared is not None and int(declared) != tds.degree_n:
        raise BadDegreeRange(f"declared degreeN={declared} but computed {tds.degree_n}")
    return tds
