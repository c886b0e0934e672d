"""Exact rational primitives shared by every analysis layer.

All geometry in this package is done over ``fractions.Fraction``; floats only
appear in render shadows and in the smoothed field evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]


def frac(x: RatLike) -> Fraction:
    """Parse a rational given as Fraction, int, or a 'p/q' / 'p' string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted where exact rationals are required")
    return Fraction(str(x).strip())


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Vec = tuple[Fraction, Fraction]


def vec(a: RatLike, b: RatLike) -> Vec:
    return (frac(a), frac(b))


def vadd(a, b) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a, b) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def vscale(s, a) -> Vec:
    return (s * a[0], s * a[1])


def dot(a, b) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def norm1(a) -> Fraction:
    return abs(a[0]) + abs(a[1])


def unit1(a) -> Vec:
    """Rescale a nonzero vector to 1-norm exactly 1."""
    n = norm1(a)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return (Fraction(a[0], 1) / n, Fraction(a[1], 1) / n)


def sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True, order=True)
class QPoint:
    """A point of the phase plane with exact rational coordinates."""

    u: Fraction
    v: Fraction

    @staticmethod
    def of(u: RatLike, v: RatLike) -> "QPoint":
        return QPoint(frac(u), frac(v))

    def __add__(self, d) -> "QPoint":
        return QPoint(self.u + d[0], self.v + d[1])

    def moved(self, t: Fraction, d) -> "QPoint":
        return QPoint(self.u + t * d[0], self.v + t * d[1])

    def as_tuple(self) -> Vec:
        return (self.u, self.v)

    def floats(self) -> tuple[float, float]:
        return (float(self.u), float(self.v))

    def __iter__(self):
        yield self.u
        yield self.v

    def __str__(self) -> str:
        return f"({frac_str(self.u)}, {frac_str(self.v)})"


class AffineQ:
    """A rational affine form  const + sum(coeffs[k] * symbol_k), with the
    symbols keyed by pair index."""

    __slots__ = ("const", "lin")

    def __init__(self, const: RatLike = 0, lin: Mapping | None = None):
        self.const = frac(const)
        self.lin: dict = {}
        if lin:
            for k, c in lin.items():
                c = frac(c)
                if c != 0:
                    self.lin[k] = c

    @staticmethod
    def symbol(k, coeff: RatLike = 1) -> "AffineQ":
        return AffineQ(0, {k: frac(coeff)})

    @staticmethod
    def lift(x) -> "AffineQ":
        return x if isinstance(x, AffineQ) else AffineQ(x)

    def copy(self) -> "AffineQ":
        return AffineQ(self.const, dict(self.lin))

    def __add__(self, other) -> "AffineQ":
        other = AffineQ.lift(other)
        out = dict(self.lin)
        for k, c in other.lin.items():
            nc = out.get(k, Fraction(0)) + c
            if nc == 0:
                out.pop(k, None)
            else:
                out[k] = nc
        return AffineQ(self.const + other.const, out)

    __radd__ = __add__

    def __neg__(self) -> "AffineQ":
        return AffineQ(-self.const, {k: -c for k, c in self.lin.items()})

    def __sub__(self, other) -> "AffineQ":
        return self + (-AffineQ.lift(other))

    def __rsub__(self, other) -> "AffineQ":
        return AffineQ.lift(other) + (-self)

    def __mul__(self, s: RatLike) -> "AffineQ":
        s = frac(s)
        if s == 0:
            return AffineQ(0)
        return AffineQ(self.const * s, {k: c * s for k, c in self.lin.items()})

    __rmul__ = __mul__

    def __truediv__(self, s: RatLike) -> "AffineQ":
        return self * (Fraction(1) / frac(s))

    def subs(self, key, value: "AffineQ | RatLike") -> "AffineQ":
        """Substitute an affine form (or constant) for one symbol."""
        if key not in self.lin:
            return self.copy()
        c = self.lin[key]
        rest = {k: v for k, v in self.lin.items() if k != key}
        return AffineQ(self.const, rest) + AffineQ.lift(value) * c

    def eval(self, values: Mapping) -> Fraction:
        acc = self.const
        for k, c in self.lin.items():
            acc += c * frac(values[k])
        return acc

    def is_constant(self) -> bool:
        return not self.lin

    def coeff(self, k) -> Fraction:
        return self.lin.get(k, Fraction(0))

    def coeff_sum(self, keys: Iterable | None = None) -> Fraction:
        if keys is None:
            return sum(self.lin.values(), Fraction(0))
        return sum((self.lin.get(k, Fraction(0)) for k in keys), Fraction(0))

    def __eq__(self, other) -> bool:
        other = AffineQ.lift(other)
        return self.const == other.const and self.lin == other.lin

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.lin.items(), key=repr))))

    def __repr__(self) -> str:
        if not self.lin:
            return f"AffineQ({frac_str(self.const)})"
        terms = " + ".join(f"{frac_str(c)}*a[{k}]" for k, c in sorted(self.lin.items(), key=lambda kv: str(kv[0])))
        return f"AffineQ({frac_str(self.const)} + {terms})"


@dataclass(frozen=True)
class AffinePoint:
    """A plane point whose coordinates are affine in the tropical coefficients."""

    u: AffineQ
    v: AffineQ

    @staticmethod
    def constant(p: QPoint) -> "AffinePoint":
        return AffinePoint(AffineQ(p.u), AffineQ(p.v))

    def eval(self, values: Mapping) -> QPoint:
        return QPoint(self.u.eval(values), self.v.eval(values))

    def moved(self, t: AffineQ, d) -> "AffinePoint":
        return AffinePoint(self.u + t * d[0], self.v + t * d[1])


def solve2x2(a11, a12, a21, a22, b1, b2):
    """Solve a 2x2 rational linear system; returns None when singular.

    The right-hand sides may be AffineQ forms, in which case the solution
    components are AffineQ as well.
    """
    det = a11 * a22 - a12 * a21
    if det == 0:
        return None
    x = (AffineQ.lift(b1) * a22 - AffineQ.lift(b2) * a12) / det
    y = (AffineQ.lift(b2) * a11 - AffineQ.lift(b1) * a21) / det
    if x.is_constant() and y.is_constant():
        return (x.const, y.const)
    return (x, y)
