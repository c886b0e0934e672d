"""Shared builders and independent oracles.

Systems are spelled out literally here (not imported from the presets) so the
tests pin the construction; the brute-force evaluator below is the oracle the
exact routines are checked against.
"""

from fractions import Fraction as F

import pytest

from tropd import QPoint, TropCoeff, TropicalPair, make_tds

AUTOCAT_DEGREES = {
    1: ("U", +1, (-1, 0)),
    2: ("U", -1, (0, 0)),
    3: ("U", -1, (0, 2)),
    4: ("V", -1, (0, 0)),
    5: ("V", +1, (1, -1)),
    6: ("V", +1, (1, 1)),
}


def build_autocat(alpha) -> "make_tds":
    a = F(alpha)
    coeffs = {1: a - 1, 2: F(-1), 3: F(-1), 4: F(0), 5: F(0), 6: F(0)}
    return make_tds([
        TropicalPair(k, axis, d, deg, TropCoeff.of(coeffs[k]))
        for k, (axis, d, deg) in AUTOCAT_DEGREES.items()
    ])


def build_crossing1(alpha):
    a = F(alpha)
    return make_tds([
        TropicalPair(1, "U", +1, (1, 0), TropCoeff.of(0)),
        TropicalPair(2, "U", -1, (3, 3), TropCoeff.of(-5)),
        TropicalPair(3, "V", -1, (0, 1), TropCoeff.of(0)),
        TropicalPair(4, "V", +1, (4, 2), TropCoeff.of(0)),
        TropicalPair(5, "V", -1, (5, 5), TropCoeff.of(a)),
    ])


def build_crossing2(alpha):
    a = F(alpha)
    return make_tds([
        TropicalPair(1, "U", +1, (2, 0), TropCoeff.of(0)),
        TropicalPair(2, "U", -1, (2, 3), TropCoeff.of(-2)),
        TropicalPair(3, "V", -1, (0, 1), TropCoeff.of(0)),
        TropicalPair(4, "V", +1, (4, 1), TropCoeff.of(0)),
        TropicalPair(5, "V", -1, (5, 4), TropCoeff.of(a)),
    ])


def brute_values(tds, p: QPoint) -> dict:
    """Independent monomial evaluation: alpha + n*u + m*v over finite pairs."""
    out = {}
    for tp in tds.pairs:
        if tp.alpha.value is None:
            continue
        out[tp.index] = tp.alpha.value + tp.degree[0] * p.u + tp.degree[1] * p.v
    return out


def brute_argmax(tds, axis, p: QPoint) -> set:
    vals = {k: v for k, v in brute_values(tds, p).items()
            if axis == "I" or tds[k].axis == axis}
    top = max(vals.values())
    return {k for k, v in vals.items() if v == top}


@pytest.fixture
def autocat_quarter():
    return build_autocat(F(1, 4))


@pytest.fixture
def crossing1_25():
    return build_crossing1(-25)


@pytest.fixture
def crossing2_4():
    return build_crossing2(-4)
