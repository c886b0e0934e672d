"""Built-in example systems.

The generalized-autocatalator presets mirror the published figure captions; two
captions are internally ambiguous about which coefficient moves, so those
entries carry an alternate reading that tests can select from.
"""

from __future__ import annotations

from fractions import Fraction

from .core import TropicalSystem, TropicalPair, TropCoeff, make_tds
from .exact import RatLike, frac


def autocatalator(alpha: RatLike = Fraction(1, 4)) -> TropicalSystem:
    """Degree-3 autocatalytic system; the single parameter shifts pair 1."""
    a = frac(alpha)
    return make_tds([
        TropicalPair(1, "U", +1, (-1, 0), TropCoeff.of(a - 1)),
        TropicalPair(2, "U", -1, (0, 0), TropCoeff.of(-1)),
        TropicalPair(3, "U", -1, (0, 2), TropCoeff.of(-1)),
        TropicalPair(4, "V", -1, (0, 0), TropCoeff.of(0)),
        TropicalPair(5, "V", +1, (1, -1), TropCoeff.of(0)),
        TropicalPair(6, "V", +1, (1, 1), TropCoeff.of(0)),
    ])


def crossing_cycle_family(alpha: RatLike = -25) -> TropicalSystem:
    """One-parameter family with a bifurcating crossing limit cycle."""
    a = frac(alpha)
    return make_tds([
        TropicalPair(1, "U", +1, (1, 0), TropCoeff.of(0)),
        TropicalPair(2, "U", -1, (3, 3), TropCoeff.of(-5)),
        TropicalPair(3, "V", -1, (0, 1), TropCoeff.of(0)),
        TropicalPair(4, "V", +1, (4, 2), TropCoeff.of(0)),
        TropicalPair(5, "V", -1, (5, 5), TropCoeff.of(a)),
    ])


def persistent_connection_family(alpha: RatLike = -4) -> TropicalSystem:
    """One-parameter family with a robust homoclinic connection (band of cycles)."""
    a = frac(alpha)
    return make_tds([
        TropicalPair(1, "U", +1, (2, 0), TropCoeff.of(0)),
        TropicalPair(2, "U", -1, (2, 3), TropCoeff.of(-2)),
        TropicalPair(3, "V", -1, (0, 1), TropCoeff.of(0)),
        TropicalPair(4, "V", +1, (4, 1), TropCoeff.of(0)),
        TropicalPair(5, "V", -1, (5, 4), TropCoeff.of(a)),
    ])


def generalized_autocatalator(alphas) -> TropicalSystem:
    """Same supports and flows as the autocatalator, all six coefficients free."""
    a = [frac(x) for x in alphas]
    if len(a) != 6:
        raise ValueError("six coefficients expected")
    return make_tds([
        TropicalPair(1, "U", +1, (-1, 0), TropCoeff.of(a[0])),
        TropicalPair(2, "U", -1, (0, 0), TropCoeff.of(a[1])),
        TropicalPair(3, "U", -1, (0, 2), TropCoeff.of(a[2])),
        TropicalPair(4, "V", -1, (0, 0), TropCoeff.of(a[3])),
        TropicalPair(5, "V", +1, (1, -1), TropCoeff.of(a[4])),
        TropicalPair(6, "V", +1, (1, 1), TropCoeff.of(a[5])),
    ])


F = Fraction

# the 15 structurally stable cases, keyed by the figure-caption coefficients
GENAUTO_CASES: dict[str, tuple] = {
    "1H_a": (0, F(1, 4), 0, 0, 0, -1),
    "1H_b": (0, F(1, 4), 0, F(-3, 4), 0, -1),
    "1V":   (0, F(1, 10), 0, F(1, 4), 0, -1),
    "2":    (0, F(-1, 2), 0, F(-1, 2), 0, -1),
    "3":    (0, F(-2, 5), 0, F(-1, 2), -1, 0),
    "4H_a": (0, 0, -1, F(-1, 5), -1, 0),
    "4H_b": (0, 0, -1, F(-13, 20), -1, 0),
    "4V_a": (0, F(-7, 10), -1, 0, -1, 0),
    "4V_b": (0, F(-1, 5), -1, 0, -1, 0),
    "5H_a": (0, F(1, 2), 0, 0, -1, 0),
    "5H_b": (0, F(1, 2), 0, F(-1, 2), -1, 0),
    "5H_c": (0, F(1, 2), 0, F(-6, 5), -1, 0),
    "5V_a": (0, 0, 0, F(3, 10), -1, F(1, 5)),
    "5V_b": (0, F(-1, 2), 0, F(3, 10), -1, F(1, 5)),
    "5V_c": (0, F(-4, 5), 0, F(3, 10), -1, F(1, 5)),
}

# caption-ambiguous entries: the alternate literal reading of the caption
GENAUTO_ALT_READINGS: dict[str, tuple] = {
    "4V_b": (0, F(-7, 10), -1, F(-1, 5), -1, 0),
    "5V_c": (0, F(-1, 2), 0, F(-4, 5), -1, F(1, 5)),
}

# extra parameter vectors realizing the equivalent sub-cases the captions skip
GENAUTO_EQUIVALENT_PAIRS: dict[str, tuple] = {
    "1V":   (0, F(-1, 5), 0, F(1, 4), 0, -1),    # other curve-intersection pattern
    "1H_b": (0, F(1, 4), 0, -2, 0, -1),          # the third sub-case (1H_c)
}


def genauto(case: str, alt: bool = False) -> TropicalSystem:
    table = GENAUTO_ALT_READINGS if alt else GENAUTO_CASES
    if alt and case not in GENAUTO_ALT_READINGS:
        raise KeyError(f"no alternate reading for case {case}")
    return generalized_autocatalator(table[case])


PRESETS = {
    "autocatalator": lambda: autocatalator(),
    "crossing1": lambda: crossing_cycle_family(),
    "crossing2": lambda: persistent_connection_family(),
}
for _name in GENAUTO_CASES:
    PRESETS[f"genauto-{_name}"] = (lambda n: (lambda: genauto(n)))(_name)


def preset(name: str) -> TropicalSystem:
    try:
        return PRESETS[name]()
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(PRESETS))}")


def preset_names() -> list[str]:
    return sorted(PRESETS)
