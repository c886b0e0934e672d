"""tropd: exact phase portraits of planar max-affine switching systems.

A system is a finite family of (axis-aligned unit flow, affine monomial)
pairs; regions where one monomial strictly dominates move with its flow, and
the locus of ties carries crossing or sliding dynamics.  Everything except
the smoothed-field evaluator and render shadows runs on exact rationals.
"""

from .analysis import (CycleNotRealized, Feature, NoCommonSection,
                       NotACrossingCycle, NotASeparatrixCarrier, ReturnMap,
                       Section, find_crossing_cycles, portrait,
                       portrait_signature, return_map, separatrices,
                       splitting_constant, stability_report)
from .core import (AllNegInf, BadDegreeRange, DuplicateDegreeInAxis, EmptyAxis,
                   InvalidEps, NEG_INF, TDS, TropCoeff, TropError,
                   TropicalPair, TropicalSystem, argmax_set, count_coefficients,
                   eval_monomial, full_support_tds, i_configuration_size,
                   make_tds, pair, tds_from_json, tds_to_json, tropicalize)
from .dynamics import (AffineMap1D, EdgeClass, FieldValue, NotAnEdge,
                       NotCrossing, NotFilippov, Singularity, TangentialEdge,
                       classify_edge, crossing_map, filippov_vector,
                       nullcline_vector, singularities, smooth_field,
                       trop_field)
from .exact import AffineQ, QPoint, frac, frac_str
from .geometry import (GeneralPositionReport, Subdivision, TropEdge,
                       TropicalCurve, general_position, is_triangulation,
                       regular_subdivision, tropical_curve)
from .graph import CrossingGraph, build_graph, enumerate_cycles, reachable
from .orbits import (BACKWARD, FORWARD, Limits, Orbit, StuckAtDegeneracy,
                     TracePolicy, trace_orbit, trace_orbit_branches)
from .presets import (autocatalator, crossing_cycle_family,
                      generalized_autocatalator, genauto,
                      persistent_connection_family, preset, preset_names)
from .scene import Scene, SweepResult, export_scene, export_svg, sweep

__version__ = "0.1.0"
