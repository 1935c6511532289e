"""Structural stability of one-dimensional flows on the circle."""
__version__ = "0.1.0"

from .equivalence import (EquivalenceClass, Orientation, PLHomeomorphism, are_equivalent,
                          build_homeomorphism, equivalence_class, te_check)
from .errors import CircleStabError
from .field import (AccumOsc, BumpPsi, CircleField, Constant, FourierCos, FourierSin, NormEstimate,
                    OddTheta, OddThetaHat, PlateauPhi, c1_norm, certified_norm, eval_deriv, eval_field,
                    psi_norm_bound, psi_norm_exact)
from .fieldio import format_field, parse_field, read_field, write_field
from .fixed_points import (DEFAULT_CONFIG, Classification, DetectionConfig, FixedPoint, FixedPointSet,
                           PlateauInterval, Subcase, classify, find_fixed_points)
from .perturbation import (CaseTag, Perturbation, annihilate, clear_accumulation, clear_plateau,
                           select_sigma, split, stabilize, stabilize_steps)
from .portrait import render_portrait
from .scenario import parse_scenario, read_scenario, run_scenario
from .stability import (Margin, Reason, StabilityReport, Verdict, same_portrait, stability_margin,
                        stability_verdict)

__all__ = [
    "AccumOsc", "BumpPsi", "CaseTag", "CircleField", "CircleStabError", "Classification", "Constant",
    "DEFAULT_CONFIG", "DetectionConfig", "EquivalenceClass", "FixedPoint", "FixedPointSet", "FourierCos",
    "FourierSin", "Margin", "NormEstimate", "OddTheta", "OddThetaHat", "Orientation", "PLHomeomorphism",
    "Perturbation", "PlateauInterval", "PlateauPhi", "Reason", "StabilityReport", "Subcase", "Verdict",
    "annihilate", "are_equivalent", "build_homeomorphism", "c1_norm", "certified_norm", "classify",
    "clear_accumulation", "clear_plateau", "equivalence_class", "eval_deriv", "eval_field",
    "find_fixed_points", "format_field", "parse_field", "parse_scenario", "psi_norm_bound", "psi_norm_exact", "read_field", "read_scenario",
    "render_portrait", "run_scenario",
    "same_portrait", "select_sigma", "split", "stability_margin", "stability_verdict", "stabilize",
    "stabilize_steps", "te_check", "write_field",
]
