"""Timed I/O automata with error and magic states: operators, refinement and a digitized oracle."""
from .dbm import KERNEL
from .tioa import BOT, TOP, TIOA, Edge, Location, ModelError, Part, validate_tioa
from .textio import SpecSyntaxError, format_tioa, load, parse_spec
from .operators import (
    compose,
    compose_conjunction,
    compose_disjunction,
    compose_parallel,
    compose_quotient,
    mirror,
    quotient_via_mirror,
)
from .analysis import Verdict, equivalent, reach_bot, refines

__version__ = "0.1.0"

__all__ = [
    "KERNEL", "BOT", "TOP", "TIOA", "Edge", "Location", "Part", "ModelError", "validate_tioa",
    "SpecSyntaxError", "parse_spec", "format_tioa", "load",
    "compose", "compose_parallel", "compose_conjunction", "compose_disjunction", "compose_quotient",
    "mirror", "quotient_via_mirror", "Verdict", "reach_bot", "refines", "equivalent",
]
