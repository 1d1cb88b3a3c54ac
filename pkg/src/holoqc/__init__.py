"""Holonomic gate toolkit for the three-state model."""
from ._backend import BACKEND
from .gatelib import GateSpec, analytic_loop, gate_matrix, parse_gate
from .holonomy import HolonomyConfig, concat, holonomy
from .loops import PolygonalLoop, load_loop, make_loop, save_loop
from .model import System
from .optimizer import SynthesisConfig, synthesize

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "GateSpec",
    "HolonomyConfig",
    "PolygonalLoop",
    "SynthesisConfig",
    "System",
    "analytic_loop",
    "concat",
    "gate_matrix",
    "holonomy",
    "load_loop",
    "make_loop",
    "parse_gate",
    "save_loop",
    "synthesize",
]
