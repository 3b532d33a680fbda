"""Synthesis and checking of component-and-connector models from view specifications."""

from ._core import (
    Component,
    Connector,
    Direction,
    Error,
    Model,
    ParseError,
    Port,
    ResolutionError,
    SatisfactionResult,
    ScopeError,
    SolverError,
    Spec,
    SpecEvaluation,
    SynthResult,
    View,
    ViewViolation,
    audit_counters,
    emit_dimacs,
    enumerate,
    evaluate,
    extract_assignment,
    load_model,
    load_spec,
    load_view,
    parse_model,
    parse_view,
    reduce_3sat,
    satisfies,
    solve_dimacs,
    synthesize,
    validate_model,
)

__version__ = "1.0.0"
