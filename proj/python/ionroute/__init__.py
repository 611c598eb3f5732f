"""Shuttling compiler for QCCD trapped-ion devices."""

from ._ionroute import (
    ArchitectureError,
    CapacityError,
    IonrouteError,
    ParseError,
    RoutingError,
    compile,
    generate,
    graph_info,
    normalize_qasm,
    preset,
    validate,
)

__all__ = [
    "ArchitectureError",
    "CapacityError",
    "IonrouteError",
    "ParseError",
    "RoutingError",
    "compile",
    "generate",
    "graph_info",
    "normalize_qasm",
    "preset",
    "validate",
]
