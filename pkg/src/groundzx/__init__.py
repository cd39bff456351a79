"""Ground-extended graphical calculi for quantum circuits.

Diagrams over the ZX, ZW and ZH generators plus a ground (discard) node,
with exact and floating point semantics, CP-map semantics, rule libraries
with a soundness checker, a rewrite engine and a proof checker.
"""
from .diagram import Diagram, Node, Port, compose, dagger, tensor, validate
from .kernels import BACKEND as KERNEL_BACKEND
from .scalars import ExactScalar

__version__ = "0.1.0"

__all__ = [
    "Diagram",
    "ExactScalar",
    "KERNEL_BACKEND",
    "Node",
    "Port",
    "compose",
    "dagger",
    "tensor",
    "validate",
    "__version__",
]
