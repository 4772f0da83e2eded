"""String diagrams for ternary Frobenius structures."""

from .laws import LAWS, law_flags_batch, sliding_equations
from .normalize import (
    NormalFormDescriptor,
    bend,
    corollary_check,
    normal_form_term,
    normalize,
    spider,
)
from .semantics import LoopProfile, OpenGraph, evaluate, evaluate_batch, loop_profile, to_graph
from .terms import (
    Compose,
    DiagramSyntaxError,
    DiagramTypeError,
    Gen,
    Tensor,
    node_count,
    parse,
    to_text,
    typecheck,
)

eval = evaluate  # noqa: A001

__all__ = [
    "Compose",
    "DiagramSyntaxError",
    "DiagramTypeError",
    "Gen",
    "LAWS",
    "LoopProfile",
    "NormalFormDescriptor",
    "OpenGraph",
    "Tensor",
    "bend",
    "corollary_check",
    "evaluate",
    "evaluate_batch",
    "law_flags_batch",
    "loop_profile",
    "node_count",
    "normal_form_term",
    "normalize",
    "parse",
    "sliding_equations",
    "spider",
    "to_graph",
    "to_text",
    "typecheck",
]
