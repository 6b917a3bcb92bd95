"""Lipschitz cutting-plane solver for nonconvex constrained problems."""

from ._nic import (
    EvalError,
    InfeasibleStartError,
    ParseError,
    ResourceError,
    box_packing_bound,
    builtin_json,
    builtins,
    complexity_lower,
    complexity_upper,
    cut_encoding_accepts,
    cut_encoding_size,
    default_big_M,
    evaluate,
    induced_norm,
    lattice_count,
    solve,
)

__all__ = [
    "EvalError",
    "InfeasibleStartError",
    "ParseError",
    "ResourceError",
    "box_packing_bound",
    "builtin_json",
    "builtins",
    "complexity_lower",
    "complexity_upper",
    "cut_encoding_accepts",
    "cut_encoding_size",
    "default_big_M",
    "evaluate",
    "induced_norm",
    "lattice_count",
    "solve",
]
