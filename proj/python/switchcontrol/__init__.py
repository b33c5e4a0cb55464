"""Switching-cost proximal maps and a semismooth Newton solver (C++ core)."""

from ._switchcontrol import (
    ConfigError,
    ControlProblem,
    EllipticProblem,
    ParabolicProblem,
    SwitchingParams,
    arc_label,
    classify_exact,
    classify_gamma,
    g_biconj,
    g_conj,
    g_value,
    gap_pointwise,
    my_grad,
    newton_deriv,
    prox_conj,
    solve,
    verify,
)

__all__ = [
    "ConfigError",
    "ControlProblem",
    "EllipticProblem",
    "ParabolicProblem",
    "SwitchingParams",
    "arc_label",
    "classify_exact",
    "classify_gamma",
    "g_biconj",
    "g_conj",
    "g_value",
    "gap_pointwise",
    "my_grad",
    "newton_deriv",
    "prox_conj",
    "solve",
    "verify",
]
