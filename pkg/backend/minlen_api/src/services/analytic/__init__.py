# src/services/analytic/__init__.py
"""Closed-form bound states for the delta, double-delta and Coulomb-like wells."""

from src.services.analytic.coulomb import (
    CoulombEnergyReport,
    CoulombSolution,
    apply_inverse_X,
    apply_x,
    coulomb_closed_form_energy_check,
    coulomb_full_integral,
    coulomb_phase,
    extension_delta,
    inverse_x_functional,
    solve_coulomb,
)
from src.services.analytic.delta import (
    DeltaSolution,
    delta_energy_closed,
    delta_energy_expansion,
    solve_delta,
)
from src.services.analytic.double_delta import (
    DoubleDeltaSolution,
    integer_separation,
    solve_double_delta,
    undeformed_double_delta_roots,
)
from src.services.analytic.g_function import g_function_closed, g_function_numeric, resolvent_moment

__all__ = [
    "CoulombEnergyReport",
    "CoulombSolution",
    "DeltaSolution",
    "DoubleDeltaSolution",
    "apply_inverse_X",
    "apply_x",
    "coulomb_closed_form_energy_check",
    "coulomb_full_integral",
    "coulomb_phase",
    "delta_energy_closed",
    "delta_energy_expansion",
    "extension_delta",
    "g_function_closed",
    "g_function_numeric",
    "integer_separation",
    "inverse_x_functional",
    "resolvent_moment",
    "solve_coulomb",
    "solve_delta",
    "solve_double_delta",
    "undeformed_double_delta_roots",
]
