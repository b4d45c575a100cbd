#!/usr/bin/env python3
"""
Figure templates for the reproduction runners.

Each entry holds the caption parameters of one figure, the CSV columns the
runner writes, and the default values of every ExperimentConfig field the
figure uses. Angles are in radians, times in units of 1/γ (two-level
figures) or 1/J (spin-chain figures).
"""

import copy
import math
from typing import Any, Dict, List


# ============================================================================
# TWO-LEVEL SYSTEM FIGURES
# ============================================================================

TWO_LEVEL_TEMPLATES = {
    "fig1": {
        "name": "Two-level timescale maps",
        "description": "1/(γT₁) and 1/(γ²T₂²) over the (r, θ) plane at φ = π/4; "
                       "the first-order map does not depend on Ω/γ",
        "columns": ["omega_over_gamma", "r", "theta", "t1_inv_dimless", "t2_inv_sq_dimless"],
        "defaults": {
            "detuning_over_gamma": 0.5,
            "omega_values": [0.1, 1.0, 10.0],
            "phi": math.pi / 4,
            "mesh": 41,
        },
    },
    "fig2": {
        "name": "Two-level linear entropy",
        "description": "Constant, Lindblad, exact non-Hermitian and short-time curves "
                       "for two Bloch configurations and three drive strengths",
        "columns": ["omega_over_gamma", "theta", "gamma_t", "sl_const", "sl_lindblad",
                    "sl_nonhermitian_exact", "sl_short_time"],
        "defaults": {
            "detuning_over_gamma": 0.5,
            "omega_values": [0.1, 1.0, 10.0],
            "r": 0.25,
            "theta_values": [math.pi / 4, 3 * math.pi / 4],
            "phi": math.pi / 4,
            "t_max": 0.5,
            "steps": 400,
        },
    },
    "fig6": {
        "name": "First-order derivatives against 1/(γT₁)",
        "description": "Purity slopes at t = 0 for unitary, Lindblad and normalized "
                       "non-Hermitian evolution, swept over the Bloch radius",
        "columns": ["omega_over_gamma", "theta", "r", "deriv_unitary", "deriv_lindblad",
                    "deriv_nonhermitian", "timescale_formula"],
        "defaults": {
            "detuning_over_gamma": 0.5,
            "omega_values": [0.1],
            "theta_values": [3 * math.pi / 4],
            "phi": math.pi / 4,
            "mesh": 101,
            "fd_step": 1e-4,
        },
    },
    "fig7": {
        "name": "Second-order derivatives against 1/(γ²T₂²)",
        "description": "Half purity curvatures at t = 0 for unitary, Lindblad and "
                       "normalized non-Hermitian evolution, swept over the Bloch radius",
        "columns": ["omega_over_gamma", "theta", "r", "deriv_unitary", "deriv_lindblad",
                    "deriv_nonhermitian", "timescale_formula"],
        "defaults": {
            "detuning_over_gamma": 0.5,
            "omega_values": [0.1, 1.0, 10.0],
            "theta_values": [3 * math.pi / 4],
            "phi": math.pi / 4,
            "mesh": 101,
            "fd_step": 1e-3,
        },
    },
}


# ============================================================================
# SPIN-CHAIN FIGURES
# ============================================================================

_CHAIN_DEFAULTS = {
    "spins": 8,
    "coupling": 1.0,
    "ising_ratio": 0.5,
    "anisotropy": 0.75,
    "transverse_field": 0.0,
    "t_max": 0.25,
    "steps": 400,
}

SPIN_CHAIN_TEMPLATES = {
    "fig3": {
        "name": "Marginal linear entropy, exact against short-time",
        "description": "GHZ mixed state under the XY chain plus imaginary Ising term, "
                       "first k sites for k = 2..7",
        "columns": ["J_t", "k", "p", "sl_exact", "sl_short_time"],
        "defaults": dict(_CHAIN_DEFAULTS, subsystem_sizes=[2, 3, 4, 5, 6, 7], mixing_values=[0.5]),
    },
    "fig4": {
        "name": "Short-time marginal entropy, non-Hermitian against Hermitian",
        "description": "Predictor at Jz/J = 0.5 next to the Jz = 0 predictor for k = 2..7",
        "columns": ["J_t", "k", "p", "sl_short_time", "sl_short_time_hermitian"],
        "defaults": dict(_CHAIN_DEFAULTS, subsystem_sizes=[2, 3, 4, 5, 6, 7], mixing_values=[0.5]),
    },
    "fig5": {
        "name": "Short-time marginal entropy across mixing parameters",
        "description": "Predictors at Jz/J = 0.5 and Jz = 0 for k = 5 and four values of p",
        "columns": ["J_t", "k", "p", "sl_short_time", "sl_short_time_hermitian"],
        "defaults": dict(_CHAIN_DEFAULTS, subsystem_sizes=[5], mixing_values=[0.25, 0.5, 0.75, 1.0]),
    },
}


# ============================================================================
# CUSTOM RUNS
# ============================================================================

CUSTOM_TEMPLATES = {
    "custom": {
        "name": "Custom pipeline run",
        "description": "Any state, generator and grid through the entropy pipeline; "
                       "model is two_level, spin_chain or matrix",
        "columns": [],
        "defaults": {
            "model": "two_level",
            "detuning_over_gamma": 0.5,
            "omega_values": [1.0],
            "r": 0.25,
            "theta_values": [math.pi / 4],
            "phi": math.pi / 4,
            "t_max": 0.5,
            "steps": 400,
        },
    },
}

FIGURE_TEMPLATES = {**TWO_LEVEL_TEMPLATES, **SPIN_CHAIN_TEMPLATES, **CUSTOM_TEMPLATES}

# Columns added by --with-exact on the spin-chain predictor figures.
EXACT_COLUMNS = ["sl_exact", "sl_exact_hermitian"]


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

def get_figure_template(experiment: str) -> Dict[str, Any]:
    """
    Get the template of one experiment.

    Args:
        experiment: Experiment id ('fig1' .. 'fig7' or 'custom')

    Returns:
        A deep copy of the template, or an empty dict for an unknown id

    Example:
        >>> get_figure_template('fig3')['defaults']['spins']
        8
    """
    return copy.deepcopy(FIGURE_TEMPLATES.get(experiment.lower(), {}))


def get_figure_defaults(experiment: str) -> Dict[str, Any]:
    return get_figure_template(experiment).get("defaults", {})


def get_all_figures() -> List[str]:
    """
    Get the list of experiment ids, figures first.

    Example:
        >>> get_all_figures()[:2]
        ['fig1', 'fig2']
    """
    return sorted(FIGURE_TEMPLATES, key=lambda name: (name == "custom", name))


if __name__ == "__main__":
    print("=" * 80)
    print("FIGURE TEMPLATES")
    print("=" * 80)
    for experiment in get_all_figures():
        template = get_figure_template(experiment)
        print(f"\n  • {experiment}: {template['name']}")
        print(f"    {template['description']}")
        for key, value in template["defaults"].items():
            print(f"      {key} = {value}")
