#!/usr/bin/env python3
"""
Figure templates: caption parameters and CSV layouts of every experiment.
"""

from mixedness.templates.figure_templates import (
    CUSTOM_TEMPLATES,
    EXACT_COLUMNS,
    FIGURE_TEMPLATES,
    SPIN_CHAIN_TEMPLATES,
    TWO_LEVEL_TEMPLATES,
    get_all_figures,
    get_figure_defaults,
    get_figure_template,
)

__all__ = [
    'FIGURE_TEMPLATES',
    'TWO_LEVEL_TEMPLATES',
    'SPIN_CHAIN_TEMPLATES',
    'CUSTOM_TEMPLATES',
    'EXACT_COLUMNS',
    'get_figure_template',
    'get_figure_defaults',
    'get_all_figures',
]
