#!/usr/bin/env python3
"""
Exception hierarchy for the mixedness toolkit.

Input problems (bad shapes, out-of-range parameters, invalid states) derive
from ValidationError; failures of the numerical engines derive from
NumericalError; configuration problems raise ConfigError. The CLI maps these
families onto its exit codes.
"""

from typing import Optional


class MixednessError(Exception):
    """Base class for every error raised by the package."""
    pass


class ValidationError(MixednessError):
    """An input state, operator or parameter failed validation."""
    pass


class DimensionMismatchError(ValidationError):
    """Operand dimensions do not agree."""
    pass


class ParameterRangeError(ValidationError):
    """A physical parameter is outside its allowed range."""
    pass


class UndefinedQuantityError(ValidationError):
    """The requested quantity is undefined for this input (e.g. S_L at d = 1)."""
    pass


class NonHermitianGeneratorError(ValidationError):
    """A generator that must be Hermitian is not."""
    pass


class DegenerateSpectrumError(ValidationError):
    """The operator spectrum has zero width."""
    pass


class NonPureStateError(ValidationError):
    """A pure state was required but a mixed one was given."""
    pass


class NumericalError(MixednessError):
    """A numerical engine failed."""
    pass


class ConvergenceError(NumericalError):
    """A backend failed its residual or convergence check."""
    pass


class NormCollapseError(NumericalError):
    """The unnormalized propagated state decayed below the numerical floor."""
    pass


class IntegratorError(NumericalError):
    """A time-stepping integrator failed or lost trace."""
    pass


class MetricPositivityError(NumericalError):
    """The metric operator lost positive definiteness."""
    pass


class ComplexResidueError(NumericalError):
    """A quantity that must be real carries a significant imaginary part."""
    pass


class ConfigError(MixednessError):
    """
    Invalid experiment configuration.

    Carries the offending field name and, for file input, the line number.
    """

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")
