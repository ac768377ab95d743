"""Independent undirected-typing oracle: validator, elaborator, generator."""

from .derivation import Derivation, ValidationResult, validate
from .elaborate import ElaborationError, context_derivation, elaborate
from .generate import GenConfig, GeneratedJudgment, generate

__all__ = [
    "Derivation",
    "ValidationResult",
    "validate",
    "ElaborationError",
    "context_derivation",
    "elaborate",
    "GenConfig",
    "GeneratedJudgment",
    "generate",
]
