"""Verification and exact search for (p,q)-tilted Sperner families with patterns."""
from .core import (
    Family,
    GroundSpec,
    TiltParams,
    is_conflicting_pair,
    is_forbidden_ordered,
    normalize_params,
    verify_family,
)

__all__ = [
    "Family",
    "GroundSpec",
    "TiltParams",
    "is_conflicting_pair",
    "is_forbidden_ordered",
    "normalize_params",
    "verify_family",
]
__version__ = "0.1.0"
