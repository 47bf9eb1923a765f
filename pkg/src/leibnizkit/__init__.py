"""Exact computations with derivations, local and 2-local derivations, and
automorphisms of finite-dimensional right Leibniz algebras over Q."""

__version__ = "0.1.0"

from .algebra import (  # noqa: E402
    Algebra,
    LinearMap,
    annihilator,
    bracket,
    check_leibniz,
    classify_nilpotent,
    is_derivation,
    series,
    squares_ideal,
)
from .linalg import RatMatrix, Subspace  # noqa: E402

__all__ = [
    "__version__",
    "Algebra",
    "LinearMap",
    "RatMatrix",
    "Subspace",
    "annihilator",
    "bracket",
    "check_leibniz",
    "classify_nilpotent",
    "is_derivation",
    "series",
    "squares_ideal",
]
