"""Exact computations for Rota-Baxter 3-Lie algebras.

Structure constants, operators and representations are stored over the
rationals; every validator and cohomology computation is exact.
"""

from ._backend import active_backend, use_backend
from .algebra import (
    RotaBaxterOperator,
    ThreeLieAlgebra,
    ValidationReport,
    Violation,
    catalog,
    descendent_algebra,
    validate_3lie,
    validate_rb,
)
from .cohomology import Cochain, CochainSpace, RBCochain, cohomology_dims
from .errors import (
    BudgetExceededError,
    InputError,
    ParseError,
    PreconditionError,
    RB3Error,
    SkewSymmetryError,
)
from .linalg import Matrix, QTensor
from .representation import RBRepresentation, Representation, adjoint_rep, dual_rep

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "Cochain",
    "CochainSpace",
    "InputError",
    "Matrix",
    "ParseError",
    "PreconditionError",
    "QTensor",
    "RB3Error",
    "RBCochain",
    "RBRepresentation",
    "Representation",
    "RotaBaxterOperator",
    "SkewSymmetryError",
    "ThreeLieAlgebra",
    "ValidationReport",
    "Violation",
    "active_backend",
    "adjoint_rep",
    "catalog",
    "cohomology_dims",
    "descendent_algebra",
    "dual_rep",
    "use_backend",
    "validate_3lie",
    "validate_rb",
]
