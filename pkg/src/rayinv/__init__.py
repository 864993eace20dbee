"""Ray class invariants from singular values of y-coordinates of elliptic curves."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigurationError,
    ConsistencyError,
    DomainError,
    ExponentNotExactError,
    HypothesisError,
    IntegralityError,
    RayInvError,
    UnsupportedFieldError,
    UnsupportedLevelError,
    ValidationError,
)
from .forms import CMField, ReducedForm, make_field, reduced_forms, theta_Q, unit_form  # noqa: F401
from .invariants import (  # noqa: F401
    conjugate_orbit,
    exceptional_invariant,
    field_degree,
    min_poly_invariant,
    normal_basis_exponent,
    singular_y,
    verify_inequality1,
    verify_inequality2,
)
from .numerics import IntPolynomial, Phase, PrecisionContext, with_precision  # noqa: F401
from .qseries import IndexPair  # noqa: F401
