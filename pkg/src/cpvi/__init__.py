"""Exact verification toolkit for a coupled Painleve VI Hamiltonian system.

The package machine-checks, in exact rational arithmetic, the defining
identities of a four-dimensional coupled Painleve VI system: its Backlund
symmetry under the affine Weyl group of type E6^(2), the Coxeter
relations of the generators, holomorphy of the Hamiltonian in five
birational charts, the reduction of both principal parts to the sixth
Painleve equation, and the invariant divisors.  A numeric lab integrates
trajectories for corroboration and runs an exact polynomial
first-integral search.
"""

from .errors import (
    AnsatzTooLarge,
    BadParameterRelation,
    BlowUp,
    CpviError,
    DenominatorVanishes,
    ExpressionTooLarge,
    NonPolynomial,
    ParseError,
    PoleAtPoint,
    StepLimitExceeded,
    ZeroPolynomial,
)
from .hamiltonians import (
    Hamiltonian,
    VectorField,
    check_parameter_relation,
    coupled_hamiltonian,
    coupled_polynomial,
    poisson_bracket,
    principal_xy,
    principal_zw,
    pvi_hamiltonian,
    vector_field,
)
from .poly import (
    Gen,
    RatFun,
    SparsePoly,
    equals_zero,
    format_poly,
    format_ratfun,
    parse_poly,
    parse_ratfun,
    reduce_mod_relation,
    substitute,
    term_limit,
    total_degree,
)

__all__ = [
    "AnsatzTooLarge",
    "BadParameterRelation",
    "BlowUp",
    "CpviError",
    "DenominatorVanishes",
    "ExpressionTooLarge",
    "Gen",
    "Hamiltonian",
    "NonPolynomial",
    "ParseError",
    "PoleAtPoint",
    "RatFun",
    "SparsePoly",
    "StepLimitExceeded",
    "VectorField",
    "ZeroPolynomial",
    "check_parameter_relation",
    "coupled_hamiltonian",
    "coupled_polynomial",
    "equals_zero",
    "format_poly",
    "format_ratfun",
    "parse_poly",
    "parse_ratfun",
    "poisson_bracket",
    "principal_xy",
    "principal_zw",
    "pvi_hamiltonian",
    "reduce_mod_relation",
    "substitute",
    "term_limit",
    "total_degree",
    "vector_field",
]

__version__ = "0.1.0"
