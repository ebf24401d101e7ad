"""Hypergeometric-type equations, their associated special functions and
ladder operators, and the Schrodinger problems they map to."""
from .coherent import CoherentState, coherent_state, eigen_residual, epsilon_sequence, radius_estimate
from .errors import ConsistencyError, DomainError, HyperladderError, NumericError
from .families import (
    FamilyName,
    FamilySpec,
    classical_polynomial,
    eigenvalue,
    family_from_config,
    make_family,
    ode_residual,
    recurrence_coefficients,
    rodrigues_constant,
    standard_families,
)
from .hilbert import (
    BasisVector,
    annihilate,
    basis_state,
    classify_algebra,
    commutator_checks,
    create,
    gauss_rule,
    inner_product,
    norm,
    normalized,
)
from .ladder import ASF, asf, lower, raise_, sweep
from .polynomial import Polynomial, as_rational
from .schrodinger import (
    ChangeOfVariable,
    PotentialProfile,
    Wavefunction,
    change_of_variable,
    numerov_eigenvalues,
    potential,
    superpotential,
    wavefunction,
)

__version__ = "0.1.0"
