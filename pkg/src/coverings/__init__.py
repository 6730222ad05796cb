"""Covering systems of the integers: exact coverage decisions and
certified non-existence checks for coverings over restricted moduli."""

from .base import (
    BaseDescriptor,
    Factorization,
    NotFactorized,
    factorize_over_base,
    lambda_k,
    omega_prime,
    tail_sum_S,
    tail_sum_S_exact,
    tail_sum_T,
    tail_sum_T_exact,
)
from .certificate import (
    BASE_CASE_INVALID,
    CERTIFIED,
    BaseCaseInvalid,
    CertificateParams,
    CertificateReport,
    StepReport,
    base_case_beta,
    beta_step,
    c1_check,
    c1_threshold,
    certify,
    delta_sum_bound,
    growth_factor,
    hough_quick_check,
    product_bound,
)
from .certified import LOWER, UPPER, CertifiedValue, Direction
from .primes import (
    PrimeInterval,
    certified_prime_product,
    certified_prime_sum,
    exp_floor,
    primes_in,
)
from .residues import (
    DuplicateModulusError,
    ResidueClass,
    ResidueParseError,
    ResidueSystem,
    ResourceLimitError,
    UncoveredSet,
    is_covering,
    lcm_of_system,
    load_system,
    uncovered_classes,
    uncovered_density,
)

__version__ = "0.1.0"
