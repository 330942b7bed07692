"""Exact homology of unit-oriented buildings and partial-basis complexes over Euclidean number rings."""

__version__ = "0.1.0"

from .cache import Cache, cache_key, stable_json
from .complexes import (
    DEFAULT_SIMPLEX_CAP,
    SimplicialComplex,
    apartment_chain,
    build_B,
    build_BA,
    build_BD,
    build_BDA,
    build_oriented_tits,
    build_tits,
    complex_from_text,
    complex_to_text,
    projected_total,
)
from .conditions import (
    CONDITIONS_1_TO_5,
    FULL_UNIT_IMAGE,
    NEITHER,
    UNDETERMINED,
    ConditionReport,
    check_conditions,
    classify_pair,
)
from .errors import ResourceCapError
from .homology import (
    HomologyReport,
    boundary_squared_is_zero,
    four_loop_check,
    reduced_homology,
)
from .presentations import (
    GroupPresentation,
    abelianization_invariants,
    fundamental_group,
    is_trivial_group,
    tietze_simplify,
)
from .ranks import (
    RankTable,
    brute_force_rank,
    cross_validate,
    nu_degree,
    rank_lower_bound,
    recursive_rank,
)
from .residue import (
    STANDARD_PRIMES,
    PrimeContext,
    build_residue_field,
    field_rank,
    field_rref,
    is_full_unit_image,
    lift_sl_matrix,
    standard_contexts,
)
from .rings import (
    ALL_RINGS,
    EISENSTEIN,
    GAUSSIAN,
    INTEGERS,
    SQRT_MINUS_TWO,
    RingElement,
    RingId,
    associates,
    euclidean_divmod,
    format_element,
    is_prime,
    minimal_norm_primes,
    norm,
    one,
    parse_element,
    ring_by_name,
    theta,
    units,
    zero,
)

from .suites import SuiteConfig, SuiteReport, run_suite

__all__ = [
    "__version__",
    "Cache",
    "cache_key",
    "stable_json",
    "DEFAULT_SIMPLEX_CAP",
    "SimplicialComplex",
    "apartment_chain",
    "build_B",
    "build_BA",
    "build_BD",
    "build_BDA",
    "build_oriented_tits",
    "build_tits",
    "complex_from_text",
    "complex_to_text",
    "projected_total",
    "CONDITIONS_1_TO_5",
    "FULL_UNIT_IMAGE",
    "NEITHER",
    "UNDETERMINED",
    "ConditionReport",
    "check_conditions",
    "classify_pair",
    "ResourceCapError",
    "HomologyReport",
    "boundary_squared_is_zero",
    "four_loop_check",
    "reduced_homology",
    "GroupPresentation",
    "abelianization_invariants",
    "fundamental_group",
    "is_trivial_group",
    "tietze_simplify",
    "RankTable",
    "brute_force_rank",
    "cross_validate",
    "nu_degree",
    "rank_lower_bound",
    "recursive_rank",
    "STANDARD_PRIMES",
    "PrimeContext",
    "build_residue_field",
    "field_rank",
    "field_rref",
    "is_full_unit_image",
    "lift_sl_matrix",
    "standard_contexts",
    "SuiteConfig",
    "SuiteReport",
    "run_suite",
    "ALL_RINGS",
    "EISENSTEIN",
    "GAUSSIAN",
    "INTEGERS",
    "SQRT_MINUS_TWO",
    "RingElement",
    "RingId",
    "associates",
    "euclidean_divmod",
    "format_element",
    "is_prime",
    "minimal_norm_primes",
    "norm",
    "one",
    "parse_element",
    "ring_by_name",
    "theta",
    "units",
    "zero",
]
