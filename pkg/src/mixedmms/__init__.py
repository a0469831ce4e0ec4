"""Maximin-share allocation of mixed divisible and indivisible goods, in exact rationals."""

from .alloc import (
    APPROXIMATE,
    EXACT,
    AllocationReport,
    FunctionPlugin,
    HalfMMSPlugin,
    alpha_ratio,
    boost,
    mixed_mms,
    mixed_mms_homogeneous,
)
from .config import SizeGuards
from .core import (
    Allocation,
    Bundle,
    CakeDensity,
    CakePiece,
    DensitySegment,
    Instance,
    agent_values,
    bundle_value,
    count_queries,
    cut,
    evaluate,
    parse_rational,
    validate_allocation,
    validate_instance,
)
from .counterexample import build_useless_cake_instance, check_base_matrix
from .errors import (
    ContractViolation,
    DomainError,
    InsufficientValueError,
    MixedMMSError,
    PluginError,
    TooLargeError,
    UnsupportedError,
    ValidationError,
)
from .gamma import gamma
from .generate import generate_random, random_corpus
from .mms import MMSCertificate, approx_mms, discretize_instance, exact_mms, indivisible_maxmin, waterfill
from .reduction import FrozenRecord, reduce_to_indivisible
from .verify import (
    FairnessReport,
    efm_mms_bound,
    round_robin,
    verify_alpha_mms,
    verify_all,
    verify_ef,
    verify_ef1,
    verify_efm,
    verify_prop,
    verify_wpr,
)
from .wpr import WeightProfile, equal_split, wpr_alloc

__version__ = "0.1.0"
