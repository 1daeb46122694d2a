"""Exact arithmetic derivatives over Q, valuation dynamics, anti-derivative
enumeration, quadratic-field derivatives, and p-adic continuity experiments.
"""

from .antideriv import (
    ALL_UNITS_AND_ZERO,
    AntiderivativeSolution,
    CSet,
    antiderivative_valuations,
    antiderivatives,
    brute_force_antiderivatives,
    c_set,
    construct_c_sequence,
    construct_k0,
    construct_with_n_antiderivatives,
    primitive_antiderivative,
)
from .derivative import (
    PrimePowerForm,
    backward_chain,
    backward_chain_element,
    d_full,
    d_partial,
    d_sub,
    ld_partial,
    ppf_derivative,
    prime_set,
)
from .dynamics import (
    Classification,
    EventuallyPeriodicSeq,
    KappaProfile,
    Segment,
    classify,
    inc_sequence,
    inc_step,
    kappa_profile,
    nu_sequence,
    oracle_classify,
    predicted_inc_sequence,
    segment,
)
from .errors import (
    CapacityError,
    ClassificationError,
    DomainError,
    GeneratorError,
    ResidueError,
    SearchError,
)
from .exact import (
    ExtendedValuation,
    Factorization,
    ValuationDecomposition,
    crt,
    factorize,
    is_probable_prime,
    kronecker,
    nu,
    nu_int,
    sqrt_mod_lift,
)
from .lab import (
    DerivativeMap,
    ProbeReport,
    ProbeRow,
    continuity_probe,
    discontinuity_witness,
    full_map,
    identity_map,
    partial_map,
    phi,
    phi2,
    special_witness,
    strict_diff_probe,
    sub_map,
)
from .quadfield import (
    GroupDescription,
    PrimeIdealRef,
    QuadraticElement,
    QuadraticField,
    SplittingData,
    d_K,
    d_K_sub,
    d_abstract_rational,
    groups_isomorphic,
    height_vector,
    ideal_valuation,
    ld_K,
    ld_image_generators,
    prime_ideals_over,
    splitting,
)
from .report import (
    parse_report_json,
    render_figure,
    report_to_csv,
    report_to_json,
    write_report_files,
)

__version__ = "0.1.0"
