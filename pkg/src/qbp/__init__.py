"""Normalized Jackson q-Bessel functions, their partial sums, and numerical
auditing of the lower-bound inequalities tying the two together.

The package is organized in layers:

- qcore: q-Pochhammer symbols and the coefficient streams K_n, T_n.
- series: evaluators for h, h', the reduced forms, partial sums, and the
  raw q-Bessel functions, each with a sound absolute truncation bound.
- bounds: hypothesis predicates and the literal/pattern lower bounds.
- verifier: unit-disk sampling, ratio minima, verdicts, witnesses, and
  (q, nu)-plane atlases.
- oracle: slow extended-precision reference path used for validation.
- cli: `qbp` command producing JSON records and CSV tables.
"""

from .bounds import (
    HypothesisResult,
    Inequality,
    InequalityId,
    TheoremBound,
    Variant,
    bound_value,
    coefficient_inequality_lhs,
    full_coefficient_check,
    hypothesis_check,
    lemma_bound,
    literal_bound,
    pattern_bound,
    proof_scale,
    theorem_bound,
)
from .config import RunConfig, load_config
from .errors import (
    DenominatorNearZero,
    HypothesisViolated,
    QbpError,
    TruncationFailure,
    ValidationError,
    WitnessSingular,
)
from .oracle import (
    GeometricIdentityCheck,
    OracleEval,
    PrecisionSpec,
    geometric_identity_check,
    oracle_coefficient_sum,
    oracle_eval,
    oracle_remainder,
)
from .qcore import (
    Coefficient,
    QParams,
    coefficient_k,
    coefficient_t,
    normalization_c,
    q_pochhammer,
    q_pochhammer_inf,
)
from .selftest import SelftestReport, run_selftest
from .series import (
    EvalResult,
    Family,
    Form,
    FunctionId,
    PartialSpec,
    TruncationPolicy,
    Weight,
    coefficient_tail_sum,
    eval_h,
    eval_h_deriv,
    eval_j,
    eval_partial,
    eval_partial_deriv,
    eval_reduced,
    eval_reduced_deriv,
    evaluate,
)
from .verifier import (
    AtlasReport,
    BoundCheck,
    Direction,
    DiskGrid,
    Lemma,
    LemmaCheck,
    MinRatioResult,
    MobiusWitness,
    RatioKind,
    Verdict,
    atlas,
    check_inequality,
    check_inequality_sweep,
    check_lemma,
    min_real_ratio,
    mobius_witness_eval,
    sample_disk,
)

__version__ = "0.1.0"
