"""Causal spaces over finite product outcome spaces, with exact arithmetic.

Causal kernels and interventions, the no/active/dormant causal-effect
trichotomy with conditional and post-intervention variants, quantifying
effect scores, marginal causal spaces, seeded generators with an independent
brute-force oracle, and a JSON document format with a CLI (``cee``).
"""

from .effects import (
    ACTIVE,
    DORMANT,
    NO_EFFECT,
    EffectQuery,
    EffectTag,
    EffectVerdict,
    active_effect,
    active_effect_event,
    active_effect_on_algebra,
    check_lemma1,
    check_prop2,
    check_prop3,
    classify,
    conditional_active_effect_algebra,
    conditional_active_effect_event,
    conditional_classify_algebra,
    conditional_classify_event,
    has_causal_effect,
    post_intervention_active_effect,
    post_intervention_classify,
    run_query,
)
from .errors import (
    BlockCountExceededError,
    CausalSpacesError,
    DocumentError,
    EmptySubjectError,
    InvalidMeasureError,
    KernelMissingError,
    MissingNumericVariableError,
    NonBinaryTreatmentError,
    PremiseNotMetError,
)
from .generators import GenConfig, gen_dormant_space, gen_null_effect_space, gen_random_space, gen_screened_space
from .kernels import (
    CausalKernel,
    CausalSpace,
    InterventionSpec,
    Violation,
    intervene,
    intervention_kernel,
    intervention_measure,
    is_marginalization_of,
    marginalize,
    subsets_in_order,
    validate,
)
from .measure import (
    Measure,
    RandomVariable,
    cond_independent,
    condition_on_algebra,
    condition_on_event,
    delta,
    independent,
    marginal,
    mean_and_variance,
    mutually_abs_continuous_on,
    uniform,
)
from .oracle import oracle_effect_brute
from .scores import (
    F1,
    F2,
    MEAN_AND_VARIANCE_DIFF,
    MEAN_DIFF,
    TOTAL_VARIATION,
    VARIANCE_DIFF,
    DifferenceFunctional,
    EffectScore,
    ScaleFunction,
    ate,
    builtin_difference_functionals,
    max_effect_score_algebra,
    max_effect_score_event,
    mean_effect_score_algebra,
    mean_effect_score_event,
    scale_f1,
    scale_f2,
)
from .space import (
    Coordinate,
    Event,
    Outcome,
    Partition,
    ProductSpace,
    coordinate_subalgebra,
    generated_algebra,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
