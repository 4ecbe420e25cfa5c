"""Explicit queueing bounds evaluated in log10 space."""

from kingbound.bounds.base import BoundError, MomentSummary, UnstableQueueError
from kingbound.bounds.classical import (
    cyclic_multiserver,
    halfin_whitt_excess,
    heavy_traffic_targets,
    kingman_single,
    kingman_weakened,
    sspd_comparison_params,
)
from kingbound.bounds.conditional import ConditionalParams, conditional_sup_tail
from kingbound.bounds.constants import universal_constants
from kingbound.bounds.lemmas import DiscreteReformulation, lemma_moment_bound, lemma_sup_bound
from kingbound.bounds.registry import FORMULAS, FormulaResult, evaluate_formula, get_formula, list_formulas
from kingbound.bounds.main import (
    HalfinWhittBounds,
    cubic_moment_bounds,
    default_theta,
    halfin_whitt_bounds,
    higher_moment_bound,
    main_sspd_bound,
    main_tail_bound,
    mean_bounds,
    refined_mean_bound,
    sspd_explicit,
    supremum_tail_explicit,
    supremum_tail_theta,
)

__all__ = [
    "BoundError",
    "ConditionalParams",
    "DiscreteReformulation",
    "FORMULAS",
    "FormulaResult",
    "HalfinWhittBounds",
    "MomentSummary",
    "UnstableQueueError",
    "conditional_sup_tail",
    "cubic_moment_bounds",
    "cyclic_multiserver",
    "default_theta",
    "evaluate_formula",
    "get_formula",
    "halfin_whitt_bounds",
    "halfin_whitt_excess",
    "heavy_traffic_targets",
    "higher_moment_bound",
    "kingman_single",
    "kingman_weakened",
    "lemma_moment_bound",
    "lemma_sup_bound",
    "list_formulas",
    "main_sspd_bound",
    "main_tail_bound",
    "mean_bounds",
    "refined_mean_bound",
    "sspd_comparison_params",
    "sspd_explicit",
    "supremum_tail_explicit",
    "supremum_tail_theta",
    "universal_constants",
]
