"""Coherence tools for conditional prevision assessments.

Exact-rational checking of finite conditional probability and prevision
assessments, compound conditionals (conjunction, negation, disjunction,
quasi conjunction, iterated conditioning) realized as conditional
random quantities, coherent-extension intervals for them, and seeded
Monte Carlo cross-checks.
"""

from .bounds import (
    ExtensionInterval,
    ExtensionVerificationError,
    disjunction_bounds,
    extension_interval,
    frechet_conjunction_bounds,
    quasi_conjunction_bounds,
)
from .coherence import (
    Assessment,
    CoherenceLevel,
    CoherenceReport,
    DutchBook,
    IncoherentAssessmentError,
    LinearSystem,
    build_system,
    check_coherence,
    random_gain,
    solve_feasibility,
    upper_conditioning_masses,
)
from .crq import (
    CompoundConditional,
    ConditionalRandomQuantity,
    ImpossibleConditioningError,
    add,
    conditional_event,
    conjunction,
    disjunction,
    gn_inclusion,
    iterated,
    negate_conjunction,
    quasi_conjunction,
    scale,
    values_agree_on_union,
)
from .events import (
    AtomLimitError,
    Constituent,
    ConstituentPartition,
    Event,
    EventSyntaxError,
    Universe,
    constituents,
    implies,
    is_impossible,
    logically_independent,
)
from .simulate import (
    JointDistribution,
    SimEstimate,
    conjunction_prevision,
    finite_n_fixed_point,
    simulate_conditional,
    simulate_conjunction,
)

__version__ = "0.1.0"

__all__ = [
    "Assessment",
    "AtomLimitError",
    "CoherenceLevel",
    "CoherenceReport",
    "CompoundConditional",
    "ConditionalRandomQuantity",
    "Constituent",
    "ConstituentPartition",
    "DutchBook",
    "Event",
    "EventSyntaxError",
    "ExtensionInterval",
    "ExtensionVerificationError",
    "ImpossibleConditioningError",
    "IncoherentAssessmentError",
    "JointDistribution",
    "LinearSystem",
    "SimEstimate",
    "Universe",
    "add",
    "build_system",
    "check_coherence",
    "conditional_event",
    "conjunction",
    "conjunction_prevision",
    "constituents",
    "disjunction",
    "disjunction_bounds",
    "extension_interval",
    "finite_n_fixed_point",
    "frechet_conjunction_bounds",
    "gn_inclusion",
    "implies",
    "is_impossible",
    "iterated",
    "logically_independent",
    "negate_conjunction",
    "quasi_conjunction",
    "quasi_conjunction_bounds",
    "random_gain",
    "scale",
    "simulate_conditional",
    "simulate_conjunction",
    "solve_feasibility",
    "upper_conditioning_masses",
    "values_agree_on_union",
]
