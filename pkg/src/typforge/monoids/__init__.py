"""Commutative monoid presentations with certified decision procedures."""
from .certificates import *  # noqa: F401,F403
from .certificates import (CyclicHom, Distinct, Equal, ExhaustedClass, Leq, NotLeq,
                           RationalWeights, RewritePath, Unknown, check_claim, iter_claims,
                           verdict_json)
from .cone import positive_weights, rational_invariant_cone
from .decide import (DEFAULT_BOUNDS, DEFAULT_BUDGET, CyclicBounds, SearchBudget,
                     cyclic_invariant_search, decide_equal, decide_leq)
from .presentation import (Presentation, cyclic_monoid, free_monoid, graph_monoid,
                           parse_expression, rewrite_neighbors, separated_monoid)
from .properties import (Free, LeavittType, cancellation_report, cyclic_type,
                         graph_stably_finite, is_stably_finite, refinement_for,
                         tarski_measure)
