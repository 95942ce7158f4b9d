"""Exact correlation polytopes, inequality catalog and certificates for the
two-party, two-setting, two-outcome Bell scenario."""

from .core import (
    Behavior,
    ExpectationSummary,
    behavior_from_json,
    behavior_to_json,
    deterministic_behavior,
    is_no_signaling,
    project_expectations,
    signaling_gap,
    uniform_behavior,
    validate_behavior,
)
from .lp import LPProblem, LPResult, hull_membership, simplex_solve
from .polytopes import (
    general_vertices,
    local_membership,
    local_vertices,
    ns_membership,
    ns_vertices,
    pr_box,
)
from .catalog import LinearInequality, evaluate, family, max_over
from .theorems import TheoremCertificate, verify_all

__version__ = "0.1.0"
