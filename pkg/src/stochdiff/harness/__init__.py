"""
Experiment harness: configuration, references, error tables, invariant
checks and the command line interface
"""

from .config import ExperimentConfig, HierarchySection, ModelSection, RunSection, key_sections, load_config
from .metrics import fit_rate, relative_error
from .reference import parameter_nodes, quadrature_reference
from .study import ErrorReport, ErrorRow, build_reference, convergence_study
from .validate import (
    CheckResult,
    CheckStatus,
    SelfConvergence,
    check_continuous_dependence,
    flux_dependence_bound,
    run_invariant_suite,
    scheme_invariant_checks,
    self_convergence,
    time_lipschitz_constant,
)

__all__ = [
    "CheckResult",
    "CheckStatus",
    "ErrorReport",
    "ErrorRow",
    "ExperimentConfig",
    "HierarchySection",
    "ModelSection",
    "RunSection",
    "SelfConvergence",
    "build_reference",
    "check_continuous_dependence",
    "convergence_study",
    "fit_rate",
    "flux_dependence_bound",
    "key_sections",
    "load_config",
    "parameter_nodes",
    "quadrature_reference",
    "relative_error",
    "run_invariant_suite",
    "scheme_invariant_checks",
    "self_convergence",
    "time_lipschitz_constant",
]
