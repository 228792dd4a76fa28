"""Numerical verification of framed metric f-structures.

Structure tensors and curvature on coordinate charts, immersed submanifold
geometry (second fundamental forms, slant angles), and warped-product
inequalities, all checked pointwise against exact jet arithmetic.
"""

from .ambient import (
    Chart,
    FramedStructure,
    MetricField,
    builtin_structure,
    kenmotsu_f_model,
)
from .errors import (
    ContractViolationError,
    DegeneracyError,
    EvalDomainError,
    ExprSyntaxError,
    FGeomError,
    ScenarioError,
)
from .exprlang import parse, to_source
from .numcore import BilinearForm, Jet
from .report import CheckResult, Report, TOOL_VERSION
from .scenario import load_scenario, run_scenario
from .subgeom import Distribution, Immersion
from .warpineq import WarpedProduct

__version__ = TOOL_VERSION

__all__ = [
    "BilinearForm",
    "Chart",
    "CheckResult",
    "ContractViolationError",
    "DegeneracyError",
    "Distribution",
    "EvalDomainError",
    "ExprSyntaxError",
    "FGeomError",
    "FramedStructure",
    "Immersion",
    "Jet",
    "MetricField",
    "Report",
    "ScenarioError",
    "TOOL_VERSION",
    "WarpedProduct",
    "builtin_structure",
    "kenmotsu_f_model",
    "load_scenario",
    "parse",
    "run_scenario",
    "to_source",
    "__version__",
]
