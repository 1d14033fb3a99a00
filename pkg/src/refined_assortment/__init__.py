"""Refined assortment optimization.

Choice models (LC-MNL, random consideration sets), exact and heuristic
solvers for the traditional and refined assortment problems, upper bounds,
instance generators and an experiment harness.
"""

from .bounds import BoundReport, bound_report, eta, lp_upper, omega, praop_upper
from .choice_core import (
    Binary,
    DomainSpec,
    FiniteSet,
    FullInterval,
    Instance,
    RefinementDomain,
    SolveResult,
    expected_revenue,
    project_to_domain,
    refine_utilities,
)
from .estimators import RO1, RO2, RO3, GridOracle, RevenueOrdered, SACPSolver, TAOPEnumerator, make_solver
from .exceptions import InvalidInstance, InvalidRatio, InvalidRefinement, RAOPError, SizeLimit, UnknownSolver
from .instance_gen import (
    GeneratorConfig,
    MaxUtilityModel,
    TightConstructionParams,
    example1_instance,
    example2_instance,
    example_instances,
    gen_lcmnl,
)
from .lcmnl import LCMNLModel, MNLSegment
from .rcs import RCSModel
from .raop import grid_oracle_raop, line_maximize, ro1, ro2, ro3, solve_sacp
from .taop import enumerate_taop, revenue_ordered

__version__ = "0.1.0"

__all__ = [
    "Binary", "BoundReport", "DomainSpec", "FiniteSet", "FullInterval", "GeneratorConfig", "GridOracle",
    "Instance", "InvalidInstance", "InvalidRatio", "InvalidRefinement", "LCMNLModel", "MNLSegment",
    "RAOPError", "RCSModel", "RO1", "RO2", "RO3", "RefinementDomain", "RevenueOrdered", "SACPSolver",
    "SizeLimit", "SolveResult", "TAOPEnumerator", "TightConstructionParams", "UnknownSolver",
    "MaxUtilityModel", "bound_report", "enumerate_taop", "eta", "example1_instance", "example2_instance",
    "example_instances", "expected_revenue", "gen_lcmnl",
    "grid_oracle_raop", "line_maximize", "lp_upper", "make_solver", "omega", "praop_upper",
    "project_to_domain", "refine_utilities", "revenue_ordered", "ro1", "ro2", "ro3", "solve_sacp",
]
