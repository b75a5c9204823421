"""Numerical membership testing for convexity classes filtered through an
interval self-map, with checkers for the associated composition, n-point,
and integral-mean inequalities."""

from .catalog import CATALOG, CatalogEntry, composition_pairs, members, non_members
from .convexity import (CLASS_NAMES, ConvexityClass, DefectPoint, DomainError,
                        HSpec, class_from_name, defect, defect_margins,
                        godunova_levin, h_value, log_phi_convex, phi_convex,
                        phi_p, phi_s_convex, quasi_convex)
from .expressions import (EvalError, Expr, ExpressionError, ParseError,
                          evaluate, evaluate_array, parse, render, substitute)
from .functions import (Codomain, CodomainError, HypothesisCheck, Interval,
                        PhiMap, RangeCheck, RealFunction, check_affine,
                        check_convex_map, check_increasing, check_range)
from .inequalities import (BoundChain, CompositionResult, IntegralBound,
                           JensenInstance, JensenResult, THEOREM_IDS,
                           check_composition, compose, hh_geometric_margin,
                           jensen_class_for, jensen_margin,
                           quasi_integral_margin)
from .numerics import (MinimizeResult, QuadratureResult, SearchBudget,
                       integrate, minimize)
from .verifier import (HypothesisReport, Verdict, VerifierError,
                       check_hypotheses, falsify_membership)

__version__ = "0.1.0"
