"""Arithmetic networks: a circuit model mixing exact rational arithmetic,
sign tests, Boolean logic and selection, with denotational semantics,
formula compilation and the rewriting passes used to bound network depth.
"""

from .analysis import (
    EquivReport, check_depth_contract, equivalent_on_samples, betti0_estimate,
    lower_bound_general, lower_bound_projection,
)
from .compile import ball_condition, bool_tree, compile_formula, slp_for_poly
from .errors import (
    ArithNetError, ArityMismatch, BadBase, BadProjectionArity, BadThresholds, EmptySample, FormulaError,
    NegationPresent, NetworkError, ParseError, PieceBudgetExceeded, UnknownKind, UnpairedSelection,
)
from .formula import (
    FALSE, TRUE, Atom, Formula, Schedule, approximate, conj, disj, eval_formula,
    negate_nnf, parse_formula, schedule, t_union_formula, to_sexpr,
)
from .network import (
    DepthReport, Gate, Network, NetworkBuilder, depth, format_network, gate_depths,
    parse_network, size, validate,
)
from .passes import (
    PairedSelectionInfo, compactify, eliminate_negations, fibered_product,
    pair_selections, t_union,
)
from .poly import Polynomial, parse_poly
from .problems import parity_bound_demo, parity_network, parity_oracle
from .semantics import PiecewisePoly, denote, evaluate

__version__ = "0.1.0"

__all__ = [
    "EquivReport",
    "check_depth_contract",
    "equivalent_on_samples",
    "betti0_estimate",
    "lower_bound_general",
    "lower_bound_projection",
    "ball_condition",
    "bool_tree",
    "compile_formula",
    "slp_for_poly",
    "ArithNetError",
    "ArityMismatch",
    "BadBase",
    "BadProjectionArity",
    "BadThresholds",
    "EmptySample",
    "FormulaError",
    "NegationPresent",
    "NetworkError",
    "ParseError",
    "PieceBudgetExceeded",
    "UnknownKind",
    "UnpairedSelection",
    "FALSE",
    "TRUE",
    "Atom",
    "Formula",
    "Schedule",
    "approximate",
    "conj",
    "disj",
    "eval_formula",
    "negate_nnf",
    "parse_formula",
    "schedule",
    "t_union_formula",
    "to_sexpr",
    "DepthReport",
    "Gate",
    "Network",
    "NetworkBuilder",
    "depth",
    "format_network",
    "gate_depths",
    "parse_network",
    "size",
    "validate",
    "PairedSelectionInfo",
    "compactify",
    "eliminate_negations",
    "fibered_product",
    "pair_selections",
    "t_union",
    "Polynomial",
    "parse_poly",
    "parity_bound_demo",
    "parity_network",
    "parity_oracle",
    "PiecewisePoly",
    "denote",
    "evaluate",
]
