"""S/K combinator terms: parsing, rewriting, lambda compilation, search and multiway graphs."""
from .term import I, J, K, S, Term, TermError, intern, size, spine, sym
from .syntax import ParseError, parse, to_text
from .rewrite import SK, SKI, JRULES, ReductionOutcome, RuleSet, Status, Strategy, reduce
from .lam import compile_lambda, parse_lambda
from .search import BehaviorSpec, enumerate_terms, find_minimal, satisfies
from .multiway import Budgets, build_graph, check_confluence, common_reduct

__all__ = [
    "S", "K", "I", "J", "Term", "TermError", "intern", "size", "spine", "sym",
    "ParseError", "parse", "to_text",
    "SK", "SKI", "JRULES", "ReductionOutcome", "RuleSet", "Status", "Strategy", "reduce",
    "compile_lambda", "parse_lambda",
    "BehaviorSpec", "enumerate_terms", "find_minimal", "satisfies",
    "Budgets", "build_graph", "check_confluence", "common_reduct",
]
