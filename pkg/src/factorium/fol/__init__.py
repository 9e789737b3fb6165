from .builders import (build_E, build_EO, build_O, build_phi, build_phi12, build_psi,
                       build_semilattice_phi, sigma_suite)
from .evaluate import (DEFAULT_BUDGET, BudgetExceeded, CompiledFormula, EvaluationError,
                       compile_formula, eval_formula, satisfying_assignments)
from .formula import (FALSE, TRUE, And, Eq, Exists, Forall, Formula, FormulaError, Implies, Not,
                      Or, classify, conj, disj, eq, exists, forall, free_vars, parse_formula,
                      prefix_string, quantifier_depth, substitute, to_text)
from .games import EXISTS, FORALL, GameResult, certificate_strategy, ef_game, replay_strategy
from .preservation import PreservationReport, check_factor_preservation, check_product_preservation
