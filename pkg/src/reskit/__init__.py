"""reskit: verify, transform, and regularize resolution refutations."""

from .formula import (Clause, CnfFormula, FormatError, ResourceCapError,
                      Substitution, apply_substitution, brute_sat,
                      image_tautological, make_clause, parse_dimacs,
                      parse_substitution, restrict_clause, write_dimacs,
                      write_substitution)
from .proof import (InternalCheckError, Proof, ProofBuilder, ProofCheckError,
                    ProofNode, RegularityResult, VerificationReport, height,
                    irregularity_heights, is_regular, merge_duplicate_nodes,
                    parse_trace, prune_to_root, resolve, verify_proof,
                    write_trace)
from .regularize import (LeveledClause, LevelScheme, RegularizeReport,
                         RegularizeResult, chain_clause,
                         collapsing_substitution, dominates, level_extension,
                         leveled_image, pivot_levels_decreasing, regularize)
from .restrict import extension_height, restrict_proof
from .provers import (BudgetExhausted, StepBudget, dp_prove, min_height,
                      min_size, random_refutation, random_unsat_formula)
from .automate import (AutomateResult, BudgetPolicy, FormulaSatisfiable,
                       ProverContractError, automate_resolution,
                       formula_symbol_count)

__version__ = "0.1.0"

__all__ = [
    "Clause", "CnfFormula", "FormatError", "ResourceCapError", "Substitution",
    "apply_substitution", "brute_sat", "image_tautological", "make_clause",
    "parse_dimacs", "parse_substitution", "restrict_clause", "write_dimacs",
    "write_substitution",
    "InternalCheckError", "Proof", "ProofBuilder", "ProofCheckError",
    "ProofNode", "RegularityResult", "VerificationReport", "height",
    "irregularity_heights", "is_regular", "merge_duplicate_nodes",
    "parse_trace", "prune_to_root", "resolve", "verify_proof", "write_trace",
    "LeveledClause", "LevelScheme", "RegularizeReport", "RegularizeResult",
    "chain_clause", "collapsing_substitution", "dominates", "level_extension",
    "leveled_image", "pivot_levels_decreasing", "regularize",
    "extension_height", "restrict_proof",
    "BudgetExhausted", "StepBudget", "dp_prove", "min_height", "min_size",
    "random_refutation", "random_unsat_formula",
    "AutomateResult", "BudgetPolicy", "FormulaSatisfiable",
    "ProverContractError", "automate_resolution", "formula_symbol_count",
]
