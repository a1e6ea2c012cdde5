"""Lifting a regular-refutation prover into a general refutation finder.

The loop runs the prover on level extensions of the input with a growing
height parameter and a polynomial step budget per round. The first regular
refutation found is restricted back through the substitution collapsing the
leveled copies, which yields a refutation of the original formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .formula import CnfFormula, ResourceCapError
from .proof import InternalCheckError, Proof, is_regular, verify_proof
from .provers import BudgetExhausted, StepBudget
from .regularize import LevelScheme, collapsing_substitution, level_extension
from .restrict import restrict_proof


class ProverContractError(RuntimeError):
    """The supplied prover returned an invalid or irregular proof."""


class FormulaSatisfiable(RuntimeError):
    """The prover found a model, so no refutation exists."""

    def __init__(self, model: dict[int, bool]):
        super().__init__("formula is satisfiable")
        self.model = model


@dataclass(frozen=True)
class BudgetPolicy:
    """A polynomial step budget b(m) = scale * m**degree."""

    scale: int = 4
    degree: int = 2

    def __post_init__(self):
        if self.scale < 1 or self.degree < 1:
            raise ValueError("budget policy needs scale >= 1 and degree >= 1")

    def __call__(self, m: int) -> int:
        return self.scale * m ** self.degree


def formula_symbol_count(gamma: CnfFormula) -> int:
    """Symbol size of a formula: header tokens plus per-clause literals and
    terminators, i.e. 4 + sum(|C| + 1)."""
    return 4 + sum(len(clause) + 1 for clause in gamma.clauses)


# A prover takes (formula, step budget) and returns a refutation Proof or a
# model dict; it raises BudgetExhausted when the budget runs out.
Prover = Callable[[CnfFormula, StepBudget], "Proof | dict[int, bool]"]


@dataclass
class RoundStats:
    round: int
    height_param: int
    budget: int
    steps: int
    outcome: str


@dataclass
class AutomateResult:
    proof: Proof
    round_found: int
    rounds: list[RoundStats] = field(default_factory=list)

    @property
    def total_steps(self) -> int:
        return sum(r.steps for r in self.rounds)


def _rounds(r_max: int, geometric: bool):
    if not geometric:
        yield from range(r_max + 1)
        return
    r = 0
    while r <= r_max:
        yield r
        r = 1 if r == 0 else 2 * r


def automate_resolution(gamma: CnfFormula, prover: Prover,
                        t: BudgetPolicy = BudgetPolicy(4, 2),
                        u: BudgetPolicy = BudgetPolicy(1, 1),
                        r_max: int = 64,
                        geometric: bool = False) -> AutomateResult:
    """Find a refutation of ``gamma`` given a prover for regular refutations.

    For r = 0, 1, ... the prover runs on the level extension of height
    max(1, r) with a budget of t(u(symbols + r)) steps. A returned proof
    must verify and be regular (anything else is a ProverContractError);
    it is then restricted back to a refutation of the original formula.
    A model raises FormulaSatisfiable; exceeding r_max raises
    ResourceCapError.
    """
    base = formula_symbol_count(gamma)
    rounds: list[RoundStats] = []
    for r in _rounds(r_max, geometric):
        h = max(1, r)
        extended = level_extension(gamma, h)
        scheme = LevelScheme(gamma.num_vars, h)
        budget = StepBudget(t(u(base + r)))
        try:
            result = prover(extended, budget)
        except BudgetExhausted:
            rounds.append(RoundStats(r, h, budget.limit, budget.used, "budget"))
            continue
        if isinstance(result, Proof):
            rounds.append(RoundStats(r, h, budget.limit, budget.used, "proved"))
            report = verify_proof(extended, result)
            if not report.well_formed or not report.is_refutation:
                raise ProverContractError(
                    f"prover output fails verification: {report.errors[:1]}")
            if not is_regular(result):
                raise ProverContractError("prover output is not regular")
            restricted = restrict_proof(extended, result,
                                        collapsing_substitution(scheme))
            final = verify_proof(gamma, restricted)
            if not final.well_formed or not final.is_refutation:
                raise InternalCheckError(
                    f"restricted proof fails verification: {final.errors[:1]}")
            return AutomateResult(restricted, r, rounds)
        rounds.append(RoundStats(r, h, budget.limit, budget.used, "sat"))
        raise FormulaSatisfiable(result)
    raise ResourceCapError(f"no proof found within {r_max} rounds")
