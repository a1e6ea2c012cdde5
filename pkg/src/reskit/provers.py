"""Desk-scale reference provers and exhaustive ground-truth oracles.

dp_prove eliminates variables in a fixed order and logs every resolution,
yielding refutations that are regular by construction. min_height and
min_size are exhaustive searches meant for tiny instances, used to pin
expected values elsewhere. random_refutation deterministically generates
(formula, proof) corpus pairs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .formula import Clause, CnfFormula, brute_sat, make_clause
from .proof import (InternalCheckError, Proof, ProofBuilder, is_regular,
                    prune_to_root, resolve, verify_proof)


class BudgetExhausted(RuntimeError):
    """A prover ran out of its step budget."""


@dataclass
class StepBudget:
    """Counts attempted resolvent constructions against an optional limit."""

    limit: int | None = None
    used: int = 0

    def tick(self) -> None:
        self.used += 1
        if self.limit is not None and self.used > self.limit:
            raise BudgetExhausted(f"step budget {self.limit} exhausted")


def dp_prove(gamma: CnfFormula, order: list[int] | None = None,
             budget: StepBudget | None = None) -> Proof | dict[int, bool]:
    """Decide a formula by variable elimination in the given order.

    Returns a refutation Proof when unsatisfiable, else a satisfying model.
    Tautological resolvents are discarded; every path of the proof resolves
    variables in elimination order, so the proof is regular. Each attempted
    resolvent construction counts one budget step.
    """
    n = gamma.num_vars
    if order is None:
        order = list(range(1, n + 1))
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("order must be a permutation of the variables")

    builder = ProofBuilder()
    active: dict[Clause, int] = {}
    for clause in gamma.clauses:
        if clause not in active:
            active[clause] = builder.add_input(clause)
    derived = dict(active)
    if () in derived:
        return prune_to_root(builder.build())

    stages: list[tuple[int, list[Clause], list[Clause]]] = []
    for var in order:
        pos = [(c, i) for c, i in active.items() if var in c]
        neg = [(c, i) for c, i in active.items() if -var in c]
        stages.append((var, [c for c, _ in pos], [c for c, _ in neg]))
        if not pos or not neg:
            for c, _ in pos + neg:
                del active[c]
            continue
        for c, _ in pos + neg:
            del active[c]
        for clause_a, id_a in pos:
            for clause_b, id_b in neg:
                if budget is not None:
                    budget.tick()
                resolvent = resolve(clause_a, clause_b, var)
                if resolvent is None:
                    continue
                rid = derived.get(resolvent)
                if rid is None:
                    rid = builder.add_resolvent(id_a, id_b, var)
                    derived[resolvent] = rid
                if resolvent == ():
                    return prune_to_root(builder.build())
                active.setdefault(resolvent, rid)
    if active:
        raise InternalCheckError("clauses left after eliminating all variables")

    # Reconstruct a model backwards: a variable is forced when some clause
    # it satisfied has every other literal false under the later choices.
    model: dict[int, bool] = {}

    def all_others_false(clause: Clause, var: int) -> bool:
        return all(model[abs(lit)] != (lit > 0)
                   for lit in clause if abs(lit) != var)

    for var, pos_clauses, neg_clauses in reversed(stages):
        forced_true = any(all_others_false(c, var) for c in pos_clauses)
        forced_false = any(all_others_false(c, var) for c in neg_clauses)
        if forced_true and forced_false:
            raise InternalCheckError(f"conflicting forced values for {var}")
        model[var] = forced_true
    return model


def min_height(gamma: CnfFormula, cap: int = 16) -> int | None:
    """Least height of any refutation, by level-indexed saturation.

    Level k+1 holds every resolvent of two level-k clauses. Returns None
    when no refutation exists within the cap (in particular for satisfiable
    formulas the saturation reaches a fixpoint without the empty clause).
    """
    level: set[Clause] = set(gamma.clauses)
    if () in level:
        return 0
    fresh = sorted(level)
    for k in range(1, cap + 1):
        new: set[Clause] = set()
        pool = sorted(level)
        for clause_a in fresh:
            for clause_b in pool:
                for lit in clause_a:
                    if -lit in clause_b:
                        resolvent = resolve(clause_a, clause_b, abs(lit)) \
                            if lit > 0 else resolve(clause_b, clause_a, abs(lit))
                        if resolvent is not None and resolvent not in level:
                            new.add(resolvent)
        if () in new:
            return k
        if not new:
            return None
        level |= new
        fresh = sorted(new)
    return None


def min_size(gamma: CnfFormula, cap: int = 10) -> int | None:
    """Least clause count of any refutation, by iterative deepening.

    States are sets of placed clauses (inputs or resolvents of two placed
    clauses), memoized so permutations of one derivation collapse. Intended
    for very small inputs.
    """
    inputs = sorted(set(gamma.clauses), key=lambda c: (len(c), c))
    if () in inputs:
        return 1

    def candidates(placed: frozenset[Clause]) -> list[Clause]:
        out: set[Clause] = set(c for c in inputs if c not in placed)
        members = sorted(placed)
        for i, clause_a in enumerate(members):
            for clause_b in members[i + 1:]:
                for lit in clause_a:
                    if -lit in clause_b:
                        resolvent = resolve(clause_a, clause_b, abs(lit)) \
                            if lit > 0 else resolve(clause_b, clause_a, abs(lit))
                        if resolvent is not None and resolvent not in placed:
                            out.add(resolvent)
        return sorted(out, key=lambda c: (len(c), c))

    failed: dict[frozenset[Clause], int] = {}

    def dfs(placed: frozenset[Clause], left: int) -> bool:
        if left <= 0:
            return False
        if failed.get(placed, 0) >= left:
            return False
        options = candidates(placed)
        if () in options:
            return True
        if left == 1:
            failed[placed] = left
            return False
        for clause in options:
            if dfs(placed | {clause}, left - 1):
                return True
        failed[placed] = left
        return False

    for target in range(1, cap + 1):
        if dfs(frozenset(), target):
            return target
    return None


def _random_clause(rng: random.Random, n: int) -> Clause:
    width = rng.choices((1, 2, 3), weights=(15, 35, 50))[0]
    chosen = rng.sample(range(1, n + 1), min(width, n))
    return make_clause(v if rng.random() < 0.5 else -v for v in chosen)


def random_unsat_formula(rng: random.Random, num_vars: int,
                         num_clauses: int, attempts: int = 2000) -> CnfFormula:
    """Rejection-sample an unsatisfiable formula with distinct clauses."""
    for _ in range(attempts):
        clauses: set[Clause] = set()
        guard = 0
        while len(clauses) < num_clauses and guard < 50 * num_clauses:
            clauses.add(_random_clause(rng, num_vars))
            guard += 1
        gamma = CnfFormula(num_vars, sorted(clauses))
        if brute_sat(gamma, cap=max(20, num_vars)) is None:
            return gamma
    raise RuntimeError(
        f"no unsatisfiable sample found for n={num_vars}, m={num_clauses}")


def _saturation_prove(gamma: CnfFormula, rng: random.Random) -> Proof:
    """Refute by randomly ordered saturation, biased toward short resolvents.

    Unlike elimination-order proofs these interleave pivots freely, so the
    results are frequently irregular. Terminates because the clause universe
    is finite and saturation of an unsatisfiable set derives the empty clause.
    """
    builder = ProofBuilder()
    derived: dict[Clause, int] = {}
    for clause in gamma.clauses:
        if clause not in derived:
            derived[clause] = builder.add_input(clause)
    if () in derived:
        return prune_to_root(builder.build())
    entries: list[tuple[Clause, int]] = list(derived.items())
    candidates: list[tuple[Clause, int, int]] = []

    def pair_candidates(a: tuple[Clause, int], b: tuple[Clause, int]):
        clause_a, id_a = a
        clause_b, id_b = b
        for lit in clause_a:
            if -lit in clause_b:
                if lit > 0:
                    resolvent = resolve(clause_a, clause_b, lit)
                    if resolvent is not None:
                        candidates.append((resolvent, id_a, id_b))
                else:
                    resolvent = resolve(clause_b, clause_a, -lit)
                    if resolvent is not None:
                        candidates.append((resolvent, id_b, id_a))

    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            pair_candidates(entries[i], entries[j])

    while True:
        pool = [c for c in candidates if c[0] not in derived]
        if not pool:
            raise InternalCheckError("saturation stalled on an unsatisfiable input")
        final = [c for c in pool if not c[0]]
        if final:
            resolvent, pos_id, neg_id = final[0]
        elif rng.random() < 0.5:
            resolvent, pos_id, neg_id = rng.choice(pool)
        else:
            weights = [4.0 ** (-len(c[0])) for c in pool]
            resolvent, pos_id, neg_id = rng.choices(pool, weights=weights)[0]
        rid = builder.add_resolvent(pos_id, neg_id,
                                    _pivot_of(builder, pos_id, neg_id))
        derived[resolvent] = rid
        if resolvent == ():
            return prune_to_root(builder.build())
        new_entry = (resolvent, rid)
        for entry in entries:
            pair_candidates(entry, new_entry)
        entries.append(new_entry)
        candidates = [c for c in candidates if c[0] not in derived]


def _pivot_of(builder: ProofBuilder, pos_id: int, neg_id: int) -> int:
    clause_a = builder.clauses[pos_id]
    clause_b = builder.clauses[neg_id]
    pivots = [lit for lit in clause_a if lit > 0 and -lit in clause_b]
    if len(pivots) != 1:
        raise InternalCheckError("saturation pair lost its unique pivot")
    return pivots[0]


def random_refutation(seed: int, num_vars: int, num_clauses: int,
                      detours: bool = True) -> tuple[CnfFormula, Proof]:
    """Deterministic-by-seed (formula, refutation) generator.

    Samples an unsatisfiable formula, proves it either by elimination in a
    shuffled order or (for small inputs, when detours are enabled) by
    randomized saturation, which tends to produce irregular proofs. The
    pruned proof is verified before being returned.
    """
    rng = random.Random(seed)
    gamma = random_unsat_formula(rng, num_vars, num_clauses)
    use_saturation = detours and num_vars <= 7 and rng.random() < 0.6
    if use_saturation:
        proof = _saturation_prove(gamma, rng)
    else:
        order = list(range(1, num_vars + 1))
        rng.shuffle(order)
        result = dp_prove(gamma, order)
        if not isinstance(result, Proof):
            raise InternalCheckError("sampled formula was satisfiable after all")
        proof = prune_to_root(result)
    report = verify_proof(gamma, proof)
    if not report.well_formed or not report.is_refutation:
        raise InternalCheckError(f"generated proof invalid: {report.errors[:1]}")
    return gamma, proof
