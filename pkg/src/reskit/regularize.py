"""Rewriting arbitrary refutations into regular ones over a level-extended formula.

The extension adds, for each variable x and level j below a height parameter
h, a fresh copy W[x,j] chained to its neighbor level by a pair of 2-clauses
encoding W[x,j] <-> W[x,j+1]. The top level is the original variable itself.
A refutation is then rebuilt so that every resolution on x happens on a copy
W[x,j] whose level j strictly decreases along every path: no variable is ever
resolved on twice along a path, at a bounded size cost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import Clause, CnfFormula, Substitution
from .proof import (InternalCheckError, Proof, ProofBuilder, height,
                    irregularity_heights, is_regular, prune_to_root,
                    merge_duplicate_nodes, verify_proof)


@dataclass(frozen=True)
class LevelScheme:
    """Bijection between leveled copies W[x,j] and concrete variable ids.

    For x in 1..n and j in 1..h: id(W[x,j]) = n*(h-j) + x, so level h is the
    original variable itself and lower levels occupy fresh ids above n.
    """

    num_vars: int
    height: int

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        if self.height < 1:
            raise ValueError("height parameter must be at least 1")

    @property
    def total_vars(self) -> int:
        return self.num_vars * self.height

    def var_id(self, x: int, level: int) -> int:
        if not 1 <= x <= self.num_vars:
            raise ValueError(f"variable {x} out of range")
        if not 1 <= level <= self.height:
            raise ValueError(f"level {level} out of range")
        return self.num_vars * (self.height - level) + x

    def lit_id(self, lit: int, level: int) -> int:
        vid = self.var_id(abs(lit), level)
        return vid if lit > 0 else -vid

    def split(self, var_id: int) -> tuple[int, int]:
        """Inverse of var_id: concrete id -> (original variable, level)."""
        if not 1 <= var_id <= self.total_vars:
            raise ValueError(f"id {var_id} outside the scheme")
        x = (var_id - 1) % self.num_vars + 1
        level = self.height - (var_id - 1) // self.num_vars
        return x, level


@dataclass(frozen=True)
class LeveledClause:
    """A clause over leveled ids, decoded as original-literal -> level."""

    scheme: LevelScheme
    levels: dict[int, int]

    @property
    def clause(self) -> Clause:
        return tuple(sorted(
            (self.scheme.lit_id(lit, level) for lit, level in self.levels.items()),
            key=abs))


def leveled_image(clause: Clause, level_table: dict[int, int],
                  scheme: LevelScheme) -> LeveledClause:
    """Map each literal of a clause to its copy at the level the table gives.

    Every literal's variable must have a positive level; a zero entry means
    the clause has no path to the empty clause and the proof needs pruning.
    """
    levels: dict[int, int] = {}
    for lit in clause:
        level = level_table.get(abs(lit), 0)
        if level < 1:
            raise ValueError(
                f"variable {abs(lit)} has level 0; prune the proof first")
        levels[lit] = level
    return LeveledClause(scheme, levels)


def dominates(e: LeveledClause, f: LeveledClause) -> bool:
    """True when both clauses have the same literals and e's levels are
    componentwise at least f's."""
    if e.levels.keys() != f.levels.keys():
        return False
    return all(e.levels[lit] >= f.levels[lit] for lit in f.levels)


def chain_clause(scheme: LevelScheme, lit: int, level: int) -> Clause:
    """The 2-clause {W[lit,level], -W[lit,level+1]} used to step one level down."""
    a = scheme.lit_id(lit, level)
    b = -scheme.lit_id(lit, level + 1)
    return tuple(sorted((a, b), key=abs))


def level_extension(gamma: CnfFormula, h: int) -> CnfFormula:
    """The input formula plus the level-chain 2-clauses, over h*n variables.

    Adds exactly 2*(h-1)*n clauses; with h = 1 the formula is unchanged.
    Satisfiability is preserved since the new clauses only equate each
    variable with its copies.
    """
    if h < 1:
        raise ValueError("height parameter must be at least 1")
    scheme = LevelScheme(gamma.num_vars, h)
    clauses = list(gamma.clauses)
    for x in range(1, gamma.num_vars + 1):
        for j in range(1, h):
            lo, hi = scheme.var_id(x, j), scheme.var_id(x, j + 1)
            clauses.append(tuple(sorted((-lo, hi), key=abs)))
            clauses.append(tuple(sorted((lo, -hi), key=abs)))
    return CnfFormula(scheme.total_vars, clauses)


def collapsing_substitution(scheme: LevelScheme) -> Substitution:
    """Map every below-top copy W[x,j] back to the literal x."""
    mapping: dict[int, int] = {}
    for x in range(1, scheme.num_vars + 1):
        for j in range(1, scheme.height):
            mapping[scheme.var_id(x, j)] = x
    return Substitution(mapping)


@dataclass
class RegularizeReport:
    num_vars: int
    height_param: int
    input_size: int
    output_size: int
    output_height: int
    size_bound: int
    height_bound: int
    regular: bool
    bounds_ok: bool
    duplicate_clauses: int

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class RegularizeResult:
    formula: CnfFormula
    proof: Proof
    scheme: LevelScheme
    report: RegularizeReport


def _lower(builder: ProofBuilder, node_id: int, scheme: LevelScheme,
           input_ids: dict[Clause, int], current: dict[int, int],
           target: dict[int, int]) -> int:
    """Append the chain resolutions taking a leveled clause down to target levels.

    One step per level per literal, pivoting on the copy being eliminated.
    Returns the id of the node holding the target clause (= node_id when
    nothing moves).
    """
    if current.keys() != target.keys():
        raise InternalCheckError("lowering across different literal sets")
    nid = node_id
    for lit in sorted(current, key=abs):
        j, k = current[lit], target[lit]
        if j < k:
            raise InternalCheckError(
                f"domination violated for literal {lit}: {j} < {k}")
        for m in range(j - 1, k - 1, -1):
            two_id = input_ids[chain_clause(scheme, lit, m)]
            pivot = scheme.var_id(abs(lit), m + 1)
            if lit > 0:
                nid = builder.add_resolvent(nid, two_id, pivot)
            else:
                nid = builder.add_resolvent(two_id, nid, pivot)
    return nid


def regularize(gamma: CnfFormula, proof: Proof,
               merge_duplicates: bool = False) -> RegularizeResult:
    """Transform a verified refutation into a regular refutation of the
    level-extended formula.

    The height parameter is the height of the pruned input. Every clause of
    the input proof is re-derived in its leveled form: input clauses are
    lowered from the top level, and each resolution step lowers the leveled
    premises until they resolve on the pivot's copy one level above its
    remaining uses. The output is self-verified (well-formed, regular,
    refutes the extended formula, within the size and height bounds) and
    construction aborts rather than emit an unverified proof.
    """
    check = verify_proof(gamma, proof)
    if not check.well_formed:
        raise ValueError(f"input proof invalid: {check.errors[0]}")
    if not check.is_refutation:
        raise ValueError("input proof is not a refutation")
    pruned = prune_to_root(proof)
    h = max(1, height(pruned))
    n = gamma.num_vars
    scheme = LevelScheme(n, h)
    extended = level_extension(gamma, h)
    tables = irregularity_heights(pruned)

    builder = ProofBuilder()
    input_ids: dict[Clause, int] = {}
    used = {node.clause for node in pruned.nodes if node.is_input}
    for clause in gamma.clauses:
        if clause in used and clause not in input_ids:
            input_ids[clause] = builder.add_input(clause)
    for clause in extended.clauses[gamma.num_clauses:]:
        input_ids[clause] = builder.add_input(clause)

    derived: dict[int, int] = {}
    levels_of: dict[int, dict[int, int]] = {}
    for node in pruned.nodes:
        table = tables[node.id]
        goal = {lit: table[abs(lit)] for lit in node.clause}
        if node.is_input:
            start = {lit: h for lit in node.clause}
            derived[node.id] = _lower(builder, input_ids[node.clause], scheme,
                                      input_ids, start, goal)
        else:
            y = node.pivot
            lam = lambda lit: table.get(abs(lit), 0) + (1 if abs(lit) == y else 0)
            pos_target = {lit: lam(lit) for lit in pruned[node.pos].clause}
            neg_target = {lit: lam(lit) for lit in pruned[node.neg].clause}
            pos_id = _lower(builder, derived[node.pos], scheme, input_ids,
                            dict(levels_of[node.pos]), pos_target)
            neg_id = _lower(builder, derived[node.neg], scheme, input_ids,
                            dict(levels_of[node.neg]), neg_target)
            pivot = scheme.var_id(y, table.get(y, 0) + 1)
            derived[node.id] = builder.add_resolvent(pos_id, neg_id, pivot)
        expected = LeveledClause(scheme, goal).clause
        if builder.clauses[derived[node.id]] != expected:
            raise InternalCheckError(
                f"step for node {node.id} derived "
                f"{builder.clauses[derived[node.id]]} instead of {expected}")
        levels_of[node.id] = goal

    out = builder.build()
    if merge_duplicates:
        out = merge_duplicate_nodes(out)
    final = verify_proof(extended, out)
    if not final.well_formed or not final.is_refutation:
        raise InternalCheckError(
            f"regularized proof failed verification: {final.errors[:1]}")
    regular = is_regular(out)
    if not regular:
        raise InternalCheckError(
            f"regularized proof is not regular (variable {regular.repeated_variable})")
    s = pruned.size
    size_bound = 6 * h * max(n, 1) * s
    height_bound = h * n
    bounds_ok = out.size <= size_bound and final.height <= height_bound
    if not bounds_ok:
        raise InternalCheckError(
            f"bounds violated: size {out.size} vs {size_bound}, "
            f"height {final.height} vs {height_bound}")
    report = RegularizeReport(
        num_vars=n, height_param=h, input_size=s, output_size=out.size,
        output_height=final.height, size_bound=size_bound,
        height_bound=height_bound, regular=bool(regular), bounds_ok=bounds_ok,
        duplicate_clauses=final.duplicate_clauses)
    return RegularizeResult(extended, out, scheme, report)


def pivot_levels_decreasing(proof: Proof, scheme: LevelScheme) -> tuple[bool, tuple[int, int] | None]:
    """Check that along every path, pivot levels per original variable
    strictly decrease.

    Returns (ok, (node id, original variable) of the first violation found).
    Implied by regularity only in one direction; this is the stronger check.
    """
    children = proof.children()
    max_level: dict[int, dict[int, int]] = {}
    violation: tuple[int, int] | None = None
    for node in reversed(proof.nodes):
        acc: dict[int, int] = {}
        for child_id, pivot in children[node.id]:
            x, j = scheme.split(pivot)
            if j > acc.get(x, 0):
                acc[x] = j
            for var, level in max_level[child_id].items():
                if level > acc.get(var, 0):
                    acc[var] = level
        max_level[node.id] = acc
        if not node.is_input:
            x, j = scheme.split(node.pivot)
            if max_level[node.id].get(x, 0) >= j:
                violation = (node.id, x)
    return (violation is None), violation
