"""Shared fixtures and independent brute-force oracles.

The oracles here re-derive results by literal enumeration (truth tables,
explicit path walks) so the package's DP implementations are checked
against a second, independent route.
"""

from __future__ import annotations

import itertools

import pytest

from reskit import CnfFormula, Proof, parse_dimacs, parse_trace

FULL2_DIMACS = "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n"

# All four 2-clauses over two variables, refuted with both variables
# resolved twice along the main path (an irregular 8-node refutation).
FULL2_TRACE = """\
1 1 2 0 0
2 -1 2 0 0
3 1 -2 0 0
4 -1 -2 0 0
5 2 0 1 2 0
6 1 0 3 5 0
7 -2 0 6 4 0
8 0 7 5 0
"""


@pytest.fixture
def full2() -> CnfFormula:
    return parse_dimacs(FULL2_DIMACS)


@pytest.fixture
def full2_proof(full2) -> Proof:
    return parse_trace(FULL2_TRACE, full2)


def truth_table_sat(gamma: CnfFormula) -> dict[int, bool] | None:
    """Literal truth-table enumeration; the reference for brute_sat."""
    n = gamma.num_vars
    for bits in itertools.product((False, True), repeat=n):
        model = {v: bits[v - 1] for v in range(1, n + 1)}
        if all(any(model[abs(lit)] == (lit > 0) for lit in clause)
               for clause in gamma.clauses):
            return model
    return None


def iter_paths_from(proof: Proof, start: int):
    """Yield every directed path (as node id list) starting at a node."""
    children = proof.children()

    def walk(path):
        yield list(path)
        for child_id, _ in children[path[-1]]:
            path.append(child_id)
            yield from walk(path)
            path.pop()

    yield from walk([start])


def path_pivot_counts(proof: Proof, path: list[int]) -> dict[int, int]:
    """Pivot-use counts per variable along one path (inferences at each
    non-initial node of the path)."""
    counts: dict[int, int] = {}
    for nid in path[1:]:
        pivot = proof[nid].pivot
        counts[pivot] = counts.get(pivot, 0) + 1
    return counts


def oracle_is_regular(proof: Proof) -> bool:
    """Regularity by exhaustive path enumeration from every node."""
    for node in proof.nodes:
        for path in iter_paths_from(proof, node.id):
            if any(c > 1 for c in path_pivot_counts(proof, path).values()):
                return False
    return True


def oracle_level_table(proof: Proof, node_id: int) -> dict[int, int]:
    """Worst-case pivot-use counts on paths from a node to the empty clause,
    by explicit enumeration."""
    root = proof.root_id
    table: dict[int, int] = {}
    for path in iter_paths_from(proof, node_id):
        if path[-1] != root:
            continue
        for var, count in path_pivot_counts(proof, path).items():
            if count > table.get(var, 0):
                table[var] = count
    return table


def oracle_levels_decreasing(proof: Proof, scheme) -> bool:
    """Strict per-variable decrease of pivot levels, by path enumeration."""
    for node in proof.nodes:
        if not node.is_input:
            continue
        for path in iter_paths_from(proof, node.id):
            last: dict[int, int] = {}
            for nid in path[1:]:
                x, j = scheme.split(proof[nid].pivot)
                if x in last and j >= last[x]:
                    return False
                last[x] = j
    return True
