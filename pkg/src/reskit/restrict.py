"""Restricting a refutation by a substitution.

Each node of the input proof is assigned a state: either a clause that is a
subset of the node's restricted clause, or a marker meaning the restricted
clause became true. A single pass in topological order maintains the subset
invariant, so the resulting DAG is a refutation of the restricted formula
that is never larger than the input.
"""

from __future__ import annotations

from .formula import (CnfFormula, Substitution, image_tautological,
                      restrict_clause)
from .proof import InternalCheckError, Proof, ProofBuilder, prune_to_root

# State marker for nodes whose restricted clause is satisfied outright.
_TRUE = None


def restrict_proof(gamma: CnfFormula, proof: Proof, sigma: Substitution,
                   check: bool = True) -> Proof:
    """Convert a refutation of ``gamma`` into one of the restricted formula.

    Case analysis per resolvent on the image of its pivot:
      - constant True/False: the premise on the falsified side already
        subsumes the result, so its state is copied;
      - a literal L: if a premise state lost L (or its negation), that state
        is taken unchanged (positive side wins ties); otherwise the two
        states are resolved on var(L), and a tautological resolvent means
        the node's restricted clause is true.
    The output is pruned to the empty clause and deduplicated by clause
    content. With ``check`` the subset invariant is enforced at every node.
    """
    builder = ProofBuilder(dedup=True)
    state: dict[int, int | None] = {}
    for node in proof.nodes:
        if node.is_input:
            restricted = restrict_clause(node.clause, sigma)
            st = _TRUE if restricted is None else builder.add_input(restricted)
        else:
            x = node.pivot
            val = sigma.map_literal(x)
            sa, sb = state[node.pos], state[node.neg]
            if val is True:
                st = sb
            elif val is False:
                st = sa
            else:
                lit = val
                if sa is _TRUE:
                    side = tuple(l for l in proof[node.pos].clause if l != x)
                    if image_tautological(side, sigma):
                        st = _TRUE
                    else:
                        st = sb  # -lit is in the restricted positive premise
                elif sb is _TRUE:
                    side = tuple(l for l in proof[node.neg].clause if l != -x)
                    if image_tautological(side, sigma):
                        st = _TRUE
                    else:
                        st = sa
                else:
                    clause_a = builder.clauses[sa]
                    clause_b = builder.clauses[sb]
                    if lit not in clause_a:
                        st = sa
                    elif -lit not in clause_b:
                        st = sb
                    else:
                        merged = (set(clause_a) - {lit}) | (set(clause_b) - {-lit})
                        if any(-l in merged for l in merged):
                            st = _TRUE
                        elif lit > 0:
                            st = builder.add_resolvent(sa, sb, lit)
                        else:
                            st = builder.add_resolvent(sb, sa, -lit)
        state[node.id] = st
        if check and st is not _TRUE:
            image = set()
            for l in node.clause:
                v = sigma.map_literal(l)
                if not isinstance(v, bool):
                    image.add(v)
            missing = [l for l in builder.clauses[st] if l not in image]
            if missing:
                raise InternalCheckError(
                    f"state of node {node.id} contains {missing} "
                    f"outside the restricted clause")

    root = proof.root_id
    if root is None:
        raise ValueError("restriction needs a refutation")
    if state[root] is _TRUE or builder.clauses[state[root]]:
        raise InternalCheckError("restricted root is not the empty clause")
    return prune_to_root(builder.build())


def extension_height(original: CnfFormula, extended: CnfFormula) -> int:
    """Recover the height parameter relating an extension to its original."""
    n = original.num_vars
    if n == 0:
        return 1
    if extended.num_vars % n != 0 or extended.num_vars < n:
        raise ValueError(
            f"{extended.num_vars} variables is not a whole number of levels "
            f"over {n}")
    return extended.num_vars // n
