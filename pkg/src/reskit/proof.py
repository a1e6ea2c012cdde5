"""Resolution derivations as DAGs: trace I/O, verification, structural analyses.

A proof is a list of nodes with unique, strictly ascending ids. Input nodes
carry a clause from the formula under refutation; resolvent nodes name two
earlier nodes and the pivot variable. Edges run from premises to resolvents,
so a path follows the direction of inference.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Clause, CnfFormula, FormatError, make_clause


class ProofCheckError(ValueError):
    """A proof violates the resolution rules or its formula's contract."""


class InternalCheckError(RuntimeError):
    """A constructed artifact failed self-verification: indicates a bug."""


@dataclass(frozen=True)
class ProofNode:
    """One derivation step. Input nodes have pos/neg/pivot set to None.

    For resolvents, ``pos`` names the antecedent containing the positive
    pivot literal and ``neg`` the one containing its negation.
    """

    id: int
    clause: Clause
    pos: int | None = None
    neg: int | None = None
    pivot: int | None = None

    @property
    def is_input(self) -> bool:
        return self.pivot is None


@dataclass
class Proof:
    nodes: list[ProofNode]

    def __post_init__(self):
        self._by_id = {node.id: node for node in self.nodes}

    def __getitem__(self, node_id: int) -> ProofNode:
        return self._by_id[node_id]

    def __contains__(self, node_id: int) -> bool:
        return node_id in self._by_id

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def root_id(self) -> int | None:
        """Id of the first node deriving the empty clause, if any."""
        for node in self.nodes:
            if not node.clause:
                return node.id
        return None

    def children(self) -> dict[int, list[tuple[int, int]]]:
        """Map node id -> [(resolvent id, pivot)] of inferences using it."""
        out: dict[int, list[tuple[int, int]]] = {node.id: [] for node in self.nodes}
        for node in self.nodes:
            if not node.is_input:
                out[node.pos].append((node.id, node.pivot))
                out[node.neg].append((node.id, node.pivot))
        return out


def resolve(pos_clause: Clause, neg_clause: Clause, pivot: int) -> Clause | None:
    """Resolvent of two clauses on a pivot variable; None if tautological."""
    if pivot not in pos_clause:
        raise ValueError(f"pivot {pivot} not positive in {pos_clause}")
    if -pivot not in neg_clause:
        raise ValueError(f"pivot {pivot} not negative in {neg_clause}")
    lits = (set(pos_clause) - {pivot}) | (set(neg_clause) - {-pivot})
    for lit in lits:
        if -lit in lits:
            return None
    return tuple(sorted(lits, key=abs))


def find_pivot(clause_a: Clause, clause_b: Clause) -> tuple[int, bool]:
    """Locate the unique complementary variable pair between two clauses.

    Returns (pivot, a_is_positive). Raises ProofCheckError when there is
    no pair or more than one (the resolvent would be tautological).
    """
    set_a = set(clause_a)
    pairs = [abs(lit) for lit in clause_a if -lit in set(clause_b)]
    if not pairs:
        raise ProofCheckError("no complementary pair between antecedents")
    if len(pairs) > 1:
        raise ProofCheckError(
            f"ambiguous pivot: complementary pairs on variables {sorted(pairs)}")
    pivot = pairs[0]
    return pivot, pivot in set_a


def parse_trace(text: str | bytes, gamma: CnfFormula) -> Proof:
    """Parse a resolution trace and check it against its formula.

    Line format: ``<id> <lit>* 0 0`` for inputs, ``<id> <lit>* 0 <a> <b> 0``
    for resolvents. Ids must be positive and strictly ascending; the pivot
    is inferred from the antecedents. Syntax and structure problems raise
    FormatError; violations of the resolution rules or of input-clause
    membership raise ProofCheckError.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    clause_pool = gamma.clause_set()
    nodes: list[ProofNode] = []
    by_id: dict[int, ProofNode] = {}
    last_id = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        try:
            tokens = [int(tok) for tok in line.split()]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer token") from None
        if len(tokens) < 3:
            raise FormatError(f"line {lineno}: truncated node line")
        node_id = tokens[0]
        if node_id <= 0:
            raise FormatError(f"line {lineno}: node id must be positive")
        if node_id <= last_id:
            raise FormatError(f"line {lineno}: node ids must be ascending")
        rest = tokens[1:]
        if 0 not in rest:
            raise FormatError(f"line {lineno}: missing clause terminator")
        zero_at = rest.index(0)
        lits, tail = rest[:zero_at], rest[zero_at + 1:]
        if not tail or tail[-1] != 0 or 0 in tail[:-1]:
            raise FormatError(f"line {lineno}: malformed antecedent list")
        antecedents = tail[:-1]
        try:
            clause = make_clause(lits)
        except ValueError as exc:
            raise ProofCheckError(f"node {node_id}: {exc}") from None
        if not antecedents:
            if clause not in clause_pool:
                raise ProofCheckError(
                    f"node {node_id}: input clause {list(clause)} not in formula")
            node = ProofNode(node_id, clause)
        elif len(antecedents) == 2:
            id_a, id_b = antecedents
            for ant in (id_a, id_b):
                if ant not in by_id:
                    raise FormatError(f"line {lineno}: unknown antecedent {ant}")
            try:
                pivot, a_is_pos = find_pivot(by_id[id_a].clause, by_id[id_b].clause)
            except ProofCheckError as exc:
                raise ProofCheckError(f"node {node_id}: {exc}") from None
            pos_id, neg_id = (id_a, id_b) if a_is_pos else (id_b, id_a)
            computed = resolve(by_id[pos_id].clause, by_id[neg_id].clause, pivot)
            if computed is None:
                raise ProofCheckError(f"node {node_id}: resolvent is tautological")
            if computed != clause:
                raise ProofCheckError(
                    f"node {node_id}: stated clause {list(clause)} != "
                    f"computed resolvent {list(computed)}")
            node = ProofNode(node_id, clause, pos_id, neg_id, pivot)
        else:
            raise FormatError(
                f"line {lineno}: expected 0 or 2 antecedents, got {len(antecedents)}")
        nodes.append(node)
        by_id[node_id] = node
        last_id = node_id
    if not nodes:
        raise FormatError("empty trace")
    return Proof(nodes)


def write_trace(proof: Proof, skip_unused_inputs: bool = False) -> str:
    """Serialize a proof to the trace format.

    With ``skip_unused_inputs`` the writer omits input nodes that no
    resolvent references (ids keep their values; readers accept gaps).
    The root node is always kept.
    """
    keep: set[int] | None = None
    if skip_unused_inputs:
        keep = set()
        for node in proof.nodes:
            if not node.is_input:
                keep.update((node.id, node.pos, node.neg))
        root = proof.root_id
        if root is not None:
            keep.add(root)
    lines = []
    for node in proof.nodes:
        if keep is not None and node.is_input and node.id not in keep:
            continue
        lits = " ".join(str(lit) for lit in node.clause)
        head = f"{node.id} {lits} 0" if lits else f"{node.id} 0"
        if node.is_input:
            lines.append(f"{head} 0")
        else:
            lines.append(f"{head} {node.pos} {node.neg} 0")
    return "\n".join(lines) + "\n"


@dataclass
class VerificationReport:
    well_formed: bool
    is_refutation: bool
    size: int
    height: int | None
    duplicate_clauses: int
    errors: list[str] = field(default_factory=list)


def verify_proof(gamma: CnfFormula, proof: Proof) -> VerificationReport:
    """Check every node invariant; collect located errors rather than stopping.

    Height is reported only when the proof is well formed.
    """
    errors: list[str] = []
    clause_pool = gamma.clause_set()
    seen_ids: set[int] = set()
    last_id = 0
    seen_clauses: set[Clause] = set()
    duplicates = 0
    for node in proof.nodes:
        nid = node.id
        if nid <= 0 or nid in seen_ids:
            errors.append(f"node {nid}: id not positive and unique")
            continue
        if nid <= last_id:
            errors.append(f"node {nid}: ids not ascending")
        seen_ids.add(nid)
        last_id = max(last_id, nid)
        if node.clause in seen_clauses:
            duplicates += 1
        seen_clauses.add(node.clause)
        if node.is_input:
            if node.pos is not None or node.neg is not None:
                errors.append(f"node {nid}: input node with antecedents")
            if node.clause not in clause_pool:
                errors.append(f"node {nid}: input clause not in formula")
            continue
        if node.pos is None or node.neg is None or node.pivot is None:
            errors.append(f"node {nid}: resolvent missing antecedents or pivot")
            continue
        if node.pos == node.neg:
            errors.append(f"node {nid}: antecedents must be distinct")
            continue
        bad_ref = False
        for ant in (node.pos, node.neg):
            if ant not in proof or ant >= nid:
                errors.append(f"node {nid}: antecedent {ant} missing or not earlier")
                bad_ref = True
        if bad_ref:
            continue
        pos_clause = proof[node.pos].clause
        neg_clause = proof[node.neg].clause
        if node.pivot not in pos_clause:
            errors.append(f"node {nid}: pivot {node.pivot} not positive in node {node.pos}")
            continue
        if -node.pivot not in neg_clause:
            errors.append(f"node {nid}: pivot {node.pivot} not negative in node {node.neg}")
            continue
        computed = resolve(pos_clause, neg_clause, node.pivot)
        if computed is None:
            errors.append(f"node {nid}: resolvent is tautological")
        elif computed != node.clause:
            errors.append(
                f"node {nid}: stated clause {list(node.clause)} != "
                f"computed resolvent {list(computed)}")
        elif node.pivot in (abs(lit) for lit in node.clause):
            errors.append(f"node {nid}: pivot occurs in resolvent")
    well_formed = not errors
    is_refutation = proof.root_id is not None
    hgt = height(proof) if well_formed else None
    return VerificationReport(well_formed, is_refutation, proof.size, hgt,
                              duplicates, errors)


def height(proof: Proof) -> int:
    """Edge count of the longest directed path, by DP in topological order."""
    depth: dict[int, int] = {}
    best = 0
    for node in proof.nodes:
        if node.is_input:
            depth[node.id] = 0
        else:
            depth[node.id] = 1 + max(depth[node.pos], depth[node.neg])
        best = max(best, depth[node.id])
    return best


@dataclass
class RegularityResult:
    regular: bool
    witness_path: list[int] | None = None
    repeated_variable: int | None = None

    def __bool__(self) -> bool:
        return self.regular


def is_regular(proof: Proof) -> RegularityResult:
    """Decide whether any directed path resolves some variable twice.

    DP over the DAG: for each node, the set of pivots used on paths leaving
    it. A resolvent whose own pivot reappears below it yields a concrete
    witness path (extended upward to an input node).
    """
    children = proof.children()
    below: dict[int, set[int]] = {}
    violation: tuple[int, int] | None = None
    for node in reversed(proof.nodes):
        pivots: set[int] = set()
        for child_id, pivot in children[node.id]:
            pivots.add(pivot)
            pivots |= below[child_id]
        below[node.id] = pivots
        if not node.is_input and node.pivot in pivots:
            violation = (node.id, node.pivot)
    if violation is None:
        return RegularityResult(True)
    start, var = violation
    prefix = [start]
    while not proof[prefix[0]].is_input:
        prefix.insert(0, proof[prefix[0]].pos)
    # BFS below the violating node for the next inference on the same pivot
    parents = {start: None}
    frontier = [start]
    target = None
    while frontier and target is None:
        nxt = []
        for nid in frontier:
            for child_id, pivot in children[nid]:
                if child_id in parents:
                    continue
                parents[child_id] = nid
                if pivot == var:
                    target = child_id
                    break
                nxt.append(child_id)
            if target is not None:
                break
        frontier = nxt
    suffix = []
    cur = target
    while cur != start:
        suffix.insert(0, cur)
        cur = parents[cur]
    return RegularityResult(False, prefix + suffix, var)


def prune_to_root(proof: Proof) -> Proof:
    """Keep only nodes with a directed path to the empty clause; renumber."""
    root = proof.root_id
    if root is None:
        raise ProofCheckError("proof has no empty-clause node")
    keep = {root}
    for node in reversed(proof.nodes):
        if node.id in keep and not node.is_input:
            keep.add(node.pos)
            keep.add(node.neg)
    remap: dict[int, int] = {}
    nodes: list[ProofNode] = []
    for node in proof.nodes:
        if node.id not in keep:
            continue
        if node.id > root:
            continue
        new_id = len(nodes) + 1
        remap[node.id] = new_id
        if node.is_input:
            nodes.append(ProofNode(new_id, node.clause))
        else:
            nodes.append(ProofNode(new_id, node.clause, remap[node.pos],
                                   remap[node.neg], node.pivot))
    return Proof(nodes)


def irregularity_heights(proof: Proof) -> dict[int, dict[int, int]]:
    """Per node, the worst-case count of pivot uses per variable on paths
    from that node to the empty clause.

    Requires a pruned refutation (every node on a path to the root).
    Entries absent from a node's table are zero.
    """
    root = proof.root_id
    if root is None:
        raise ValueError("irregularity heights need a refutation")
    children = proof.children()
    for node in proof.nodes:
        if node.id != root and not children[node.id]:
            raise ValueError(
                f"node {node.id} has no path to the empty clause; prune first")
    table: dict[int, dict[int, int]] = {root: {}}
    for node in reversed(proof.nodes):
        if node.id == root:
            continue
        acc: dict[int, int] = {}
        for child_id, pivot in children[node.id]:
            child_table = table[child_id]
            for var, count in child_table.items():
                if count > acc.get(var, 0):
                    acc[var] = count
            bumped = child_table.get(pivot, 0) + 1
            if bumped > acc.get(pivot, 0):
                acc[pivot] = bumped
        table[node.id] = acc
    return table


def merge_duplicate_nodes(proof: Proof) -> Proof:
    """Merge nodes with identical clause and identical antecedents; renumber."""
    remap: dict[int, int] = {}
    canonical: dict[tuple, int] = {}
    nodes: list[ProofNode] = []
    for node in proof.nodes:
        if node.is_input:
            key = ("input", node.clause)
        else:
            key = ("res", node.clause, remap[node.pos], remap[node.neg], node.pivot)
        if key in canonical:
            remap[node.id] = canonical[key]
            continue
        new_id = len(nodes) + 1
        remap[node.id] = new_id
        canonical[key] = new_id
        if node.is_input:
            nodes.append(ProofNode(new_id, node.clause))
        else:
            nodes.append(ProofNode(new_id, node.clause, remap[node.pos],
                                   remap[node.neg], node.pivot))
    return Proof(nodes)


class ProofBuilder:
    """Incremental proof construction with validated resolution steps.

    With ``dedup`` enabled, a node whose clause matches an existing node's
    clause is not added; the existing id is returned instead.
    """

    def __init__(self, dedup: bool = False):
        self.nodes: list[ProofNode] = []
        self.clauses: dict[int, Clause] = {}
        self._by_clause: dict[Clause, int] = {}
        self._input_by_clause: dict[Clause, int] = {}
        self._dedup = dedup

    def _next_id(self) -> int:
        return len(self.nodes) + 1

    def add_input(self, clause: Clause) -> int:
        clause = make_clause(clause)
        existing = self._input_by_clause.get(clause)
        if existing is None and self._dedup:
            existing = self._by_clause.get(clause)
        if existing is not None:
            return existing
        nid = self._next_id()
        self.nodes.append(ProofNode(nid, clause))
        self.clauses[nid] = clause
        self._input_by_clause[clause] = nid
        self._by_clause.setdefault(clause, nid)
        return nid

    def add_resolvent(self, pos_id: int, neg_id: int, pivot: int) -> int:
        try:
            clause = resolve(self.clauses[pos_id], self.clauses[neg_id], pivot)
        except (KeyError, ValueError) as exc:
            raise InternalCheckError(f"invalid resolution step: {exc}") from exc
        if clause is None:
            raise InternalCheckError(
                f"construction produced a tautological resolvent on {pivot}")
        if self._dedup:
            existing = self._by_clause.get(clause)
            if existing is not None:
                return existing
        nid = self._next_id()
        self.nodes.append(ProofNode(nid, clause, pos_id, neg_id, pivot))
        self.clauses[nid] = clause
        if clause not in self._by_clause:
            self._by_clause[clause] = nid
        return nid

    def build(self) -> Proof:
        return Proof(list(self.nodes))
