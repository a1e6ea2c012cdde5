"""CNF formulas, DIMACS I/O, substitutions, and a brute-force satisfiability oracle.

Literals are signed integers (DIMACS convention): variable ids are positive,
``-v`` is the negation of ``v``. A clause is a tuple of literals sorted by
variable id, with at most one literal per variable; the empty tuple is the
empty clause. Tautological clauses are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class FormatError(ValueError):
    """A file or byte stream does not conform to its expected format."""


class ResourceCapError(RuntimeError):
    """An operation exceeded its configured resource cap."""


Clause = tuple[int, ...]


def make_clause(literals) -> Clause:
    """Canonicalize literals into a clause: dedupe, sort by variable id.

    Raises ValueError on a zero literal or a complementary pair (tautology).
    """
    lits = sorted(set(literals), key=abs)
    for lit in lits:
        if not isinstance(lit, int) or isinstance(lit, bool) or lit == 0:
            raise ValueError(f"invalid literal {lit!r}")
    for a, b in zip(lits, lits[1:]):
        if a == -b:
            raise ValueError(f"tautological clause: contains both {a} and {b}")
    return tuple(lits)


def clause_vars(clause: Clause) -> set[int]:
    return {abs(lit) for lit in clause}


@dataclass
class CnfFormula:
    """A CNF formula: a declared variable count and an ordered clause list."""

    num_vars: int
    clauses: list[Clause]

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError("num_vars must be non-negative")
        self.clauses = [make_clause(c) for c in self.clauses]
        for c in self.clauses:
            for lit in c:
                if abs(lit) > self.num_vars:
                    raise ValueError(
                        f"literal {lit} out of range for {self.num_vars} variables")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def clause_set(self) -> set[Clause]:
        return set(self.clauses)


def parse_dimacs(text: str | bytes) -> CnfFormula:
    """Parse DIMACS CNF text into a formula.

    Duplicate literals within a clause are silently merged; a tautological
    clause, a literal out of the header's range, or a clause-count mismatch
    is a FormatError.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    num_vars = num_clauses = None
    tokens: list[str] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise FormatError("duplicate DIMACS header")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise FormatError(f"malformed header: {line!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise FormatError(f"malformed header: {line!r}") from None
            if num_vars < 0 or num_clauses < 0:
                raise FormatError(f"malformed header: {line!r}")
            continue
        if num_vars is None:
            raise FormatError("clause data before DIMACS header")
        tokens.extend(line.split())
    if num_vars is None:
        raise FormatError("missing DIMACS header")

    clauses: list[Clause] = []
    current: list[int] = []
    for tok in tokens:
        try:
            lit = int(tok)
        except ValueError:
            raise FormatError(f"invalid literal token {tok!r}") from None
        if lit == 0:
            try:
                clauses.append(make_clause(current))
            except ValueError as exc:
                raise FormatError(f"clause {len(clauses) + 1}: {exc}") from None
            current = []
        else:
            if abs(lit) > num_vars:
                raise FormatError(
                    f"literal {lit} out of range for {num_vars} variables")
            current.append(lit)
    if current:
        raise FormatError("unterminated final clause (missing 0)")
    if len(clauses) != num_clauses:
        raise FormatError(
            f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula(num_vars, clauses)


def write_dimacs(gamma: CnfFormula) -> str:
    """Serialize to DIMACS with sorted literals, one clause per line."""
    lines = [f"p cnf {gamma.num_vars} {gamma.num_clauses}"]
    for clause in gamma.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0" if clause else "0")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Substitution:
    """Partial map from variables to literals or boolean constants.

    Values are either a signed literal (int) or True/False. Unmapped
    variables act as the identity. The map extends to literals by
    sending ``-x`` to the negation of the image of ``x``.
    """

    mapping: dict[int, int | bool] = field(default_factory=dict)

    def __post_init__(self):
        for var, val in self.mapping.items():
            if not isinstance(var, int) or isinstance(var, bool) or var < 1:
                raise ValueError(f"invalid variable {var!r} in substitution")
            if isinstance(val, bool):
                continue
            if not isinstance(val, int) or val == 0:
                raise ValueError(f"invalid substitution value {val!r}")

    def map_literal(self, lit: int) -> int | bool:
        val = self.mapping.get(abs(lit))
        if val is None:
            return lit
        if isinstance(val, bool):
            return val if lit > 0 else not val
        return val if lit > 0 else -val

    def __len__(self) -> int:
        return len(self.mapping)


def restrict_clause(clause: Clause, sigma: Substitution) -> Clause | None:
    """Apply a substitution to one clause.

    Returns None when the image is tautological (contains True or a
    complementary pair); otherwise the image clause with False removed.
    """
    out: set[int] = set()
    for lit in clause:
        val = sigma.map_literal(lit)
        if val is True:
            return None
        if val is False:
            continue
        if -val in out:
            return None
        out.add(val)
    return tuple(sorted(out, key=abs))


def image_tautological(literals, sigma: Substitution) -> bool:
    """Whether the raw image set of the given literals is tautological."""
    seen: set[int] = set()
    for lit in literals:
        val = sigma.map_literal(lit)
        if val is True:
            return True
        if val is False:
            continue
        if -val in seen:
            return True
        seen.add(val)
    return False


def apply_substitution(gamma: CnfFormula, sigma: Substitution,
                       num_vars: int | None = None) -> CnfFormula:
    """Restrict a formula by a substitution.

    Clauses whose image is tautological are dropped; duplicate result
    clauses are merged keeping first occurrence. The variable count
    defaults to the input's, widened if the substitution introduces
    larger ids.
    """
    out: list[Clause] = []
    seen: set[Clause] = set()
    max_id = 0
    for clause in gamma.clauses:
        restricted = restrict_clause(clause, sigma)
        if restricted is None or restricted in seen:
            continue
        seen.add(restricted)
        out.append(restricted)
        if restricted:
            max_id = max(max_id, abs(restricted[-1]))
    if num_vars is None:
        num_vars = max(gamma.num_vars, max_id)
    return CnfFormula(num_vars, out)


def parse_substitution(text: str | bytes) -> Substitution:
    """Parse a substitution file: one ``<var> -> <lit|T|F>`` mapping per line.

    '#' starts a comment; blank lines are ignored.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    mapping: dict[int, int | bool] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("->")
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected '<var> -> <value>'")
        var_tok, val_tok = parts[0].strip(), parts[1].strip()
        try:
            var = int(var_tok)
        except ValueError:
            raise FormatError(f"line {lineno}: bad variable {var_tok!r}") from None
        if var < 1:
            raise FormatError(f"line {lineno}: variable must be positive")
        if var in mapping:
            raise FormatError(f"line {lineno}: variable {var} mapped twice")
        if val_tok == "T":
            mapping[var] = True
        elif val_tok == "F":
            mapping[var] = False
        else:
            try:
                lit = int(val_tok)
            except ValueError:
                raise FormatError(f"line {lineno}: bad value {val_tok!r}") from None
            if lit == 0:
                raise FormatError(f"line {lineno}: 0 is not a literal")
            mapping[var] = lit
    return Substitution(mapping)


def write_substitution(sigma: Substitution) -> str:
    lines = []
    for var in sorted(sigma.mapping):
        val = sigma.mapping[var]
        if isinstance(val, bool):
            tok = "T" if val else "F"
        else:
            tok = str(val)
        lines.append(f"{var} -> {tok}")
    return "\n".join(lines) + ("\n" if lines else "")


def brute_sat(gamma: CnfFormula, cap: int = 20) -> dict[int, bool] | None:
    """Exhaustively decide satisfiability; return a model or None (unsat).

    Complete chronological backtracking over variables in id order with
    falsified-clause pruning: same result as the full truth table, usable
    on larger inputs. Raises ResourceCapError above the variable cap.
    """
    n = gamma.num_vars
    if n > cap:
        raise ResourceCapError(f"{n} variables exceeds cap {cap}")
    clauses = gamma.clauses
    if any(not c for c in clauses):
        return None
    m = len(clauses)
    pos: list[list[int]] = [[] for _ in range(n + 1)]
    neg: list[list[int]] = [[] for _ in range(n + 1)]
    for ci, clause in enumerate(clauses):
        for lit in clause:
            (pos[lit] if lit > 0 else neg[-lit]).append(ci)
    open_count = [len(c) for c in clauses]
    true_count = [0] * m
    assign = [False] * (n + 1)

    def set_var(v: int, val: bool) -> bool:
        ok = True
        for ci in (pos[v] if val else neg[v]):
            true_count[ci] += 1
        for ci in (neg[v] if val else pos[v]):
            open_count[ci] -= 1
            if open_count[ci] == 0 and true_count[ci] == 0:
                ok = False
        return ok

    def unset_var(v: int, val: bool) -> None:
        for ci in (pos[v] if val else neg[v]):
            true_count[ci] -= 1
        for ci in (neg[v] if val else pos[v]):
            open_count[ci] += 1

    def search(v: int) -> bool:
        if v > n:
            return True
        for val in (True, False):
            assign[v] = val
            if set_var(v, val) and search(v + 1):
                return True
            unset_var(v, val)
        return False

    if search(1):
        return {v: assign[v] for v in range(1, n + 1)}
    return None
