"""Formula core: DIMACS I/O, substitutions, brute-force oracle."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from reskit import (CnfFormula, FormatError, ResourceCapError, Substitution,
                    apply_substitution, brute_sat, make_clause, parse_dimacs,
                    parse_substitution, restrict_clause, write_dimacs,
                    write_substitution)

from conftest import truth_table_sat


def test_make_clause_sorts_and_dedupes():
    assert make_clause([2, -3, 2, 1]) == (1, 2, -3)


def test_make_clause_rejects_tautology():
    with pytest.raises(ValueError):
        make_clause([1, -1])


def test_parse_single_clause():
    gamma = parse_dimacs("p cnf 2 1\n1 -2 0")
    assert gamma.num_vars == 2
    assert gamma.clauses == [(1, -2)]


def test_parse_full2_and_round_trip(full2):
    assert full2.num_clauses == 4
    text = write_dimacs(full2)
    again = parse_dimacs(text)
    assert again.clauses == full2.clauses
    assert write_dimacs(again) == text


def test_parse_rejects_tautological_clause():
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 1 1\n1 -1 0")


def test_parse_dedupes_literals_within_clause():
    gamma = parse_dimacs("p cnf 2 1\n1 1 2 0")
    assert gamma.clauses == [(1, 2)]


@pytest.mark.parametrize("text", [
    "1 2 0",                       # clause before header
    "p cnf 2\n1 0",                # short header
    "p dnf 2 1\n1 0",              # wrong format tag
    "p cnf 2 1\n3 0",              # literal out of range
    "p cnf 2 2\n1 0",              # count mismatch (too few)
    "p cnf 2 1\n1 0\n2 0",         # count mismatch (too many)
    "p cnf 2 1\n1 2",              # unterminated clause
    "p cnf 2 1\nx 0",              # non-integer token
    "p cnf 2 1\np cnf 2 1\n1 0",   # duplicate header
])
def test_parse_errors(text):
    with pytest.raises(FormatError):
        parse_dimacs(text)


def test_parse_accepts_comments_and_empty_clause():
    gamma = parse_dimacs("c comment\np cnf 1 2\n1 0\n0\n")
    assert gamma.clauses == [(1,), ()]


@st.composite
def formulas(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    num_clauses = draw(st.integers(min_value=0, max_value=8))
    clauses = []
    for _ in range(num_clauses):
        chosen = draw(st.sets(st.integers(min_value=1, max_value=n),
                              min_size=1, max_size=3))
        signs = [draw(st.booleans()) for _ in chosen]
        clauses.append(tuple(v if s else -v
                             for v, s in zip(sorted(chosen), signs)))
    return CnfFormula(n, clauses)


@settings(max_examples=60, derandomize=True)
@given(formulas())
def test_dimacs_round_trip_property(gamma):
    text = write_dimacs(gamma)
    again = parse_dimacs(text)
    assert again.num_vars == gamma.num_vars
    assert again.clauses == gamma.clauses
    assert write_dimacs(again) == text


def test_substitution_drops_satisfied_clause():
    gamma = CnfFormula(2, [(1, 2)])
    out = apply_substitution(gamma, Substitution({1: True}))
    assert out.clauses == []


def test_substitution_removes_false_literal():
    gamma = CnfFormula(2, [(1, 2), (-1,)])
    out = apply_substitution(gamma, Substitution({2: False}))
    assert out.clauses == [(1,), (-1,)]


def test_substitution_tautological_image_vanishes():
    gamma = CnfFormula(3, [(1, -3)])
    out = apply_substitution(gamma, Substitution({3: 1}))
    assert out.clauses == []


def test_substitution_identity(full2):
    out = apply_substitution(full2, Substitution({}))
    assert out.clauses == full2.clauses
    assert out.num_vars == full2.num_vars


def test_substitution_widens_num_vars_for_fresh_ids():
    gamma = CnfFormula(2, [(1, 2)])
    out = apply_substitution(gamma, Substitution({1: 7}))
    assert out.num_vars == 7
    assert out.clauses == [(2, 7)]


def test_restrict_clause_negated_mapping():
    sigma = Substitution({2: -5})
    assert restrict_clause((1, -2), sigma) == (1, 5)


def test_substitution_constants_consistent_with_model_preserve_sat():
    rng = random.Random(7)
    for _ in range(40):
        n = rng.randint(2, 8)
        clauses = set()
        for _ in range(rng.randint(1, 2 * n)):
            vs = rng.sample(range(1, n + 1), rng.randint(1, min(3, n)))
            clauses.add(tuple(v if rng.random() < 0.5 else -v for v in vs))
        gamma = CnfFormula(n, sorted(clauses))
        model = brute_sat(gamma)
        if model is None:
            continue
        picked = rng.sample(range(1, n + 1), rng.randint(0, n))
        sigma = Substitution({v: model[v] for v in picked})
        assert brute_sat(apply_substitution(gamma, sigma)) is not None


def test_renaming_substitution_preserves_satisfiability():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(2, 6)
        clauses = set()
        for _ in range(rng.randint(1, 3 * n)):
            vs = rng.sample(range(1, n + 1), rng.randint(1, min(3, n)))
            clauses.add(tuple(v if rng.random() < 0.5 else -v for v in vs))
        gamma = CnfFormula(n, sorted(clauses))
        fresh = list(range(n + 1, 2 * n + 1))
        rng.shuffle(fresh)
        sigma = Substitution({v: (fresh[v - 1] if rng.random() < 0.5
                                  else -fresh[v - 1])
                              for v in range(1, n + 1)})
        renamed = apply_substitution(gamma, sigma)
        assert (brute_sat(renamed) is None) == (brute_sat(gamma) is None)


def test_brute_sat_examples(full2):
    assert brute_sat(CnfFormula(1, [(1,), (-1,)])) is None
    assert brute_sat(full2) is None
    assert brute_sat(CnfFormula(0, [])) == {}


def test_brute_sat_cap():
    with pytest.raises(ResourceCapError):
        brute_sat(CnfFormula(25, []), cap=20)
    assert brute_sat(CnfFormula(25, []), cap=30) is not None


def test_brute_sat_model_satisfies():
    gamma = parse_dimacs("p cnf 3 3\n1 -2 0\n-1 3 0\n2 3 0\n")
    model = brute_sat(gamma)
    assert model is not None
    for clause in gamma.clauses:
        assert any(model[abs(lit)] == (lit > 0) for lit in clause)


def test_brute_sat_agrees_with_truth_table():
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(1, 7)
        clauses = set()
        for _ in range(rng.randint(0, 3 * n)):
            vs = rng.sample(range(1, n + 1), rng.randint(1, min(3, n)))
            clauses.add(tuple(v if rng.random() < 0.5 else -v for v in vs))
        gamma = CnfFormula(n, sorted(clauses))
        assert (brute_sat(gamma) is None) == (truth_table_sat(gamma) is None)


def test_substitution_file_round_trip():
    text = "# comment\n5 -> 1\n6 -> -2\n7 -> T\n8 -> F\n"
    sigma = parse_substitution(text)
    assert sigma.mapping == {5: 1, 6: -2, 7: True, 8: False}
    assert parse_substitution(write_substitution(sigma)).mapping == sigma.mapping


@pytest.mark.parametrize("text", [
    "5 -> 0", "x -> 1", "5 -> y", "5 -> 1 -> 2", "5 -> T\n5 -> F", "-5 -> 1",
])
def test_substitution_file_errors(text):
    with pytest.raises(FormatError):
        parse_substitution(text)
