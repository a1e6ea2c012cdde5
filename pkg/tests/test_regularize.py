"""Level schemes, the formula extension, lowering, and regularization."""

from __future__ import annotations

import itertools
import random

import pytest

from reskit import (CnfFormula, InternalCheckError, LeveledClause,
                    LevelScheme, ProofBuilder, Substitution,
                    apply_substitution, brute_sat, chain_clause,
                    collapsing_substitution, dominates, height,
                    irregularity_heights, is_regular, level_extension,
                    leveled_image, parse_trace, pivot_levels_decreasing,
                    prune_to_root, random_refutation, regularize,
                    verify_proof)

from conftest import oracle_levels_decreasing


def test_scheme_bijection():
    for n, h in [(1, 1), (2, 4), (3, 3), (5, 2)]:
        scheme = LevelScheme(n, h)
        seen = set()
        for x in range(1, n + 1):
            for j in range(1, h + 1):
                vid = scheme.var_id(x, j)
                assert 1 <= vid <= scheme.total_vars
                assert scheme.split(vid) == (x, j)
                seen.add(vid)
        assert len(seen) == n * h


def test_scheme_top_level_is_original():
    scheme = LevelScheme(4, 3)
    for x in range(1, 5):
        assert scheme.var_id(x, 3) == x


def test_scheme_rejects_bad_height():
    with pytest.raises(ValueError):
        LevelScheme(2, 0)


def test_level_extension_identity_at_height_one(full2):
    out = level_extension(full2, 1)
    assert out.num_vars == full2.num_vars
    assert out.clauses == full2.clauses


def test_level_extension_counts(full2):
    out = level_extension(full2, 4)
    assert out.num_vars == 8
    assert out.num_clauses == 16
    scheme = LevelScheme(2, 4)
    for x in range(1, 3):
        for j in range(1, 4):
            lo, hi = scheme.var_id(x, j), scheme.var_id(x, j + 1)
            assert tuple(sorted((-lo, hi), key=abs)) in out.clauses
            assert tuple(sorted((lo, -hi), key=abs)) in out.clauses


def test_level_extension_equisatisfiable_small_grid():
    rng = random.Random(5)
    for n, h in itertools.product(range(1, 5), range(1, 5)):
        for _ in range(3):
            clauses = set()
            for _ in range(rng.randint(1, 3 * n)):
                vs = rng.sample(range(1, n + 1), rng.randint(1, min(3, n)))
                clauses.add(tuple(v if rng.random() < 0.5 else -v for v in vs))
            gamma = CnfFormula(n, sorted(clauses))
            extended = level_extension(gamma, h)
            assert (brute_sat(gamma) is None) == \
                   (brute_sat(extended, cap=extended.num_vars) is None)


def test_leveled_image_examples(full2_proof):
    scheme = LevelScheme(2, 4)
    assert leveled_image((), {}, scheme).clause == ()
    table = irregularity_heights(prune_to_root(full2_proof))
    assert leveled_image((2,), table[5], scheme).clause == (6,)
    assert leveled_image((1, 2), table[1], scheme).clause == (5, 6)


def test_leveled_image_rejects_level_zero():
    scheme = LevelScheme(2, 4)
    with pytest.raises(ValueError, match="prune"):
        leveled_image((1,), {1: 0}, scheme)


def test_dominates():
    scheme = LevelScheme(2, 4)
    e = LeveledClause(scheme, {1: 4, 2: 4})
    f = LeveledClause(scheme, {1: 2, 2: 2})
    assert dominates(e, e)
    assert dominates(e, f)
    assert not dominates(f, e)
    assert not dominates(LeveledClause(scheme, {1: 2}),
                         LeveledClause(scheme, {1: 3}))
    assert not dominates(LeveledClause(scheme, {1: 4}),
                         LeveledClause(scheme, {2: 4}))


def _builder_with_chain_inputs(scheme):
    builder = ProofBuilder()
    inputs = {}
    for x in range(1, scheme.num_vars + 1):
        for j in range(1, scheme.height):
            for lit in (x, -x):
                clause = chain_clause(scheme, lit, j)
                inputs[clause] = builder.add_input(clause)
    return builder, inputs


def test_lowering_single_step():
    # one level down pivots on the copy being eliminated (id 6 here)
    scheme = LevelScheme(2, 4)
    builder, inputs = _builder_with_chain_inputs(scheme)
    start = builder.add_input((6,))
    from reskit.regularize import _lower
    nid = _lower(builder, start, scheme, inputs, {2: 2}, {2: 1})
    assert builder.clauses[nid] == (8,)
    assert builder.nodes[-1].pivot == 6
    two = chain_clause(scheme, 2, 1)
    assert builder.clauses[builder.nodes[-1].neg] == two


def test_lowering_step_counts():
    scheme = LevelScheme(2, 4)
    builder, inputs = _builder_with_chain_inputs(scheme)
    from reskit.regularize import _lower
    start = builder.add_input((1, 2))
    before = len(builder.nodes)
    nid = _lower(builder, start, scheme, inputs, {1: 4, 2: 4}, {1: 2, 2: 2})
    assert len(builder.nodes) - before == 4
    assert builder.clauses[nid] == (5, 6)
    same = _lower(builder, nid, scheme, inputs, {1: 2, 2: 2}, {1: 2, 2: 2})
    assert same == nid


def test_lowering_rejects_domination_violation():
    scheme = LevelScheme(2, 4)
    builder, inputs = _builder_with_chain_inputs(scheme)
    from reskit.regularize import _lower
    start = builder.add_input((6,))
    with pytest.raises(InternalCheckError):
        _lower(builder, start, scheme, inputs, {2: 2}, {2: 3})


def test_regularize_unit_pair_is_unchanged_shape():
    gamma = CnfFormula(1, [(1,), (-1,)])
    proof = parse_trace("1 1 0 0\n2 -1 0 0\n3 0 1 2 0\n", gamma)
    result = regularize(gamma, proof)
    assert result.report.height_param == 1
    assert result.formula.clauses == gamma.clauses
    assert result.proof.size == 3
    assert bool(is_regular(result.proof))


def test_regularize_full2(full2, full2_proof):
    result = regularize(full2, full2_proof)
    rep = result.report
    assert rep.input_size == 8
    assert rep.height_param == 4
    assert rep.size_bound == 384 and rep.height_bound == 8
    assert rep.output_size <= 384 and rep.output_height <= 8
    assert rep.regular and rep.bounds_ok
    # pinned construction shape: all 16 inputs plus 24 derivation steps,
    # one path realizing the full height bound
    assert rep.output_size == 40
    assert rep.output_height == 8
    check = verify_proof(result.formula, result.proof)
    assert check.well_formed and check.is_refutation
    root = result.proof[result.proof.root_id]
    assert root.pivot == 8
    assert result.proof[root.pos].clause == (8,)
    assert result.proof[root.neg].clause == (-8,)


def test_regularize_output_levels_strictly_decrease(full2, full2_proof):
    result = regularize(full2, full2_proof)
    ok, witness = pivot_levels_decreasing(result.proof, result.scheme)
    assert ok and witness is None
    assert oracle_levels_decreasing(result.proof, result.scheme)


def test_pivot_levels_checker_flags_irregular_proof(full2, full2_proof):
    # at height 1 every pivot sits on the same level, so any repeat violates
    ok, witness = pivot_levels_decreasing(full2_proof, LevelScheme(2, 1))
    assert not ok
    assert witness is not None


def test_regularize_degenerate_empty_clause_input():
    gamma = CnfFormula(1, [(), (1,)])
    proof = parse_trace("1 0 0\n", gamma)
    result = regularize(gamma, proof)
    assert result.report.height_param == 1
    assert result.proof.size == 1
    assert result.proof.root_id == 1


def test_regularize_rejects_non_refutation(full2):
    derivation = parse_trace("1 1 2 0 0\n2 -1 2 0 0\n3 2 0 1 2 0\n", full2)
    with pytest.raises(ValueError, match="refutation"):
        regularize(full2, derivation)


def test_collapsing_substitution_golden():
    assert collapsing_substitution(LevelScheme(3, 1)).mapping == {}
    sigma = collapsing_substitution(LevelScheme(2, 4))
    assert sigma.mapping == {3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 2}


def test_collapsing_substitution_inverts_extension(full2):
    for h in range(1, 5):
        extended = level_extension(full2, h)
        sigma = collapsing_substitution(LevelScheme(2, h))
        collapsed = apply_substitution(extended, sigma, num_vars=2)
        assert collapsed.clauses == full2.clauses


def test_regularize_random_corpus_bounds_and_roundtrip():
    from reskit import restrict_proof
    for seed in range(25):
        gamma, proof = random_refutation(seed + 100, 4, 12)
        result = regularize(gamma, proof)
        rep = result.report
        assert rep.regular and rep.bounds_ok
        assert rep.output_size <= 6 * rep.height_param * gamma.num_vars * proof.size
        assert oracle_levels_decreasing(result.proof, result.scheme) \
            if result.proof.size <= 14 else True
        sigma = collapsing_substitution(result.scheme)
        back = restrict_proof(result.formula, result.proof, sigma)
        check = verify_proof(gamma, back)
        assert check.well_formed and check.is_refutation
        assert back.size <= result.proof.size
