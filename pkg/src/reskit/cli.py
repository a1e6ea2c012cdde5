"""Command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 format error, 3 resource cap,
4 internal invariant violation (a constructed proof failed its self-check;
never silenced). Diagnostics go to stderr, reports to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .automate import (BudgetPolicy, FormulaSatisfiable, ProverContractError,
                       automate_resolution)
from .formula import (CnfFormula, FormatError, ResourceCapError, brute_sat,
                      apply_substitution, parse_dimacs, parse_substitution,
                      write_dimacs)
from .proof import (InternalCheckError, Proof, ProofCheckError, height,
                    irregularity_heights, is_regular, parse_trace,
                    prune_to_root, verify_proof, write_trace)
from .provers import dp_prove, min_height, min_size, random_refutation
from .regularize import LevelScheme, collapsing_substitution, level_extension, regularize
from .restrict import extension_height, restrict_proof

OK, VERIFY_FAILED, FORMAT_ERROR, RESOURCE_CAP, INTERNAL_ERROR = 0, 1, 2, 3, 4


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _load_formula(path: str) -> CnfFormula:
    return parse_dimacs(_read(path))


def _load_proof(path: str, gamma: CnfFormula) -> Proof:
    return parse_trace(_read(path), gamma)


def _sat_cap(args) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    return int(os.environ.get("RESKIT_SAT_CAP", "20"))


def _oracle_cap(args, fallback: int) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    return int(os.environ.get("RESKIT_ORACLE_CAP", str(fallback)))


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "report", None) == "json":
        print(json.dumps(payload))
    else:
        print(text)


def _verify_one(cnf_path: str, trace_path: str, args) -> int:
    gamma = _load_formula(cnf_path)
    proof = _load_proof(trace_path, gamma)
    report = verify_proof(gamma, proof)
    if not report.well_formed:
        for err in report.errors:
            print(err, file=sys.stderr)
        return VERIFY_FAILED
    regular = is_regular(proof)
    payload = {
        "file": trace_path,
        "well_formed": True,
        "refutation": report.is_refutation,
        "size": report.size,
        "height": report.height,
        "regular": bool(regular),
        "duplicate_clauses": report.duplicate_clauses,
    }
    _emit(args, payload,
          f"size={report.size} height={report.height} "
          f"regular={'true' if regular else 'false'}")
    return OK


def cmd_verify(args) -> int:
    if args.dir:
        base = Path(args.dir)
        traces = sorted(base.glob("*.trace"))
        if not traces:
            raise FormatError(f"no .trace files in {args.dir}")
        worst = OK
        for trace in traces:
            cnf = trace.with_suffix(".cnf")
            code = _verify_one(str(cnf), str(trace), args)
            print(f"{trace.name}: {'ok' if code == OK else 'FAILED'}",
                  file=sys.stderr)
            worst = max(worst, code)
        return worst
    if not args.cnf or not args.trace:
        raise FormatError("verify needs <cnf> <trace> or --dir")
    return _verify_one(args.cnf, args.trace, args)


def cmd_stats(args) -> int:
    gamma = _load_formula(args.cnf)
    proof = _load_proof(args.trace, gamma)
    report = verify_proof(gamma, proof)
    if not report.well_formed:
        for err in report.errors:
            print(err, file=sys.stderr)
        return VERIFY_FAILED
    regular = is_regular(proof)
    payload = {
        "size": report.size,
        "height": report.height,
        "refutation": report.is_refutation,
        "regular": bool(regular),
        "duplicate_clauses": report.duplicate_clauses,
        "witness_path": regular.witness_path,
        "repeated_variable": regular.repeated_variable,
    }
    lines = [f"size={report.size} height={report.height} "
             f"regular={'true' if regular else 'false'} "
             f"duplicates={report.duplicate_clauses}"]
    if not regular:
        path = " -> ".join(str(nid) for nid in regular.witness_path)
        lines.append(f"witness: {path} (variable {regular.repeated_variable} "
                     "resolved twice)")
    if report.is_refutation:
        pruned = prune_to_root(proof)
        tables = irregularity_heights(pruned)
        per_input = {}
        for node in pruned.nodes:
            if node.is_input:
                levels = tables[node.id]
                per_input[node.id] = max(levels.values(), default=0)
        payload["input_irregularity"] = per_input
        lines.append("input irregularity (pruned ids):")
        for nid, worst in per_input.items():
            lines.append(f"  node {nid}: max uses of one variable = {worst}")
    _emit(args, payload, "\n".join(lines))
    return OK


def cmd_transform(args) -> int:
    gamma = _load_formula(args.cnf)
    extended = level_extension(gamma, args.height)
    text = write_dimacs(extended)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text, end="")
    return OK


def cmd_regularize(args) -> int:
    gamma = _load_formula(args.cnf)
    proof = _load_proof(args.trace, gamma)
    result = regularize(gamma, proof)
    out_cnf, out_trace = args.output
    Path(out_cnf).write_text(write_dimacs(result.formula))
    Path(out_trace).write_text(write_trace(result.proof, skip_unused_inputs=True))
    rep = result.report
    _emit(args, rep.as_dict(),
          f"n={rep.num_vars} h={rep.height_param} s={rep.input_size} "
          f"size={rep.output_size} height={rep.output_height} "
          f"size_bound={rep.size_bound} height_bound={rep.height_bound} "
          f"regular={'true' if rep.regular else 'false'} "
          f"bounds_ok={'true' if rep.bounds_ok else 'false'}")
    return OK


def cmd_restrict(args) -> int:
    gamma = _load_formula(args.cnf)
    proof = _load_proof(args.trace, gamma)
    sigma = parse_substitution(_read(args.sub))
    restricted_formula = apply_substitution(gamma, sigma)
    restricted = restrict_proof(gamma, proof, sigma)
    report = verify_proof(restricted_formula, restricted)
    if not report.well_formed or not report.is_refutation:
        raise InternalCheckError(f"restricted proof invalid: {report.errors[:1]}")
    out_cnf, out_trace = args.output
    Path(out_cnf).write_text(write_dimacs(restricted_formula))
    Path(out_trace).write_text(write_trace(restricted))
    print(f"size={report.size} height={report.height}")
    return OK


def cmd_deregularize(args) -> int:
    original = _load_formula(args.orig_cnf)
    extended = _load_formula(args.ext_cnf)
    proof = _load_proof(args.trace, extended)
    h = extension_height(original, extended)
    scheme = LevelScheme(original.num_vars, h)
    sigma = collapsing_substitution(scheme)
    restricted_formula = apply_substitution(extended, sigma,
                                            num_vars=original.num_vars)
    restricted = restrict_proof(extended, proof, sigma)
    report = verify_proof(restricted_formula, restricted)
    if not report.well_formed or not report.is_refutation:
        raise InternalCheckError(f"restricted proof invalid: {report.errors[:1]}")
    out_cnf, out_trace = args.output
    Path(out_cnf).write_text(write_dimacs(restricted_formula))
    Path(out_trace).write_text(write_trace(restricted))
    print(f"size={report.size} height={report.height}")
    return OK


def cmd_prove_dp(args) -> int:
    gamma = _load_formula(args.cnf)
    order = None
    if args.order:
        order = [int(tok) for tok in args.order.split(",")]
    result = dp_prove(gamma, order)
    if isinstance(result, dict):
        lits = " ".join(str(v if result[v] else -v) for v in sorted(result))
        print("SAT")
        print(f"v {lits} 0" if lits else "v 0")
        return OK
    report = verify_proof(gamma, result)
    if not report.well_formed or not report.is_refutation or not is_regular(result):
        raise InternalCheckError("elimination proof failed self-verification")
    text = write_trace(result)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text, end="")
    print(f"UNSAT size={report.size} height={report.height}", file=sys.stderr)
    return OK


def cmd_oracle(args) -> int:
    gamma = _load_formula(args.cnf)
    if args.kind == "sat":
        model = brute_sat(gamma, cap=_sat_cap(args))
        if model is None:
            print("UNSAT")
        else:
            lits = " ".join(str(v if model[v] else -v) for v in sorted(model))
            print("SAT")
            print(f"v {lits} 0" if lits else "v 0")
        return OK
    if args.kind == "min-height":
        value = min_height(gamma, cap=_oracle_cap(args, 16))
    else:
        value = min_size(gamma, cap=_oracle_cap(args, 10))
    if value is None:
        print("exceeds cap", file=sys.stderr)
        return RESOURCE_CAP
    print(value)
    return OK


def cmd_gen_corpus(args) -> int:
    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    import random as _random
    for index in range(args.count):
        seed = args.seed * 1_000_003 + index
        if args.nvars is not None:
            n = args.nvars
            m = args.nclauses if args.nclauses is not None else 4 * n
        else:
            picker = _random.Random(seed)
            n = picker.randint(3, 8)
            m = picker.randint(3 * n, 4 * n + 2)
        gamma, proof = random_refutation(seed, n, m)
        stem = f"corpus_{args.seed:04d}_{index:04d}"
        (out_dir / f"{stem}.cnf").write_text(write_dimacs(gamma))
        (out_dir / f"{stem}.trace").write_text(write_trace(proof))
    print(f"wrote {args.count} pairs to {out_dir}")
    return OK


def cmd_automate(args) -> int:
    gamma = _load_formula(args.cnf)
    if args.prover != "dp":
        raise FormatError(f"unknown prover {args.prover!r}")

    def prover(formula, budget):
        return dp_prove(formula, budget=budget)

    t = _policy(args.t) if args.t else BudgetPolicy(4, 2)
    u = _policy(args.u) if args.u else BudgetPolicy(1, 1)
    result = automate_resolution(gamma, prover, t=t, u=u, r_max=args.rmax,
                                 geometric=args.geometric)
    report = verify_proof(gamma, result.proof)
    payload = {
        "succeeded_round": result.round_found,
        "rounds": [rs.__dict__ for rs in result.rounds],
        "proof_size": report.size,
        "proof_height": report.height,
    }
    if args.output:
        Path(args.output).write_text(write_trace(result.proof))
    _emit(args, payload,
          f"r={result.round_found} steps={result.total_steps} "
          f"size={report.size} height={report.height}")
    return OK


def _policy(spec: str) -> BudgetPolicy:
    try:
        scale, degree = (int(tok) for tok in spec.split(","))
    except ValueError:
        raise FormatError(f"budget policy must be 'c,k', got {spec!r}") from None
    return BudgetPolicy(scale, degree)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reskit",
        description="Verify, transform, and regularize resolution refutations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a trace against its formula")
    p.add_argument("cnf", nargs="?")
    p.add_argument("trace", nargs="?")
    p.add_argument("--dir", help="verify every *.trace (with matching *.cnf)")
    p.add_argument("--report", choices=["json"])
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="proof statistics and irregularity data")
    p.add_argument("cnf")
    p.add_argument("trace")
    p.add_argument("--report", choices=["json"])
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("transform", help="emit the level extension of a formula")
    p.add_argument("cnf")
    p.add_argument("-H", "--height", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("regularize",
                       help="rewrite a refutation into a regular one")
    p.add_argument("cnf")
    p.add_argument("trace")
    p.add_argument("-o", "--output", nargs=2, required=True,
                   metavar=("OUT_CNF", "OUT_TRACE"))
    p.add_argument("--report", choices=["json"])
    p.set_defaults(func=cmd_regularize)

    p = sub.add_parser("restrict", help="apply a substitution to a refutation")
    p.add_argument("cnf")
    p.add_argument("trace")
    p.add_argument("--sub", required=True)
    p.add_argument("-o", "--output", nargs=2, required=True,
                   metavar=("OUT_CNF", "OUT_TRACE"))
    p.set_defaults(func=cmd_restrict)

    p = sub.add_parser("deregularize",
                       help="collapse leveled copies back to the original formula")
    p.add_argument("orig_cnf")
    p.add_argument("ext_cnf")
    p.add_argument("trace")
    p.add_argument("-o", "--output", nargs=2, required=True,
                   metavar=("OUT_CNF", "OUT_TRACE"))
    p.set_defaults(func=cmd_deregularize)

    p = sub.add_parser("prove-dp", help="variable-elimination prover")
    p.add_argument("cnf")
    p.add_argument("--order", help="comma-separated elimination order")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_prove_dp)

    p = sub.add_parser("oracle", help="exhaustive ground-truth oracles")
    p.add_argument("kind", choices=["min-size", "min-height", "sat"])
    p.add_argument("cnf")
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen-corpus", help="deterministic (formula, proof) pairs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--nvars", type=int)
    p.add_argument("--nclauses", type=int)
    p.set_defaults(func=cmd_gen_corpus)

    p = sub.add_parser("automate",
                       help="find a refutation via a regular prover")
    p.add_argument("cnf")
    p.add_argument("--prover", default="dp")
    p.add_argument("--t", help="prover budget policy 'c,k'")
    p.add_argument("--u", help="proof size policy 'c,k'")
    p.add_argument("--rmax", type=int, default=64)
    p.add_argument("--geometric", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("--report", choices=["json"])
    p.set_defaults(func=cmd_automate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ProofCheckError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VERIFY_FAILED
    except FormulaSatisfiable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VERIFY_FAILED
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FORMAT_ERROR
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return RESOURCE_CAP
    except (InternalCheckError, ProverContractError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FORMAT_ERROR


if __name__ == "__main__":
    sys.exit(main())
