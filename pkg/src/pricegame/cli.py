"""Command line surface.

Subcommands: solve (run the exact bilevel solver on a pricing document),
compile (run one reduction pipeline and write the result with provenance),
oracle (exhaustively decide a quantified DNF document), verify-sweep (batch
compile-and-compare against the oracle, emitting a deterministic report).

Exit codes: 0 success / decision true, 2 decision false, 3 unbounded,
4 no follower solution, 1 anything malformed (including a failed sweep).
"""

from __future__ import annotations

import argparse
import sys

from .compilers import (
    compile_qdnf_pricing,
    lift_feas,
    lift_max,
    lift_min,
    qdnf_holds,
    weight_lift,
)
from .core import (
    CapExceededError,
    CertificationError,
    DEFAULT_CAP,
    ReductionArtifact,
    check_reduction,
    identity_reduction,
)
from .pricing import Domain, GroundChoice, PricingInstance, solve_pricing
from .problems import sat_problem, sat_to_subset_sum, sat_to_vertex_cover
from .rational import format_rational, parse_rational
from .serialize import (
    decode_cnf,
    decode_artifact,
    decode_pricing,
    decode_qdnf,
    dump_document,
    encode_artifact,
    encode_pricing,
    load_document,
    make_document,
    pricing_summary,
)
from .sweep import CorpusSpec, render_report, run_sweep

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FALSE = 2
EXIT_UNBOUNDED = 3
EXIT_NO_FOLLOWER = 4

PIPELINES = ("thm2", "sat2vc", "sat2ss", "lift-max", "lift-min", "lift-feas", "weight-lift")


def _add_global_flags(parser) -> None:
    # SUPPRESS keeps unprovided copies from clobbering the root defaults,
    # so the flags work both before and after the subcommand.
    parser.add_argument("--cap", type=int, default=argparse.SUPPRESS,
                        help="enumeration cap on universe size")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for generated corpora")
    parser.add_argument("--jobs", type=int, default=argparse.SUPPRESS,
                        help="worker processes for sweeps")
    parser.add_argument("--out", default=argparse.SUPPRESS,
                        help="output path (defaults to stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pricegame",
        description="Exact solver and reduction pipelines for combinatorial pricing games.",
    )
    parser.set_defaults(cap=DEFAULT_CAP, seed=0, jobs=1, out=None)
    _add_global_flags(parser)
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a pricing document exactly")
    solve.add_argument("path")
    solve.add_argument("--domain", choices=[d.value for d in Domain],
                       help="override the price-domain restriction")
    solve.add_argument("--threshold", help="decide at this rational threshold (a/b)")
    solve.add_argument("--ground", choices=[g.value for g in GroundChoice],
                       help="override the follower ground family")

    compile_cmd = sub.add_parser("compile", help="run one reduction pipeline")
    compile_cmd.add_argument("path")
    compile_cmd.add_argument("--pipeline", choices=PIPELINES, required=True)

    oracle = sub.add_parser("oracle", help="decide a qdnf document exhaustively")
    oracle.add_argument("path")

    sweep = sub.add_parser("verify-sweep", help="compile a corpus and compare with the oracle")
    sweep.add_argument("--pairs", type=int, default=2)
    sweep.add_argument("--max-terms", type=int, default=3)
    sweep.add_argument("--count", type=int, default=50)
    sweep.add_argument("--exhaustive-pair", action="store_true",
                       help="prepend the exhaustive one-pair corpus")
    sweep.add_argument("--inject-fault", type=int, default=None,
                       help="corrupt the instance at this index (harness self-test)")
    sweep.add_argument("--timings", action="store_true",
                       help="record wall-clock timings (breaks byte reproducibility)")

    for command in (solve, compile_cmd, oracle, sweep):
        _add_global_flags(command)
    return parser


def _read_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return load_document(handle.read())


def _write(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_solve(args) -> int:
    doc = _read_document(args.path)
    if doc["kind"] != "pricing":
        raise ValueError(f"solve expects a pricing document, got {doc['kind']!r}")
    inst = decode_pricing(doc["payload"])
    if args.domain:
        inst.domain = Domain(args.domain)
    if args.ground:
        inst.ground = GroundChoice(args.ground)
    decide = args.threshold is not None
    if decide:
        inst.threshold = parse_rational(args.threshold)
        if inst.threshold < 0:
            raise ValueError("decision threshold must be nonnegative")
    solution = solve_pricing(inst, args.cap)
    decision = None
    if solution.status.value == "optimal" and decide:
        decision = solution.leader_value >= inst.threshold
    print("\n".join(pricing_summary(inst, solution, decision)))
    if solution.status.value == "no-follower-solution":
        return EXIT_NO_FOLLOWER
    if solution.status.value == "unbounded":
        return EXIT_UNBOUNDED
    if decide and not decision:
        return EXIT_FALSE
    return EXIT_OK


def _sat_formula_of(inst: PricingInstance):
    formula = getattr(inst.base, "formula", None)
    if formula is None:
        raise ValueError("this pipeline needs a pricing document over a sat base")
    return formula


def _cmd_compile(args) -> int:
    doc = _read_document(args.path)
    pipeline = args.pipeline
    provenance = list(doc.get("provenance", []))

    if pipeline == "thm2":
        if doc["kind"] != "qdnf":
            raise ValueError("thm2 expects a qdnf document")
        compiled = compile_qdnf_pricing(decode_qdnf(doc["payload"]))
        provenance += list(compiled.provenance)
        out = make_document("pricing", encode_pricing(compiled.pricing), provenance)
        print(f"price_unit={compiled.price_unit} "
              f"decision_threshold={compiled.decision_threshold}")
        _write(args, dump_document(out))
        return EXIT_OK

    if pipeline in ("sat2vc", "sat2ss"):
        if doc["kind"] != "cnf":
            raise ValueError(f"{pipeline} expects a cnf document")
        formula = decode_cnf(doc["payload"])
        artifact = sat_to_vertex_cover(formula) if pipeline == "sat2vc" \
            else sat_to_subset_sum(formula)
        source = sat_problem(formula)
        report = check_reduction(source, artifact, args.cap)
        if not report.passed:
            raise CertificationError(report)
        provenance += [dict(p) for p in artifact.provenance]
        out = make_document("reduction-artifact", encode_artifact(artifact, source), provenance)
        print(f"target_threshold={artifact.target.threshold}")
        _write(args, dump_document(out))
        return EXIT_OK

    if pipeline == "weight-lift":
        if doc["kind"] != "reduction-artifact":
            raise ValueError("weight-lift expects a reduction-artifact document")
        source, artifact = decode_artifact(doc["payload"])
        lifted_target = weight_lift(artifact.target, artifact.image_ids())
        lifted = ReductionArtifact(
            source_universe=artifact.source_universe,
            target=lifted_target,
            embedding=dict(artifact.embedding),
        )
        provenance += [{
            "step": "weight-lift",
            "params": {"scale": len(artifact.image_ids()) + 1,
                       "threshold": lifted_target.threshold},
        }]
        out = make_document("reduction-artifact", encode_artifact(lifted, source), provenance)
        print(f"lifted_threshold={lifted_target.threshold}")
        _write(args, dump_document(out))
        return EXIT_OK

    # The three lifts start from a pricing document over a sat base and
    # derive their reduction artifact internally.
    if doc["kind"] != "pricing":
        raise ValueError(f"{pipeline} expects a pricing document")
    inst = decode_pricing(doc["payload"])
    formula = _sat_formula_of(inst)
    if pipeline == "lift-max":
        artifact = sat_to_subset_sum(formula)
        lifted, params = lift_max(inst, artifact, args.cap)
        steps = [dict(p) for p in artifact.provenance]
    elif pipeline == "lift-min":
        artifact = sat_to_vertex_cover(formula)
        lifted, params = lift_min(inst, artifact, args.cap)
        steps = [dict(p) for p in artifact.provenance]
    else:
        artifact = identity_reduction(inst.base)
        lifted, params = lift_feas(inst, artifact, args.cap)
        steps = [dict(p) for p in artifact.provenance]
    steps.append({
        "step": pipeline,
        "params": {
            "weight_scale": params.weight_scale,
            "target_optimum": params.target_optimum,
            "threshold": format_rational(lifted.threshold),
        },
    })
    out = make_document("pricing", encode_pricing(lifted), provenance + steps)
    print(f"weight_scale={params.weight_scale}")
    _write(args, dump_document(out))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    doc = _read_document(args.path)
    if doc["kind"] != "qdnf":
        raise ValueError("oracle expects a qdnf document")
    verdict = qdnf_holds(decode_qdnf(doc["payload"]))
    print("true" if verdict else "false")
    return EXIT_OK if verdict else EXIT_FALSE


def _cmd_sweep(args) -> int:
    spec = CorpusSpec(
        pairs=args.pairs,
        max_terms=args.max_terms,
        count=args.count,
        seed=args.seed,
        exhaustive_pair=args.exhaustive_pair,
    )
    report = run_sweep(spec, cap=args.cap, jobs=args.jobs,
                       inject_fault=args.inject_fault, timed=args.timings)
    _write(args, render_report(report))
    summary = report["summary"]
    print(
        f"total={summary['total']} matches={summary['matches']} "
        f"mismatches={summary['mismatches']} errors={summary['errors']}",
        file=sys.stderr,
    )
    return EXIT_OK if summary["mismatches"] == 0 else EXIT_ERROR


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "compile": _cmd_compile,
        "oracle": _cmd_oracle,
        "verify-sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args)
    except CapExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
