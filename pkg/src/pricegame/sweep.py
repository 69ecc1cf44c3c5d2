"""Batch verification: compiled instances against the exhaustive oracle.

A sweep takes a deterministic corpus of quantified DNF formulas (an
exhaustive slice for one pair, seeded random formulas beyond), compiles
each into a pricing instance, and compares the pricing decision at the
compiled threshold with the exhaustive two-quantifier oracle.  The emitted
report is a deterministic function of the corpus specification and seed:
records are ordered by instance id and wall-clock timings are left out
unless explicitly requested.

A fault-injection hook corrupts the threshold of one chosen instance so the
comparison must flip there; it exists so the harness can prove it actually
detects mismatches.
"""

from __future__ import annotations

import itertools
import json
import multiprocessing
import random
import time
from dataclasses import dataclass

from .compilers import QdnfFormula, compile_qdnf_pricing, qdnf, qdnf_holds
from .core import DEFAULT_CAP, CapExceededError
from .pricing import PricingInstance, solve_pricing
from .rational import format_rational

REPORT_SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class CorpusSpec:
    pairs: int
    max_terms: int
    count: int
    seed: int
    exhaustive_pair: bool = False  # prepend the full one-pair corpus

    def as_dict(self) -> dict:
        return {
            "pairs": self.pairs,
            "max_terms": self.max_terms,
            "count": self.count,
            "seed": self.seed,
            "exhaustive_pair": self.exhaustive_pair,
        }


def one_pair_terms() -> list[frozenset[int]]:
    """All nonempty terms over one exists/forall pair (literals 1, -1, 2, -2)."""
    literals = [1, -1, 2, -2]
    terms = []
    for size in (1, 2, 3, 4):
        for combo in itertools.combinations(literals, size):
            if any(-lit in combo for lit in combo):
                continue
            terms.append(frozenset(combo))
    return terms


def exhaustive_one_pair_corpus(max_terms: int = 2) -> list[QdnfFormula]:
    """Every term set with at most max_terms terms over one pair, deduplicated."""
    terms = one_pair_terms()
    corpus = []
    for k in range(max_terms + 1):
        for chosen in itertools.combinations(terms, k):
            corpus.append(qdnf(1, chosen))
    return corpus


def random_formula(rng: random.Random, pairs: int, max_terms: int) -> QdnfFormula:
    terms = set()
    for _ in range(rng.randint(1, max_terms)):
        size = rng.randint(1, min(3, 2 * pairs))
        variables = rng.sample(range(1, 2 * pairs + 1), size)
        terms.add(frozenset(v if rng.randint(0, 1) else -v for v in variables))
    return qdnf(pairs, terms)


def build_corpus(spec: CorpusSpec) -> list[tuple[str, QdnfFormula]]:
    items: list[tuple[str, QdnfFormula]] = []
    if spec.exhaustive_pair:
        for k, q in enumerate(exhaustive_one_pair_corpus()):
            items.append((f"qdnf-exh1-{k:04d}", q))
    rng = random.Random(spec.seed)
    for k in range(spec.count):
        q = random_formula(rng, spec.pairs, spec.max_terms)
        items.append((f"qdnf-n{spec.pairs}-s{spec.seed}-{k:04d}", q))
    return items


def _decide_compiled(instance: PricingInstance, cap: int):
    outcome = solve_pricing(instance, cap)
    value = outcome.leader_value
    verdict = value is not None and value >= instance.threshold
    return verdict, value


def check_one(
    instance_id: str,
    q: QdnfFormula,
    cap: int = DEFAULT_CAP,
    corrupt: bool = False,
    timed: bool = False,
) -> dict:
    """One sweep record: oracle verdict vs compiled pricing verdict."""
    record: dict = {"instance_id": instance_id, "pairs": q.num_pairs,
                    "terms": [sorted(t) for t in q.terms]}
    start = time.perf_counter()
    try:
        expected = qdnf_holds(q)
        compiled = compile_qdnf_pricing(q)
        instance = compiled.pricing
        verdict, value = _decide_compiled(instance, cap)
        if corrupt:
            # Push the threshold past the achieved value (or down onto it)
            # so the recorded decision is guaranteed to flip.
            bumped = instance.threshold + 1 if verdict else value
            instance = PricingInstance(
                base=instance.base,
                leader_ids=instance.leader_ids,
                valuation=instance.valuation,
                ground=instance.ground,
                domain=instance.domain,
                threshold=bumped,
            )
            record["fault_injected"] = True
            verdict, value = _decide_compiled(instance, cap)
        record.update(
            oracle=expected,
            pricing=verdict,
            leader_value=format_rational(value),
            decision_threshold=format_rational(instance.threshold),
            match=expected == verdict,
        )
    except CapExceededError as err:
        record.update(oracle=None, pricing=None, match=None, anomaly=str(err))
    if timed:
        record["elapsed_ms"] = round(1000 * (time.perf_counter() - start), 3)
    return record


def _worker(args) -> dict:
    instance_id, pairs, terms, cap, corrupt, timed = args
    q = QdnfFormula(pairs, tuple(frozenset(t) for t in terms))
    return check_one(instance_id, q, cap, corrupt, timed)


def run_sweep(
    spec: CorpusSpec,
    cap: int = DEFAULT_CAP,
    jobs: int = 1,
    inject_fault: int | None = None,
    timed: bool = False,
) -> dict:
    items = build_corpus(spec)
    tasks = [
        (instance_id, q.num_pairs, [sorted(t) for t in q.terms], cap,
         inject_fault == idx, timed)
        for idx, (instance_id, q) in enumerate(items)
    ]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            records = pool.map(_worker, tasks)
    else:
        records = [_worker(t) for t in tasks]
    records.sort(key=lambda r: r["instance_id"])
    mismatches = [r for r in records if r["match"] is False]
    errors = [r for r in records if r["match"] is None]
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "kind": "verification-report",
        "corpus": spec.as_dict(),
        "records": records,
        "summary": {
            "total": len(records),
            "matches": sum(1 for r in records if r["match"] is True),
            "mismatches": len(mismatches),
            "errors": len(errors),
        },
        "failures": [
            {"instance_id": r["instance_id"], "record": r} for r in mismatches
        ],
    }
    return report


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
