"""Instance documents: a JSON format for every artifact this package builds.

A document is {schema_version, kind, payload, provenance} with kind one of
qdnf, cnf, lop, pricing, reduction-artifact.  Rationals are serialized as
"numerator/denominator" strings, never as decimals; literals inside cnf and
qdnf payloads are signed integers.  Serialization preserves the stored
order of formulas and universes, so parsing a serialized value reproduces
it exactly, and serializing the same value twice yields identical bytes.
"""

from __future__ import annotations

import json

from .compilers import QdnfFormula
from .core import Element, GroundProblem, ReductionArtifact, Sense, explicit_problem
from .pricing import Domain, GroundChoice, PricingInstance
from .problems import CnfFormula, sat_problem, subset_sum_problem, vertex_cover_problem
from .rational import format_rational, parse_rational

SCHEMA_VERSION = "1"
KINDS = ("qdnf", "cnf", "lop", "pricing", "reduction-artifact")


def make_document(kind: str, payload: dict, provenance=()) -> dict:
    if kind not in KINDS:
        raise ValueError(f"unknown document kind {kind!r}")
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "payload": payload,
        "provenance": list(provenance),
    }


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_document(text: str) -> dict:
    doc = json.loads(text)
    for field in ("schema_version", "kind", "payload"):
        if field not in doc:
            raise ValueError(f"document is missing the {field!r} field")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc['schema_version']!r}")
    if doc["kind"] not in KINDS:
        raise ValueError(f"unknown document kind {doc['kind']!r}")
    doc.setdefault("provenance", [])
    return doc


def encode_qdnf(q: QdnfFormula) -> dict:
    return {"pairs": q.num_pairs, "terms": [sorted(t) for t in q.terms]}


def decode_qdnf(payload: dict) -> QdnfFormula:
    return QdnfFormula(
        int(payload["pairs"]), tuple(frozenset(t) for t in payload["terms"])
    )


def encode_cnf(f: CnfFormula) -> dict:
    payload = {"num_vars": f.num_vars, "clauses": [sorted(c) for c in f.clauses]}
    if f.var_names is not None:
        payload["var_names"] = list(f.var_names)
    return payload


def decode_cnf(payload: dict) -> CnfFormula:
    names = payload.get("var_names")
    return CnfFormula(
        int(payload["num_vars"]),
        tuple(frozenset(c) for c in payload["clauses"]),
        tuple(names) if names is not None else None,
    )


def encode_problem(p: GroundProblem) -> dict:
    if p.name == "sat":
        return {"problem": "sat", "cnf": encode_cnf(p.formula)}
    if p.name == "vertex-cover":
        return {
            "problem": "vertex-cover",
            "vertices": [e.id for e in p.universe],
            "edges": [list(edge) for edge in p.edges],
            "weights": {e.id: p.weights[e.id] for e in p.universe},
            "threshold": p.threshold,
        }
    if p.name == "subset-sum":
        return {
            "problem": "subset-sum",
            "items": [e.id for e in p.universe],
            "weights": {e.id: p.weights[e.id] for e in p.universe},
            "target": p.threshold,
        }
    return {
        "problem": "explicit",
        "universe": [[e.id, e.label] for e in p.universe],
        "sense": p.sense.value,
        "weights": {e.id: p.weights[e.id] for e in p.universe},
        "threshold": p.threshold,
        "feasible_sets": sorted(sorted(s) for s in _feasible_family(p)),
    }


def _feasible_family(p: GroundProblem):
    return [p.ids_of(m) for m in p.feasible_masks()]


def decode_problem(payload: dict) -> GroundProblem:
    flavor = payload.get("problem")
    if flavor == "sat":
        return sat_problem(decode_cnf(payload["cnf"]))
    if flavor == "vertex-cover":
        return vertex_cover_problem(
            payload["vertices"],
            [tuple(e) for e in payload["edges"]],
            int(payload["threshold"]),
            {k: int(v) for k, v in payload["weights"].items()},
        )
    if flavor == "subset-sum":
        return subset_sum_problem(
            payload["items"],
            {k: int(v) for k, v in payload["weights"].items()},
            int(payload["target"]),
        )
    if flavor == "explicit":
        return explicit_problem(
            (Element(i, label) for i, label in payload["universe"]),
            (frozenset(s) for s in payload["feasible_sets"]),
            {k: int(v) for k, v in payload["weights"].items()},
            int(payload["threshold"]),
            Sense(payload["sense"]),
        )
    raise ValueError(f"unknown problem flavor {flavor!r}")


def encode_pricing(inst: PricingInstance) -> dict:
    return {
        "base": encode_problem(inst.base),
        "leader": sorted(inst.leader_ids),
        "valuation": {e.id: inst.valuation[e.id] for e in inst.base.universe},
        "domain": inst.domain.value,
        "ground": inst.ground.value,
        "threshold": format_rational(inst.threshold),
    }


def decode_pricing(payload: dict) -> PricingInstance:
    return PricingInstance(
        base=decode_problem(payload["base"]),
        leader_ids=frozenset(payload["leader"]),
        valuation={k: int(v) for k, v in payload["valuation"].items()},
        ground=GroundChoice(payload["ground"]),
        domain=Domain(payload["domain"]),
        threshold=parse_rational(payload["threshold"]),
    )


def encode_artifact(artifact: ReductionArtifact, source: GroundProblem) -> dict:
    return {
        "source": encode_problem(source),
        "target": encode_problem(artifact.target),
        "embedding": dict(sorted(artifact.embedding.items())),
    }


def decode_artifact(payload: dict) -> tuple[GroundProblem, ReductionArtifact]:
    source = decode_problem(payload["source"])
    artifact = ReductionArtifact(
        source_universe=source.universe,
        target=decode_problem(payload["target"]),
        embedding=dict(payload["embedding"]),
    )
    return source, artifact


def pricing_summary(inst: PricingInstance, solution, decision=None) -> list[str]:
    """Human-readable lines describing a solved instance; all values exact."""
    lines = [f"status: {solution.status.value}"]
    if solution.leader_value is not None:
        lines.append(f"leader_value: {format_rational(solution.leader_value)}")
        lines.append(f"follower_value: {format_rational(solution.follower_value)}")
        for e in sorted(solution.prices):
            lines.append(f"price {e} = {format_rational(solution.prices[e])}")
        lines.append("response: " + " ".join(sorted(solution.response)))
    if decision is not None:
        lines.append(
            f"decision: {'true' if decision else 'false'} at threshold "
            f"{format_rational(inst.threshold)}"
        )
    return lines
