"""Concrete problems: satisfiability, vertex cover, subset sum.

Formulas use the clause-as-literal-set convention: a clause is a frozenset
of nonzero signed variable indices (DIMACS style), a formula is a sequence
of clauses.  A satisfiability problem's universe is the 2n literals; its
solutions are the literal sets picking exactly one of each complementary
pair and meeting every clause.

Two reductions out of satisfiability are shipped, each returning a
ReductionArtifact whose target threshold is tight (no strictly better
feasible set), which is what the pricing lifts require:

  sat_to_vertex_cover   one edge per variable pair plus a clique gadget per
                        clause, cover budget  n + sum(|C| - 1)
  sat_to_subset_sum     digit construction, one item per literal and two
                        slack items per clause, no carries by base choice
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Element, GroundProblem, ReductionArtifact, Sense


class EmptyClauseError(ValueError):
    """An empty clause makes the formula degenerately unsatisfiable."""


@dataclass(frozen=True)
class CnfFormula:
    num_vars: int
    clauses: tuple[frozenset[int], ...]
    var_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("a formula needs at least one variable")
        for clause in self.clauses:
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")
            if any(-lit in clause for lit in clause):
                raise ValueError("clause contains a literal and its negation")
        if self.var_names is not None:
            if len(self.var_names) != self.num_vars:
                raise ValueError("var_names length must equal num_vars")
            if len(set(self.var_names)) != self.num_vars:
                raise ValueError("variable names must be unique")
            if any(not name or name.startswith("~") for name in self.var_names):
                raise ValueError("variable names must be nonempty and not start with ~")

    def name_of(self, var: int) -> str:
        if self.var_names is not None:
            return self.var_names[var - 1]
        return f"x{var}"

    def literal_id(self, lit: int) -> str:
        name = self.name_of(abs(lit))
        return name if lit > 0 else "~" + name


def cnf(num_vars: int, clauses, var_names=None) -> CnfFormula:
    """Convenience constructor accepting any iterables of literals."""
    return CnfFormula(
        num_vars,
        tuple(frozenset(c) for c in clauses),
        tuple(var_names) if var_names is not None else None,
    )


def sat_problem(formula: CnfFormula) -> GroundProblem:
    """The satisfiability problem of a formula as a feasibility-sense instance.

    Universe order interleaves the pairs: x1, ~x1, x2, ~x2, ...  The
    enumerator walks assignments rather than arbitrary literal subsets.
    """
    n = formula.num_vars
    universe = []
    for v in range(1, n + 1):
        universe.append(Element(formula.literal_id(v), formula.name_of(v)))
        universe.append(Element(formula.literal_id(-v), "not " + formula.name_of(v)))
    elements = tuple(universe)
    ids = {e.id for e in elements}
    true_bit = [1 << (2 * v) for v in range(n)]
    false_bit = [1 << (2 * v + 1) for v in range(n)]
    clause_masks = []
    for clause in formula.clauses:
        mask = 0
        for lit in clause:
            v = abs(lit) - 1
            mask |= true_bit[v] if lit > 0 else false_bit[v]
        clause_masks.append(mask)

    def feasible(subset: frozenset[str]) -> bool:
        if not subset <= ids:
            return False
        mask = problem.mask_of(subset)
        for v in range(n):
            if (1 if mask & true_bit[v] else 0) + (1 if mask & false_bit[v] else 0) != 1:
                return False
        return all(mask & cm for cm in clause_masks)

    def enumerate_assignments():
        for a in range(1 << n):
            mask = 0
            for v in range(n):
                mask |= true_bit[v] if a >> v & 1 else false_bit[v]
            if all(mask & cm for cm in clause_masks):
                yield mask

    problem = GroundProblem(
        universe=elements,
        weights={e.id: 0 for e in elements},
        threshold=0,
        sense=Sense.FEASIBILITY,
        feasible=feasible,
        mask_enumerator=enumerate_assignments,
        name="sat",
        cost_bits=n,
    )
    problem.formula = formula
    return problem


def vertex_cover_problem(
    vertices, edges, threshold: int, weights: dict[str, int] | None = None
) -> GroundProblem:
    """Vertex cover as a minimization instance, unit weights by default.

    The enumerator emits covers as complements of independent sets, which
    keeps the walk far below 2^|V| on the gadget graphs built here.
    """
    names = [v if isinstance(v, str) else str(v) for v in vertices]
    elements = tuple(Element(v, v) for v in names)
    if weights is None:
        weights = {v: 1 for v in names}
    index = {v: i for i, v in enumerate(names)}
    size = len(names)
    full = (1 << size) - 1
    edge_masks = []
    adjacency = [0] * size
    for u, v in edges:
        iu, iv = index[str(u)], index[str(v)]
        if iu == iv:
            raise ValueError("self-loops are not allowed")
        edge_masks.append((1 << iu) | (1 << iv))
        adjacency[iu] |= 1 << iv
        adjacency[iv] |= 1 << iu

    def feasible(subset: frozenset[str]) -> bool:
        if not subset <= set(names):
            return False
        mask = problem.mask_of(subset)
        return all(mask & em for em in edge_masks)

    def enumerate_covers():
        # Depth-first over independent sets; each complement is a cover.
        def rec(next_vertex: int, chosen: int, banned: int):
            yield full ^ chosen
            for v in range(next_vertex, size):
                bit = 1 << v
                if banned & bit:
                    continue
                yield from rec(v + 1, chosen | bit, banned | bit | adjacency[v])

        yield from rec(0, 0, 0)

    problem = GroundProblem(
        universe=elements,
        weights=weights,
        threshold=threshold,
        sense=Sense.MIN,
        feasible=feasible,
        mask_enumerator=enumerate_covers,
        name="vertex-cover",
    )
    problem.edges = [tuple(sorted((str(u), str(v)))) for u, v in edges]
    return problem


def subset_sum_problem(item_ids, weights: dict[str, int], target: int) -> GroundProblem:
    """Subset sum as a maximization instance.

    Feasible sets are those of total weight at most the target; solutions
    hit the target exactly.
    """
    names = list(item_ids)
    elements = tuple(Element(i, i) for i in names)
    if any(weights[i] < 0 for i in names):
        raise ValueError("item weights must be nonnegative")

    def feasible(subset: frozenset[str]) -> bool:
        if not subset <= set(names):
            return False
        return sum(weights[i] for i in subset) <= target

    def enumerate_light():
        w = [weights[i] for i in names]
        size = len(names)
        if size <= 20:
            sums = [0] * (1 << size)
            for m in range(1, 1 << size):
                low = m & -m
                sums[m] = sums[m ^ low] + w[low.bit_length() - 1]
            return (m for m in range(1 << size) if sums[m] <= target)

        def walk():
            for m in range(1 << size):
                total, rest = 0, m
                while rest:
                    low = rest & -rest
                    total += w[low.bit_length() - 1]
                    rest ^= low
                if total <= target:
                    yield m

        return walk()

    problem = GroundProblem(
        universe=elements,
        weights=weights,
        threshold=target,
        sense=Sense.MAX,
        feasible=feasible,
        mask_enumerator=enumerate_light,
        name="subset-sum",
    )
    return problem


def sat_to_vertex_cover(formula: CnfFormula) -> ReductionArtifact:
    """Clause-gadget reduction from satisfiability to vertex cover.

    One edge per complementary literal pair, one clique per clause with an
    edge from each clique vertex to the vertex of its literal.  A singleton
    clause gets a two-vertex clique whose members both attach to the single
    literal's vertex, so every gadget still forces one uncovered clique
    vertex whose literal must be chosen.  The budget is
    n + sum over clauses of (gadget size - 1) and is tight.
    """
    for clause in formula.clauses:
        if not clause:
            raise EmptyClauseError("empty clause: formula is unsatisfiable by construction")

    n = formula.num_vars
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    embedding: dict[str, str] = {}
    for v in range(1, n + 1):
        pos, neg = formula.literal_id(v), formula.literal_id(-v)
        vertices += [f"v:{pos}", f"v:{neg}"]
        edges.append((f"v:{pos}", f"v:{neg}"))
        embedding[pos] = f"v:{pos}"
        embedding[neg] = f"v:{neg}"

    budget = n
    for j, clause in enumerate(formula.clauses, start=1):
        literals = sorted(clause)
        if len(literals) == 1:
            literals = literals * 2
        gadget = []
        for k, lit in enumerate(literals):
            node = f"c{j}.{k}"
            vertices.append(node)
            gadget.append(node)
            edges.append((node, f"v:{formula.literal_id(lit)}"))
        edges.extend(itertools.combinations(gadget, 2))
        budget += len(gadget) - 1

    target = vertex_cover_problem(vertices, edges, budget)
    source = sat_problem(formula)
    return ReductionArtifact(
        source_universe=source.universe,
        target=target,
        embedding=embedding,
        provenance=(
            {"step": "sat2vc", "params": {"threshold": budget, "vertices": len(vertices)}},
        ),
    )


_SLACK_DIGITS = {1: (0, 0), 2: (1, 0), 3: (1, 1), 4: (1, 2)}


def sat_to_subset_sum(formula: CnfFormula) -> ReductionArtifact:
    """Digit reduction from satisfiability to subset sum.

    One digit per variable (target 1) and one per clause (target equal to
    the clause size).  Literal items carry a 1 in their variable digit and
    in each clause digit they appear in.  Two slack items per clause close
    the gap between the number of satisfied literals and the clause size;
    their digit values depend on the clause size so that slacks alone can
    never reach the clause target.  Clauses wider than four literals have
    no such two-slack completion and are rejected.
    """
    for clause in formula.clauses:
        if not clause:
            raise EmptyClauseError("empty clause: formula is unsatisfiable by construction")
        if len(clause) > 4:
            raise ValueError("clauses with more than four literals are not supported")

    n = formula.num_vars
    m = len(formula.clauses)
    base = max(10, max((len(c) for c in formula.clauses), default=0) + 3)
    digit = [base**k for k in range(n + m)]

    item_ids: list[str] = []
    weights: dict[str, int] = {}
    embedding: dict[str, str] = {}
    for v in range(1, n + 1):
        for lit in (v, -v):
            lid = formula.literal_id(lit)
            value = digit[v - 1]
            for j, clause in enumerate(formula.clauses):
                if lit in clause:
                    value += digit[n + j]
            item_ids.append(lid)
            weights[lid] = value
            embedding[lid] = lid

    for j, clause in enumerate(formula.clauses, start=1):
        a, b = _SLACK_DIGITS[len(clause)]
        item_ids += [f"s{j}a", f"s{j}b"]
        weights[f"s{j}a"] = a * digit[n + j - 1]
        weights[f"s{j}b"] = b * digit[n + j - 1]

    target_value = sum(digit[v] for v in range(n))
    for j, clause in enumerate(formula.clauses):
        target_value += len(clause) * digit[n + j]

    target = subset_sum_problem(item_ids, weights, target_value)
    source = sat_problem(formula)
    return ReductionArtifact(
        source_universe=source.universe,
        target=target,
        embedding=embedding,
        provenance=(
            {"step": "sat2ss", "params": {"base": base, "target": target_value}},
        ),
    )
