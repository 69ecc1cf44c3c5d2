"""Ground problems over finite universes and embedding-preserving reductions.

A GroundProblem is a combinatorial decision/optimization problem presented
extensionally: a universe of elements, a feasibility oracle over subsets,
integer weights and a threshold, plus an optimization sense.  Its solution
set is the family of feasible sets meeting the threshold:

    MIN          feasible and weight(S) <= threshold
    MAX          feasible and weight(S) >= threshold
    FEASIBILITY  all feasible sets (weights are zero, threshold is zero)

Reductions between such problems carry an injective embedding of the source
universe into the target universe.  check_reduction certifies, by full
enumeration at desk scale, that a reduction artifact has the defining
properties: yes-instance equivalence, equality of the projected solution
families, and tightness of the target threshold (no feasible set strictly
better than the threshold).

Everything here is exact and deterministic.  Subsets are exposed as
frozensets of element ids; internally they are bitmasks over the universe
order, which is what the enumerators produce.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

DEFAULT_CAP = 24


class CapExceededError(RuntimeError):
    """Raised when an enumeration would exceed the configured universe cap."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"universe of {size} elements exceeds the enumeration cap of {cap}")
        self.size = size
        self.cap = cap


class Sense(Enum):
    MIN = "min"
    MAX = "max"
    FEASIBILITY = "feasibility"


@dataclass(frozen=True)
class Element:
    id: str
    label: str = ""


@dataclass(eq=False)
class GroundProblem:
    """A combinatorial problem over an explicit finite universe.

    feasible is the decision oracle over frozensets of element ids.
    mask_enumerator, when given, yields every feasible set as a bitmask over
    the universe order and must agree with the oracle; problem constructors
    in problems.py install pruned enumerators, the fallback scans all
    subsets.
    """

    universe: tuple[Element, ...]
    weights: dict[str, int]
    threshold: int
    sense: Sense
    feasible: Callable[[frozenset[str]], bool]
    mask_enumerator: Callable[[], Iterable[int]] | None = None
    name: str = "custom"
    cost_bits: int | None = None
    _index: dict[str, int] = field(init=False, repr=False)
    _weight_bits: list[int] = field(init=False, repr=False)
    _mask_cache: list[int] | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        ids = [e.id for e in self.universe]
        if len(set(ids)) != len(ids):
            raise ValueError("universe element ids must be unique")
        if set(self.weights) != set(ids):
            raise ValueError("weights must cover exactly the universe")
        if self.sense is Sense.MIN:
            if self.threshold < 0 or any(w < 0 for w in self.weights.values()):
                raise ValueError("minimization problems need nonnegative weights and threshold")
        if self.sense is Sense.MAX:
            if any(w < 0 for w in self.weights.values()):
                raise ValueError("maximization problems are encoded with nonnegative weights")
        if self.sense is Sense.FEASIBILITY:
            if self.threshold != 0 or any(w != 0 for w in self.weights.values()):
                raise ValueError("feasibility problems carry zero weights and threshold zero")
        object.__setattr__(self, "_index", {e.id: i for i, e in enumerate(self.universe)})
        object.__setattr__(self, "_weight_bits", [self.weights[e.id] for e in self.universe])

    @property
    def size(self) -> int:
        return len(self.universe)

    def index_of(self, element_id: str) -> int:
        return self._index[element_id]

    def mask_of(self, ids: Iterable[str]) -> int:
        mask = 0
        for i in ids:
            mask |= 1 << self._index[i]
        return mask

    def ids_of(self, mask: int) -> frozenset[str]:
        return frozenset(
            self.universe[i].id for i in range(self.size) if mask >> i & 1
        )

    def weight_of_mask(self, mask: int) -> int:
        total = 0
        bits = self._weight_bits
        while mask:
            low = mask & -mask
            total += bits[low.bit_length() - 1]
            mask ^= low
        return total

    def feasible_masks(self, cap: int = DEFAULT_CAP) -> list[int]:
        """All feasible sets as bitmasks, cached after the first enumeration.

        The cap bounds the enumeration effort at 2^cap: a problem with a
        pruned enumerator may declare a smaller cost_bits than its universe
        size (a satisfiability universe of 2n literals is walked in 2^n
        assignment steps), the brute-force subset scan costs the full size.
        """
        if self._mask_cache is None:
            cost = self.cost_bits if self.cost_bits is not None else self.size
            if self.mask_enumerator is None:
                cost = self.size
            if cost > cap:
                raise CapExceededError(cost, cap)
            if self.mask_enumerator is not None:
                masks = sorted(self.mask_enumerator())
            else:
                masks = [
                    m for m in range(1 << self.size) if self.feasible(self.ids_of(m))
                ]
            self._mask_cache = masks
        return self._mask_cache

    def solution_masks(self, cap: int = DEFAULT_CAP) -> list[int]:
        masks = self.feasible_masks(cap)
        if self.sense is Sense.FEASIBILITY:
            return list(masks)
        if self.sense is Sense.MIN:
            return [m for m in masks if self.weight_of_mask(m) <= self.threshold]
        return [m for m in masks if self.weight_of_mask(m) >= self.threshold]


def solution_set(problem: GroundProblem, cap: int = DEFAULT_CAP) -> frozenset[frozenset[str]]:
    """The feasible sets meeting the threshold, each as a frozenset of ids."""
    return frozenset(problem.ids_of(m) for m in problem.solution_masks(cap))


def canonical_family(family: Iterable[frozenset[str]]) -> tuple[tuple[str, ...], ...]:
    """Order-independent canonical form of a set family, for display and diffs."""
    return tuple(sorted(tuple(sorted(s)) for s in family))


@dataclass(frozen=True)
class ReductionArtifact:
    """Output of a reduction: target instance plus the universe embedding."""

    source_universe: tuple[Element, ...]
    target: GroundProblem
    embedding: dict[str, str]
    provenance: tuple[dict, ...] = ()

    def __post_init__(self):
        source_ids = {e.id for e in self.source_universe}
        if set(self.embedding) != source_ids:
            raise ValueError("embedding must be defined on exactly the source universe")
        images = list(self.embedding.values())
        if len(set(images)) != len(images):
            raise ValueError("embedding must be injective")
        target_ids = {e.id for e in self.target.universe}
        if not set(images) <= target_ids:
            raise ValueError("embedding image must lie inside the target universe")

    def image_ids(self) -> frozenset[str]:
        return frozenset(self.embedding.values())

    def map_set(self, source_set: Iterable[str]) -> frozenset[str]:
        return frozenset(self.embedding[i] for i in source_set)

    def pull_back(self, target_set: Iterable[str]) -> frozenset[str]:
        inverse = {v: k for k, v in self.embedding.items()}
        return frozenset(inverse[i] for i in target_set if i in inverse)


@dataclass(frozen=True)
class ReductionReport:
    """Result of certifying a reduction artifact against its source."""

    yes_equivalence: bool
    family_match: bool
    threshold_tight: bool
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.yes_equivalence and self.family_match and self.threshold_tight

    def failing_checks(self) -> list[str]:
        failing = []
        if not self.yes_equivalence:
            failing.append("yes-equivalence")
        if not self.family_match:
            failing.append("projected-family-equality")
        if not self.threshold_tight:
            failing.append("threshold-tightness")
        return failing


class CertificationError(ValueError):
    def __init__(self, report: ReductionReport):
        super().__init__(
            "reduction artifact failed certification: " + ", ".join(report.failing_checks())
        )
        self.report = report


def check_reduction(
    source: GroundProblem, artifact: ReductionArtifact, cap: int = DEFAULT_CAP
) -> ReductionReport:
    """Certify an artifact by full enumeration of both solution families.

    Three checks: (a) the source has a solution iff the target does, (b) the
    source solutions mapped through the embedding equal the target solutions
    intersected with the embedding image, as set families, and (c) the target
    admits no feasible set strictly better than its threshold.
    """
    if {e.id for e in artifact.source_universe} != {e.id for e in source.universe}:
        raise ValueError("artifact source universe does not match the given source problem")
    src_solutions = solution_set(source, cap)
    target = artifact.target
    image = artifact.image_ids()
    image_mask = target.mask_of(image)

    tgt_solution_masks = target.solution_masks(cap)
    strictly_better = _count_strictly_better(target, cap)

    mapped = frozenset(artifact.map_set(s) for s in src_solutions)
    projected = frozenset(target.ids_of(m & image_mask) for m in tgt_solution_masks)

    yes_eq = bool(src_solutions) == bool(tgt_solution_masks)
    family_match = mapped == projected
    tight = strictly_better == 0
    detail = ""
    if not family_match:
        only_src = canonical_family(mapped - projected)
        only_tgt = canonical_family(projected - mapped)
        detail = f"mapped-only={only_src} projected-only={only_tgt}"
    elif not tight:
        detail = f"{strictly_better} feasible sets strictly better than threshold"
    return ReductionReport(yes_eq, family_match, tight, detail)


def _count_strictly_better(target: GroundProblem, cap: int) -> int:
    if target.sense is Sense.FEASIBILITY:
        return 0
    count = 0
    for m in target.feasible_masks(cap):
        w = target.weight_of_mask(m)
        if target.sense is Sense.MIN and w <= target.threshold - 1:
            count += 1
        elif target.sense is Sense.MAX and w >= target.threshold + 1:
            count += 1
    return count


def identity_reduction(problem: GroundProblem) -> ReductionArtifact:
    """The reduction of a problem to itself with the identity embedding."""
    return ReductionArtifact(
        source_universe=problem.universe,
        target=problem,
        embedding={e.id: e.id for e in problem.universe},
        provenance=({"step": "identity"},),
    )


def explicit_problem(
    universe: Iterable[Element],
    feasible_sets: Iterable[frozenset[str]],
    weights: dict[str, int] | None = None,
    threshold: int = 0,
    sense: Sense = Sense.FEASIBILITY,
    name: str = "explicit",
) -> GroundProblem:
    """A problem given by listing its feasible family outright."""
    elements = tuple(universe)
    family = frozenset(frozenset(s) for s in feasible_sets)
    if weights is None:
        weights = {e.id: 0 for e in elements}
    problem = GroundProblem(
        universe=elements,
        weights=weights,
        threshold=threshold,
        sense=sense,
        feasible=lambda s: frozenset(s) in family,
        name=name,
        cost_bits=0,
    )
    problem.mask_enumerator = lambda: [problem.mask_of(s) for s in family]
    return problem
