"""Inductive construction of finite rational Urysohn prefixes.

Growth is staged: each stage (n, D, B) enumerates every admissible vector over
the first n points with entries on the (D, B) grid and realizes each one that
is not already carried exactly by a later column.  Vectors over a prefix are
extended to the whole current space by the min-plus (Katetov) rule, so earlier
entries are never touched: the input matrix is always a leading principal
submatrix of the output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .admissibility import enumerate_admissible, katetov_extension, realize
from .core import FiniteMetricSpace, rational, restrict
from .errors import ParameterError


@dataclass(frozen=True)
class GrowthSchedule:
    """Staged growth plan: list of (n, D, B) triples plus mode and budget.

    Bounds must be non-decreasing stage to stage; the step budget caps the
    total number of realized points.
    """

    stages: tuple                      # ((n, D, B), ...)
    mode: str = "deterministic"        # or "random"
    seed: int = 0
    budget: Optional[int] = None

    def __post_init__(self):
        if self.mode not in ("deterministic", "random"):
            raise ParameterError(f"unknown growth mode: {self.mode}")
        norm = []
        prev = None
        for stage in self.stages:
            n, D, B = stage
            if n < 0 or D < 1:
                raise ParameterError(f"bad stage {stage}")
            B = rational(B)
            if B <= 0:
                raise ParameterError(f"bad stage {stage}")
            if prev is not None and (n < prev[0] or D < prev[1] or B < prev[2]):
                raise ParameterError("stage bounds must be non-decreasing")
            prev = (n, D, B)
            norm.append((n, D, B))
        object.__setattr__(self, "stages", tuple(norm))


@dataclass(frozen=True)
class GrowthResult:
    space: FiniteMetricSpace
    complete: bool
    stages_completed: int
    realized: int


def _already_realized(space: FiniteMetricSpace, n: int, vec: tuple) -> bool:
    """True when some column k > n carries exactly this profile over the
    first n points."""
    return any(space.profile(k, range(n)) == vec for k in range(n, space.n))


def _bootstrap_vector(space: FiniteMetricSpace, D: int, B) -> Optional[tuple]:
    """Lexicographically first admissible vector over the whole current space,
    used to seed points when a stage's n exceeds the current size."""
    vectors = enumerate_admissible(space, D, B)
    return vectors[0] if vectors else None


def grow(space: FiniteMetricSpace, schedule: GrowthSchedule) -> GrowthResult:
    """Run the staged construction on top of an existing prefix."""
    current = space
    rng = random.Random(schedule.seed) if schedule.mode == "random" else None
    budget = schedule.budget
    realized = 0
    stages_completed = 0

    def spend() -> bool:
        nonlocal realized
        if budget is not None and realized >= budget:
            return False
        realized += 1
        return True

    for n, D, B in schedule.stages:
        # Seed points until the stage prefix exists.
        while current.n < n:
            vec = _bootstrap_vector(current, D, B)
            if vec is None:
                return GrowthResult(current, False, stages_completed, realized)
            if not spend():
                return GrowthResult(current, False, stages_completed, realized)
            current = realize(current, vec)

        prefix = restrict(current, range(n))
        candidates = enumerate_admissible(prefix, D, B)
        if rng is not None:
            # Sampling without replacement: a seeded shuffle of the same
            # finite candidate set, so audits can still complete.
            candidates = list(candidates)
            rng.shuffle(candidates)
        for vec in candidates:
            if current.n > n and _already_realized(current, n, vec):
                continue
            if current.n == 0 and not vec:
                # Realizing the empty vector creates the first point.
                if not spend():
                    return GrowthResult(current, False, stages_completed, realized)
                current = realize(current, vec)
                continue
            if not spend():
                return GrowthResult(current, False, stages_completed, realized)
            full = katetov_extension(current, range(n), vec) if n > 0 else vec
            current = realize(current, full)
        stages_completed += 1
    return GrowthResult(current, True, stages_completed, realized)


def build_rational_urysohn(
    stages: Sequence,
    mode: str = "deterministic",
    seed: int = 0,
    budget: Optional[int] = None,
) -> GrowthResult:
    """Grow a universal rational prefix from the empty space.

    After a completed stage (n, D, B) the output passes the exact
    universality audit for those bounds at full depth.
    """
    schedule = GrowthSchedule(stages=tuple(stages), mode=mode, seed=seed, budget=budget)
    return grow(FiniteMetricSpace.empty(), schedule)
