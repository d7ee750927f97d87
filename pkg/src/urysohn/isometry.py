"""Isometry groups, partial isometries (an inverse semigroup), cosets, Hall stages.

Groups are stored as explicit element lists with a composition table; every
space in scope is tiny, so no generating-set machinery is used.  Element order
is canonical (permutations sorted lexicographically by image tuple), which
makes transversals and reports reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .core import FiniteMetricSpace
from .errors import NotIsometryGroup, NotSubgroup, ParameterError, SpaceMismatch


def compose_perms(g: Sequence[int], h: Sequence[int]) -> tuple:
    """(g . h)(i) = g[h[i]] — h first, then g."""
    return tuple(g[h[i]] for i in range(len(h)))


def invert_perm(g: Sequence[int]) -> tuple:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def identity_perm(n: int) -> tuple:
    return tuple(range(n))


@dataclass(frozen=True)
class Isometry:
    """A total distance-preserving permutation of a space's point indices."""

    space: FiniteMetricSpace
    perm: tuple

    def __post_init__(self):
        n = self.space.n
        if sorted(self.perm) != list(range(n)):
            raise ValueError(f"not a permutation of {n} indices: {self.perm}")
        if not preserves_metric(self.space, self.perm):
            raise NotIsometryGroup(f"permutation {self.perm} does not preserve the metric")

    def __call__(self, i: int) -> int:
        return self.perm[i]

    def compose(self, other: "Isometry") -> "Isometry":
        if self.space is not other.space and self.space != other.space:
            raise SpaceMismatch("isometries over different spaces")
        return Isometry(self.space, compose_perms(self.perm, other.perm))

    def inverse(self) -> "Isometry":
        return Isometry(self.space, invert_perm(self.perm))


def preserves_metric(space: FiniteMetricSpace, perm: Sequence[int]) -> bool:
    n = space.n
    for i in range(n):
        for j in range(i + 1, n):
            if space.dist[i][j] != space.dist[perm[i]][perm[j]]:
                return False
    return True


@dataclass(frozen=True)
class PartialIsometry:
    """A distance-preserving partial injection on point indices.

    ``mapping`` is a tuple of (source, image) pairs sorted by source.  The
    empty mapping is the zero of the inverse semigroup PISO(F); the identity
    map is its unit.
    """

    space: FiniteMetricSpace
    mapping: tuple

    def __post_init__(self):
        srcs = [s for s, _ in self.mapping]
        imgs = [t for _, t in self.mapping]
        if sorted(set(srcs)) != sorted(srcs) or len(set(imgs)) != len(imgs):
            raise ValueError("mapping is not a partial injection")
        if list(self.mapping) != sorted(self.mapping):
            raise ValueError("mapping pairs must be sorted by source")
        m = dict(self.mapping)
        for a in m:
            for b in m:
                if self.space.dist[a][b] != self.space.dist[m[a]][m[b]]:
                    raise ValueError(
                        f"map does not preserve distance on pair ({a}, {b})"
                    )

    @classmethod
    def from_dict(cls, space: FiniteMetricSpace, m: Dict[int, int]) -> "PartialIsometry":
        return cls(space, tuple(sorted(m.items())))

    @property
    def domain(self) -> tuple:
        return tuple(s for s, _ in self.mapping)

    @property
    def image(self) -> tuple:
        return tuple(sorted(t for _, t in self.mapping))

    def as_dict(self) -> Dict[int, int]:
        return dict(self.mapping)

    def __call__(self, i: int) -> int:
        return dict(self.mapping)[i]

    def is_total(self) -> bool:
        return len(self.mapping) == self.space.n

    def is_identity_on_domain(self) -> bool:
        return all(s == t for s, t in self.mapping)


def compose_partial(p: PartialIsometry, q: PartialIsometry) -> PartialIsometry:
    """q after p, restricted to {x : p(x) in dom(q)}.

    With inverse_partial this satisfies the inverse-semigroup laws; the empty
    map is the absorbing zero.
    """
    if p.space != q.space:
        raise SpaceMismatch("partial isometries over different spaces")
    pm, qm = p.as_dict(), q.as_dict()
    out = {x: qm[pm[x]] for x in pm if pm[x] in qm}
    return PartialIsometry.from_dict(p.space, out)


def inverse_partial(p: PartialIsometry) -> PartialIsometry:
    return PartialIsometry.from_dict(p.space, {t: s for s, t in p.mapping})


@dataclass(frozen=True)
class GroupAction:
    """A finite group of isometries acting on a space, closed under the table.

    ``elements`` is canonically ordered (lexicographic by permutation tuple),
    so the identity is always first.
    """

    space: FiniteMetricSpace
    elements: tuple  # of permutation tuples

    def __post_init__(self):
        perms = list(self.elements)
        if perms != sorted(perms):
            raise ValueError("elements must be in canonical (sorted) order")
        if len(set(perms)) != len(perms):
            raise ValueError("duplicate group elements")
        index = {g: k for k, g in enumerate(perms)}
        if identity_perm(self.space.n) not in index:
            raise NotIsometryGroup("identity missing from element set")
        for g in perms:
            if not preserves_metric(self.space, g):
                raise NotIsometryGroup(f"element {g} does not preserve the metric")
            if invert_perm(g) not in index:
                raise NotIsometryGroup(f"inverse of {g} missing")
            for h in perms:
                if compose_perms(g, h) not in index:
                    raise NotIsometryGroup(f"product of {g} and {h} missing")

    @classmethod
    def from_perms(cls, space: FiniteMetricSpace, perms) -> "GroupAction":
        return cls(space, tuple(sorted(set(map(tuple, perms)))))

    @classmethod
    def trivial(cls, space: FiniteMetricSpace) -> "GroupAction":
        return cls(space, (identity_perm(space.n),))

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> tuple:
        return identity_perm(self.space.n)

    def table(self) -> tuple:
        """Composition table over element indices (row g, column h -> g.h)."""
        index = {g: k for k, g in enumerate(self.elements)}
        return tuple(
            tuple(index[compose_perms(g, h)] for h in self.elements)
            for g in self.elements
        )

    def contains(self, perm: Sequence[int]) -> bool:
        return tuple(perm) in set(self.elements)


def isometry_group(space: FiniteMetricSpace) -> GroupAction:
    """All distance-preserving permutations, by profile-compatible backtracking.

    Equals brute force over all permutations (the test suite checks this
    oracle equivalence on small spaces).
    """
    n = space.n
    found: List[tuple] = []
    image: List[int] = []
    used = [False] * n

    def extend(i: int):
        if i == n:
            found.append(tuple(image))
            return
        for j in range(n):
            if used[j]:
                continue
            if all(space.dist[i][k] == space.dist[j][image[k]] for k in range(i)):
                used[j] = True
                image.append(j)
                extend(i + 1)
                image.pop()
                used[j] = False

    extend(0)
    return GroupAction.from_perms(space, found)


def partial_isometries(space: FiniteMetricSpace) -> List[PartialIsometry]:
    """Every partial isometry, including the empty one, in deterministic order.

    Order: domain size ascending, then domain lexicographic, then image tuple
    lexicographic.
    """
    n = space.n
    out: List[PartialIsometry] = [PartialIsometry(space, ())]
    for size in range(1, n + 1):
        for dom in combinations(range(n), size):
            image: List[int] = []
            used = [False] * n

            def extend(i: int):
                if i == size:
                    out.append(
                        PartialIsometry(space, tuple(zip(dom, image)))
                    )
                    return
                for j in range(n):
                    if used[j]:
                        continue
                    if all(
                        space.dist[dom[i]][dom[k]] == space.dist[j][image[k]]
                        for k in range(i)
                    ):
                        used[j] = True
                        image.append(j)
                        extend(i + 1)
                        image.pop()
                        used[j] = False

            extend(0)
    return out


def stabilizer(group: GroupAction, values: Sequence) -> GroupAction:
    """Subgroup fixing an admissible vector: {h : a[h(f)] == a[f] for all f}."""
    vals = tuple(values.values) if hasattr(values, "values") and not callable(values.values) else tuple(values)
    if len(vals) != group.space.n:
        raise SpaceMismatch("vector length does not match the acted-on space")
    sub = [
        g for g in group.elements
        if all(vals[g[f]] == vals[f] for f in range(group.space.n))
    ]
    return GroupAction.from_perms(group.space, sub)


def cosets(group: GroupAction, subgroup: GroupAction) -> List[tuple]:
    """Deterministic transversal of the right cosets (subgroup . g).

    |transversal| * |subgroup| = |group|; the identity represents the
    subgroup itself and comes first.
    """
    if group.space != subgroup.space:
        raise SpaceMismatch("group and subgroup act on different spaces")
    members = set(group.elements)
    for s in subgroup.elements:
        if s not in members:
            raise NotSubgroup(f"element {s} not in the ambient group")
    reps: List[tuple] = []
    seen = set()
    for g in group.elements:
        if g in seen:
            continue
        reps.append(g)
        for s in subgroup.elements:
            seen.add(compose_perms(s, g))
    assert len(reps) * subgroup.order == group.order
    return reps


@dataclass(frozen=True)
class HallStage:
    """The left-regular embedding S_n -> S_{n!}.

    ``source_elements`` lists S_n in canonical order; ``embed`` sends g to the
    permutation of those n! elements given by left multiplication by g.
    """

    n: int
    source_elements: tuple = field(repr=False)

    @property
    def target_degree(self) -> int:
        return math.factorial(self.n)

    def embed(self, g: Sequence[int]) -> tuple:
        g = tuple(g)
        if sorted(g) != list(range(self.n)):
            raise ParameterError(f"not an element of S_{self.n}: {g}")
        index = {e: k for k, e in enumerate(self.source_elements)}
        return tuple(index[compose_perms(g, e)] for e in self.source_elements)

    def verify_homomorphism(self) -> bool:
        """Exhaustive check: injective, and embed(g.h) == embed(g).embed(h)."""
        images = {}
        for g in self.source_elements:
            images[g] = self.embed(g)
        if len(set(images.values())) != len(images):
            return False
        for g in self.source_elements:
            for h in self.source_elements:
                if images[compose_perms(g, h)] != compose_perms(images[g], images[h]):
                    return False
        return True


def hall_stage(n: int) -> HallStage:
    """Stage S_n -> S_{n!} of the Hall-group inductive limit; n >= 3 only."""
    if n < 3:
        raise ParameterError(f"Hall stages start at n = 3, got {n}")
    elements = tuple(sorted(permutations(range(n))))
    return HallStage(n=n, source_elements=elements)


def hall_embed(g: Sequence[int], stages: int = 1) -> tuple:
    """Image of g under `stages` successive Hall embeddings.

    Materializes element lists only up to degree 720 (S_3 -> S_6 -> S_720 is
    the practical ceiling); beyond that raises ParameterError rather than
    attempting a factorial-sized list.
    """
    g = tuple(g)
    n = len(g)
    for _ in range(stages):
        if n < 3:
            raise ParameterError(f"Hall stages start at n = 3, got degree {n}")
        if math.factorial(n) > math.factorial(6):
            raise ParameterError(
                f"refusing to materialize S_{n} element list (degree {math.factorial(n)})"
            )
        stage = hall_stage(n)
        g = stage.embed(g)
        n = len(g)
    return g
