"""Equivariant one-point extensions: grow a space by the group orbit of an
admissible vector so the group still acts by isometries.

Given a group G of isometries of F and an admissible vector a, the extension
adds one new point per distinct vector in the G-orbit of a.  New-to-old
distances transport a along the group; new-to-new distances are the Chebyshev
(sup-norm) gap between the orbit vectors.  That choice is canonical here even
though it is not the only consistent one: the sup-norm triangle inequality and
its invariance under coordinate permutation are what make the verification of
the output a finite, exact check.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .admissibility import AdmissibleVector, chebyshev, check_admissible, katetov_extension
from .core import FiniteMetricSpace, validate_metric
from .errors import DegenerateVector, NotAdmissible, NotIsometryGroup, ShapeError
from .isometry import GroupAction, invert_perm, isometry_group, stabilizer


def key_inequality_check(space: FiniteMetricSpace, values: Sequence, g: Sequence[int]):
    """Exact check of max_f |a_f - a_{gf}| <= min_f (a_f + a_{gf}).

    Returns (holds, left side, right side, argmax index, argmin index).  This
    is the inequality that makes the orbit-extension distances well defined.
    """
    vals = tuple(values.values) if isinstance(values, AdmissibleVector) else tuple(values)
    g = tuple(g)
    if len(vals) != space.n or len(g) != space.n:
        raise ShapeError("vector or permutation length does not match the space")
    if space.n == 0:
        return True, Fraction(0), Fraction(0), None, None
    diffs = [abs(vals[f] - vals[g[f]]) for f in range(space.n)]
    sums = [vals[f] + vals[g[f]] for f in range(space.n)]
    left = max(diffs)
    right = min(sums)
    return left <= right, left, right, diffs.index(left), sums.index(right)


@dataclass(frozen=True)
class OrbitExtension:
    base: FiniteMetricSpace
    group: GroupAction
    seed_vector: tuple
    extension: FiniteMetricSpace
    coset_map: tuple       # (new point index in extension, coset representative perm)
    extended_action: GroupAction


def orbit_extension(
    space: FiniteMetricSpace,
    group: GroupAction,
    values: Sequence,
    labels: Optional[Sequence[str]] = None,
    allow_twin: bool = False,
) -> OrbitExtension:
    """Extend (space, group) by the G-orbit of one admissible vector.

    One new point per right coset of the stabilizer; the first new point
    carries the seed vector itself.  The returned action restricts to the
    original one on the base and permutes the new points as G permutes the
    orbit vectors.
    """
    if group.space != space:
        raise NotIsometryGroup("group does not act on the given space")
    vals = tuple(values.values) if isinstance(values, AdmissibleVector) else tuple(values)
    ok, pair, which = check_admissible(space, vals)
    if not ok:
        raise NotAdmissible(f"seed vector not admissible ({which} at {pair})", pair, which)
    if not allow_twin:
        # A vector matching an existing point's profile everywhere off that
        # point would glue on an indistinguishable twin; reject by default.
        for p in range(space.n):
            if all(space.dist[p][f] == vals[f] for f in range(space.n) if f != p):
                raise DegenerateVector(
                    f"seed vector duplicates the distance profile of point {p}"
                )

    n = space.n
    # Orbit vectors in canonical element order; identity is first, so the
    # seed vector leads and dist(x0, f) = a_f exactly.
    orbit: List[tuple] = []
    reps: List[tuple] = []
    seen = set()
    for g in group.elements:
        ginv = invert_perm(g)
        w = tuple(vals[ginv[f]] for f in range(n))
        if w not in seen:
            seen.add(w)
            orbit.append(w)
            reps.append(g)

    stab = stabilizer(group, vals)
    assert len(orbit) * stab.order == group.order

    if labels is None:
        labels = []
        taken = set(space.points)
        k = 0
        while len(labels) < len(orbit):
            cand = f"x{k}"
            if cand not in taken:
                labels.append(cand)
                taken.add(cand)
            k += 1
    elif len(labels) != len(orbit):
        raise ShapeError(f"need {len(orbit)} labels, got {len(labels)}")

    total = n + len(orbit)
    rows = [[Fraction(0)] * total for _ in range(total)]
    for i in range(n):
        for j in range(n):
            rows[i][j] = space.dist[i][j]
    for t, w in enumerate(orbit):
        for f in range(n):
            rows[f][n + t] = w[f]
            rows[n + t][f] = w[f]
    for t in range(len(orbit)):
        for u in range(t + 1, len(orbit)):
            d = chebyshev(orbit[t], orbit[u])
            assert d > 0, "distinct cosets must give distinct orbit vectors"
            rows[n + t][n + u] = d
            rows[n + u][n + t] = d

    report = validate_metric(rows)
    if not report.valid:
        raise AssertionError(
            "orbit extension produced a non-metric, which the key inequality "
            "should rule out:\n" + report.render()
        )
    extension = FiniteMetricSpace(
        points=space.points + tuple(labels), dist=tuple(tuple(r) for r in rows)
    )

    orbit_index = {w: t for t, w in enumerate(orbit)}
    extended = []
    for g in group.elements:
        ginv = invert_perm(g)
        perm = list(g) + [0] * len(orbit)
        for t, w in enumerate(orbit):
            moved = tuple(w[ginv[f]] for f in range(n))
            perm[n + t] = n + orbit_index[moved]
        extended.append(tuple(perm))
    extended_action = GroupAction.from_perms(extension, extended)
    assert extended_action.order == group.order

    return OrbitExtension(
        base=space,
        group=group,
        seed_vector=vals,
        extension=extension,
        coset_map=tuple((n + t, reps[t]) for t in range(len(orbit))),
        extended_action=extended_action,
    )


@dataclass(frozen=True)
class EquivariantEmbedding:
    """Result of extending the ISO(F)-action over a host space.

    ``host_prime`` contains the image of F (at ``embedding`` indices) and is a
    finite union of orbits of the embedded group.  ``absorbed`` maps each
    covered host index to its image in host_prime.  ``complete`` is False when
    the point budget ran out before all host points were covered.
    """

    space: FiniteMetricSpace          # F itself
    host_prime: FiniteMetricSpace
    embedding: tuple                  # index of image of F-point i in host_prime
    action: GroupAction               # ISO(F) acting on host_prime
    absorbed: tuple                   # (host index, host_prime index) pairs
    complete: bool


def find_isometric_embedding(
    small: FiniteMetricSpace, big: FiniteMetricSpace
) -> Optional[tuple]:
    """First isometric embedding of `small` into `big` in lexicographic order,
    or None.  The identity prefix is found first when it works."""
    image: List[int] = []

    def extend(i: int):
        if i == small.n:
            return True
        for j in range(big.n):
            if j in image:
                continue
            if all(small.dist[i][k] == big.dist[j][image[k]] for k in range(i)):
                image.append(j)
                if extend(i + 1):
                    return True
                image.pop()
        return False

    if extend(0):
        return tuple(image)
    return None


def equivariant_embed(
    space: FiniteMetricSpace,
    host: FiniteMetricSpace,
    new_point_budget: int,
    embedding: Optional[Sequence[int]] = None,
) -> EquivariantEmbedding:
    """Extend the action of ISO(space) over a host containing the space.

    Host points are absorbed in index order: each uncovered point contributes
    its exact distance profile over the already-absorbed host image, extended
    to the rest of the current space by the min-plus (Katetov) rule, and the
    whole orbit of that profile is glued on at once.  Host points whose
    profile is already carried by an existing point are skipped.
    """
    if new_point_budget < 0:
        raise ValueError("budget must be >= 0")
    if embedding is None:
        embedding = find_isometric_embedding(space, host)
        if embedding is None:
            raise ValueError("space does not embed isometrically in host")
    embedding = tuple(embedding)

    group = isometry_group(space)
    current = space
    action = group
    # F-point i of `space` sits at index i of `current`; host index -> current index.
    absorbed = {embedding[i]: i for i in range(space.n)}
    added = 0
    complete = True

    for h in range(host.n):
        if h in absorbed:
            continue
        known = sorted(absorbed)
        # Exact distances to absorbed host points; min-plus elsewhere.
        support = [absorbed[k] for k in known]
        support_vals = [host.dist[h][k] for k in known]
        profile = katetov_extension(current, support, support_vals)
        hit = next(
            (
                s for s in range(current.n)
                if all(current.dist[s][support[i]] == support_vals[i] for i in range(len(support)))
                and s not in absorbed.values()
            ),
            None,
        )
        if hit is not None:
            absorbed[h] = hit
            continue
        ext = orbit_extension(current, action, profile, allow_twin=True)
        orbit_size = ext.extension.n - current.n
        if added + orbit_size > new_point_budget:
            complete = False
            break
        added += orbit_size
        current = ext.extension
        action = ext.extended_action
        absorbed[h] = ext.coset_map[0][0]

    f_embedding = tuple(range(space.n))
    return EquivariantEmbedding(
        space=space,
        host_prime=current,
        embedding=f_embedding,
        action=action,
        absorbed=tuple(sorted(absorbed.items())),
        complete=complete,
    )
