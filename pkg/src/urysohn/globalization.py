"""Globalization of partial isometries: budgeted search and exact certificates.

A certificate exhibits a finite superspace F' and a table T assigning to every
partial isometry of F a total isometry of F' that extends it, with T a group
homomorphism on the isometries of every subset K of F.  The search is
best-effort (the existence proof is non-constructive); every returned
certificate is checked by an independent exhaustive verifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Tuple

from .admissibility import katetov_extension, realize
from .core import FiniteMetricSpace, restrict
from .equivariant import equivariant_embed
from .errors import BudgetExceeded, SpaceMismatch
from .isometry import (
    GroupAction,
    Isometry,
    PartialIsometry,
    compose_partial,
    compose_perms,
    identity_perm,
    invert_perm,
    isometry_group,
    partial_isometries,
    preserves_metric,
)


@dataclass(frozen=True)
class GlobalizationCertificate:
    """F, a host F', an isometric embedding, and the extension table T.

    ``table`` pairs each partial isometry (by its sorted mapping tuple) with a
    permutation of the host's indices.
    """

    space: FiniteMetricSpace
    host: FiniteMetricSpace
    embedding: tuple  # index of the image of F-point i in the host
    table: tuple      # ((mapping, host permutation), ...)

    def lookup(self, h: PartialIsometry) -> tuple:
        for mapping, perm in self.table:
            if mapping == h.mapping:
                return perm
        raise KeyError(f"no table entry for {h.mapping}")

    @property
    def added_points(self) -> int:
        return self.host.n - self.space.n


@dataclass(frozen=True)
class CertificateReport:
    valid: bool
    issues: tuple  # human-readable witness strings

    def render(self) -> str:
        if self.valid:
            return "certificate valid"
        return "certificate invalid:\n" + "\n".join(f"  {s}" for s in self.issues)


def _transported_profile(
    space: FiniteMetricSpace, mapping: Dict[int, int], s: int
) -> tuple:
    """Min-plus profile for the image of s under a partial isometry.

    u(w) = min over a in dom of (d(s, a) + d(mapping[a], w)); exact on the
    image of the domain, 1-Lipschitz and admissible everywhere.
    """
    support = sorted(mapping[a] for a in mapping)
    by_image = {mapping[a]: a for a in mapping}
    values = [space.dist[s][by_image[t]] for t in support]
    return katetov_extension(space, support, values)


def extend_partial_to_global(
    space: FiniteMetricSpace, p: PartialIsometry, budget: int
):
    """Close a partial isometry into a total isometry of a superspace.

    Repeatedly takes the smallest point without an image; reuses an existing
    point whose distance profile over the current domain matches exactly, and
    otherwise realizes a fresh point carrying the min-plus transported
    profile.  When no point is missing the map is a bijective isometry.
    """
    if p.space != space:
        raise SpaceMismatch("partial isometry belongs to a different space")
    current = space
    mapping: Dict[int, int] = p.as_dict()
    added = 0
    while True:
        missing = [s for s in range(current.n) if s not in mapping]
        if not missing:
            break
        s = missing[0]
        taken = set(mapping.values())
        hit = next(
            (
                t
                for t in range(current.n)
                if t not in taken
                and all(
                    current.dist[t][mapping[a]] == current.dist[s][a]
                    for a in mapping
                )
            ),
            None,
        )
        if hit is not None:
            mapping[s] = hit
            continue
        if added >= budget:
            raise BudgetExceeded(
                f"partial isometry closure needs more than {budget} added points",
                partial=(current, PartialIsometry.from_dict(current, mapping)),
            )
        if not mapping:
            # Empty map: nothing to transport, the identity closes it.
            mapping[s] = s
            continue
        profile = _transported_profile(current, mapping, s)
        current = realize(current, profile)
        mapping[s] = current.n - 1
        added += 1
    perm = tuple(mapping[i] for i in range(current.n))
    return current, Isometry(current, perm)


def _subset_group(space: FiniteMetricSpace, subset: tuple) -> List[PartialIsometry]:
    """All partial isometries with domain = range = subset, in canonical order."""
    sub = restrict(space, subset)
    out = []
    for g in isometry_group(sub).elements:
        out.append(
            PartialIsometry(
                space, tuple(sorted((subset[i], subset[g[i]]) for i in range(len(subset))))
            )
        )
    return out


def _extends(perm: Sequence[int], h: PartialIsometry, embedding: Sequence[int]) -> bool:
    return all(perm[embedding[s]] == embedding[t] for s, t in h.mapping)


def _hom_search(
    elems: List[PartialIsometry],
    candidates: List[List[tuple]],
    host_n: int,
) -> Optional[List[tuple]]:
    """Assignment phi with phi(g h) = phi(g) phi(h), by DFS with pruning.

    ``candidates[i]`` lists the acceptable host permutations for elems[i].
    The identity element is forced to the host identity.
    """
    k = len(elems)
    index = {e.mapping: i for i, e in enumerate(elems)}
    table = [
        [index[compose_partial(elems[j], elems[i]).mapping] for j in range(k)]
        for i in range(k)
    ]
    assign: List[Optional[tuple]] = [None] * k
    ident = identity_perm(host_n)
    for i, e in enumerate(elems):
        if e.is_identity_on_domain():
            if ident not in candidates[i]:
                return None
            assign[i] = ident

    order = [i for i in range(k) if assign[i] is None]

    def consistent(i: int) -> bool:
        for j in range(k):
            if assign[j] is None:
                continue
            for a, b in ((i, j), (j, i)):
                prod = table[a][b]
                if assign[prod] is not None:
                    if compose_perms(assign[a], assign[b]) != assign[prod]:
                        return False
        return True

    def dfs(pos: int) -> bool:
        if pos == len(order):
            return True
        i = order[pos]
        for cand in candidates[i]:
            assign[i] = cand
            if consistent(i) and dfs(pos + 1):
                return True
            assign[i] = None
        return False

    if not dfs(0):
        return None
    return [a for a in assign]  # type: ignore[return-value]


def _all_subsets(space: FiniteMetricSpace) -> List[tuple]:
    return [
        tuple(c)
        for size in range(1, space.n + 1)
        for c in combinations(range(space.n), size)
    ]


def _feasible(
    space: FiniteMetricSpace,
    host: FiniteMetricSpace,
    embedding: tuple,
    subsets: Sequence[tuple],
    pisos: Sequence[PartialIsometry],
) -> bool:
    """True when the host supports a full certificate over this embedding."""
    iso_host = isometry_group(host)
    for h in pisos:
        if h.mapping and not any(
            _extends(g, h, embedding) for g in iso_host.elements
        ):
            return False
    for subset in subsets:
        elems = _subset_group(space, subset)
        candidates = [
            [g for g in iso_host.elements if _extends(g, e, embedding)] for e in elems
        ]
        if _hom_search(elems, candidates, host.n) is None:
            return False
    return True


def _interleave(
    space: FiniteMetricSpace,
    budget: int,
    subsets: Sequence[tuple],
    pisos: Sequence[PartialIsometry],
):
    """One run of the alternating growth strategy; None when it stalls.

    Alternates equivariant orbit extensions (when some subset's isometry
    group has no homomorphic lift) with partial-isometry closures (when an
    individual map has no global extension).
    """
    host = space
    embedding = tuple(range(space.n))
    added = 0

    for _round in range(len(subsets) + len(pisos) + 4):
        iso_host = isometry_group(host)
        grown = False

        for subset in subsets:
            elems = _subset_group(space, subset)
            candidates = [
                [g for g in iso_host.elements if _extends(g, e, embedding)]
                for e in elems
            ]
            if _hom_search(elems, candidates, host.n) is not None:
                continue
            result = equivariant_embed(
                restrict(space, subset),
                host,
                budget - added,
                embedding=[embedding[i] for i in subset],
            )
            if not result.complete:
                return None
            absorbed = dict(result.absorbed)
            added += result.host_prime.n - host.n
            host = result.host_prime
            embedding = tuple(absorbed[e] for e in embedding)
            grown = True
            break
        if grown:
            continue

        for h in pisos:
            if h.is_total() or not h.mapping:
                continue
            if any(_extends(g, h, embedding) for g in iso_host.elements):
                continue
            lifted = PartialIsometry.from_dict(
                host, {embedding[s]: embedding[t] for s, t in h.mapping}
            )
            before = host.n
            try:
                host, _iso = extend_partial_to_global(host, lifted, budget - added)
            except BudgetExceeded:
                return None
            added += host.n - before
            grown = True
            break
        if grown:
            continue

        return host, embedding
    return None


def _grid_completion(
    space: FiniteMetricSpace,
    budget: int,
    subsets: Sequence[tuple],
    pisos: Sequence[PartialIsometry],
    candidate_cap: int = 200_000,
):
    """Exhaustive fallback: adjoin up to ``budget`` points whose profiles take
    values among the space's own distances, smallest host first.

    The alternating strategy can run away from small cyclic solutions (it
    only ever unrolls orbits); this search cannot miss one when the closing
    distances already occur in the space.
    """
    values = sorted({space.dist[i][j] for i in range(space.n) for j in range(i + 1, space.n)})
    if not values:
        return None
    embedding = tuple(range(space.n))
    spent = 0

    def profiles(current: FiniteMetricSpace):
        out: List[tuple] = []
        prefix: List[Fraction] = []

        def extend(pos: int):
            if pos == current.n:
                out.append(tuple(prefix))
                return
            for v in values:
                ok = all(
                    abs(v - prefix[i]) <= current.dist[i][pos] <= v + prefix[i]
                    for i in range(pos)
                )
                if ok:
                    prefix.append(v)
                    extend(pos + 1)
                    prefix.pop()

        extend(0)
        return out

    def search(current: FiniteMetricSpace, depth: int):
        nonlocal spent
        if spent > candidate_cap:
            return None
        if _feasible(space, current, embedding, subsets, pisos):
            return current
        if depth == 0:
            return None
        for profile in profiles(current):
            spent += 1
            found = search(realize(current, profile), depth - 1)
            if found is not None:
                return found
        return None

    for extra in range(1, budget + 1):
        found = search(space, extra)
        if found is not None:
            return found, embedding
    return None


def globalize(space: FiniteMetricSpace, budget: int) -> GlobalizationCertificate:
    """Search for a host where every partial isometry extends globally.

    Tries the space itself, then the alternating growth strategy, then the
    exhaustive grid completion.  The budget caps total added points; running
    out raises BudgetExceeded with the last candidate attached.
    """
    subsets = _all_subsets(space)
    pisos = partial_isometries(space)
    embedding = tuple(range(space.n))

    if _feasible(space, space, embedding, subsets, pisos):
        return _assemble(space, space, embedding, pisos)

    result = _interleave(space, budget, subsets, pisos)
    if result is not None:
        host, emb = result
        return _assemble(space, host, emb, pisos)

    result = _grid_completion(space, budget, subsets, pisos)
    if result is not None:
        host, emb = result
        return _assemble(space, host, emb, pisos)

    raise BudgetExceeded(
        f"globalization search failed within budget {budget}",
        partial=(space, embedding),
    )


def _assemble(
    space: FiniteMetricSpace,
    host: FiniteMetricSpace,
    embedding: tuple,
    pisos: List[PartialIsometry],
) -> GlobalizationCertificate:
    iso_host = isometry_group(host)
    by_domain: Dict[tuple, List[PartialIsometry]] = {}
    for h in pisos:
        by_domain.setdefault(h.domain, []).append(h)

    table: List[tuple] = []
    assigned: Dict[tuple, tuple] = {}

    for subset in sorted({h.domain for h in pisos if h.domain == h.image}):
        elems = _subset_group(space, subset)
        if not subset:
            assigned[()] = identity_perm(host.n)
            continue
        candidates = [
            [g for g in iso_host.elements if _extends(g, e, embedding)] for e in elems
        ]
        phi = _hom_search(elems, candidates, host.n)
        assert phi is not None, "search ended on a pass that should have grown"
        for e, g in zip(elems, phi):
            assigned[e.mapping] = g

    for h in pisos:
        if h.mapping in assigned:
            table.append((h.mapping, assigned[h.mapping]))
            continue
        ext = next(g for g in iso_host.elements if _extends(g, h, embedding))
        table.append((h.mapping, ext))

    return GlobalizationCertificate(
        space=space, host=host, embedding=embedding, table=tuple(table)
    )


def verify_certificate(cert: GlobalizationCertificate) -> CertificateReport:
    """Exhaustive independent check of the three certificate conditions.

    Enumerates the partial isometries of F from scratch (subsets times
    injections, filtered by distance preservation) rather than trusting the
    search's own lists.
    """
    F, H = cert.space, cert.host
    emb = cert.embedding
    issues: List[str] = []
    entries = dict(cert.table)

    if len(emb) != F.n or len(set(emb)) != len(emb):
        issues.append(f"embedding {emb} is not injective on {F.n} points")
        return CertificateReport(False, tuple(issues))
    for i in range(F.n):
        for j in range(F.n):
            if F.dist[i][j] != H.dist[emb[i]][emb[j]]:
                issues.append(
                    f"embedding distorts ({i}, {j}): "
                    f"{F.dist[i][j]} vs {H.dist[emb[i]][emb[j]]}"
                )

    # Independent enumeration of every partial isometry of F.
    all_partial: List[tuple] = [()]
    for size in range(1, F.n + 1):
        for dom in combinations(range(F.n), size):
            for img in permutations(range(F.n), size):
                if all(
                    F.dist[dom[a]][dom[b]] == F.dist[img[a]][img[b]]
                    for a in range(size)
                    for b in range(size)
                ):
                    all_partial.append(tuple(sorted(zip(dom, img))))

    for mapping in all_partial:
        if mapping not in entries:
            issues.append(f"missing table entry for {mapping}")
            continue
        perm = entries[mapping]
        if sorted(perm) != list(range(H.n)):
            issues.append(f"T{mapping} is not a permutation of the host")
            continue
        if not preserves_metric(H, perm):
            issues.append(f"T{mapping} does not preserve the host metric")
        for s, t in mapping:
            if perm[emb[s]] != emb[t]:
                issues.append(
                    f"extension fails for h={mapping} at x={s}: "
                    f"T(h)(I({s})) != I({t})"
                )

    # Homomorphism on the isometries of every subset K.
    group_maps: Dict[tuple, List[tuple]] = {}
    for mapping in all_partial:
        dom = tuple(s for s, _ in mapping)
        img = tuple(sorted(t for _, t in mapping))
        if dom == img:
            group_maps.setdefault(dom, []).append(mapping)
    for K, elems in group_maps.items():
        for m1 in elems:
            for m2 in elems:
                d1, d2 = dict(m1), dict(m2)
                prod = tuple(sorted((s, d1[d2[s]]) for s in d2))
                if m1 not in entries or m2 not in entries or prod not in entries:
                    continue
                if compose_perms(entries[m1], entries[m2]) != entries[prod]:
                    issues.append(
                        f"equivariance fails on K={K}: T(g1 g2) != T(g1) T(g2) "
                        f"for g1={m1}, g2={m2}"
                    )

    return CertificateReport(valid=not issues, issues=tuple(issues))


@dataclass(frozen=True)
class TowerStage:
    """One stage of the locally finite tower.

    ``inclusion`` maps the previous stage's point indices into this space and
    ``group_embedding`` pairs each previous group element with its image here;
    both are None on the first stage.
    """

    space: FiniteMetricSpace
    group: GroupAction
    inclusion: Optional[tuple]
    group_embedding: Optional[tuple]  # ((previous element, image element), ...)


def verify_tower(stages: Sequence[TowerStage]) -> CertificateReport:
    """Check inclusions are isometric and group embeddings are injective
    homomorphisms compatible with the actions."""
    issues: List[str] = []
    for k in range(1, len(stages)):
        prev, cur = stages[k - 1], stages[k]
        inc = cur.inclusion
        if inc is None or len(inc) != prev.space.n:
            issues.append(f"stage {k}: missing or ill-sized inclusion")
            continue
        for i in range(prev.space.n):
            for j in range(prev.space.n):
                if prev.space.dist[i][j] != cur.space.dist[inc[i]][inc[j]]:
                    issues.append(f"stage {k}: inclusion distorts ({i}, {j})")
        ge = dict(cur.group_embedding or ())
        if len(ge) != prev.group.order or len(set(ge.values())) != len(ge):
            issues.append(f"stage {k}: group embedding not injective or incomplete")
            continue
        for g in prev.group.elements:
            img = ge[g]
            if not cur.group.contains(img):
                issues.append(f"stage {k}: image of {g} not in the stage group")
                continue
            for i in range(prev.space.n):
                if img[inc[i]] != inc[g[i]]:
                    issues.append(f"stage {k}: embedding of {g} incompatible at {i}")
                    break
        for g in prev.group.elements:
            for h in prev.group.elements:
                if ge[compose_perms(g, h)] != compose_perms(ge[g], ge[h]):
                    issues.append(f"stage {k}: embedding not a homomorphism at ({g}, {h})")
    return CertificateReport(valid=not issues, issues=tuple(issues))


def locally_finite_tower(
    ambient: FiniteMetricSpace, stages: int, budget: int
) -> List[TowerStage]:
    """Build F_1 inside F_2 inside ... with locally finite isometry groups.

    The ambient space supplies the scheduled points: stage k adjoins the k-th
    ambient point (exact distances to already-placed ambient images, min-plus
    elsewhere) and globalizes.  Each stage's group is the full isometry group
    of the stage space; the certificate's table embeds the previous group.
    """
    if stages < 1 or ambient.n < stages:
        raise ValueError(f"need 1 <= stages <= {ambient.n}, got {stages}")
    added_total = 0
    tower: List[TowerStage] = []
    current = restrict(ambient, (0,))
    placed = {0: 0}  # ambient index -> index in current
    tower.append(
        TowerStage(
            space=current,
            group=isometry_group(current),
            inclusion=None,
            group_embedding=None,
        )
    )
    for k in range(1, stages):
        support = sorted(placed)
        profile = katetov_extension(
            current,
            [placed[a] for a in support],
            [ambient.dist[k][a] for a in support],
        )
        with_point = realize(current, profile)
        new_index = with_point.n - 1
        try:
            cert = globalize(with_point, budget - added_total)
        except BudgetExceeded as exc:
            exc.partial = tower
            raise
        added_total += cert.host.n - current.n - 1
        prev_group = tower[-1].group
        prev_space = current
        current = cert.host
        inclusion = tuple(cert.embedding[i] for i in range(prev_space.n))
        placed = {a: cert.embedding[placed[a]] for a in placed}
        placed[k] = cert.embedding[new_index]
        group = isometry_group(current)
        K = tuple(range(prev_space.n))
        ge = []
        for g in prev_group.elements:
            h = PartialIsometry(
                with_point, tuple(sorted((i, g[i]) for i in range(prev_space.n)))
            )
            ge.append((g, cert.lookup(h)))
        tower.append(
            TowerStage(
                space=current,
                group=group,
                inclusion=inclusion,
                group_embedding=tuple(ge),
            )
        )
    return tower
