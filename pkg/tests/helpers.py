"""Shared test utilities: random space generation and brute-force oracles."""

import random
from fractions import Fraction
from itertools import combinations, permutations

from urysohn import FiniteMetricSpace, enumerate_admissible, realize


def random_space(rng: random.Random, max_points: int = 6, max_den: int = 4,
                 max_bound: int = 3) -> FiniteMetricSpace:
    """Random rational space grown by realizing random admissible vectors.

    All distances have denominator dividing a random D <= max_den and are
    bounded by a random B <= max_bound, so every space is exact and small.
    Each new coordinate is sampled from its exact feasibility interval
    against the coordinates already chosen, so realization never fails.
    """
    target = rng.randint(1, max_points)
    D = rng.randint(1, max_den)
    B = rng.randint(1, max_bound)
    space = realize(FiniteMetricSpace.empty(), ())
    while space.n < target:
        vec = []
        for j in range(space.n):
            lo = Fraction(1, D)
            hi = Fraction(B)
            for i, v in enumerate(vec):
                gap = space.dist[i][j]
                lo = max(lo, v - gap, gap - v)
                hi = min(hi, v + gap)
            # All bounds are multiples of 1/D, so the interval has grid points.
            vec.append(Fraction(rng.randint(int(lo * D), int(hi * D)), D))
        space = realize(space, tuple(vec))
    return space


def brute_force_isometries(space: FiniteMetricSpace):
    """Every total permutation preserving all distances, by direct check."""
    out = []
    for perm in permutations(range(space.n)):
        if all(
            space.dist[perm[i]][perm[j]] == space.dist[i][j]
            for i in range(space.n)
            for j in range(space.n)
        ):
            out.append(perm)
    return sorted(out)


def brute_force_partial_isometries(space: FiniteMetricSpace):
    """Every distance-preserving partial injection, as sorted mapping tuples."""
    out = []
    idx = range(space.n)
    for k in range(space.n + 1):
        for dom in combinations(idx, k):
            for img in permutations(idx, k):
                if all(
                    space.dist[dom[a]][dom[b]] == space.dist[img[a]][img[b]]
                    for a in range(k)
                    for b in range(k)
                ):
                    out.append(tuple(sorted(zip(dom, img))))
    return sorted(out)


def _random_in_interval(rng: random.Random, lo, hi, max_den: int):
    """Random positive rational with small denominator inside [lo, hi].

    ``hi`` may be None (unbounded above).  Falls back to an exact endpoint
    when no grid point of the chosen denominator fits.
    """
    den = rng.randint(1, max_den)
    k_lo = max(1, -((-lo * den) // 1)) if lo > 0 else 1
    k_lo = int(k_lo)
    if hi is None:
        k_hi = k_lo + rng.randint(0, 2 * den)
    else:
        k_hi = int((hi * den) // 1)
    if k_lo > k_hi:
        return hi if hi is not None and hi > 0 else lo
    return Fraction(rng.randint(k_lo, k_hi), den)


def random_toeplitz(rng: random.Random, max_order: int = 4, max_den: int = 4):
    """Random Toeplitz prefix of order <= max_order with small denominators."""
    from urysohn import ToeplitzMetric, phi_append_interval

    order = rng.randint(1, max_order)
    phi = []
    for _ in range(order - 1):
        lo, hi = phi_append_interval(phi)
        phi.append(_random_in_interval(rng, lo, hi, max_den))
    return ToeplitzMetric(tuple(phi))


def random_toeplitz_admissible(rng: random.Random, tm, max_den: int = 4):
    """Random member of Adm for the induced matrix, sampled coordinate-wise.

    Each coordinate is drawn from its exact feasibility interval against the
    coordinates already chosen, so the result is always admissible and mixes
    denominators freely.
    """
    n = tm.order
    vec = []
    for j in range(n):
        lo = Fraction(0)
        hi = None
        for i, v in enumerate(vec):
            r = tm.gap(j - i)
            lo = max(lo, v - r, r - v)
            hi = v + r if hi is None else min(hi, v + r)
        vec.append(_random_in_interval(rng, lo, hi, max_den))
    return tuple(vec)


def random_admissible_vector(rng: random.Random, space: FiniteMetricSpace,
                             max_den: int = 4, max_bound: int = 3):
    """One uniformly chosen vector from a full grid enumeration, or None."""
    D = rng.randint(1, max_den)
    B = rng.randint(1, max_bound)
    vectors = enumerate_admissible(space, D, B)
    if not vectors:
        return None
    return vectors[rng.randrange(len(vectors))]
