"""Admissible vectors (Katetov functions) over finite rational metric spaces.

An admissible vector over a space is a candidate distance profile for a
prospective new point: strictly positive entries a_i with
|a_i - a_j| <= d(i, j) <= a_i + a_j for all pairs.  Realizing one glues the
new point on; enumeration and the universality audit make the inductive
Urysohn construction finite and checkable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import FiniteMetricSpace, rational, restrict
from .errors import NotAdmissible, ParameterError, ShapeError


@dataclass(frozen=True)
class AdmissibleVector:
    base: FiniteMetricSpace
    values: tuple  # one Fraction per base point

    def __post_init__(self):
        ok, pair, which = check_admissible(self.base, self.values)
        if not ok:
            raise NotAdmissible(
                f"vector {self.values} not admissible ({which} at {pair})",
                pair=pair,
                which=which,
            )


def check_admissible(space: FiniteMetricSpace, values: Sequence) -> Tuple[bool, Optional[tuple], Optional[str]]:
    """Core admissibility test; returns (ok, violating pair, which inequality).

    "positivity" pairs are reported as (i, i).
    """
    if len(values) != space.n:
        raise ShapeError(
            f"vector length {len(values)} does not match point count {space.n}"
        )
    vals = [rational(v) for v in values]
    for i, v in enumerate(vals):
        if v <= 0:
            return False, (i, i), "positivity"
    for i in range(space.n):
        for j in range(i + 1, space.n):
            gap = space.dist[i][j]
            if abs(vals[i] - vals[j]) > gap:
                return False, (i, j), "lipschitz"
            if gap > vals[i] + vals[j]:
                return False, (i, j), "sum"
    return True, None, None


def is_admissible(space: FiniteMetricSpace, values: Sequence):
    """Public form of the admissibility test: (bool, violating pair or None)."""
    ok, pair, which = check_admissible(space, values)
    return ok, pair, which


def realize(space: FiniteMetricSpace, vector, label: Optional[str] = None) -> FiniteMetricSpace:
    """Glue one new point whose distance to base point i is values[i].

    The new point is appended last; deterministic ordering keeps builders
    reproducible.  Raises NotAdmissible (with the violating pair) otherwise.
    """
    values = vector.values if isinstance(vector, AdmissibleVector) else tuple(rational(v) for v in vector)
    ok, pair, which = check_admissible(space, values)
    if not ok:
        raise NotAdmissible(
            f"cannot realize inadmissible vector ({which} at {pair})", pair=pair, which=which
        )
    if label is None:
        label = space.fresh_label()
    return space.with_point(label, values)


def enumerate_admissible(
    space: FiniteMetricSpace, denominator_bound: int, value_bound
) -> List[tuple]:
    """All admissible vectors with entries k/D (1 <= k <= B*D), k integer.

    Entries are positive rationals with denominator dividing D, at most B.
    Output is in lexicographic order and fully deterministic.  Backtracks
    with exact interval pruning, so only consistent prefixes are explored.
    """
    D = denominator_bound
    B = rational(value_bound)
    if D < 1:
        raise ParameterError(f"denominator bound must be >= 1, got {D}")
    if B <= 0:
        raise ParameterError(f"value bound must be positive, got {B}")
    n = space.n
    max_k = (B * D).__floor__()
    if max_k < 1:
        return [()] if n == 0 else []

    results: List[tuple] = []
    prefix: List[Fraction] = []

    def extend(pos: int):
        if pos == n:
            results.append(tuple(prefix))
            return
        lo = Fraction(1, D)
        hi = Fraction(max_k, D)
        for i, v in enumerate(prefix):
            gap = space.dist[i][pos]
            lo = max(lo, v - gap, gap - v)
            hi = min(hi, v + gap)
        if lo > hi:
            return
        k_lo = (lo * D).__ceil__()
        k_hi = (hi * D).__floor__()
        for k in range(k_lo, k_hi + 1):
            prefix.append(Fraction(k, D))
            extend(pos + 1)
            prefix.pop()

    extend(0)
    return results


@dataclass(frozen=True)
class UniversalityAuditReport:
    n: int
    denominator_bound: int
    value_bound: Fraction
    depth: int
    passed: bool
    unrealized: tuple  # admissible vectors with no exact realizing column

    def render(self) -> str:
        head = (
            f"universality audit n={self.n} D={self.denominator_bound} "
            f"B={self.value_bound} N={self.depth}: "
        )
        if self.passed:
            return head + "passed"
        return head + f"failed ({len(self.unrealized)} unrealized vectors)"


def universality_audit(
    space: FiniteMetricSpace, n: int, denominator_bound: int, value_bound, depth: int
) -> UniversalityAuditReport:
    """Exact (epsilon = 0) universality check over the first n points.

    Every admissible vector over the first n points with entries on the
    (D, B) grid must be realized exactly by some column k with n < k <= N.
    """
    if not (0 <= n <= depth <= space.n):
        raise ParameterError(
            f"need 0 <= n <= N <= point count, got n={n}, N={depth}, count={space.n}"
        )
    prefix = restrict(space, range(n))
    vectors = enumerate_admissible(prefix, denominator_bound, value_bound)
    unrealized = []
    for vec in vectors:
        realized = any(
            space.profile(k, range(n)) == vec for k in range(n, depth)
        )
        if not realized:
            unrealized.append(vec)
    return UniversalityAuditReport(
        n=n,
        denominator_bound=denominator_bound,
        value_bound=rational(value_bound),
        depth=depth,
        passed=not unrealized,
        unrealized=tuple(unrealized),
    )


def katetov_extension(space: FiniteMetricSpace, support: Sequence[int], values: Sequence) -> tuple:
    """Largest 1-Lipschitz extension of a partial admissible profile.

    Given exact distances on the support points, fills the rest by the
    shortest-path (min-plus) rule u(t) = min_s (values[s] + d(s, t)).  The
    result is admissible over the whole space and agrees with the input on
    the support.
    """
    vals = {s: rational(v) for s, v in zip(support, values)}
    if not vals:
        raise ParameterError("katetov extension needs a nonempty support")
    out = []
    for t in range(space.n):
        if t in vals:
            out.append(vals[t])
        else:
            out.append(min(vals[s] + space.dist[s][t] for s in vals))
    return tuple(out)


def hk_embed(space: FiniteMetricSpace, base_index: int) -> List[tuple]:
    """Sup-norm embedding x -> (d(x, f) - d(x0, f))_f.

    The Chebyshev distance between any two image vectors equals the original
    distance, exactly.
    """
    if not (0 <= base_index < space.n):
        raise IndexError(f"base index {base_index} out of range")
    base_row = space.dist[base_index]
    return [
        tuple(space.dist[x][f] - base_row[f] for f in range(space.n))
        for x in range(space.n)
    ]


def chebyshev(u: Sequence, v: Sequence) -> Fraction:
    """Sup-norm (max coordinate gap) distance between two rational vectors."""
    if len(u) != len(v):
        raise ShapeError("vectors of different length")
    if not u:
        return Fraction(0)
    return max(abs(a - b) for a, b in zip(u, v))
