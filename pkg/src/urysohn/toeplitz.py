"""Shift-invariant (Toeplitz) distance matrices and the billiard chain.

A Toeplitz metric is a finite prefix of phi: Z+ -> Q+ inducing the matrix
M[i][j] = phi[|i - j|].  New columns can only be appended one phi value at a
time, so two admissible vectors over an n-point prefix are connected by a
chain of admissible vectors, each shifted one coordinate from the last; the
chain's first coordinates are exactly the phi values to append.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .admissibility import enumerate_admissible
from .core import FiniteMetricSpace, format_rational, rational
from .errors import (
    ChainConstructionFailure,
    NotAdmissible,
    ParameterError,
    ShapeError,
)


@dataclass(frozen=True)
class ToeplitzMetric:
    """Prefix of phi; phi[d] (1-based gap d) is the distance between points d
    apart.  Implicitly phi(0) = 0."""

    phi: tuple  # Fractions, phi[0] is the gap-1 distance

    def __post_init__(self):
        vals = tuple(rational(v) for v in self.phi)
        object.__setattr__(self, "phi", vals)
        for g, v in enumerate(vals, start=1):
            if v <= 0:
                raise ValueError(f"phi({g}) = {v} must be positive")
            if g == 1:
                continue
            lo, hi = _phi_interval(vals[: g - 1])
            if not (lo <= v <= hi):
                raise ValueError(
                    f"phi({g}) = {v} outside the metric interval "
                    f"[{format_rational(lo)}, {format_rational(hi)}]"
                )

    @property
    def order(self) -> int:
        """Number of points of the induced matrix: one more than the prefix."""
        return len(self.phi) + 1

    def gap(self, d: int) -> Fraction:
        if d == 0:
            return Fraction(0)
        return self.phi[d - 1]

    def induced_space(self, size: Optional[int] = None) -> FiniteMetricSpace:
        if size is None:
            size = self.order
        if size > self.order:
            raise ParameterError(f"only {self.order} points available, asked for {size}")
        rows = tuple(
            tuple(self.gap(abs(i - j)) for j in range(size)) for i in range(size)
        )
        return FiniteMetricSpace(points=tuple(f"z{i}" for i in range(size)), dist=rows)

    def is_subadditive(self) -> bool:
        m = len(self.phi)
        return all(
            self.gap(d + e) <= self.gap(d) + self.gap(e)
            for d in range(1, m)
            for e in range(1, m - d + 1)
        )


def _phi_interval(phi: Sequence[Fraction]) -> Tuple[Fraction, Fraction]:
    """Exact interval of values that keep the prefix a metric when appended.

    Appending phi(g) closes triangles with gap pairs (d, g - d); the interval
    is always nonempty (its upper end is the min-plus extension value).
    """
    g = len(phi) + 1
    lo = Fraction(0)
    hi = None
    for d in range(1, g):
        a, b = phi[d - 1], phi[g - d - 1]
        lo = max(lo, abs(a - b))
        hi = a + b if hi is None else min(hi, a + b)
    if hi is None:
        hi = lo  # unconstrained first value; callers treat g == 1 separately
    return lo, hi


def phi_append_interval(tm_phi: Sequence[Fraction]) -> Tuple[Fraction, Optional[Fraction]]:
    """Public form of the append interval; (0, None) for the first value."""
    if not tm_phi:
        return Fraction(0), None
    return _phi_interval(list(tm_phi))


def adm_membership(tm: ToeplitzMetric, vector: Sequence) -> bool:
    """Membership in Adm(M) for the induced matrix of full order.

    |v_i - v_j| <= r_{i-j} <= v_i + v_j for all pairs, all entries positive.
    """
    n = tm.order
    if len(vector) != n:
        raise ShapeError(f"vector length {len(vector)} != order {n}")
    v = [rational(a) for a in vector]
    if any(a <= 0 for a in v):
        return False
    for i in range(n):
        for j in range(i + 1, n):
            r = tm.gap(j - i)
            if abs(v[i] - v[j]) > r or r > v[i] + v[j]:
                return False
    return True


@dataclass(frozen=True)
class BilliardChain:
    """Chain of admissible vectors connecting x to y with exact shifts.

    Consecutive vectors satisfy next[i] = prev[i-1] for i = 1..n-1, so the
    sequence of first coordinates is exactly the run of phi values that
    splices y's realization onto x's.
    """

    matrix: ToeplitzMetric
    vectors: tuple

    def verify(self) -> bool:
        n = self.matrix.order
        vecs = self.vectors
        if not vecs:
            return False
        for v in vecs:
            if not adm_membership(self.matrix, v):
                return False
        for prev, nxt in zip(vecs, vecs[1:]):
            if any(nxt[i] != prev[i - 1] for i in range(1, n)):
                return False
        return True


def _clamp(pref: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    return min(max(pref, lo), hi)


def _window_interval(tm: ToeplitzMetric, seq: Sequence[Fraction]) -> Tuple[Fraction, Fraction]:
    """Admissible interval for the next sequence value, looking back at most
    order-1 positions.  Nonempty whenever every current window is admissible
    (the min-plus value always fits)."""
    n = tm.order
    lo = Fraction(0)
    hi = None
    for d in range(1, min(n, len(seq) + 1)):
        w = seq[-d]
        r = tm.gap(d)
        lo = max(lo, w - r, r - w)
        hi = w + r if hi is None else min(hi, w + r)
    if hi is None:
        raise ChainConstructionFailure("empty window")
    if lo > hi:
        raise ChainConstructionFailure(f"inadmissible window {tuple(seq[-(n - 1):])}")
    return lo, hi


def _window_fits(tm: ToeplitzMetric, seq: Sequence[Fraction], v: Fraction) -> bool:
    lo, hi = _window_interval(tm, seq)
    return v > 0 and lo <= v <= hi


def _simulate_window(tm: ToeplitzMetric, seq: Sequence[Fraction], plan: Sequence[Fraction]) -> bool:
    work = list(seq)
    for v in plan:
        if not _window_fits(tm, work, v):
            return False
        work.append(v)
    return True


def _ladder_two(tm: ToeplitzMetric, x: tuple, y: tuple) -> List[Fraction]:
    """Appended first coordinates for the order-2 case.

    Ladders the running value along the grid anchored at the entry level
    t* = max(y_2, r - y_2), one step of r at a time, bouncing off the
    admissibility wall (value -> r - value) when the sum constraint blocks the
    lowest rung.  The entry level is exactly the smallest value after which
    (y_2, y_1) can always follow.
    """
    r = tm.gap(1)
    w, y1, y2 = x[0], y[0], y[1]
    t_star = max(y2, r - y2)
    appends: List[Fraction] = []

    def rungs_down(top_exclusive: Fraction) -> List[Fraction]:
        k = math.ceil((top_exclusive - t_star) / r) - 1
        return [t_star + j * r for j in range(k, -1, -1)]

    def rungs_up(bottom_exclusive: Fraction) -> List[Fraction]:
        k = math.ceil((t_star - bottom_exclusive) / r) - 1
        return [t_star - j * r for j in range(k, -1, -1)]

    if w > t_star:
        appends.extend(rungs_down(w))
    elif w < t_star:
        up = rungs_up(w)
        if up[0] + w < r:
            # Sum-blocked at the bottom: bounce off the wall first.
            b = r - w
            appends.append(b)
            if b < t_star:
                appends.extend(rungs_up(b))
            elif b > t_star:
                appends.append(t_star)
        else:
            appends.extend(up)
    if t_star != y2:
        appends.append(y2)
    appends.append(y1)
    return appends


def _plateau_level(tm: ToeplitzMetric, x: tuple, y: tuple) -> Fraction:
    coords = list(x) + list(y)
    mid = (max(coords) + min(coords)) / 2
    return max(max(tm.phi), mid)


def _climb_to_plateau(tm: ToeplitzMetric, seq: List[Fraction], level: Fraction, cap: int) -> None:
    """Append clamp(level, window interval) until the trailing window is flat.

    With level >= max phi the appended value's deviation from the level drops
    by at least min phi per window length, so this terminates; the cap is a
    defect detector, not part of the algorithm.
    """
    n = tm.order
    steps = 0
    while not all(v == level for v in seq[-(n - 1):]) or len(seq) < n - 1:
        lo, hi = _window_interval(tm, seq)
        v = _clamp(level, lo, hi)
        if v <= 0:
            v = hi
        seq.append(v)
        steps += 1
        if steps > cap:
            raise ChainConstructionFailure("plateau climb exceeded its step bound")


def ladder_bound(tm: ToeplitzMetric, x: Sequence, y: Sequence) -> int:
    """Upper bound on the number of vectors billiard_chain may emit."""
    n = tm.order
    x = tuple(rational(v) for v in x)
    y = tuple(rational(v) for v in y)
    if n == 1:
        return 2
    if n == 2:
        delta = abs(x[0] - y[1])
        return n + n * (1 + math.ceil(delta / tm.gap(1)))
    rmin = min(tm.phi)
    level = _plateau_level(tm, x, y)
    dev = max(abs(c - level) for c in x + y)
    return n + 2 * (n - 1) * (1 + math.ceil(dev / rmin))


def billiard_chain(tm: ToeplitzMetric, x: Sequence, y: Sequence) -> BilliardChain:
    """Connect two admissible vectors by a chain of one-coordinate shifts.

    The direct splice (append y reversed) is used when admissible; otherwise
    order 2 ladders along the r-grid with at most one bounce, and order >= 3
    walks both endpoints to a common constant window at the plateau level and
    glues the two walks there.  The chain length never exceeds ladder_bound.
    """
    n = tm.order
    x = tuple(rational(v) for v in x)
    y = tuple(rational(v) for v in y)
    if not adm_membership(tm, x):
        raise NotAdmissible("start vector not admissible")
    if not adm_membership(tm, y):
        raise NotAdmissible("end vector not admissible")
    if x == y:
        return BilliardChain(matrix=tm, vectors=(x,))

    seq: List[Fraction] = list(reversed(x))
    plan = list(reversed(y))
    if n == 1 or _simulate_window(tm, seq, plan):
        seq.extend(plan)
    elif n == 2:
        seq.extend(_ladder_two(tm, x, y))
    else:
        level = _plateau_level(tm, x, y)
        rmin = min(tm.phi)
        dev = max(abs(c - level) for c in x + y)
        cap = (n - 1) * (math.ceil(dev / rmin) + 2) + n
        _climb_to_plateau(tm, seq, level, cap)
        back: List[Fraction] = list(y)
        _climb_to_plateau(tm, back, level, cap)
        # The backward walk read forward is a valid suffix; its leading
        # plateau merges with the forward walk's trailing one.
        seq.extend(list(reversed(back))[n - 1:])

    vectors = tuple(
        tuple(seq[t + n - 1 - i] for i in range(n)) for t in range(len(seq) - n + 1)
    )
    chain = BilliardChain(matrix=tm, vectors=vectors)
    assert chain.vectors[0] == x and chain.vectors[-1] == y
    if not chain.verify():
        raise ChainConstructionFailure("constructed chain fails verification")
    return chain


# ---------------------------------------------------------------------------
# Incremental construction of universal Toeplitz prefixes.


@dataclass(frozen=True)
class ToeplitzExtraction:
    ok: bool
    metric: Optional[ToeplitzMetric]
    witness: Optional[tuple]  # two index pairs whose entries disagree


def phi_of(space: FiniteMetricSpace) -> ToeplitzExtraction:
    """Extract phi when the matrix depends only on |i - j|.

    Failure is a return value, not an exception: the witness names the first
    two index pairs with equal gap but different entries.
    """
    n = space.n
    phi: List[Fraction] = []
    for d in range(1, n):
        ref = space.dist[0][d]
        for i in range(n - d):
            if space.dist[i][i + d] != ref:
                return ToeplitzExtraction(False, None, ((0, d), (i, i + d)))
        phi.append(ref)
    return ToeplitzExtraction(True, ToeplitzMetric(tuple(phi)), None)


def _full_interval(phi: Sequence[Fraction]) -> Tuple[Fraction, Optional[Fraction]]:
    if not phi:
        return Fraction(0), None
    return _phi_interval(list(phi))


def _full_clamp(pref: Fraction, phi: Sequence[Fraction]) -> Fraction:
    lo, hi = _full_interval(phi)
    if hi is None:
        return pref if pref > 0 else Fraction(1)
    v = _clamp(pref, lo, hi)
    if v <= 0:
        v = hi
    return v


def _simulate_full(phi: Sequence[Fraction], plan: Sequence[Fraction]) -> bool:
    work = list(phi)
    for v in plan:
        lo, hi = _full_interval(work)
        if v <= 0 or (hi is not None and not (lo <= v <= hi)):
            return False
        work.append(v)
    return True


def _segment_realized(phi: Sequence[Fraction], n: int, y: Sequence[Fraction]) -> bool:
    """True when some column c >= n already carries profile y over the first
    n points, i.e. phi[c-n:c] == (y_n, ..., y_1)."""
    rev = tuple(reversed(y))
    for c in range(n, len(phi) + 1):
        if tuple(phi[c - n : c]) == rev:
            return True
    return False


def _splice_target(phi: List[Fraction], n: int, y: Sequence[Fraction], step_cap: int) -> bool:
    """Append phi values until the profile y is realized by the newest column.

    Appending must respect triangle constraints at every gap, not just inside
    the order-n window, so the walk is greedy: step the next value toward the
    plan head, clamped into the full metric interval, until the whole plan
    simulates cleanly.
    """
    plan = list(reversed(tuple(y)))  # y_n, ..., y_1
    steps = 0
    stall = 0
    while steps <= step_cap:
        if _simulate_full(phi, plan):
            phi.extend(plan)
            return True
        v = _full_clamp(plan[0], phi)
        if phi and v == phi[-1]:
            stall += 1
            if stall > 2 * n + 4:
                return False
        else:
            stall = 0
        phi.append(v)
        steps += 1
    return False


@dataclass(frozen=True)
class ToeplitzBuildResult:
    metric: ToeplitzMetric
    complete: bool
    stages_completed: int
    unrealized: tuple  # targets given up on (only when incomplete)


def build_toeplitz_universal(
    stages: Sequence,
    mode: str = "deterministic",
    seed: int = 0,
    budget: Optional[int] = None,
    always_insert: bool = False,
) -> ToeplitzBuildResult:
    """Grow phi so every staged admissible vector is realized by a column.

    Stages are (n, D, B) as in the general builder.  Targets come from the
    staged enumeration over the induced n-point prefix; intermediate columns
    are inserted only when the direct splice is inadmissible, unless
    ``always_insert`` forces a one-column plateau before every target (for
    comparison runs).
    """
    if mode not in ("deterministic", "random"):
        raise ParameterError(f"unknown mode: {mode}")
    rng = random.Random(seed) if mode == "random" else None
    phi: List[Fraction] = []
    stages_completed = 0
    unrealized: List[tuple] = []
    total_cap = budget if budget is not None else 10_000

    for n, D, B in stages:
        if n < 1 or D < 1 or rational(B) <= 0:
            raise ParameterError(f"bad stage {(n, D, B)}")
        # Seed the prefix so the n-point window and its gaps exist.
        while len(phi) < n - 1:
            phi.append(_full_clamp(Fraction(1), phi))
        prefix = ToeplitzMetric(tuple(phi[: n - 1])).induced_space(n)
        targets = enumerate_admissible(prefix, D, B)
        if rng is not None:
            targets = list(targets)
            rng.shuffle(targets)
        for y in targets:
            if _segment_realized(phi, n, y):
                continue
            if len(phi) >= total_cap:
                unrealized.append(y)
                continue
            if always_insert and phi:
                phi.append(_full_clamp(phi[-1], phi))
            cap = 40 + 20 * n + len(phi)
            if not _splice_target(phi, n, y, cap):
                unrealized.append(y)
        if unrealized:
            return ToeplitzBuildResult(
                ToeplitzMetric(tuple(phi)), False, stages_completed, tuple(unrealized)
            )
        stages_completed += 1
    return ToeplitzBuildResult(ToeplitzMetric(tuple(phi)), True, stages_completed, ())
